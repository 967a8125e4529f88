"""Latent Dirichlet allocation fitted by collapsed Gibbs sampling.

Per-token topic assignments are resampled from the collapsed conditional

    P(z_i = t | z_-i, w)  ∝  (n_dt + α) · (n_tw + β) / (n_t + V·β)

where the counts exclude the token being resampled. Point estimates of the
topic-term matrix (phi) and document-topic matrix (theta) are averaged over
post-burn-in sweeps.

Reproducibility: one PCG64 stream per fit, seeded from the config. The
initial assignment consumes one bounded-integer draw per token and every
sweep consumes one uniform per token, both in canonical token order
(documents by ordinal, term ordinals ascending within a document, repeated
occurrences consecutive). Same inputs and seed give bit-identical models.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from numba import njit

from .jsonio import write_canonical_json
from .vectorize import DocTermMatrix

DEFAULT_TOPICS = 5


class EmptyCorpusError(Exception):
    """The document-term matrix holds no tokens."""


@dataclass(frozen=True)
class LdaConfig:
    k: int = DEFAULT_TOPICS
    alpha: float = 0.1
    beta: float = 0.01
    sweeps: int = 1000
    burn_in: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be > 0")
        if not 0 < self.burn_in < self.sweeps:
            raise ValueError("need 0 < burn_in < sweeps")


@dataclass
class LdaState:
    """Mutable sampler state: assignments plus redundant count tables.

    Token layout arrays (`token_doc`, `token_word`) fix the canonical order
    in which tokens are visited and are immutable for a given matrix.
    """

    token_doc: np.ndarray   # int32, doc ordinal per token
    token_word: np.ndarray  # int32, term ordinal per token
    z: np.ndarray           # int32, current topic per token
    n_dt: np.ndarray        # int64, D x K
    n_tw: np.ndarray        # int64, K x V
    n_t: np.ndarray         # int64, K
    n_d: np.ndarray         # int64, D

    @property
    def n_tokens(self) -> int:
        return self.z.shape[0]

    def check_consistent(self) -> None:
        """Assert the count tables agree with the assignments."""
        k, v = self.n_tw.shape
        d = self.n_dt.shape[0]
        n_dt = np.zeros((d, k), dtype=np.int64)
        n_tw = np.zeros((k, v), dtype=np.int64)
        np.add.at(n_dt, (self.token_doc, self.z), 1)
        np.add.at(n_tw, (self.z, self.token_word), 1)
        if not (
            np.array_equal(n_dt, self.n_dt)
            and np.array_equal(n_tw, self.n_tw)
            and np.array_equal(self.n_tw.sum(axis=1), self.n_t)
            and np.array_equal(self.n_dt.sum(axis=1), self.n_d)
            and self.n_t.sum() == self.n_tokens
        ):
            raise AssertionError("sampler count tables inconsistent with assignments")


@dataclass
class LdaModel:
    """Fitted model: averaged phi/theta plus the final sampler state.

    `token_topic_totals` is the post-burn-in mean of the per-topic token
    counts, consistent with the averaged phi/theta (its entries still sum
    to the corpus token count).
    """

    config: LdaConfig
    phi: np.ndarray    # K x V, rows sum to 1
    theta: np.ndarray  # D x K, rows sum to 1
    token_topic_totals: np.ndarray  # K
    ll_trace: list[float] = field(default_factory=list)
    final_state: LdaState | None = None

    @property
    def n_topics(self) -> int:
        return self.phi.shape[0]

    @property
    def n_terms(self) -> int:
        return self.phi.shape[1]

    @property
    def n_docs(self) -> int:
        return self.theta.shape[0]


def _token_layout(dtm: DocTermMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Expand the sparse matrix into flat token arrays in canonical order."""
    docs: list[int] = []
    words: list[int] = []
    for (d, w), c in sorted(dtm.entries.items()):
        docs.extend([d] * c)
        words.extend([w] * c)
    return (
        np.asarray(docs, dtype=np.int32),
        np.asarray(words, dtype=np.int32),
    )


def init_assignments(dtm: DocTermMatrix, cfg: LdaConfig, rng: np.random.Generator) -> LdaState:
    """Assign every token a uniform random topic and build the count tables."""
    token_doc, token_word = _token_layout(dtm)
    n = token_doc.shape[0]
    if n == 0:
        raise EmptyCorpusError("document-term matrix holds no tokens")
    z = rng.integers(0, cfg.k, size=n, dtype=np.int32)
    n_dt = np.zeros((dtm.n_docs, cfg.k), dtype=np.int64)
    n_tw = np.zeros((cfg.k, dtm.n_terms), dtype=np.int64)
    np.add.at(n_dt, (token_doc, z), 1)
    np.add.at(n_tw, (z, token_word), 1)
    return LdaState(
        token_doc=token_doc,
        token_word=token_word,
        z=z,
        n_dt=n_dt,
        n_tw=n_tw,
        n_t=n_tw.sum(axis=1),
        n_d=n_dt.sum(axis=1),
    )


@njit(cache=True)
def _sweep_kernel(token_doc, token_word, z, n_dt, n_tw, n_t, alpha, beta, uniforms):
    k, v = n_tw.shape
    v_beta = v * beta
    weights = np.empty(k, dtype=np.float64)
    for i in range(token_doc.shape[0]):
        d = token_doc[i]
        w = token_word[i]
        old = z[i]
        n_dt[d, old] -= 1
        n_tw[old, w] -= 1
        n_t[old] -= 1
        total = 0.0
        for t in range(k):
            wt = (n_dt[d, t] + alpha) * (n_tw[t, w] + beta) / (n_t[t] + v_beta)
            weights[t] = wt
            total += wt
        target = uniforms[i] * total
        acc = 0.0
        new = k - 1
        for t in range(k):
            acc += weights[t]
            if target < acc:
                new = t
                break
        z[i] = new
        n_dt[d, new] += 1
        n_tw[new, w] += 1
        n_t[new] += 1


def gibbs_sweep(state: LdaState, cfg: LdaConfig, rng: np.random.Generator) -> LdaState:
    """Resample every token once, in canonical token order, in place."""
    uniforms = rng.random(state.n_tokens)
    _sweep_kernel(
        state.token_doc, state.token_word, state.z,
        state.n_dt, state.n_tw, state.n_t,
        cfg.alpha, cfg.beta, uniforms,
    )
    return state


def conditional_distribution(state: LdaState, cfg: LdaConfig, token_index: int) -> np.ndarray:
    """Collapsed conditional P(z_i = t | z_-i, w) for one token (diagnostic)."""
    d = int(state.token_doc[token_index])
    w = int(state.token_word[token_index])
    old = int(state.z[token_index])
    n_dt = state.n_dt[d].astype(np.float64).copy()
    n_tw = state.n_tw[:, w].astype(np.float64).copy()
    n_t = state.n_t.astype(np.float64).copy()
    n_dt[old] -= 1
    n_tw[old] -= 1
    n_t[old] -= 1
    v = state.n_tw.shape[1]
    weights = (n_dt + cfg.alpha) * (n_tw + cfg.beta) / (n_t + v * cfg.beta)
    return weights / weights.sum()


def _point_estimates(state: LdaState, cfg: LdaConfig) -> tuple[np.ndarray, np.ndarray]:
    v = state.n_tw.shape[1]
    phi = (state.n_tw + cfg.beta) / (state.n_t[:, None] + v * cfg.beta)
    theta = (state.n_dt + cfg.alpha) / (state.n_d[:, None] + cfg.k * cfg.alpha)
    return phi, theta


def _corpus_log_likelihood(
    phi: np.ndarray, theta: np.ndarray, dtm: DocTermMatrix
) -> float:
    # fixed summation order keeps the value bit-stable regardless of how
    # the entries dict was populated
    items = sorted(dtm.entries.items())
    nnz = len(items)
    docs = np.fromiter((d for (d, _), _ in items), dtype=np.int64, count=nnz)
    words = np.fromiter((w for (_, w), _ in items), dtype=np.int64, count=nnz)
    counts = np.fromiter((c for _, c in items), dtype=np.float64, count=nnz)
    token_probs = np.einsum("ek,ek->e", theta[docs], phi[:, words].T)
    return float(np.dot(counts, np.log(token_probs)))


def fit(dtm: DocTermMatrix, cfg: LdaConfig) -> LdaModel:
    """Run the Gibbs sampler and average post-burn-in point estimates."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    state = init_assignments(dtm, cfg, rng)
    phi_acc = np.zeros((cfg.k, dtm.n_terms))
    theta_acc = np.zeros((dtm.n_docs, cfg.k))
    totals_acc = np.zeros(cfg.k)
    kept = 0
    ll_trace: list[float] = []
    for sweep in range(cfg.sweeps):
        gibbs_sweep(state, cfg, rng)
        phi_hat, theta_hat = _point_estimates(state, cfg)
        ll_trace.append(_corpus_log_likelihood(phi_hat, theta_hat, dtm))
        if sweep >= cfg.burn_in:
            phi_acc += phi_hat
            theta_acc += theta_hat
            totals_acc += state.n_t
            kept += 1
    state.check_consistent()
    return LdaModel(
        config=cfg,
        phi=phi_acc / kept,
        theta=theta_acc / kept,
        token_topic_totals=totals_acc / kept,
        ll_trace=ll_trace,
        final_state=state,
    )


def log_likelihood(model: LdaModel, dtm: DocTermMatrix) -> float:
    """Corpus log-likelihood in nats under the model's averaged estimates."""
    if model.n_docs != dtm.n_docs or model.n_terms != dtm.n_terms:
        raise ValueError(
            f"model is {model.n_docs}x{model.n_terms}, "
            f"matrix is {dtm.n_docs}x{dtm.n_terms}"
        )
    return _corpus_log_likelihood(model.phi, model.theta, dtm)


def model_to_dict(model: LdaModel) -> dict[str, Any]:
    cfg = model.config
    return {
        "config": {
            "k": cfg.k, "alpha": cfg.alpha, "beta": cfg.beta,
            "sweeps": cfg.sweeps, "burn_in": cfg.burn_in, "seed": cfg.seed,
        },
        "phi": [[float(x) for x in row] for row in model.phi],
        "theta": [[float(x) for x in row] for row in model.theta],
        "token_topic_totals": [float(x) for x in model.token_topic_totals],
        "log_likelihood_trace": [float(x) for x in model.ll_trace],
    }


def write_model_json(model: LdaModel, path: Path | str) -> Path:
    return write_canonical_json(model_to_dict(model), path)


def model_from_dict(obj: dict[str, Any]) -> LdaModel:
    """Rebuild a model from its JSON form (without sampler state)."""
    cfg = LdaConfig(**obj["config"])
    return LdaModel(
        config=cfg,
        phi=np.asarray(obj["phi"], dtype=np.float64),
        theta=np.asarray(obj["theta"], dtype=np.float64),
        token_topic_totals=np.asarray(obj["token_topic_totals"], dtype=np.float64),
        ll_trace=[float(x) for x in obj["log_likelihood_trace"]],
        final_state=None,
    )
