"""Every quantity the interactive topic report displays.

Topic proportions, term saliency, lambda-blended relevance rankings,
conditional topic distributions, frequency bars, Jensen-Shannon intertopic
distances, and the classical-MDS 2D layout. Natural logarithms throughout;
0·ln 0 is taken as 0 so the pure formulas also accept unsmoothed inputs.
"""

from __future__ import annotations

import numpy as np

from .lda import LdaModel

LN2 = float(np.log(2.0))


def topic_proportions(model: LdaModel) -> np.ndarray:
    """Share of corpus tokens per topic, from the final assignment totals."""
    totals = np.asarray(model.token_topic_totals, dtype=np.float64)
    return totals / totals.sum()


def term_marginals(model: LdaModel) -> np.ndarray:
    """Marginal term probabilities p_w = sum_t phi_tw * P(t)."""
    return topic_proportions(model) @ model.phi


def term_topic_conditional(model: LdaModel, term: int) -> np.ndarray:
    """P(t | term): how a term's probability mass splits across topics."""
    joint = model.phi[:, term] * topic_proportions(model)
    return joint / joint.sum()


def _xlogx_ratio(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise p * ln(p / q) with the 0 * ln 0 := 0 convention."""
    out = np.zeros_like(p, dtype=np.float64)
    mask = p > 0
    out[mask] = p[mask] * np.log(p[mask] / q[mask])
    return out


def saliency(model: LdaModel) -> np.ndarray:
    """Global term importance: p_w times KL(P(t|w) || P(t)), per term."""
    p_t = topic_proportions(model)
    joint = model.phi * p_t[:, None]          # K x V, entries phi_tw * P(t)
    p_w = joint.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = np.where(p_w > 0, joint / p_w, 0.0)  # P(t|w) per column
    distinct = _xlogx_ratio(cond, np.broadcast_to(p_t[:, None], cond.shape)).sum(axis=0)
    return p_w * distinct


def relevance(model: LdaModel, lam: float) -> np.ndarray:
    """K x V relevance scores: lam * ln(phi) + (1 - lam) * ln(phi / p_w)."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    p_w = term_marginals(model)
    with np.errstate(divide="ignore"):
        log_phi = np.log(model.phi)
        log_lift = np.log(model.phi / p_w)
    # at the endpoints one side has weight 0; taking it exactly avoids
    # 0 * (-inf) when a phi entry is an explicit zero
    if lam == 0.0:
        return log_lift
    if lam == 1.0:
        return log_phi
    return lam * log_phi + (1.0 - lam) * log_lift


def top_terms(
    model: LdaModel, topic: int, lam: float, limit: int = 30
) -> list[tuple[int, float]]:
    """Highest-relevance term ordinals for one topic, ties by ordinal."""
    scores = relevance(model, lam)[topic]
    order = np.lexsort((np.arange(scores.shape[0]), -scores))
    return [(int(w), float(scores[w])) for w in order[:limit]]


def jensen_shannon(p: np.ndarray, q: np.ndarray) -> float:
    """JSD between two distributions, natural log; symmetric, in [0, ln 2]."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    m = 0.5 * (p + q)
    return float(0.5 * _xlogx_ratio(p, m).sum() + 0.5 * _xlogx_ratio(q, m).sum())


def intertopic_distances(model: LdaModel) -> np.ndarray:
    """Symmetric K x K matrix of pairwise JSD between topic-term rows."""
    k = model.n_topics
    dist = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            dist[i, j] = dist[j, i] = jensen_shannon(model.phi[i], model.phi[j])
    return dist


def jacobi_eigh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvalues descending and
    eigenvectors in the corresponding columns.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-10):
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    m = a.copy()
    vecs = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(m, -1) ** 2))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(m[p, q]) <= tol * 1e-3:
                    continue
                # rotation angle zeroing m[p, q]
                theta = 0.5 * np.arctan2(2.0 * m[p, q], m[q, q] - m[p, p])
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                m = rot.T @ m @ rot
                vecs = vecs @ rot
    values = np.diag(m).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], vecs[:, order]


def mds_layout(dist: np.ndarray) -> np.ndarray:
    """Classical multidimensional scaling of a distance matrix into 2D.

    Double-centers the squared distances, takes the two leading
    eigenpairs (negative eigenvalues clamped to zero), and fixes each
    axis sign so its largest-magnitude coordinate is positive.
    """
    dist = np.asarray(dist, dtype=np.float64)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise ValueError("distance matrix must be square")
    if not np.allclose(dist, dist.T, atol=1e-10):
        raise ValueError("distance matrix must be symmetric")
    n = dist.shape[0]
    if n == 1:
        return np.zeros((1, 2))
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ (dist ** 2) @ j
    values, vectors = jacobi_eigh(b)
    coords = np.zeros((n, 2))
    for axis in range(min(2, n)):
        scale = np.sqrt(max(values[axis], 0.0))
        coords[:, axis] = vectors[:, axis] * scale
    coords -= coords.mean(axis=0)
    for axis in range(2):
        col = coords[:, axis]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0:
            coords[:, axis] = -col
    return coords


def term_frequency_bars(model: LdaModel, term: int, topic: int) -> tuple[int, float]:
    """(overall corpus count, estimated within-topic frequency) for one term."""
    if model.final_state is None:
        raise ValueError("term_frequency_bars needs a model with sampler state")
    overall = int(model.final_state.n_tw[:, term].sum())
    within = float(model.phi[topic, term] * model.token_topic_totals[topic])
    return overall, within
