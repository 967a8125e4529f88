"""Command-line orchestration of the pipeline, end-to-end and per stage.

Stages communicate only through files under the work directory, so each
can be inspected or re-run on its own:

    harvest  manifest -> work/raw/ (documents + citation sidecars)
    analyze  work/raw/ -> work/cleaned/, work/analysis/, work/answers.csv
    model    work/answers.csv -> work/dtm.json, work/model.json
    report   work/{model,dtm}.json -> out/{visdata.json,report.html,themes.*}
    run      all four in order

Exit codes: 0 success, 1 hard error, 2 configuration error. Progress goes
to stderr; each stage prints one machine-readable summary line to stdout.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import filtering, harvest, ingest, lda, report, vectorize
from .jsonio import canonical_dumps, read_json

logger = logging.getLogger(__name__)

ENDPOINT_ENV_VAR = "FACTS_ENDPOINT"

HARD_ERRORS = (
    FileNotFoundError,
    NotADirectoryError,
    OSError,
    harvest.ManifestError,
    ingest.ExtractionFailed,
    ingest.UnsupportedInput,
    filtering.ModelUnavailableError,
    filtering.MalformedResponseError,
    vectorize.EmptyVocabularyError,
    lda.EmptyCorpusError,
)


class ConfigError(Exception):
    """Invalid configuration file or flag values."""


@dataclass(frozen=True)
class PipelineConfig:
    question: str = ""
    chunk_limit: int = ingest.DEFAULT_CHUNK_LIMIT
    endpoint: filtering.ModelEndpointConfig = field(
        default_factory=filtering.ModelEndpointConfig
    )
    lda: lda.LdaConfig = field(default_factory=lda.LdaConfig)
    top_r: int = report.DEFAULT_TOP_R
    table_n: int = report.DEFAULT_TABLE_N
    lambda_default: float = report.DEFAULT_LAMBDA
    manifest: Path | None = None
    work_dir: Path = Path("work")
    out_dir: Path = Path("out")
    stopword_file: Path | None = None
    extractor: str | None = None
    mock_mode: bool = False
    year_filter: int | None = None
    min_doc_count: int = 1
    fetch_parallel: int = 4
    prompt_template: str | None = None
    interpret_template: str | None = None


def _build_config(file_values: dict[str, Any], args: argparse.Namespace) -> PipelineConfig:
    values = dict(file_values)
    endpoint_values = dict(values.pop("endpoint", {}))
    lda_values = dict(values.pop("lda", {}))

    flag_map = {
        "question": "question",
        "year": "year_filter",
        "chunk_size": "chunk_limit",
        "lambda_value": "lambda_default",
        "top_r": "top_r",
        "table_n": "table_n",
        "out": "out_dir",
        "work": "work_dir",
    }
    for flag, key in flag_map.items():
        flag_value = getattr(args, flag, None)
        if flag_value is not None:
            values[key] = flag_value
    for flag in ("k", "alpha", "beta", "sweeps", "burn_in", "seed"):
        flag_value = getattr(args, flag, None)
        if flag_value is not None:
            lda_values[flag] = flag_value
    if getattr(args, "mock", False):
        values["mock_mode"] = True

    env_endpoint = os.environ.get(ENDPOINT_ENV_VAR)
    if env_endpoint:
        endpoint_values["base_url"] = env_endpoint

    for path_key in ("manifest", "work_dir", "out_dir", "stopword_file"):
        if values.get(path_key) is not None:
            values[path_key] = Path(values[path_key])

    try:
        cfg = PipelineConfig(
            endpoint=filtering.ModelEndpointConfig(**endpoint_values),
            lda=lda.LdaConfig(**lda_values),
            **values,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    if not 0.0 <= cfg.lambda_default <= 1.0:
        raise ConfigError(f"lambda must be in [0, 1], got {cfg.lambda_default}")
    if cfg.chunk_limit < 1:
        raise ConfigError(f"chunk size must be positive, got {cfg.chunk_limit}")
    if cfg.top_r < 1 or cfg.table_n < 1:
        raise ConfigError("top_r and table_n must be positive")
    if cfg.table_n > cfg.top_r:
        raise ConfigError(f"table_n ({cfg.table_n}) must not exceed top_r ({cfg.top_r})")
    if cfg.min_doc_count < 1:
        raise ConfigError("min_doc_count must be >= 1")
    return cfg


def load_pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    file_values: dict[str, Any] = {}
    if args.config:
        config_path = Path(args.config)
        if not config_path.is_file():
            raise ConfigError(f"config file not found: {config_path}")
        try:
            file_values = read_json(config_path)
        except ValueError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(file_values, dict):
            raise ConfigError("config file must hold a JSON object")
    return _build_config(file_values, args)


def _require_question(cfg: PipelineConfig) -> None:
    if not cfg.question.strip():
        raise ConfigError("a non-empty question is required for this stage")


def _require_file(path: Path, hint: str) -> None:
    if not path.is_file():
        raise FileNotFoundError(f"missing {hint}: {path} (run the producing stage first)")


def _raw_dir(cfg: PipelineConfig) -> Path:
    return cfg.work_dir / "raw"


def run_harvest(cfg: PipelineConfig) -> dict[str, Any]:
    if cfg.manifest is None:
        raise ConfigError("harvest requires a manifest path")
    refs = harvest.load_manifest(cfg.manifest, cfg.year_filter)
    raw = _raw_dir(cfg)
    fetch = harvest.fetch_documents(refs, raw, max_parallel=cfg.fetch_parallel)
    for ref in refs:
        harvest.write_citation_record(ref, raw)
    return {
        "stage": "harvest",
        "refs": len(refs),
        "downloaded": fetch.downloaded,
        "skipped": fetch.skipped,
        "failed": fetch.failed,
    }


def _token_config(cfg: PipelineConfig) -> vectorize.TokenConfig:
    if cfg.stopword_file is not None:
        return vectorize.TokenConfig(stopwords=vectorize.load_stopwords(cfg.stopword_file))
    return vectorize.TokenConfig()


def run_analyze(cfg: PipelineConfig) -> dict[str, Any]:
    _require_question(cfg)
    raw = _raw_dir(cfg)
    doc_paths = sorted(
        p for p in raw.glob("*")
        if p.is_file() and not p.name.endswith(".cite.txt") and p.suffix != ".part"
    ) if raw.is_dir() else []
    if not doc_paths:
        raise FileNotFoundError(
            f"missing documents under {raw} (run the harvest stage first)"
        )

    cleaned_dir = cfg.work_dir / "cleaned"
    cleaned_dir.mkdir(parents=True, exist_ok=True)
    chunks_by_doc: dict[str, list[ingest.Chunk]] = {}
    for path in doc_paths:
        source_id = path.stem
        doc = ingest.CleanedDocument(
            source_id, ingest.clean_text(ingest.extract_text(path, cfg.extractor))
        )
        (cleaned_dir / f"{source_id}.txt").write_text(doc.text, encoding="utf-8")
        chunks_by_doc[source_id] = ingest.chunk_text(
            doc.text, cfg.chunk_limit, source_id=source_id
        )
        logger.info("cleaned %s: %d characters", source_id, doc.char_count)

    complete = filtering.make_mock_completer(cfg.question) if cfg.mock_mode else None
    records = filtering.run_filter(
        chunks_by_doc,
        cfg.question,
        cfg.endpoint,
        cfg.work_dir,
        complete=complete,
        prompt_template=cfg.prompt_template or filtering.DEFAULT_PROMPT_TEMPLATE,
    )
    filtering.export_answers_csv(records, cfg.work_dir / "answers.csv")
    relevant = sum(1 for r in records if r.verdict is filtering.Verdict.RELEVANT)
    return {
        "stage": "analyze",
        "documents": len(doc_paths),
        "chunks": len(records),
        "relevant": relevant,
    }


def run_model(cfg: PipelineConfig) -> dict[str, Any]:
    answers_path = cfg.work_dir / "answers.csv"
    _require_file(answers_path, "answers CSV")
    records = filtering.load_answers_csv(answers_path)
    if not records:
        raise lda.EmptyCorpusError(f"no relevant answers in {answers_path}")

    token_cfg = _token_config(cfg)
    docs = [vectorize.tokenize(r.answer, token_cfg) for r in records]
    doc_ids = [(r.source_id, r.chunk_index) for r in records]
    vocab = vectorize.build_vocabulary(docs, cfg.min_doc_count)
    dtm = vectorize.build_dtm(docs, vocab, doc_ids)
    vectorize.write_dtm_json(dtm, vocab, cfg.work_dir / "dtm.json")

    model = lda.fit(dtm, cfg.lda)
    lda.write_model_json(model, cfg.work_dir / "model.json")
    return {
        "stage": "model",
        "answers": dtm.n_docs,
        "vocabulary": dtm.n_terms,
        "tokens": dtm.total_tokens,
        "topics": cfg.lda.k,
        "final_log_likelihood": model.ll_trace[-1],
    }


def run_report(cfg: PipelineConfig) -> dict[str, Any]:
    _require_question(cfg)
    model_path = cfg.work_dir / "model.json"
    dtm_path = cfg.work_dir / "dtm.json"
    _require_file(model_path, "model JSON")
    _require_file(dtm_path, "document-term matrix JSON")
    model = lda.model_from_dict(read_json(model_path))
    dtm, vocab = vectorize.dtm_from_dict(read_json(dtm_path))

    data = report.assemble_vis_data(
        model, vocab, dtm, cfg.question,
        lambda_default=cfg.lambda_default, top_r=cfg.top_r,
    )
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    report.write_vis_json(data, cfg.out_dir / "visdata.json")
    report.emit_html(data, cfg.out_dir / "report.html")
    themes = report.interpret_clusters(
        data, cfg.question, cfg.endpoint,
        mock=cfg.mock_mode, table_n=cfg.table_n,
        template=cfg.interpret_template or report.DEFAULT_INTERPRET_TEMPLATE,
    )
    report.write_themes_csv(themes, cfg.out_dir / "themes.csv")
    (cfg.out_dir / "themes.txt").write_text(
        report.render_themes_text(themes), encoding="utf-8"
    )
    return {
        "stage": "report",
        "topics": len(data.topics),
        "terms": len(data.terms),
        "html": str(cfg.out_dir / "report.html"),
    }


def run_all(cfg: PipelineConfig) -> list[dict[str, Any]]:
    return [run_harvest(cfg), run_analyze(cfg), run_model(cfg), run_report(cfg)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="facts",
        description="Corpus-to-topics pipeline: harvest, filter, model, report.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("harvest", "download manifest documents and citation sidecars"),
        ("analyze", "extract, clean, chunk, and filter text through the model"),
        ("model", "vectorize relevant answers and fit the topic model"),
        ("report", "compute metrics and emit the interactive report"),
        ("run", "all stages in order"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", help="JSON config file")
        cmd.add_argument("--question", help="research question")
        cmd.add_argument("--year", type=int, help="only manifest rows from this year")
        cmd.add_argument("--chunk-size", type=int, dest="chunk_size",
                         help="chunk character limit (default 3500)")
        cmd.add_argument("--k", type=int, help="number of topics (default 5)")
        cmd.add_argument("--alpha", type=float, help="document-topic smoothing")
        cmd.add_argument("--beta", type=float, help="topic-term smoothing")
        cmd.add_argument("--sweeps", type=int, help="total Gibbs sweeps")
        cmd.add_argument("--burn-in", type=int, dest="burn_in",
                         help="sweeps before estimates are averaged")
        cmd.add_argument("--seed", type=int, help="sampler RNG seed")
        cmd.add_argument("--lambda", type=float, dest="lambda_value",
                         help="default relevance blend in [0, 1]")
        cmd.add_argument("--top-r", type=int, dest="top_r",
                         help="terms shipped per topic (default 30)")
        cmd.add_argument("--table-n", type=int, dest="table_n",
                         help="terms per cluster in tables (default 10)")
        cmd.add_argument("--mock", action="store_true",
                         help="deterministic offline stand-in for the model endpoint")
        cmd.add_argument("--out", help="report output directory")
        cmd.add_argument("--work", help="intermediate artifact directory")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_pipeline_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    stages = {
        "harvest": run_harvest,
        "analyze": run_analyze,
        "model": run_model,
        "report": run_report,
    }
    try:
        if args.command == "run":
            summaries = run_all(cfg)
        else:
            summaries = [stages[args.command](cfg)]
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except HARD_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for summary in summaries:
        print(canonical_dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
