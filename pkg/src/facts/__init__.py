"""Corpus-to-topics pipeline.

Harvests documents from a manifest, filters their text for
question-relevant passages through a pluggable local language-model
endpoint, fits an LDA topic model to the relevant answers, computes the
visualization metric stack, and emits a self-contained interactive report.
"""

from .filtering import AnswerRecord, ModelEndpointConfig, Verdict
from .harvest import DocumentRef, FetchReport
from .ingest import Chunk, CleanedDocument
from .lda import LdaConfig, LdaModel, fit
from .report import VisData, assemble_vis_data, emit_html
from .vectorize import DocTermMatrix, Vocabulary, build_dtm, build_vocabulary, tokenize

__version__ = "0.1.0"

__all__ = [
    "AnswerRecord",
    "Chunk",
    "CleanedDocument",
    "DocTermMatrix",
    "DocumentRef",
    "FetchReport",
    "LdaConfig",
    "LdaModel",
    "ModelEndpointConfig",
    "Verdict",
    "VisData",
    "Vocabulary",
    "assemble_vis_data",
    "build_dtm",
    "build_vocabulary",
    "emit_html",
    "fit",
    "tokenize",
    "__version__",
]
