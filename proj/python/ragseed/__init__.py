"""RFC-grounded RAG agent pipeline for RTSP fuzzing seeds.

Thin re-export of the compiled extension. The heavy lifting (chunking,
embedding, retrieval, RTSP parsing and conformance, BLEU/ROUGE/WER, and the
full command line) lives in C++; this package keeps the Python surface flat.
"""

from ._ragseed import (  # noqa: F401
    ArgumentError,
    ConfigError,
    bleu,
    chunk_document,
    clean_document,
    cosine_similarity,
    embed,
    format_percent,
    parse_request,
    retrieve_top_k,
    rouge,
    run_command,
    serialize_request,
    validate_sequence,
    wer,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "bleu",
    "chunk_document",
    "clean_document",
    "cosine_similarity",
    "embed",
    "format_percent",
    "parse_request",
    "retrieve_top_k",
    "rouge",
    "run_command",
    "serialize_request",
    "validate_sequence",
    "wer",
]
