"""Annotated lexicon data: model, ingestion, validation, splitting, statistics."""

from enum import Enum
from pathlib import Path

from ..errors import ParseError
from .fnxml import read_framenet_xml
from .model import (
    AnnotationSet,
    CoreType,
    Corpus,
    Frame,
    FrameElement,
    FrameRelation,
    LabelSpan,
    LexicalUnit,
    NIKind,
    Origin,
    POS,
    RelationKind,
    Rejection,
    Sentence,
)
from .native import export_text, load_jsonl, read_jsonl, write_jsonl
from .ops import (
    CorpusStats,
    RejectReason,
    corpus_stats,
    deduplicate,
    is_incomplete,
    split_corpus,
    validate_annotation_set,
)


class CorpusFormat(str, Enum):
    NATIVE_JSONL = "jsonl"
    FRAMENET_XML = "fnxml"


def ingest_corpus(path, fmt=CorpusFormat.NATIVE_JSONL, strict: bool = False, **kwargs) -> Corpus:
    path = Path(path)
    if not path.exists():
        raise ParseError("no such file or directory", str(path))
    fmt = CorpusFormat(fmt)
    if fmt is CorpusFormat.FRAMENET_XML:
        return read_framenet_xml(path, strict=strict, **kwargs)
    return read_jsonl(path, strict=strict)


__all__ = [
    "AnnotationSet", "CoreType", "Corpus", "CorpusFormat", "CorpusStats", "Frame",
    "FrameElement", "FrameRelation", "LabelSpan", "LexicalUnit", "NIKind", "Origin", "POS",
    "RejectReason", "Rejection", "RelationKind", "Sentence", "corpus_stats", "deduplicate",
    "export_text", "ingest_corpus", "is_incomplete", "load_jsonl", "read_framenet_xml",
    "read_jsonl", "split_corpus", "validate_annotation_set", "write_jsonl",
]
