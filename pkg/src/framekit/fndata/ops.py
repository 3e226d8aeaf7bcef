"""Validation, splitting and statistics over corpora."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from ..errors import UnknownDocument
from .model import AnnotationSet, Corpus, Sentence

logger = logging.getLogger(__name__)


class RejectReason(str, Enum):
    MISSING_INDEX = "MissingIndex"
    NEGATIVE_START = "NegativeStart"
    END_OUT_OF_RANGE = "EndOutOfRange"
    INVERTED_SPAN = "InvertedSpan"
    NO_TARGET = "NoTarget"


def _check_span(start, end, length) -> Optional[RejectReason]:
    if start is None or end is None:
        return RejectReason.MISSING_INDEX
    if start < 0:
        return RejectReason.NEGATIVE_START
    if end >= length:
        return RejectReason.END_OUT_OF_RANGE
    if start > end:
        return RejectReason.INVERTED_SPAN
    return None


def validate_annotation_set(a: AnnotationSet, s: Sentence) -> Optional[RejectReason]:
    """Return ``None`` when *a* is valid for sentence *s*, else the first reason.

    Null-instantiated labels carry no offsets and are never rejected.
    """
    if not a.target_spans:
        return RejectReason.NO_TARGET
    n = len(s.text)
    for start, end in a.target_spans:
        reason = _check_span(start, end, n)
        if reason is not None:
            return reason
    for label in a.labels:
        if not label.is_overt:
            continue
        reason = _check_span(label.start, label.end, n)
        if reason is not None:
            return reason
    return None


def is_incomplete(a: AnnotationSet) -> bool:
    """Target with a frame but no frame element labels at all."""
    return not a.labels


def _signature(a: AnnotationSet, text: str):
    return (text, a.lu_id, a.frame_id, a.target_spans, a.labels)


def deduplicate(c: Corpus) -> Corpus:
    """Drop repeated sentences (same text) and repeated annotation sets.

    Annotation sets of a dropped sentence that are not themselves duplicates
    are re-attached to the first sentence carrying the same text.
    """
    kept_by_text: Dict[str, int] = {}
    seen: Set[tuple] = set()
    sentences: Dict[int, Sentence] = {}
    annosets: Dict[int, AnnotationSet] = {}
    for sid in sorted(c.sentences):
        s = c.sentences[sid]
        target_sid = kept_by_text.setdefault(s.text, sid)
        if target_sid == sid:
            sentences[sid] = s
        for a in c.annosets_by_sentence.get(sid, []):
            sig = _signature(a, s.text)
            if sig in seen:
                logger.info("dropping duplicate annotation set %d", a.id)
                continue
            seen.add(sig)
            annosets[a.id] = a if target_sid == sid else replace(a, sentence_id=target_sid)
    return c.lexicon_copy(sentences=sentences, annotation_sets=annosets)


def _subset(c: Corpus, sentence_ids: Iterable[int]) -> Corpus:
    ids = set(sentence_ids)
    return c.lexicon_copy(
        sentences={sid: c.sentences[sid] for sid in sorted(ids)},
        annotation_sets={
            aid: a for aid, a in sorted(c.annotation_sets.items()) if a.sentence_id in ids
        },
    )


def split_corpus(
    c: Corpus, test_docs: Sequence[str], dev_docs: Sequence[str]
) -> Tuple[Corpus, Corpus, Corpus]:
    """Partition *c* by document into ``(train, dev, test)``.

    The test set is deduplicated and incomplete annotation sets are removed
    from train. Sentences without a document name go to train.
    """
    known = set(c.documents)
    for name in list(test_docs) + list(dev_docs):
        if name not in known:
            raise UnknownDocument(f"unknown document {name!r}")
    both = set(test_docs) & set(dev_docs)
    if both:
        raise UnknownDocument(f"documents listed as both dev and test: {sorted(both)}")

    test_ids, dev_ids, train_ids = [], [], []
    for sid, s in c.sentences.items():
        if s.document in test_docs:
            test_ids.append(sid)
        elif s.document in dev_docs:
            dev_ids.append(sid)
        else:
            train_ids.append(sid)

    train = _subset(c, train_ids)
    incomplete = [aid for aid, a in train.annotation_sets.items() if is_incomplete(a)]
    if incomplete:
        logger.info("removing %d incomplete annotation sets from train", len(incomplete))
        train = train.lexicon_copy(
            sentences=train.sentences,
            annotation_sets={
                aid: a for aid, a in train.annotation_sets.items() if aid not in set(incomplete)
            },
        )
    return train, _subset(c, dev_ids), deduplicate(_subset(c, test_ids))


@dataclass
class CorpusStats:
    n_sentences: int = 0
    n_annosets: int = 0
    lu_counts: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_sentences": self.n_sentences,
            "n_annosets": self.n_annosets,
            "lu_counts": dict(sorted(self.lu_counts.items())),
        }


def corpus_stats(c: Corpus) -> CorpusStats:
    """Sentence and annotation-set counts, plus distinct annotated LUs per POS."""
    lu_ids = {a.lu_id for a in c.annotation_sets.values()}
    per_pos = Counter(c.lexical_units[i].pos.value for i in lu_ids if i in c.lexical_units)
    return CorpusStats(len(c.sentences), len(c.annotation_sets), dict(per_pos))
