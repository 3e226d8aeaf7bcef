"""Valence patterns: extraction, loose matching and an inverted index.

A valence unit is an ``FE.PT.GF`` triplet; a valence pattern is the ordered
list of units realized by one annotation set. Two patterns of a frame match
*loosely* when their core units agree as multisets.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .errors import EmptyPattern, MissingLayer, ParseError
from .fndata import AnnotationSet, Corpus, Frame, Rejection, validate_annotation_set

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class ValenceUnit:
    fe_name: str
    pt: str
    gf: str

    def __post_init__(self):
        if not (self.fe_name and self.pt and self.gf):
            raise ValueError(f"valence unit fields must be non-empty: {self!r}")

    def __str__(self) -> str:
        return f"{self.fe_name}.{self.pt}.{self.gf}"

    @classmethod
    def parse(cls, text: str) -> "ValenceUnit":
        parts = text.split(".")
        if len(parts) != 3 or not all(parts):
            raise ParseError(f"expected FE.PT.GF, got {text!r}")
        return cls(*parts)


@dataclass(frozen=True)
class ValencePattern:
    units: Tuple[ValenceUnit, ...]
    frame_id: int

    def __str__(self) -> str:
        return " ".join(str(u) for u in self.units)

    def __len__(self) -> int:
        return len(self.units)


Signature = Tuple[ValenceUnit, ...]


def parse_pattern(text: str, frame_id: int) -> ValencePattern:
    """Parse whitespace-separated ``FE.PT.GF`` triplets."""
    units = tuple(ValenceUnit.parse(tok) for tok in text.split())
    if not units:
        raise ParseError("empty valence pattern")
    return ValencePattern(units, frame_id)


def extract_valence_pattern(a: AnnotationSet, frame: Frame) -> ValencePattern:
    units = []
    for label in a.overt_labels:
        if not label.pt or not label.gf:
            raise MissingLayer(f"annotation set {a.id}: label {label.fe_name} lacks PT or GF")
        units.append(ValenceUnit(label.fe_name, label.pt, label.gf))
    if not units:
        raise EmptyPattern(f"annotation set {a.id} has no overt labels")
    return ValencePattern(tuple(units), frame.id)


def core_signature(p: ValencePattern, frame: Frame) -> Signature:
    """Sorted multiset of the pattern's units whose FE is core."""
    return tuple(sorted(u for u in p.units if frame.is_core(u.fe_name)))


def loose_match(p1: ValencePattern, p2: ValencePattern, frame: Frame) -> bool:
    return core_signature(p1, frame) == core_signature(p2, frame)


@dataclass(frozen=True)
class IndexEntry:
    lu_id: int
    annoset_id: int
    pattern: ValencePattern


@dataclass
class ValenceIndex:
    """Map from ``(frame_id, core signature)`` to the annotation sets realizing it.

    Holds a reference to the corpus it was built from, so that lexical units
    and frames can be resolved by callers.
    """

    corpus: Corpus
    buckets: Dict[Tuple[int, Signature], List[IndexEntry]] = field(default_factory=dict)
    patterns: Dict[int, ValencePattern] = field(default_factory=dict)
    skipped: List[Rejection] = field(default_factory=list)

    def lookup(self, frame_id: int, signature: Signature) -> List[IndexEntry]:
        return self.buckets.get((frame_id, signature), [])

    def pattern_of(self, annoset_id: int) -> Optional[ValencePattern]:
        return self.patterns.get(annoset_id)

    def __len__(self) -> int:
        return sum(len(v) for v in self.buckets.values())


def build_index(c: Corpus) -> ValenceIndex:
    """Index every valid annotation set of *c* under its core signature.

    Annotation sets with only null-instantiated labels are indexed under the
    empty signature with an empty pattern. Invalid ones, or ones lacking
    PT/GF layers, are skipped and recorded in ``index.skipped``.
    """
    buckets: Dict[Tuple[int, Signature], List[IndexEntry]] = defaultdict(list)
    patterns: Dict[int, ValencePattern] = {}
    skipped: List[Rejection] = []
    for aid in sorted(c.annotation_sets):
        a = c.annotation_sets[aid]
        frame = c.frames[a.frame_id]
        reason = validate_annotation_set(a, c.sentences[a.sentence_id])
        if reason is not None:
            skipped.append(Rejection(f"annoset:{aid}", reason.value, aid))
            continue
        try:
            pattern = extract_valence_pattern(a, frame)
            sig = core_signature(pattern, frame)
        except EmptyPattern:
            pattern, sig = ValencePattern((), frame.id), ()
        except MissingLayer as exc:
            skipped.append(Rejection(f"annoset:{aid}", str(exc), aid))
            continue
        patterns[aid] = pattern
        buckets[(frame.id, sig)].append(IndexEntry(a.lu_id, aid, pattern))
    if skipped:
        logger.info("%d annotation sets not indexed", len(skipped))
    return ValenceIndex(c, dict(buckets), patterns, skipped)


def matching_entries(idx: ValenceIndex, p: ValencePattern) -> List[IndexEntry]:
    frame = idx.corpus.frames[p.frame_id]
    return idx.lookup(p.frame_id, core_signature(p, frame))


def compatible_lexical_units(idx: ValenceIndex, p: ValencePattern) -> Set[int]:
    """LUs of ``p``'s frame with at least one annotation set loosely matching ``p``."""
    if not p.units:
        raise EmptyPattern("cannot query with an empty pattern")
    return {e.lu_id for e in matching_entries(idx, p)}


def frames_owning(c: Corpus, fe_names: Iterable[str]) -> List[Frame]:
    """Frames declaring every FE name in *fe_names*, sorted by name."""
    names = set(fe_names)
    return sorted(
        (f for f in c.frames.values() if names <= set(f.fe_map)), key=lambda f: f.name
    )
