"""Core data types for annotated lexicon data.

Offsets are character offsets over the sentence text (Unicode code points),
with an *inclusive* end, as in FrameNet releases.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Tuple


class CoreType(str, Enum):
    CORE = "Core"
    PERIPHERAL = "Peripheral"
    EXTRA_THEMATIC = "Extra-Thematic"
    CORE_UNEXPRESSED = "Core-Unexpressed"

    @property
    def is_core(self) -> bool:
        return self in (CoreType.CORE, CoreType.CORE_UNEXPRESSED)


class POS(str, Enum):
    N = "N"
    V = "V"
    A = "A"
    ADV = "ADV"
    PREP = "PREP"
    OTHER = "Other"

    @classmethod
    def parse(cls, tag: str) -> "POS":
        tag = tag.strip()
        for member in cls:
            if member.value.upper() == tag.upper():
                return member
        return cls.OTHER


class NIKind(str, Enum):
    INI = "INI"
    DNI = "DNI"
    CNI = "CNI"


class RelationKind(str, Enum):
    INHERITANCE = "Inheritance"
    SUBFRAME = "SubFrame"
    OTHER = "Other"

    @classmethod
    def parse(cls, name: str) -> "RelationKind":
        for member in (cls.INHERITANCE, cls.SUBFRAME):
            if name.replace(" ", "").lower() == member.value.lower():
                return member
        return cls.OTHER


class Origin(str, Enum):
    FULLTEXT = "Fulltext"
    EXEMPLAR = "Exemplar"
    GENERATED = "Generated"


@dataclass(frozen=True)
class FrameElement:
    name: str
    core_type: CoreType


@dataclass(frozen=True)
class FrameRelation:
    kind: RelationKind
    parent_frame_id: int
    child_frame_id: int
    fe_mappings: Tuple[Tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Frame:
    id: int
    name: str
    frame_elements: Tuple[FrameElement, ...]
    # Filled in at ingestion from the LU and relation records.
    lexical_units: Tuple[int, ...] = ()
    relations: Tuple[FrameRelation, ...] = ()

    @cached_property
    def fe_map(self) -> Dict[str, FrameElement]:
        return {fe.name: fe for fe in self.frame_elements}

    def has_fe(self, name: str) -> bool:
        return name in self.fe_map

    def is_core(self, fe_name: str) -> bool:
        return self.fe_map[fe_name].core_type.is_core


@dataclass(frozen=True)
class LexicalUnit:
    id: int
    lemma: str
    pos: POS
    frame_id: int

    @property
    def is_multiword(self) -> bool:
        return len(self.lemma.split()) > 1

    @property
    def name(self) -> str:
        return f"{self.lemma}.{self.pos.value.lower()}"


@dataclass(frozen=True)
class Sentence:
    id: int
    text: str
    document: Optional[str] = None

    def __len__(self) -> int:
        return len(self.text)


@dataclass(frozen=True)
class LabelSpan:
    fe_name: str
    start: Optional[int] = None
    end: Optional[int] = None
    pt: Optional[str] = None
    gf: Optional[str] = None
    ni_kind: Optional[NIKind] = None

    @property
    def is_overt(self) -> bool:
        return self.ni_kind is None

    @property
    def span(self) -> Tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class AnnotationSet:
    id: int
    sentence_id: int
    lu_id: int
    frame_id: int
    target_spans: Tuple[Tuple[int, int], ...]
    labels: Tuple[LabelSpan, ...] = ()

    @property
    def overt_labels(self) -> Tuple[LabelSpan, ...]:
        return tuple(lab for lab in self.labels if lab.is_overt)

    @property
    def is_discontinuous(self) -> bool:
        return len(self.target_spans) > 1


@dataclass(frozen=True)
class Rejection:
    """A record left out of a corpus at ingestion, with the reason why."""

    position: str
    reason: str
    record_id: Optional[int] = None


@dataclass
class Corpus:
    sentences: Dict[int, Sentence] = field(default_factory=dict)
    annotation_sets: Dict[int, AnnotationSet] = field(default_factory=dict)
    frames: Dict[int, Frame] = field(default_factory=dict)
    lexical_units: Dict[int, LexicalUnit] = field(default_factory=dict)
    relations: Tuple[FrameRelation, ...] = ()
    origin: Origin = Origin.FULLTEXT
    rejected: List[Rejection] = field(default_factory=list, compare=False)

    @cached_property
    def annosets_by_sentence(self) -> Dict[int, List[AnnotationSet]]:
        out: Dict[int, List[AnnotationSet]] = defaultdict(list)
        for aid in sorted(self.annotation_sets):
            a = self.annotation_sets[aid]
            out[a.sentence_id].append(a)
        return dict(out)

    @cached_property
    def frames_by_name(self) -> Dict[str, Frame]:
        return {f.name: f for f in self.frames.values()}

    @property
    def documents(self) -> List[str]:
        return sorted({s.document for s in self.sentences.values() if s.document is not None})

    def frame_of(self, a: AnnotationSet) -> Frame:
        return self.frames[a.frame_id]

    def sentence_of(self, a: AnnotationSet) -> Sentence:
        return self.sentences[a.sentence_id]

    def lexicon_copy(self, **kwargs) -> "Corpus":
        """A new corpus sharing this one's frames, LUs and relations."""
        kwargs.setdefault("origin", self.origin)
        return Corpus(
            frames=self.frames,
            lexical_units=self.lexical_units,
            relations=self.relations,
            **kwargs,
        )
