"""Paraphrastic data generation by lexical substitution of frame-evoking targets.

For every annotation set of a sentence, the lexical units of the same frame
attested with a loosely matching valence pattern are candidate substitutes
for its target. The candidate sets of a sentence form a lattice; every path
through the lattice other than the original sentence is a new sentence, and
all annotation of the source sentence is projected onto it.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from math import prod
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .deptree import DependencyTree, align_char_span, substitute_tokens
from .embeddings import EmbeddingTable, SemanticFilterSpec, semantic_filter
from .errors import NotATree, ParseError, ProjectionError
from .fndata import (
    AnnotationSet,
    Corpus,
    LabelSpan,
    POS,
    Sentence,
    validate_annotation_set,
)
from .valence import ValenceIndex, compatible_lexical_units

logger = logging.getLogger(__name__)

Generated = Tuple[Sentence, List[AnnotationSet]]


@dataclass(frozen=True)
class GenerationConfig:
    pos_filter: Optional[FrozenSet[POS]] = None
    mwe_filter: bool = False
    semantic_filter: SemanticFilterSpec = SemanticFilterSpec()
    max_sentences_per_source: Optional[int] = None

    def __post_init__(self):
        if self.max_sentences_per_source is not None and self.max_sentences_per_source < 1:
            raise ValueError("max_sentences_per_source must be >= 1")


@dataclass(frozen=True)
class CandidateSet:
    annoset_id: int
    source_lu_id: int
    target_spans: Tuple[Tuple[int, int], ...]
    candidates: Tuple[Tuple[int, str], ...] = ()
    skipped: Optional[str] = None

    @property
    def target(self) -> Tuple[int, int]:
        return self.target_spans[0]

    def __len__(self) -> int:
        return len(self.candidates)


@dataclass(frozen=True)
class CandidateLattice:
    sentence_id: int
    sets: Tuple[CandidateSet, ...] = ()

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(len(s) for s in self.sets)


def candidates_for_annoset(
    a: AnnotationSet,
    idx: ValenceIndex,
    cfg: GenerationConfig = GenerationConfig(),
    table: Optional[EmbeddingTable] = None,
) -> CandidateSet:
    c = idx.corpus
    source = c.lexical_units[a.lu_id]

    def skip(reason: str) -> CandidateSet:
        return CandidateSet(a.id, a.lu_id, a.target_spans, skipped=reason)

    if a.is_discontinuous:
        # substitution into split targets is unsupported
        return skip("discontinuous target")
    if cfg.pos_filter is not None and source.pos not in cfg.pos_filter:
        return skip("source POS filtered")
    if cfg.mwe_filter and source.is_multiword:
        return skip("multiword source")
    pattern = idx.pattern_of(a.id)
    if pattern is None:
        return skip("not indexed")
    if not pattern.units:
        return skip("empty pattern")

    by_lemma: Dict[str, int] = {}
    for lu_id in sorted(compatible_lexical_units(idx, pattern) - {a.lu_id}):
        lemma = c.lexical_units[lu_id].lemma
        if lemma == source.lemma:
            continue
        if cfg.mwe_filter and len(lemma.split()) > 1:
            continue
        by_lemma.setdefault(lemma, lu_id)
    lemmas = sorted(by_lemma)
    kept = set(semantic_filter(source.lemma, lemmas, cfg.semantic_filter, table))
    return CandidateSet(
        a.id, a.lu_id, a.target_spans, tuple((by_lemma[lem], lem) for lem in lemmas if lem in kept)
    )


def _overlaps(s1, s2) -> bool:
    return s1[0] <= s2[1] and s2[0] <= s1[1]


def build_lattice(
    sentence_id: int,
    idx: ValenceIndex,
    cfg: GenerationConfig = GenerationConfig(),
    table: Optional[EmbeddingTable] = None,
) -> CandidateLattice:
    """Candidate sets of one sentence, ordered by target start offset.

    When two annotation sets share overlapping targets only the first (by
    start offset, then id) enters the lattice.
    """
    annosets = idx.corpus.annosets_by_sentence.get(sentence_id, [])
    sets: List[CandidateSet] = []
    taken: List[Tuple[int, int]] = []
    for a in sorted(annosets, key=lambda x: (min(x.target_spans), x.id)):
        if any(_overlaps(t, u) for t in a.target_spans for u in taken):
            logger.info("annotation set %d: target overlaps another target; left out", a.id)
            continue
        taken.extend(a.target_spans)
        sets.append(candidates_for_annoset(a, idx, cfg, table))
    return CandidateLattice(sentence_id, tuple(sets))


def count_paraphrases(lattice) -> int:
    """Number of distinct paraphrases: product of (candidates + 1), minus the original.

    Accepts a lattice or a plain sequence of per-target candidate counts.
    """
    counts = lattice.counts if isinstance(lattice, CandidateLattice) else lattice
    return prod(n + 1 for n in counts) - 1


@dataclass(frozen=True)
class Replacement:
    start: int
    end: int
    text: str
    annoset_id: Optional[int] = None
    lu_id: Optional[int] = None

    @property
    def delta(self) -> int:
        return len(self.text) - (self.end - self.start + 1)


class OffsetMap:
    """Maps inclusive character offsets through a set of non-overlapping replacements."""

    def __init__(self, replacements: Sequence[Replacement]):
        self.reps = sorted(replacements, key=lambda r: r.start)
        for r1, r2 in zip(self.reps, self.reps[1:]):
            if r1.end >= r2.start:
                raise ProjectionError(f"replacements overlap at {r2.start}")

    def start(self, x: int) -> int:
        shift = 0
        for r in self.reps:
            if r.start < x <= r.end:
                raise ProjectionError(f"span start {x} falls inside replaced span {r.start}-{r.end}")
            if r.end < x:
                shift += r.delta
        return x + shift

    def end(self, y: int) -> int:
        shift = 0
        for r in self.reps:
            if r.start <= y < r.end:
                raise ProjectionError(f"span end {y} falls inside replaced span {r.start}-{r.end}")
            if r.end <= y:
                shift += r.delta
        return y + shift

    def span(self, s: Tuple[int, int]) -> Tuple[int, int]:
        return (self.start(s[0]), self.end(s[1]))

    def encloses_strictly(self, s: Tuple[int, int]) -> bool:
        """True when some replacement lies inside *s* without being *s* itself."""
        return any(s[0] <= r.start and r.end <= s[1] and (r.start, r.end) != s for r in self.reps)


def substitute(
    text: str, annosets: Iterable[AnnotationSet], replacements: Sequence[Replacement]
) -> Tuple[str, List[AnnotationSet]]:
    """Apply *replacements* to *text* and project every annotation set onto the result.

    Spans after a replacement shift by its length delta; a span equal to a
    replaced span is resized to the new text; a span enclosing a replacement
    has its end shifted. A span boundary inside a replaced span raises
    :class:`ProjectionError`. Annotation sets named by a replacement take its
    ``lu_id``.
    """
    omap = OffsetMap(replacements)
    parts, pos = [], 0
    for r in omap.reps:
        parts.append(text[pos : r.start])
        parts.append(r.text)
        pos = r.end + 1
    parts.append(text[pos:])
    new_text = "".join(parts)

    lu_for = {r.annoset_id: r.lu_id for r in omap.reps if r.lu_id is not None}
    out = []
    for a in annosets:
        labels = []
        for lab in a.labels:
            if not lab.is_overt:
                labels.append(lab)
                continue
            if omap.encloses_strictly(lab.span):
                logger.debug("annotation set %d: %s re-anchored around a substitution", a.id, lab.fe_name)
            start, end = omap.span(lab.span)
            labels.append(replace(lab, start=start, end=end))
        out.append(
            replace(
                a,
                lu_id=lu_for.get(a.id, a.lu_id),
                target_spans=tuple(omap.span(t) for t in a.target_spans),
                labels=tuple(labels),
            )
        )
    return new_text, out


def lattice_replacements(lattice: CandidateLattice) -> Iterable[List[Replacement]]:
    """Every non-trivial path through the lattice, in enumeration order.

    Candidate sets vary in target order (the first set is the slowest
    moving), candidates in lemma order, the unsubstituted option first.
    """
    options = [
        [None] + [Replacement(cs.target[0], cs.target[1], lemma, cs.annoset_id, lu_id)
                  for lu_id, lemma in sorted(cs.candidates, key=lambda x: x[1])]
        for cs in lattice.sets
    ]
    combos = itertools.product(*options)
    next(combos, None)  # the all-original path
    for combo in combos:
        yield [r for r in combo if r is not None]


def generate_sentences(
    lattice: CandidateLattice, corpus: Corpus, cfg: GenerationConfig = GenerationConfig()
) -> List[Generated]:
    """Materialize the lattice's paraphrases with projected annotation.

    Generated sentences and annotation sets carry provisional ids
    (positions in the returned list); :func:`export_augmented` assigns
    final ones.
    """
    source = corpus.sentences[lattice.sentence_id]
    annosets = corpus.annosets_by_sentence.get(lattice.sentence_id, [])
    out: List[Generated] = []
    for reps in lattice_replacements(lattice):
        if cfg.max_sentences_per_source is not None and len(out) >= cfg.max_sentences_per_source:
            break
        text, projected = substitute(source.text, annosets, reps)
        sent = Sentence(len(out), text, source.document)
        projected = [replace(a, sentence_id=sent.id) for a in projected]
        for a in projected:
            reason = validate_annotation_set(a, sent)
            if reason is not None:
                raise ProjectionError(f"annotation set {a.id} invalid after projection: {reason.value}")
        out.append((sent, projected))
    return out


def export_augmented(train: Corpus, generated: Sequence[Generated]) -> Corpus:
    """Gold training data followed by generated data, under fresh ids.

    The k-th generated sentence gets id ``max(train sentence ids) + 1 + k``;
    annotation sets are numbered likewise after the largest gold id.
    """
    next_sid = max(train.sentences, default=0) + 1
    next_aid = max(train.annotation_sets, default=0) + 1
    sentences = dict(train.sentences)
    annosets = dict(train.annotation_sets)
    for k, (sent, projected) in enumerate(generated):
        sid = next_sid + k
        sentences[sid] = replace(sent, id=sid)
        for a in projected:
            annosets[next_aid] = replace(a, id=next_aid, sentence_id=sid)
            next_aid += 1
    return train.lexicon_copy(sentences=sentences, annotation_sets=annosets)


def project_tree(
    corpus: Corpus, tree: DependencyTree, generated: Generated
) -> Optional[DependencyTree]:
    """Dependency tree for a generated sentence, derived from its source's tree.

    Only one-token-for-one-token substitutions keep the tree shape; any
    other substitution returns None.
    """
    sent, projected = generated
    forms: Dict[int, Tuple[str, str]] = {}
    for a in projected:
        src = corpus.annotation_sets[a.id]
        if src.lu_id == a.lu_id:
            continue
        (s0, e0), (s1, e1) = src.target_spans[0], a.target_spans[0]
        span, exact = align_char_span(tree, s0, e0)
        form = sent.text[s1 : e1 + 1]
        if span is None or not exact or len(span) != 1 or not form or any(ch.isspace() for ch in form):
            return None
        forms[span.start] = (form, corpus.lexical_units[a.lu_id].lemma)
    try:
        return substitute_tokens(tree, sent.text, forms)
    except (NotATree, ParseError):
        return None


def project_trees(
    train: Corpus, generated: Sequence[Generated], trees: Dict[int, DependencyTree]
) -> Tuple[Dict[int, DependencyTree], int]:
    """Trees of gold plus generated sentences, keyed by the ids :func:`export_augmented` assigns.

    Returns the trees and the number of generated sentences left without one.
    """
    out = {sid: t for sid, t in trees.items() if sid in train.sentences}
    next_sid = max(train.sentences, default=0) + 1
    missing = 0
    for k, g in enumerate(generated):
        sid = next_sid + k
        source = train.annotation_sets[g[1][0].id].sentence_id if g[1] else None
        t = project_tree(train, trees[source], g) if source in trees else None
        if t is None:
            missing += 1
            continue
        out[sid] = DependencyTree(sid, t.tokens, t.text)
    return out, missing


@dataclass
class GenerationReport:
    n_sources: int = 0
    n_sentences: int = 0
    n_annosets: int = 0
    per_source: Dict[int, int] = field(default_factory=dict)
    skipped: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_sources": self.n_sources,
            "n_sentences": self.n_sentences,
            "n_annosets": self.n_annosets,
            "per_source": {str(k): v for k, v in sorted(self.per_source.items())},
            "skipped": dict(sorted(self.skipped.items())),
        }


_WORKER: dict = {}


def _init_worker(idx, cfg, table):
    _WORKER.update(idx=idx, cfg=cfg, table=table)


def _generate_one(sentence_id: int):
    idx, cfg, table = _WORKER["idx"], _WORKER["cfg"], _WORKER["table"]
    lattice = build_lattice(sentence_id, idx, cfg, table)
    return lattice, generate_sentences(lattice, idx.corpus, cfg)


def augment(
    idx: ValenceIndex,
    cfg: GenerationConfig = GenerationConfig(),
    table: Optional[EmbeddingTable] = None,
    jobs: int = 1,
) -> Tuple[List[Generated], GenerationReport]:
    """Run generation over every sentence of the indexed corpus, ordered by sentence id."""
    sids = sorted(idx.corpus.annosets_by_sentence)
    if jobs > 1:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(idx, cfg, table)) as ex:
            results = list(ex.map(_generate_one, sids, chunksize=max(1, len(sids) // (4 * jobs))))
    else:
        _init_worker(idx, cfg, table)
        results = [_generate_one(sid) for sid in sids]

    report = GenerationReport()
    generated: List[Generated] = []
    for lattice, sents in results:
        for cs in lattice.sets:
            if cs.skipped:
                report.skipped[cs.skipped] = report.skipped.get(cs.skipped, 0) + 1
        if sents:
            report.n_sources += 1
            report.per_source[lattice.sentence_id] = len(sents)
        generated.extend(sents)
    report.n_sentences = len(generated)
    report.n_annosets = sum(len(p) for _, p in generated)
    return generated, report
