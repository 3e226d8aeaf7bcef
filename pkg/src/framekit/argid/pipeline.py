"""Glue between corpora, dependency trees and the argument identification model."""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..deptree import DependencyTree, Span, align_char_span, candidate_spans, token_char_span
from ..fndata import AnnotationSet, Corpus
from .decode import decode, role_order
from .features import NULL_SPAN, FeatureExtractor
from .model import Model, TrainInstance, score

logger = logging.getLogger(__name__)


def target_span(tree: DependencyTree, a: AnnotationSet) -> Optional[Span]:
    """Token interval covering all of the annotation set's target characters."""
    start = min(s for s, _ in a.target_spans)
    end = max(e for _, e in a.target_spans)
    span, _ = align_char_span(tree, start, end)
    return span


@dataclass
class InstanceReport:
    n_instances: int = 0
    skipped: Counter = field(default_factory=Counter)

    def to_dict(self) -> dict:
        return {"n_instances": self.n_instances, "skipped": dict(sorted(self.skipped.items()))}


def make_instances(
    corpus: Corpus,
    trees: Dict[int, DependencyTree],
    extractor: FeatureExtractor,
) -> Tuple[List[TrainInstance], InstanceReport]:
    """One instance per (annotation set, frame element of its frame).

    A role with no overt label has the null span as gold. Roles whose gold
    label does not align to a candidate span cannot be learned and are
    skipped, as are annotation sets without a dependency tree.
    """
    instances: List[TrainInstance] = []
    report = InstanceReport()
    span_cache: Dict[int, List[Span]] = {}
    for aid in sorted(corpus.annotation_sets):
        a = corpus.annotation_sets[aid]
        tree = trees.get(a.sentence_id)
        if tree is None:
            report.skipped["no tree"] += 1
            continue
        target = target_span(tree, a)
        if target is None:
            report.skipped["target not aligned"] += 1
            continue
        if a.sentence_id not in span_cache:
            span_cache[a.sentence_id] = sorted(candidate_spans(tree))
        spans = span_cache[a.sentence_id]
        span_set = set(spans)
        frame = corpus.frames[a.frame_id]
        gold_by_role: Dict[str, Optional[Span]] = {}
        unreachable = set()
        for label in a.overt_labels:
            if label.fe_name in gold_by_role or label.fe_name in unreachable:
                continue
            span, exact = align_char_span(tree, label.start, label.end)
            if exact and span in span_set:
                gold_by_role[label.fe_name] = span
            else:
                unreachable.add(label.fe_name)
        candidates = (NULL_SPAN,) + tuple(spans)
        for role in role_order(frame):
            if role in unreachable:
                report.skipped["gold span not a candidate"] += 1
                continue
            feats = tuple(extractor.extract(tree, target, frame, role, sp) for sp in candidates)
            instances.append(
                TrainInstance(role, gold_by_role.get(role), candidates, feats, a.id, frame.id)
            )
    report.n_instances = len(instances)
    return instances, report


def predict_annoset(
    m: Model,
    extractor: FeatureExtractor,
    corpus: Corpus,
    tree: DependencyTree,
    a: AnnotationSet,
    k: int,
) -> dict:
    frame = corpus.frames[a.frame_id]
    record = {"annoset_id": a.id, "sentence_id": a.sentence_id, "frame": frame.name, "labels": []}
    target = target_span(tree, a)
    if target is None:
        return record
    ranked = decode(m, extractor, tree, target, frame, k)
    if not ranked:
        return record
    assignment, _ = ranked[0]
    for role, span in sorted(assignment.items(), key=lambda x: (x[1] is None, x[1] or Span(0, 0), x[0])):
        if span is None:
            continue
        start, end = token_char_span(tree, span)
        record["labels"].append(
            {
                "fe": role,
                "span": [span.start, span.end],
                "start": start,
                "end": end,
                "score": score(m, extractor.extract(tree, target, frame, role, span)),
            }
        )
    return record


_WORKER: dict = {}


def _init(m, extractor, corpus, trees, k):
    _WORKER.update(m=m, extractor=extractor, corpus=corpus, trees=trees, k=k)


def _predict_one(aid: int) -> dict:
    w = _WORKER
    a = w["corpus"].annotation_sets[aid]
    tree = w["trees"].get(a.sentence_id)
    if tree is None:
        return {"annoset_id": a.id, "sentence_id": a.sentence_id,
                "frame": w["corpus"].frames[a.frame_id].name, "labels": []}
    return predict_annoset(w["m"], w["extractor"], w["corpus"], tree, a, w["k"])


def predict(
    m: Model,
    extractor: FeatureExtractor,
    corpus: Corpus,
    trees: Dict[int, DependencyTree],
    k: int = 100,
    jobs: int = 1,
) -> List[dict]:
    """Decode every annotation set with gold target and frame; output ordered by id."""
    aids = sorted(corpus.annotation_sets)
    if jobs > 1:
        with ProcessPoolExecutor(jobs, initializer=_init, initargs=(m, extractor, corpus, trees, k)) as ex:
            return list(ex.map(_predict_one, aids, chunksize=max(1, len(aids) // (4 * jobs))))
    _init(m, extractor, corpus, trees, k)
    return [_predict_one(aid) for aid in aids]
