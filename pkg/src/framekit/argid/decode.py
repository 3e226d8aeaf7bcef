"""Beam search over role-to-span assignments.

Roles are filled one at a time; each is assigned one candidate span or the
null span. Overt spans of a hypothesis must not overlap, and a frame element
gets at most one span because every role is visited once.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from ..deptree import DependencyTree, Span, candidate_spans
from ..fndata import Frame
from .features import NULL_SPAN, FeatureExtractor
from .model import Model, score

RoleOptions = Tuple[str, Sequence[Tuple[Optional[Span], float]]]
Hypothesis = Tuple[float, Tuple[Tuple[str, Optional[Span]], ...]]


def _span_key(span: Optional[Span]) -> Tuple[int, int]:
    return (0, 0) if span is None else (span.start, span.end)


def _rank_key(h: Hypothesis):
    score_, assignment = h
    return (-score_, tuple(_span_key(s) for _, s in assignment))


def beam_search(roles: Sequence[RoleOptions], k: int) -> List[Hypothesis]:
    """Top-*k* hypotheses, best first.

    Ties in score are broken lexicographically on the assigned spans (null
    span first), in role order.
    """
    if k < 1:
        raise ValueError("beam width must be >= 1")
    beam: List[Hypothesis] = [(0.0, ())]
    for role, options in roles:
        grown: List[Hypothesis] = []
        for total, assignment in beam:
            used = [s for _, s in assignment if s is not None]
            for span, s in options:
                if span is not None and any(span.overlaps(u) for u in used):
                    continue
                grown.append((total + s, assignment + ((role, span),)))
        grown.sort(key=_rank_key)
        beam = grown[:k]
    return beam


def role_order(frame: Frame) -> List[str]:
    """Core roles first, then the rest; alphabetical within each group."""
    return sorted((fe.name for fe in frame.frame_elements), key=lambda n: (not frame.is_core(n), n))


def role_options(
    m: Model,
    extractor: FeatureExtractor,
    tree: DependencyTree,
    target: Span,
    frame: Frame,
    spans: Optional[Sequence[Span]] = None,
) -> List[RoleOptions]:
    spans = sorted(candidate_spans(tree) if spans is None else spans)
    out = []
    for role in role_order(frame):
        opts = [(None, score(m, extractor.extract(tree, target, frame, role, NULL_SPAN)))]
        opts += [(sp, score(m, extractor.extract(tree, target, frame, role, sp))) for sp in spans]
        out.append((role, opts))
    return out


def decode(
    m: Model,
    extractor: FeatureExtractor,
    tree: DependencyTree,
    target: Span,
    frame: Frame,
    k: int = 100,
    spans: Optional[Sequence[Span]] = None,
) -> List[Tuple[Dict[str, Optional[Span]], float]]:
    """Ranked ``(assignment, score)`` list; assignments map every role to a span or None."""
    beam = beam_search(role_options(m, extractor, tree, target, frame, spans), k)
    return [(dict(assignment), total) for total, assignment in beam]
