"""Weighted precision/recall/F1 over frame element spans, and paired bootstrap tests.

Every gold overt label adds its weight to G, every predicted label adds its
weight to S, and a prediction that matches a still-unclaimed gold label
(same frame element, same character span) adds its weight to M. Core frame
elements weigh ``core_weight``; the others weigh ``noncore_weight``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import EmptyTestSet, UnknownFrameElement
from .fndata import AnnotationSet, Corpus, Frame

Prediction = Tuple[str, Tuple[int, int]]
Predictions = Dict[int, List[Prediction]]


@dataclass(frozen=True)
class ScoreTally:
    match: float = 0.0
    score: float = 0.0
    gold: float = 0.0

    def __add__(self, other: "ScoreTally") -> "ScoreTally":
        return ScoreTally(self.match + other.match, self.score + other.score, self.gold + other.gold)


@dataclass(frozen=True)
class EvalConfig:
    core_weight: float = 1.0
    noncore_weight: float = 0.5
    frame_credit: bool = False
    frame_credit_value: float = 1.0

    def __post_init__(self):
        if self.core_weight <= 0 or self.noncore_weight <= 0:
            raise ValueError("weights must be positive")

    def weight(self, frame: Frame, fe_name: str) -> float:
        if not frame.has_fe(fe_name):
            raise UnknownFrameElement(f"{fe_name!r} is not a frame element of {frame.name}")
        return self.core_weight if frame.is_core(fe_name) else self.noncore_weight


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {"P": self.precision, "R": self.recall, "F1": self.f1}


def score_annoset(
    gold: AnnotationSet,
    pred: Iterable[Prediction],
    frame: Frame,
    cfg: EvalConfig = EvalConfig(),
) -> ScoreTally:
    """M/S/G tally of one annotation set. Null-instantiated gold labels are not in G."""
    remaining = Counter((lab.fe_name, lab.span) for lab in gold.overt_labels)
    g = sum(cfg.weight(frame, lab.fe_name) for lab in gold.overt_labels)
    m = s = 0.0
    for fe, span in pred:
        w = cfg.weight(frame, fe)
        s += w
        key = (fe, tuple(span))
        if remaining[key] > 0:
            remaining[key] -= 1
            m += w
    if cfg.frame_credit:
        bonus = cfg.frame_credit_value
        return ScoreTally(m + bonus, s + bonus, g + bonus)
    return ScoreTally(m, s, g)


def total(tallies: Iterable[ScoreTally]) -> ScoreTally:
    out = ScoreTally()
    for t in tallies:
        out = out + t
    return out


def prf(m: float, s: float, g: float) -> Scores:
    """P = M/S, R = M/G, harmonic mean; any undefined ratio reads as 0.

    F1 is computed as 2M/(S+G), which equals 2PR/(P+R) but rounds once.
    """
    p = m / s if s > 0 else 0.0
    r = m / g if g > 0 else 0.0
    f = 2 * m / (s + g) if m > 0 else 0.0
    return Scores(p, r, f)


def aggregate(tallies: Iterable[ScoreTally]) -> Scores:
    t = total(tallies)
    return prf(t.match, t.score, t.gold)


def score_corpus(
    gold: Corpus, predictions: Predictions, cfg: EvalConfig = EvalConfig()
) -> Dict[int, ScoreTally]:
    """Per annotation set tallies, keyed by annotation set id."""
    return {
        aid: score_annoset(a, predictions.get(aid, []), gold.frames[a.frame_id], cfg)
        for aid, a in sorted(gold.annotation_sets.items())
    }


def per_sentence(gold: Corpus, tallies: Dict[int, ScoreTally]) -> List[ScoreTally]:
    """Sum annotation-set tallies per sentence, ordered by sentence id."""
    by_sid: Dict[int, ScoreTally] = {}
    for aid, t in tallies.items():
        sid = gold.annotation_sets[aid].sentence_id
        by_sid[sid] = by_sid.get(sid, ScoreTally()) + t
    return [by_sid[sid] for sid in sorted(by_sid)]


def resample_indices(n: int, b: int, seed: int) -> np.ndarray:
    """``b`` rows of ``n`` indices drawn with replacement."""
    return np.random.default_rng(seed).integers(0, n, size=(b, n))


def _as_array(tallies: Sequence[ScoreTally]) -> np.ndarray:
    return np.array([(t.match, t.score, t.gold) for t in tallies], dtype=np.float64).reshape(-1, 3)


def _f1_rows(sums: np.ndarray) -> np.ndarray:
    m, s, g = sums[..., 0], sums[..., 1], sums[..., 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(m > 0, 2 * m / (s + g), 0.0)


def bootstrap_deltas(
    a: Sequence[ScoreTally], b: Sequence[ScoreTally], indices: np.ndarray
) -> Tuple[float, np.ndarray]:
    """Full-set F1(A) - F1(B), and the same difference on each resample."""
    ta, tb = _as_array(a), _as_array(b)
    delta = float(_f1_rows(ta.sum(axis=0)) - _f1_rows(tb.sum(axis=0)))
    resampled = _f1_rows(ta[indices].sum(axis=1)) - _f1_rows(tb[indices].sum(axis=1))
    return delta, resampled


def bootstrap_p(
    a: Sequence[ScoreTally],
    b: Sequence[ScoreTally],
    samples: int = 10000,
    seed: int = 0,
    indices: Optional[np.ndarray] = None,
) -> float:
    """Paired bootstrap p-value that system A beats system B.

    *a* and *b* are aligned per-sentence tallies. A resample counts when its
    F1 difference exceeds twice the full-set difference; p is the fraction
    of resamples that count.
    """
    if len(a) != len(b):
        raise ValueError("tallies of A and B must be aligned")
    if not a:
        raise EmptyTestSet("cannot bootstrap an empty test set")
    if samples < 1:
        raise ValueError("need at least one bootstrap sample")
    if indices is None:
        indices = resample_indices(len(a), samples, seed)
    delta, resampled = bootstrap_deltas(a, b, indices)
    return int(np.count_nonzero(resampled > 2 * delta)) / len(indices)


def load_predictions(path) -> Predictions:
    """Read prediction JSON Lines (``annoset_id`` plus ``labels`` with ``fe``/``start``/``end``)."""
    out: Predictions = {}
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            out[int(rec["annoset_id"])] = [
                (lab["fe"], (int(lab["start"]), int(lab["end"]))) for lab in rec.get("labels", [])
            ]
    return out


def gold_as_predictions(c: Corpus) -> Predictions:
    return {
        aid: [(lab.fe_name, lab.span) for lab in a.overt_labels]
        for aid, a in c.annotation_sets.items()
    }


def format_table(gold: Corpus, tallies: Dict[int, ScoreTally]) -> str:
    """One ``M S G`` line per annotation set."""
    lines = [f"{'annoset':>8} {'frame':<24} {'M':>6} {'S':>6} {'G':>6}"]
    for aid, t in tallies.items():
        frame = gold.frames[gold.annotation_sets[aid].frame_id].name
        lines.append(f"{aid:>8} {frame:<24} {t.match:>6.1f} {t.score:>6.1f} {t.gold:>6.1f}")
    return "\n".join(lines)
