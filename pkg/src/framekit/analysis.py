"""Error analysis: per-FE scores, febar ratio, PT.GF breakdown, coverage, rank-frequency."""

from __future__ import annotations

import csv
import json
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import EmptyPattern, MissingLayer, NoOccurrences
from .evaluation import EvalConfig, Predictions, ScoreTally, prf
from .fndata import Corpus
from .valence import extract_valence_pattern

CATCH_ALL = ("*", "*")


@dataclass
class FeReport:
    fe_name: str
    train_count: int
    eval_count: int
    precision: float
    recall: float
    f1: float


class ItemKind(str, Enum):
    LU = "LexicalUnit"
    FE = "FrameElement"
    VU = "ValenceUnit"
    VP = "ValencePattern"


@dataclass
class CoverageRow:
    train_distinct: int
    eval_distinct: int
    overlap_pct: float


CoverageReport = Dict[ItemKind, CoverageRow]


def _matched(gold_labels, preds):
    """Pair predictions with unclaimed gold labels; returns (hits, misses) index lists."""
    remaining = defaultdict(list)
    for i, lab in enumerate(gold_labels):
        remaining[(lab.fe_name, lab.span)].append(i)
    hits, misses = [], []
    for j, (fe, span) in enumerate(preds):
        slot = remaining.get((fe, tuple(span)))
        if slot:
            hits.append((j, slot.pop(0)))
        else:
            misses.append(j)
    return hits, misses


def fe_counts(c: Corpus) -> Counter:
    return Counter(lab.fe_name for a in c.annotation_sets.values() for lab in a.overt_labels)


def per_fe_tallies(
    gold: Corpus, pred: Predictions, cfg: EvalConfig = EvalConfig()
) -> Dict[str, ScoreTally]:
    """M/S/G restricted to each frame element name (no frame credit)."""
    acc: Dict[str, List[float]] = defaultdict(lambda: [0.0, 0.0, 0.0])
    for aid, a in gold.annotation_sets.items():
        frame = gold.frames[a.frame_id]
        golds = a.overt_labels
        preds = pred.get(aid, [])
        for lab in golds:
            acc[lab.fe_name][2] += cfg.weight(frame, lab.fe_name)
        hits, _ = _matched(golds, preds)
        for fe, _span in preds:
            acc[fe][1] += cfg.weight(frame, fe)
        for j, _ in hits:
            acc[preds[j][0]][0] += cfg.weight(frame, preds[j][0])
    return {fe: ScoreTally(*v) for fe, v in sorted(acc.items())}


def per_fe_scores(
    gold: Corpus,
    pred: Predictions,
    train: Optional[Corpus] = None,
    cfg: EvalConfig = EvalConfig(),
    sort_by: str = "eval_count",
) -> List[FeReport]:
    tallies = per_fe_tallies(gold, pred, cfg)
    eval_counts = fe_counts(gold)
    train_counts = fe_counts(train) if train is not None else Counter()
    reports = []
    for fe, t in tallies.items():
        s = prf(t.match, t.score, t.gold)
        reports.append(FeReport(fe, train_counts[fe], eval_counts[fe], s.precision, s.recall, s.f1))
    if sort_by == "f1":
        reports.sort(key=lambda r: (-r.f1, r.fe_name))
    else:
        reports.sort(key=lambda r: (-r.eval_count, r.fe_name))
    return reports


def febar_ratio(c: Corpus, fe_name: str) -> float:
    """Share of an FE's overt occurrences whose span is exactly a target span of its annotation set."""
    n_c = n_febc = 0
    for a in c.annotation_sets.values():
        targets = set(a.target_spans)
        for lab in a.overt_labels:
            if lab.fe_name == fe_name:
                n_c += 1
                n_febc += lab.span in targets
    if n_c == 0:
        raise NoOccurrences(f"frame element {fe_name!r} does not occur")
    return n_febc / n_c


@dataclass
class PtGfRow:
    pt: str
    gf: str
    eval_count: int
    match: float
    score: float
    gold: float
    precision: float
    recall: float
    f1: float
    precision_defined: bool


def ptgf_breakdown(
    gold: Corpus, pred: Predictions, cfg: EvalConfig = EvalConfig()
) -> Dict[Tuple[str, str], PtGfRow]:
    """Tallies grouped by the gold label's (PT, GF).

    Matched predictions go to their gold label's group. An unmatched
    prediction goes to the group of a gold label with the same span (first
    in label order) when there is one, else to ``("*", "*")``.
    """
    acc: Dict[Tuple[str, str], List[float]] = defaultdict(lambda: [0.0, 0.0, 0.0])
    counts: Counter = Counter()
    for aid, a in gold.annotation_sets.items():
        frame = gold.frames[a.frame_id]
        golds = a.overt_labels
        preds = pred.get(aid, [])
        for lab in golds:
            key = (lab.pt or "?", lab.gf or "?")
            counts[key] += 1
            acc[key][2] += cfg.weight(frame, lab.fe_name)
        hits, misses = _matched(golds, preds)
        for j, i in hits:
            lab = golds[i]
            key = (lab.pt or "?", lab.gf or "?")
            w = cfg.weight(frame, preds[j][0])
            acc[key][0] += w
            acc[key][1] += w
        by_span = {}
        for lab in golds:
            by_span.setdefault(lab.span, (lab.pt or "?", lab.gf or "?"))
        for j in misses:
            fe, span = preds[j]
            acc[by_span.get(tuple(span), CATCH_ALL)][1] += cfg.weight(frame, fe)
    out = {}
    for key in sorted(acc):
        m, s, g = acc[key]
        scores = prf(m, s, g)
        out[key] = PtGfRow(key[0], key[1], counts[key], m, s, g,
                           scores.precision, scores.recall, scores.f1, s > 0)
    return out


def items(c: Corpus, kind: ItemKind) -> Counter:
    """Occurrence counts of the distinct items of *kind* in *c*'s annotation."""
    kind = ItemKind(kind)
    out: Counter = Counter()
    for a in c.annotation_sets.values():
        frame = c.frames[a.frame_id]
        if kind is ItemKind.LU:
            lu = c.lexical_units[a.lu_id]
            out[(lu.lemma, lu.pos.value, frame.name)] += 1
        elif kind is ItemKind.FE:
            for lab in a.labels:
                out[(frame.name, lab.fe_name)] += 1
        elif kind is ItemKind.VU:
            for lab in a.overt_labels:
                if lab.pt and lab.gf:
                    out[(frame.name, lab.fe_name, lab.pt, lab.gf)] += 1
        else:
            try:
                p = extract_valence_pattern(a, frame)
            except (EmptyPattern, MissingLayer):
                continue
            out[frame.name + ":" + " ".join(sorted(str(u) for u in p.units))] += 1
    return out


def coverage_overlap(train: Corpus, evaluation: Corpus) -> CoverageReport:
    report: CoverageReport = {}
    for kind in ItemKind:
        tr, ev = set(items(train, kind)), set(items(evaluation, kind))
        pct = round(100.0 * len(ev & tr) / len(ev), 1) if ev else 0.0
        report[kind] = CoverageRow(len(tr), len(ev), pct)
    return report


def rank_frequency(c: Corpus, kind: ItemKind) -> List[Tuple[int, int]]:
    """``(rank, count)`` pairs, most frequent first; equal counts ordered by item key."""
    counts = items(c, kind)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], str(kv[0])))
    return [(rank, n) for rank, (_, n) in enumerate(ordered, 1)]


def write_csv(rows: Sequence, path) -> None:
    rows = [asdict(r) if hasattr(r, "__dataclass_fields__") else dict(r) for r in rows]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        if not rows:
            return
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_rank_frequency(rows: Iterable[Tuple[int, int]], path) -> None:
    """Two-column whitespace-separated file, plottable on log-log axes with gnuplot."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write("# rank count\n")
        for rank, n in rows:
            fh.write(f"{rank} {n}\n")


def coverage_to_dict(report: CoverageReport) -> dict:
    return {kind.value: asdict(row) for kind, row in report.items()}
