"""Sparse linear scorer trained with a squared structured hinge loss and AdaDelta."""

from __future__ import annotations

import copy
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..deptree import Span
from .features import FeatureVector, TemplateConfig

FORMAT = "framekit-argid"
VERSION = 1


@dataclass
class Model:
    weights: Dict[int, float] = field(default_factory=dict)
    grad_accum: Dict[int, float] = field(default_factory=dict)
    update_accum: Dict[int, float] = field(default_factory=dict)
    lam: float = 1e-6
    rho: float = 0.95
    eps: float = 1e-6
    templates: TemplateConfig = field(default_factory=TemplateConfig)

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")

    def norm_sq(self) -> float:
        return sum(w * w for w in self.weights.values())

    def to_dict(self) -> dict:
        def hexmap(d):
            return {f"{k:016x}": v for k, v in sorted(d.items())}

        return {
            "format": FORMAT,
            "version": VERSION,
            "templates": self.templates.to_dict(),
            "lambda": self.lam,
            "rho": self.rho,
            "eps": self.eps,
            "weights": hexmap(self.weights),
            "grad_accum": hexmap(self.grad_accum),
            "update_accum": hexmap(self.update_accum),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Model":
        if d.get("format") != FORMAT or d.get("version") != VERSION:
            raise ValueError(f"not a {FORMAT} v{VERSION} model file")

        def intmap(m):
            return {int(k, 16): float(v) for k, v in m.items()}

        return cls(
            weights=intmap(d["weights"]),
            grad_accum=intmap(d["grad_accum"]),
            update_accum=intmap(d["update_accum"]),
            lam=d["lambda"],
            rho=d["rho"],
            eps=d["eps"],
            templates=TemplateConfig(**d["templates"]),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Model":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def score(m: Model, fv: FeatureVector) -> float:
    w = m.weights
    return sum(w.get(k, 0.0) * v for k, v in fv.items())


@dataclass(frozen=True)
class TrainInstance:
    """One (annotation set, role) pair: pick the gold span among candidates.

    ``candidates`` contains ``None`` for the null span; ``features`` is
    aligned with ``candidates``.
    """

    role: str
    gold: Optional[Span]
    candidates: Tuple[Optional[Span], ...]
    features: Tuple[FeatureVector, ...]
    annoset_id: Optional[int] = None
    frame_id: Optional[int] = None

    def __post_init__(self):
        if self.gold not in self.candidates:
            raise ValueError("gold span must be among the candidates")
        if len(self.features) != len(self.candidates):
            raise ValueError("one feature vector per candidate")


def _axpy(out: Dict[int, float], a: float, fv: FeatureVector) -> None:
    for k, v in fv.items():
        out[k] = out.get(k, 0.0) + a * v


def instance_loss(m: Model, inst: TrainInstance) -> Tuple[float, Dict[int, float]]:
    """Squared hinge loss against the cost-augmented margin violator, and its gradient."""
    scores = [score(m, fv) for fv in inst.features]
    g = inst.candidates.index(inst.gold)
    best, h = scores[g], g
    for i, s in enumerate(scores):
        if i != g and s + 1.0 > best:
            best, h = s + 1.0, i
    if h == g:
        return 0.0, {}
    inner = best - scores[g]
    grad: Dict[int, float] = {}
    _axpy(grad, 2.0 * inner, inst.features[h])
    _axpy(grad, -2.0 * inner, inst.features[g])
    return inner * inner, {k: v for k, v in grad.items() if v != 0.0}


def objective(m: Model, instances: Sequence[TrainInstance]) -> float:
    """Average loss plus ``lam / 2 * ||w||^2``."""
    if not instances:
        return 0.5 * m.lam * m.norm_sq()
    total = sum(instance_loss(m, inst)[0] for inst in instances)
    return total / len(instances) + 0.5 * m.lam * m.norm_sq()


def adadelta_step(m: Model, grad: Dict[int, float]) -> None:
    """In-place AdaDelta update of the coordinates in *grad*."""
    rho, eps = m.rho, m.eps
    w, eg, ex = m.weights, m.grad_accum, m.update_accum
    for k, g in grad.items():
        eg_k = rho * eg.get(k, 0.0) + (1.0 - rho) * g * g
        dx = -math.sqrt(ex.get(k, 0.0) + eps) / math.sqrt(eg_k + eps) * g
        ex[k] = rho * ex.get(k, 0.0) + (1.0 - rho) * dx * dx
        eg[k] = eg_k
        w[k] = w.get(k, 0.0) + dx


def regularize_step(m: Model) -> None:
    """AdaDelta step on the L2 penalty alone, over every weight."""
    adadelta_step(m, {k: m.lam * w for k, w in m.weights.items()})


def train(
    m: Model,
    instances: Sequence[TrainInstance],
    epochs: int = 1,
    lam: Optional[float] = None,
    rho: Optional[float] = None,
    eps: Optional[float] = None,
    seed: int = 0,
    on_epoch: Optional[Callable[[int, float], None]] = None,
) -> Model:
    """Online training; returns a new model, *m* is left untouched.

    Instances are shuffled every epoch from a generator seeded with *seed*.
    Each update applies the instance's loss gradient plus ``lam * w`` on the
    coordinates that gradient touches. ``on_epoch(epoch, objective)`` is
    called after each epoch with the objective over all instances.
    """
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    m = copy.deepcopy(m)
    if lam is not None:
        m.lam = lam
    if rho is not None:
        m.rho = rho
    if eps is not None:
        m.eps = eps
    if not instances:
        return m
    rng = random.Random(seed)
    order = list(range(len(instances)))
    for epoch in range(1, epochs + 1):
        rng.shuffle(order)
        for i in order:
            _, grad = instance_loss(m, instances[i])
            if not grad:
                continue
            for k in grad:
                grad[k] += m.lam * m.weights.get(k, 0.0)
            adadelta_step(m, grad)
        if on_epoch is not None:
            on_epoch(epoch, objective(m, instances))
    return m
