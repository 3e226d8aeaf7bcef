"""Word-vector tables and the semantic filters over paraphrastic candidates.

TextVec format: an optional ``count dim`` header line, then one
``lemma v1 ... vd`` line per word (UTF-8, space separated). BinaryVec is the
word2vec binary layout: a ``count dim`` text header, then per word the
lemma, a space and ``dim`` little-endian float32 values.
"""

from __future__ import annotations

import logging
import math
import random
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, EmbeddingError, ParseError, ZeroVector

logger = logging.getLogger(__name__)


class TableFormat(str, Enum):
    TEXT = "text"
    BINARY = "binary"


class EmbeddingTable:
    def __init__(self, dimension: Optional[int] = None):
        self.dimension = dimension
        self._vectors: Dict[str, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, word: str) -> bool:
        return word in self._vectors

    def add(self, word: str, vector) -> bool:
        """Insert *word*; returns False (and warns) if it was already present."""
        vec = np.asarray(vector, dtype=np.float64)
        if vec.ndim != 1 or vec.size == 0:
            raise DimensionMismatch(f"{word!r}: vector must be a non-empty 1-d array")
        if self.dimension is None:
            self.dimension = vec.size
        elif vec.size != self.dimension:
            raise DimensionMismatch(f"{word!r} has dimension {vec.size}, expected {self.dimension}")
        if word in self._vectors:
            warnings.warn(f"duplicate entry for {word!r}; keeping the first", stacklevel=2)
            return False
        self._vectors[word] = vec
        return True

    def lookup(self, lemma: str) -> Optional[np.ndarray]:
        """Vector for *lemma*, or None when out of vocabulary.

        Multi-word lemmas try the underscore-joined key first, then the mean
        of the per-token vectors (only if every token is known).
        """
        if self.dimension is None:
            raise EmbeddingError("embedding table is empty")
        if lemma in self._vectors:
            return self._vectors[lemma]
        tokens = lemma.split()
        if len(tokens) > 1:
            joined = "_".join(tokens)
            if joined in self._vectors:
                return self._vectors[joined]
            vecs = [self._vectors.get(t) for t in tokens]
            if all(v is not None for v in vecs):
                return np.mean(vecs, axis=0)
        return None

    def similarity(self, a: str, b: str) -> float:
        """Cosine similarity of two lemmas; ``-inf`` if either is unknown."""
        u, v = self.lookup(a), self.lookup(b)
        if u is None or v is None:
            return -math.inf
        return cosine(u, v)


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(f"shapes {u.shape} and {v.shape} differ")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine is undefined for a zero vector")
    # rounding can push |cos| a hair past 1
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def _load_text(path: Path) -> EmbeddingTable:
    table = EmbeddingTable()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue
            try:
                values = [float(x) for x in parts[1:]]
            except ValueError as exc:
                raise ParseError(str(exc), f"{path}:{lineno}") from exc
            if not values:
                raise ParseError("word without vector", f"{path}:{lineno}")
            table.add(parts[0], values)
    return table


def _load_binary(path: Path) -> EmbeddingTable:
    table = EmbeddingTable()
    with path.open("rb") as fh:
        header = fh.readline().split()
        if not header:
            return table
        if len(header) != 2:
            raise ParseError("expected 'count dim' header", f"{path}:1")
        count, dim = int(header[0]), int(header[1])
        for i in range(count):
            word = bytearray()
            while True:
                ch = fh.read(1)
                if not ch:
                    raise ParseError("truncated file", f"{path}:entry {i}")
                if ch == b" ":
                    break
                if ch != b"\n":
                    word.extend(ch)
            raw = fh.read(4 * dim)
            if len(raw) != 4 * dim:
                raise ParseError("truncated vector", f"{path}:entry {i}")
            table.add(word.decode("utf-8"), np.frombuffer(raw, dtype="<f4"))
    return table


def load_table(path, fmt=TableFormat.TEXT) -> EmbeddingTable:
    path = Path(path)
    if TableFormat(fmt) is TableFormat.BINARY:
        return _load_binary(path)
    return _load_text(path)


def save_binary(table: EmbeddingTable, path) -> None:
    with Path(path).open("wb") as fh:
        fh.write(f"{len(table)} {table.dimension}\n".encode())
        for word, vec in table._vectors.items():
            fh.write(word.encode("utf-8") + b" ")
            fh.write(np.asarray(vec, dtype="<f4").tobytes())
            fh.write(b"\n")


class FilterMode(str, Enum):
    NONE = "none"
    RANDOM = "random"
    TOP = "top"
    THRESHOLD = "threshold"


@dataclass(frozen=True)
class SemanticFilterSpec:
    mode: FilterMode = FilterMode.NONE
    n: Optional[int] = None
    threshold: Optional[float] = None
    seed: int = 0
    table_id: Optional[str] = None

    def __post_init__(self):
        if self.mode in (FilterMode.RANDOM, FilterMode.TOP) and (self.n is None or self.n < 1):
            raise ValueError("random/top filters need n >= 1")
        if self.mode is FilterMode.THRESHOLD and (
            self.threshold is None or not -1.0 <= self.threshold <= 1.0
        ):
            raise ValueError("threshold must lie in [-1, 1]")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "SemanticFilterSpec":
        """Parse ``none``, ``random-N``, ``top-N`` or ``threshold-T``."""
        if text in ("", "none"):
            return cls()
        mode, _, arg = text.partition("-")
        try:
            mode = FilterMode(mode)
            if mode is FilterMode.THRESHOLD:
                return cls(mode, threshold=float(arg), seed=seed)
            return cls(mode, n=int(arg), seed=seed)
        except ValueError as exc:
            raise ValueError(f"bad semantic filter {text!r}: {exc}") from None

    @property
    def needs_table(self) -> bool:
        return self.mode in (FilterMode.TOP, FilterMode.THRESHOLD)


def semantic_filter(
    source_lemma: str,
    candidates: Sequence[str],
    spec: SemanticFilterSpec,
    table: Optional[EmbeddingTable] = None,
) -> List[str]:
    """Apply *spec* to *candidates*.

    Random keeps input order; Top and Threshold order by decreasing cosine
    to the source, ties by lemma. Unknown candidates never pass Top or
    Threshold. An unknown source disables Top/Threshold (list unchanged).
    """
    if spec.mode is FilterMode.NONE:
        return list(candidates)
    if spec.mode is FilterMode.RANDOM:
        if len(candidates) <= spec.n:
            return list(candidates)
        picked = set(random.Random(spec.seed).sample(range(len(candidates)), spec.n))
        return [c for i, c in enumerate(candidates) if i in picked]

    if table is None:
        raise EmbeddingError(f"{spec.mode.value} filter requires an embedding table")
    if table.lookup(source_lemma) is None:
        logger.info("source %r not in table; semantic filter disabled", source_lemma)
        return list(candidates)
    scored = sorted(((table.similarity(source_lemma, c), c) for c in candidates), key=lambda x: (-x[0], x[1]))
    scored = [(s, c) for s, c in scored if s != -math.inf]
    if spec.mode is FilterMode.TOP:
        return [c for _, c in scored[: spec.n]]
    return [c for s, c in scored if s >= spec.threshold]
