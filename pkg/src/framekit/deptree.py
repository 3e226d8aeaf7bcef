"""Dependency trees and candidate argument spans.

CoNLL input: blank-line separated blocks, one token per line, tab
separated. Ten columns (CoNLL-X: ID FORM LEMMA CPOSTAG POSTAG FEATS HEAD
DEPREL PHEAD PDEPREL) or eight (the same without PHEAD/PDEPREL). The POS
tag is read from POSTAG, falling back to CPOSTAG when POSTAG is ``_``.
Comment lines ``# sent_id = N`` and ``# text = ...`` give the sentence id
and surface text; tokens are aligned left to right in the text to obtain
character offsets. Without a text comment the forms are joined by single
spaces; without a sent_id the block's ordinal (from 1) is used.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import NotATree, ParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str
    pos: str
    head: int
    deprel: str
    char_start: int
    char_end: int  # inclusive


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"inverted span {self.start}>{self.end}")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def overlaps(self, other: "Span") -> bool:
        return self.start <= other.end and other.start <= self.end

    def __iter__(self):
        return iter(range(self.start, self.end + 1))


@dataclass(frozen=True)
class DependencyTree:
    sentence_id: int
    tokens: Tuple[Token, ...]
    text: str = ""

    def __post_init__(self):
        check_tree(self.tokens, self.sentence_id)

    def __len__(self) -> int:
        return len(self.tokens)

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    @cached_property
    def children(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {i: [] for i in range(len(self.tokens) + 1)}
        for t in self.tokens:
            out[t.head].append(t.index)
        return out

    @cached_property
    def root(self) -> int:
        return self.children[0][0]

    def descendants(self, index: int) -> Set[int]:
        """*index* and everything below it."""
        out, stack = set(), [index]
        while stack:
            i = stack.pop()
            out.add(i)
            stack.extend(self.children[i])
        return out

    def span_head(self, span: Span) -> int:
        """First token of *span* whose head lies outside it."""
        for i in span:
            h = self.token(i).head
            if not span.start <= h <= span.end:
                return i
        return span.start

    def path_to_root(self, index: int) -> List[int]:
        path = [index]
        while path[-1] != 0:
            path.append(self.token(path[-1]).head)
        return path


def check_tree(tokens: Sequence[Token], where=None) -> None:
    n = len(tokens)
    if n == 0:
        raise NotATree(f"empty tree ({where})")
    roots = []
    for pos, t in enumerate(tokens, 1):
        if t.index != pos:
            raise NotATree(f"token {pos} has index {t.index} ({where})")
        if not 0 <= t.head <= n:
            raise NotATree(f"token {t.index} head {t.head} out of range ({where})")
        if t.head == t.index:
            raise NotATree(f"token {t.index} heads itself ({where})")
        if t.head == 0:
            roots.append(t.index)
    if len(roots) != 1:
        raise NotATree(f"expected exactly one root, found {len(roots)} ({where})")
    # every token must reach the root without revisiting a node
    state = [0] * (n + 1)  # 0 unknown, 1 on current path, 2 reaches root
    state[0] = 2
    for start in range(1, n + 1):
        path, i = [], start
        while state[i] == 0:
            state[i] = 1
            path.append(i)
            i = tokens[i - 1].head
        if state[i] == 1:
            raise NotATree(f"cycle through token {i} ({where})")
        for j in path:
            state[j] = 2


def _align(forms: Sequence[str], text: str, where) -> List[Tuple[int, int]]:
    offsets, pos = [], 0
    for form in forms:
        found = text.find(form, pos)
        if found < 0:
            raise ParseError(f"token {form!r} not found in sentence text", where)
        offsets.append((found, found + len(form) - 1))
        pos = found + len(form)
    return offsets


def build_tree(
    sentence_id: int,
    rows: Sequence[Tuple[str, str, str, int, str]],
    text: Optional[str] = None,
) -> DependencyTree:
    """Build a tree from ``(form, lemma, pos, head, deprel)`` rows."""
    forms = [r[0] for r in rows]
    if text is None:
        text = " ".join(forms)
    offsets = _align(forms, text, f"sentence {sentence_id}")
    tokens = tuple(
        Token(i, form, lemma, pos, head, deprel, s, e)
        for i, ((form, lemma, pos, head, deprel), (s, e)) in enumerate(zip(rows, offsets), 1)
    )
    return DependencyTree(sentence_id, tokens, text)


def parse_conll(lines: Iterable[str], source: str = "<input>") -> List[DependencyTree]:
    trees: List[DependencyTree] = []
    block: List[Tuple[int, List[str]]] = []
    meta: Dict[str, str] = {}

    def flush():
        if not block:
            meta.clear()
            return
        where = f"{source}:{block[0][0]}"
        rows = []
        for lineno, cols in block:
            if len(cols) not in (8, 10):
                raise ParseError(f"expected 8 or 10 columns, got {len(cols)}", f"{source}:{lineno}")
            if cols[0] != str(len(rows) + 1):
                raise ParseError(f"token id {cols[0]!r} out of sequence", f"{source}:{lineno}")
            try:
                head = int(cols[6])
            except ValueError:
                raise ParseError(f"bad head {cols[6]!r}", f"{source}:{lineno}") from None
            pos = cols[4] if cols[4] != "_" else cols[3]
            rows.append((cols[1], cols[2], pos, head, cols[7]))
        sid = int(meta["sent_id"]) if "sent_id" in meta else len(trees) + 1
        try:
            trees.append(build_tree(sid, rows, meta.get("text")))
        except NotATree as exc:
            raise NotATree(f"{exc} at {where}") from None
        block.clear()
        meta.clear()

    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        if not line.strip():
            flush()
        elif line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                meta[key.strip()] = value[1:] if value.startswith(" ") else value
        else:
            block.append((lineno, line.split("\t")))
    flush()
    return trees


def ingest_conll(path) -> List[DependencyTree]:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_conll(fh, str(path))


def format_conll(trees: Iterable[DependencyTree]) -> str:
    out = []
    for t in trees:
        out.append(f"# sent_id = {t.sentence_id}")
        out.append(f"# text = {t.text}")
        for tok in t.tokens:
            out.append(
                "\t".join([str(tok.index), tok.form, tok.lemma, tok.pos, tok.pos, "_",
                           str(tok.head), tok.deprel, "_", "_"])
            )
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


def candidate_spans(t: DependencyTree) -> FrozenSet[Span]:
    """Single tokens plus every token's subtree that forms a contiguous interval."""
    spans = {Span(i, i) for i in range(1, len(t) + 1)}
    # post-order accumulation of (min, max, size) per subtree
    lo = list(range(len(t) + 1))
    hi = list(range(len(t) + 1))
    size = [1] * (len(t) + 1)
    order, stack = [], [t.root]
    while stack:
        i = stack.pop()
        order.append(i)
        stack.extend(t.children[i])
    for i in reversed(order):
        for c in t.children[i]:
            lo[i] = min(lo[i], lo[c])
            hi[i] = max(hi[i], hi[c])
            size[i] += size[c]
        if hi[i] - lo[i] + 1 == size[i]:
            spans.add(Span(lo[i], hi[i]))
    return frozenset(spans)


def align_char_span(t: DependencyTree, start: int, end: int) -> Tuple[Optional[Span], bool]:
    """Minimal token span covering characters ``start..end`` (inclusive).

    Returns ``(span, exact)``; ``exact`` is False when the character span
    does not begin and end on token boundaries. ``span`` is None when no
    token overlaps the characters.
    """
    covered = [tok.index for tok in t.tokens if tok.char_start <= end and start <= tok.char_end]
    if not covered:
        return None, False
    first, last = t.token(covered[0]), t.token(covered[-1])
    exact = first.char_start == start and last.char_end == end
    return Span(covered[0], covered[-1]), exact


def token_char_span(t: DependencyTree, span: Span) -> Tuple[int, int]:
    return t.token(span.start).char_start, t.token(span.end).char_end


def span_oracle_recall(trees: Iterable[DependencyTree], gold_annosets) -> float:
    """Fraction of gold overt argument spans the span heuristic can produce.

    Gold labels are aligned to the minimal covering token interval; labels
    that do not sit on token boundaries are counted as misses and logged.
    """
    by_sid = {t.sentence_id: t for t in trees}
    total = hits = 0
    cache: Dict[int, FrozenSet[Span]] = {}
    for a in gold_annosets:
        tree = by_sid.get(a.sentence_id)
        if tree is None:
            continue
        if a.sentence_id not in cache:
            cache[a.sentence_id] = candidate_spans(tree)
        for label in a.overt_labels:
            total += 1
            span, exact = align_char_span(tree, label.start, label.end)
            if not exact:
                logger.debug("annotation set %d: %s not token aligned", a.id, label.fe_name)
                continue
            hits += span in cache[a.sentence_id]
    if total == 0:
        raise ValueError("no gold overt labels to measure recall on")
    return hits / total


def substitute_tokens(t: DependencyTree, new_text: str, forms: Dict[int, Tuple[str, str]]) -> DependencyTree:
    """Copy of *t* with token forms/lemmas replaced and offsets re-aligned to *new_text*.

    *forms* maps token index to ``(form, lemma)``. The tree structure and
    POS tags are kept.
    """
    rows = []
    for tok in t.tokens:
        form, lemma = forms.get(tok.index, (tok.form, tok.lemma))
        rows.append((form, lemma, tok.pos, tok.head, tok.deprel))
    return build_tree(t.sentence_id, rows, new_text)
