import math
import random

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from framekit.embeddings import (
    EmbeddingTable,
    FilterMode,
    SemanticFilterSpec,
    cosine,
    load_table,
    save_binary,
    semantic_filter,
)
from framekit.errors import DimensionMismatch, EmbeddingError, ParseError, ZeroVector

from helpers import TOY


def test_load_two_words(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("cat 1 0 0\ndog 0 1 0\n")
    t = load_table(p)
    assert len(t) == 2 and t.dimension == 3


def test_header_line_skipped(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("2 3\ncat 1 0 0\ndog 0 1 0\n")
    assert len(load_table(p)) == 2


def test_mixed_dimensions(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("cat 1 0 0\ndog 0 1 0 1\n")
    with pytest.raises(DimensionMismatch):
        load_table(p)


def test_bad_number(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("cat 1 zero 0\n")
    with pytest.raises(ParseError):
        load_table(p)


def test_empty_file_then_query_fails(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("")
    t = load_table(p)
    assert len(t) == 0 and t.dimension is None
    with pytest.raises(EmbeddingError):
        t.similarity("a", "b")


def test_duplicate_keeps_first(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("cat 1 0\ncat 0 1\n")
    with pytest.warns(UserWarning):
        t = load_table(p)
    assert list(t.lookup("cat")) == [1.0, 0.0]


def test_binary_round_trip(tmp_path):
    t = load_table(TOY / "vectors.txt")
    save_binary(t, tmp_path / "v.bin")
    b = load_table(tmp_path / "v.bin", "binary")
    assert len(b) == len(t) and b.dimension == t.dimension
    for w in ("buy", "pick up", "know"):
        np.testing.assert_allclose(b.lookup(w), t.lookup(w), rtol=1e-6)


def test_cosine_examples():
    assert cosine([3, 4], [3, 4]) == pytest.approx(1.0)
    assert cosine([1, 0], [0, 1]) == 0.0
    assert cosine([1, 2, 3], [4, 5, 6]) == pytest.approx(32 / (math.sqrt(14) * math.sqrt(77)), abs=1e-12)
    assert cosine([1, 2, 3], [4, 5, 6]) == pytest.approx(0.974632, abs=1e-6)


def test_cosine_errors():
    with pytest.raises(ZeroVector):
        cosine([0, 0], [1, 0])
    with pytest.raises(DimensionMismatch):
        cosine([1, 0], [1, 0, 0])


vec = st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3)


@given(vec, vec, st.floats(0.01, 100))
def test_cosine_symmetric_and_scale_invariant(u, v, alpha):
    assume(np.linalg.norm(u) > 1e-3 and np.linalg.norm(v) > 1e-3)
    assert abs(cosine(u, v) - cosine(v, u)) <= 1e-12
    assert abs(cosine(np.multiply(alpha, u), v) - cosine(u, v)) <= 1e-9
    assert -1.0 <= cosine(u, v) <= 1.0


def multiword_table():
    t = EmbeddingTable()
    t.add("pick", [1.0, 0.0])
    t.add("up", [0.0, 1.0])
    t.add("hand_out", [2.0, 2.0])
    return t


def test_multiword_lookup():
    t = multiword_table()
    assert list(t.lookup("hand out")) == [2.0, 2.0]
    assert list(t.lookup("pick up")) == [0.5, 0.5]
    assert t.lookup("give away") is None


def robustness_table():
    """buy/acquire at cosine 0.57, buy/drink at 0.50 (constructed exactly)."""
    t = EmbeddingTable()
    t.add("buy", [1.0, 0.0, 0.0])
    t.add("acquire", [0.57, math.sqrt(1 - 0.57 ** 2), 0.0])
    t.add("drink", [0.5, 0.0, math.sqrt(0.75)])
    return t


def test_threshold_keeps_057_drops_050():
    t = robustness_table()
    assert t.similarity("buy", "acquire") == pytest.approx(0.57)
    assert t.similarity("buy", "drink") == pytest.approx(0.50)
    spec = SemanticFilterSpec.parse("threshold-0.55")
    assert semantic_filter("buy", ["drink", "acquire"], spec, t) == ["acquire"]


def test_threshold_inclusive():
    t = EmbeddingTable()
    t.add("a", [1.0, 0.0])
    t.add("b", [1.0, 0.0])
    assert semantic_filter("a", ["b"], SemanticFilterSpec(FilterMode.THRESHOLD, threshold=1.0), t) == ["b"]


def test_top_n_larger_than_list_sorts_all():
    t = robustness_table()
    assert semantic_filter("buy", ["drink", "acquire"], SemanticFilterSpec.parse("top-5"), t) == ["acquire", "drink"]


def test_random_deterministic():
    spec = SemanticFilterSpec.parse("random-2", seed=11)
    cands = ["a", "b", "c", "d", "e"]
    first = semantic_filter("x", cands, spec)
    assert first == semantic_filter("x", cands, spec)
    assert len(first) == 2 and set(first) <= set(cands)
    assert first == [c for c in cands if c in first]
    assert semantic_filter("x", ["a"], spec) == ["a"]


def test_none_unchanged():
    assert semantic_filter("x", ["b", "a"], SemanticFilterSpec()) == ["b", "a"]


def test_oov_policy():
    t = robustness_table()
    assert semantic_filter("buy", ["acquire", "zzz"], SemanticFilterSpec.parse("threshold--1"), t) == ["acquire"]
    assert semantic_filter("zzz", ["drink", "acquire"], SemanticFilterSpec.parse("top-1"), t) == ["drink", "acquire"]


def test_table_required():
    with pytest.raises(EmbeddingError):
        semantic_filter("buy", ["a"], SemanticFilterSpec.parse("top-1"), None)


@pytest.mark.parametrize("bad", ["top-0", "random-x", "threshold-2", "nearest-3"])
def test_bad_specs(bad):
    with pytest.raises(ValueError):
        SemanticFilterSpec.parse(bad)


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_top_subset_of_threshold_and_no_new_lemmas(seed, n):
    rng = random.Random(seed)
    t = EmbeddingTable()
    words = [f"w{i}" for i in range(8)]
    for w in ["src"] + words:
        t.add(w, [rng.gauss(0, 1) for _ in range(4)])
    cands = rng.sample(words + ["oov"], rng.randint(0, 9))
    top = semantic_filter("src", cands, SemanticFilterSpec(FilterMode.TOP, n=n), t)
    assert set(top) <= set(cands)
    if top:
        tmin = min(t.similarity("src", c) for c in top)
        thr = semantic_filter("src", cands, SemanticFilterSpec(FilterMode.THRESHOLD, threshold=max(-1.0, tmin)), t)
        assert set(top) <= set(thr) <= set(cands)
    rnd = semantic_filter("src", cands, SemanticFilterSpec(FilterMode.RANDOM, n=n, seed=seed))
    assert set(rnd) <= set(cands)
