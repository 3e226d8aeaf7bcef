import random

import pytest
from hypothesis import given, settings, strategies as st

from framekit.embeddings import EmbeddingTable, SemanticFilterSpec
from framekit.errors import ProjectionError
from framekit.fndata import AnnotationSet, LabelSpan, Sentence, validate_annotation_set
from framekit.paraphrase import (
    CandidateLattice,
    CandidateSet,
    GenerationConfig,
    OffsetMap,
    Replacement,
    augment,
    build_lattice,
    candidates_for_annoset,
    count_paraphrases,
    export_augmented,
    generate_sentences,
    project_trees,
    substitute,
)
from framekit.valence import build_index

from helpers import (anno_rec, corpus_from, frame_rec, lab, lu_rec, random_lattice, sent_rec,
                     toy_corpus, toy_trees)

GOODWILL = 1


@pytest.fixture(scope="module")
def idx():
    return build_index(toy_corpus())


def test_goodwill_counts(idx):
    lattice = build_lattice(GOODWILL, idx)
    assert lattice.counts == (1, 1, 0, 0, 2, 3)
    assert sum(1 for cs in lattice.sets if cs.candidates) == 4
    assert count_paraphrases(lattice) == 47
    c = idx.corpus
    named = [sorted(c.lexical_units[i].name for i, _ in cs.candidates) for cs in lattice.sets]
    assert named == [["donation.n"], ["into.prep"], [], [], ["can.v", "might.v"],
                     ["believe.v", "think.v", "understand.v"]]


def test_goodwill_generates_47_distinct(idx):
    gen = generate_sentences(build_lattice(GOODWILL, idx), idx.corpus)
    texts = [s.text for s, _ in gen]
    assert len(texts) == 47 == len(set(texts))
    assert idx.corpus.sentences[GOODWILL].text not in texts
    assert texts[0] == "Your contribution to Goodwill will mean more than you may believe"
    for sent, annosets in gen:
        assert len(annosets) == 6
        for a in annosets:
            assert validate_annotation_set(a, sent) is None


def test_sole_lu_has_no_candidates(idx):
    cs = candidates_for_annoset(idx.corpus.annotation_sets[3], idx)  # mean.v
    assert cs.candidates == () and cs.skipped is None


def test_source_never_its_own_candidate(idx):
    for aid, a in idx.corpus.annotation_sets.items():
        cs = candidates_for_annoset(a, idx)
        lemmas = [lem for _, lem in cs.candidates]
        assert a.lu_id not in [i for i, _ in cs.candidates]
        assert idx.corpus.lexical_units[a.lu_id].lemma not in lemmas
        assert len(lemmas) == len(set(lemmas))


def test_mwe_filter_drops_multiword_candidate(idx):
    a = idx.corpus.annotation_sets[16]  # bought
    plain = [lem for _, lem in candidates_for_annoset(a, idx).candidates]
    assert plain == ["pick up", "purchase"]
    filtered = [lem for _, lem in candidates_for_annoset(a, idx, GenerationConfig(mwe_filter=True)).candidates]
    assert filtered == ["purchase"]


def test_mwe_filter_drops_multiword_source(idx):
    a = idx.corpus.annotation_sets[18]  # picked up
    assert candidates_for_annoset(a, idx).candidates
    assert candidates_for_annoset(a, idx, GenerationConfig(mwe_filter=True)).skipped == "multiword source"


def test_pos_filter(idx):
    from framekit.fndata import POS
    cfg = GenerationConfig(pos_filter=frozenset({POS.V}))
    assert build_lattice(GOODWILL, idx, cfg).counts == (0, 0, 0, 0, 2, 3)
    assert count_paraphrases(build_lattice(GOODWILL, idx, cfg)) == 11


def test_semantic_filter_applied(idx):
    table = EmbeddingTable()
    table.add("know", [1.0, 0.0])
    table.add("believe", [0.9, 0.1])
    table.add("think", [0.0, 1.0])
    cfg = GenerationConfig(semantic_filter=SemanticFilterSpec.parse("top-1"))
    assert build_lattice(GOODWILL, idx, cfg, table).counts[-1] == 1


@pytest.mark.parametrize("counts, n", [((1, 1, 0, 0, 2, 3), 47), ((0, 0, 0), 0), ((2, 3), 11), ((), 0)])
def test_count_paraphrases(counts, n):
    assert count_paraphrases(counts) == n


# substitution and projection

TEXT = "John bought apples"


def buy_set(*labels):
    return AnnotationSet(1, 1, 701, 7, ((5, 10),), tuple(labels))


def test_equal_length_substitution():
    a = buy_set(LabelSpan("Buyer", 0, 3, "NP", "Ext"), LabelSpan("Goods", 12, 17, "NP", "Obj"))
    text, (b,) = substitute(TEXT, [a], [Replacement(5, 10, "gotten", 1, 999)])
    assert text == "John gotten apples"
    assert b.labels == a.labels and b.target_spans == a.target_spans
    assert b.lu_id == 999


def test_longer_substitution_shifts_later_labels():
    a = buy_set(LabelSpan("Buyer", 0, 3, "NP", "Ext"), LabelSpan("Goods", 12, 17, "NP", "Obj"))
    text, (b,) = substitute(TEXT, [a], [Replacement(5, 10, "purchase", 1, 702)])  # 6 -> 8 chars... +2
    assert text == "John purchase apples"
    assert b.labels[0].span == (0, 3)
    assert b.labels[1].span == (14, 19)
    text, (b,) = substitute(TEXT, [a], [Replacement(5, 10, "purchased", 1, 702)])  # +3
    assert b.labels[1].span == (15, 20)
    assert b.target_spans == ((5, 13),)
    assert text[15:21] == "apples"


def test_febar_label_moves_with_target():
    a = buy_set(LabelSpan("Buyer", 5, 10, "N", "Head"))
    _, (b,) = substitute(TEXT, [a], [Replacement(5, 10, "got", 1, 2)])
    assert b.labels[0].span == (5, 7) == b.target_spans[0]


def test_enclosing_label_end_shifts():
    a = buy_set(LabelSpan("Buyer", 0, 17, "S", "Dep"))
    _, (b,) = substitute(TEXT, [a], [Replacement(5, 10, "got", 1, 2)])
    assert b.labels[0].span == (0, 14)


def test_boundary_inside_replacement_raises():
    a = buy_set(LabelSpan("Buyer", 0, 7, "NP", "Ext"))
    with pytest.raises(ProjectionError):
        substitute(TEXT, [a], [Replacement(5, 10, "got", 1, 2)])


def test_overlapping_replacements_raise():
    with pytest.raises(ProjectionError):
        OffsetMap([Replacement(0, 4, "x"), Replacement(4, 6, "y")])


def test_substitute_back_is_identity(idx):
    c = idx.corpus
    src = c.sentences[GOODWILL]
    annosets = c.annosets_by_sentence[GOODWILL]
    know = c.annotation_sets[6]
    s, e = know.target_spans[0]
    text, projected = substitute(src.text, annosets, [Replacement(s, e, "understand", 6, 604)])
    (s2, e2), = [a for a in projected if a.id == 6][0].target_spans
    back, restored = substitute(text, projected, [Replacement(s2, e2, "know", 6, 601)])
    assert back == src.text
    assert restored == annosets


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_projection_preserves_untouched_label_text(seed):
    rng = random.Random(seed)
    corpus, lattice = random_lattice(rng)
    text = corpus.sentences[1].text
    targets = [cs.target for cs in lattice.sets]
    for sent, projected in generate_sentences(lattice, corpus):
        for a, orig in zip(projected, corpus.annosets_by_sentence[1]):
            for new, old in zip(a.labels, orig.labels):
                if not any(old.start <= t[1] and t[0] <= old.end for t in targets):
                    assert sent.text[new.start:new.end + 1] == text[old.start:old.end + 1]
            assert validate_annotation_set(a, sent) is None


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_generation_count_equivalence(seed):
    corpus, lattice = random_lattice(random.Random(seed))
    assert len(generate_sentences(lattice, corpus)) == count_paraphrases(lattice)


def test_cap_takes_lattice_order_prefix(idx):
    lattice = build_lattice(GOODWILL, idx)
    full = generate_sentences(lattice, idx.corpus)
    capped = generate_sentences(lattice, idx.corpus, GenerationConfig(max_sentences_per_source=5))
    assert [s.text for s, _ in capped] == [s.text for s, _ in full[:5]]


def test_export_augmented_empty_is_train():
    c = toy_corpus()
    assert export_augmented(c, []) == c


def test_export_augmented_counts_and_fresh_ids():
    c = toy_corpus()
    gen = [
        (Sentence(0, "x y"), [AnnotationSet(6, 0, 601, 6, ((0, 0),)), AnnotationSet(5, 0, 501, 5, ((2, 2),))]),
        (Sentence(1, "z"), [AnnotationSet(6, 1, 601, 6, ((0, 0),))]),
    ]
    out = export_augmented(c, gen)
    assert len(out.sentences) == len(c.sentences) + 2
    assert len(out.annotation_sets) == len(c.annotation_sets) + 3
    new_ids = set(out.annotation_sets) - set(c.annotation_sets)
    assert len(new_ids) == 3 and min(new_ids) > max(c.annotation_sets)
    assert min(set(out.sentences) - set(c.sentences)) > max(c.sentences)


def test_augment_report_and_parallel_agree(idx):
    gen1, rep1 = augment(idx)
    gen2, rep2 = augment(idx, jobs=2)
    assert rep1.to_dict() == rep2.to_dict()
    assert [s.text for s, _ in gen1] == [s.text for s, _ in gen2]
    assert rep1.per_source[GOODWILL] == 47
    assert rep1.n_sentences == len(gen1)


def test_discontinuous_target_skipped():
    c = corpus_from([frame_rec(1, "F", [("A", "Core")]), lu_rec(1, "give away", "V", 1),
                     lu_rec(2, "donate", "V", 1), sent_rec(1, "give it away"), sent_rec(2, "donate it"),
                     anno_rec(1, 1, 1, 1, [(0, 3), (8, 11)], [lab("A", 5, 6, "NP", "Obj")]),
                     anno_rec(2, 2, 2, 1, [(0, 5)], [lab("A", 7, 8, "NP", "Obj")])])
    cs = candidates_for_annoset(c.annotation_sets[1], build_index(c))
    assert cs.skipped == "discontinuous target"


def test_project_trees_single_token_only(idx):
    train = idx.corpus
    gen, _ = augment(idx)
    trees, missing = project_trees(train, gen, toy_trees())
    base = max(train.sentences) + 1
    for k, (sent, _) in enumerate(gen):
        t = trees.get(base + k)
        if t is not None:
            assert t.text == sent.text
            assert [tok.form for tok in t.tokens] == sent.text.split()
    assert missing == sum(1 for k in range(len(gen)) if base + k not in trees)
    assert missing > 0  # "pick up" substitutions change the token count
