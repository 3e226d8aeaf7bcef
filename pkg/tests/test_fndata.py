import json

import pytest
from hypothesis import given, settings, strategies as st

from framekit.errors import IntegrityError, ParseError, UnknownDocument
from framekit.fndata import (
    AnnotationSet,
    CoreType,
    LabelSpan,
    NIKind,
    POS,
    RejectReason,
    Sentence,
    corpus_stats,
    deduplicate,
    export_text,
    ingest_corpus,
    load_jsonl,
    read_framenet_xml,
    split_corpus,
    validate_annotation_set,
)

from helpers import anno_rec, corpus_from, frame_rec, lab, lu_rec, sent_rec, toy_corpus


def buy_frame():
    return frame_rec(7, "Commerce_buy", [("Buyer", "Core"), ("Goods", "Core"), ("Seller", "Peripheral")])


def buy_lu():
    return lu_rec(701, "buy", "V", 7)


def one_sentence_records():
    return [
        {"kind": "corpus", "origin": "Fulltext"},
        buy_frame(),
        buy_lu(),
        sent_rec(1, "John bought apples", "d1"),
        anno_rec(1, 1, 701, 7, [(5, 10)],
                 [lab("Buyer", 0, 3, "NP", "Ext"), lab("Goods", 12, 17, "NP", "Obj")]),
    ]


def test_empty_input_gives_empty_corpus(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    c = ingest_corpus(path)
    assert len(c.sentences) == 0
    assert len(c.annotation_sets) == 0


def test_one_sentence_fixture_counts_and_round_trip(tmp_path):
    lines = [json.dumps(r, sort_keys=True, separators=(",", ":")) for r in one_sentence_records()]
    text = "\n".join(lines) + "\n"
    path = tmp_path / "c.jsonl"
    path.write_text(text)
    c = ingest_corpus(path)
    assert len(c.sentences) == 1
    assert len(c.annotation_sets) == 1
    assert len(c.annotation_sets[1].labels) == 2
    assert export_text(c) == text


def test_unknown_fe_names_it():
    recs = one_sentence_records()
    recs[-1]["labels"].append(lab("Bogus", 0, 3, "NP", "Dep"))
    with pytest.raises(IntegrityError, match="Bogus"):
        corpus_from(recs)


@pytest.mark.parametrize("mutate", [
    lambda r: r[-1].update(sentence_id=99),
    lambda r: r[-1].update(lu_id=99),
    lambda r: r[2].update(frame_id=99),
])
def test_dangling_references(mutate):
    recs = one_sentence_records()
    mutate(recs)
    with pytest.raises(IntegrityError):
        corpus_from(recs)


def test_malformed_line_is_collected_not_dropped():
    lines = [json.dumps(r) for r in one_sentence_records()] + ["{not json"]
    c = load_jsonl(lines, source="x")
    assert len(c.rejected) == 1
    assert c.rejected[0].position == "x:6"
    with pytest.raises(ParseError) as info:
        load_jsonl(lines, source="x", strict=True)
    assert info.value.position == "x:6"


def test_invalid_annoset_is_collected():
    recs = one_sentence_records()
    recs[-1]["labels"][0]["end"] = 40
    c = corpus_from(recs)
    assert c.annotation_sets == {}
    assert c.rejected[0].reason == RejectReason.END_OUT_OF_RANGE.value
    with pytest.raises(ParseError):
        corpus_from(recs, strict=True)


def test_missing_path():
    with pytest.raises(ParseError):
        ingest_corpus("/nonexistent/corpus.jsonl")


S = Sentence(1, "John bought apples")


def annoset(*labels, targets=((5, 10),)):
    return AnnotationSet(1, 1, 701, 7, targets, tuple(labels))


def test_validate_inverted():
    assert validate_annotation_set(annoset(LabelSpan("Buyer", 5, 2)), S) is RejectReason.INVERTED_SPAN


def test_validate_ni_exempt():
    assert validate_annotation_set(annoset(LabelSpan("Goods", ni_kind=NIKind.DNI)), S) is None


def test_validate_all_in_bounds():
    a = annoset(LabelSpan("Buyer", 0, 3, "NP", "Ext"), LabelSpan("Goods", 12, 17, "NP", "Obj"))
    assert validate_annotation_set(a, S) is None


@given(start=st.one_of(st.none(), st.integers(-3, 25)), end=st.one_of(st.none(), st.integers(-3, 25)),
       ni=st.sampled_from([None, NIKind.INI, NIKind.DNI, NIKind.CNI]))
def test_validate_rejects_exactly_the_bad_set(start, end, ni):
    n = len(S.text)
    a = annoset(LabelSpan("Buyer", start, end, ni_kind=ni))
    bad = ni is None and (start is None or end is None or start < 0 or end >= n or start > end)
    assert (validate_annotation_set(a, S) is not None) == bad


def test_core_types():
    assert CoreType.CORE.is_core and CoreType.CORE_UNEXPRESSED.is_core
    assert not CoreType.PERIPHERAL.is_core and not CoreType.EXTRA_THEMATIC.is_core
    assert POS.parse("v") is POS.V and POS.parse("xyz") is POS.OTHER


# splitting


def split_records():
    recs = [buy_frame(), buy_lu()]
    texts = [("a", "Kim bought tea"), ("a", "Lee bought rice"), ("b", "Max bought milk"),
             ("c", "Sam bought eggs"), ("c", "Sam bought eggs")]
    for i, (doc, text) in enumerate(texts, 1):
        recs.append(sent_rec(i, text, doc))
        recs.append(anno_rec(i, i, 701, 7, [(4, 9)], [lab("Buyer", 0, 2, "NP", "Ext")]))
    # incomplete annotation: target and frame but no labels
    recs.append(anno_rec(6, 1, 701, 7, [(4, 9)], []))
    return recs


def test_split_all_train():
    c = corpus_from(split_records())
    train, dev, test = split_corpus(c, [], [])
    assert len(dev.sentences) == len(test.sentences) == 0
    assert set(train.annotation_sets) == set(c.annotation_sets) - {6}


def test_split_dedups_test():
    c = corpus_from(split_records())
    train, dev, test = split_corpus(c, ["c"], ["b"])
    assert [s.text for s in test.sentences.values()] == ["Sam bought eggs"]
    assert len(test.annotation_sets) == 1
    assert set(dev.sentences) == {3}
    assert set(train.sentences) == {1, 2}


def test_split_partition_property():
    c = corpus_from(split_records())
    train, dev, test = split_corpus(c, ["c"], ["b"])
    ids = [set(x.annotation_sets) for x in (train, dev, test)]
    assert not (ids[0] & ids[1] or ids[0] & ids[2] or ids[1] & ids[2])
    removed = {6, 5}  # incomplete in train, duplicate in test
    assert ids[0] | ids[1] | ids[2] | removed == set(c.annotation_sets)


def test_split_conflicts():
    c = corpus_from(split_records())
    with pytest.raises(UnknownDocument):
        split_corpus(c, ["b"], ["b"])
    with pytest.raises(UnknownDocument):
        split_corpus(c, ["zzz"], [])


def test_dedup_keeps_distinct_annotation_of_repeated_text():
    recs = split_records()
    recs[-2]["labels"] = [lab("Buyer", 0, 2, "NP", "Ext"), lab("Goods", 11, 14, "NP", "Obj")]
    d = deduplicate(corpus_from(recs))
    assert len([s for s in d.sentences.values() if s.text == "Sam bought eggs"]) == 1
    assert {4, 5} <= set(d.annotation_sets)
    assert d.annotation_sets[5].sentence_id == d.annotation_sets[4].sentence_id


# stats


def test_stats_empty():
    s = corpus_stats(load_jsonl([]))
    assert (s.n_sentences, s.n_annosets, s.lu_counts) == (0, 0, {})


def test_stats_three_sentences_five_annosets():
    recs = [buy_frame(), buy_lu(), lu_rec(702, "purchase", "V", 7)]
    for i in range(1, 4):
        recs.append(sent_rec(i, "John bought apples"))
    for aid, sid in enumerate([1, 1, 2, 3, 3], 1):
        recs.append(anno_rec(aid, sid, 701, 7, [(5, 10)], [lab("Buyer", 0, 3, "NP", "Ext")]))
    s = corpus_stats(corpus_from(recs))
    assert (s.n_sentences, s.n_annosets) == (3, 5)
    assert s.lu_counts == {"V": 1}


def test_toy_corpus_round_trip():
    c = toy_corpus()
    assert export_text(load_jsonl(export_text(c).splitlines())) == export_text(c)
    assert c.rejected == []


# FrameNet XML adapter

NS = 'xmlns="http://framenet.icsi.berkeley.edu"'


def write_release(root):
    (root / "frame").mkdir()
    (root / "fulltext").mkdir()
    (root / "frame" / "Commerce_buy.xml").write_text(f"""<?xml version="1.0"?>
<frame {NS} ID="7" name="Commerce_buy">
  <FE ID="1" name="Buyer" coreType="Core"/>
  <FE ID="2" name="Goods" coreType="Core"/>
  <FE ID="3" name="Seller" coreType="Peripheral"/>
  <lexUnit ID="701" name="buy.v" POS="V"/>
</frame>""")
    (root / "frame" / "Getting.xml").write_text(f"""<?xml version="1.0"?>
<frame {NS} ID="8" name="Getting">
  <FE ID="4" name="Recipient" coreType="Core"/>
  <FE ID="5" name="Theme" coreType="Core"/>
</frame>""")
    (root / "frRelation.xml").write_text(f"""<?xml version="1.0"?>
<frameRelations {NS}>
  <frameRelationType name="Inheritance">
    <frameRelation supID="8" subID="7">
      <FERelation superFEName="Recipient" subFEName="Buyer"/>
      <FERelation superFEName="Theme" subFEName="Goods"/>
    </frameRelation>
  </frameRelationType>
</frameRelations>""")
    (root / "fulltext" / "doc1.xml").write_text(f"""<?xml version="1.0"?>
<fullTextAnnotation {NS}>
  <sentence ID="11">
    <text>John bought apples</text>
    <annotationSet ID="100"><layer name="PENN"/></annotationSet>
    <annotationSet ID="101" luID="701" frameID="7">
      <layer name="Target" rank="1"><label name="Target" start="5" end="10"/></layer>
      <layer name="FE" rank="1">
        <label name="Buyer" start="0" end="3"/>
        <label name="Goods" start="12" end="17"/>
        <label name="Seller" itype="INI"/>
      </layer>
      <layer name="GF" rank="1"><label name="Ext" start="0" end="3"/><label name="Obj" start="12" end="17"/></layer>
      <layer name="PT" rank="1"><label name="NP" start="0" end="3"/><label name="NP" start="12" end="17"/></layer>
      <layer name="FE" rank="2"><label name="Goods" start="0" end="3"/></layer>
    </annotationSet>
  </sentence>
</fullTextAnnotation>""")


def test_framenet_xml(tmp_path):
    write_release(tmp_path)
    c = read_framenet_xml(tmp_path)
    assert set(c.frames) == {7, 8}
    assert c.lexical_units[701].lemma == "buy"
    assert c.relations[0].fe_mappings == (("Recipient", "Buyer"), ("Theme", "Goods"))
    a = c.annotation_sets[101]
    assert a.target_spans == ((5, 10),)
    assert [(x.fe_name, x.start, x.end, x.pt, x.gf, x.ni_kind) for x in a.labels] == [
        ("Buyer", 0, 3, "NP", "Ext", None),
        ("Goods", 12, 17, "NP", "Obj", None),
        ("Seller", None, None, None, None, NIKind.INI),
    ]
    assert c.sentences[11].document == "doc1"
    assert ingest_corpus(tmp_path, "fnxml").annotation_sets == c.annotation_sets


@settings(max_examples=50)
@given(st.lists(st.tuples(st.sampled_from(["Buyer", "Goods", "Seller"]), st.integers(0, 17),
                          st.integers(0, 17)), max_size=4))
def test_round_trip_property(labels):
    recs = one_sentence_records()
    recs[-1]["labels"] = [lab(fe, min(a, b), max(a, b), "NP", "Ext") for fe, a, b in labels]
    c = corpus_from(recs)
    text = export_text(c)
    assert export_text(load_jsonl(text.splitlines())) == text
