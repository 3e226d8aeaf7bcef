"""Small builders shared by the test modules."""

import json
from importlib import resources

from framekit.deptree import build_tree, ingest_conll
from framekit.fndata import load_jsonl, read_jsonl

TOY = resources.files("framekit") / "data" / "toy"


def toy_corpus():
    return read_jsonl(TOY / "corpus.jsonl")


def toy_trees():
    return {t.sentence_id: t for t in ingest_conll(TOY / "trees.conll")}


def records_to_lines(records):
    return [json.dumps(r) for r in records]


def frame_rec(fid, name, fes):
    return {"kind": "frame", "id": fid, "name": name,
            "fes": [{"name": n, "core_type": t} for n, t in fes]}


def lu_rec(lid, lemma, pos, fid):
    return {"kind": "lu", "id": lid, "lemma": lemma, "pos": pos, "frame_id": fid}


def sent_rec(sid, text, doc=None):
    r = {"kind": "sentence", "id": sid, "text": text}
    if doc is not None:
        r["document"] = doc
    return r


def anno_rec(aid, sid, lu, fid, targets, labels):
    return {"kind": "annoset", "id": aid, "sentence_id": sid, "lu_id": lu, "frame_id": fid,
            "targets": [list(t) for t in targets], "labels": labels}


def lab(fe, start=None, end=None, pt=None, gf=None, ni=None):
    d = {"fe": fe}
    for k, v in (("start", start), ("end", end), ("pt", pt), ("gf", gf), ("ni", ni)):
        if v is not None:
            d[k] = v
    return d


def corpus_from(records, strict=False):
    return load_jsonl(records_to_lines(records), strict=strict)


def tree(text_rows, sid=1):
    """Tree from ``"form/head/deprel form/head/deprel ..."`` (lemma = lowercased form, POS X)."""
    rows = []
    for item in text_rows.split():
        form, head, rel = item.rsplit("/", 2)
        rows.append((form, form.lower(), "X", int(head), rel))
    return build_tree(sid, rows)


def tree_from_heads(heads, sid=1):
    """Tree over tokens w1..wn with the given 1-based heads (0 = root)."""
    rows = [(f"w{i}", f"w{i}", "X", h, "dep") for i, h in enumerate(heads, 1)]
    return build_tree(sid, rows)


FES = [("A", "Core"), ("B", "Core"), ("C", "Core-Unexpressed"), ("P", "Peripheral"), ("X", "Extra-Thematic")]
PTS = ["NP", "PP"]
GFS = ["Ext", "Obj"]


def random_valence_corpus(rng, n_annosets, n_frames=2, n_lus=4):
    """Corpus of random annotation sets over tiny frames; labels share one span so offsets stay valid."""
    recs = []
    for f in range(1, n_frames + 1):
        recs.append(frame_rec(f, f"F{f}", FES))
        for k in range(n_lus):
            recs.append(lu_rec(f * 100 + k, f"lu{f}_{k}", "V", f))
    recs.append(sent_rec(1, "a b c d e f"))
    for aid in range(1, n_annosets + 1):
        f = rng.randint(1, n_frames)
        labels = [lab(rng.choice(FES)[0], 0, 0, rng.choice(PTS), rng.choice(GFS))
                  for _ in range(rng.randint(0, 3))]
        if rng.random() < 0.1:
            labels.append(lab("B", ni="DNI"))
        recs.append(anno_rec(aid, 1, f * 100 + rng.randrange(n_lus), f, [(2, 2)], labels))
    return corpus_from(recs)


def random_lattice(rng, max_np=200):
    """A sentence of short words, one annotation set per chosen word, random candidate lemmas.

    Returns ``(corpus, lattice)`` with ``count_paraphrases(lattice) <= max_np``.
    """
    from framekit.paraphrase import CandidateLattice, CandidateSet, count_paraphrases

    words = [rng.choice(["go", "run", "cat", "a", "sleep", "the", "big"]) for _ in range(rng.randint(1, 8))]
    text = " ".join(words)
    starts, pos = [], 0
    for w in words:
        starts.append(pos)
        pos += len(w) + 1
    recs = [frame_rec(1, "F", [("A", "Core"), ("P", "Peripheral")]), lu_rec(1, "src", "V", 1),
            sent_rec(1, text)]
    targets = sorted(rng.sample(range(len(words)), rng.randint(1, len(words))))
    sets, aid = [], 0
    while True:
        recs, sets = recs[:3], []
        for aid, i in enumerate(targets, 1):
            s, e = starts[i], starts[i] + len(words[i]) - 1
            other = rng.choice([j for j in range(len(words)) if j != i] or [i])
            labels = [] if other == i else [lab("A", starts[other], starts[other] + len(words[other]) - 1, "NP", "Ext")]
            labels.append(lab("P", s, e, "NP", "Head"))
            recs.append(anno_rec(aid, 1, 1, 1, [(s, e)], labels))
            n = rng.randint(0, 3)
            lemmas = rng.sample(["x", "yy", "zzz", "quux", "w v"], n)
            sets.append(CandidateSet(aid, 1, ((s, e),), tuple((100 + k, lem) for k, lem in enumerate(sorted(lemmas)))))
        lattice = CandidateLattice(1, tuple(sets))
        if count_paraphrases(lattice) <= max_np:
            return corpus_from(recs), lattice
        targets = targets[:-1] or targets


APPOSITIVE_TEXT = "In a statement, President Jacob Zuma said Mandela's condition was unchanged"
APPOSITIVE_ROWS = [
    ("In", "in", "IN", 8, "prep"), ("a", "a", "DT", 3, "det"), ("statement", "statement", "NN", 1, "pobj"),
    (",", ",", ",", 8, "punct"), ("President", "president", "NNP", 7, "nn"),
    ("Jacob", "Jacob", "NNP", 7, "nn"), ("Zuma", "Zuma", "NNP", 8, "nsubj"),
    ("said", "say", "VBD", 0, "root"), ("Mandela", "Mandela", "NNP", 11, "poss"),
    ("'s", "'s", "POS", 9, "possessive"), ("condition", "condition", "NN", 12, "nsubj"),
    ("was", "be", "VBD", 8, "ccomp"), ("unchanged", "unchanged", "JJ", 12, "acomp"),
]


def appositive():
    """Tree of the appositive example, plus a Leadership annotation with Leader = "Jacob Zuma"."""
    t = build_tree(1, APPOSITIVE_ROWS, APPOSITIVE_TEXT)
    s = APPOSITIVE_TEXT.index("President")
    j = APPOSITIVE_TEXT.index("Jacob")
    c = corpus_from([
        frame_rec(1, "Leadership", [("Leader", "Core"), ("Role", "Core")]),
        lu_rec(1, "president", "N", 1),
        sent_rec(1, APPOSITIVE_TEXT),
        anno_rec(1, 1, 1, 1, [(s, s + 8)], [lab("Leader", j, j + len("Jacob Zuma") - 1, "NP", "Appositive")]),
    ])
    return t, c


def descendant_interval_oracle(t):
    """Brute force: every single token, plus each token's closure when contiguous."""
    from framekit.deptree import Span

    n = len(t)
    heads = {tok.index: tok.head for tok in t.tokens}
    out = {Span(i, i) for i in range(1, n + 1)}
    for w in range(1, n + 1):
        desc = set()
        for v in range(1, n + 1):
            x = v
            while x != 0:
                if x == w:
                    desc.add(v)
                    break
                x = heads[x]
        if max(desc) - min(desc) + 1 == len(desc):
            out.add(Span(min(desc), max(desc)))
    return out


def random_heads(rng, n):
    """Uniform-ish random tree: shuffle tokens, attach each to an earlier one in the shuffle."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = [0] * n
    for k, tok in enumerate(order):
        heads[tok - 1] = 0 if k == 0 else order[rng.randrange(k)]
    return heads


def run_cli(*argv):
    """Run the command line entry point in-process; returns ``(status, stdout, stderr)``."""
    import contextlib
    import io

    from framekit.cli import main

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        status = main([str(a) for a in argv])
    return status, out.getvalue(), err.getvalue()


def run_pipeline(work, seed=0, epochs=3):
    """ingest, augment, train, predict and score the bundled toy corpus under *work*."""
    corpus, conll, vectors = TOY / "corpus.jsonl", TOY / "trees.conll", TOY / "vectors.txt"
    split = work / "split"
    steps = [
        ("ingest", "--corpus", corpus, "--out", split, "--test-docs", "test_a", "--dev-docs", "dev_a"),
        ("augment", "--corpus", split / "train.jsonl", "--conll", conll, "--embeddings", vectors,
         "--sem-filter", "top-2", "--seed", seed, "--out", work / "augmented.jsonl"),
        ("train", "--corpus", work / "augmented.jsonl", "--conll", work / "augmented.conll",
         "--model", work / "model.json", "--epochs", epochs, "--seed", seed, "--out", work / "train_log.json"),
        ("predict", "--corpus", split / "test.jsonl", "--conll", conll, "--model", work / "model.json",
         "--out", work / "predictions.jsonl"),
        ("score", "--corpus", split / "test.jsonl", "--predictions", work / "predictions.jsonl",
         "--out", work / "score.json"),
    ]
    for step in steps:
        status, _, err = run_cli(*step)
        if status != 0:
            raise AssertionError(f"{step[0]} failed: {err}")
    return {name: work / name for name in ("model.json", "predictions.jsonl", "score.json", "augmented.jsonl")}
