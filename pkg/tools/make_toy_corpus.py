"""Regenerate the bundled toy corpus under src/framekit/data/toy/.

Sentences are given as token rows (form, lemma, POS, head, deprel) and
annotation as token ranges; character offsets are derived from the tokens
joined by single spaces.
"""

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from framekit.deptree import build_tree, format_conll  # noqa: E402
from framekit.fndata import load_jsonl, export_text  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "framekit" / "data" / "toy"

C, P = "Core", "Peripheral"
FRAMES = [
    (1, "Giving", [("Donor", C), ("Recipient", C), ("Theme", C), ("Time", P)]),
    (2, "Goal", [("Trajector", C), ("Landmark", C)]),
    (3, "Meaning", [("Means", C), ("Value", C)]),
    (4, "Increment", [("Added_set", C), ("Class", C)]),
    (5, "Likelihood", [("Hypothetical_event", C), ("Time", P)]),
    (6, "Awareness", [("Cognizer", C), ("Content", C), ("Manner", P)]),
    (7, "Commerce_buy", [("Buyer", C), ("Goods", C), ("Seller", P), ("Money", P), ("Time", P)]),
    (8, "Getting", [("Recipient", C), ("Theme", C), ("Source", P)]),
    (9, "Earnings_and_losses", [("Earner", C), ("Earnings", C), ("Time", P)]),
    (10, "Cardinal_numbers", [("Number", C), ("Entity", C)]),
]
LUS = [
    (101, "contribution", "N", 1), (102, "donation", "N", 1), (103, "gift", "N", 1),
    (201, "to", "PREP", 2), (202, "into", "PREP", 2),
    (301, "mean", "V", 3),
    (401, "more", "A", 4),
    (501, "may", "V", 5), (502, "might", "V", 5), (503, "can", "V", 5),
    (601, "know", "V", 6), (602, "believe", "V", 6), (603, "think", "V", 6), (604, "understand", "V", 6),
    (701, "buy", "V", 7), (702, "purchase", "V", 7), (703, "pick up", "V", 7),
    (801, "get", "V", 8), (802, "acquire", "V", 8),
    (901, "make", "V", 9), (902, "lose", "V", 9), (903, "earn", "V", 9),
    (1001, "three", "Other", 10), (1002, "five", "Other", 10),
]
RELATIONS = [("Inheritance", 8, 7, [["Recipient", "Buyer"], ["Theme", "Goods"]])]


def toks(spec):
    rows = []
    for item in spec.split():
        form, lemma, pos, head, rel = item.split("/")
        rows.append((form, lemma, pos, int(head), rel))
    return rows


# (id, document, token rows, [(annoset id, lu id, (tok_from, tok_to), [labels])])
# label: (fe, tok_from, tok_to, pt, gf) or (fe, ni_kind)
SENTENCES = [
    (1, "train_a",
     "Your/your/PRP$/2/poss contribution/contribution/NN/6/nsubj to/to/IN/2/prep "
     "Goodwill/Goodwill/NNP/3/pobj will/will/MD/6/aux mean/mean/VB/0/root more/more/JJR/6/dobj "
     "than/than/IN/7/prep you/you/PRP/11/nsubj may/may/MD/11/aux know/know/VB/8/pcomp",
     [(1, 101, (2, 2), [("Donor", 1, 1, "Poss", "Gen"), ("Recipient", 3, 4, "PP[to]", "Dep")]),
      (2, 201, (3, 3), [("Trajector", 1, 2, "NP", "Ext"), ("Landmark", 4, 4, "NP", "Obj")]),
      (3, 301, (6, 6), [("Means", 1, 4, "NP", "Ext"), ("Value", 7, 11, "NP", "Obj")]),
      (4, 401, (7, 7), [("Added_set", 7, 11, "NP", "Head"), ("Class", 8, 11, "PP[than]", "Dep")]),
      (5, 501, (10, 10), [("Hypothetical_event", 9, 9, "NP", "Ext"),
                          ("Hypothetical_event", 11, 11, "VPbrst", "Dep")]),
      (6, 601, (11, 11), [("Cognizer", 9, 9, "NP", "Ext"), ("Content", "DNI")])]),
    (2, "train_a",
     "Her/her/PRP$/2/poss donation/donation/NN/8/nsubj to/to/IN/2/prep the/the/DT/5/det "
     "museum/museum/NN/3/pobj last/last/JJ/7/amod year/year/NN/2/tmod was/be/VBD/0/root "
     "generous/generous/JJ/8/acomp",
     [(7, 102, (2, 2), [("Donor", 1, 1, "Poss", "Gen"), ("Recipient", 3, 5, "PP[to]", "Dep"),
                        ("Time", 6, 7, "NP", "Dep")])]),
    (3, "train_a",
     "Their/their/PRP$/2/poss gift/gift/NN/5/nsubj of/of/IN/2/prep books/book/NNS/3/pobj "
     "arrived/arrive/VBD/0/root",
     [(8, 103, (2, 2), [("Donor", 1, 1, "Poss", "Gen"), ("Theme", 3, 4, "PP[of]", "Dep")])]),
    (4, "train_a",
     "He/he/PRP/2/nsubj put/put/VBD/0/root the/the/DT/4/det cat/cat/NN/2/dobj into/into/IN/2/prep "
     "the/the/DT/7/det box/box/NN/5/pobj",
     [(9, 202, (5, 5), [("Trajector", 3, 4, "NP", "Ext"), ("Landmark", 6, 7, "NP", "Obj")])]),
    (5, "train_a",
     "We/we/PRP/3/nsubj might/might/MD/3/aux win/win/VB/0/root",
     [(10, 502, (2, 2), [("Hypothetical_event", 1, 1, "NP", "Ext"),
                         ("Hypothetical_event", 3, 3, "VPbrst", "Dep")])]),
    (6, "train_a",
     "They/they/PRP/3/nsubj can/can/MD/3/aux swim/swim/VB/0/root today/today/NN/3/tmod",
     [(11, 503, (2, 2), [("Hypothetical_event", 1, 1, "NP", "Ext"),
                         ("Hypothetical_event", 3, 3, "VPbrst", "Dep"), ("Time", 4, 4, "AVP", "Dep")])]),
    (7, "train_b",
     "Nobody/nobody/NN/3/nsubj really/really/RB/3/advmod believes/believe/VBZ/0/root",
     [(12, 602, (3, 3), [("Cognizer", 1, 1, "NP", "Ext"), ("Manner", 2, 2, "AVP", "Dep"),
                         ("Content", "DNI")])]),
    (8, "train_b",
     "Most/most/JJS/2/amod people/people/NNS/3/nsubj think/think/VBP/0/root",
     [(13, 603, (3, 3), [("Cognizer", 1, 2, "NP", "Ext"), ("Content", "INI")])]),
    (9, "train_b",
     "Few/few/JJ/2/amod students/student/NNS/3/nsubj understand/understand/VBP/0/root",
     [(14, 604, (3, 3), [("Cognizer", 1, 2, "NP", "Ext")])]),
    (10, "train_b",
     "Everyone/everyone/NN/2/nsubj knows/know/VBZ/0/root the/the/DT/4/det answer/answer/NN/2/dobj",
     [(15, 601, (2, 2), [("Cognizer", 1, 1, "NP", "Ext"), ("Content", 3, 4, "NP", "Obj")])]),
    (11, "train_b",
     "John/John/NNP/2/nsubj bought/buy/VBD/0/root apples/apple/NNS/2/dobj",
     [(16, 701, (2, 2), [("Buyer", 1, 1, "NP", "Ext"), ("Goods", 3, 3, "NP", "Obj")])]),
    (12, "train_b",
     "Mary/Mary/NNP/2/nsubj purchased/purchase/VBD/0/root a/a/DT/4/det car/car/NN/2/dobj "
     "from/from/IN/2/prep Bob/Bob/NNP/5/pobj",
     [(17, 702, (2, 2), [("Buyer", 1, 1, "NP", "Ext"), ("Goods", 3, 4, "NP", "Obj"),
                         ("Seller", 5, 6, "PP[from]", "Dep")])]),
    (13, "train_b",
     "Kids/kid/NNS/2/nsubj picked/pick/VBD/0/root up/up/RP/2/prt sweets/sweet/NNS/2/dobj",
     [(18, 703, (2, 3), [("Buyer", 1, 1, "NP", "Ext"), ("Goods", 4, 4, "NP", "Obj")])]),
    (14, "train_b",
     "John/John/NNP/2/nsubj acquired/acquire/VBD/0/root a/a/DT/4/det house/house/NN/2/dobj",
     [(19, 802, (2, 2), [("Recipient", 1, 1, "NP", "Ext"), ("Theme", 3, 4, "NP", "Obj")])]),
    (15, "train_b",
     "She/she/PRP/2/nsubj got/get/VBD/0/root a/a/DT/4/det letter/letter/NN/2/dobj",
     [(20, 801, (2, 2), [("Recipient", 1, 1, "NP", "Ext"), ("Theme", 3, 4, "NP", "Obj")])]),
    (16, "train_b",
     "I/I/PRP/2/nsubj like/like/VBP/0/root working/work/VBG/2/xcomp and/and/CC/3/cc "
     "making/make/VBG/3/conj money/money/NN/5/dobj",
     [(21, 901, (5, 5), [("Earner", 1, 1, "NP", "Ext"), ("Earnings", 6, 6, "NP", "Obj")])]),
    (17, "train_b",
     "She/she/PRP/2/nsubj earned/earn/VBD/0/root money/money/NN/2/dobj recently/recently/RB/2/advmod",
     [(22, 903, (2, 2), [("Earner", 1, 1, "NP", "Ext"), ("Earnings", 3, 3, "NP", "Obj"),
                         ("Time", 4, 4, "AVP", "Dep")])]),
    (18, "train_b",
     "Three/three/CD/2/nummod dogs/dog/NNS/3/nsubj barked/bark/VBD/0/root",
     [(23, 1001, (1, 1), [("Number", 1, 1, "Num", "Head"), ("Entity", 2, 2, "NP", "Dep")])]),
    (19, "train_b",
     "Five/five/CD/2/nummod cats/cat/NNS/3/nsubj slept/sleep/VBD/0/root",
     [(24, 1002, (1, 1), [("Number", 1, 1, "Num", "Head"), ("Entity", 2, 2, "NP", "Dep")])]),
    (20, "train_b",
     "We/we/PRP/2/nsubj lost/lose/VBD/0/root",
     [(25, 902, (2, 2), [])]),
    (21, "dev_a",
     "Peter/Peter/NNP/2/nsubj bought/buy/VBD/0/root a/a/DT/4/det book/book/NN/2/dobj",
     [(26, 701, (2, 2), [("Buyer", 1, 1, "NP", "Ext"), ("Goods", 3, 4, "NP", "Obj")])]),
    (22, "dev_a",
     "They/they/PRP/3/nsubj might/might/MD/3/aux leave/leave/VB/0/root",
     [(27, 502, (2, 2), [("Hypothetical_event", 1, 1, "NP", "Ext"),
                         ("Hypothetical_event", 3, 3, "VPbrst", "Dep")])]),
    (23, "test_a",
     "Anna/Anna/NNP/2/nsubj purchased/purchase/VBD/0/root a/a/DT/4/det bike/bike/NN/2/dobj",
     [(28, 702, (2, 2), [("Buyer", 1, 1, "NP", "Ext"), ("Goods", 3, 4, "NP", "Obj")])]),
    (24, "test_a",
     "Everyone/everyone/NN/2/nsubj knows/know/VBZ/0/root the/the/DT/4/det rules/rule/NNS/2/dobj",
     [(29, 601, (2, 2), [("Cognizer", 1, 1, "NP", "Ext"), ("Content", 3, 4, "NP", "Obj")])]),
    (25, "test_a",
     "Everyone/everyone/NN/2/nsubj knows/know/VBZ/0/root the/the/DT/4/det rules/rule/NNS/2/dobj",
     [(30, 601, (2, 2), [("Cognizer", 1, 1, "NP", "Ext"), ("Content", 3, 4, "NP", "Obj")])]),
    (26, "test_a",
     "She/she/PRP/2/nsubj earned/earn/VBD/0/root money/money/NN/2/dobj",
     [(31, 903, (2, 2), [("Earner", 1, 1, "NP", "Ext"), ("Earnings", 3, 3, "NP", "Obj")])]),
]

VOCAB = sorted({lemma for _, lemma, _, _ in LUS})


def main():
    records = [{"kind": "corpus", "origin": "Fulltext"}]
    for fid, name, fes in FRAMES:
        records.append({"kind": "frame", "id": fid, "name": name,
                        "fes": [{"name": n, "core_type": t} for n, t in fes]})
    for lid, lemma, pos, fid in LUS:
        records.append({"kind": "lu", "id": lid, "lemma": lemma, "pos": pos, "frame_id": fid})
    for kind, parent, child, mappings in RELATIONS:
        records.append({"kind": "relation", "type": kind, "parent": parent, "child": child,
                        "fe_mappings": mappings})
    trees, annosets = [], []
    for sid, doc, spec, sets in SENTENCES:
        tree = build_tree(sid, toks(spec))
        trees.append(tree)
        records.append({"kind": "sentence", "id": sid, "text": tree.text, "document": doc})

        def chars(i, j):
            return [tree.token(i).char_start, tree.token(j).char_end]

        for aid, lu, (ti, tj), labels in sets:
            labs = []
            for lab in labels:
                if len(lab) == 2:
                    labs.append({"fe": lab[0], "ni": lab[1]})
                else:
                    fe, i, j, pt, gf = lab
                    s, e = chars(i, j)
                    labs.append({"fe": fe, "start": s, "end": e, "pt": pt, "gf": gf})
            annosets.append({"kind": "annoset", "id": aid, "sentence_id": sid, "lu_id": lu,
                             "frame_id": next(f for l, _, _, f in LUS if l == lu),
                             "targets": [chars(ti, tj)], "labels": labs})
    records.extend(annosets)
    text = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
    corpus = load_jsonl(text.splitlines(), strict=True)
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "corpus.jsonl").write_text(export_text(corpus), encoding="utf-8")
    (OUT / "trees.conll").write_text(format_conll(trees), encoding="utf-8")

    rng = np.random.default_rng(7)
    base = {w: rng.normal(size=8) for w in VOCAB}
    # pull near-synonyms together so the semantic filters have structure to find
    for group in (["buy", "purchase", "acquire", "get"], ["know", "understand", "believe", "think"],
                  ["may", "might", "can"], ["contribution", "donation", "gift"]):
        centre = np.mean([base[w] for w in group], axis=0)
        for w in group:
            base[w] = 0.6 * centre + 0.4 * base[w]
    lines = [f"{len(VOCAB)} 8"]
    lines += [w.replace(" ", "_") + " " + " ".join(f"{x:.4f}" for x in base[w]) for w in VOCAB]
    (OUT / "vectors.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(corpus.sentences)} sentences, {len(corpus.annotation_sets)} annotation sets")


if __name__ == "__main__":
    main()
