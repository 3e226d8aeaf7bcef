"""NativeJsonl reader and writer.

One JSON object per line, UTF-8, keyed by ``"kind"``::

    {"kind":"corpus","origin":"Fulltext"}
    {"kind":"frame","id":1,"name":"Giving","fes":[{"core_type":"Core","name":"Donor"}]}
    {"kind":"lu","id":10,"lemma":"contribution","pos":"N","frame_id":1}
    {"kind":"relation","type":"Inheritance","parent":8,"child":7,"fe_mappings":[["Recipient","Buyer"]]}
    {"kind":"sentence","id":1,"text":"...","document":"doc1"}
    {"kind":"annoset","id":1,"sentence_id":1,"lu_id":10,"frame_id":1,
     "targets":[[5,16]],"labels":[{"fe":"Donor","start":0,"end":3,"pt":"Poss","gf":"Gen"}]}

Label keys are ``fe``, ``start``, ``end``, ``pt``, ``gf`` and ``ni``; absent
values are omitted. Offsets are inclusive character offsets. The writer emits
a canonical form (sorted keys, compact separators, records ordered by kind
then id) so that reading and re-writing a canonical file is byte-identical.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import replace
from pathlib import Path
from typing import IO, Dict, Iterator, List, Union

from ..errors import IntegrityError, ParseError
from .model import (
    AnnotationSet,
    CoreType,
    Corpus,
    Frame,
    FrameElement,
    FrameRelation,
    LabelSpan,
    LexicalUnit,
    NIKind,
    Origin,
    POS,
    RelationKind,
    Rejection,
    Sentence,
)
from .ops import validate_annotation_set

logger = logging.getLogger(__name__)

KINDS = ("corpus", "frame", "lu", "relation", "sentence", "annoset")


def dumps(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def _label(d: dict) -> LabelSpan:
    ni = d.get("ni")
    return LabelSpan(
        fe_name=d["fe"],
        start=d.get("start"),
        end=d.get("end"),
        pt=d.get("pt"),
        gf=d.get("gf"),
        ni_kind=NIKind(ni) if ni is not None else None,
    )


def _decode(rec: dict):
    kind = rec["kind"]
    if kind == "frame":
        fes = tuple(FrameElement(fe["name"], CoreType(fe["core_type"])) for fe in rec["fes"])
        return Frame(int(rec["id"]), rec["name"], fes)
    if kind == "lu":
        return LexicalUnit(int(rec["id"]), rec["lemma"], POS(rec["pos"]), int(rec["frame_id"]))
    if kind == "relation":
        return FrameRelation(
            RelationKind(rec["type"]),
            int(rec["parent"]),
            int(rec["child"]),
            tuple((p, c) for p, c in rec.get("fe_mappings", [])),
        )
    if kind == "sentence":
        return Sentence(int(rec["id"]), rec["text"], rec.get("document"))
    if kind == "annoset":
        return AnnotationSet(
            id=int(rec["id"]),
            sentence_id=int(rec["sentence_id"]),
            lu_id=int(rec["lu_id"]),
            frame_id=int(rec["frame_id"]),
            target_spans=tuple((int(s), int(e)) for s, e in rec["targets"]),
            labels=tuple(_label(lab) for lab in rec.get("labels", [])),
        )
    if kind == "corpus":
        return Origin(rec["origin"])
    raise ValueError(f"unknown record kind {kind!r}")


def iter_records(lines, source: str = "<input>") -> Iterator[tuple]:
    """Yield ``(position, decoded object)`` per non-blank line.

    Undecodable lines yield ``(position, ParseError)`` instead of raising, so
    the caller decides between collecting and failing.
    """
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        pos = f"{source}:{lineno}"
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise ValueError("record is not an object")
            yield pos, _decode(rec)
        except (ValueError, KeyError, TypeError) as exc:
            yield pos, ParseError(f"{type(exc).__name__}: {exc}", pos)


def assemble(
    frames: Dict[int, Frame],
    lus: Dict[int, LexicalUnit],
    relations: List[FrameRelation],
    sentences: Dict[int, Sentence],
    annosets: List[tuple],
    origin: Origin,
    rejected: List[Rejection],
    strict: bool = False,
) -> Corpus:
    """Check referential integrity and build a :class:`Corpus`.

    Dangling references raise :class:`IntegrityError`. Annotation sets that
    fail :func:`validate_annotation_set` are collected into
    ``corpus.rejected`` (or raise :class:`ParseError` when *strict*).
    """
    for lu in lus.values():
        if lu.frame_id not in frames:
            raise IntegrityError(f"LU {lu.id} references unknown frame {lu.frame_id}")
        if not lu.lemma.strip():
            raise IntegrityError(f"LU {lu.id} has an empty lemma")
    for rel in relations:
        for fid in (rel.parent_frame_id, rel.child_frame_id):
            if fid not in frames:
                raise IntegrityError(f"relation references unknown frame {fid}")
        parent, child = frames[rel.parent_frame_id], frames[rel.child_frame_id]
        for pfe, cfe in rel.fe_mappings:
            if not parent.has_fe(pfe):
                raise IntegrityError(f"relation maps unknown FE {pfe!r} of {parent.name}")
            if not child.has_fe(cfe):
                raise IntegrityError(f"relation maps unknown FE {cfe!r} of {child.name}")

    kept: Dict[int, AnnotationSet] = {}
    for pos, a in annosets:
        if a.id in kept:
            raise IntegrityError(f"duplicate annotation set id {a.id} at {pos}")
        if a.sentence_id not in sentences:
            raise IntegrityError(f"annotation set {a.id} references unknown sentence {a.sentence_id}")
        if a.lu_id not in lus:
            raise IntegrityError(f"annotation set {a.id} references unknown LU {a.lu_id}")
        if a.frame_id not in frames:
            raise IntegrityError(f"annotation set {a.id} references unknown frame {a.frame_id}")
        if lus[a.lu_id].frame_id != a.frame_id:
            raise IntegrityError(f"annotation set {a.id}: LU {a.lu_id} is not in frame {a.frame_id}")
        frame = frames[a.frame_id]
        for label in a.labels:
            if not frame.has_fe(label.fe_name):
                raise IntegrityError(
                    f"annotation set {a.id} labels unknown frame element "
                    f"{label.fe_name!r} of frame {frame.name}"
                )
        reason = validate_annotation_set(a, sentences[a.sentence_id])
        if reason is not None:
            if strict:
                raise ParseError(f"annotation set {a.id}: {reason.value}", pos)
            rejected.append(Rejection(pos, reason.value, a.id))
            continue
        kept[a.id] = a

    lus_by_frame = defaultdict(list)
    for lu in sorted(lus.values(), key=lambda x: x.id):
        lus_by_frame[lu.frame_id].append(lu.id)
    rels_by_frame = defaultdict(list)
    for rel in relations:
        rels_by_frame[rel.parent_frame_id].append(rel)
        if rel.child_frame_id != rel.parent_frame_id:
            rels_by_frame[rel.child_frame_id].append(rel)
    frames = {
        fid: replace(
            f,
            lexical_units=tuple(lus_by_frame[fid]),
            relations=tuple(rels_by_frame[fid]),
        )
        for fid, f in sorted(frames.items())
    }
    if rejected:
        logger.warning("%d records rejected at ingestion", len(rejected))
    return Corpus(
        sentences=dict(sorted(sentences.items())),
        annotation_sets=dict(sorted(kept.items())),
        frames=frames,
        lexical_units=dict(sorted(lus.items())),
        relations=tuple(relations),
        origin=origin,
        rejected=rejected,
    )


def read_jsonl(path: Union[str, Path], strict: bool = False) -> Corpus:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return load_jsonl(fh, source=str(path), strict=strict)


def load_jsonl(lines, source: str = "<input>", strict: bool = False) -> Corpus:
    frames: Dict[int, Frame] = {}
    lus: Dict[int, LexicalUnit] = {}
    relations: List[FrameRelation] = []
    sentences: Dict[int, Sentence] = {}
    annosets: List[tuple] = []
    rejected: List[Rejection] = []
    origin = Origin.FULLTEXT
    for pos, obj in iter_records(lines, source):
        if isinstance(obj, ParseError):
            if strict:
                raise obj
            rejected.append(Rejection(pos, obj.reason))
        elif isinstance(obj, Origin):
            origin = obj
        elif isinstance(obj, Frame):
            if obj.id in frames:
                raise IntegrityError(f"duplicate frame id {obj.id} at {pos}")
            if len(obj.fe_map) != len(obj.frame_elements):
                raise IntegrityError(f"frame {obj.name} repeats a frame element name")
            frames[obj.id] = obj
        elif isinstance(obj, LexicalUnit):
            if obj.id in lus:
                raise IntegrityError(f"duplicate LU id {obj.id} at {pos}")
            lus[obj.id] = obj
        elif isinstance(obj, FrameRelation):
            relations.append(obj)
        elif isinstance(obj, Sentence):
            if obj.id in sentences:
                raise IntegrityError(f"duplicate sentence id {obj.id} at {pos}")
            sentences[obj.id] = obj
        else:
            annosets.append((pos, obj))
    return assemble(frames, lus, relations, sentences, annosets, origin, rejected, strict)


def _label_record(label: LabelSpan) -> dict:
    rec = {"fe": label.fe_name}
    for key, value in (
        ("start", label.start),
        ("end", label.end),
        ("pt", label.pt),
        ("gf", label.gf),
        ("ni", label.ni_kind.value if label.ni_kind else None),
    ):
        if value is not None:
            rec[key] = value
    return rec


def corpus_records(c: Corpus) -> Iterator[dict]:
    yield {"kind": "corpus", "origin": c.origin.value}
    for f in sorted(c.frames.values(), key=lambda x: x.id):
        yield {
            "kind": "frame",
            "id": f.id,
            "name": f.name,
            "fes": [{"name": fe.name, "core_type": fe.core_type.value} for fe in f.frame_elements],
        }
    for lu in sorted(c.lexical_units.values(), key=lambda x: x.id):
        yield {"kind": "lu", "id": lu.id, "lemma": lu.lemma, "pos": lu.pos.value, "frame_id": lu.frame_id}
    for rel in c.relations:
        yield {
            "kind": "relation",
            "type": rel.kind.value,
            "parent": rel.parent_frame_id,
            "child": rel.child_frame_id,
            "fe_mappings": [list(m) for m in rel.fe_mappings],
        }
    for s in sorted(c.sentences.values(), key=lambda x: x.id):
        rec = {"kind": "sentence", "id": s.id, "text": s.text}
        if s.document is not None:
            rec["document"] = s.document
        yield rec
    for a in sorted(c.annotation_sets.values(), key=lambda x: x.id):
        yield {
            "kind": "annoset",
            "id": a.id,
            "sentence_id": a.sentence_id,
            "lu_id": a.lu_id,
            "frame_id": a.frame_id,
            "targets": [list(t) for t in a.target_spans],
            "labels": [_label_record(lab) for lab in a.labels],
        }


def dump_jsonl(c: Corpus, fh: IO[str]) -> None:
    for rec in corpus_records(c):
        fh.write(dumps(rec))
        fh.write("\n")


def write_jsonl(c: Corpus, path: Union[str, Path]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        dump_jsonl(c, fh)


def export_text(c: Corpus) -> str:
    return "".join(dumps(rec) + "\n" for rec in corpus_records(c))
