"""Adapter for the FrameNet 1.5/1.7 XML release layout.

Reads ``frame/*.xml`` (frames, frame elements, lexical units),
``frRelation.xml`` (frame relations with FE mappings), ``fulltext/*.xml``
(documents; the file stem becomes the document name) and, optionally,
``lu/*.xml`` (exemplar sentences). Only rank-1 FE/PT/GF layers are read; PT
and GF labels are paired with FE labels by identical offsets.
"""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Dict, List, Optional

from ..errors import ParseError
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
from .native import assemble

logger = logging.getLogger(__name__)


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _children(el, name):
    return [c for c in el if _local(c.tag) == name]


def _int(value: Optional[str]) -> Optional[int]:
    return int(value) if value not in (None, "") else None


def _parse(path: Path):
    try:
        return ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise ParseError(str(exc), str(path)) from exc


def _core_type(value: str) -> CoreType:
    try:
        return CoreType(value)
    except ValueError:
        return CoreType.PERIPHERAL


def read_frames(root: Path):
    frames: Dict[int, Frame] = {}
    lus: Dict[int, LexicalUnit] = {}
    for path in sorted((root / "frame").glob("*.xml")):
        el = _parse(path)
        fid = int(el.get("ID"))
        fes = tuple(
            FrameElement(fe.get("name"), _core_type(fe.get("coreType", "Peripheral")))
            for fe in _children(el, "FE")
        )
        frames[fid] = Frame(fid, el.get("name"), fes)
        for lu in _children(el, "lexUnit"):
            name = lu.get("name")
            lemma = name.rsplit(".", 1)[0] if "." in name else name
            lus[int(lu.get("ID"))] = LexicalUnit(int(lu.get("ID")), lemma, POS.parse(lu.get("POS", "")), fid)
    return frames, lus


def read_relations(root: Path) -> List[FrameRelation]:
    path = root / "frRelation.xml"
    if not path.exists():
        return []
    relations = []
    for rtype in _children(_parse(path), "frameRelationType"):
        kind = RelationKind.parse(rtype.get("name", ""))
        for rel in _children(rtype, "frameRelation"):
            mappings = tuple(
                (m.get("superFEName"), m.get("subFEName")) for m in _children(rel, "FERelation")
            )
            relations.append(
                FrameRelation(kind, int(rel.get("supID")), int(rel.get("subID")), mappings)
            )
    return relations


def _layer(aset, name):
    for layer in _children(aset, "layer"):
        if layer.get("name") == name and layer.get("rank", "1") == "1":
            return _children(layer, "label")
    return []


def _annoset(aset, sid: int, lu_id: int, frame_id: int) -> AnnotationSet:
    targets = tuple(
        (int(t.get("start")), int(t.get("end")))
        for t in _layer(aset, "Target")
        if t.get("start") is not None and t.get("end") is not None
    )
    pts = {(lab.get("start"), lab.get("end")): lab.get("name") for lab in _layer(aset, "PT")}
    gfs = {(lab.get("start"), lab.get("end")): lab.get("name") for lab in _layer(aset, "GF")}
    labels = []
    for lab in _layer(aset, "FE"):
        itype = lab.get("itype")
        if itype:
            try:
                ni = NIKind(itype)
            except ValueError:
                ni = NIKind.INI
            labels.append(LabelSpan(lab.get("name"), ni_kind=ni))
            continue
        key = (lab.get("start"), lab.get("end"))
        labels.append(
            LabelSpan(lab.get("name"), _int(key[0]), _int(key[1]), pts.get(key), gfs.get(key))
        )
    return AnnotationSet(int(aset.get("ID")), sid, lu_id, frame_id, targets, tuple(labels))


def _read_sentences(path: Path, document, sentences, annosets, lu_id=None, frame_id=None):
    root = _parse(path)
    for sent in _children(root, "sentence") + [
        s for sub in _children(root, "subCorpus") for s in _children(sub, "sentence")
    ]:
        sid = int(sent.get("ID"))
        text_el = _children(sent, "text")
        if not text_el or not text_el[0].text:
            continue
        sentences.setdefault(sid, Sentence(sid, text_el[0].text, document))
        for aset in _children(sent, "annotationSet"):
            a_lu = _int(aset.get("luID")) or lu_id
            a_frame = _int(aset.get("frameID")) or frame_id
            if a_lu is None or a_frame is None:
                continue
            annosets.append((f"{path}:{aset.get('ID')}", _annoset(aset, sid, a_lu, a_frame)))


def read_framenet_xml(root, strict: bool = False, include_exemplars: bool = False) -> Corpus:
    root = Path(root)
    if not (root / "frame").is_dir():
        raise ParseError("not a FrameNet release directory (no frame/)", str(root))
    frames, lus = read_frames(root)
    relations = read_relations(root)
    sentences: Dict[int, Sentence] = {}
    annosets: List[tuple] = []
    for path in sorted((root / "fulltext").glob("*.xml")):
        _read_sentences(path, path.stem, sentences, annosets)
    origin = Origin.FULLTEXT
    if include_exemplars:
        if not annosets:
            origin = Origin.EXEMPLAR
        for path in sorted((root / "lu").glob("*.xml")):
            el = _parse(path)
            _read_sentences(path, None, sentences, annosets, int(el.get("ID")), _int(el.get("frameID")))
    rejected: List[Rejection] = []
    return assemble(frames, lus, relations, sentences, annosets, origin, rejected, strict)
