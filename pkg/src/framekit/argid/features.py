"""Feature templates for argument identification.

Every template instance is emitted three times: on its own (role
agnostic), conjoined with the frame element being filled, and conjoined
with both the frame element and the frame. Feature strings are hashed to
64-bit ids with BLAKE2b so ids are stable across processes.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from hashlib import blake2b
from typing import Dict, List, Optional, Sequence

from ..deptree import DependencyTree, Span
from ..fndata import Frame, FrameRelation
from .hierarchy import hierarchy_expand

FeatureVector = Dict[int, float]

NULL_SPAN = None


@dataclass(frozen=True)
class TemplateConfig:
    hierarchy: bool = False
    max_path: int = 6

    def to_dict(self) -> dict:
        return asdict(self)


def feature_id(name: str) -> int:
    return int.from_bytes(blake2b(name.encode("utf-8"), digest_size=8).digest(), "little")


def length_bucket(n: int) -> str:
    if n <= 4:
        return str(n)
    return "5-9" if n <= 9 else "10+"


def dependency_path(tree: DependencyTree, src: int, dst: int, cap: int = 6) -> str:
    """Relation labels from *src* up to the common ancestor, then down to *dst*."""
    if src == dst:
        return "SELF"
    up = tree.path_to_root(src)
    down = tree.path_to_root(dst)
    down_set = set(down)
    common = next(i for i in up if i in down_set)
    steps = [tree.token(i).deprel + "↑" for i in up[: up.index(common)]]
    steps += [tree.token(i).deprel + "↓" for i in reversed(down[: down.index(common)])]
    if len(steps) > cap:
        return "LONG"
    return "_".join(steps)


def relative_position(span: Span, target: Span) -> str:
    if span.end < target.start:
        return "before"
    if span.start > target.end:
        return "after"
    return "overlap"


def voice(tree: DependencyTree, target_head: int) -> str:
    for child in tree.children[target_head]:
        if "subjpass" in tree.token(child).deprel:
            return "passive"
    return "active"


class FeatureExtractor:
    """Builds feature vectors for ``(tree, target, frame, role, span)`` tuples.

    With ``config.hierarchy`` on, role-conjoined variants are also emitted
    for every ancestor ``(frame, FE)`` reachable through Inheritance and
    SubFrame FE mappings; this needs the lexicon's frames and relations.
    """

    def __init__(
        self,
        config: TemplateConfig = TemplateConfig(),
        frames: Optional[Dict[int, Frame]] = None,
        relations: Sequence[FrameRelation] = (),
    ):
        self.config = config
        self.frames = frames or {}
        self.relations = tuple(relations)
        self._ancestors: Dict[tuple, list] = {}

    def _roles(self, frame: Frame, role: str) -> List[tuple]:
        if not self.config.hierarchy:
            return [(frame.name, role)]
        key = (frame.id, role)
        if key not in self._ancestors:
            self._ancestors[key] = hierarchy_expand(frame, role, self.relations, self.frames)
        return self._ancestors[key]

    def base_templates(self, tree: DependencyTree, target: Span, span: Optional[Span]) -> List[str]:
        th = tree.token(tree.span_head(target))
        v = voice(tree, th.index)
        if span is NULL_SPAN:
            return ["null", f"null|tlem={th.lemma}", f"null|tpos={th.pos}", f"null|voice={v}"]
        h = tree.token(tree.span_head(span))
        return [
            f"hlem={h.lemma}",
            f"hpos={h.pos}",
            f"first={tree.token(span.start).form.lower()}",
            f"last={tree.token(span.end).form.lower()}",
            f"len={length_bucket(len(span))}",
            f"tlem={th.lemma}",
            f"tpos={th.pos}",
            f"path={dependency_path(tree, th.index, h.index, self.config.max_path)}",
            f"position={relative_position(span, target)}",
            f"voice={v}",
            f"tlem|hlem={th.lemma}|{h.lemma}",
        ]

    def feature_strings(
        self, tree: DependencyTree, target: Span, frame: Frame, role: str, span: Optional[Span]
    ) -> List[str]:
        out = []
        roles = self._roles(frame, role)
        for t in self.base_templates(tree, target, span):
            out.append(t)
            for frame_name, fe in roles:
                out.append(f"{t}|fe={fe}")
                out.append(f"{t}|fe={fe}|fr={frame_name}")
        return out

    def extract(
        self, tree: DependencyTree, target: Span, frame: Frame, role: str, span: Optional[Span]
    ) -> FeatureVector:
        return {feature_id(s): 1.0 for s in self.feature_strings(tree, target, frame, role, span)}


def extract_features(tree, target, frame, role, span, config: TemplateConfig = TemplateConfig()) -> FeatureVector:
    return FeatureExtractor(config).extract(tree, target, frame, role, span)
