from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

from ..errors import CycleDetected
from ..fndata import Frame, FrameRelation, RelationKind

HIERARCHY_KINDS = (RelationKind.INHERITANCE, RelationKind.SUBFRAME)


def hierarchy_expand(
    frame: Frame,
    role: str,
    relations: Sequence[FrameRelation],
    frames: Dict[int, Frame],
) -> List[Tuple[str, str]]:
    """``(frame name, FE name)`` pairs reachable upward from ``frame.role``.

    Follows FE mappings of Inheritance and SubFrame relations from child to
    parent, depth first, the starting pair first. Pairs reachable along
    several paths appear once.
    """
    parents: Dict[Tuple[int, str], List[Tuple[int, str]]] = defaultdict(list)
    for rel in relations:
        if rel.kind not in HIERARCHY_KINDS:
            continue
        for parent_fe, child_fe in rel.fe_mappings:
            parents[(rel.child_frame_id, child_fe)].append((rel.parent_frame_id, parent_fe))

    def name(fid: int) -> str:
        if fid == frame.id:
            return frame.name
        return frames[fid].name if fid in frames else str(fid)

    out: List[Tuple[str, str]] = []
    seen = set()

    def visit(node, path):
        if node in path:
            raise CycleDetected(f"frame hierarchy cycle through {name(node[0])}.{node[1]}")
        if node in seen:
            return
        seen.add(node)
        out.append((name(node[0]), node[1]))
        for parent in parents.get(node, ()):
            visit(parent, path | {node})

    visit((frame.id, role), frozenset())
    return out
