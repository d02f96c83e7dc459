"""
Independent counting oracle.

Shares no code path with magic.search beyond the relation check: vertices are
visited in a fixed order (faces walked in reverse input order), every unused
label is tried, and face sums are recomputed from the labels on each test.
Slow by construction; it exists to cross-check the main enumerator.
"""
import logging
from typing import Dict, List

from magic.constants import MagicPair, check_relation
from magic.graph import HEXAGON, FullereneGraph

logger = logging.getLogger(__name__)


def static_order(graph: FullereneGraph) -> List[int]:
    """1-based vertices in first-seen order while walking faces last to first."""
    order: List[int] = []
    seen = set()
    for face in reversed(graph.faces):
        for v in face:
            if v not in seen:
                seen.add(v)
                order.append(v)
    return order


def oracle_enumerate(graph: FullereneGraph, pair: MagicPair) -> int:
    check_relation(graph.n, pair)
    n = graph.n
    order = static_order(graph)
    targets = [pair.sh if len(face) == HEXAGON else pair.sp for face in graph.faces]
    faces_at: Dict[int, List[int]] = {v: [] for v in range(1, n + 1)}
    for idx, face in enumerate(graph.faces):
        for v in face:
            faces_at[v].append(idx)

    labels: Dict[int, int] = {}
    unused = set(range(1, n + 1))

    def face_ok(idx: int) -> bool:
        face = graph.faces[idx]
        placed = [labels[v] for v in face if v in labels]
        total = sum(placed)
        missing = len(face) - len(placed)
        if missing == 0:
            return total == targets[idx]
        pool = sorted(unused)
        return (total + sum(pool[:missing]) <= targets[idx]
                and total + sum(pool[-missing:]) >= targets[idx])

    def walk(depth: int) -> int:
        if depth == n:
            return 1
        v = order[depth]
        found = 0
        for x in sorted(unused):
            labels[v] = x
            unused.discard(x)
            if all(face_ok(idx) for idx in faces_at[v]):
                found += walk(depth + 1)
            unused.add(x)
            del labels[v]
        return found

    count = walk(0)
    logger.info(f"[ORACLE] {graph.graph_id} {pair}: count={count}")
    return count
