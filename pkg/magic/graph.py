"""
Fullerene face structures.

A fullerene is given by its vertex count and the list of its faces, each face a
cyclic sequence of 1-based vertex ids. Face kind follows from length: 5 is a
pentagon, 6 a hexagon.

Graph file format (JSON):
    {"n": 24, "faces": [[1, 2, 3, 4, 5, 6], [3, 4, 21, 20, 19], ...]}

Every FullereneGraph is validated on construction, so any instance that exists
satisfies all fullerene invariants.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError

from magic.errors import GraphSyntaxError, GraphValidationError

logger = logging.getLogger(__name__)

PENTAGON = 5
HEXAGON = 6
PENTAGON_COUNT = 12
FACES_PER_VERTEX = 3
FACES_PER_EDGE = 2

Face = Tuple[int, ...]
Edge = Tuple[int, int]


# ============================================================================
# FILE SCHEMA
# ============================================================================

class GraphFile(BaseModel):
    """Wire shape of a graph file; structural checks only."""
    model_config = ConfigDict(extra="forbid", strict=True)

    n: int
    faces: List[List[int]]


class IncidenceProfile(BaseModel):
    """Per-vertex face multiplicities, position i describes vertex i+1."""
    model_config = ConfigDict(frozen=True)

    hex_multiplicity: Tuple[int, ...]
    pent_multiplicity: Tuple[int, ...]


# ============================================================================
# MODEL
# ============================================================================

def _face_edges(face: Face) -> List[Edge]:
    return [tuple(sorted((face[i], face[(i + 1) % len(face)]))) for i in range(len(face))]


def _check_invariants(n: int, faces: Tuple[Face, ...]) -> None:
    """Raises GraphValidationError naming the first violated invariant."""
    if n <= 0 or n % 2:
        raise GraphValidationError(f"n={n} is not a positive even integer")

    for idx, face in enumerate(faces, start=1):
        if len(face) not in (PENTAGON, HEXAGON):
            raise GraphValidationError(
                f"face {idx} has {len(face)} vertices, expected 5 or 6")
        for v in face:
            if not 1 <= v <= n:
                raise GraphValidationError(f"vertex {v} in face {idx} is out of range 1..{n}")
        if len(set(face)) != len(face):
            raise GraphValidationError(f"face {idx} contains a repeated vertex")

    pentagons = sum(1 for f in faces if len(f) == PENTAGON)
    hexagons = len(faces) - pentagons
    if pentagons != PENTAGON_COUNT:
        raise GraphValidationError(f"{pentagons} pentagons, expected {PENTAGON_COUNT}")
    expected_hexagons = n // 2 - 10
    if hexagons != expected_hexagons:
        raise GraphValidationError(f"{hexagons} hexagons, expected {expected_hexagons}")
    if len(faces) != n // 2 + 2:
        raise GraphValidationError(f"{len(faces)} faces, expected {n // 2 + 2}")

    membership = Counter(v for face in faces for v in face)
    for v in range(1, n + 1):
        if membership[v] != FACES_PER_VERTEX:
            raise GraphValidationError(f"vertex {v} appears in {membership[v]} faces")

    edge_faces = Counter(e for face in faces for e in _face_edges(face))
    for edge, count in sorted(edge_faces.items()):
        if count != FACES_PER_EDGE:
            raise GraphValidationError(
                f"edge {edge[0]}-{edge[1]} bounds {count} faces, expected {FACES_PER_EDGE}")
    if len(edge_faces) != 3 * n // 2:
        raise GraphValidationError(f"{len(edge_faces)} edges, expected {3 * n // 2}")


@dataclass(frozen=True)
class FullereneGraph:
    """Immutable, validated fullerene face structure."""
    n: int
    faces: Tuple[Face, ...]
    graph_id: str = field(default="graph", compare=False)

    def __post_init__(self) -> None:
        faces = tuple(tuple(int(v) for v in face) for face in self.faces)
        object.__setattr__(self, "faces", faces)
        _check_invariants(self.n, faces)

    @property
    def pentagons(self) -> Tuple[Face, ...]:
        return tuple(f for f in self.faces if len(f) == PENTAGON)

    @property
    def hexagons(self) -> Tuple[Face, ...]:
        return tuple(f for f in self.faces if len(f) == HEXAGON)

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(sorted({e for face in self.faces for e in _face_edges(face)}))

    @cached_property
    def neighbours(self) -> Dict[int, Tuple[int, ...]]:
        adjacency: Dict[int, set] = {v: set() for v in range(1, self.n + 1)}
        for a, b in self.edges:
            adjacency[a].add(b)
            adjacency[b].add(a)
        return {v: tuple(sorted(adj)) for v, adj in adjacency.items()}

    @cached_property
    def faces_of_vertex(self) -> Dict[int, Tuple[int, ...]]:
        """Vertex id -> indices (into `faces`) of the three faces containing it."""
        result: Dict[int, List[int]] = {v: [] for v in range(1, self.n + 1)}
        for idx, face in enumerate(self.faces):
            for v in face:
                result[v].append(idx)
        return {v: tuple(idxs) for v, idxs in result.items()}


# ============================================================================
# PARSING / SERIALIZATION
# ============================================================================

def parse_fullerene(text: str, graph_id: str = "graph") -> FullereneGraph:
    """
    Parses and validates a graph file in one step.

    Raises:
        GraphSyntaxError: malformed JSON or wrong shape
        GraphValidationError: the first violated fullerene invariant
    """
    try:
        payload = GraphFile.model_validate_json(text)
    except ValidationError as e:
        raise GraphSyntaxError(f"malformed graph file: {e.errors()[0]['msg']}") from e
    graph = FullereneGraph(n=payload.n, faces=tuple(tuple(f) for f in payload.faces),
                           graph_id=graph_id)
    logger.debug(f"[GRAPH] parsed {graph_id}: n={graph.n}, {len(graph.hexagons)} hexagons")
    return graph


def load_fullerene(path: str | Path) -> FullereneGraph:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GraphSyntaxError(f"cannot read graph file {path}: {e}") from e
    return parse_fullerene(text, graph_id=path.stem)


def serialize_fullerene(graph: FullereneGraph) -> str:
    return GraphFile(n=graph.n, faces=[list(f) for f in graph.faces]).model_dump_json()


def incidence_profile(graph: FullereneGraph) -> IncidenceProfile:
    hex_mult = [0] * graph.n
    for face in graph.hexagons:
        for v in face:
            hex_mult[v - 1] += 1
    return IncidenceProfile(
        hex_multiplicity=tuple(hex_mult),
        pent_multiplicity=tuple(FACES_PER_VERTEX - m for m in hex_mult),
    )


def face_system_rank(graph: FullereneGraph) -> int:
    """Rank of the face-by-vertex incidence matrix, by exact row reduction over the rationals."""
    rows = [[Fraction(int(v in face)) for v in range(1, graph.n + 1)] for face in graph.faces]
    rank = 0
    for col in range(graph.n):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i, row in enumerate(rows):
            if i != rank and row[col] != 0:
                factor = row[col] / rows[rank][col]
                rows[i] = [a - factor * b for a, b in zip(row, rows[rank])]
        rank += 1
    return rank
