"""
Symmetries of fullerenes and their action on magical configurations.

Automorphisms are vertex permutations that map faces onto faces of the same
size. A permutation sigma acts on a configuration f by f -> f o sigma, which
keeps both magic constants. The complement x -> n + 1 - x acts on labels
instead and swaps a pair with its complement pair, so it is kept outside the
group and reported across pairs.

Since labels are distinct, f o sigma = f forces sigma = id: the action is free
and every orbit has exactly |G| elements.
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel

from magic.constants import MagicPair
from magic.errors import InvalidPermutationError, MagicError, SolutionsNotStoredError
from magic.graph import FullereneGraph
from magic.search import Configuration, CountTable, SolutionSet

logger = logging.getLogger(__name__)

TABLE_DIVISOR = 12  # every published C24 count is a multiple of 12

Permutation = Tuple[int, ...]  # position i holds sigma(i+1), 1-based


class OrbitReport(BaseModel):
    pair: MagicPair
    total: int
    orbit_count: int
    orbit_size: Optional[int]  # None if sizes differ
    representatives: List[Tuple[int, ...]]


class CrossPairReport(BaseModel):
    pair: MagicPair
    complement: MagicPair
    bijective: bool
    orbit_count: int
    orbit_size: Optional[int]


class DivisibilityCheck(BaseModel):
    sp: int
    sh: int
    count: int
    group_order: int
    divisible_by_group: bool
    divisible_by_12: bool


# ============================================================================
# PERMUTATIONS
# ============================================================================

def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a o b)(v) = a(b(v))."""
    return tuple(a[x - 1] for x in b)


def inverse(a: Permutation) -> Permutation:
    result = [0] * len(a)
    for i, x in enumerate(a, start=1):
        result[x - 1] = i
    return tuple(result)


def _check_permutation(sigma: Sequence[int], n: int) -> None:
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise InvalidPermutationError(f"not a permutation of 1..{n}: {list(sigma)}")


def _closure(generators: Iterable[Permutation], n: int) -> Set[Permutation]:
    identity = tuple(range(1, n + 1))
    gens = list(generators)
    seen = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for gen in gens:
            nxt = compose(current, gen)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


# ============================================================================
# AUTOMORPHISM GROUP
# ============================================================================

@dataclass(frozen=True)
class AutomorphismGroup:
    n: int
    elements: Tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return tuple(range(1, self.n + 1))

    @cached_property
    def _members(self) -> Set[Permutation]:
        return set(self.elements)

    def __contains__(self, sigma: object) -> bool:
        return tuple(sigma) in self._members

    @classmethod
    def trivial(cls, n: int) -> "AutomorphismGroup":
        return cls(n=n, elements=(tuple(range(1, n + 1)),))


def _face_signature(graph: FullereneGraph) -> Dict[int, Tuple[int, ...]]:
    return {v: tuple(sorted(len(graph.faces[f]) for f in idxs))
            for v, idxs in graph.faces_of_vertex.items()}


def _bfs_order(graph: FullereneGraph) -> List[Tuple[int, Optional[int]]]:
    """(vertex, parent) pairs from vertex 1; the parent is mapped first."""
    order = [(1, None)]
    seen = {1}
    queue = deque([1])
    while queue:
        u = queue.popleft()
        for w in graph.neighbours[u]:
            if w not in seen:
                seen.add(w)
                order.append((w, u))
                queue.append(w)
    return order


def _verify_group(graph: FullereneGraph, elements: Tuple[Permutation, ...]) -> None:
    members = set(elements)
    faces = {frozenset(f) for f in graph.faces}
    if tuple(range(1, graph.n + 1)) not in members:
        raise MagicError("automorphism search lost the identity")
    for sigma in elements:
        if inverse(sigma) not in members:
            raise MagicError("automorphism set not closed under inverses")
        for face in graph.faces:
            if frozenset(sigma[v - 1] for v in face) not in faces:
                raise MagicError("permutation does not preserve the faces")
    for a in elements:
        for b in elements:
            if compose(a, b) not in members:
                raise MagicError("automorphism set not closed under composition")


def automorphisms(graph: FullereneGraph) -> AutomorphismGroup:
    """
    All face-preserving vertex permutations, by backtracking on vertex images.

    Vertices are mapped in BFS order so each new vertex has a mapped parent and
    must go to an unused neighbour of the parent's image. Candidates must agree
    on face-size signature and keep every already-mapped edge an edge.
    """
    n = graph.n
    order = _bfs_order(graph)
    signature = _face_signature(graph)
    adjacency = {v: set(ws) for v, ws in graph.neighbours.items()}
    faces = {frozenset(f) for f in graph.faces}
    image: Dict[int, int] = {}
    taken: Set[int] = set()
    found: List[Permutation] = []

    def extend(depth: int) -> None:
        if depth == len(order):
            sigma = tuple(image[v] for v in range(1, n + 1))
            if all(frozenset(sigma[v - 1] for v in f) in faces for f in graph.faces):
                found.append(sigma)
            return
        u, parent = order[depth]
        pool = range(1, n + 1) if parent is None else graph.neighbours[image[parent]]
        for c in pool:
            if c in taken or signature[c] != signature[u]:
                continue
            if any(w in image and image[w] not in adjacency[c] for w in adjacency[u]):
                continue
            image[u] = c
            taken.add(c)
            extend(depth + 1)
            taken.discard(c)
            del image[u]

    extend(0)
    elements = tuple(sorted(found))
    _verify_group(graph, elements)
    logger.info(f"[AUT] {graph.graph_id}: group order {len(elements)}")
    return AutomorphismGroup(n=n, elements=elements)


def generators(grp: AutomorphismGroup) -> List[Permutation]:
    """Greedy generating set: keep each element not yet in the generated subgroup."""
    gens: List[Permutation] = []
    generated = {grp.identity}
    for sigma in grp.elements:
        if sigma not in generated:
            gens.append(sigma)
            generated = _closure(gens, grp.n)
    return gens


# ============================================================================
# ACTIONS ON CONFIGURATIONS
# ============================================================================

def apply_automorphism(labels: Configuration, sigma: Sequence[int]) -> Configuration:
    """f o sigma: vertex v receives the label f had on sigma(v)."""
    _check_permutation(sigma, len(labels))
    return tuple(labels[x - 1] for x in sigma)


def complement(labels: Configuration) -> Configuration:
    top = len(labels) + 1
    return tuple(top - x for x in labels)


def _require_stored(s: SolutionSet) -> Tuple[Configuration, ...]:
    if s.solutions is None:
        raise SolutionsNotStoredError(
            f"solutions for {s.pair} were counted but not stored; rerun with storage enabled")
    return s.solutions


def orbit_partition(s: SolutionSet, grp: AutomorphismGroup) -> OrbitReport:
    solutions = _require_stored(s)
    members = set(solutions)
    seen: Set[Configuration] = set()
    representatives = []
    sizes = set()
    for labels in solutions:
        if labels in seen:
            continue
        orbit = {apply_automorphism(labels, sigma) for sigma in grp.elements} & members
        seen |= orbit
        sizes.add(len(orbit))
        representatives.append(min(orbit))
    representatives.sort()
    return OrbitReport(
        pair=s.pair,
        total=len(members),
        orbit_count=len(representatives),
        orbit_size=sizes.pop() if len(sizes) == 1 else None,
        representatives=representatives,
    )


def check_free_action(s: SolutionSet, grp: AutomorphismGroup) -> bool:
    solutions = _require_stored(s)
    identity = grp.identity
    for labels in solutions:
        for sigma in grp.elements:
            if sigma != identity and apply_automorphism(labels, sigma) == labels:
                return False
    return True


def complement_bijection(s: SolutionSet, s_comp: SolutionSet) -> bool:
    """Complement maps s onto s_comp exactly and is an involution on s."""
    solutions = _require_stored(s)
    mapped = {complement(labels) for labels in solutions}
    involutive = all(complement(complement(labels)) == labels for labels in solutions)
    return involutive and mapped == set(_require_stored(s_comp))


def cross_pair_orbits(s: SolutionSet, s_comp: SolutionSet, grp: AutomorphismGroup) -> CrossPairReport:
    """Orbits of G (+) Z2 on the union of a pair's solutions and its complement pair's."""
    union = set(_require_stored(s)) | set(_require_stored(s_comp))
    seen: Set[Configuration] = set()
    sizes = set()
    count = 0
    for labels in sorted(union):
        if labels in seen:
            continue
        images = {apply_automorphism(labels, sigma) for sigma in grp.elements}
        orbit = (images | {complement(c) for c in images}) & union
        seen |= orbit
        sizes.add(len(orbit))
        count += 1
    return CrossPairReport(
        pair=s.pair,
        complement=s_comp.pair,
        bijective=complement_bijection(s, s_comp),
        orbit_count=count,
        orbit_size=sizes.pop() if len(sizes) == 1 else None,
    )


def divisibility_checks(table: CountTable, grp: AutomorphismGroup) -> List[DivisibilityCheck]:
    return [
        DivisibilityCheck(
            sp=row.sp, sh=row.sh, count=row.count, group_order=grp.order,
            divisible_by_group=row.count % grp.order == 0,
            divisible_by_12=row.count % TABLE_DIVISOR == 0,
        )
        for row in table.rows
    ]
