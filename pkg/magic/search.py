"""
Exhaustive enumeration of magical configurations.

Depth-first backtracking over vertices. A face with a single open vertex
forces that vertex's label to (constant - partial sum). Otherwise the search
branches on the lowest-id open vertex of the most constrained face, the one
whose remaining constant sits closest to the edge of what its open vertices
can still reach with the unused labels.

Every candidate label is checked against all open faces, not just the ones
through the vertex: a face through the vertex must stay reachable with x
placed, any other face must stay reachable once x leaves the unused pool.
Reachability is the min/max completion read off prefix sums of the unused
labels.

Counts are raw: no symmetry breaking, every configuration is counted.

For parallel runs the tree is cut at a shallow frontier (at least
TASKS_PER_WORKER subtrees per worker), subtrees run in a process pool and
their counts are summed in submission order.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from magic.constants import MagicPair, check_relation, complement_pair, feasible_pairs
from magic.errors import InvalidOrderError, InvalidPermutationError, UsageError
from magic.graph import HEXAGON, FullereneGraph

logger = logging.getLogger(__name__)

# CONSTANTS
MAX_VERTICES = 64  # used labels live in one machine-word-sized bit set
DEFAULT_NODE_BUDGET = 10 ** 10
TASKS_PER_WORKER = 4
MAX_SPLIT_DEPTH = 8

Configuration = Tuple[int, ...]  # position i holds the label of vertex i+1
Assignment = Tuple[Tuple[int, int], ...]  # (0-based vertex, label) decisions
Sink = Callable[[Configuration], None]


class SearchMode(str, Enum):
    COUNT = "count"
    STREAM = "stream"


@dataclass
class SolutionSet:
    graph_id: str
    pair: MagicPair
    count: int
    solutions: Optional[Tuple[Configuration, ...]] = None
    partial: bool = False
    nodes: int = 0
    tasks: int = 1

    @property
    def stored(self) -> bool:
        return self.solutions is not None


class CountRow(BaseModel):
    sp: int
    sh: int
    count: int
    partial: bool
    nodes: int
    complement_sp: int
    complement_sh: int


class CountTable(BaseModel):
    graph_id: str
    n: int
    rows: List[CountRow]
    partial: bool
    reason: Optional[str] = None


class _BudgetExhausted(Exception):
    pass


# ============================================================================
# VERIFICATION
# ============================================================================

def verify_configuration(graph: FullereneGraph, labels: Sequence[int], pair: MagicPair) -> bool:
    """True iff labels are a permutation of 1..n and every face hits its constant."""
    if len(labels) != graph.n:
        raise InvalidPermutationError(f"configuration has {len(labels)} labels, expected {graph.n}")
    if sorted(labels) != list(range(1, graph.n + 1)):
        return False
    for face in graph.faces:
        target = pair.sh if len(face) == HEXAGON else pair.sp
        if sum(labels[v - 1] for v in face) != target:
            return False
    return True


# ============================================================================
# SEARCH ENGINE
# ============================================================================

Pool = Tuple[List[int], List[int]]  # unused labels ascending, their prefix sums

_DEAD = (-1, -1)  # some face can no longer reach its constant


class _Searcher:
    """Mutable search state for one (graph, pair); 0-based vertices internally."""

    def __init__(self, graph: FullereneGraph, pair: MagicPair, node_budget: int,
                 collect: bool, sink: Optional[Sink] = None):
        self.n = graph.n
        self.faces = [[v - 1 for v in face] for face in graph.faces]
        self.face_const = [pair.sh if len(face) == HEXAGON else pair.sp for face in graph.faces]
        self.face_sum = [0] * len(self.faces)
        self.face_open = [len(face) for face in self.faces]
        self.vertex_faces = [[] for _ in range(self.n)]
        for idx, face in enumerate(self.faces):
            for v in face:
                self.vertex_faces[v].append(idx)
        self.labels = [0] * self.n
        self.used = 0
        self.node_budget = node_budget
        self.nodes = 0
        self.count = 0
        self.collect = collect
        self.sink = sink
        self.solutions: List[Configuration] = []

    # -- state ---------------------------------------------------------------

    def assign(self, v: int, x: int) -> None:
        self.labels[v] = x
        self.used |= 1 << x
        for f in self.vertex_faces[v]:
            self.face_sum[f] += x
            self.face_open[f] -= 1

    def unassign(self, v: int, x: int) -> None:
        self.labels[v] = 0
        self.used &= ~(1 << x)
        for f in self.vertex_faces[v]:
            self.face_sum[f] -= x
            self.face_open[f] += 1

    def replay(self, prefix: Assignment) -> None:
        for v, x in prefix:
            self.assign(v, x)

    def pool(self) -> Pool:
        free = [x for x in range(1, self.n + 1) if not self.used >> x & 1]
        pre = [0] * (len(free) + 1)
        for i, x in enumerate(free):
            pre[i + 1] = pre[i] + x
        return free, pre

    # -- decisions -----------------------------------------------------------

    def choose(self, pool: Pool) -> Optional[Tuple[int, int]]:
        """
        (vertex, face) to branch on, None when every vertex is labeled, or
        _DEAD when an open face is out of reach of the unused labels.

        A face with one open vertex wins outright (its label is forced).
        Otherwise the face with the narrowest completion window is taken:
        slack = distance from the remaining constant to the nearer of the
        smallest and largest sums its open vertices could still reach. Ties go
        to fewer open vertices, then the lowest vertex id, then face index.
        """
        free, pre = pool
        m = len(free)
        total = pre[m]
        best = None
        for f, k in enumerate(self.face_open):
            if k == 0:
                continue
            need = self.face_const[f] - self.face_sum[f]
            slack = min(need - pre[k], total - pre[m - k] - need)
            if slack < 0:
                return _DEAD
            if k == 1:
                slack = -1
            v = min(u for u in self.faces[f] if self.labels[u] == 0)
            key = (slack, k, v, f)
            if best is None or key < best:
                best = key
        if best is None:
            return None
        return best[2], best[3]

    def forbidden(self, v: int, pool: Pool) -> int:
        """
        Bit set of labels that v may not take because spending them would
        leave some open face not through v out of reach. Removing x only moves
        a face's completion bounds when x is among its r smallest or r largest
        unused labels.
        """
        free, pre = pool
        m = len(free)
        total = pre[m]
        through = self.vertex_faces[v]
        mask = 0
        for g, r in enumerate(self.face_open):
            if r == 0 or g in through:
                continue
            need = self.face_const[g] - self.face_sum[g]
            cut = pre[r + 1] - need
            for x in free[:r]:
                if x < cut:
                    mask |= 1 << x
            cut = total - pre[m - r - 1] - need
            for x in free[m - r:]:
                if x > cut:
                    mask |= 1 << x
        return mask

    def candidates(self, v: int, f: int, pool: Pool) -> List[int]:
        free, pre = pool
        n, used = self.n, self.used
        m = len(free)
        total = pre[m]

        if self.face_open[f] == 1:
            x = self.face_const[f] - self.face_sum[f]
            if not 1 <= x <= n or used >> x & 1:
                return []
            options = [x]
        else:
            options = free

        blocked = self.forbidden(v, pool)
        result = []
        for x in options:
            if blocked >> x & 1:
                continue
            for g in self.vertex_faces[v]:
                s = self.face_sum[g] + x
                r = self.face_open[g] - 1
                const = self.face_const[g]
                if r == 0:
                    if s != const:
                        break
                    continue
                # cheapest and dearest completion by r unused labels other than x
                low = pre[r + 1] - x if x <= free[r - 1] else pre[r]
                high = total - pre[m - r - 1] - x if x >= free[m - r] else total - pre[m - r]
                if s + low > const or s + high < const:
                    break
            else:
                result.append(x)
        return result

    # -- traversal -----------------------------------------------------------

    def _record(self) -> None:
        self.count += 1
        labels = tuple(self.labels)
        if self.sink is not None:
            self.sink(labels)
        if self.collect:
            self.solutions.append(labels)

    def descend(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise _BudgetExhausted()
        pool = self.pool()
        choice = self.choose(pool)
        if choice is None:
            self._record()
            return
        if choice is _DEAD:
            return
        v, f = choice
        for x in self.candidates(v, f, pool):
            self.assign(v, x)
            self.descend()
            self.unassign(v, x)

    def children(self, prefix: Assignment) -> Optional[List[Assignment]]:
        """One level of expansion below prefix; None when prefix is a solution."""
        self.nodes += 1
        pool = self.pool()
        choice = self.choose(pool)
        if choice is None:
            return None
        if choice is _DEAD:
            return []
        v, f = choice
        return [prefix + ((v, x),) for x in self.candidates(v, f, pool)]


def _run_subtree(graph: FullereneGraph, pair: MagicPair, prefix: Assignment,
                 node_budget: int, collect: bool,
                 sink: Optional[Sink] = None) -> Tuple[int, int, bool, List[Configuration]]:
    searcher = _Searcher(graph, pair, node_budget, collect, sink)
    searcher.replay(prefix)
    partial = False
    try:
        searcher.descend()
    except _BudgetExhausted:
        partial = True
    return searcher.count, searcher.nodes, partial, searcher.solutions


def _split(graph: FullereneGraph, pair: MagicPair,
           target: int) -> Tuple[List[Assignment], int, List[Configuration]]:
    """
    Expands the tree breadth-first until the frontier holds at least `target`
    subtrees. Solutions met during expansion are returned separately.
    """
    frontier: List[Assignment] = [()]
    finished: List[Configuration] = []
    nodes = 0
    depth = 0
    while frontier and len(frontier) < target and depth < MAX_SPLIT_DEPTH:
        expanded: List[Assignment] = []
        for prefix in frontier:
            searcher = _Searcher(graph, pair, DEFAULT_NODE_BUDGET, collect=False)
            searcher.replay(prefix)
            kids = searcher.children(prefix)
            nodes += searcher.nodes
            if kids is None:
                finished.append(tuple(searcher.labels))
            else:
                expanded.extend(kids)
        frontier = expanded
        depth += 1
    return frontier, nodes, finished


# ============================================================================
# MAIN FUNCTIONS
# ============================================================================

def _check_searchable(graph: FullereneGraph, pair: MagicPair) -> None:
    if graph.n > MAX_VERTICES:
        raise InvalidOrderError(f"n={graph.n} exceeds the search limit of {MAX_VERTICES} vertices")
    check_relation(graph.n, pair)


def enumerate_configurations(
    graph: FullereneGraph,
    pair: MagicPair,
    mode: SearchMode = SearchMode.COUNT,
    *,
    sink: Optional[Sink] = None,
    store: bool = False,
    sorted_output: bool = False,
    workers: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> SolutionSet:
    """
    Counts (and in stream mode emits) every magical configuration of graph with
    constants pair.

    Unsorted streams reach the sink as they are found: in-process from the
    search itself, and with workers one finished subtree at a time in
    submission order. Only sorted output is held back until the search ends.

    Args:
        mode: COUNT returns only the number; STREAM hands each solution to sink
        store: keep the solutions on the returned SolutionSet
        sorted_output: emit/store in lexicographic label order
        workers: process count; 1 runs in-process
        node_budget: visited-node cap; exceeding it sets partial=True

    Raises:
        InfeasiblePairError: pair violates the fundamental relation
        UsageError: workers or node_budget below 1
    """
    _check_searchable(graph, pair)
    if workers < 1:
        raise UsageError(f"workers must be positive, got {workers}")
    if node_budget < 1:
        raise UsageError(f"node budget must be positive, got {node_budget}")
    streaming = mode is SearchMode.STREAM and sink is not None
    live_sink = sink if streaming and not sorted_output else None
    keep = store or (streaming and sorted_output)
    started = time.time()

    if workers == 1:
        count, nodes, partial, solutions = _run_subtree(graph, pair, (), node_budget, keep, live_sink)
        tasks = 1
    else:
        frontier, nodes, finished = _split(graph, pair, TASKS_PER_WORKER * workers)
        count = len(finished)
        partial = False
        tasks = len(frontier)
        solutions: List[Configuration] = []

        def drain(batch: List[Configuration]) -> None:
            if live_sink is not None:
                for labels in batch:
                    live_sink(labels)
            if keep:
                solutions.extend(batch)

        drain(finished)
        remaining = max(node_budget - nodes, 0)
        ship = keep or live_sink is not None
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = executor.map(
                _run_subtree,
                [graph] * tasks, [pair] * tasks, frontier,
                [remaining] * tasks, [ship] * tasks,
            )
            for sub_count, sub_nodes, sub_partial, sub_solutions in results:
                count += sub_count
                nodes += sub_nodes
                partial = partial or sub_partial
                drain(sub_solutions)
        partial = partial or nodes > node_budget

    if sorted_output:
        solutions.sort()
        if streaming:
            for labels in solutions:
                sink(labels)

    duration = time.time() - started
    logger.info(
        f"[SEARCH] {graph.graph_id} {pair}: count={count} nodes={nodes} tasks={tasks} "
        f"workers={workers} partial={partial} | Duration: {duration:.2f}s")
    return SolutionSet(
        graph_id=graph.graph_id,
        pair=pair,
        count=count,
        solutions=tuple(solutions) if store else None,
        partial=partial,
        nodes=nodes,
        tasks=tasks,
    )


def count_all(graph: FullereneGraph, workers: int = 1,
              node_budget: int = DEFAULT_NODE_BUDGET) -> CountTable:
    """Counts every feasible pair; rows sorted by ascending S_h."""
    report = feasible_pairs(graph)
    rows = []
    for pair in report.pairs:
        result = enumerate_configurations(graph, pair, workers=workers, node_budget=node_budget)
        twin = complement_pair(graph.n, pair)
        rows.append(CountRow(
            sp=pair.sp, sh=pair.sh, count=result.count, partial=result.partial,
            nodes=result.nodes, complement_sp=twin.sp, complement_sh=twin.sh,
        ))
    rows.sort(key=lambda row: row.sh)
    return CountTable(
        graph_id=graph.graph_id,
        n=graph.n,
        rows=rows,
        partial=any(row.partial for row in rows),
        reason=report.reason,
    )


# ============================================================================
# STREAM FILES
# ============================================================================

def format_configuration(labels: Iterable[int]) -> str:
    return ",".join(str(x) for x in labels)


def write_solutions(path: str | Path, solutions: Iterable[Configuration]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for labels in solutions:
            fh.write(format_configuration(labels) + "\n")


def read_solutions(path: str | Path, n: Optional[int] = None) -> List[Configuration]:
    """Reads a stream file; blank lines are skipped, every row must have n labels."""
    solutions = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                labels = tuple(int(tok) for tok in line.split(","))
            except ValueError as e:
                raise UsageError(f"{path}:{lineno}: not a comma-separated label list") from e
            if n is not None and len(labels) != n:
                raise InvalidPermutationError(f"{path}:{lineno}: {len(labels)} labels, expected {n}")
            solutions.append(labels)
    return solutions
