"""
Feasibility of magic constants.

Summing every face of a magical configuration counts each label three times,
which gives the fundamental relation

    24 * S_p + (n - 20) * S_h = 3 * n * (n + 1)

Everything here is a necessary condition derived from it: the mod 8
obstruction, residue classes of S_h, and rearrangement bounds on both sums.
An empty candidate list means "excluded"; a non-empty one only means "not
excluded" until the search decides.
"""
import logging
from math import gcd
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, PositiveInt

from magic.errors import InfeasiblePairError, InvalidOrderError, NoHexagonsError, UsageError
from magic.graph import FullereneGraph, incidence_profile

logger = logging.getLogger(__name__)

PENTAGON_WEIGHT = 24
MIN_ORDER = 20
NO_FULLERENE_ORDER = 22
MOD8_REASON = "n ≡ 4 (mod 8): relation impossible modulo 8"

Relation = Tuple[int, int, int]


class MagicPair(BaseModel):
    """Candidate magic constants (S_p, S_h)."""
    model_config = ConfigDict(frozen=True)

    sp: PositiveInt
    sh: PositiveInt

    def __str__(self) -> str:
        return f"({self.sp},{self.sh})"


class Congruence(BaseModel):
    """S_h ≡ residue (mod modulus)."""
    model_config = ConfigDict(frozen=True)

    modulus: int
    residue: int
    source: str

    def holds(self, value: int) -> bool:
        return value % self.modulus == self.residue

    def __str__(self) -> str:
        return f"S_h ≡ {self.residue} (mod {self.modulus})"


class FeasibilityReport(BaseModel):
    n: int
    relation: Relation
    mod8_ok: bool
    residue_note: List[Congruence]
    hex_bounds: Optional[Tuple[int, int]] = None
    pent_bounds: Optional[Tuple[int, int]] = None
    pairs: List[MagicPair]
    residue_filtered: int = 0
    bound_filtered: int = 0
    reason: Optional[str] = None


class OrderScan(BaseModel):
    """Necessary conditions for one vertex count; excluded means no magical configuration."""
    n: int
    relation: Optional[str]
    mod8_ok: bool
    residues: List[str]
    excluded: bool
    reason: Optional[str] = None


# ============================================================================
# RELATION AND RESIDUES
# ============================================================================

def _check_order(n: int) -> None:
    if n % 2 or n < MIN_ORDER or n == NO_FULLERENE_ORDER:
        raise InvalidOrderError(f"n={n} is not an even integer >= {MIN_ORDER} other than {NO_FULLERENE_ORDER}")


def magic_relation(n: int) -> Relation:
    """Coefficients (a, b, c) of a * S_p + b * S_h = c."""
    _check_order(n)
    return PENTAGON_WEIGHT, n - 20, 3 * n * (n + 1)


def describe_relation(n: int) -> str:
    """The relation divided through by its content, e.g. '6·S_p + S_h = 450'."""
    a, b, c = magic_relation(n)
    g = gcd(a, b)
    if c % g:
        g = 1
    a, b, c = a // g, b // g, c // g
    if b == 0:
        return f"{a}·S_p = {c}"
    hex_term = "S_h" if b == 1 else f"{b}·S_h"
    return f"{a}·S_p + {hex_term} = {c}"


def mod8_feasible(n: int) -> bool:
    """False exactly when n ≡ 4 (mod 8): then the left side is 0 mod 8 and the right 4 mod 8."""
    _check_order(n)
    return n % 8 != 4


def residue_constraints(n: int) -> List[Congruence]:
    _check_order(n)
    constraints = []
    if n % 8 == 0:
        constraints.append(Congruence(modulus=2, residue=0, source="n ≡ 0 (mod 8)"))
    elif n % 8 in (2, 6):
        constraints.append(Congruence(modulus=4, residue=3, source="n ≡ ±2 (mod 8)"))
    if n % 3 != 2:
        constraints.append(Congruence(modulus=3, residue=0, source="n ≢ 2 (mod 3)"))
    return constraints


def complement_pair(n: int, pair: MagicPair) -> MagicPair:
    """Constants of the configuration relabeled by x -> n + 1 - x."""
    return MagicPair(sp=5 * n + 5 - pair.sp, sh=6 * n + 6 - pair.sh)


def check_relation(n: int, pair: MagicPair) -> None:
    a, b, c = magic_relation(n)
    lhs = a * pair.sp + b * pair.sh
    if lhs != c:
        raise InfeasiblePairError(
            f"pair {pair} violates {describe_relation(n)} for n={n} "
            f"({a}·{pair.sp} + {b}·{pair.sh} = {lhs} ≠ {c})")


# ============================================================================
# BOUNDS
# ============================================================================

def _rearrangement_bounds(weights: Tuple[int, ...]) -> Tuple[int, int]:
    """Min and max of sum(w_v * f(v)) over bijections f onto 1..n."""
    ascending = sorted(weights)
    labels = range(1, len(weights) + 1)
    low = sum(w * x for w, x in zip(reversed(ascending), labels))
    high = sum(w * x for w, x in zip(ascending, labels))
    return low, high


def _inward(low: int, high: int, faces: int) -> Tuple[int, int]:
    return -(-low // faces), high // faces


def hexagon_sum_bounds(graph: FullereneGraph) -> Tuple[int, int]:
    """
    Bounds on S_h from H * S_h = sum(m_v * f(v)), where m_v counts the hexagons
    through v. Largest multiplicities take the smallest labels for the minimum.
    """
    hexagons = len(graph.hexagons)
    if hexagons == 0:
        raise NoHexagonsError(f"{graph.graph_id} has no hexagons; S_h is unconstrained")
    low, high = _rearrangement_bounds(incidence_profile(graph).hex_multiplicity)
    return _inward(low, high, hexagons)


def pentagon_sum_bounds(graph: FullereneGraph) -> Tuple[int, int]:
    low, high = _rearrangement_bounds(incidence_profile(graph).pent_multiplicity)
    return _inward(low, high, len(graph.pentagons))


# ============================================================================
# MAIN FUNCTION
# ============================================================================

def feasible_pairs(graph: FullereneGraph) -> FeasibilityReport:
    """
    All (S_p, S_h) passing the relation, residue filters and both bound
    filters, by ascending S_h.
    """
    n = graph.n
    relation = magic_relation(n)
    a, b, c = relation
    ok = mod8_feasible(n)
    residues = residue_constraints(n) if ok else []
    report = FeasibilityReport(n=n, relation=relation, mod8_ok=ok, residue_note=residues, pairs=[])

    if b == 0:
        report.pent_bounds = pentagon_sum_bounds(graph)
        report.reason = ("relation has no integer solution" if c % a
                         else "no hexagons; S_h is unconstrained")
        logger.info(f"[FEASIBLE] {graph.graph_id}: {report.reason}")
        return report

    if not ok:
        report.reason = MOD8_REASON
        logger.info(f"[FEASIBLE] {graph.graph_id}: excluded by mod 8 obstruction")
        return report

    hex_lo, hex_hi = hexagon_sum_bounds(graph)
    pent_lo, pent_hi = pentagon_sum_bounds(graph)
    report.hex_bounds = (hex_lo, hex_hi)
    report.pent_bounds = (pent_lo, pent_hi)

    # integral solutions with both sums positive
    candidates = []
    for sh in range(1, c // b + 1):
        rest = c - b * sh
        if rest > 0 and rest % a == 0:
            candidates.append((rest // a, sh))

    after_residue = [(sp, sh) for sp, sh in candidates
                     if all(r.holds(sh) for r in residues)]
    report.residue_filtered = len(candidates) - len(after_residue)

    pairs = [MagicPair(sp=sp, sh=sh) for sp, sh in after_residue
             if hex_lo <= sh <= hex_hi and pent_lo <= sp <= pent_hi]
    report.bound_filtered = len(after_residue) - len(pairs)
    report.pairs = pairs
    if not pairs:
        report.reason = "no pair survives the residue and bound filters"

    logger.info(
        f"[FEASIBLE] {graph.graph_id}: {len(candidates)} integral candidates, "
        f"{report.residue_filtered} removed by residues, {report.bound_filtered} by bounds, "
        f"{len(pairs)} remain")
    return report


# ============================================================================
# ORDER SCAN
# ============================================================================

def scan_orders(start: int, stop: int) -> List[OrderScan]:
    """
    Necessary conditions for every even n in [start, stop], no graph needed.

    A row marked excluded is settled (no fullerene, mod 8 obstruction, or no
    integer S_p); any other row is open until a concrete graph is searched.
    """
    if start > stop:
        raise UsageError(f"empty range: --from {start} is above --to {stop}")
    first = max(start, MIN_ORDER)
    first += first % 2
    rows = []
    for n in range(first, stop + 1, 2):
        if n == NO_FULLERENE_ORDER:
            rows.append(OrderScan(n=n, relation=None, mod8_ok=True, residues=[], excluded=True,
                                  reason=f"no fullerene has {n} vertices"))
            continue
        a, b, c = magic_relation(n)
        ok = mod8_feasible(n)
        row = OrderScan(n=n, relation=describe_relation(n), mod8_ok=ok,
                        residues=[str(r) for r in residue_constraints(n)] if ok else [],
                        excluded=not ok, reason=None if ok else MOD8_REASON)
        if b == 0 and c % a:
            row.excluded = True
            row.reason = "relation has no integer solution"
        rows.append(row)
    logger.info(f"[SCAN] n={first}..{stop}: {sum(r.excluded for r in rows)} of {len(rows)} orders excluded")
    return rows
