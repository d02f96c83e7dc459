import pytest

from magic.constants import (
    MagicPair,
    check_relation,
    complement_pair,
    describe_relation,
    feasible_pairs,
    hexagon_sum_bounds,
    magic_relation,
    mod8_feasible,
    pentagon_sum_bounds,
    residue_constraints,
    scan_orders,
)
from magic.errors import InfeasiblePairError, InvalidOrderError, NoHexagonsError, UsageError


def test_relation_coefficients():
    assert magic_relation(24) == (24, 4, 1800)
    assert magic_relation(26) == (24, 6, 2106)
    assert magic_relation(20) == (24, 0, 1260)


@pytest.mark.parametrize("n, text", [
    (24, "6·S_p + S_h = 450"),
    (26, "4·S_p + S_h = 351"),
    (20, "24·S_p = 1260"),
])
def test_describe_relation(n, text):
    assert describe_relation(n) == text


@pytest.mark.parametrize("n", [19, 21, 22, 18, 0])
def test_invalid_orders(n):
    with pytest.raises(InvalidOrderError):
        magic_relation(n)


@pytest.mark.parametrize("n, ok", [(20, False), (24, True), (26, True), (28, False), (36, False), (60, False), (30, True)])
def test_mod8_obstruction(n, ok):
    assert mod8_feasible(n) is ok


def test_residue_constraints():
    assert [(c.modulus, c.residue) for c in residue_constraints(24)] == [(2, 0), (3, 0)]
    assert [(c.modulus, c.residue) for c in residue_constraints(26)] == [(4, 3)]
    assert [(c.modulus, c.residue) for c in residue_constraints(30)] == [(4, 3), (3, 0)]


def test_complement_pair_swaps_extremes():
    assert complement_pair(24, MagicPair(sp=57, sh=108)) == MagicPair(sp=68, sh=42)
    assert complement_pair(26, MagicPair(sp=73, sh=59)) == MagicPair(sp=62, sh=103)


def test_complement_pair_is_an_involution():
    pair = MagicPair(sp=60, sh=90)
    assert complement_pair(24, complement_pair(24, pair)) == pair


def test_check_relation_accepts_and_rejects():
    check_relation(24, MagicPair(sp=57, sh=108))
    with pytest.raises(InfeasiblePairError, match="6·S_p \\+ S_h = 450"):
        check_relation(24, MagicPair(sp=57, sh=107))


def test_magic_pair_requires_positive_sums():
    with pytest.raises(ValueError):
        MagicPair(sp=0, sh=10)


def test_rearrangement_bounds(c24, c26):
    assert hexagon_sum_bounds(c24) == (39, 111)
    assert pentagon_sum_bounds(c24) == (57, 68)
    assert hexagon_sum_bounds(c26) == (57, 105)
    assert pentagon_sum_bounds(c26) == (62, 73)


def test_no_hexagon_bound_on_dodecahedron(c20):
    with pytest.raises(NoHexagonsError):
        hexagon_sum_bounds(c20)


def test_c24_feasible_pairs(c24):
    report = feasible_pairs(c24)
    pairs = [(p.sp, p.sh) for p in report.pairs]
    assert len(pairs) == 12
    assert pairs[0] == (68, 42)
    assert pairs[-1] == (57, 108)
    assert all(sh % 6 == 0 for _, sh in pairs)
    assert report.reason is None


def test_c26_feasible_pairs(c26):
    pairs = [(p.sp, p.sh) for p in feasible_pairs(c26).pairs]
    assert len(pairs) == 12
    assert (73, 59) in pairs and (62, 103) in pairs
    assert all(sh % 4 == 3 for _, sh in pairs)


def test_feasible_pairs_are_closed_under_complement(c24, c26):
    for graph in (c24, c26):
        pairs = set(feasible_pairs(graph).pairs)
        assert {complement_pair(graph.n, p) for p in pairs} == pairs


def test_dodecahedron_has_no_pairs(c20):
    report = feasible_pairs(c20)
    assert report.pairs == []
    assert report.reason == "relation has no integer solution"


def _admissible_residues(n):
    """S_h residues mod 24 for which some S_p solves the relation modulo 24."""
    a, b, c = magic_relation(n)
    return {r for r in range(24) if any((a * p + b * r - c) % 24 == 0 for p in range(24))}


def test_residue_constraints_at_32():
    # 32 ≡ 2 (mod 3), so only the parity condition applies
    assert [(c.modulus, c.residue) for c in residue_constraints(32)] == [(2, 0)]
    assert 24 * 131 + 12 * 2 == 3 * 32 * 33


@pytest.mark.parametrize("n", [n for n in range(20, 201, 2) if n % 8 != 4 and n != 22])
def test_residue_constraints_match_a_brute_force_scan(n):
    constraints = residue_constraints(n)
    predicted = {r for r in range(24) if all(c.holds(r) for c in constraints)}
    assert predicted == _admissible_residues(n)


def test_scan_orders_marks_obstructed_orders():
    rows = {row.n: row for row in scan_orders(20, 60)}
    assert sorted(rows) == list(range(20, 61, 2))
    for n in (28, 36, 44, 52, 60):
        assert rows[n].excluded and not rows[n].mod8_ok
        assert rows[n].residues == []
    assert rows[22].excluded and rows[22].relation is None
    assert rows[20].excluded and rows[20].reason == "relation has no integer solution"
    assert not rows[24].excluded
    assert rows[24].relation == "6·S_p + S_h = 450"
    assert rows[24].residues == ["S_h ≡ 0 (mod 2)", "S_h ≡ 0 (mod 3)"]
    assert rows[26].residues == ["S_h ≡ 3 (mod 4)"]


def test_scan_orders_rounds_odd_start_up():
    assert [row.n for row in scan_orders(23, 27)] == [24, 26]


def test_scan_orders_rejects_empty_range():
    with pytest.raises(UsageError):
        scan_orders(60, 20)
