from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import box_rods_contained, brute_partition

from hardrods.errors import BudgetExceeded, DivisibilityError
from hardrods.exact import (
    RegionSpec,
    allowed_rods,
    band_spec,
    box_spec,
    conditioned_partition,
    frozen_partition,
    line_partition,
    partition_exact,
    restricted_partition_factorized,
    restricted_spec,
    tile_partition,
    transfer_1d,
)
from hardrods.lattice import H, V, ModelParams, Rod, sites_of_tiles, tile_side
from hardrods.polyz import PolyZ


def test_two_by_two_box():
    assert partition_exact(box_spec(2), 2) == [1, 4, 2]


def test_empty_region_is_one():
    assert partition_exact(RegionSpec(frozenset()), 3) == [1]
    assert restricted_partition_factorized([], H, 4) == [1]


@pytest.mark.parametrize("w,h,k", [(3, 3, 2), (4, 3, 2), (4, 4, 3), (5, 2, 2), (3, 5, 3)])
def test_box_matches_subset_scan(w, h, k):
    expected = brute_partition(box_rods_contained(w, h, k), k)
    assert partition_exact(box_spec(w, h), k) == expected
    assert partition_exact(box_spec(w, h), k, order="column") == expected


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 7, 8, 9, 10])
def test_single_tile_closed_form(k):
    ell = tile_side(k)
    expect = PolyZ((1, ell)) ** ell
    assert tile_partition(k) == expect
    assert restricted_partition_factorized([(0, 0)], H, k) == expect
    assert partition_exact(restricted_spec([(0, 0)], V, k), k, order="column") == expect


def test_transfer_examples():
    assert transfer_1d(3, 2) == [1, 2]
    assert transfer_1d(5, 5) == [1, 1]
    assert transfer_1d(0, 3) == [1]


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_transfer_matches_subset_scan(k):
    for L in range(0, 13):
        rods = [Rod(H, x, 0) for x in range((k - 1) // 2, L - k // 2)]
        assert transfer_1d(L, k) == brute_partition(rods, k), L


def test_line_partition_consecutive_run():
    for k in (2, 3, 4):
        for c in range(0, 9):
            assert line_partition(list(range(10, 10 + c)), k) == transfer_1d(c + k - 1, k)


def test_two_tiles_on_a_row():
    k = 4
    ell = tile_side(k)
    got = restricted_partition_factorized([(0, 0), (1, 0)], H, k)
    assert got == transfer_1d(2 * ell + k - 1, k) ** ell
    assert got == partition_exact(restricted_spec([(0, 0), (1, 0)], H, k), k)


tile_sets = st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=5)


@settings(max_examples=60, deadline=None)
@given(tile_sets, st.integers(2, 6), st.sampled_from([H, V]))
def test_factorization_matches_enumeration(tiles, k, q):
    order = "row" if q == H else "column"
    assert restricted_partition_factorized(tiles, q, k) == \
        partition_exact(restricted_spec(tiles, q, k), k, order)


def test_conditioned_tiny_box_is_single_orientation():
    # every tile of a 4x4-tile box lies in the band
    k = 4
    p = ModelParams(k=k, L=8, boundary="plus")
    tiles = {(i, j) for i in range(4) for j in range(4)}
    assert conditioned_partition(p) == restricted_partition_factorized(tiles, H, k)


def test_conditioned_rotation_symmetry():
    p = ModelParams(k=2, L=12, boundary="plus")
    assert conditioned_partition(p, H) == conditioned_partition(p, V)


def test_conditioned_divisibility_guard():
    with pytest.raises(DivisibilityError):
        conditioned_partition(ModelParams(k=2, L=6, boundary="open"), H)


def test_conditioned_matches_subset_scan_small():
    # 12x12 box at k=2: band covers everything except the central 2x2 tiles
    p = ModelParams(k=2, L=12, boundary="plus")
    spec = band_spec({(i, j) for i in range(12) for j in range(12)}, H, 2)
    rods = allowed_rods(spec, 2)
    assert sum(1 for r in rods if r.orientation == V) == 4
    assert conditioned_partition(p) == partition_exact(spec, 2)


def test_frozen_examples():
    spec = band_spec({(i, j) for i in range(8) for j in range(8)}, H, 2)
    assert frozen_partition(spec, (), 2) == partition_exact(spec, 2)
    everything = sites_of_tiles(spec.tiles, 1)
    assert frozen_partition(spec, everything, 2) == [1]
    row = RegionSpec(frozenset((x, 0) for x in range(9)), "q-only", H, contained=True)
    # blocking site 4 leaves centers 0..2 and 5..7 (rods cover x, x+1)
    got = frozen_partition(row, {(4, 0)}, 2)
    assert got == transfer_1d(4, 2) * transfer_1d(4, 2)


def test_frozen_monotone():
    spec = band_spec({(i, j) for i in range(8) for j in range(8)}, H, 2)
    free = partition_exact(spec, 2)
    for blocked in ({(3, 3)}, {(3, 3), (4, 4)}, {(x, 3) for x in range(8)}):
        fz = frozen_partition(spec, blocked, 2)
        assert all(fz[n] <= free[n] for n in range(len(free)))


def test_degree_bound():
    for w, k in ((6, 2), (6, 3), (8, 4)):
        z = partition_exact(box_spec(w), k)
        assert z.degree <= w * w // k


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as err:
        partition_exact(box_spec(6), 2, budget=50)
    assert err.value.budget == 50


def test_polyz_arithmetic_and_json():
    p = PolyZ([1, 3, 2])
    assert p * PolyZ([1, 1]) == [1, 4, 5, 2]
    assert p.derivative() == [3, 4]
    assert p(Fraction(1, 2)) == Fraction(3)
    assert p.mean_count(Fraction(1)) == Fraction(7, 6)
    assert PolyZ.from_json(p.to_json()) == p
    assert PolyZ([1, 1]).log_taylor(3) == [0, 1, Fraction(-1, 2), Fraction(1, 3)]
