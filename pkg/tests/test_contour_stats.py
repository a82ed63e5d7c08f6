import math
from fractions import Fraction

import numpy as np
import pytest
from oracles import brute_W

from hardrods.coarse import extract_contours
from hardrods.contour_stats import (
    C0,
    collection_diameter,
    domino_factor,
    domino_numerator,
    domino_numerator_dp,
    domino_numerator_enum,
    epsilons,
    interaction_W,
    ledger_partition,
    peierls_ledger,
    polymer_bound,
    polymer_chain_sum,
    ratio_check,
    smoothing_block,
    tile_factor,
    zeta,
    zeta0,
)
from hardrods.errors import NoBadStructure
from hardrods.exact import restricted_partition_factorized, tile_partition
from hardrods.lattice import H, V, tile_side


def sea(q=H, shape=(32, 32)):
    return np.full(shape, q, dtype=np.int8)


# --- single tiles and dominoes ---------------------------------------------


def test_tile_factor():
    assert tile_factor(H, 6, Fraction(1, 10)) == 1
    assert tile_factor(V, 6, Fraction(1, 10)) == 1
    assert tile_factor(0, 6, Fraction(1, 10)) == Fraction(-1000, 2197)
    assert tile_factor(0, 6, 0) == -1
    for k in (2, 5, 8):
        z = Fraction(1, 7)
        assert tile_factor(0, k, z) * tile_partition(k)(z) == -1


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("axis", ["x", "y"])
@pytest.mark.parametrize("first", [H, V])
def test_domino_closed_form_two_routes(k, axis, first):
    closed = domino_numerator(k, axis, first)
    assert closed == domino_numerator_enum(k, axis, first)
    assert closed == domino_numerator_dp(k, axis, first)


def test_domino_limits_and_monotone():
    for k in (4, 6):
        assert domino_factor(k, 0).value == 1
        vals = [domino_factor(k, Fraction(j, 100 * k)).value for j in range(0, 30, 3)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("k", [4, 6, 8])
@pytest.mark.parametrize("zk", [Fraction(1, 20), Fraction(1, 10)])
def test_domino_bound(k, zk):
    r = domino_factor(k, zk / k)
    assert r.untypical_ok
    assert r.measured_C < 10
    corr = math.exp(r.measured_C * float(r.z) * k * k * float(zk))
    assert float(r.value) <= r.target_factor * corr * (1 + 1e-12)
    assert float(r.value) <= float(r.half_tile_bound) * corr * (1 + 1e-12) or r.measured_C == 0


def test_domino_small_z_k6():
    r = domino_factor(6, Fraction(1, 100))
    assert float(r.value) <= 2 * math.exp(-0.01 * 9 / 2) * 1.01


# --- Peierls ledger --------------------------------------------------------


def test_ledger_all_zero_contour():
    blk = smoothing_block((2, 2), 2, 1)
    part = ledger_partition(blk, {t: 0 for t in blk})
    assert part.n0 == len(blk) and part.nd == 0


def test_ledger_no_structure():
    blk = smoothing_block((2, 2), 1, 1)
    with pytest.raises(NoBadStructure):
        peierls_ledger(blk, {t: H for t in blk}, H, 8, Fraction(1, 16))


def test_ledger_bound_dominates_exact_sum():
    # toy size: ell = 1 so the true sum over rods on Gamma is enumerable
    k = 2
    blk = smoothing_block((2, 2), 1, 1)
    for witness in (0, V):
        spins = {t: H for t in blk}
        spins[(9, 9)] = witness
        c = peierls_ledger(blk, spins, H, k, Fraction(1, 10), exact=True)
        assert c.extras["exact_le_bound"]


def test_ledger_structure_formula():
    # with only a 0-single the bound is Z^+(rest) / Z^q(Gamma)
    k, z = 8, Fraction(1, 16)
    blk = smoothing_block((2, 2), 1, 1)
    spins = {t: H for t in blk}
    spins[(9, 9)] = 0
    c = peierls_ledger(blk, spins, H, k, z)
    plus = sorted(set(blk) - {(9, 9)})
    expect = math.log(restricted_partition_factorized(plus, H, k)(z)) - \
        math.log(restricted_partition_factorized(blk, H, k)(z))
    assert c.log_value == pytest.approx(expect)
    # e^{-z ell^2 (1 - C zk) N0} with the reported C
    ell = tile_side(k)
    C = c.extras["measured_C"]
    assert c.log_value == pytest.approx(-float(z) * ell ** 2 * (1 - C * float(z) * k))
    assert c.log_value < 0


def test_ledger_gate_k40():
    from hardrods.checks import minimal_contours

    for name, blk, spins in minimal_contours(H):
        c = peierls_ledger(blk, spins, H, 40, Fraction(1, 400))
        assert c.passed, name
        assert c.log_target == pytest.approx(-2 * C0 * 4 * len(blk))


# --- ratio -----------------------------------------------------------------


def test_ratio_square_is_one():
    c = ratio_check(smoothing_block((0, 0), 2, 2), 4, Fraction(1, 8))
    assert c.extras["exactly_one"] and c.extras["square"]


def test_ratio_zero_activity():
    c = ratio_check(smoothing_block((0, 0), 2, 1), 2, 0)
    assert c.extras["exactly_one"]


def test_ratio_rectangle_bounded():
    c = ratio_check(smoothing_block((0, 0), 2, 1), 2, Fraction(1, 20))
    assert not c.extras["exactly_one"]
    assert c.passed and c.extras["measured_C"] < 10


# --- polymer chain ---------------------------------------------------------


ASYMPTOTIC = (1e-22, 10**14)  # zk = 1e-8, zk^2 = 1e6


def test_polymer_single_tile_and_closed_form():
    z, k = ASYMPTOTIC
    c = polymer_bound(1, z, k)
    assert c.passed
    eps1 = epsilons(z, k)["eps1"]
    assert c.log_target == pytest.approx(-C0 / 6 * z * k * k)
    assert eps1 == pytest.approx(math.exp(c.log_target))


def test_polymer_chain_matches_direct_sum():
    e1t, b = 0.01, 0.3
    for n in range(1, 8):
        direct = polymer_chain_sum(n, e1t, b)
        assert direct == pytest.approx((e1t * (1 + b) + b) ** n - b ** n)


def test_polymer_zero_activity():
    assert polymer_bound(3, 0, 10).passed


def test_polymer_geometric_in_size():
    vals = [polymer_bound(n, *ASYMPTOTIC) for n in range(1, 11)]
    eps = vals[0].constants["eps"]
    ratios = [math.exp(b.log_value - a.log_value) for a, b in zip(vals, vals[1:])]
    assert all(c.passed for c in vals)
    assert max(ratios[1:]) <= eps


def test_polymer_fails_at_desk_scale():
    # zk = 0.05, k = 10: the chain grows with |X'|, so the certificate fails
    vals = [polymer_bound(n, 0.005, 10) for n in range(1, 11)]
    assert not any(c.passed for c in vals)
    assert all(b.log_value > a.log_value for a, b in zip(vals, vals[1:]))


# --- activities ------------------------------------------------------------


def island(q=H, val=V, box=(14, 17, 14, 16)):
    s = sea(q)
    x0, x1, y0, y1 = box
    s[x0:x1, y0:y1] = val
    return s


def test_zeta0_empty_zero_contour():
    k, z = 2, Fraction(1, 10)
    s = sea()
    s[12:16, 12:16] = 0
    c = extract_contours(s, [], H, k)[0]
    r = zeta0(c, k, z)
    zg = restricted_partition_factorized(c.support, H, k)(z)
    assert c.holes == 0 and r.interior_ratios == []
    assert r.value == Fraction((-1) ** 16) / zg


def test_zeta0_monotone_with_hole():
    k, z = 2, Fraction(1, 10)
    s = sea(shape=(40, 40))
    s[8:32, 8:32] = V
    s[8:10, 8:32] = 0
    from hardrods.lattice import Rod

    rods = [Rod(H, 12, 20)]
    s[12, 20] = H
    cs = extract_contours(s, rods, H, k)
    assert len(cs) == 1 and cs[0].holes == 1
    r = zeta0(cs[0], k, z)
    assert r.monotone


def test_zeta_order_one_sign_and_small_z():
    from hardrods.lattice import Rod

    k = 4
    c = extract_contours(island(), [], H, k)[0]
    r = zeta(c, k, Fraction(1, 40), m_max=2)
    assert r.order1_nonpositive and r.exponent[1] == 0  # no frozen rods: f needs two rods
    s = sea()
    s[12:20, 12:20] = 0
    s[8, 15] = H
    cf = extract_contours(s, [Rod(H, 16, 30)], H, k)[0]
    rf = zeta(cf, k, Fraction(1, 40), m_max=2)
    assert rf.order1_nonpositive and rf.exponent[1] > 0
    tiny = zeta(c, k, Fraction(1, 10**9), m_max=2)
    assert tiny.value == pytest.approx(float(tiny.zeta0.value), rel=1e-6)
    assert math.isfinite(r.measured_C)


def test_interaction_far_contours_vanish():
    k = 4
    s = sea(shape=(48, 48))
    s[9, 9] = 0
    s[37, 37] = 0
    cs = extract_contours(s, [], H, k)
    assert len(cs) == 2
    res = interaction_W(cs, k, Fraction(1, 40), m_max=3)
    assert all(w == 0 for w in res.W)


def test_interaction_matches_definition():
    k, m_max = 4, 4
    ell = tile_side(k)
    s = sea()
    s[13, 13] = 0
    c = extract_contours(s, [], H, k)[0]
    xs = [t[0] for t in c.support]
    ys = [t[1] for t in c.support]
    rows = range(min(ys) * ell, (max(ys) + 1) * ell)
    x_range = ((min(xs) - 3) * ell, (max(xs) + 4) * ell)
    res = interaction_W([c], k, Fraction(1, 40), m_max)
    W, F = brute_W(c, k, rows, x_range, m_max)
    assert res.W == W
    assert {y: v for y, v in res.F.items() if any(v)} == {y: v for y, v in F.items() if any(v)}
    assert any(res.W)
    assert res.W_value() == pytest.approx(-sum(res.F_value(y) for y in res.F))
    for Y in res.F:
        assert collection_diameter(Y) >= 2
