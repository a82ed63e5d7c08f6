import numpy as np
import pytest

from hardrods.coarse import (
    F_delta,
    a_tiles,
    bad_region,
    bad_squares,
    c_tiles,
    classify_sampling_square,
    contour_violations,
    extract_contours,
    f_delta,
    g_delta,
    in_theta_q,
    smoothed_bad,
    spins_from_config,
)
from hardrods.errors import MixedTile, NonUniformPeel, NotInThetaQ
from hardrods.fixtures import random_rods, random_theta_q
from hardrods.lattice import H, V, Rod, d_connected, overlap, tile_of, tile_side

SHAPE = (32, 32)  # L = 32 ell


def sea(q=H, shape=SHAPE):
    return np.full(shape, q, dtype=np.int8)


def test_spins_from_rods():
    k = 4
    rods = [Rod(H, 0, 0), Rod(H, 5, 0)]
    s = spins_from_config(rods, k, (4, 4))
    assert s[(0, 0)] == 1 and s[(2, 0)] == 1 and s[(1, 1)] == 0
    assert spins_from_config([], k, (4, 4)).spins.sum() == 0
    s = spins_from_config([Rod(V, 3, 3)], k, (4, 4))
    assert s[(1, 1)] == -1 and np.count_nonzero(s.spins) == 1
    with pytest.raises(MixedTile):
        spins_from_config([Rod(H, 0, 0), Rod(V, 1, 1)], 4, (2, 2))


def test_match_neighbor_labels():
    s = spins_from_config([Rod(V, 40, 40)], 4, (32, 32), "match-neighbor", q=H)
    assert in_theta_q(s, H)
    assert s[(20, 20)] == -1  # filled from the vertical rod
    assert s.from_rods.sum() == 1


def test_classify_examples():
    s = np.array([[1, 1], [1, 1]])
    assert classify_sampling_square(s, (0, 0)) == 1
    assert classify_sampling_square(np.array([[1, 1], [1, 0]]), (0, 0)) is None
    assert classify_sampling_square(np.array([[1, -1], [1, 1]]), (0, 0)) is None


def test_uniform_has_no_bad_region():
    s = sea()
    assert not bad_region(s, H).any()
    assert not smoothed_bad(s, H).any()
    assert extract_contours(s, [], H, 4) == []


def test_single_zero_bad_region():
    s = sea()
    s[13, 13] = 0
    b = bad_region(s, H)
    expect = np.zeros(SHAPE, bool)
    expect[12:15, 12:15] = True
    assert (b == expect).all()
    # brute-force scan of all sampling squares
    for x in range(31):
        for y in range(31):
            assert bad_squares(s, H)[x, y] == (x in (12, 13) and y in (12, 13))
    bb = smoothed_bad(s, H)
    assert bb[12:16, 12:16].all() and bb.sum() == 16
    s[12, 12] = 0  # now touches two smoothing rows
    assert smoothed_bad(s, H).sum() == 4 * 16


def test_checkerboard_all_bad():
    s = np.indices((8, 8)).sum(axis=0) % 2 * 2 - 1
    assert smoothed_bad(s).all()


def test_island_contour():
    s = sea()
    s[14:18, 14:18] = V
    cs = extract_contours(s, [], H, 4)
    assert len(cs) == 1
    c = cs[0]
    assert c.m_ext == H and c.holes == 0
    assert contour_violations(cs, s, H) == []


def test_big_island_has_hole():
    s = sea(shape=(48, 48))
    s[12:36, 12:36] = V
    cs = extract_contours(s, [], H, 4)
    assert len(cs) == 1 and cs[0].holes == 1 and cs[0].m_int == (V,)
    assert contour_violations(cs, s, H) == []


def test_two_far_islands():
    s = sea(shape=(48, 48))
    s[9:11, 9:11] = 0
    s[36:38, 36:38] = V
    cs = extract_contours(s, [], H, 4)
    assert len(cs) == 2
    assert not d_connected(cs[0].support, cs[1].support)
    assert not d_connected(cs[0].peel, cs[1].peel)


def test_theta_q_checked():
    s = sea()
    s[1, 1] = V
    with pytest.raises(NotInThetaQ):
        extract_contours(s, [], H, 4)


def test_nonuniform_peel_detected():
    s = sea()
    s[12:20, 12:20] = V
    s[14:18, 14:18] = H  # sits inside the hole of the big contour
    s[16, 16] = 0
    try:
        cs = extract_contours(s, [], H, 4)
    except NonUniformPeel:
        return
    assert contour_violations(cs, s, H) == []


def test_random_fixtures_invariants():
    rng = np.random.default_rng(5)
    for _ in range(60):
        q = H if rng.random() < 0.5 else V
        s = random_theta_q(rng, SHAPE, q)
        cs = extract_contours(s, [], q, 4)
        assert contour_violations(cs, s, q) == []
        for c in cs:
            assert all(s[t] == c.spins[t] for t in c.support)


def test_good_components_do_not_interact():
    rng = np.random.default_rng(11)
    k = 4
    ell = tile_side(k)
    from scipy import ndimage

    for _ in range(10):
        s = random_theta_q(rng, SHAPE, H)
        bb = smoothed_bad(s, H)
        labels, _ = ndimage.label(~bb)
        rods = random_rods(rng, np.where(bb, 0, s), k)
        for i, r in enumerate(rods):
            for t in rods[i + 1:]:
                a, b = tile_of(r.center, ell), tile_of(t.center, ell)
                if labels[a] != labels[b]:
                    assert not overlap(r, t, k)


def test_a_and_c_sets_on_straight_edge():
    s = sea()
    s[12:20, 12:20] = 0
    c = extract_contours(s, [], H, 4)[0]
    xmin = min(t[0] for t in c.support)
    ymid = 15
    left = (xmin - 1, ymid)
    assert left in c.peel
    # q = +: neighbor on the same row, at L1 distance 2 from the support
    assert a_tiles(c, left) == {left, (xmin - 2, ymid)}
    assert c_tiles(c, left) == {(xmin, ymid - 1), (xmin, ymid), (xmin, ymid + 1),
                                (xmin + 1, ymid)}
    top = (15, max(t[1] for t in c.support) + 1)
    assert a_tiles(c, top) == {top}
    s2 = sea(V)
    s2[12:20, 12:20] = 0
    cm = extract_contours(s2, [], V, 4)[0]
    ytop = max(t[1] for t in cm.support)
    assert a_tiles(cm, (15, ytop + 1)) == {(15, ytop + 1), (15, ytop + 2)}


def test_a_sets_disjoint():
    rng = np.random.default_rng(3)
    for _ in range(20):
        s = random_theta_q(rng, SHAPE, H)
        for c in extract_contours(s, [], H, 4):
            seen = set()
            for xi in c.peel:
                a = a_tiles(c, xi)
                assert seen.isdisjoint(a)
                seen |= a


def test_indicators():
    k = 4
    ell = tile_side(k)
    s = sea()
    s[12:20, 12:20] = 0
    xmin = 8  # support = smoothing squares 2..4
    s[xmin, 15] = H
    frozen = [Rod(H, xmin * ell, 15 * ell)]
    c = extract_contours(s, frozen, H, k)[0]
    assert min(t[0] for t in c.support) == xmin and c.rods == tuple(frozen)
    delta = (xmin - 1, 15)
    far = [Rod(H, 2, 60)]
    assert f_delta(delta, far, c, k) == g_delta(delta, far, c, k) == F_delta(delta, far, c, k) == 0
    in_a = Rod(H, delta[0] * ell, 15 * ell)
    in_c = Rod(H, (xmin + 1) * ell, 15 * ell + 1)
    assert f_delta(delta, [in_a, in_c], c, k) == 1
    # a rod in A that hits the frozen rod, nothing of R in C
    hit = Rod(H, delta[0] * ell + 1, 15 * ell)
    assert overlap(hit, frozen[0], k)
    assert f_delta(delta, [hit], c, k) == 0
    assert g_delta(delta, [hit], c, k) == 1
    assert delta in c.ext_peel and F_delta(delta, [hit], c, k) == 1


def test_contour_json_roundtrip_fields():
    s = sea()
    s[14:16, 14:16] = 0
    d = extract_contours(s, [], H, 4)[0].to_dict()
    assert set(d) >= {"support", "spins", "rods", "m_ext", "m_int", "peel"}
