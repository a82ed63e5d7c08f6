"""Contour activities and certified bounds on them.

Exact quantities are computed with integer polynomials in z and evaluated at
rational z; logarithms are taken of the exact rationals so that tiny values
do not underflow.  Constants that the analysis leaves unspecified (C, C', ...)
are reported as measured values, never assumed.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .coarse import Contour, a_tiles, c_tiles
from .errors import NoBadStructure
from .exact import (
    DEFAULT_BUDGET,
    RegionSpec,
    partition_exact,
    region_conditioned_partition,
    restricted_partition_factorized,
)
from .lattice import (
    H,
    V,
    Rod,
    overlap,
    peel,
    rod_offsets,
    sites_of_rod,
    sites_of_tiles,
    tile_of,
    tile_side,
)
from .mayer import DEFAULT_CAP, connected_multisets, mayer_coefficient
from .polyz import PolyZ

C0 = 5e-4
ALPHA = 0.25
SCHEMA_VERSION = 1


def as_fraction(z) -> Fraction:
    return z if isinstance(z, Fraction) else Fraction(str(z))


def log_abs(x) -> float:
    """``log |x|`` for a rational without passing through a float."""
    x = Fraction(x)
    if x == 0:
        return -math.inf
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def epsilons(z, k: int, c0: float = C0, e1_exp: float = 1 / 6, e2_exp: float = 1 / 32) -> dict:
    zf = float(z)
    e1 = math.exp(-c0 * e1_exp * zf * k * k)
    e2 = (zf * k) ** e2_exp
    return {"c0": c0, "eps1": e1, "eps2": e2, "eps": max(e1, e2)}


@dataclass
class BoundCertificate:
    """``value <= target`` with inputs and constants; compared in log space."""

    name: str
    inputs: dict
    log_value: float
    log_target: float
    constants: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    @property
    def target(self) -> float:
        return math.exp(self.log_target)

    @property
    def margin(self) -> float:
        return self.target - self.value

    @property
    def log_margin(self) -> float:
        return self.log_target - self.log_value

    @property
    def passed(self) -> bool:
        return self.log_value <= self.log_target

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(schema=SCHEMA_VERSION, value=self.value, target=self.target,
                 margin=self.margin, log_margin=self.log_margin, passed=self.passed)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=str)


# --- single tiles and dominoes ---------------------------------------------


def tile_factor(spin: int, k: int, z) -> Fraction:
    """``sum_R phibar(R) / Z^q(tile)`` for a single tile of the given spin."""
    if spin in (H, V):
        return Fraction(1)
    if spin != 0:
        raise ValueError("spin must be -1, 0 or +1")
    ell = tile_side(k)
    return -1 / (1 + ell * as_fraction(z)) ** ell


def _reach(k: int, axis: str, first: int) -> int:
    """Sites by which the rods pointing across the domino stick out of their tile."""
    a, b = rod_offsets(k)
    along = H if axis == "x" else V
    return b if first == along else a


def domino_numerator(k: int, axis: str = "x", first: int = H) -> PolyZ:
    """Closed form of ``sum phibar(R_P)`` over a domino of opposite spins.

    The tile whose rods lie along the domino axis "reaches" across by ``r``
    sites; every rod of the other tile covers all lines of its partner.  A
    reaching rod at position ``c`` (``c = ell-1`` next to the partner) conflicts
    with a covering rod on line ``d`` (``d = 0`` next to the partner) iff
    ``d <= c + r - ell``.  Summing over the covering line ``D`` nearest to the
    partner gives a sum of products.
    """
    ell = tile_side(k)
    r = _reach(k, axis, first)
    one_line = PolyZ((1, ell))
    total = one_line ** ell  # covering tile empty
    for D in range(ell):
        free = min(max(D + ell - r, 0), ell)
        term = PolyZ((0, ell)) * one_line ** (ell - 1 - D) * PolyZ((1, free)) ** ell
        total = total + term
    return total


def _domino_tiles(axis: str):
    return ((0, 0), (1, 0)) if axis == "x" else ((0, 0), (0, 1))


def _tile_states(xi, spin: int, k: int) -> list[list[Rod]]:
    """All rod configurations of a single-orientation tile: one rod per line at most."""
    ell = tile_side(k)
    x0, y0 = xi[0] * ell, xi[1] * ell
    states: list[list[Rod]] = [[]]
    for line in range(ell):
        nxt = []
        for s in states:
            nxt.append(s)
            for pos in range(ell):
                r = Rod(H, x0 + pos, y0 + line) if spin == H else Rod(V, x0 + line, y0 + pos)
                nxt.append(s + [r])
        states = nxt
    return states


def domino_numerator_enum(k: int, axis: str = "x", first: int = H) -> PolyZ:
    """Enumeration of cross-compatible tile-state pairs, ``(ell+1)**ell`` per tile."""
    t1, t2 = _domino_tiles(axis)
    s1, s2 = _tile_states(t1, first, k), _tile_states(t2, -first, k)
    rods2 = sorted({r for s in s2 for r in s})
    bit = {r: i for i, r in enumerate(rods2)}
    conflict: dict = {}
    for s in s1:
        for r in s:
            if r not in conflict:
                m = 0
                for g in rods2:
                    if overlap(r, g, k):
                        m |= 1 << bit[g]
                conflict[r] = m
    masks2 = [sum(1 << bit[r] for r in s) for s in s2]
    by_mask: dict = {}
    for s, m in zip(s2, masks2):
        by_mask.setdefault(m, []).append(len(s))
    coeffs = [0] * (4 * tile_side(k) + 1)
    for s in s1:
        cm = 0
        for r in s:
            cm |= conflict[r]
        for m, sizes in by_mask.items():
            if not m & cm:
                for n2 in sizes:
                    coeffs[len(s) + n2] += 1
    return PolyZ(coeffs)


def domino_numerator_dp(k: int, axis: str = "x", first: int = H,
                        budget: int = DEFAULT_BUDGET) -> PolyZ:
    """Same sum through the generic transfer engine (independent route)."""
    t1, t2 = _domino_tiles(axis)
    ell = tile_side(k)
    spec = RegionSpec(frozenset(sites_of_tiles((t1, t2), ell)), "open",
                      tile_spins={t1: first, t2: -first})
    return partition_exact(spec, k, budget=budget)


@dataclass
class DominoReport:
    k: int
    z: Fraction
    q: int
    axis: str
    first: int
    numerator: PolyZ
    z_pair: PolyZ
    value: Fraction
    untypical_left: Fraction  # T1
    untypical_right: Fraction  # T2
    half_tile_bound: Fraction

    @property
    def ell(self) -> int:
        return tile_side(self.k)

    @property
    def target_factor(self) -> float:
        """``2 exp(-z ell^2 / 2)``, the bound without the correction factor."""
        return 2 * math.exp(-float(self.z) * self.ell ** 2 / 2)

    @property
    def measured_C(self) -> float:
        """Smallest C' with ``value <= 2 exp(C' z k^2 (zk)) exp(-z ell^2/2)``."""
        zf = float(self.z)
        if zf == 0:
            return 0.0
        excess = log_abs(self.value) - math.log(self.target_factor)
        return max(0.0, excess) / (zf * self.k ** 2 * zf * self.k)

    @property
    def untypical_ok(self) -> bool:
        """Product-measure bound: numerator / (Z(tile)^2) <= T1 + T2."""
        zt = tile_side(self.k)
        tile = (1 + zt * self.z) ** zt
        return self.numerator(self.z) / tile ** 2 <= self.untypical_left + self.untypical_right

    def to_dict(self) -> dict:
        return {
            "k": self.k, "z": str(self.z), "q": self.q, "axis": self.axis, "first": self.first,
            "value": float(self.value), "T1": float(self.untypical_left),
            "T2": float(self.untypical_right), "half_tile_bound": float(self.half_tile_bound),
            "target_factor": self.target_factor, "measured_C": self.measured_C,
            "untypical_ok": self.untypical_ok,
        }


def domino_factor(k: int, z, q: int = H, axis: str = "x", first: int = H) -> DominoReport:
    """Exact ``sum_{R_P} phibar(R_P) / Z^q(P)`` for a domino, plus its bound terms."""
    z = as_fraction(z)
    ell = tile_side(k)
    num = domino_numerator(k, axis, first)
    zp = restricted_partition_factorized(_domino_tiles(axis), q, k)
    tile = (1 + ell * z) ** ell
    far = ell // 2  # positions of the reaching tile away from the partner
    t1 = (1 + far * z) ** ell / tile
    t2 = (1 + ell * z) ** far / tile
    return DominoReport(k, z, q, axis, first, num, zp, num(z) / zp(z), t1, t2, 2 * t1)


# --- Peierls ledger --------------------------------------------------------


@dataclass
class LedgerPartition:
    zeros: list
    dominoes: list
    plus: list
    minus: list

    @property
    def n0(self) -> int:
        return len(self.zeros)

    @property
    def nd(self) -> int:
        return len(self.dominoes)


def ledger_partition(support: Iterable, spins: dict) -> LedgerPartition:
    """Greedy split of a contour support into 0-singles, dominoes and +/- singles.

    Every 0-tile is a single.  Each smoothing square without a 0-tile then
    receives one domino (an unused opposite-sign edge pair with a tile in the
    square) if one exists.
    """
    support = set(support)
    zeros = sorted(t for t in support if spins[t] == 0)
    used = set(zeros)
    dominoes = []
    blocks: dict = {}
    for t in support:
        blocks.setdefault((t[0] // 4, t[1] // 4), []).append(t)
    for blk in sorted(blocks):
        tiles = sorted(blocks[blk])
        if any(spins[t] == 0 for t in tiles):
            continue
        done = False
        for t in tiles:
            if t in used:
                continue
            for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
                u = (t[0] + dx, t[1] + dy)
                if u in support and u not in used and spins[u] == -spins[t]:
                    dominoes.append((t, u) if u > t else (u, t))
                    used.update((t, u))
                    done = True
                    break
            if done:
                break
    rest = support - used
    return LedgerPartition(zeros, dominoes, sorted(t for t in rest if spins[t] == H),
                           sorted(t for t in rest if spins[t] == V))


def _domino_geometry(pair, spins) -> tuple[str, int]:
    (x1, y1), (x2, y2) = sorted(pair)
    axis = "x" if y1 == y2 else "y"
    return axis, spins[(x1, y1)]


def peierls_ledger(contour_or_support, spins: dict | None, q: int, k: int, z,
                   c0: float = C0, exact: bool = False,
                   budget: int = DEFAULT_BUDGET) -> BoundCertificate:
    """Certified upper bound on ``sum_{R_gamma} |phibar(R_gamma)| / Z^q(Gamma)``.

    The numerator is bounded by dropping hard-core constraints between parts of
    the ledger partition: 0-singles contribute 1, each domino its exact
    closed-form sum, and the remaining +/- tiles the exact single-orientation
    partition function of each sign class.  ``Z^q(Gamma)`` is exact.  With
    ``exact=True`` the true sum is also computed by enumeration.
    """
    if isinstance(contour_or_support, Contour):
        support, spins = set(contour_or_support.support), contour_or_support.spins
    else:
        support = set(contour_or_support)
    z = as_fraction(z)
    n = len(support)
    part = ledger_partition(support, spins)
    if part.n0 + part.nd < n / 64:
        raise NoBadStructure(
            f"only {part.n0 + part.nd} witnesses for {n} tiles (need >= {n / 64:.2f})")
    zq = restricted_partition_factorized(support, q, k)
    log_num = 0.0
    for pair in part.dominoes:
        axis, first = _domino_geometry(pair, spins)
        log_num += log_abs(domino_numerator(k, axis, first)(z))
    if part.plus:
        log_num += log_abs(restricted_partition_factorized(part.plus, H, k)(z))
    if part.minus:
        log_num += log_abs(restricted_partition_factorized(part.minus, V, k)(z))
    log_value = log_num - log_abs(zq(z))
    zf, ell = float(z), tile_side(k)
    zk2 = zf * k * k
    weight = part.n0 + part.nd / 2
    extras = {
        "n0": part.n0, "nd": part.nd, "required": n / 64,
        "log_target_final": -c0 * zk2 * n,
        "passes_final": log_value <= -c0 * zk2 * n,
        "certified_bound": True,
    }
    if zf > 0 and weight:
        extras["measured_C"] = (1 + log_value / (zf * ell * ell * weight)) / (zf * k)
    if exact:
        spec = RegionSpec(frozenset(sites_of_tiles(support, ell)), "open",
                          tile_spins={t: spins[t] for t in support})
        true_num = partition_exact(spec, k, budget=budget)(z)
        extras["log_exact"] = log_abs(true_num) - log_abs(zq(z))
        extras["exact_le_bound"] = extras["log_exact"] <= log_value + 1e-12
    return BoundCertificate(
        "peierls", {"z": str(z), "k": k, "ell": ell, "tiles": n, "q": q},
        log_value, -2 * c0 * zk2 * n, {"c0": c0}, extras)


def smoothing_block(corner, nx: int = 1, ny: int = 1) -> set:
    """Tiles of an ``nx`` by ``ny`` block of smoothing squares."""
    return {(4 * corner[0] + i, 4 * corner[1] + j) for i in range(4 * nx) for j in range(4 * ny)}


# --- ratio of conditioned partition functions ------------------------------


def ratio_check(tiles: Iterable, k: int, z, C: float = 10.0,
                budget: int = DEFAULT_BUDGET) -> BoundCertificate:
    """``Z(X|+) / Z(X|-)`` exactly, against ``exp(C |P'| z k^2 (zk))``."""
    tiles = frozenset(tiles)
    z = as_fraction(z)
    zp = region_conditioned_partition(tiles, H, k, budget=budget)
    zm = region_conditioned_partition(tiles, V, k, budget=budget)
    ratio = zp(z) / zm(z)
    p = len(peel(tiles))
    zf = float(z)
    scale = p * zf * k * k * zf * k
    lr = abs(log_abs(ratio))
    xs = [t[0] for t in tiles]
    ys = [t[1] for t in tiles]
    square = (max(xs) - min(xs) == max(ys) - min(ys)) and len(tiles) == (max(xs) - min(xs) + 1) ** 2
    return BoundCertificate(
        "ratio", {"z": str(z), "k": k, "tiles": len(tiles), "peel": p},
        lr if lr > 0 else -math.inf, math.log(C * scale) if scale > 0 else 0.0,
        {"C": C},
        {"ratio": str(ratio), "ratio_float": float(ratio), "exactly_one": ratio == 1,
         "square": square, "measured_C": lr / scale if scale else 0.0})


# --- polymer activity chain ------------------------------------------------


def _logsumexp(xs) -> float:
    xs = [x for x in xs if x != -math.inf]
    if not xs:
        return -math.inf
    m = max(xs)
    return m + math.log(sum(math.exp(x - m) for x in xs))


def polymer_bound(n_tiles: int, z, k: int, c0: float = C0, alpha: float = ALPHA) -> BoundCertificate:
    """Certified value of the closing inequality chain for ``|K(X)|`` at ``|X'| = n``.

    Evaluates ``sum_{X0 != empty} e1t^{|X0|} sum_{X1: X0 u X1 = X} b^{|X1|}``
    with ``e1t = exp(-c0 z k^2 / 3)``, ``e2t = (zk)^(alpha/4)`` and
    ``b = (1 + e1t^(3/4)) e2t``, which equals
    ``(e1t + e1t b + b)^n - b^n``, and compares it with ``eps1 eps^(n-1)``.
    """
    zf = float(z)
    eps = epsilons(z, k, c0)
    if zf == 0:
        return BoundCertificate("polymer", {"z": str(z), "k": k, "tiles": n_tiles},
                                -math.inf, 0.0, eps, {"trivial": True})
    log_e1t = -c0 * zf * k * k / 3
    log_e2t = alpha / 4 * math.log(zf * k)
    log_b = math.log1p(math.exp(0.75 * log_e1t)) + log_e2t
    # (x + b)^n - b^n with x = e1t (1 + b), expanded so tiny x does not underflow
    log_x = log_e1t + math.log1p(math.exp(log_b))
    terms = [math.log(math.comb(n_tiles, j)) + j * log_x + (n_tiles - j) * log_b
             for j in range(1, n_tiles + 1)]
    log_value = _logsumexp(terms)
    log_eps1 = -c0 / 6 * zf * k * k
    log_eps = max(log_eps1, math.log(zf * k) / 32)
    log_target = log_eps1 + (n_tiles - 1) * log_eps
    return BoundCertificate(
        "polymer", {"z": str(z), "k": k, "tiles": n_tiles}, log_value, log_target,
        {**eps, "alpha": alpha},
        {"log_e1t": log_e1t, "log_e2t": log_e2t, "log_b": log_b})


def polymer_chain_sum(n_tiles: int, e1t: float, b: float) -> float:
    """Direct sum over pairs (X0, X1) covering n tiles, X0 nonempty."""
    total = 0.0
    for n0 in range(1, n_tiles + 1):
        # tiles of X0: each is in X0 only or in both; others in X1 only
        total += math.comb(n_tiles, n0) * e1t ** n0 * (1 + b) ** n0 * b ** (n_tiles - n0)
    return total


# --- zeta0, zeta -----------------------------------------------------------


def _phibar_sign(contour: Contour) -> int:
    zeros = sum(1 for s in contour.spins.values() if s == 0)
    return -1 if zeros % 2 else 1


def _frozen_sites(contour: Contour, k: int) -> set:
    out = set()
    for r in contour.rods:
        out |= sites_of_rod(Rod(*r), k)
    return out


@dataclass
class Zeta0Result:
    value: Fraction
    phibar: int
    z_gamma: PolyZ
    interior_ratios: list
    unfrozen_value: Fraction

    @property
    def monotone(self) -> bool:
        return abs(self.value) <= abs(self.unfrozen_value)


def zeta0(contour: Contour, k: int, z, budget: int = DEFAULT_BUDGET) -> Zeta0Result:
    """``phibar(R_gamma) / Z^q(Gamma)`` times the interior ratio factors."""
    z = as_fraction(z)
    rods = [Rod(*r) for r in contour.rods]
    for i, r in enumerate(rods):
        for s in rods[i + 1:]:
            if overlap(r, s, k):
                return Zeta0Result(Fraction(0), 0, PolyZ.one(), [], Fraction(0))
    ell = tile_side(k)
    for r in rods:
        if contour.spins[tile_of(r.center, ell)] != r.orientation:
            raise ValueError(f"rod {r} does not match the spin of its tile")
    phibar = _phibar_sign(contour)
    zg = restricted_partition_factorized(contour.support, contour.q, k)
    frozen = _frozen_sites(contour, k)
    ratios, unfrozen = [], []
    for inner, m in zip(contour.interiors, contour.m_int):
        den = region_conditioned_partition(inner, contour.q, k, budget=budget)(z)
        num = region_conditioned_partition(inner, m, k, frozen, budget=budget)(z)
        free = region_conditioned_partition(inner, m, k, budget=budget)(z)
        ratios.append(num / den)
        unfrozen.append(free / den)
    base = Fraction(phibar) / zg(z)
    value = base
    for r in ratios:
        value *= r
    ub = base
    for r in unfrozen:
        ub *= r
    return Zeta0Result(value, phibar, zg, ratios, ub)


@dataclass
class ZetaResult:
    zeta0: Zeta0Result
    exponent: list  # exact coefficient of z^m in sum_R phi^T z^|R| sum_Delta F_Delta
    z: Fraction
    k: int
    tiles: int

    @property
    def order1_nonpositive(self) -> bool:
        return len(self.exponent) < 2 or self.exponent[1] >= 0

    def log_correction(self) -> float:
        return -sum(float(c) * float(self.z) ** m for m, c in enumerate(self.exponent))

    @property
    def value(self) -> float:
        return float(self.zeta0.value) * math.exp(self.log_correction())

    @property
    def tail_estimate(self) -> float:
        c = self.exponent
        m = len(c) - 1
        if m < 2 or c[m - 1] == 0:
            return math.nan
        return abs(float(c[m])) * float(self.z) ** (m + 1) * abs(float(c[m]) / float(c[m - 1]))

    @property
    def measured_C(self) -> float:
        """Smallest C with ``|zeta| <= |zeta0| exp(C z k^2 |Gamma'| (zk)^(1/4))``."""
        zf = float(self.z)
        if zf == 0:
            return 0.0
        scale = zf * self.k ** 2 * self.tiles * (zf * self.k) ** ALPHA
        return max(0.0, self.log_correction()) / scale


def _peel_indicator_data(contour: Contour):
    data = []
    for xi in sorted(contour.peel):
        data.append((xi, frozenset(a_tiles(contour, xi)), frozenset(c_tiles(contour, xi)),
                     xi in contour.ext_peel))
    return data


def _crossings(R, contour: Contour, data, k: int) -> list:
    """Peel tiles Delta with ``F_Delta(R) = 1``."""
    ell = tile_side(k)
    tiles_r = {tile_of(Rod(*r).center, ell) for r in R}
    frozen_tiles = {tile_of(Rod(*g).center, ell) for g in contour.rods}
    hits = None
    out = []
    for xi, a, c, ext in data:
        if tiles_r.isdisjoint(a):
            continue
        f = not tiles_r.isdisjoint(c)
        if not f and ext and not frozen_tiles.isdisjoint(c):
            if hits is None:
                hits = any(overlap(Rod(*r), Rod(*g), k) for r in set(R) for g in contour.rods)
            f = hits
        if f:
            out.append(xi)
    return out


def _seed_rods(tiles: Iterable, q: int, k: int) -> list[Rod]:
    return [Rod(q, x, y) for x, y in sorted(sites_of_tiles(tiles, tile_side(k)))]


def zeta(contour: Contour, k: int, z, m_max: int = 2, cap: int = DEFAULT_CAP,
         budget: int = DEFAULT_BUDGET) -> ZetaResult:
    """Contour activity with the crossing exponent truncated at ``m_max`` rods."""
    z = as_fraction(z)
    z0 = zeta0(contour, k, z, budget)
    data = _peel_indicator_data(contour)
    seeds = _seed_rods(set().union(*(a for _, a, _, _ in data)) if data else (), contour.q, k)
    levels = connected_multisets(seeds, m_max, k, orientations=(contour.q,))
    coeffs = [Fraction(0)] * (m_max + 1)
    for m, group in levels.items():
        for ms in group:
            d = _crossings(ms, contour, data, k)
            if d:
                coeffs[m] += mayer_coefficient(ms, k, cap) * len(d)
    return ZetaResult(z0, coeffs, z, k, len(contour.support))


# --- interaction between contours ------------------------------------------


@dataclass
class InteractionResult:
    W: list  # coefficient of z^m
    F: dict  # collection Y (sorted tuple of tiles) -> coefficient list
    z: Fraction

    def W_value(self) -> float:
        return sum(float(c) * float(self.z) ** m for m, c in enumerate(self.W))

    def F_value(self, Y) -> float:
        return sum(float(c) * float(self.z) ** m for m, c in enumerate(self.F[tuple(sorted(Y))]))


def _multiset_crossings(ms, contours, tables, k):
    d = []
    for c, data in zip(contours, tables):
        d.extend(_crossings(ms, c, data, k))
    return sorted(d)


def interaction_W(contours: list[Contour], k: int, z, m_max: int = 3,
                  cap: int = DEFAULT_CAP) -> InteractionResult:
    """Truncated contour interaction and the per-collection sums ``F(Y)``.

    A connected single-orientation multiset lies on one row (or column), so
    the set ``D(R)`` of peel tiles it crosses is automatically collinear.  Its
    contribution to ``W`` is ``sum_{n>=2} (-1)^(n+1) C(|D|, n) = 1 - |D|``.
    """
    z = as_fraction(z)
    if not contours:
        return InteractionResult([Fraction(0)] * (m_max + 1), {}, z)
    q = contours[0].q
    tables = [_peel_indicator_data(c) for c in contours]
    a_all = set()
    for data in tables:
        for _, a, _, _ in data:
            a_all |= a
    levels = connected_multisets(_seed_rods(a_all, q, k), m_max, k, orientations=(q,))
    W = [Fraction(0)] * (m_max + 1)
    F: dict = {}
    for m, group in levels.items():
        for ms in group:
            d = _multiset_crossings(ms, contours, tables, k)
            if len(d) < 2:
                continue
            phi = mayer_coefficient(ms, k, cap)
            if not phi:
                continue
            W[m] += phi * (1 - len(d))
            for n in range(2, len(d) + 1):
                for Y in combinations(d, n):
                    coeffs = F.setdefault(Y, [Fraction(0)] * (m_max + 1))
                    coeffs[m] += (-1) ** n * phi
    return InteractionResult(W, F, z)


def collection_diameter(Y) -> int:
    """Rescaled diameter of a collinear collection of tiles."""
    xs = [t[0] for t in Y]
    ys = [t[1] for t in Y]
    return max(max(xs) - min(xs), max(ys) - min(ys))


__all__ = [
    "ALPHA",
    "C0",
    "BoundCertificate",
    "DominoReport",
    "InteractionResult",
    "LedgerPartition",
    "Zeta0Result",
    "ZetaResult",
    "collection_diameter",
    "domino_factor",
    "domino_numerator",
    "domino_numerator_dp",
    "domino_numerator_enum",
    "epsilons",
    "interaction_W",
    "ledger_partition",
    "log_abs",
    "peierls_ledger",
    "polymer_bound",
    "polymer_chain_sum",
    "ratio_check",
    "smoothing_block",
    "tile_factor",
    "zeta",
    "zeta0",
]
