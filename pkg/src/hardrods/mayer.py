"""Mayer coefficients of rod multisets and truncated cluster series.

Multisets are represented as sorted tuples of :class:`~hardrods.lattice.Rod`
(repeated entries encode multiplicity).  All coefficients are exact
``Fraction`` values; floats only appear when a series is evaluated.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .errors import SizeLimit
from .exact import restricted_partition_factorized
from .lattice import H, V, Rod, overlap, rod_offsets, sites_of_rod, sites_of_tiles, tile_side

DEFAULT_CAP = 8


class RodMultiset:
    """Rods with multiplicities; ``len`` is the total count ``|R|``."""

    __slots__ = ("rods",)

    def __init__(self, rods: Iterable[Rod] = ()):
        self.rods: tuple[Rod, ...] = tuple(sorted(Rod(*r) for r in rods))

    @classmethod
    def from_counts(cls, counts: dict) -> "RodMultiset":
        return cls(r for r, m in counts.items() for _ in range(m))

    def __len__(self):
        return len(self.rods)

    def __iter__(self):
        return iter(self.rods)

    def __eq__(self, other):
        return isinstance(other, RodMultiset) and self.rods == other.rods

    def __hash__(self):
        return hash(self.rods)

    def __repr__(self):
        return f"RodMultiset({list(self.rods)})"

    @property
    def multiplicity(self) -> Counter:
        return Counter(self.rods)

    def support(self, k: int) -> set:
        out = set()
        for r in set(self.rods):
            out |= sites_of_rod(r, k)
        return out

    def is_connected(self, k: int) -> bool:
        return _is_connected(_adjacency(self.rods, k))


def _adjacency(rods, k) -> tuple[int, ...]:
    n = len(rods)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rods[i] == rods[j] or overlap(rods[i], rods[j], k):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return tuple(adj)


def _is_connected(adj) -> bool:
    n = len(adj)
    if n <= 1:
        return True
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for i in range(n):
            if frontier >> i & 1:
                nxt |= adj[i]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << n) - 1


@lru_cache(maxsize=None)
def connected_spanning_sum(adj: tuple[int, ...]) -> int:
    """Sum of ``(-1)**|E(C)|`` over connected spanning subgraphs C of the graph.

    Uses the set-partition recursion ``f(S) = sum_{T ∋ min S} c(T) f(S \\ T)``
    where ``f(S)`` (the same sum without connectivity) is 1 on independent sets
    and 0 otherwise.  Cost is ``O(3**n)``.
    """
    n = len(adj)
    full = (1 << n) - 1
    indep = [True] * (full + 1)
    for s in range(1, full + 1):
        low = s & -s
        i = low.bit_length() - 1
        rest = s ^ low
        indep[s] = indep[rest] and not (adj[i] & rest)
    c = [0] * (full + 1)
    for s in range(1, full + 1):
        low = s & -s
        rest = s ^ low
        acc = 1 if indep[s] else 0
        # proper subsets T of s that contain the lowest vertex
        sub = rest
        while True:
            t = sub | low
            if t != s:
                acc -= c[t] * (1 if indep[s ^ t] else 0)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        c[s] = acc
    return c[full]


def mayer_coefficient(R, k: int, cap: int = DEFAULT_CAP) -> Fraction:
    """Ursell coefficient ``phi^T(R)`` of a rod multiset."""
    rods = tuple(sorted(Rod(*r) for r in R))
    n = len(rods)
    if n == 0:
        return Fraction(0)
    if n == 1:
        return Fraction(1)
    if n > cap:
        raise SizeLimit(f"|R| = {n} exceeds the cap {cap}")
    adj = _adjacency(rods, k)
    if not _is_connected(adj):
        return Fraction(0)
    denom = 1
    for m in Counter(rods).values():
        denom *= math.factorial(m)
    return Fraction(connected_spanning_sum(adj), denom)


# --- connected multiset enumeration ----------------------------------------


def overlapping_rods(r: Rod, k: int, orientations=(H, V)) -> list[Rod]:
    """All rods (any center) sharing a site with ``r``, including ``r`` itself."""
    a, b = rod_offsets(k)
    out = []
    for o in orientations:
        if o == r.orientation:
            if o == H:
                out.extend(Rod(o, r.x + d, r.y) for d in range(-(k - 1), k))
            else:
                out.extend(Rod(o, r.x, r.y + d) for d in range(-(k - 1), k))
        else:
            h_sites = sites_of_rod(r, k)
            for s in h_sites:
                # rods of the other orientation through site s
                for t in range(-b, a + 1):
                    cand = Rod(o, s[0], s[1] + t) if o == V else Rod(o, s[0] + t, s[1])
                    out.append(cand)
    return sorted(set(out))


def connected_multisets(seeds: Iterable[Rod], m_max: int, k: int,
                        allowed: Callable[[Rod], bool] | None = None,
                        orientations=(H, V)) -> dict[int, set]:
    """Connected multisets with ``1..m_max`` rods containing at least one seed.

    Grows multisets one rod at a time, attaching a rod that overlaps the
    current support; canonical sorted tuples remove duplicates.  Returns
    ``{m: set of sorted tuples}``.
    """
    level = {(Rod(*s),) for s in seeds if allowed is None or allowed(Rod(*s))}
    out = {1: level}
    nbr_cache: dict = {}
    for m in range(2, m_max + 1):
        nxt = set()
        for ms in level:
            cands = set()
            for r in set(ms):
                if r not in nbr_cache:
                    nb = overlapping_rods(r, k, orientations)
                    nbr_cache[r] = [c for c in nb if allowed is None or allowed(c)]
                cands.update(nbr_cache[r])
            for c in cands:
                nxt.add(tuple(sorted(ms + (c,))))
        out[m] = nxt
        level = nxt
    return out


# --- truncated series ------------------------------------------------------


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class TruncatedSeries:
    """Cluster series ``sum_R z^|R| phi^T(R)`` truncated at ``m_max`` rods.

    ``terms`` maps ``(anchor, m)`` to the exact partial sum over multisets of
    ``m`` rods whose smallest rod (in sorted order) is ``anchor``.
    """

    m_max: int
    terms: dict = field(default_factory=dict)

    @property
    def coefficients(self) -> list[Fraction]:
        out = [Fraction(0)] * (self.m_max + 1)
        for (_, m), v in self.terms.items():
            out[m] += v
        return out

    def value(self, z) -> float:
        return float(sum(c * Fraction(z) ** m for m, c in enumerate(self.coefficients)))

    def tail_estimate(self, z) -> float:
        """Geometric extrapolation of the first omitted order."""
        c = self.coefficients
        if self.m_max < 2 or c[self.m_max - 1] == 0:
            return math.nan
        ratio = abs(float(c[self.m_max]) / float(c[self.m_max - 1]))
        return abs(float(c[self.m_max])) * float(z) ** (self.m_max + 1) * ratio

    def to_json(self) -> str:
        return json.dumps({
            "m_max": self.m_max,
            "coefficients": [_frac_str(c) for c in self.coefficients],
            "terms": [
                {"anchor": list(a), "m": m, "value": _frac_str(v)}
                for (a, m), v in sorted(self.terms.items())
            ],
        })


def truncated_log_restricted(tiles: Iterable, q: int, k: int, m_max: int,
                             cap: int = DEFAULT_CAP) -> TruncatedSeries:
    """Cluster series of ``log Z^q(X)`` through order ``m_max``."""
    if m_max > cap:
        raise SizeLimit(f"m_max = {m_max} exceeds the cap {cap}")
    centers = frozenset(sites_of_tiles(tiles, tile_side(k)))
    pool = [Rod(q, x, y) for x, y in sorted(centers)]
    allowed = lambda r: r.orientation == q and r.center in centers  # noqa: E731
    levels = connected_multisets(pool, m_max, k, allowed, orientations=(q,))
    series = TruncatedSeries(m_max)
    for m, group in levels.items():
        for ms in group:
            phi = mayer_coefficient(ms, k, cap)
            if phi:
                key = (tuple(ms[0]), m)
                series.terms[key] = series.terms.get(key, Fraction(0)) + phi
    return series


def log_restricted_taylor(tiles: Iterable, q: int, k: int, order: int) -> list[Fraction]:
    """Oracle: Taylor coefficients of ``log Z^q(X)`` from the exact polynomial."""
    return restricted_partition_factorized(tiles, q, k).log_taylor(order)


# --- pinned sums -----------------------------------------------------------


@dataclass
class PinnedSum:
    """Orders of ``sum_{R ∋ x0} z^|R| |phi^T(R)|`` on the infinite lattice."""

    k: int
    z: float
    abs_coefficients: list[Fraction]  # index m -> sum over |R| = m of |phi^T|
    m: int = 1

    @property
    def contributions(self) -> list[float]:
        return [float(b) * self.z ** j for j, b in enumerate(self.abs_coefficients)]

    @property
    def value(self) -> float:
        return sum(self.contributions[self.m:])

    @property
    def ratios(self) -> dict[int, float]:
        """Consecutive-order ratios ``a_{m+1} / a_m`` keyed by the lower order."""
        c = self.contributions
        return {j: c[j + 1] / c[j] for j in range(1, len(c) - 1) if c[j]}

    @property
    def measured_C(self) -> dict[int, float]:
        """Smallest C with ``a_{m+1} <= C z k a_m`` at each order."""
        b = self.abs_coefficients
        return {j: float(b[j + 1] / b[j]) / self.k for j in range(1, len(b) - 1) if b[j]}


def pinned_sum(x0, q: int, m: int, z, k: int, max_order: int = 4,
               cap: int = DEFAULT_CAP) -> PinnedSum:
    """Pinned absolute cluster sum for the orientation-q ensemble.

    Multisets of at most ``max_order`` rods are enumerated exactly; connected
    multisets anchored at ``x0`` cannot leave a window of radius
    ``max_order * k`` around it.
    """
    if max_order > cap:
        raise SizeLimit(f"max_order = {max_order} exceeds the cap {cap}")
    seed = Rod(q, x0[0], x0[1])
    levels = connected_multisets([seed], max_order, k, orientations=(q,))
    coeffs = [Fraction(0)] * (max_order + 1)
    for j, group in levels.items():
        for ms in group:
            coeffs[j] += abs(mayer_coefficient(ms, k, cap))
    return PinnedSum(k=k, z=float(z), abs_coefficients=coeffs, m=m)


def diameter_rod_bound(R, k: int) -> bool:
    """True iff ``|R| >= ceil(diam(supp R) / (k - 1))`` for a connected multiset."""
    sites = RodMultiset(R).support(k)
    pts = list(sites)
    diam = 0.0
    for i, p in enumerate(pts):
        for s in pts[i + 1:]:
            d = math.hypot(p[0] - s[0], p[1] - s[1])
            if d > diam:
                diam = d
    return len(R) >= math.ceil(diam / (k - 1) - 1e-12)
