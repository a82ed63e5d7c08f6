"""Slow, obviously-correct reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

import sympy

from hardrods.coarse import F_delta
from hardrods.lattice import Rod, overlap, sites_of_rod


def brute_partition(rods, k: int) -> list[int]:
    """Count hard-core-compatible subsets of ``rods`` by size, by plain subset scan."""
    rods = list(rods)
    counts = [0] * (len(rods) + 1)
    for mask in range(1 << len(rods)):
        chosen = [rods[i] for i in range(len(rods)) if mask >> i & 1]
        occ = [sites_of_rod(r, k) for r in chosen]
        total = sum(len(o) for o in occ)
        if len(set().union(*occ)) == total:
            counts[len(chosen)] += 1
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts


def box_rods_contained(width: int, height: int, k: int) -> list[Rod]:
    box = {(x, y) for x in range(width) for y in range(height)}
    return [Rod(o, x, y) for o in (1, -1) for x, y in sorted(box)
            if sites_of_rod(Rod(o, x, y), k) <= box]


def _connected(n: int, edges) -> bool:
    if n <= 1:
        return True
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(i) for i in range(n)}) == 1


def mayer_edge_subsets(R, k: int) -> Fraction:
    """Ursell coefficient by summing over every edge subset of the overlap graph."""
    rods = [Rod(*r) for r in R]
    n = len(rods)
    if n == 0:
        return Fraction(0)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rods[i] == rods[j] or overlap(rods[i], rods[j], k)]
    total = 0
    for m in range(len(edges) + 1):
        for sub in itertools.combinations(edges, m):
            if _connected(n, sub):
                total += (-1) ** m
    denom = math.prod(math.factorial(c) for c in Counter(rods).values())
    return Fraction(total, denom)


def log_series(coeffs, order: int) -> list[Fraction]:
    """Taylor coefficients of ``log(sum c_n z^n)`` computed symbolically."""
    z = sympy.symbols("z")
    poly = sum(sympy.Integer(c) * z ** n for n, c in enumerate(coeffs))
    ser = sympy.series(sympy.log(poly), z, 0, order + 1).removeO()
    return [Fraction(str(ser.coeff(z, n))) for n in range(order + 1)]


def brute_W(contour, k: int, rows, x_range, m_max: int):
    """Interaction coefficients and F(Y) straight from the definitions.

    Single-orientation rods on different lines never overlap, so a connected
    multiset lies on one line; we scan every multiset of at most ``m_max``
    rods on each of the given lines with centers in ``x_range``.
    """
    q = contour.q
    peel = sorted(contour.peel)
    W = [Fraction(0)] * (m_max + 1)
    F: dict = {}
    for line in rows:
        cands = [Rod(q, x, line) if q == 1 else Rod(q, line, x) for x in range(*x_range)]
        for m in range(2, m_max + 1):
            for ms in itertools.combinations_with_replacement(cands, m):
                phi = mayer_edge_subsets(ms, k)
                if not phi:
                    continue
                D = [xi for xi in peel if F_delta(xi, ms, contour, k)]
                for n in range(2, len(D) + 1):
                    for Y in itertools.combinations(D, n):
                        W[m] += (-1) ** (n + 1) * phi
                        F.setdefault(Y, [Fraction(0)] * (m_max + 1))[m] += (-1) ** n * phi
    return W, F
