"""Exact integer polynomials in the activity z."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence


class PolyZ:
    """Polynomial ``sum_n c[n] z**n`` with arbitrary-precision integer coefficients.

    For a partition function ``c[n]`` is the number of allowed ``n``-rod
    configurations.  Trailing zeros are stripped, so equality is coefficientwise.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = (1,)):
        c = [int(v) for v in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c) if c else (0,)

    @classmethod
    def one(cls) -> "PolyZ":
        return cls((1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, PolyZ):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self.coeffs == PolyZ(other).coeffs
        if isinstance(other, int):
            return self.coeffs == (other,)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyZ({list(self.coeffs)})"

    def __add__(self, other: "PolyZ") -> "PolyZ":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return PolyZ([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __mul__(self, other) -> "PolyZ":
        if isinstance(other, int):
            return PolyZ([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return PolyZ(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PolyZ":
        out = PolyZ.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, m: int = 1) -> "PolyZ":
        """Multiply by ``z**m``."""
        return PolyZ((0,) * m + self.coeffs)

    def __call__(self, z):
        acc = 0 * z
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "PolyZ":
        return PolyZ([n * c for n, c in enumerate(self.coeffs)][1:] or [0])

    def mean_count(self, z):
        """Mean number of rods ``z Z'(z) / Z(z)`` in the grand-canonical ensemble."""
        return z * self.derivative()(z) / self(z)

    def log_taylor(self, order: int) -> list[Fraction]:
        """Taylor coefficients ``[l_0, ..., l_order]`` of ``log Z(z)`` about ``z = 0``.

        Requires ``Z(0) = 1``.  Uses ``n l_n = n c_n - sum_{j<n} j l_j c_{n-j}``.
        """
        c = self.coeffs
        if c[0] != 1:
            raise ValueError("log expansion needs constant term 1")
        get = lambda n: c[n] if n < len(c) else 0  # noqa: E731
        out = [Fraction(0)] * (order + 1)
        for n in range(1, order + 1):
            s = Fraction(n * get(n))
            for j in range(1, n):
                s -= j * out[j] * get(n - j)
            out[n] = s / n
        return out

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "PolyZ":
        return cls(int(s) for s in json.loads(text))


def poly_product(polys: Sequence[PolyZ]) -> PolyZ:
    out = PolyZ.one()
    for p in polys:
        out = out * p
    return out
