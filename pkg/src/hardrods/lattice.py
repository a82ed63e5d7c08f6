"""Geometry of the fine lattice, the tile lattice and the smoothing lattice.

Sites are integer pairs ``(x, y)``; the box is anchored at the origin, so a
box of side ``L`` holds ``0 <= x, y < L``.  Tiles have side ``ell = ceil(k/2)``
and are indexed by ``(x // ell, y // ell)``; smoothing squares have side
``4 * ell`` and are indexed by ``(x // (4 ell), y // (4 ell))``.

A rod of length ``k`` is stored as ``(orientation, x, y)`` with ``(x, y)`` its
center.  Orientation ``H = +1`` is horizontal and ``V = -1`` vertical, which
lets the orientation double as the spin / boundary label ``q``.  The center of
an even-length rod is the site just left of (below) the geometric midpoint::

    k = 4, center c:      . [x][c][x][x] .      a = 1 site before, b = 2 after
    k = 3, center c:      . [x][c][x] .         a = b = 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import DivisibilityError, InvalidParams

H = 1
V = -1
ORIENTATIONS = (H, V)
BOUNDARIES = ("open", "plus", "minus")

# tiles within this rescaled distance of the complement carry the boundary spin
BAND_WIDTH = 5


class Rod(NamedTuple):
    orientation: int
    x: int
    y: int

    @property
    def center(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass(frozen=True)
class ModelParams:
    """Rod length, box, activity and boundary condition.

    ``Ly`` defaults to ``L`` (square box).  The box side must be a multiple of
    ``4 * ell`` whenever the boundary condition is ``plus`` or ``minus``; open
    boxes of any shape are accepted so that toy systems can be enumerated.
    """

    k: int
    L: int
    z: Fraction | float = 0
    boundary: str = "open"
    Ly: int | None = None

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 2:
            raise InvalidParams(f"rod length k must be an integer >= 2, got {self.k!r}")
        if self.L < 0 or (self.Ly is not None and self.Ly < 0):
            raise InvalidParams("box sides must be non-negative")
        if self.z < 0:
            raise InvalidParams(f"activity must be non-negative, got {self.z}")
        if self.boundary not in BOUNDARIES:
            raise InvalidParams(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if self.boundary != "open":
            check_divisible(self.L, self.k)
            if self.Ly is not None:
                check_divisible(self.Ly, self.k)

    @property
    def ell(self) -> int:
        return tile_side(self.k)

    @property
    def width(self) -> int:
        return self.L

    @property
    def height(self) -> int:
        return self.L if self.Ly is None else self.Ly

    @property
    def q(self) -> int:
        """Boundary spin: +1, -1, or 0 for open boundaries."""
        return {"open": 0, "plus": H, "minus": V}[self.boundary]

    @property
    def tile_shape(self) -> tuple[int, int]:
        return (-(-self.width // self.ell), -(-self.height // self.ell))

    def sites(self) -> list[tuple[int, int]]:
        return [(x, y) for y in range(self.height) for x in range(self.width)]


def tile_side(k: int) -> int:
    return -(-k // 2)


def check_divisible(L: int, k: int) -> None:
    s = 4 * tile_side(k)
    if L % s:
        raise DivisibilityError(f"box side {L} is not divisible by 4*ell = {s} (k={k})")


def rod_offsets(k: int) -> tuple[int, int]:
    """Number of sites (before, after) the center along the rod axis."""
    return (k - 1) // 2, k // 2


def sites_of_rod(rod: Rod, k: int) -> frozenset[tuple[int, int]]:
    a, b = rod_offsets(k)
    o, x, y = rod
    if o == H:
        return frozenset((x + t, y) for t in range(-a, b + 1))
    if o == V:
        return frozenset((x, y + t) for t in range(-a, b + 1))
    raise InvalidParams(f"unknown orientation {o!r}")


def overlap(r: Rod, s: Rod, k: int) -> bool:
    """True iff the two rods share a site (hard-core exclusion)."""
    a, b = rod_offsets(k)
    if r.orientation == s.orientation:
        if r.orientation == H:
            return r.y == s.y and abs(r.x - s.x) < k
        return r.x == s.x and abs(r.y - s.y) < k
    h, v = (r, s) if r.orientation == H else (s, r)
    return h.x - a <= v.x <= h.x + b and v.y - a <= h.y <= v.y + b


# --- coarse lattices -------------------------------------------------------


def tile_of(site, ell: int) -> tuple[int, int]:
    return (site[0] // ell, site[1] // ell)


def smoothing_of(site, ell: int) -> tuple[int, int]:
    return (site[0] // (4 * ell), site[1] // (4 * ell))


def tile_sites(xi, ell: int) -> list[tuple[int, int]]:
    x0, y0 = xi[0] * ell, xi[1] * ell
    return [(x0 + i, y0 + j) for j in range(ell) for i in range(ell)]


def tiles_of_smoothing(a) -> list[tuple[int, int]]:
    """The 16 tiles of smoothing square ``a``."""
    return [(4 * a[0] + i, 4 * a[1] + j) for j in range(4) for i in range(4)]


def sites_of_tiles(tiles: Iterable, ell: int) -> set[tuple[int, int]]:
    out = set()
    for xi in tiles:
        out.update(tile_sites(xi, ell))
    return out


def coarse_dist(xi, eta) -> float:
    """Rescaled Euclidean distance between tile indices."""
    return math.hypot(xi[0] - eta[0], xi[1] - eta[1])


def coarse_dist1(xi, eta) -> int:
    return abs(xi[0] - eta[0]) + abs(xi[1] - eta[1])


def dist_to_set(xi, tiles, metric=coarse_dist):
    if not tiles:
        return math.inf
    return min(metric(xi, eta) for eta in tiles)


def box_boundary_distance(xi, shape) -> int:
    """Rescaled distance from tile ``xi`` to the complement of the tile box."""
    nx, ny = shape
    return min(xi[0] + 1, xi[1] + 1, nx - xi[0], ny - xi[1])


def complement_distance(xi, tiles: set, reach: int = BAND_WIDTH + 1) -> float:
    """Rescaled Euclidean distance from ``xi`` to the nearest tile not in ``tiles``.

    Only a window of radius ``reach`` is scanned; larger distances are
    reported as ``inf``.
    """
    best = math.inf
    for dx in range(-reach, reach + 1):
        for dy in range(-reach, reach + 1):
            eta = (xi[0] + dx, xi[1] + dy)
            if eta not in tiles:
                d = math.hypot(dx, dy)
                if d < best:
                    best = d
    return best


def band_tiles(tiles: Iterable, width: int = BAND_WIDTH) -> set[tuple[int, int]]:
    """Tiles of the region within rescaled distance ``width`` of its complement."""
    tiles = set(tiles)
    return {xi for xi in tiles if complement_distance(xi, tiles, width + 1) <= width}


def peel(tiles: Iterable) -> set[tuple[int, int]]:
    """Tiles at rescaled distance exactly 1 from the set (edge neighbours)."""
    tiles = set(tiles)
    out = set()
    for x, y in tiles:
        for eta in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if eta not in tiles:
                out.add(eta)
    return out


# --- connectivity ----------------------------------------------------------

EDGE_NBRS = ((1, 0), (-1, 0), (0, 1), (0, -1))
DIAG_NBRS = EDGE_NBRS + ((1, 1), (1, -1), (-1, 1), (-1, -1))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _components(tiles, nbrs) -> list[set]:
    tiles = set(tiles)
    uf = _UnionFind(tiles)
    for x, y in tiles:
        for dx, dy in nbrs:
            eta = (x + dx, y + dy)
            if eta in tiles:
                uf.union((x, y), eta)
    groups: dict = {}
    for t in tiles:
        groups.setdefault(uf.find(t), set()).add(t)
    return sorted(groups.values(), key=lambda g: min(g))


def d_connected_components(tiles: Iterable) -> list[set]:
    """Maximal D-connected components (edge or corner contact) of a tile set."""
    return _components(tiles, DIAG_NBRS)


def connected_components(tiles: Iterable) -> list[set]:
    """Maximal components under edge adjacency only."""
    return _components(tiles, EDGE_NBRS)


def d_connected(a: Iterable, b: Iterable) -> bool:
    """True iff some tile of ``a`` touches (or equals) some tile of ``b``."""
    b = set(b)
    return any((x + dx, y + dy) in b for x, y in a for dx, dy in DIAG_NBRS + ((0, 0),))
