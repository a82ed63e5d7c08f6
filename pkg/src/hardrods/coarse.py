"""Coarse-graining of rod configurations and contour extraction.

Spin fields are ``int8`` arrays indexed ``spins[ix, iy]`` over tile indices.
A sampling square ``S_xi`` is the 2x2 block of tiles with lower-left corner
``xi``; smoothing squares are the aligned 4x4 blocks of tiles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy import ndimage

from .errors import MixedTile, NonUniformPeel, NotInThetaQ
from .lattice import (
    BAND_WIDTH,
    EDGE_NBRS,
    H,
    Rod,
    coarse_dist,
    coarse_dist1,
    d_connected,
    dist_to_set,
    overlap,
    tile_of,
    tile_side,
)

LABEL_POLICIES = ("zero", "match-neighbor")
_EIGHT = np.ones((3, 3), dtype=bool)
_FOUR = ndimage.generate_binary_structure(2, 1)


@dataclass
class SpinConfig:
    spins: np.ndarray  # int8, shape (nx, ny)
    from_rods: np.ndarray  # bool, True where the spin is induced by rods

    @property
    def shape(self) -> tuple[int, int]:
        return self.spins.shape

    def __getitem__(self, xi) -> int:
        return int(self.spins[xi[0], xi[1]])


def band_mask(shape, width: int = BAND_WIDTH) -> np.ndarray:
    """Tiles within rescaled distance ``width`` of the outside of a tile box."""
    nx, ny = shape
    ix = np.arange(nx)[:, None]
    iy = np.arange(ny)[None, :]
    d = np.minimum(np.minimum(ix + 1, iy + 1), np.minimum(nx - ix, ny - iy))
    return d <= width


def spins_from_config(rods: Iterable, k: int, shape, label_policy: str = "zero",
                      q: int | None = None) -> SpinConfig:
    """Spin field induced by a hard-core-valid rod configuration.

    ``zero`` labels every empty tile 0.  ``match-neighbor`` gives empty tiles in
    the boundary band the label ``q`` (when given) and fills the remaining
    empty tiles by breadth-first propagation from labelled tiles; tiles that
    cannot be reached are labelled 0.
    """
    if label_policy not in LABEL_POLICIES:
        raise ValueError(f"label_policy must be one of {LABEL_POLICIES}")
    ell = tile_side(k)
    spins = np.zeros(shape, dtype=np.int8)
    for r in rods:
        r = Rod(*r)
        ix, iy = tile_of(r.center, ell)
        cur = spins[ix, iy]
        if cur and cur != r.orientation:
            raise MixedTile(f"tile {(ix, iy)} holds rods of both orientations")
        spins[ix, iy] = r.orientation
    from_rods = spins != 0
    if label_policy == "match-neighbor":
        if q is not None:
            spins[band_mask(shape) & ~from_rods] = q
        todo = deque(zip(*np.nonzero(spins)))
        nx, ny = shape
        while todo:
            x, y = todo.popleft()
            for dx, dy in EDGE_NBRS:
                u, v = x + dx, y + dy
                if 0 <= u < nx and 0 <= v < ny and spins[u, v] == 0:
                    spins[u, v] = spins[x, y]
                    todo.append((u, v))
    return SpinConfig(spins, from_rods)


def _as_array(sigma) -> np.ndarray:
    return sigma.spins if isinstance(sigma, SpinConfig) else np.asarray(sigma)


def classify_sampling_square(sigma, xi, q: int | None = None) -> int | None:
    """Magnetization (+1 or -1) of a good sampling square, ``None`` if bad.

    Tiles of ``S_xi`` outside the box are ignored, or read as spin ``q`` when
    ``q`` is given.
    """
    s = _as_array(sigma)
    nx, ny = s.shape
    vals = []
    for dx in (0, 1):
        for dy in (0, 1):
            u, v = xi[0] + dx, xi[1] + dy
            if 0 <= u < nx and 0 <= v < ny:
                vals.append(int(s[u, v]))
            elif q is not None:
                vals.append(q)
    m = vals[0]
    if m != 0 and all(v == m for v in vals):
        return m
    return None


def bad_squares(sigma, q: int | None = None) -> np.ndarray:
    """Boolean array over xi: True where ``S_xi`` is bad."""
    s = _as_array(sigma).astype(np.int8)
    fill = 2 if q is None else q  # 2 marks "no tile"
    p = np.pad(s, ((0, 1), (0, 1)), constant_values=fill)
    blocks = [p[:-1, :-1], p[1:, :-1], p[:-1, 1:], p[1:, 1:]]
    ref = blocks[0]
    good = ref != 0
    for b in blocks[1:]:
        good &= (b == ref) | (b == 2)
    return ~good


def bad_region(sigma, q: int | None = None) -> np.ndarray:
    """``B(sigma)``: tile mask of the union of bad sampling squares."""
    bad = bad_squares(sigma, q)
    nx, ny = bad.shape
    out = bad.copy()
    out[1:, :] |= bad[:-1, :]
    out[:, 1:] |= bad[:, :-1]
    out[1:, 1:] |= bad[:-1, :-1]
    return out


def smooth(mask: np.ndarray) -> np.ndarray:
    """Union of the aligned 4x4 tile blocks that meet ``mask``."""
    nx, ny = mask.shape
    bx, by = -(-nx // 4), -(-ny // 4)
    p = np.zeros((4 * bx, 4 * by), dtype=bool)
    p[:nx, :ny] = mask
    hit = p.reshape(bx, 4, by, 4).any(axis=(1, 3))
    return np.repeat(np.repeat(hit, 4, axis=0), 4, axis=1)[:nx, :ny]


def smoothed_bad(sigma, q: int | None = None) -> np.ndarray:
    """``B-bar(sigma)``: smoothing squares intersecting ``B(sigma)``."""
    return smooth(bad_region(sigma, q))


def mask_to_tiles(mask: np.ndarray) -> set:
    return {(int(x), int(y)) for x, y in zip(*np.nonzero(mask))}


def in_theta_q(sigma, q: int) -> bool:
    s = _as_array(sigma)
    return bool(np.all(s[band_mask(s.shape)] == q))


@dataclass
class Contour:
    """A contour: support, spins and rods on it, and peel magnetizations."""

    support: frozenset
    spins: dict
    rods: tuple
    m_ext: int
    m_int: tuple
    q: int
    peel: frozenset
    ext_peel: frozenset
    int_peels: tuple
    interiors: tuple
    exterior: frozenset = field(repr=False)

    @property
    def holes(self) -> int:
        return len(self.interiors)

    def to_dict(self) -> dict:
        return {
            "support": sorted(map(list, self.support)),
            "spins": [[x, y, s] for (x, y), s in sorted(self.spins.items())],
            "rods": [list(r) for r in self.rods],
            "m_ext": self.m_ext,
            "m_int": list(self.m_int),
            "q": self.q,
            "peel": sorted(map(list, self.peel)),
            "interiors": [sorted(map(list, i)) for i in self.interiors],
        }


def _peel_magnetization(s: np.ndarray, tiles) -> int:
    vals = {int(s[x, y]) for x, y in tiles}
    if len(vals) != 1 or 0 in vals:
        raise NonUniformPeel(f"peel spins {sorted(vals)} are not a single +-1 value")
    return vals.pop()


def extract_contours(sigma, rods: Iterable, q: int, k: int, check: bool = True) -> list[Contour]:
    """Contours of a spin configuration with q boundary conditions."""
    s = _as_array(sigma)
    if check and not in_theta_q(s, q):
        raise NotInThetaQ("spins within rescaled distance 5 of the boundary must equal q")
    ell = tile_side(k)
    rods = [Rod(*r) for r in rods]
    bbar = smoothed_bad(s, q)
    labels, n = ndimage.label(bbar, structure=_EIGHT)
    nx, ny = s.shape
    edge = np.zeros_like(bbar)
    edge[0, :] = edge[-1, :] = edge[:, 0] = edge[:, -1] = True
    out = []
    for lab in range(1, n + 1):
        gamma = labels == lab
        comp, nc = ndimage.label(~gamma, structure=_FOUR)
        ext_labels = set(np.unique(comp[edge & ~gamma])) - {0}
        exterior = np.isin(comp, list(ext_labels))
        interiors = [comp == c for c in range(1, nc + 1) if c not in ext_labels]
        peel_mask = ndimage.binary_dilation(gamma, structure=_FOUR) & ~gamma
        ext_peel = mask_to_tiles(peel_mask & exterior)
        int_peels = [mask_to_tiles(peel_mask & i) for i in interiors]
        support = mask_to_tiles(gamma)
        out.append(Contour(
            support=frozenset(support),
            spins={t: int(s[t]) for t in support},
            rods=tuple(r for r in rods if tile_of(r.center, ell) in support),
            m_ext=_peel_magnetization(s, ext_peel),
            m_int=tuple(_peel_magnetization(s, p) for p in int_peels),
            q=q,
            peel=frozenset(mask_to_tiles(peel_mask)),
            ext_peel=frozenset(ext_peel),
            int_peels=tuple(frozenset(p) for p in int_peels),
            interiors=tuple(frozenset(mask_to_tiles(i)) for i in interiors),
            exterior=frozenset(mask_to_tiles(exterior)),
        ))
    return out


def contour_violations(contours: list[Contour], sigma, q: int) -> list[str]:
    """Structural checks on an extraction; an empty list means all hold."""
    s = _as_array(sigma)
    bad = bad_region(s, q)
    bad_sq = bad_squares(s, q)
    problems = []
    for i, c in enumerate(contours):
        if c.m_ext != q and not any(c.support <= inner for d in contours for inner in d.interiors):
            problems.append(f"contour {i}: external contour with m_ext={c.m_ext}")
        blocks = {(x // 4, y // 4) for x, y in c.support}
        for bx, by in blocks:
            if not bad[4 * bx:4 * bx + 4, 4 * by:4 * by + 4].any():
                problems.append(f"contour {i}: smoothing square {(bx, by)} has no bad witness")
        for x, y in c.peel:
            for ox in (-1, 0):
                for oy in (-1, 0):
                    u, v = x + ox, y + oy
                    if 0 <= u < s.shape[0] and 0 <= v < s.shape[1] and bad_sq[u, v]:
                        problems.append(f"contour {i}: bad sampling square {(u, v)} meets the peel")
        for j in range(i + 1, len(contours)):
            if d_connected(c.peel, contours[j].peel):
                problems.append(f"contours {i},{j}: peels are D-connected")
    return problems


# --- A and C sets, crossing indicators -------------------------------------


def _line_coord(q: int) -> int:
    # j(+) = 1, j(-) = 2 (1-based); a_set filters on coordinate j(-q)
    return 1 if q == H else 0


def a_tiles(contour: Contour, xi) -> set:
    """Coarse set ``a_gamma(xi)`` for a peel tile ``xi``."""
    xi = tuple(xi)
    j = _line_coord(contour.q)
    out = {xi}
    for d in (-1, 1):
        eta = list(xi)
        eta[1 - j] += d
        eta = tuple(eta)
        if eta[j] == xi[j] and dist_to_set(eta, contour.support, coarse_dist1) == 2:
            out.add(eta)
    return out


def c_tiles(contour: Contour, xi) -> set:
    """Tiles of the support within rescaled distance 2 of ``xi``."""
    return {eta for eta in contour.support if coarse_dist(eta, xi) <= 2}


def a_set(contour: Contour, xi, k: int) -> set:
    """Sites of ``A_gamma(Delta_xi)``."""
    from .lattice import sites_of_tiles

    return sites_of_tiles(a_tiles(contour, xi), tile_side(k))


def c_set(contour: Contour, xi, k: int) -> set:
    from .lattice import sites_of_tiles

    return sites_of_tiles(c_tiles(contour, xi), tile_side(k))


def _has_center_in(R, tiles, ell) -> bool:
    return any(tile_of(Rod(*r).center, ell) in tiles for r in R)


def f_delta(xi, R, contour: Contour, k: int) -> int:
    """1 if R has a rod in ``A_gamma(Delta)`` and one in ``C_gamma(Delta)``."""
    ell = tile_side(k)
    return int(_has_center_in(R, a_tiles(contour, xi), ell)
               and _has_center_in(R, c_tiles(contour, xi), ell))


def g_delta(xi, R, contour: Contour, k: int) -> int:
    """1 if R hits the frozen rods, has a rod in A, and the frozen rods have one in C."""
    ell = tile_side(k)
    if not _has_center_in(R, a_tiles(contour, xi), ell):
        return 0
    if not _has_center_in(contour.rods, c_tiles(contour, xi), ell):
        return 0
    return int(any(overlap(Rod(*r), g, k) for r in set(R) for g in contour.rods))


def F_delta(xi, R, contour: Contour, k: int) -> int:
    f = f_delta(xi, R, contour, k)
    if tuple(xi) in contour.ext_peel:
        return f + g_delta(xi, R, contour, k) * (1 - f)
    return f
