"""Random spin and rod fixtures with q boundary conditions."""

from __future__ import annotations

import numpy as np

from .coarse import band_mask
from .lattice import BAND_WIDTH, H, V, Rod, sites_of_rod, tile_side


def random_theta_q(rng: np.random.Generator, shape, q: int, n_islands: int = 3,
                   max_size: int = 8, noise: float = 0.002, margin: int = BAND_WIDTH + 2) -> np.ndarray:
    """Sea of spin ``q`` with rectangular islands of ``-q`` or ``0`` and sparse noise.

    Islands and noise avoid the boundary band, and noise is only dropped
    outside the islands so that no contour sits inside an island.
    """
    nx, ny = shape
    s = np.full(shape, q, dtype=np.int8)
    island = np.zeros(shape, dtype=bool)
    for _ in range(n_islands):
        w, h = rng.integers(1, max_size + 1, size=2)
        x0 = rng.integers(margin, max(margin + 1, nx - margin - w + 1))
        y0 = rng.integers(margin, max(margin + 1, ny - margin - h + 1))
        val = rng.choice((-q, 0))
        s[x0:x0 + w, y0:y0 + h] = val
        island[x0 - 1:x0 + w + 1, y0 - 1:y0 + h + 1] = True
    inner = np.zeros(shape, dtype=bool)
    inner[margin:nx - margin, margin:ny - margin] = True
    drop = (rng.random(shape) < noise) & inner & ~island
    s[drop] = rng.choice(np.array((-q, 0), dtype=np.int8), size=int(drop.sum()))
    assert np.all(s[band_mask(shape)] == q)
    return s


def random_rods(rng: np.random.Generator, spins: np.ndarray, k: int, attempts: int = 2000) -> list[Rod]:
    """Hard-core-valid rods, each centered in a tile whose spin is its orientation."""
    ell = tile_side(k)
    nx, ny = spins.shape
    occupied: set = set()
    rods = []
    cand = np.argwhere(spins != 0)
    if len(cand) == 0:
        return rods
    for _ in range(attempts):
        tx, ty = cand[rng.integers(len(cand))]
        o = int(spins[tx, ty])
        r = Rod(o, int(tx * ell + rng.integers(ell)), int(ty * ell + rng.integers(ell)))
        occ = sites_of_rod(r, k)
        if occupied.isdisjoint(occ):
            occupied |= occ
            rods.append(r)
    return rods


__all__ = ["random_rods", "random_theta_q", "H", "V"]
