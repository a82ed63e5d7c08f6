"""Sample a plus-boundary box, then coarse-grain one snapshot into contours.

Run with ``python3 demos/contours_from_mc.py``.
"""

from hardrods.coarse import contour_violations, extract_contours, spins_from_config
from hardrods.lattice import H, ModelParams, tile_side
from hardrods.mc import McConfig, grid_to_rods, mc_run

k, L = 4, 64
cfg = McConfig(ModelParams(k=k, L=L, z=0.25, boundary="plus"), sweeps=5000, burn_in=1000,
               thin=50, seed=11, store_grids=True)
res = mc_run(cfg)
order = res.stats("order")
print(f"order parameter {order.mean:.3f} +- {order.stderr:.3f} (tau {order.tau:.1f})")

grid = res.replicas[0].grids[-1]
rods = grid_to_rods(grid)
ntiles = L // tile_side(k)
sigma = spins_from_config(rods, k, (ntiles, ntiles), "match-neighbor", q=H)
contours = extract_contours(sigma, rods, H, k)
print(f"last snapshot: {len(rods)} rods, {len(contours)} contours")
for c in contours:
    print(f"  support {len(c.support)} tiles, exterior label {c.m_ext:+d}, holes {c.holes}")
print("violations:", contour_violations(contours, sigma, H) or "none")
