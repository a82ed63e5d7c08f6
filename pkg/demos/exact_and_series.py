"""Exact partition functions next to the truncated cluster series.

Run with ``python3 demos/exact_and_series.py``.
"""

from fractions import Fraction

from hardrods.exact import box_spec, partition_exact, restricted_partition_factorized, transfer_1d
from hardrods.lattice import H, V
from hardrods.mayer import log_restricted_taylor, truncated_log_restricted

# The smallest box: four dimers on a 2x2 square, two ways to tile it.
print("2x2 box, k=2:", list(partition_exact(box_spec(2), 2)))

# A single row is a one-dimensional hard-rod gas.
for k in (2, 3, 4):
    print(f"1x12 row, k={k}:", list(transfer_1d(12, k)))

# A 2x2 block of tiles at ell = 3, with centers restricted to one orientation.
tiles = [(0, 0), (1, 0), (0, 1), (1, 1)]
for k in (5, 6):
    for q in (H, V):
        series = truncated_log_restricted(tiles, q, k, 4)
        exact = log_restricted_taylor(tiles, q, k, 4)
        print(f"k={k} q={q:+d} cluster series {[str(c) for c in series.coefficients]}",
              "matches" if series.coefficients == exact else "DIFFERS")

z = Fraction(1, 30)
zq = restricted_partition_factorized(tiles, H, 6)
print(f"Z^+ at z={z}: {float(zq(z)):.6f}, mean rod count {float(zq.mean_count(z)):.4f}")
