"""Numerical certificates: domino factors, the Peierls ledger and the ratio check.

Run with ``python3 demos/certificates.py``.
"""

from fractions import Fraction

from hardrods.checks import minimal_contours
from hardrods.contour_stats import domino_factor, peierls_ledger, ratio_check, smoothing_block
from hardrods.lattice import H

for k in (4, 6, 8):
    r = domino_factor(k, Fraction(1, 10 * k))
    print(f"domino k={k}, zk=0.1: {float(r.value):.5f} against {r.target_factor:.5f}")

# At desk scale the flip witnesses lose; at k=40, zk=0.1 every minimal contour passes.
for k, z in ((8, Fraction(1, 16)), (40, Fraction(1, 400))):
    for name, blk, spins in minimal_contours(H):
        c = peierls_ledger(blk, spins, H, k, z)
        print(f"Peierls k={k} {name:>10}: log-margin {c.log_margin:+.3f}",
              "pass" if c.passed else "fail")

c = ratio_check(smoothing_block((0, 0), 2, 2), 4, Fraction(1, 8))
print("Z(X|+)/Z(X|-) on a smoothing square:", c.extras["ratio"])
