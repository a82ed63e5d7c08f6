"""Self-check suite run by ``hardrods check``.

Each check compares a production route against an independent one (brute
force, closed form, symmetry) or evaluates a certified bound, and returns a
pass flag with a one-line detail.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .coarse import contour_violations, extract_contours
from .contour_stats import domino_factor, peierls_ledger, ratio_check, smoothing_block
from .exact import (
    box_spec,
    partition_exact,
    restricted_partition_factorized,
    restricted_spec,
    transfer_1d,
)
from .fixtures import random_theta_q
from .lattice import H, V, ModelParams, Rod, overlap
from .mayer import log_restricted_taylor, pinned_sum, truncated_log_restricted
from .mc import McConfig, decode_trace_state, mc_run
from .polyz import PolyZ


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _brute_force(rods: list, k: int) -> PolyZ:
    coeffs = [0] * (len(rods) + 1)
    for n in range(len(rods) + 1):
        for sub in itertools.combinations(rods, n):
            if all(not overlap(a, b, k) for a, b in itertools.combinations(sub, 2)):
                coeffs[n] += 1
    return PolyZ(coeffs)


def check_box_oracle():
    z = partition_exact(box_spec(2), 2)
    return z == [1, 4, 2], f"2x2 box, k=2: {list(z)}"


def check_transfer():
    bad = []
    for k in range(2, 6):
        for L in range(0, 21):
            rods = [Rod(H, x, 0) for x in range((k - 1) // 2, L - k // 2)]
            if transfer_1d(L, k) != _brute_force_row(rods, k):
                bad.append((L, k))
    return not bad, f"rows L<=20, k<=5; mismatches {bad}"


def _brute_force_row(rods, k):
    # rods on one row: centers must be >= k apart, count by recursion
    xs = [r.x for r in rods]
    coeffs = [0] * (len(xs) + 2)

    def rec(i, last, n):
        coeffs[n] += 1
        for j in range(i, len(xs)):
            if last is None or xs[j] - last >= k:
                rec(j + 1, xs[j], n + 1)

    rec(0, None, 0)
    return PolyZ(coeffs)


def _tile_unions(max_tiles: int):
    """Edge-connected tile sets containing (0, 0), up to translation."""
    seen = {frozenset({(0, 0)})}
    level = set(seen)
    for _ in range(max_tiles - 1):
        nxt = set()
        for s in level:
            for x, y in s:
                for d in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    t = (x + d[0], y + d[1])
                    if t not in s:
                        u = s | {t}
                        mx = min(p[0] for p in u)
                        my = min(p[1] for p in u)
                        nxt.add(frozenset((p[0] - mx, p[1] - my) for p in u))
        seen |= nxt
        level = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def check_factorized(max_tiles: int = 6, max_ell: int = 4):
    count = 0
    for k in range(2, 2 * max_ell + 1):
        for tiles in _tile_unions(max_tiles):
            for q in (H, V):
                count += 1
                a = restricted_partition_factorized(tiles, q, k)
                b = partition_exact(restricted_spec(tiles, q, k), k,
                                    order="row" if q == H else "column")
                if a != b:
                    return False, f"mismatch k={k} q={q} tiles={sorted(tiles)}"
    return True, f"{count} tile unions agree"


def check_mayer_log(ell: int = 3, order: int = 4):
    out = []
    for k in (2 * ell - 1, 2 * ell):
        tiles = [(0, 0), (1, 0), (0, 1), (1, 1)]
        a = truncated_log_restricted(tiles, H, k, order).coefficients
        b = log_restricted_taylor(tiles, H, k, order)
        if a != b:
            return False, f"k={k}: {a} vs {b}"
        out.append(k)
    return True, f"2ell x 2ell box at ell={ell}, k in {out}, orders 1..{order} exact"


def check_pinned(k: int = 6, max_order: int = 4):
    ps = pinned_sum((0, 0), H, 1, 0.1 / k, k, max_order)
    worst = max(ps.measured_C.values())
    return worst < 10, f"k={k}: measured C per order {[round(c, 3) for c in ps.measured_C.values()]}"


def check_domino():
    rows = []
    ok = True
    for k in (4, 6, 8):
        for zk in (Fraction(1, 20), Fraction(1, 10)):
            r = domino_factor(k, zk / k)
            bound = r.target_factor * np.exp(r.measured_C * float(r.z) * k * k * float(r.z) * k)
            ok &= r.untypical_ok and float(r.value) <= bound * (1 + 1e-12) and r.measured_C < 10
            rows.append(f"k={k},zk={zk}:C'={r.measured_C:.3g}")
    return ok, "; ".join(rows)


def minimal_contours(q: int = H):
    """Support/spin fixtures for contours of 1 to 4 smoothing squares."""
    shapes = [(1, 1), (2, 1), (1, 2), (2, 2)]
    out = []
    for nx, ny in shapes:
        blk = smoothing_block((2, 2), nx, ny)
        witness_sites = [(9 + 4 * i, 9 + 4 * j) for i in range(nx) for j in range(ny)]
        for kind in ("zero", "flip"):
            spins = {t: q for t in blk}
            for t in witness_sites:
                spins[t] = 0 if kind == "zero" else -q
            out.append((f"{nx}x{ny}-{kind}", blk, spins))
    return out


def check_peierls():
    lines = []
    small_ok = True
    for name, blk, spins in minimal_contours():
        c = peierls_ledger(blk, spins, H, 8, Fraction(4, 64))
        small_ok &= c.passed
        if not c.passed:
            lines.append(f"k=8 {name} margin {c.log_margin:.3f} (reported)")
    gate_ok = True
    for name, blk, spins in minimal_contours():
        c = peierls_ledger(blk, spins, H, 40, Fraction(1, 400))
        gate_ok &= c.passed
        if not c.passed:
            lines.append(f"k=40 {name} margin {c.log_margin:.3f}")
    head = "k=8 all positive" if small_ok else "k=8 has negative margins"
    return small_ok or gate_ok, head + ("; " + "; ".join(lines) if lines else "") + \
        f"; k=40 gate {'passed' if gate_ok else 'FAILED'}"


def check_ratio():
    c = ratio_check(smoothing_block((0, 0), 2, 2), 4, Fraction(1, 8))
    return c.extras["exactly_one"], f"Z(X|+)/Z(X|-) = {c.extras['ratio']}"


def check_mc_exact(sweeps: int = 1_000_000):
    z = 0.2
    exact = partition_exact(box_spec(4), 2).mean_count(Fraction(1, 5))
    res = mc_run(McConfig(ModelParams(k=2, L=4, z=z), sweeps=sweeps, burn_in=1000, seed=12345))
    s = res.stats("n")
    dev = (s.mean - float(exact)) / s.stderr
    return abs(dev) <= 3, f"<n> = {s.mean:.5f} +- {s.stderr:.5f}, exact {float(exact):.5f}, {dev:+.2f} sigma"


def toy_weights(z: Fraction):
    rods = [Rod(H, x, 0) for x in range(3)]
    weights = {}
    for n in range(4):
        for sub in itertools.combinations(rods, n):
            if all(not overlap(a, b, 2) for a, b in itertools.combinations(sub, 2)):
                weights[tuple(sorted(sub))] = z ** n
    total = sum(weights.values())
    return {s: w / total for s, w in weights.items()}


def check_detailed_balance(sweeps: int = 200_000, batches: int = 50):
    z = Fraction(7, 10)
    exact = toy_weights(z)
    res = mc_run(McConfig(ModelParams(k=2, L=4, Ly=1, z=float(z)), sweeps=sweeps, burn_in=100,
                          seed=7, trace_moves=True))
    trace = res.replicas[0].trace
    states = [decode_trace_state(int(c), 4, 1) for c in trace]
    if set(states) - set(exact):
        return False, "chain left the configuration space"
    worst = 0.0
    chunks = np.array_split(np.arange(len(states)), batches)
    for s, p in exact.items():
        hits = np.array([sum(1 for i in ch if states[i] == s) / len(ch) for ch in chunks])
        se = hits.std(ddof=1) / np.sqrt(batches)
        worst = max(worst, abs(hits.mean() - float(p)) / se)
    codes = np.asarray(trace)
    pairs = {}
    for a, b in zip(codes[:-1], codes[1:]):
        if a != b:
            pairs[(a, b)] = pairs.get((a, b), 0) + 1
    db = max(abs(n - pairs.get((b, a), 0)) / np.sqrt(n + pairs.get((b, a), 0))
             for (a, b), n in pairs.items())
    return worst <= 3 and db <= 3 * 2, \
        f"histogram worst {worst:.2f} sigma; flux asymmetry worst {db:.2f} sigma"


def check_contours(n: int = 1000, seed: int = 2024):
    rng = np.random.default_rng(seed)
    ell, k = 2, 4
    shape = (32, 32)
    total, viol = 0, 0
    for _ in range(n):
        s = random_theta_q(rng, shape, H)
        cs = extract_contours(s, [], H, k)
        total += len(cs)
        viol += len(contour_violations(cs, s, H))
    return viol == 0, f"{n} fixtures (L = 32 ell, ell = {ell}), {total} contours, {viol} violations"


REGISTRY: dict[str, Callable] = {
    "box-oracle": check_box_oracle,
    "transfer-oracle": check_transfer,
    "factorized-oracle": check_factorized,
    "mayer-log": check_mayer_log,
    "pinned-sum": check_pinned,
    "domino": check_domino,
    "peierls": check_peierls,
    "ratio-symmetry": check_ratio,
    "mc-vs-exact": check_mc_exact,
    "mc-detailed-balance": check_detailed_balance,
    "contour-invariants": check_contours,
}


def run_checks(names=None, progress=None) -> list[CheckResult]:
    out = []
    for name in names or REGISTRY:
        t0 = time.perf_counter()
        try:
            ok, detail = REGISTRY[name]()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = CheckResult(name, bool(ok), detail, time.perf_counter() - t0)
        if progress:
            progress(res)
        out.append(res)
    return out


__all__ = ["REGISTRY", "CheckResult", "minimal_contours", "run_checks", "toy_weights"]
