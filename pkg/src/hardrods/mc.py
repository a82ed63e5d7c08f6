"""Grand-canonical Monte Carlo for hard rods on the square lattice.

The chain lives on rod configurations whose centers lie in an allowed set:
for open boundaries every site of a rod must fit in the box, for q boundary
conditions rods are centered in the box (they may stick out) and rods
centered in a band tile must have orientation q.  Moves are insertion and
deletion with the usual grand-canonical acceptance, plus optional
translations by one site along the rod axis.
"""

from __future__ import annotations

import csv
import io
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numba
import numpy as np

from .coarse import band_mask
from .errors import InvalidParams
from .lattice import H, V, ModelParams, Rod, rod_offsets, tile_side

EMPTY, HCELL, VCELL = 0, 1, 2  # center-grid codes


def allowed_centers(params: ModelParams) -> np.ndarray:
    """Boolean mask ``[orientation index, x, y]`` (index 0 = H, 1 = V)."""
    k, W, Hh = params.k, params.width, params.height
    a, b = rod_offsets(k)
    mask = np.zeros((2, W, Hh), dtype=np.bool_)
    if params.boundary == "open":
        mask[0, a:W - b, :] = True
        mask[1, :, a:Hh - b] = True
        return mask
    mask[:] = True
    ell = tile_side(k)
    band = band_mask(params.tile_shape)
    site_band = np.repeat(np.repeat(band, ell, axis=0), ell, axis=1)[:W, :Hh]
    wrong = 1 if params.q == H else 0
    mask[wrong][site_band] = False
    return mask


@numba.njit(cache=True, nogil=True)
def _fits(occ, o, x, y, a, b, pad):
    if o == 0:
        for t in range(-a, b + 1):
            if occ[x + t + pad, y + pad]:
                return False
    else:
        for t in range(-a, b + 1):
            if occ[x + pad, y + t + pad]:
                return False
    return True


@numba.njit(cache=True, nogil=True)
def _paint(occ, o, x, y, a, b, pad, val):
    if o == 0:
        for t in range(-a, b + 1):
            occ[x + t + pad, y + pad] = val
    else:
        for t in range(-a, b + 1):
            occ[x + pad, y + t + pad] = val


@numba.njit(cache=True, nogil=True)
def _check(occ, ro, rx, ry, n, allowed, a, b, pad):
    ref = np.zeros_like(occ)
    for i in range(n):
        if not allowed[ro[i], rx[i], ry[i]]:
            return False
        if not _fits(ref, ro[i], rx[i], ry[i], a, b, pad):
            return False
        _paint(ref, ro[i], rx[i], ry[i], a, b, pad, 1)
    return np.array_equal(ref, occ)


@numba.njit(cache=True, nogil=True)
def _run_chain(seed, z, allowed, a, b, n_sweeps, burn_in, thin, p_ins, p_tr,
               store_grids, trace_moves, debug):
    """Returns (nh, nv, grids, trace, accepted, status)."""
    np.random.seed(seed)
    _, W, Hh = allowed.shape
    pad = a + b + 1
    occ = np.zeros((W + 2 * pad, Hh + 2 * pad), dtype=np.int8)
    cap = 2 * W * Hh + 1
    ro = np.empty(cap, dtype=np.int64)
    rx = np.empty(cap, dtype=np.int64)
    ry = np.empty(cap, dtype=np.int64)
    n = 0
    nh = 0
    slots = 2 * W * Hh
    sweep_len = W * Hh
    n_samples = (n_sweeps - burn_in) // thin if n_sweeps > burn_in else 0
    out_h = np.zeros(n_samples, dtype=np.int64)
    out_v = np.zeros(n_samples, dtype=np.int64)
    grids = np.zeros((n_samples if store_grids else 0, W, Hh), dtype=np.int8)
    total_moves = n_sweeps * sweep_len if trace_moves else 0
    trace = np.zeros(total_moves, dtype=np.int64)
    accepted = np.zeros(3, dtype=np.int64)
    s_idx = 0
    m_idx = 0
    for sweep in range(n_sweeps):
        for _ in range(sweep_len):
            u = np.random.random()
            if u < p_ins:
                slot = np.random.randint(slots)
                o = slot // (W * Hh)
                rem = slot % (W * Hh)
                x = rem // Hh
                y = rem % Hh
                if allowed[o, x, y] and _fits(occ, o, x, y, a, b, pad):
                    if np.random.random() * (n + 1) < z * slots:
                        _paint(occ, o, x, y, a, b, pad, 1)
                        ro[n] = o
                        rx[n] = x
                        ry[n] = y
                        n += 1
                        if o == 0:
                            nh += 1
                        accepted[0] += 1
            elif u < 2 * p_ins:
                if n > 0:
                    i = np.random.randint(n)
                    if np.random.random() * z * slots < n:
                        o = ro[i]
                        _paint(occ, o, rx[i], ry[i], a, b, pad, 0)
                        if o == 0:
                            nh -= 1
                        n -= 1
                        ro[i] = ro[n]
                        rx[i] = rx[n]
                        ry[i] = ry[n]
                        accepted[1] += 1
            elif n > 0:
                i = np.random.randint(n)
                o = ro[i]
                step = 1 if np.random.random() < 0.5 else -1
                x = rx[i] + step if o == 0 else rx[i]
                y = ry[i] + step if o == 1 else ry[i]
                if 0 <= x < W and 0 <= y < Hh and allowed[o, x, y]:
                    _paint(occ, o, rx[i], ry[i], a, b, pad, 0)
                    if _fits(occ, o, x, y, a, b, pad):
                        rx[i] = x
                        ry[i] = y
                        accepted[2] += 1
                    _paint(occ, o, rx[i], ry[i], a, b, pad, 1)
            if trace_moves:
                code = 0
                for j in range(n):
                    code |= 1 << (ro[j] * W * Hh + rx[j] * Hh + ry[j])
                trace[m_idx] = code
                m_idx += 1
        if debug and not _check(occ, ro, rx, ry, n, allowed, a, b, pad):
            return out_h, out_v, grids, trace, accepted, 1
        if sweep >= burn_in and (sweep - burn_in) % thin == 0 and s_idx < n_samples:
            out_h[s_idx] = nh
            out_v[s_idx] = n - nh
            if store_grids:
                for j in range(n):
                    grids[s_idx, rx[j], ry[j]] = ro[j] + 1
            s_idx += 1
    return out_h, out_v, grids, trace, accepted, 0


@dataclass
class McConfig:
    params: ModelParams
    sweeps: int = 10_000
    burn_in: int = 1_000
    thin: int = 1
    seed: int = 0
    moves: tuple = (1.0, 1.0, 0.5)  # insert, delete, translate
    replicas: int = 1
    store_grids: bool = False
    trace_moves: bool = False
    debug: bool = False
    workers: int = 1

    def __post_init__(self):
        ins, dele, tr = self.moves
        if ins != dele:
            raise InvalidParams("insert and delete weights must be equal")
        if min(self.moves) < 0 or ins == 0:
            raise InvalidParams("move weights must be non-negative with insert > 0")
        if self.sweeps <= self.burn_in:
            raise InvalidParams("sweeps must exceed burn-in")
        if self.thin < 1 or self.replicas < 1:
            raise InvalidParams("thin and replicas must be positive")
        if self.trace_moves and 2 * self.params.width * self.params.height > 62:
            raise InvalidParams("move tracing is only available for systems with <= 31 sites")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = {k: str(v) if k == "z" else v for k, v in asdict(self.params).items()}
        return d


@dataclass
class McSamples:
    """One replica: per-sample rod counts and, optionally, center grids."""

    seed: int
    n_h: np.ndarray
    n_v: np.ndarray
    grids: np.ndarray | None = None
    trace: np.ndarray | None = None
    acceptance: dict = field(default_factory=dict)

    @property
    def n(self) -> np.ndarray:
        return self.n_h + self.n_v

    @property
    def order(self) -> np.ndarray:
        tot = self.n
        out = np.zeros(len(tot))
        nz = tot > 0
        out[nz] = (self.n_h[nz] - self.n_v[nz]) / tot[nz]
        return out


@dataclass
class SampleStats:
    mean: float
    variance: float
    tau: float
    stderr: float
    n_samples: int

    def to_dict(self) -> dict:
        return asdict(self)


def autocorr_time(x, c: float = 5.0) -> float:
    """Integrated autocorrelation time with self-consistent windowing."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 2:
        return 0.5
    d = x - x.mean()
    var = d @ d / n
    if var == 0:
        return 0.5
    m = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(d, m)
    acf = np.fft.irfft(f * np.conj(f), m)[:n] / (n * var)
    tau = 0.5
    for t in range(1, n):
        tau += acf[t]
        if t >= c * tau:
            break
    return max(tau, 0.5)


def sample_stats(x) -> SampleStats:
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n == 0:
        return SampleStats(math.nan, math.nan, math.nan, math.nan, 0)
    tau = autocorr_time(x)
    var = float(x.var())
    return SampleStats(float(x.mean()), var, float(tau), math.sqrt(var * 2 * tau / n), n)


def pool_stats(per_replica: list[SampleStats]) -> SampleStats:
    """Combine independent replicas: mean of means, errors in quadrature."""
    r = len(per_replica)
    if r == 1:
        return per_replica[0]
    mean = sum(s.mean for s in per_replica) / r
    se = math.sqrt(sum(s.stderr ** 2 for s in per_replica)) / r
    return SampleStats(mean, sum(s.variance for s in per_replica) / r,
                       sum(s.tau for s in per_replica) / r, se,
                       sum(s.n_samples for s in per_replica))


@dataclass
class McResult:
    config: McConfig
    replicas: list

    def stats(self, observable: str = "n") -> SampleStats:
        return pool_stats([sample_stats(getattr(s, observable)) for s in self.replicas])

    def summary(self) -> dict:
        return {obs: self.stats(obs).to_dict() for obs in ("n", "n_h", "n_v", "order")}


def replica_seeds(seed: int, replicas: int) -> list[int]:
    children = np.random.SeedSequence(seed).spawn(replicas)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


def _run_replica(cfg: McConfig, seed: int) -> McSamples:
    p = cfg.params
    allowed = allowed_centers(p)
    a, b = rod_offsets(p.k)
    ins, _, tr = cfg.moves
    tot = 2 * ins + tr
    nh, nv, grids, trace, acc, status = _run_chain(
        seed, float(p.z), allowed, a, b, cfg.sweeps, cfg.burn_in, cfg.thin,
        ins / tot, tr / tot, cfg.store_grids, cfg.trace_moves, cfg.debug)
    if status:
        raise RuntimeError("chain visited an invalid configuration")
    return McSamples(seed, nh, nv, grids if cfg.store_grids else None,
                     trace if cfg.trace_moves else None,
                     {"insert": int(acc[0]), "delete": int(acc[1]), "translate": int(acc[2])})


def mc_run(cfg: McConfig) -> McResult:
    """Run all replicas; threads are used when ``workers > 1``."""
    seeds = replica_seeds(cfg.seed, cfg.replicas)
    if cfg.workers > 1 and cfg.replicas > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            reps = list(pool.map(lambda s: _run_replica(cfg, s), seeds))
    else:
        reps = [_run_replica(cfg, s) for s in seeds]
    return McResult(cfg, reps)


# --- estimators ------------------------------------------------------------


def order_parameter(sample) -> float:
    """``(N_H - N_V) / (N_H + N_V)``; 0 for the empty configuration."""
    if isinstance(sample, np.ndarray):
        nh = int(np.count_nonzero(sample == HCELL))
        nv = int(np.count_nonzero(sample == VCELL))
    else:
        nh = sum(1 for r in sample if Rod(*r).orientation == H)
        nv = sum(1 for r in sample if Rod(*r).orientation == V)
    return 0.0 if nh + nv == 0 else (nh - nv) / (nh + nv)


def _grids(samples) -> np.ndarray:
    if isinstance(samples, McResult):
        return np.concatenate([s.grids for s in samples.replicas])
    if isinstance(samples, McSamples):
        return samples.grids
    return np.asarray(samples)


def _tile_view(grids, xi, k):
    ell = tile_side(k)
    return grids[:, xi[0] * ell:(xi[0] + 1) * ell, xi[1] * ell:(xi[1] + 1) * ell]


def _stats_over(samples, series_fn) -> SampleStats:
    if isinstance(samples, McResult):
        return pool_stats([sample_stats(series_fn(s.grids)) for s in samples.replicas])
    return sample_stats(series_fn(_grids(samples)))


@dataclass
class ChiEstimate:
    chi: SampleStats
    empty_fraction: SampleStats


def estimate_chi(samples, xi0, q: int, k: int) -> ChiEstimate:
    """Fraction of samples whose tile ``xi0`` holds a rod of orientation ``-q``."""
    wrong = VCELL if q == H else HCELL

    def chi(g):
        return (_tile_view(g, xi0, k) == wrong).any(axis=(1, 2)).astype(float)

    def empty(g):
        return (_tile_view(g, xi0, k) == EMPTY).all(axis=(1, 2)).astype(float)

    return ChiEstimate(_stats_over(samples, chi), _stats_over(samples, empty))


def estimate_density(samples, x, orientation: int | None = None) -> SampleStats:
    """Mean of ``n_x`` (1 iff a rod is centered at ``x``).

    With ``orientation`` only rods of that orientation are counted.
    """
    if orientation is None:
        return _stats_over(samples, lambda g: (g[:, x[0], x[1]] != EMPTY).astype(float))
    code = HCELL if orientation == H else VCELL
    return _stats_over(samples, lambda g: (g[:, x[0], x[1]] == code).astype(float))


@dataclass
class PairEstimate:
    pair: SampleStats
    connected: float
    connected_err: float


def estimate_pair(samples, x, y) -> PairEstimate:
    g = _grids(samples)
    nx = (g[:, x[0], x[1]] != EMPTY).astype(float)
    ny = (g[:, y[0], y[1]] != EMPTY).astype(float)
    pair = _stats_over(samples, lambda gg: ((gg[:, x[0], x[1]] != EMPTY)
                                            & (gg[:, y[0], y[1]] != EMPTY)).astype(float))
    conn = sample_stats(nx * ny - nx * ny.mean() - ny * nx.mean())
    return PairEstimate(pair, conn.mean + nx.mean() * ny.mean(), conn.stderr)


@dataclass
class DecayFit:
    distances: np.ndarray
    correlation: np.ndarray
    xi_fit: float
    amplitude: float


def correlation_decay(samples, row: int, x_range: tuple, max_r: int, axis: int = 0) -> DecayFit:
    """Connected density correlation along a line, averaged over start sites, with
    an exponential fit ``C(r) ~ A exp(-r / xi_fit)`` on the positive part."""
    g = (_grids(samples) != EMPTY).astype(float)
    line = g[:, :, row] if axis == 0 else g[:, row, :]
    lo, hi = x_range
    rs = np.arange(1, max_r + 1)
    cs = np.empty(len(rs))
    rho = line[:, lo:hi].mean(axis=0)
    for i, r in enumerate(rs):
        xs = np.arange(lo, hi - r)
        joint = (line[:, xs] * line[:, xs + r]).mean(axis=0)
        cs[i] = np.mean(joint - rho[xs - lo] * rho[xs + r - lo])
    pos = cs > 0
    if pos.sum() >= 2:
        slope, icpt = np.polyfit(rs[pos], np.log(cs[pos]), 1)
        xi = -1 / slope if slope < 0 else math.inf
        amp = math.exp(icpt)
    else:
        xi, amp = math.nan, math.nan
    return DecayFit(rs, cs, xi, amp)


# --- output ----------------------------------------------------------------


def samples_csv(result: McResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["replica", "seed", "sample", "n_h", "n_v", "n", "order"])
    for r, s in enumerate(result.replicas):
        for i, (h, v, o) in enumerate(zip(s.n_h, s.n_v, s.order)):
            w.writerow([r, s.seed, i, int(h), int(v), int(h + v), f"{o:.6f}"])
    return buf.getvalue()


def stats_csv(rows: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["observable", "mean", "stderr", "tau", "variance", "n_samples"])
    for name, s in rows.items():
        w.writerow([name, f"{s.mean:.10g}", f"{s.stderr:.6g}", f"{s.tau:.4g}",
                    f"{s.variance:.6g}", s.n_samples])
    return buf.getvalue()


_SYMBOL = {EMPTY: ".", HCELL: "h", VCELL: "v"}
_CODE = {v: k for k, v in _SYMBOL.items()}


def encode_snapshot(grid: np.ndarray, k: int, q: int = 0) -> str:
    """Run-length text form of a center grid, one line per lattice row."""
    W, Hh = grid.shape
    lines = [f"# hardrods-snapshot v1 k={k} width={W} height={Hh} q={q}"]
    for y in range(Hh):
        row = grid[:, y]
        toks = []
        i = 0
        while i < W:
            j = i
            while j < W and row[j] == row[i]:
                j += 1
            cnt = j - i
            toks.append((str(cnt) if cnt > 1 else "") + _SYMBOL[int(row[i])])
            i = j
        lines.append("".join(toks))
    return "\n".join(lines) + "\n"


def decode_snapshot(text: str) -> tuple[np.ndarray, dict]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    meta = dict(kv.split("=") for kv in lines[0].split()[3:])
    meta = {k: int(v) for k, v in meta.items()}
    W, Hh = meta["width"], meta["height"]
    grid = np.zeros((W, Hh), dtype=np.int8)
    for y, ln in enumerate(lines[1:1 + Hh]):
        x = 0
        for cnt, sym in re.findall(r"(\d*)([.hv])", ln):
            c = int(cnt) if cnt else 1
            grid[x:x + c, y] = _CODE[sym]
            x += c
        if x != W:
            raise ValueError(f"row {y} has {x} cells, expected {W}")
    return grid, meta


def grid_to_rods(grid: np.ndarray) -> list[Rod]:
    xs, ys = np.nonzero(grid)
    return [Rod(H if grid[x, y] == HCELL else V, int(x), int(y)) for x, y in zip(xs, ys)]


def rods_to_grid(rods, shape) -> np.ndarray:
    g = np.zeros(shape, dtype=np.int8)
    for r in rods:
        r = Rod(*r)
        g[r.x, r.y] = HCELL if r.orientation == H else VCELL
    return g


def decode_trace_state(code: int, width: int, height: int) -> tuple:
    """Sorted rods of a traced state code."""
    rods = []
    per = width * height
    for slot in range(2 * per):
        if code >> slot & 1:
            o, rem = divmod(slot, per)
            rods.append(Rod(H if o == 0 else V, rem // height, rem % height))
    return tuple(sorted(rods))
