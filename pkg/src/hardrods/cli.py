"""Command-line entry point: ``hardrods <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BudgetExceeded, ConfigError, HardRodsError

COMMANDS = ("exact", "series", "contours", "peierls", "ratio", "mc", "check")
EXIT_CONFIG, EXIT_BUDGET, EXIT_ERROR, EXIT_CHECK = 2, 3, 4, 1
SCHEMA_VERSION = 1

# options shared by all commands, with their parsers and defaults
_COMMON = {
    "k": (int, 2),
    "z": (str, "0.1"),
    "L": (int, 4),
    "bc": (str, "open"),
    "sweeps": (int, 10_000),
    "burn_in": (int, 1_000),
    "seed": (int, 0),
    "replicas": (int, 1),
    "budget": (int, 10**9),
    "out": (str, "hardrods-out"),
    "mmax": (int, 4),
    "region": (str, None),
    "square": (str, None),
    "snapshot": (str, None),
    "snapshots": (int, 0),
    "q": (str, None),
    "witness": (str, "both"),
    "names": (str, None),
}


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.__dict__["options"][name]
        except KeyError as exc:
            raise AttributeError(name) from exc

    def to_dict(self) -> dict:
        return {"command": self.command, "options": dict(sorted(self.options.items())),
                "version": __version__}


def parse_fraction(text: str) -> Fraction:
    """Exact value of a decimal (``0.0625``) or a ratio (``1/16``)."""
    text = str(text).strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(Decimal(num)) / Fraction(Decimal(den))
        return Fraction(Decimal(text))
    except (InvalidOperation, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse {text!r} as an exact number") from exc


def read_config_file(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _COMMON:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        out[key] = val
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    raw = read_config_file(args.config) if args.config else {}
    for key in _COMMON:
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val  # flags win
    opts = {}
    for key, (typ, default) in _COMMON.items():
        val = raw.get(key, default)
        try:
            opts[key] = typ(val) if val is not None else None
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {val!r}") from exc
    if opts["bc"] not in ("open", "plus", "minus"):
        raise ConfigError("--bc must be open, plus or minus")
    parse_fraction(opts["z"])
    return RunConfig(args.command, opts)


def _dims(text: str, what: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)x(\d+)(?:-tiles|-squares)?", text or "")
    if not m:
        raise ConfigError(f"{what} must look like WxH, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _q_of(cfg: RunConfig) -> int:
    if cfg.q is not None:
        return {"plus": 1, "+": 1, "1": 1, "+1": 1, "minus": -1, "-": -1, "-1": -1}[cfg.q]
    return -1 if cfg.bc == "minus" else 1


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    p = out / name
    p.write_text(text)
    return p


def _json(cfg: RunConfig, payload: dict) -> str:
    doc = {"schema": SCHEMA_VERSION, "run_config": cfg.to_dict(), **payload}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _csv(cfg: RunConfig, header: list, rows: list) -> str:
    buf = io.StringIO()
    buf.write("# run_config: " + json.dumps(cfg.to_dict(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _plot(fn, *args) -> None:
    """Plots are a convenience; any failure is reported and ignored."""
    try:
        fn(*args)
    except Exception as exc:  # noqa: BLE001
        print(f"warning: plot skipped ({type(exc).__name__}: {exc})", file=sys.stderr)


# --- commands --------------------------------------------------------------


def cmd_exact(cfg: RunConfig) -> int:
    from .exact import box_spec, conditioned_partition, partition_exact
    from .lattice import ModelParams

    w, h = _dims(cfg.region, "--region") if cfg.region else (cfg.L, cfg.L)
    if cfg.bc == "open":
        poly = partition_exact(box_spec(w, h), cfg.k, budget=cfg.budget)
    else:
        params = ModelParams(cfg.k, w, boundary=cfg.bc, Ly=h)
        poly = conditioned_partition(params, budget=cfg.budget)
    z = parse_fraction(cfg.z)
    payload = {"polynomial": [str(c) for c in poly], "degree": poly.degree,
               "value_at_z": str(poly(z)), "mean_count": float(poly.mean_count(z))}
    p = _write(Path(cfg.out), "exact.json", _json(cfg, payload))
    print(json.dumps([int(c) for c in poly]))
    print(f"wrote {p}")
    return 0


def cmd_series(cfg: RunConfig) -> int:
    from .lattice import tile_side
    from .mayer import log_restricted_taylor, truncated_log_restricted

    nx, ny = _dims(cfg.region or "2x2", "--region")
    tiles = [(i, j) for i in range(nx) for j in range(ny)]
    q = _q_of(cfg)
    series = truncated_log_restricted(tiles, q, cfg.k, cfg.mmax)
    oracle = log_restricted_taylor(tiles, q, cfg.k, cfg.mmax)
    rows = [[m, f"{a.numerator}/{a.denominator}", f"{b.numerator}/{b.denominator}", a == b]
            for m, (a, b) in enumerate(zip(series.coefficients, oracle))]
    text = _csv(cfg, ["order", "cluster_sum", "log_exact", "match"], rows)
    p = _write(Path(cfg.out), "series.csv", text)
    print(f"tiles {nx}x{ny}, ell={tile_side(cfg.k)}, all orders match: {all(r[3] for r in rows)}")
    print(f"wrote {p}")
    return 0 if all(r[3] for r in rows) else EXIT_CHECK


def _tile_map(path: Path, spins, contours) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(spins.T, origin="lower", cmap="coolwarm", vmin=-1, vmax=1)
    for c in contours:
        xs, ys = zip(*c.support)
        ax.scatter(xs, ys, s=4, c="k", marker="s")
    ax.set_xlabel("tile x")
    ax.set_ylabel("tile y")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_contours(cfg: RunConfig) -> int:
    from .coarse import extract_contours, spins_from_config
    from .lattice import tile_side
    from .mc import decode_snapshot, grid_to_rods

    if not cfg.snapshot:
        raise ConfigError("contours needs --snapshot FILE")
    grid, meta = decode_snapshot(Path(cfg.snapshot).read_text())
    k = meta.get("k", cfg.k)
    q = meta.get("q") or _q_of(cfg)
    rods = grid_to_rods(grid)
    ell = tile_side(k)
    shape = (-(-grid.shape[0] // ell), -(-grid.shape[1] // ell))
    sigma = spins_from_config(rods, k, shape, "match-neighbor", q=q)
    contours = extract_contours(sigma, rods, q, k)
    payload = {"k": k, "q": q, "tile_shape": list(shape),
               "contours": [c.to_dict() for c in contours]}
    out = Path(cfg.out)
    p = _write(out, "contours.json", _json(cfg, payload))
    _plot(_tile_map, out / "tilemap.png", sigma.spins, contours)
    print(f"{len(contours)} contours; wrote {p}")
    return 0


def _margin_plot(path: Path, rows) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for k in sorted({r[1] for r in rows}):
        pts = [(r[3], r[6]) for r in rows if r[1] == k]
        ax.scatter(*zip(*pts), label=f"k={k}")
    ax.axhline(0, color="k", lw=0.5)
    ax.set_xlabel("|Gamma'| (tiles)")
    ax.set_ylabel("log margin")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_peierls(cfg: RunConfig) -> int:
    from .checks import minimal_contours
    from .contour_stats import peierls_ledger

    z = parse_fraction(cfg.z)
    q = _q_of(cfg)
    rows, certs = [], []
    for name, blk, spins in minimal_contours(q):
        if cfg.witness != "both" and not name.endswith(cfg.witness):
            continue
        c = peierls_ledger(blk, spins, q, cfg.k, z)
        certs.append({"fixture": name, **c.to_dict()})
        rows.append([name, cfg.k, str(z), len(blk), f"{c.log_value:.6g}", f"{c.log_target:.6g}",
                     f"{c.log_margin:.6g}", c.passed, c.extras["n0"], c.extras["nd"],
                     f"{c.extras.get('measured_C', float('nan')):.4g}"])
    out = Path(cfg.out)
    _write(out, "peierls.json", _json(cfg, {"certificates": certs}))
    p = _write(out, "peierls.csv", _csv(cfg, ["fixture", "k", "z", "tiles", "log_value", "log_target",
                                              "log_margin", "passed", "n0", "nd", "measured_C"], rows))
    _plot(_margin_plot, out / "peierls_margins.png", rows)
    for r in rows:
        print(f"{r[0]:>10}  margin {r[6]:>10}  {'pass' if r[7] else 'FAIL'}")
    print(f"wrote {p}")
    return 0


def cmd_ratio(cfg: RunConfig) -> int:
    from .contour_stats import ratio_check

    spec = cfg.square or cfg.region or "8x8-tiles"
    nx, ny = _dims(spec, "--square/--region")
    tiles = {(i, j) for i in range(nx) for j in range(ny)}
    c = ratio_check(tiles, cfg.k, parse_fraction(cfg.z), budget=cfg.budget)
    p = _write(Path(cfg.out), "ratio.json", _json(cfg, {"certificate": c.to_dict()}))
    print(f"Z(X|+)/Z(X|-) = {c.extras['ratio']}  (exactly one: {c.extras['exactly_one']})")
    print(f"wrote {p}")
    return 0


def _density_plot(path: Path, stats) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    names = list(stats)
    ax.errorbar(range(len(names)), [stats[n].mean for n in names],
                yerr=[stats[n].stderr for n in names], fmt="o")
    ax.set_xticks(range(len(names)), names)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_mc(cfg: RunConfig) -> int:
    from .lattice import ModelParams
    from .mc import McConfig, encode_snapshot, mc_run, samples_csv

    params = ModelParams(cfg.k, cfg.L, float(parse_fraction(cfg.z)), cfg.bc)
    mc = McConfig(params, sweeps=cfg.sweeps, burn_in=cfg.burn_in, seed=cfg.seed,
                  replicas=cfg.replicas, store_grids=cfg.snapshots > 0)
    res = mc_run(mc)
    stats = {obs: res.stats(obs) for obs in ("n", "n_h", "n_v", "order")}
    out = Path(cfg.out)
    rows = [[name, f"{s.mean:.10g}", f"{s.stderr:.6g}", f"{s.tau:.4g}", s.n_samples]
            for name, s in stats.items()]
    p = _write(out, "estimators.csv", _csv(cfg, ["observable", "mean", "stderr", "tau", "n_samples"], rows))
    samples = samples_csv(res)
    _write(out, "samples.csv", "# run_config: " + json.dumps(cfg.to_dict(), sort_keys=True) + "\n" + samples)
    if cfg.snapshots > 0:
        for r, rep in enumerate(res.replicas):
            idx = np.linspace(0, len(rep.grids) - 1, cfg.snapshots).astype(int)
            for j, i in enumerate(idx):
                _write(out / "snapshots", f"r{r}_s{j}.rle", encode_snapshot(rep.grids[i], cfg.k, params.q))
    _plot(_density_plot, out / "estimators.png", stats)
    for name, s in stats.items():
        print(f"{name:>6} = {s.mean:.6g} +- {s.stderr:.2g}  (tau {s.tau:.3g})")
    print(f"wrote {p}")
    return 0


def cmd_check(cfg: RunConfig) -> int:
    from .checks import REGISTRY, run_checks

    names = cfg.names.split(",") if cfg.names else None
    if names and set(names) - set(REGISTRY):
        raise ConfigError(f"unknown checks {sorted(set(names) - set(REGISTRY))}")

    def show(r):
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<22} {r.seconds:7.1f}s  {r.detail}", flush=True)

    results = run_checks(names, show)
    rows = [[r.name, r.passed, f"{r.seconds:.2f}", r.detail] for r in results]
    _write(Path(cfg.out), "check.csv", _csv(cfg, ["check", "passed", "seconds", "detail"], rows))
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_CHECK if failed else 0


HANDLERS = {
    "exact": cmd_exact, "series": cmd_series, "contours": cmd_contours, "peierls": cmd_peierls,
    "ratio": cmd_ratio, "mc": cmd_mc, "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--k", type=int, help="rod length")
    common.add_argument("--z", help="activity, exact decimal or p/q")
    common.add_argument("--L", type=int, help="box side (sites)")
    common.add_argument("--bc", choices=("open", "plus", "minus"))
    common.add_argument("--sweeps", type=int)
    common.add_argument("--burn-in", dest="burn_in", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--replicas", type=int)
    common.add_argument("--budget", type=int, help="node budget for exact enumeration")
    common.add_argument("--out", help="output directory")
    common.add_argument("--mmax", type=int, help="largest rod multiset in series")
    common.add_argument("--region", help="WxH box (sites for exact, tiles for series/ratio)")
    common.add_argument("--square", help="square region, e.g. 8x8-tiles")
    common.add_argument("--snapshot", help="run-length encoded configuration file")
    common.add_argument("--snapshots", type=int, help="snapshots per replica to write")
    common.add_argument("--q", help="ensemble orientation (plus/minus)")
    common.add_argument("--witness", choices=("zero", "flip", "both"))
    common.add_argument("--names", help="comma-separated subset of checks")
    parser = argparse.ArgumentParser(prog="hardrods", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "exact": "exact partition polynomial of a box",
        "series": "cluster series of log Z^q against the exact logarithm",
        "contours": "contours of a snapshot",
        "peierls": "Peierls ledger certificates for minimal contours",
        "ratio": "Z(X|+)/Z(X|-) for a rectangle of tiles",
        "mc": "grand-canonical Monte Carlo",
        "check": "run the self-check suite",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except HardRodsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
