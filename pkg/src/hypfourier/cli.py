"""Command-line front end: transform runs, verification suites, sweeps.

Exit codes: 0 success (and all VERIFIED checks passing for `verify`),
1 verification failure, 2 malformed input, 3 grid incompatibility,
4 numerical-accuracy error.

Signals can be loaded from container JSON files or built from the spec
mini-language `bump:<center_r>,<width>` / `bump:<center_r>@<theta>,<width>`.
A config file of key=value lines can pre-set any long flag; explicit flags
win.  Output files are written atomically (temp file + rename) and verify
reports carry no timestamps, so identical seeds give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

import numpy as np

from . import gabor, grids, helgason, uncertainty, verification
from .grids import GridMismatchError, atomic_write_text
from .specfun import QuadratureError

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_GRID = 3
EXIT_NUMERICS = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_BAD_INPUT):
        super().__init__(message)
        self.code = code


def _parse_signal_spec(spec: str, grid: grids.DiskGrid) -> grids.SampledFunction:
    """`bump:<center_r>,<width>` or `bump:<center_r>@<theta>,<width>`, or a
    path to a sampled-function JSON file."""
    if spec.startswith("bump:"):
        body = spec[len("bump:"):]
        try:
            pos, width_s = body.split(",")
            if "@" in pos:
                r_s, th_s = pos.split("@")
                center_r, theta = float(r_s), float(th_s)
            else:
                center_r, theta = float(pos), 0.0
            width = float(width_s)
        except ValueError as exc:
            raise CliError(f"malformed signal spec {spec!r}: {exc}") from None
        if center_r < 0 or width <= 0:
            raise CliError(f"signal spec {spec!r} needs center_r >= 0 and width > 0")
        center = np.tanh(center_r / 2.0) * np.exp(1j * theta)
        return grids.make_bump(grid, center, width)
    if not os.path.exists(spec):
        raise CliError(f"input {spec!r} is neither a file nor a signal spec")
    try:
        obj = grids.load_json(spec)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CliError(f"cannot parse {spec!r}: {exc}") from None
    if not isinstance(obj, grids.SampledFunction):
        raise CliError(f"{spec!r} does not hold a sampled function")
    if obj.grid.shape() != grid.shape() or obj.grid.r_max != grid.r_max:
        raise CliError(
            f"{spec!r} grid {obj.grid.descriptor()} does not match the run grid",
            EXIT_GRID,
        )
    return grids.SampledFunction(grid, obj.values)


def _grid_config(args) -> verification.GridConfig:
    return verification.GridConfig(
        n_r=args.nr, n_theta=args.ntheta, r_max=args.rmax,
        n_lambda=args.nlambda, lambda_max=args.lmax,
        n_t=args.nt, t_max=args.tmax,
    )


def _add_grid_flags(p: argparse.ArgumentParser):
    p.add_argument("--nr", type=int, default=96, help="radial node count")
    p.add_argument("--ntheta", type=int, default=64, help="angular node count")
    p.add_argument("--rmax", type=float, default=6.0, help="grid radius")
    p.add_argument("--nlambda", type=int, default=128, help="frequency node count")
    p.add_argument("--lmax", type=float, default=24.0, help="frequency cutoff")
    p.add_argument("--nt", type=int, default=32, help="translation node count")
    p.add_argument("--tmax", type=float, default=4.0, help="translation cutoff")


def _default_threads() -> int:
    env = os.environ.get("HGFT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def cmd_transform(args) -> int:
    cfg = _grid_config(args)
    dg = cfg.disk()
    f = _parse_signal_spec(args.input, dg)
    sg = cfg.spectral()
    t0 = time.perf_counter()
    if args.mode == "helgason":
        out = helgason.forward(f, sg)
        radial_spread = float(
            np.ptp(np.abs(out.values), axis=1).max() / max(np.abs(out.values).max(), 1e-300)
        )
        extra = f"b-spread={radial_spread:.3e}"
    elif args.mode == "gabor":
        if not args.window:
            raise CliError("--mode gabor needs --window")
        w = gabor.Window(_parse_signal_spec(args.window, dg))
        tg = cfg.translation()
        out = gabor.gabor_forward(f, w, sg, tg, n_threads=args.threads)
        extra = f"window-leak={out.meta.get('max_window_leak_fraction', 0.0):.3e}"
    else:
        raise CliError(f"unknown mode {args.mode!r}")
    elapsed = time.perf_counter() - t0
    grids.save_json(out, args.out)
    print(f"{cfg.descriptor()} mode={args.mode} {extra} elapsed={elapsed:.3f}s")
    print(f"wrote {args.out}")
    return EXIT_OK


def _format_report_table(reports) -> str:
    lines = [f"{'claim':46s} {'class':9s} {'status':6s} {'lhs':>12s} {'rhs':>12s}"]
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        lines.append(
            f"{r.claim:46s} {r.cls:9s} {status:6s} {r.lhs:12.5g} {r.rhs:12.5g}"
        )
    return "\n".join(lines)


def cmd_verify(args) -> int:
    cfg = _grid_config(args)
    if args.suite not in ("all",) and args.suite not in verification.SUITES:
        raise CliError(f"unknown suite {args.suite!r}")
    reports = verification.run_suite(args.suite, cfg, seed=args.seed,
                                     n_threads=args.threads)
    payload = json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True)
    if args.report:
        atomic_write_text(args.report, payload + "\n")
    print(_format_report_table(reports))
    failed = [r for r in reports if r.cls == uncertainty.VERIFIED and not r.passed]
    if failed:
        print(f"{len(failed)} VERIFIED check(s) failed", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def _parse_param_grid(spec: str) -> dict[str, list[float]]:
    """`name=v1,v2,...` or `name=start:stop:count`; multiple names split by ';'."""
    if not spec or not spec.strip():
        raise CliError("empty parameter grid")
    out: dict[str, list[float]] = {}
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            name, body = chunk.split("=", 1)
        except ValueError:
            raise CliError(f"malformed parameter chunk {chunk!r}") from None
        name = name.strip()
        try:
            if ":" in body:
                start, stop, count = body.split(":")
                vals = list(np.linspace(float(start), float(stop), int(count)))
            else:
                vals = [float(v) for v in body.split(",") if v.strip()]
        except ValueError as exc:
            raise CliError(f"malformed values in {chunk!r}: {exc}") from None
        if not vals:
            raise CliError(f"no values for parameter {name!r}")
        out[name] = vals
    if not out:
        raise CliError("empty parameter grid")
    return out


def cmd_sweep(args) -> int:
    cfg = _grid_config(args)
    params = _parse_param_grid(args.param_grid)
    rng = np.random.default_rng(args.seed)
    dg, sg, tg = cfg.disk(), cfg.spectral(), cfg.translation()
    f = verification.random_bump(dg, rng, max_center_r=1.0, width_range=(0.5, 0.7))
    w = gabor.Window(grids.make_bump(dg, 0j, 0.5))
    G = gabor.gabor_forward(f, w, sg, tg, n_threads=args.threads)

    rows = []
    if args.claim == "concentration":
        if "m" not in params:
            raise CliError("concentration sweep needs an 'm' parameter")
        for m in params["m"]:
            reg = uncertainty.random_region(sg, tg, m, rng)
            ver, emp = uncertainty.concentration_check(f, w, reg, sg, tg, G=G)
            rows.append(["concentration", f"m={m:g}", ver.lhs, ver.rhs,
                         ver.rhs / ver.lhs if ver.lhs > 0 else float("inf"),
                         ver.cls])
            rows.append(["concentration-stated", f"m={m:g}", emp.lhs, emp.rhs,
                         emp.ratio, emp.cls])
    elif args.claim == "moment":
        if "s" not in params:
            raise CliError("moment sweep needs an 's' parameter")
        for s in params["s"]:
            rep = uncertainty.moment_bound_check(f, w, s, sg, tg, G=G)
            rows.append(["moment", f"s={s:g}", rep.lhs, rep.rhs,
                         rep.extra["realized_constant"], rep.cls])
    else:
        raise CliError(f"unknown sweep claim {args.claim!r}")

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["claim", "parameters", "lhs", "rhs", "ratio", "class"])
    writer.writerows(rows)
    atomic_write_text(args.out, buf.getvalue())
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _apply_config_file(argv: list[str]) -> list[str]:
    """Inject key=value pairs from --config as defaults (flags win)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise CliError("--config needs a path")
    path = argv[idx + 1]
    rest = argv[:idx] + argv[idx + 2:]
    if not os.path.exists(path):
        raise CliError(f"config file {path!r} not found")
    injected = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CliError(f"malformed config line {line!r}")
            key, value = line.split("=", 1)
            flag = "--" + key.strip().lstrip("-")
            if flag not in rest:
                injected.extend([flag, value.strip()])
    # injected defaults go right after the subcommand
    if rest:
        return rest[:1] + injected + rest[1:]
    return injected


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypfourier",
        description="Fourier and windowed transforms on the hyperbolic plane",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tr = sub.add_parser("transform", help="run a forward transform")
    p_tr.add_argument("--input", required=True,
                      help="signal JSON path or spec like bump:0,0.6")
    p_tr.add_argument("--window", help="window JSON path or spec (gabor mode)")
    p_tr.add_argument("--mode", choices=["helgason", "gabor"], default="helgason")
    p_tr.add_argument("--out", required=True, help="output JSON path")
    p_tr.add_argument("--threads", type=int, default=_default_threads())
    _add_grid_flags(p_tr)
    p_tr.set_defaults(func=cmd_transform)

    p_ver = sub.add_parser("verify", help="run verification suites")
    p_ver.add_argument("--suite", default="all",
                       choices=["all"] + sorted(verification.SUITES),
                       help="which claim family to check")
    p_ver.add_argument("--report", help="write the ClaimReport JSON array here")
    p_ver.add_argument("--seed", type=int, default=0,
                       help="seed for the random test signals")
    p_ver.add_argument("--threads", type=int, default=_default_threads())
    _add_grid_flags(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    p_sw = sub.add_parser("sweep", help="sweep a claim over a parameter grid")
    p_sw.add_argument("--claim", required=True, choices=["concentration", "moment"])
    p_sw.add_argument("--param-grid", required=True,
                      help="e.g. 'm=0.1:0.9:9' or 's=0.5,1,2'")
    p_sw.add_argument("--out", required=True, help="output CSV path")
    p_sw.add_argument("--seed", type=int, default=0)
    p_sw.add_argument("--threads", type=int, default=_default_threads())
    _add_grid_flags(p_sw)
    p_sw.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config_file(argv)
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except GridMismatchError as exc:
        print(f"grid incompatibility: {exc}", file=sys.stderr)
        return EXIT_GRID
    except QuadratureError as exc:
        print(f"numerical accuracy failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    sys.exit(main())
