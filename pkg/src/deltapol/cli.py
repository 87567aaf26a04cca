"""Command-line front end: ``deltapol sweep | compare | verify``.

Exit status: 0 success, 1 verification failure, 2 usage or IO error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from deltapol import __version__
from deltapol import closedform as cf
from deltapol import greensfn as gf
from deltapol import response as rs
from deltapol.errors import DeltaPolError
from deltapol.model import BoundState, Sign
from deltapol.verify import comparison_report, run_verification

COLUMNS = ("x", "re_alpha_plus", "im_alpha_plus", "alpha_minus", "re_total", "im_total")
ROUTES = ("closed", "greens", "oracle")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# config-file keys -> (target, field, type)
_CONFIG_KEYS = {
    "rel_tol": ("quad", "rel_tol", float),
    "abs_tol": ("quad", "abs_tol", float),
    "k_cutoff_factor": ("quad", "k_cutoff_factor", float),
    "max_subdivisions": ("quad", "max_subdivisions", int),
    "length": ("box", "length", float),
    "L": ("box", "length", float),
    "n_grid": ("box", "n_grid", int),
    "N": ("box", "n_grid", int),
    "mu": ("box", "mu", float),
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepRequest:
    x_min: float = 0.0
    x_max: float = 1.0
    samples: int = 101
    g: float = 1.0
    mu: float = 1e-3
    routes: tuple = ("closed",)
    output_format: str = "csv"
    raw: bool = False

    def __post_init__(self):
        if self.x_min < 0:
            raise UsageError(f"--xmin must be >= 0, got {self.x_min}")
        if not self.x_max > self.x_min:
            raise UsageError(f"--xmax ({self.x_max}) must exceed --xmin ({self.x_min})")
        if self.samples < 2:
            raise UsageError(f"--samples must be >= 2, got {self.samples}")
        if not self.routes or any(r not in ROUTES for r in self.routes):
            raise UsageError(f"--routes must be a comma list drawn from {','.join(ROUTES)}, got {self.routes}")
        if len(set(self.routes)) != len(self.routes):
            raise UsageError("--routes lists a route twice")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.g <= 0:
            raise UsageError(f"--g must be positive, got {self.g}")


def load_config(path) -> tuple[dict, dict]:
    """Parse a key=value file into QuadratureConfig and BoxSpec overrides."""
    quad, box = {}, {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: expected one of {sorted(_CONFIG_KEYS)} as key=value")
        target, name, kind = _CONFIG_KEYS[key]
        try:
            (quad if target == "quad" else box)[name] = kind(value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return quad, box


def _settings(args) -> tuple[gf.QuadratureConfig, rs.BoxSpec]:
    quad, box = load_config(args.config) if getattr(args, "config", None) else ({}, {})
    for name in ("length", "n_grid", "mu"):
        flag = getattr(args, name, None)
        if flag is not None:
            box[name] = flag
    box["g"] = args.g
    try:
        return gf.QuadratureConfig(**quad), rs.BoxSpec(**box)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _route_values(route, state, omega, cfg, es, mu):
    """(alpha_plus complex, alpha_minus real) for one route."""
    if route == "closed":
        return cf.alpha_plus(state, omega), cf.alpha_minus(state, omega)
    if route == "greens":
        return (gf.alpha_from_g0(state, omega, Sign.PLUS, cfg),
                gf.alpha_from_g0(state, omega, Sign.MINUS, cfg).real)
    plus, minus = rs.alpha_split_oracle(es, omega, mu)
    return plus, minus.real


def sweep_rows(req: SweepRequest, cfg: gf.QuadratureConfig | None = None,
               box: rs.BoxSpec | None = None, jobs: int = 1) -> list[dict]:
    """One dict per sample; extra routes add ``<column>_<route>`` keys."""
    cfg = cfg or gf.QuadratureConfig()
    state = BoundState.from_g(req.g)
    es = None
    if "oracle" in req.routes:
        es = rs.build_box_eigensystem(box or rs.BoxSpec(g=req.g, mu=req.mu))
    scale = 1.0 if req.raw else 4.0 * state.B**2
    xs = np.linspace(req.x_min, req.x_max, req.samples)

    def row(x):
        omega = float(x) * state.B
        out = {"x": float(x)}
        for i, route in enumerate(req.routes):
            plus, minus = _route_values(route, state, omega, cfg, es, req.mu)
            total = plus + minus
            suffix = "" if i == 0 else f"_{route}"
            out["re_alpha_plus" + suffix] = scale * plus.real
            out["im_alpha_plus" + suffix] = scale * plus.imag
            out["alpha_minus" + suffix] = scale * minus
            out["re_total" + suffix] = scale * total.real
            out["im_total" + suffix] = scale * total.imag
        return out

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(row, xs))
    return [row(x) for x in xs]


def column_names(routes) -> list[str]:
    names = list(COLUMNS)
    for route in routes[1:]:
        names += [f"{c}_{route}" for c in COLUMNS[1:]]
    return names


def format_csv(rows, routes) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = column_names(routes)
    writer.writerow(names)
    for r in rows:
        writer.writerow([format(r[n], ".17g") for n in names])
    return buf.getvalue()


def format_json(rows, req: SweepRequest) -> str:
    state = BoundState.from_g(req.g)
    meta = {
        "g": req.g,
        "B": state.B,
        "routes": list(req.routes),
        "scaled": not req.raw,
        "version": __version__,
    }
    return json.dumps({"meta": meta, "rows": rows}, indent=1) + "\n"


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def cmd_sweep(args) -> int:
    routes = tuple(r.strip() for r in args.routes.split(",") if r.strip())
    cfg, box = _settings(args)
    req = SweepRequest(
        x_min=args.xmin, x_max=args.xmax, samples=args.samples, g=args.g, mu=box.mu,
        routes=routes, output_format=args.format, raw=args.raw,
    )
    if args.jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
    rows = sweep_rows(req, cfg, box, jobs=args.jobs)
    text = format_csv(rows, req.routes) if req.output_format == "csv" else format_json(rows, req)
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# compare / verify
# ---------------------------------------------------------------------------

def cmd_compare(args) -> int:
    if args.g != 1.0:
        raise UsageError("compare is defined for g = 1 only (B = 1/2)")
    report = comparison_report()
    if args.format == "json":
        _emit(json.dumps(report.as_dict(), indent=1) + "\n", args.out)
    else:
        _emit("\n".join(report.lines()) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg, box = _settings(args)
    result = run_verification(args.level, g=args.g, cfg=cfg, box=box)
    for check in result.checks:
        print(check.line())
    status = "PASSED" if result.passed else "FAILED"
    n_fail = sum(1 for c in result.checks if c.required and not c.passed)
    print(f"verify {args.level}: {status} ({n_fail} failing, {result.elapsed:.2f} s)")
    summary = json.dumps(result.summary())
    if args.out:
        _emit(summary + "\n", args.out)
    else:
        print(summary)
    return EXIT_OK if result.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltapol",
        description="Frequency-dependent polarizability of a particle in a 1D delta well.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=float, default=1.0, help="well strength (default 1)")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--config", metavar="PATH", help="key=value file overriding quadrature/box defaults")

    box = argparse.ArgumentParser(add_help=False)
    box.add_argument("--mu", type=float, default=None, help="oracle broadening (default 1e-3)")
    box.add_argument("--L", dest="length", type=float, default=None, help="oracle box length (default 200)")
    box.add_argument("--N", dest="n_grid", type=int, default=None, help="oracle grid points (default 4000)")

    p = sub.add_parser("sweep", parents=[common, box], help="tabulate alpha over x = omega/B")
    p.add_argument("--xmin", type=float, default=0.0)
    p.add_argument("--xmax", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--routes", default="closed", help="comma list of closed,greens,oracle (default closed)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--raw", action="store_true", help="unscaled values instead of 4B^2 alpha")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for row evaluation")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", parents=[common], help="compare with the literature formulas (g = 1)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", parents=[common, box], help="run the invariant checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"deltapol: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DeltaPolError as exc:
        print(f"deltapol: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
