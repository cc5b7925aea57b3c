"""Command-line front end: list and run scenarios, run JSON configs, emit grids.

Exit codes: 0 pass, 1 fail, 2 unknown scenario or bad input, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from .aging import check_aging_class
from .dependence import JointAgeModel, check_plrd_nlrd, check_rcsi_rcsd, check_si_sd
from .distributions import DomainError
from .mixture import ResidualMixture
from .numerics import DEFAULT_GRID, DEFAULT_MONOTONE_TOL, Grid, IntegrandError, QuadratureError
from .orders import check_order, check_upshifted_order
from .specs import SpecError, parse_distribution, parse_mixing
from .verify import DEFAULT_SEED, Settings, UnknownScenarioError, catalog, run_scenario
from .verify.catalog import Context
from .verify.report import Report, reports_to_csv

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
EXIT_FOR = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}
SEED_ENV = "RESILIFE_SEED"
GRID_QUANTITIES = ("sf", "pdf", "hazard", "reversed_hazard", "mrl", "cumulative_hazard")


class ConfigError(ValueError):
    """Bad config document; ``line`` and ``column`` are 1-based."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _write(text, out):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    path = Path(out)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "csv":
        return reports_to_csv([report])
    return report.to_text()


def _seed(flag, config_seed=None):
    if flag is not None:
        return flag
    if config_seed is not None:
        return int(config_seed)
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    return DEFAULT_SEED


def _grid(args, base: Grid = DEFAULT_GRID) -> Grid:
    return Grid(
        base.lo if args.grid_min is None else args.grid_min,
        base.hi if args.grid_max is None else args.grid_max,
        base.points if args.grid_points is None else args.grid_points,
        base.spacing,
    )


# ---------------------------------------------------------------- config runs

_TARGETS = ("X", "X*", "X2", "X2*", "theta", "theta2")


def _locate(text, needle):
    """1-based line and column of ``needle`` (a JSON string value) in ``text``."""
    pos = text.find(json.dumps(needle))
    if pos < 0:
        return 1, 1
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col + 1


def _spec(text, value, parser, key):
    if not isinstance(value, str):
        raise ConfigError(f"{key} must be a spec string")
    try:
        return parser(value)
    except SpecError as exc:
        line, col = _locate(text, value)
        raise ConfigError(f"{key}: {exc}", line, col + exc.column - 1) from None


def _parse_check(entry, text):
    """``"order ST X* X"`` or ``{"type": "order", "kind": "ST", "lhs": "X*", "rhs": "X"}``."""
    if isinstance(entry, str):
        parts = entry.split()
        if not parts:
            raise ConfigError("empty check", *_locate(text, entry))
        kind = parts[0]
        fields = {"order": ("kind", "lhs", "rhs"), "upshift": ("kind", "lhs", "rhs"), "class": ("cls", "target"), "dependence": ("relation", "target")}
        names = fields.get(kind)
        if names is None or len(parts) - 1 not in (len(names), len(names) + 1):
            raise ConfigError(f"cannot read check {entry!r}", *_locate(text, entry))
        d = dict(zip(names, parts[1:]))
        d["type"] = kind
        if len(parts) - 1 > len(names):
            d["expect"] = parts[-1]
        entry = d
    if not isinstance(entry, dict) or "type" not in entry:
        raise ConfigError(f"check must be a string or an object with 'type': {entry!r}")
    return entry


def _load_config(path):
    text = Path(path).read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(cfg) - {"baseline", "mixing", "mixing2", "baseline2", "checks", "grid", "tol", "seed", "name"}
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown key {key!r}", *_locate(text, key))
    for key in ("baseline", "mixing"):
        if key not in cfg:
            raise ConfigError(f"missing key {key!r}")
    objs = {"X": _spec(text, cfg["baseline"], parse_distribution, "baseline")}
    objs["theta"] = _spec(text, cfg["mixing"], parse_mixing, "mixing")
    if "baseline2" in cfg:
        objs["X2"] = _spec(text, cfg["baseline2"], parse_distribution, "baseline2")
    if "mixing2" in cfg:
        objs["theta2"] = _spec(text, cfg["mixing2"], parse_mixing, "mixing2")
    checks = [_parse_check(c, text) for c in cfg.get("checks", [])]
    return cfg, text, objs, checks


def _targets(objs):
    out = dict(objs)
    out["X*"] = ResidualMixture(objs["X"], objs["theta"])
    if "X2" in objs or "theta2" in objs:
        out["X2*"] = ResidualMixture(objs.get("X2", objs["X"]), objs.get("theta2", objs["theta"]))
    return out


def _resolve(targets, name, text):
    if name not in targets:
        raise ConfigError(f"unknown target {name!r}; use one of {', '.join(t for t in _TARGETS if t in targets)}", *_locate(text, name))
    return targets[name]


def run_config(path, args) -> Report:
    cfg, text, objs, checks = _load_config(path)
    try:
        grid = _grid(args, Grid.from_dict(cfg["grid"]) if "grid" in cfg else DEFAULT_GRID)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad grid: {exc}", *_locate(text, "grid")) from None
    tol = args.tol if args.tol is not None else float(cfg.get("tol", DEFAULT_MONOTONE_TOL))
    settings = Settings(grid=grid, tol=tol, seed=_seed(args.seed, cfg.get("seed")))
    ctx = Context(settings, settings.seed)
    name = cfg.get("name", Path(path).stem)
    start = time.perf_counter()
    error = None
    try:
        targets = _targets(objs)
        for c in checks:
            kind = c["type"]
            expect = c.get("expect", "holds")
            if expect not in ("holds", "fails"):
                raise ConfigError(f"expect must be 'holds' or 'fails', got {expect!r}", *_locate(text, expect))
            if kind in ("order", "upshift"):
                lhs, rhs = _resolve(targets, c["lhs"], text), _resolve(targets, c["rhs"], text)
                label = f"{c['lhs']} <= {c['rhs']} in {c['kind']}"
                if kind == "order":
                    ctx.verdict(label, check_order(lhs, rhs, c["kind"], grid, tol), expect)
                else:
                    ctx.verdict(label, check_upshifted_order(lhs, rhs, c["kind"], tol=tol), expect)
            elif kind == "class":
                target = _resolve(targets, c.get("target", "X*"), text)
                ctx.verdict(f"{c.get('target', 'X*')} is {c['cls']}", check_aging_class(target, c["cls"], grid, tol), expect)
            elif kind == "dependence":
                mx = _resolve(targets, c.get("target", "X*"), text)
                if not isinstance(mx, ResidualMixture):
                    raise ConfigError("dependence checks need a mixture target (X* or X2*)")
                relation = c["relation"].upper()
                checker = {"PLRD": check_plrd_nlrd, "NLRD": check_plrd_nlrd, "SI": check_si_sd, "SD": check_si_sd, "RCSI": check_rcsi_rcsd, "RCSD": check_rcsi_rcsd}.get(relation)
                if checker is None:
                    raise ConfigError(f"unknown dependence relation {c['relation']!r}", *_locate(text, c["relation"]))
                ctx.dependence(f"{c.get('target', 'X*')} and its age are {relation}", checker(JointAgeModel(mx)), c.get("label", relation))
            else:
                raise ConfigError(f"unknown check type {kind!r}", *_locate(text, kind))
    except ConfigError:
        raise
    except (DomainError, QuadratureError, IntegrandError) as exc:
        error = f"{type(exc).__name__}: {exc}"
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"malformed check: {exc}") from None
    ctx.diagnostics["settings"] = {"grid": grid.to_dict(), "tol": tol, "seed": settings.seed}
    return Report(f"config:{name}", "user configuration", "config", ctx.premises, ctx.conclusions, ctx.diagnostics, {"seconds": time.perf_counter() - start}, error)


# ---------------------------------------------------------------- commands


def cmd_list(args) -> int:
    rows = [f"{s.id:<20}{s.kind:<16}{s.description}" for s in catalog()]
    _write("\n".join(rows), args.out)
    return EXIT_PASS


def cmd_run(args) -> int:
    target = args.target
    try:
        if target.endswith(".json") or Path(target).is_file():
            report = run_config(target, args)
        else:
            settings = Settings(grid=_grid(args), tol=DEFAULT_MONOTONE_TOL if args.tol is None else args.tol, seed=_seed(args.seed))
            report = run_scenario(target, settings)
    except UnknownScenarioError:
        print(f"error: unknown scenario {target!r}; see 'resilife list'", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(_render(report, args.format), args.out)
    return EXIT_FOR[report.overall]


def grid_table(baseline, mixing, quantities, grid: Grid) -> str:
    """CSV of each quantity for X and X*, 12 significant digits."""
    mx = ResidualMixture(baseline, mixing)
    xs = grid.values()
    cols, header = [xs], ["x"]
    for q in quantities:
        for label, obj in ((q, baseline), (f"{q}_star", mx)):
            with np.errstate(all="ignore"):
                cols.append(np.asarray(getattr(obj, q)(xs), dtype=float))
            header.append(label)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in zip(*cols):
        w.writerow([f"{v:.12g}" for v in row])
    return buf.getvalue()


def cmd_grid(args) -> int:
    quantities = [q.strip() for q in args.quantities.split(",") if q.strip()]
    bad = [q for q in quantities if q not in GRID_QUANTITIES]
    if bad or not quantities:
        print(f"error: unknown quantity {bad[0] if bad else ''!r}; choose from {', '.join(GRID_QUANTITIES)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        baseline = parse_distribution(args.baseline)
        mixing = parse_mixing(args.mixing)
        text = grid_table(baseline, mixing, quantities, _grid(args))
    except (SpecError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(text, args.out)
    return EXIT_PASS


def _grid_flags(p):
    p.add_argument("--grid-min", type=float, help=f"first grid point (default {DEFAULT_GRID.lo:g})")
    p.add_argument("--grid-max", type=float, help=f"last grid point (default {DEFAULT_GRID.hi:g})")
    p.add_argument("--grid-points", type=int, help=f"number of grid points (default {DEFAULT_GRID.points})")
    p.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resilife", description="Average residual life: scenario runner and grid emitter.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list catalog scenarios")
    p.add_argument("--out")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("run", help="run a scenario id or a JSON config file")
    p.add_argument("target", help="scenario id (see 'list') or path to a JSON config")
    _grid_flags(p)
    p.add_argument("--tol", type=float, help=f"monotonicity tolerance (default {DEFAULT_MONOTONE_TOL:g})")
    p.add_argument("--seed", type=int, help=f"master seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("grid", help="tabulate quantities of X and X* on a grid")
    p.add_argument("--baseline", required=True, help="e.g. 'weibull(2,1)'")
    p.add_argument("--mixing", required=True, help="e.g. 'cont(exp(1))'")
    p.add_argument("--quantities", default="sf", help=f"comma list from {','.join(GRID_QUANTITIES)}")
    _grid_flags(p)
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
