"""Command line front end.

Exit codes: 0 every check passed, 1 a verification failed, 2 bad usage.
Settings resolve as command-line flag, then ``--config`` file (plain
``key = value`` lines, ``#`` comments), then built-in defaults.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import geodesics, navigation
from .exceptions import NotPositiveDefiniteError, NutFinslerError, SingularJetError
from .finsler import RandersHandle, ScanConfig, scan_flags
from .report import rows_to_csv, rows_to_json
from .verify import DEFAULT_TOLERANCES, SUITES, RunConfig

log = logging.getLogger("nutfinsler")

DEFAULTS = {
    "a": 1.0, "m": 0.5, "n": 0.5, "seed": 42, "samples": 200, "radius": 2.0,
    "format": None, "out": None, "workers": 1,
    "grid": "-1:1:3", "x0": "0.5,0.2,-0.3,0.1", "v0": "0.3,-0.2,0.5,0.1",
    "t_end": 1.0, "steps": 1000,
}
CONVERTERS = {"a": float, "m": float, "n": float, "seed": int, "samples": int,
              "radius": float, "workers": int, "t_end": float, "steps": int}


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, help="Taub-NUT parameter (default 1)")
    p.add_argument("--m", type=float, help="first rotation rate (default 0.5)")
    p.add_argument("--n", type=float, help="second rotation rate (default 0.5)")
    p.add_argument("--seed", type=int, help="sampling seed (default 42)")
    p.add_argument("--samples", type=int, help="number of samples (default 200)")
    p.add_argument("--radius", type=float, help="sampling ball radius (default 2)")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--workers", type=int, help="worker processes for sampling (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nutfinsler",
        description="Taub-NUT Einstein-Randers metrics: construction and numerical verification.",
        epilog="Tolerances: --tol.<name> VALUE, names: " + ", ".join(DEFAULT_TOLERANCES))
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUITES:
        _common(sub.add_parser(name, help=f"run the {name[7:]} verification suite"))
    _common(sub.add_parser("sample-flag", help="table of sampled flag curvatures"))
    p = sub.add_parser("export-randers", help="Randers data on a grid")
    _common(p)
    p.add_argument("--grid", help="lo:hi:count applied to each axis (default -1:1:3)")
    p = sub.add_parser("geodesic", help="RK4 Randers geodesic trace")
    _common(p)
    p.add_argument("--x0", help="comma-separated start point")
    p.add_argument("--v0", help="comma-separated start velocity")
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--steps", type=int)
    return parser


def _split_tolerances(argv: list[str]) -> tuple[list[str], dict]:
    rest, tols = [], {}
    it = iter(argv)
    for arg in it:
        if arg.startswith("--tol."):
            name, eq, value = arg[len("--tol."):].partition("=")
            if not eq:
                value = next(it, None)
                if value is None:
                    raise UsageError(f"{arg} needs a value")
            tols[name] = value
        else:
            rest.append(arg)
    return rest, tols


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--grid -1:1:3`` into ``--grid=-1:1:3`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if (arg.startswith("--") and "=" not in arg and len(nxt) > 1 and nxt[0] == "-"
                and (nxt[1].isdigit() or nxt[1] == ".")):
            out.append(f"{arg}={nxt}")
            i += 2
        else:
            out.append(arg)
            i += 1
    return out


def read_config_file(path: str) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def resolve(args: argparse.Namespace, cli_tols: dict) -> dict:
    file_values = read_config_file(args.config) if args.config else {}
    settings = dict(DEFAULTS)
    tols = {}
    for key, value in file_values.items():
        if key.startswith("tol."):
            tols[key[4:]] = value
        elif key in settings:
            settings[key] = value
        else:
            raise UsageError(f"unknown config key {key!r}")
    tols.update(cli_tols)
    for key in settings:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    try:
        for key, conv in CONVERTERS.items():
            settings[key] = conv(settings[key])
        settings["tolerances"] = {k: float(v) for k, v in tols.items()}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return settings


def _vector(text: str) -> np.ndarray:
    try:
        vals = [float(t) for t in str(text).split(",")]
    except ValueError:
        raise UsageError(f"bad vector {text!r}") from None
    if len(vals) != 4:
        raise UsageError(f"expected 4 comma-separated numbers, got {text!r}")
    return np.array(vals)


def _grid(text: str) -> np.ndarray:
    try:
        lo, hi, count = str(text).split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise UsageError(f"grid must be lo:hi:count, got {text!r}") from None
    if count < 1 or (count > 1 and not hi > lo):
        raise UsageError(f"bad grid {text!r}")
    return np.linspace(lo, hi, count)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _table(header, rows, fmt) -> str:
    return rows_to_json(header, rows) if fmt == "json" else rows_to_csv(header, rows)


def run_suite(command: str, settings: dict) -> int:
    cfg = RunConfig(settings["a"], settings["m"], settings["n"], settings["seed"],
                    settings["samples"], settings["radius"], settings["tolerances"],
                    settings["workers"])
    report = SUITES[command](cfg)
    fmt = settings["format"] or "json"
    _emit(report.to_json() if fmt == "json" else report.to_csv(), settings["out"])
    for line in report.summary_lines():
        log.info(line)
    log.info("%s: %s in %.2fs", command, "PASS" if report.passed else "FAIL", report.wall_time)
    return 0 if report.passed else 1


def run_sample_flag(settings: dict) -> int:
    cfg = RunConfig(settings["a"], settings["m"], settings["n"], settings["seed"],
                    settings["samples"], settings["radius"], settings["tolerances"],
                    settings["workers"])
    handle = RandersHandle.from_params(cfg.params)
    samples = scan_flags(handle, ScanConfig(cfg.samples, cfg.seed, cfg.radius), cfg.workers)
    header = ([f"x{i}" for i in range(1, 5)] + [f"y{i}" for i in range(1, 5)]
              + [f"V{i}" for i in range(1, 5)] + ["K"])
    rows = [[float(v) for v in (*s.x, *s.y, *s.V, s.K)] for s in samples]
    _emit(_table(header, rows, settings["format"] or "csv"), settings["out"])
    return 0


def export_rows(params: navigation.NavigationParams, axis: np.ndarray) -> tuple[list, list]:
    pairs = [(i, j) for i in range(4) for j in range(i, 4)]
    header = ([f"x{i}" for i in range(1, 5)] + ["in_domain"]
              + [f"a{i + 1}{j + 1}" for i, j in pairs] + [f"b{i}" for i in range(1, 5)]
              + ["lambda", "f", "wind_norm_sq"])
    rows = []
    for x in np.array(np.meshgrid(axis, axis, axis, axis, indexing="ij")).reshape(4, -1).T:
        report = navigation.domain_report(params, x)
        lam = 1.0 - report.wind_norm_sq
        if report.in_domain_exact:
            data = navigation.randers_data(params, x)
            a_vals = [float(data.a[i, j]) for i, j in pairs]
            b_vals = [float(v) for v in data.b]
            lam = data.lam
        else:
            a_vals = [float("nan")] * len(pairs)
            b_vals = [float("nan")] * 4
        rows.append([float(v) for v in x] + [int(report.in_domain_exact)] + a_vals + b_vals
                    + [float(lam), report.f_value, report.wind_norm_sq])
    return header, rows


def run_export_randers(settings: dict) -> int:
    params = navigation.NavigationParams(settings["a"], settings["m"], settings["n"])
    header, rows = export_rows(params, _grid(settings["grid"]))
    _emit(_table(header, rows, settings["format"] or "csv"), settings["out"])
    return 0


def run_geodesic(settings: dict) -> int:
    if settings["steps"] < 1:
        raise UsageError("steps must be >= 1")
    if not settings["t_end"] > 0:
        raise UsageError("t-end must be > 0")
    params = navigation.NavigationParams(settings["a"], settings["m"], settings["n"])
    handle = RandersHandle.from_params(params)
    trace = geodesics.integrate(handle, _vector(settings["x0"]), _vector(settings["v0"]),
                                settings["t_end"], settings["steps"])
    drift = np.abs(trace.F - trace.F[0])
    header = (["t"] + [f"x{i}" for i in range(1, 5)] + [f"v{i}" for i in range(1, 5)]
              + ["F", "drift"])
    rows = [[float(t), *map(float, x), *map(float, v), float(F), float(d)]
            for t, x, v, F, d in zip(trace.t, trace.x, trace.v, trace.F, drift)]
    _emit(_table(header, rows, settings["format"] or "csv"), settings["out"])
    _, rel = geodesics.conservation_report(trace)
    tol = settings["tolerances"].get("drift", DEFAULT_TOLERANCES["drift"])
    if trace.exited:
        log.warning("trajectory left the navigation domain after t = %.6g", trace.t[-1])
    log.info("relative F drift %.3e (tolerance %.1e)", rel, tol)
    return 0 if rel < tol and not trace.exited else 1


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv, cli_tols = _split_tolerances(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        settings = resolve(args, cli_tols)
        if args.command in SUITES:
            return run_suite(args.command, settings)
        if args.command == "sample-flag":
            return run_sample_flag(settings)
        if args.command == "export-randers":
            return run_export_randers(settings)
        return run_geodesic(settings)
    except (NotPositiveDefiniteError, SingularJetError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except (UsageError, NutFinslerError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
