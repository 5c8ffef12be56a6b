"""Command-line entry point ``mmps``.

Exit codes: 0 success, 1 the analysis came out negative (not solvable, no
growth rate, unstable, invalid model), 2 usage or I/O problems.
"""

from __future__ import annotations

import argparse
import csv
import io as _stringio
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import pipeline
from .io import ModelFormatError, dumps_model, dumps_report, jsonable, load_model, save_model
from .railway import RailwayParams, build_model
from .simulator import simulate
from .solvability import NotSolvable, certify

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("mmps")

_LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(Exception):
    pass


def _setup_logging() -> None:
    name = os.environ.get("MMPS_LOG", "quiet").strip().lower() or "quiet"
    level = _LOG_LEVELS.get(name)
    logging.basicConfig(level=level or logging.ERROR, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s", force=True)
    if level is None:
        log.error("unknown MMPS_LOG value %r; using quiet", name)


def _emit(obj, path=None) -> None:
    text = dumps_report(obj)
    if path:
        Path(path).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _growth_or_fail(system, args):
    cert = certify(system)
    if isinstance(cert, NotSolvable):
        _emit({"solvable": False, "cycle": list(cert.cycle)})
        return None
    _, rep = pipeline.stage_growth(system, args.parallel)
    sols = pipeline.select_solutions(rep, getattr(args, "lam", None))
    if not sols:
        what = "no growth rate" if not rep.solutions else f"no growth rate matches {args.lam}"
        print(what, file=sys.stderr)
        _emit({"rates": rep.rates(), **rep.counts(), "selected": []})
        return None
    return sols


def cmd_validate(args) -> int:
    system = load_model(args.model)
    out = pipeline.stage_validate(system)
    for v in out["violations"]:
        print(v, file=sys.stderr)
    if not out["time_invariant"]:
        print("not time-invariant; (C + D)·s per row: " +
              " ".join(repr(float(v)) for v in out["row_sums"]), file=sys.stderr)
    _emit(out)
    return EXIT_OK if out["valid"] and out["time_invariant"] else EXIT_NEGATIVE


def cmd_analyze(args) -> int:
    system = load_model(args.model)
    report, ok = pipeline.analyze(system, args.parallel, args.tol)
    _emit(report)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_solvability(args) -> int:
    out = pipeline.stage_solvability(load_model(args.model))
    _emit(out)
    return EXIT_OK if out["solvable"] else EXIT_NEGATIVE


def cmd_growth_rates(args) -> int:
    system = load_model(args.model)
    if isinstance(certify(system), NotSolvable):
        _emit(pipeline.stage_solvability(system))
        return EXIT_NEGATIVE
    out, rep = pipeline.stage_growth(system, args.parallel)
    _emit(out)
    return EXIT_OK if rep.solutions else EXIT_NEGATIVE


def cmd_fixed_points(args) -> int:
    system = load_model(args.model)
    sols = _growth_or_fail(system, args)
    if sols is None:
        return EXIT_NEGATIVE
    _emit([pipeline.stage_fixed_points(system, s, args.tol)[0] for s in sols])
    return EXIT_OK


def cmd_normalize(args) -> int:
    system = load_model(args.model)
    sols = _growth_or_fail(system, args)
    if sols is None:
        return EXIT_NEGATIVE
    outs = [pipeline.stage_normalize(system, s, args.tol)[0] for s in sols]
    _emit(outs)
    return EXIT_OK if all(o["structure_ok"] for o in outs) else EXIT_NEGATIVE


def cmd_linearize(args) -> int:
    system = load_model(args.model)
    sols = _growth_or_fail(system, args)
    if sols is None:
        return EXIT_NEGATIVE
    outs = []
    for s in sols:
        _, ns = pipeline.stage_normalize(system, s, args.tol)
        outs.append(pipeline.stage_linearize(system, ns)[0])
    _emit(outs)
    return EXIT_OK


def cmd_stability(args) -> int:
    system = load_model(args.model)
    sols = _growth_or_fail(system, args)
    if sols is None:
        return EXIT_NEGATIVE
    outs, ok = [], True
    for s in sols:
        _, fps = pipeline.stage_fixed_points(system, s, args.tol)
        _, ns = pipeline.stage_normalize(system, s, args.tol)
        _, lin = pipeline.stage_linearize(system, ns)
        out, rep = pipeline.stage_stability(system, lin, fps, args.unit_tol)
        out = {"lambda": s.lam, "footprint": pipeline.footprint_dict(s.footprint), **out}
        outs.append(out)
        ok = ok and rep.stable
    _emit(outs)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _read_x0(source: str, system, args) -> np.ndarray:
    if source == "fixed-point":
        sols = _growth_or_fail(system, args)
        if sols is None:
            raise UsageError("no fixed point available for --x0 fixed-point")
        return min(sols, key=lambda s: s.lam).x_e
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    try:
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("x0")
        x0 = np.asarray(data, dtype=float)
    except (json.JSONDecodeError, TypeError, ValueError):
        try:
            x0 = np.array(text.replace(",", " ").split(), dtype=float)
        except ValueError:
            raise UsageError(f"{source}: expected a JSON array or whitespace/comma separated numbers") from None
    if x0.shape != (system.n,):
        raise UsageError(f"{source}: x0 must hold {system.n} numbers, got shape {x0.shape}")
    return x0


def trajectory_csv(traj) -> str:
    buf = _stringio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", *traj.names, "residual"])
    for k, x in enumerate(traj.states):
        res = "" if k == 0 else repr(float(traj.residuals[k - 1]))
        w.writerow([k, *(repr(float(v) + 0.0) for v in x), res])
    return buf.getvalue()


def cmd_simulate(args) -> int:
    system = load_model(args.model)
    cert = certify(system)
    if isinstance(cert, NotSolvable):
        _emit({"solvable": False, "cycle": list(cert.cycle)})
        return EXIT_NEGATIVE
    args.lam = None
    x0 = _read_x0(args.x0, system, args)
    traj = simulate(system, cert, x0, args.cycles)
    csv_text = trajectory_csv(traj)
    payload = {"names": list(traj.names), "states": traj.states, "residuals": traj.residuals}
    if args.csv:
        Path(args.csv).write_text(csv_text)
    if args.json:
        _emit(payload, args.json)
    if not args.csv and not args.json:
        if args.format == "json":
            _emit(payload)
        else:
            sys.stdout.write(csv_text)
    return EXIT_OK


def _parse_params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def cmd_railway(args) -> int:
    overrides = _parse_params(args.param)
    overrides["J"] = args.stations
    valid = set(RailwayParams.__dataclass_fields__)
    unknown = sorted(set(overrides) - valid)
    if unknown:
        raise UsageError(f"unknown railway parameter(s): {', '.join(unknown)}")
    try:
        params = RailwayParams().with_overrides(**overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    system = build_model(params)
    if args.emit:
        save_model(system, args.emit)
        log.info("wrote %s", args.emit)
    else:
        sys.stdout.write(dumps_model(system) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--parallel", type=int, default=1, metavar="N",
                        help="worker processes for the footprint LPs")
    common.add_argument("--tol", type=float, default=None,
                        help="rank and zero-detection tolerance")

    parser = argparse.ArgumentParser(prog="mmps", description="Analyze implicit max-min-plus-scaling systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, model=True, lam=False):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if model:
            p.add_argument("model", help="model JSON file")
        if lam:
            p.add_argument("--lambda", dest="lam", type=float, default=None,
                           help="only the growth solutions with this rate")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check structure and time invariance")
    add("analyze", cmd_analyze, "run the full pipeline")
    add("solvability", cmd_solvability, "find an evaluation order")
    add("growth-rates", cmd_growth_rates, "solve the footprint LPs")
    add("fixed-points", cmd_fixed_points, "fixed-point sets and sigma bounds", lam=True)
    add("normalize", cmd_normalize, "normalized matrices", lam=True)
    add("linearize", cmd_linearize, "local linear model and its region", lam=True)
    st = add("stability", cmd_stability, "spectral stability verdict", lam=True)
    st.add_argument("--unit-tol", type=float, default=None)

    sim = add("simulate", cmd_simulate, "simulate a trajectory")
    sim.add_argument("--x0", required=True, help="path to initial state, or 'fixed-point'")
    sim.add_argument("--cycles", type=int, required=True, metavar="K")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.add_argument("--csv", help="write the trajectory CSV here")
    sim.add_argument("--json", help="write the trajectory JSON here")

    rw = add("railway", cmd_railway, "generate the urban railway model", model=False)
    rw.add_argument("--stations", type=int, default=4, metavar="J")
    rw.add_argument("--param", action="append", metavar="k=v")
    rw.add_argument("--emit", help="output path (default: standard output)")
    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "parallel", 1) < 1:
        print("mmps: --parallel must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "cycles", 1) is not None and getattr(args, "cycles", 1) < 1:
        print("mmps: --cycles must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ModelFormatError, UsageError) as exc:
        print(f"mmps: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"mmps: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
