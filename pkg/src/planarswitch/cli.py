"""Command-line interface.

Subcommands: classify, normal-form, worst, simulate, batch.  Inputs are
JSON documents {"A": [[..,..],[..,..]], "B": [[..,..],[..,..]],
"label": "..."} (row-major).  Exit codes: 0 for any successful
classification (instability is a result, not an error), 1 for malformed
or invalid input, 2 for out-of-scope input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .classifier import classify
from .collinearity import Orientation, collinearity_discriminant, orientation
from .errors import BothDiagonalizableError, NotHurwitzError, PlanarSwitchError
from .invariants import SystemPair, normal_form
from .report import build_report, normal_form_report, to_json, to_text
from .tolerances import DEGENERACY_TOL, RATIO_TOL
from .trajectory import ConstantU, RandomDwell, WorstCase, simulate, worst_trajectory

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_OUT_OF_SCOPE = 2


class InputError(Exception):
    pass


def load_input(path: str) -> tuple[SystemPair, str | None]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, "
                         f"column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict) or "A" not in doc or "B" not in doc:
        raise InputError(f"{path}: expected an object with keys 'A' and 'B'")
    try:
        A = np.asarray(doc["A"], dtype=float)
        B = np.asarray(doc["B"], dtype=float)
        pair = SystemPair.of(A, B)
    except (TypeError, ValueError) as e:
        raise InputError(f"{path}: {e}") from e
    label = doc.get("label")
    return pair, label


def _write_atomic(path: str, data: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".planarswitch-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(rep: dict, args) -> None:
    text = to_json(rep) + "\n" if args.format == "json" else to_text(rep)
    if args.output:
        _write_atomic(args.output, text)
    else:
        sys.stdout.write(text)


def _trajectory_csv(traj) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x1", "x2", "norm", "active", "event"])
    for s in traj.samples:
        n = float(np.hypot(s.state[0], s.state[1]))
        w.writerow([repr(s.t), repr(float(s.state[0])),
                    repr(float(s.state[1])), repr(n), s.active, s.event])
    return buf.getvalue()


def cmd_classify(args) -> int:
    pair, label = load_input(args.input)
    try:
        verdict = classify(pair, tol=args.tol_degenerate,
                           ratio_tol=args.tol_ratio)
    except BothDiagonalizableError as e:
        print(f"out of scope: {e}", file=sys.stderr)
        return EXIT_OUT_OF_SCOPE
    except NotHurwitzError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    rep = build_report(label, verdict, args.tol_degenerate, args.tol_ratio)
    _emit(rep, args)
    return EXIT_OK


def cmd_normal_form(args) -> int:
    pair, label = load_input(args.input)
    try:
        nf = normal_form(pair, tol=args.tol_degenerate)
    except BothDiagonalizableError as e:
        print(f"out of scope: {e}", file=sys.stderr)
        return EXIT_OUT_OF_SCOPE
    except NotHurwitzError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except PlanarSwitchError as e:
        print(f"out of scope: {e}", file=sys.stderr)
        return EXIT_OUT_OF_SCOPE
    rep = normal_form_report(label, nf, pair.A, pair.B)
    _emit(rep, args)
    return EXIT_OK


def _parse_x0(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError("--x0 expects 'x1,x2'")
    try:
        return np.array([float(parts[0]), float(parts[1])])
    except ValueError as e:
        raise InputError(f"--x0: {e}") from e


def cmd_worst(args) -> int:
    pair, label = load_input(args.input)
    try:
        nf = normal_form(pair, tol=args.tol_degenerate)
    except NotHurwitzError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except PlanarSwitchError as e:
        print(f"out of scope: {e}", file=sys.stderr)
        return EXIT_OUT_OF_SCOPE
    Delta = collinearity_discriminant(nf.inv)
    orient = orientation(nf.inv, Delta, args.tol_degenerate)
    if orient is Orientation.INVERSE:
        print("worst trajectory undefined: Z is inverse (static "
              "instability certificate applies); run 'classify'",
              file=sys.stderr)
        return EXIT_OUT_OF_SCOPE
    if orient is Orientation.NOT_APPLICABLE:
        print("worst trajectory undefined: Delta < 0 (system is GUAS)",
              file=sys.stderr)
        return EXIT_OUT_OF_SCOPE
    x0_nf = nf.to_normal_coords(_parse_x0(args.x0))
    traj = worst_trajectory(nf, x0_nf, max_half_turns=args.half_turns,
                            tol=args.tol_degenerate)
    if args.output:
        _write_atomic(args.output, _trajectory_csv(traj))
    verdict = classify(pair, tol=args.tol_degenerate, ratio_tol=args.tol_ratio)
    summary = {
        "label": label,
        "rotating": traj.rotating,
        "half_turn_ratios": traj.half_turn_ratios[:5],
        "verdict": verdict.kind.value,
        "certificate": verdict.certificate.kind,
    }
    if verdict.certificate.kind == "ratio_rotation":
        summary["R_analytic"] = verdict.certificate.payload["R"]
        if traj.half_turn_ratios:
            summary["R_measured"] = traj.half_turn_ratios[0]
    sys.stdout.write(to_json(summary) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    pair, label = load_input(args.input)
    if args.policy == "constant":
        policy = ConstantU(args.u)
    elif args.policy == "random":
        policy = RandomDwell(args.seed, args.dwell_min, args.dwell_max)
    elif args.policy == "worst":
        policy = WorstCase(max_half_turns=args.half_turns)
    else:
        raise InputError(f"unknown policy {args.policy}")
    try:
        traj = simulate(pair, policy, _parse_x0(args.x0), args.t_max, args.dt)
    except NotHurwitzError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except PlanarSwitchError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_OUT_OF_SCOPE
    csv_text = _trajectory_csv(traj)
    if args.output:
        _write_atomic(args.output, csv_text)
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_batch(args) -> int:
    paths: list[str] = []
    for item in args.input:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(str(q) for q in p.glob("*.json")))
        else:
            paths.append(str(p))
    rows = []
    counts: dict[str, int] = {}
    any_error = False
    for path in paths:
        try:
            pair, label = load_input(path)
            verdict = classify(pair, tol=args.tol_degenerate,
                               ratio_tol=args.tol_ratio)
            rep = build_report(label, verdict, args.tol_degenerate,
                               args.tol_ratio)
            rep["file"] = path
            rows.append(rep)
            counts[verdict.kind.value] = counts.get(verdict.kind.value, 0) + 1
        except InputError as e:
            # parse/IO failures drive the exit code; other per-file
            # problems are recorded without failing the batch
            any_error = True
            rows.append({"file": path, "error": str(e)})
        except NotHurwitzError as e:
            rows.append({"file": path, "error": f"invalid input: {e}"})
            counts["invalid"] = counts.get("invalid", 0) + 1
        except BothDiagonalizableError as e:
            rows.append({"file": path, "error": f"out of scope: {e}"})
            counts["out_of_scope"] = counts.get("out_of_scope", 0) + 1
    table = {"rows": rows, "summary": counts, "tool_version": __version__}
    if not paths:
        print("warning: no input files found", file=sys.stderr)
    text = to_json(table) + "\n" if args.format == "json" else to_text(table)
    if args.output:
        _write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_INVALID if any_error else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="planarswitch",
        description="Stability classification of planar switched linear "
                    "systems with a nondiagonalizable matrix",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, multi_input=False):
        if multi_input:
            sp.add_argument("--input", required=True, nargs="+",
                            help="input files or directories of .json files")
        else:
            sp.add_argument("--input", required=True, help="input JSON file")
        sp.add_argument("--output", default=None, help="output file path")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--tol-degenerate", type=float, default=DEGENERACY_TOL)
        sp.add_argument("--tol-ratio", type=float, default=RATIO_TOL)

    sp = sub.add_parser("classify", help="classify stability")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("normal-form", help="compute the canonical pair")
    common(sp)
    sp.set_defaults(func=cmd_normal_form)

    sp = sub.add_parser("worst", help="construct the worst trajectory")
    common(sp)
    sp.add_argument("--x0", default="1,0")
    sp.add_argument("--half-turns", type=int, default=10)
    sp.set_defaults(func=cmd_worst)

    sp = sub.add_parser("simulate", help="simulate a switching policy")
    common(sp)
    sp.add_argument("--policy", choices=("constant", "random", "worst"),
                    required=True)
    sp.add_argument("--u", type=float, default=0.5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--dwell-min", type=float, default=0.05)
    sp.add_argument("--dwell-max", type=float, default=0.5)
    sp.add_argument("--x0", default="1,0")
    sp.add_argument("--t-max", type=float, default=50.0)
    sp.add_argument("--dt", type=float, default=0.1)
    sp.add_argument("--half-turns", type=int, default=50)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("batch", help="classify many systems")
    common(sp, multi_input=True)
    sp.set_defaults(func=cmd_batch)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
