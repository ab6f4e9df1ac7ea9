"""Command-line entry point: ``oske {ratio,sweep,opt,run,duel}``.

Exit codes: 0 success, 2 invalid input, 3 invariant violated during a game.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import ratios
from .adversaries import ADVERSARIES, AdversaryParams, lower_bound_tolerance, make_adversary
from .algorithms import POLICIES, make_policy
from .errors import ConfigError, IllegalAction, Inconsistent, InstanceError, OutOfRange, ParamError, TooLarge, OffGrid
from .instances import load_instance
from .model import DEFAULT_GRID, Mode, Transcript, audit_transcript
from .offline import opt_bruteforce, opt_grid_dp, optimum
from .simulate import duel, run_instance

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3


class InvariantViolation(Exception):
    pass


def grid_resolution() -> int:
    raw = os.environ.get("OSKE_GRID_D")
    if not raw:
        return DEFAULT_GRID
    try:
        d = int(raw)
    except ValueError:
        raise InstanceError(f"OSKE_GRID_D must be an integer, got {raw!r}") from None
    if d < 1:
        raise InstanceError("OSKE_GRID_D must be positive")
    return d


def _json_safe(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _emit(data: dict, as_json: bool = True) -> None:
    if as_json:
        print(json.dumps(_json_safe(data), indent=2))
    else:
        for key, value in data.items():
            print(f"{key}: {value}")


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.9g}"


def _check(t: Transcript, grid: int) -> None:
    problems = audit_transcript(t, grid)
    if problems:
        raise InvariantViolation("; ".join(problems))


def cmd_ratio(args) -> int:
    mode = Mode(args.mode)
    if args.removable:
        data = ratios.removability_bundle(args.delta).to_dict()
        data["mode"] = mode.value
        data["effective_ratio"] = (
            data["effective_ratio_add"] if mode is Mode.ADDITIVE else data["effective_ratio_mult"]
        )
    else:
        if mode is not Mode.ADDITIVE:
            raise OutOfRange("multiplicative accuracy is only covered with --removable")
        data = ratios.ratio_bundle(args.delta).to_dict()
    _emit(data, args.json)
    return EXIT_OK


def _measured(delta: float, epsilon: float, grid: int) -> tuple[float | None, float | None]:
    params = AdversaryParams(epsilon, grid)
    alg2 = None
    for name in ("p", "q-high", "q-low"):
        try:
            adv = make_adversary(name, delta, params)
        except ParamError:
            continue
        t = duel(adv, make_policy("alg2"))
        _check(t, grid)
        alg2 = t.ratio if alg2 is None else max(alg2, t.ratio)
    alg3 = None
    try:
        adv = make_adversary("removability", delta, params)
    except ParamError:
        pass
    else:
        t = duel(adv, make_policy("alg3"))
        _check(t, grid)
        alg3 = t.ratio
    return alg2, alg3


def sweep_rows(start: float, stop: float, step: float, measure: bool = False,
               epsilon: float = 0.01, grid: int = DEFAULT_GRID) -> list[list[str]]:
    header = ["delta", "p", "q", "c", "greedy_bound", "removability_ratio"]
    if measure:
        header += ["measured_ratio_alg2", "measured_ratio_alg3"]
    rows = [header]
    for delta in ratios.delta_grid(start, stop, step):
        b = ratios.ratio_bundle(delta)
        rem = ratios.removability_bundle(delta).effective_ratio_add
        row = [_fmt(v) for v in (delta, b.p, b.q, b.c, b.greedy_bound, rem)]
        if measure:
            row += [_fmt(v) for v in _measured(delta, epsilon, grid)]
        rows.append(row)
    return rows


def cmd_sweep(args) -> int:
    rows = sweep_rows(args.start, args.stop, args.step, args.measure, args.epsilon, grid_resolution())
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    if args.csv:
        Path(args.csv).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_opt(args) -> int:
    inst = load_instance(args.instance)
    grid = grid_resolution()
    sizes = list(inst.actual)
    if args.method == "brute":
        res = opt_bruteforce(sizes)
    elif args.method == "dp":
        res = opt_grid_dp(sizes, grid)
    else:
        res = optimum(sizes, grid)
    _emit(res.to_dict())
    return EXIT_OK


def _write_transcript(t: Transcript, path: str | None) -> None:
    if path:
        Path(path).write_text(t.to_json() + "\n")


def cmd_run(args) -> int:
    inst = load_instance(args.instance)
    grid = grid_resolution()
    bad = inst.invalid_items(grid)
    if bad:
        raise InstanceError(f"{args.instance}: items {bad} violate their estimate band")
    policy = make_policy(args.alg)
    t = run_instance(policy, inst.accuracy, inst.announced, inst.actual, inst.removable, grid)
    _check(t, grid)
    _write_transcript(t, args.transcript)
    print(t.to_json())
    return EXIT_OK


def cmd_duel(args) -> int:
    grid = grid_resolution()
    params = AdversaryParams(args.epsilon, grid)
    adv = make_adversary(args.adv, args.delta, params)
    t = duel(adv, make_policy(args.alg))
    _check(t, grid)
    _write_transcript(t, args.transcript)
    _emit({
        "adversary": adv.name,
        "policy": t.policy,
        "delta": args.delta,
        "epsilon": args.epsilon,
        "case": t.case,
        "final_gain": t.final_gain,
        "opt_value": t.opt_value,
        "ratio": t.ratio,
        "target_ratio": t.target_ratio,
        "tolerance": lower_bound_tolerance(args.epsilon, grid),
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oske", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ratio", help="closed-form ratio quantities for one delta")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--removable", action="store_true")
    p.add_argument("--mode", choices=[m.value for m in Mode], default="additive")
    p.add_argument("--json", action="store_true", help="print JSON instead of key: value lines")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("sweep", help="ratio curve over a delta grid, as CSV")
    p.add_argument("--from", dest="start", type=float, default=0.005)
    p.add_argument("--to", dest="stop", type=float, default=0.495)
    p.add_argument("--step", type=float, default=0.005)
    p.add_argument("--csv", help="output file (default: stdout)")
    p.add_argument("--measure", action="store_true", help="add adversary-measured ratios")
    p.add_argument("--epsilon", type=float, default=0.01)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("opt", help="offline optimum of an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--method", choices=["auto", "brute", "dp"], default="auto")
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("run", help="replay an instance file through a policy")
    p.add_argument("--instance", required=True)
    p.add_argument("--alg", choices=sorted(POLICIES), required=True)
    p.add_argument("--transcript")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("duel", help="play an adversary against a policy")
    p.add_argument("--adv", choices=sorted(ADVERSARIES), required=True)
    p.add_argument("--alg", choices=sorted(POLICIES), required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--transcript")
    p.set_defaults(func=cmd_duel)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, OutOfRange, ParamError, ConfigError, TooLarge, OffGrid, ValueError, OSError) as exc:
        print(f"oske: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (IllegalAction, Inconsistent, InvariantViolation) as exc:
        print(f"oske: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
