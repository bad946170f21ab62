"""Command-line interface.

Exit status: 0 on success, 1 on domain errors (and failed ``verify`` checks),
2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .asymptotics import as_model, convergence_report, report_to_csv, residual_power
from .channels import format_channel, parse_spec
from .errors import CapacityError, ChannelSpecError
from .optimize import DEFAULT_NODES, OptimizerOptions, maximize_payoff
from .payoff import Decoder
from .scan import rows_to_csv, rows_to_json, sweep_c, threshold_grid, universal_sweep

# largest allowed final scaled residual |C - predicted| * c^k for `verify`
VERIFY_TOLERANCE = {
    ("interleaving", "simple"): 0.0216,
    ("interleaving", "joint"): 0.0216,
    ("all1", "simple"): 0.01,
    ("majority", "simple"): 0.0138,
    ("minority", "simple"): 0.01,
    ("coinflip", "simple"): 0.0035,
    ("coinflip", "joint"): 0.0032,
    ("additive", "simple"): 0.01,
    ("additive", "joint"): 0.01,
    ("dilution", "simple"): 0.01,
    ("dilution", "joint"): 0.01,
}
DETERMINISTIC_JOINT_TOLERANCE = 1e-6
MONOTONE_SLACK = 1e-6


def prob(x):
    return "%.12g" % x


def scaled(x):
    return "%.6g" % x


def c_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"coalition sizes must be positive, got '{text}'")
    return values


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got '{text}'")
    return value


def _add_optimizer_flags(p):
    g = p.add_argument_group("optimizer")
    g.add_argument("--grid-points", type=int, default=1024)
    g.add_argument("--refine-tol", type=float, default=1e-10,
                   help="golden-section tolerance on p")
    g.add_argument("--band", type=float, default=1e-9,
                   help="near-optimal band (bits) for reporting ties")
    g.add_argument("--no-small-p", action="store_true",
                   help="disable grid points at k ln2/(4c)")


def _options(args):
    return OptimizerOptions(grid_points=args.grid_points, refine_tolerance_p=args.refine_tol,
                            near_optimal_band=args.band,
                            small_p_augmentation=not args.no_small_p)


def _add_output(p, choices, default):
    p.add_argument("--output", choices=choices, default=default)
    p.add_argument("--out", dest="out_path", help="write to this file instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="collusion-capacity",
        description="Simple and joint capacities of collusion channels and group-testing models.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (("capacity", "maximize the payoff over the bias p"),
                        ("optimum", "report the maximizing bias and all near-optimal biases")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--channel", required=True, help="channel spec, e.g. 'additive:r=0.1'")
        size = p.add_mutually_exclusive_group(required=True)
        size.add_argument("--c", type=positive_int)
        size.add_argument("--c-from-spec", action="store_true",
                          help="take c from a custom channel's length")
        p.add_argument("--decoder", choices=["simple", "joint"], required=True)
        _add_output(p, ["human", "json", "csv"], "human")
        _add_optimizer_flags(p)

    p = sub.add_parser("verify", help="compare numeric optima with the closed-form asymptotics")
    p.add_argument("--model", action="append", required=True,
                   help="model spec; may be repeated")
    p.add_argument("--decoder", choices=["simple", "joint"], required=True)
    p.add_argument("--c", type=c_list, required=True, help="comma-separated coalition sizes")
    p.add_argument("--order", choices=["first", "leading"], default="first",
                   help="include the first-order noise correction in predictions")
    _add_output(p, ["human", "json", "csv"], "human")
    _add_optimizer_flags(p)

    p = sub.add_parser("scan-threshold", help="c*C over all threshold-gap models (l, u)")
    p.add_argument("--c", type=positive_int, required=True)
    p.add_argument("--gap", choices=["coin", "int"], required=True)
    p.add_argument("--decoder", choices=["simple", "joint"], required=True)
    _add_output(p, ["csv", "json"], "csv")
    _add_optimizer_flags(p)

    p = sub.add_parser("universal", help="payoffs averaged over the arcsine bias density")
    p.add_argument("--model", action="append", required=True)
    p.add_argument("--decoder", choices=["simple", "joint"], required=True)
    p.add_argument("--c", type=c_list, required=True)
    p.add_argument("--nodes", type=positive_int, default=DEFAULT_NODES)
    _add_output(p, ["csv", "json"], "csv")

    p = sub.add_parser("sweep", help="capacities over a list of coalition sizes")
    p.add_argument("--model", required=True)
    p.add_argument("--decoder", choices=["simple", "joint"], required=True)
    p.add_argument("--c", type=c_list, required=True)
    p.add_argument("--scaling", choices=["c", "c2", "c32"], default="c")
    _add_output(p, ["csv", "json"], "csv")
    _add_optimizer_flags(p)
    return parser


def _emit(text, args, out):
    if args.out_path:
        with open(args.out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def _csv(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _channel(args):
    spec = parse_spec(args.channel)
    if args.c_from_spec:
        if spec.kind != "custom":
            raise ChannelSpecError("--c-from-spec needs a custom channel", token=args.channel)
        return spec.build()
    return spec.build(args.c)


def cmd_capacity(args, out):
    ch = _channel(args)
    r = maximize_payoff(ch, args.decoder, _options(args))
    interleaving = parse_spec(format_channel(ch)).kind == "interleaving"
    data = {
        "channel": format_channel(ch),
        "c": ch.c,
        "decoder": args.decoder,
        "capacity": r.capacity,
        "p_star": r.p_star,
        "c_C": ch.c * r.capacity,
        "c2_C": ch.c ** 2 * r.capacity,
        "degenerate": r.degenerate,
        "evaluations": r.evaluations,
    }
    if args.output == "json":
        text = json.dumps(data, indent=2) + "\n"
    elif args.output == "csv":
        text = _csv([list(data), [repr(v) if isinstance(v, float) else v
                                  for v in data.values()]])
    else:
        lines = [f"channel     {data['channel']}",
                 f"c           {ch.c}",
                 f"decoder     {args.decoder}",
                 f"capacity    {prob(r.capacity)} bits",
                 f"p*          {prob(r.p_star)}",
                 f"c*C         {scaled(data['c_C'])}"]
        if interleaving:
            lines.append(f"c^2*C       {scaled(data['c2_C'])}")
        if r.degenerate:
            lines.append("warning     payoff is identically zero (degenerate channel)")
        text = "\n".join(lines) + "\n"
    _emit(text, args, out)
    return 0


def cmd_optimum(args, out):
    ch = _channel(args)
    r = maximize_payoff(ch, args.decoder, _options(args))
    data = {
        "channel": format_channel(ch),
        "c": ch.c,
        "decoder": args.decoder,
        "p_star": r.p_star,
        "capacity": r.capacity,
        "ties": [{"p": p, "bits": v} for p, v in r.local_maxima],
        "degenerate": r.degenerate,
    }
    if args.output == "json":
        text = json.dumps(data, indent=2) + "\n"
    elif args.output == "csv":
        text = _csv([["p", "bits"]] + [[repr(p), repr(v)] for p, v in r.local_maxima])
    else:
        lines = [f"channel     {data['channel']}",
                 f"decoder     {args.decoder}",
                 f"p*          {prob(r.p_star)}",
                 f"capacity    {prob(r.capacity)} bits",
                 f"near-optimal biases ({len(r.local_maxima)}):"]
        lines += [f"  p = {prob(p)}   I = {prob(v)}" for p, v in r.local_maxima]
        text = "\n".join(lines) + "\n"
    _emit(text, args, out)
    return 0


def verify_model(model, decoder, c_values, options, order):
    """Convergence rows plus a pass/fail verdict against the built-in tolerances."""
    spec = as_model(model)
    rows = convergence_report(spec, decoder, c_values, options, order)
    key = (spec.kind, decoder)
    if key in VERIFY_TOLERANCE:
        tol = VERIFY_TOLERANCE[key]
    elif decoder == "joint" or spec.kind == "threshold":
        tol = DETERMINISTIC_JOINT_TOLERANCE
    else:
        tol = VERIFY_TOLERANCE[(spec.kind, "simple")]
    residuals = [r.scaled_residual for r in rows]
    monotone = all(b <= a + MONOTONE_SLACK for a, b in zip(residuals, residuals[1:]))
    ok = residuals[-1] <= tol and monotone
    return rows, ok, tol, monotone


def cmd_verify(args, out):
    options = _options(args)
    all_ok = True
    chunks, report = [], []
    for model in args.model:
        rows, ok, tol, monotone = verify_model(model, args.decoder, args.c, options, args.order)
        all_ok &= ok
        name = str(as_model(model))
        power = residual_power(model)
        verdict = "PASS" if ok else "FAIL"
        report.append({
            "model": name, "decoder": args.decoder, "verdict": verdict,
            "tolerance": tol, "monotone": monotone,
            "rows": [{"c": r.c, "numeric_C": r.numeric_C, "predicted_C": r.predicted_C,
                      "scaled_residual": r.scaled_residual, "c_p_numeric": r.c_p_numeric,
                      "c_p_predicted": None if math.isnan(r.c_p_predicted)
                      else r.c_p_predicted} for r in rows],
        })
        if args.output == "csv":
            chunks.append(report_to_csv(rows))
            continue
        scale = "c^2" if power == 2 else "c"
        lines = [f"{name} ({args.decoder} decoder)",
                 f"{'c':>8}  {'numeric C':>18}  {'predicted C':>18}  "
                 f"{'resid*' + scale:>12}  {'c*p numeric':>12}  {'c*p predicted':>13}"]
        for r in rows:
            cpp = "-" if math.isnan(r.c_p_predicted) else scaled(r.c_p_predicted)
            lines.append(f"{r.c:>8}  {prob(r.numeric_C):>18}  {prob(r.predicted_C):>18}  "
                         f"{scaled(r.scaled_residual):>12}  {scaled(r.c_p_numeric):>12}  "
                         f"{cpp:>13}")
        lines.append(f"{verdict} {name} {args.decoder} (final residual "
                     f"{scaled(rows[-1].scaled_residual)} vs tolerance {scaled(tol)}"
                     f"{'' if monotone else ', residuals not decreasing'})")
        chunks.append("\n".join(lines) + "\n")
    if args.output == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = "\n".join(chunks)
    _emit(text, args, out)
    return 0 if all_ok else 1


def cmd_scan(args, out):
    grid = threshold_grid(args.c, args.gap, args.decoder, _options(args))
    _emit(grid.to_csv() if args.output == "csv" else grid.to_json() + "\n", args, out)
    return 0


def cmd_universal(args, out):
    rows = universal_sweep(args.model, args.decoder, args.c, args.nodes)
    _emit(rows_to_csv(rows) if args.output == "csv" else rows_to_json(rows) + "\n", args, out)
    return 0


def cmd_sweep(args, out):
    rows = sweep_c(args.model, args.decoder, args.c, args.scaling, _options(args))
    _emit(rows_to_csv(rows) if args.output == "csv" else rows_to_json(rows) + "\n", args, out)
    return 0


COMMANDS = {
    "capacity": cmd_capacity,
    "optimum": cmd_optimum,
    "verify": cmd_verify,
    "scan-threshold": cmd_scan,
    "universal": cmd_universal,
    "sweep": cmd_sweep,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except ChannelSpecError as exc:
        print(f"error: {exc} (offending token: '{exc.token}')", file=err)
        return 1
    except CapacityError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
