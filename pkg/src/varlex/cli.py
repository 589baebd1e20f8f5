"""Command-line interface.

Subcommands: norm / maximal / transform (module pass-throughs on JSON grid
files), verify <suite> and estimate <constant> (experiment suites writing
JSON + CSV reports), and report merge.  Exit codes: 0 when every pass/fail
check passes, 1 on failed checks, 2 on unreadable or malformed inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import _kernels
from .core import (
    exponent_field_from_json,
    grid_function_from_json,
    grid_function_to_json,
)
from .maximal import MaximalConfig, bmo_norm, hl_maximal, local_sharp, sharp_delta
from .report import merge_reports, report_from_json
from .singular import apply_pv, apply_truncated, commutator_apply, hilbert_kernel, riesz_kernel
from .suites import (
    ExperimentConfig,
    cz_boundedness_suite,
    duality_transfer_check,
    estimate_commutator_norm,
    estimate_lerner_constant,
    estimate_perez_ratio,
    suite_pointwise,
)
from .varlp import luxemburg_norm, orlicz_norm

VERIFY_SUITES = {
    "pointwise": suite_pointwise,
    "transfer": duality_transfer_check,
    "czbound": cz_boundedness_suite,
}
ESTIMATE_SUITES = {
    "lerner": estimate_lerner_constant,
    "perez": estimate_perez_ratio,
    "commutator": estimate_commutator_norm,
}


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _out_dir(args) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    return Path(os.environ.get("VARLEX_OUTPUT_DIR", "varlex-reports"))


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="varlex")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="variable-exponent norm of a grid function")
    p.add_argument("--space", choices=("luxemburg", "orlicz"), required=True)
    p.add_argument("--function", "-f", required=True)
    p.add_argument("--exponent", "-p", required=True)

    p = sub.add_parser("maximal", help="maximal-operator family")
    p.add_argument("--op", choices=("M", "sharp", "localsharp", "bmo"), required=True)
    p.add_argument("--function", "-f", required=True)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--sides", choices=("auto", "all", "dyadic"), default="auto")

    p = sub.add_parser("transform", help="singular convolution / commutator")
    p.add_argument("--kernel", choices=("hilbert", "riesz1", "riesz2"), required=True)
    p.add_argument("--function", "-f", required=True)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--commutator", default=None, help="multiplier grid JSON")

    for name, choices in (("verify", VERIFY_SUITES), ("estimate", ESTIMATE_SUITES)):
        p = sub.add_parser(name)
        p.add_argument("suite", choices=sorted(choices))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--sizes", type=int, nargs="+", default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--lambda", dest="lam", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--kernel", choices=("hilbert", "riesz1", "riesz2"), default=None)
        p.add_argument("--out", default=None)

    p = sub.add_parser("report", help="report utilities")
    p.add_argument("action", choices=("merge",))
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out", default=None)

    return ap


def _cfg_from_args(args) -> ExperimentConfig:
    kw = {"seed": args.seed}
    if args.sizes:
        kw["grid_sizes"] = tuple(args.sizes)
    if args.trials:
        kw["trials"] = args.trials
        kw["perez_trials"] = min(args.trials, 8)
        kw["transfer_trials"] = args.trials
    if args.lam is not None:
        kw["lerner_lambda"] = args.lam
    if args.delta is not None:
        kw["perez_delta"] = args.delta
    if args.kernel:
        kw["kernel"] = args.kernel
    return ExperimentConfig(**kw)


def _print_report(rep) -> None:
    for c in rep.checks:
        line = f"[{c.status.upper():8s}] {rep.suite}/{c.name}"
        if c.lhs is not None:
            line += f"  lhs={c.lhs:.6g}"
        if c.rhs is not None:
            line += f" rhs={c.rhs:.6g}"
        print(line)
    for k, v in rep.estimates.items():
        print(f"[ESTIMATE] {k} = {v:.6g}")


def run_cli(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "norm":
            f = grid_function_from_json(_load_json(args.function))
            p = exponent_field_from_json(_load_json(args.exponent))
            fn = luxemburg_norm if args.space == "luxemburg" else orlicz_norm
            print(json.dumps(fn(f, p).to_json()))
            return 0

        if args.command == "maximal":
            f = grid_function_from_json(_load_json(args.function))
            cfg = MaximalConfig(side_mode=args.sides)
            if args.op == "bmo":
                print(json.dumps({"bmo_norm": bmo_norm(f, cfg)}))
                return 0
            if args.op == "M":
                out = hl_maximal(f, cfg)
            elif args.op == "sharp":
                out = sharp_delta(f, args.delta, cfg)
            else:
                out = local_sharp(f, args.lam, cfg)
            print(json.dumps(grid_function_to_json(out)))
            return 0

        if args.command == "transform":
            f = grid_function_from_json(_load_json(args.function))
            kern = (
                hilbert_kernel()
                if args.kernel == "hilbert"
                else riesz_kernel(1 if args.kernel == "riesz1" else 2)
            )
            if args.commutator:
                b = grid_function_from_json(_load_json(args.commutator))
                out = commutator_apply(b, f, kern)
            elif args.eps is not None:
                out = apply_truncated(kern, f, args.eps)
            else:
                out = apply_pv(kern, f)
            print(json.dumps(grid_function_to_json(out)))
            return 0
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command in ("verify", "estimate"):
        try:
            cfg = _cfg_from_args(args)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        table = VERIFY_SUITES if args.command == "verify" else ESTIMATE_SUITES
        rep = table[args.suite](cfg)
        jpath, cpath = rep.write(_out_dir(args))
        _print_report(rep)
        print(f"report: {jpath} {cpath}")
        return 0 if rep.passed else 1

    if args.command == "report":
        try:
            reports = [report_from_json(_load_json(p)) for p in args.inputs]
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        merged = merge_reports(reports)
        jpath, cpath = merged.write(_out_dir(args), basename="merged")
        print(f"report: {jpath} {cpath}")
        return 0 if merged.passed else 1

    return 2  # pragma: no cover


def main() -> None:
    if os.environ.get("VARLEX_THREADS") and _kernels.HAVE_NUMBA:
        import numba

        numba.set_num_threads(int(os.environ["VARLEX_THREADS"]))
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
