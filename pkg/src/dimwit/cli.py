"""Command-line front end.

Exit codes: 0 success or null verdict, 1 violation (or failed check), 2 input error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

CLOSED_FORM_DEFAULT = {
    (3, 2, "real"): "n3d2_rank3",
    (3, 2, "complex"): "n3d2_rank3",
    (4, 2, "complex"): "n4d2_complex",
    (4, 3, "real"): "n4d3",
    (4, 3, "complex"): "n4d3",
    (5, 3, "real"): "n5d3_real",
    (5, 3, "complex"): "n5d3_complex",
    (5, 4, "real"): "n5d4",
    (5, 4, "complex"): "n5d4",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, default=_jsonable))
    else:
        print(text)


def _fmt_matrix(m, fmt="{:10.6f}") -> str:
    return "\n".join("  " + " ".join(fmt.format(x) for x in row) for row in np.asarray(m))


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DIMWIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"DIMWIT_SEED must be an integer, got {env!r}") from None


# -- subcommands -------------------------------------------------------------


def cmd_ideal(args) -> int:
    from .circuit import ideal_probability_matrix
    from .linalg import adjugate
    from .witness import Model, rank_threshold, witness

    p = ideal_probability_matrix(decompose_ecr=args.decompose_ecr)
    W = witness(p)
    adj = adjugate(p)
    n = p.shape[0]
    # The witness sits on the d=2 complex threshold: n = d**2 + 1.
    forced = n >= rank_threshold(2, Model.QUANTUM_COMPLEX)
    payload = {
        "p": p, "adjugate": adj, "W": W, "n": n,
        "decompose_ecr": args.decompose_ecr,
        "rank_verdict": "forced-zero (qubit pair)" if forced else "not forced",
    }
    text = "\n".join([
        f"ideal probability matrix (ECR decomposed: {args.decompose_ecr}):",
        _fmt_matrix(p),
        "adjugate x 512:",
        _fmt_matrix(adj * 512, "{:7.3f}"),
        f"W = {W:+.3e}",
        f"rank verdict: {payload['rank_verdict']}",
    ])
    _emit(args, payload, text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    from .circuit import ideal_probability_matrix
    from .experiment import save_dataset, synthetic_dataset

    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if not args.out:
        raise UsageError("simulate needs --out")
    seed = _seed(args)
    p = ideal_probability_matrix(decompose_ecr=args.decompose_ecr)
    labels = [args.scheduling] * args.jobs
    ds = synthetic_dataset(p, args.shots, args.jobs, seed, labels)
    save_dataset(ds, args.out)
    payload = {"seed": seed, "shots_per_cell": args.shots, "jobs": args.jobs, "out": args.out}
    _emit(args, payload, f"seed {seed}: wrote {args.jobs} job(s) x {args.shots} shots to {args.out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    from .experiment import full_report, load_dataset, per_job_csv, report_text

    if not args.input:
        raise UsageError("analyze needs --in")
    ds = load_dataset(args.input)
    report = full_report(ds, args.sigma)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(per_job_csv(ds))
    _emit(args, report, report_text(report))
    return EXIT_VIOLATION if report["verdict"] == "violated" else EXIT_OK


def cmd_maxima(args) -> int:
    mode = args.mode
    if mode == "classical":
        from .maxima import CLASSICAL_MAXIMA, OutOfExhaustiveRange, classical_max_det

        try:
            value, mat = classical_max_det(args.n)
        except OutOfExhaustiveRange as exc:
            raise UsageError(str(exc)) from None
        ref = CLASSICAL_MAXIMA.get(args.n)
        payload = {"mode": mode, "n": args.n, "value": value, "reference": ref,
                   "abs_error": abs(value - ref), "matrix": mat}
        text = f"classical n={args.n}: max |W| = {value} (reference {ref})\n" + _fmt_matrix(mat, "{:2.0f}")
    elif mode == "closed-form":
        from .maxima import case_report

        case = args.case or CLOSED_FORM_DEFAULT.get((args.n, args.d, args.field))
        if case is None:
            raise UsageError(f"no closed-form configuration for n={args.n} d={args.d} {args.field}")
        try:
            rep = case_report(case)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        payload = {"mode": mode, **rep}
        text = (f"closed form {rep['case']}: |W| = {rep['value']:.15g} "
                f"(reference {rep['reference']:.15g}, error {rep['abs_error']:.2e})")
    else:
        from .maxima import QUANTUM_MAXIMA, AnnealConfig, anneal_quantum_max, with_overrides

        seed = _seed(args)
        try:
            cfg = with_overrides(
                AnnealConfig(seed=seed), restarts=args.restarts,
                steps_per_temperature=args.steps, cooling_rate=args.cooling,
            )
            res = anneal_quantum_max(args.n, args.d, args.field, cfg)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        ref = QUANTUM_MAXIMA.get((args.n, args.d, args.field))
        if ref is None and args.field == "complex":
            ref = QUANTUM_MAXIMA.get((args.n, args.d, "real")) if args.d == 4 else None
        payload = {
            "mode": mode, "seed": seed, "n": args.n, "d": args.d, "field": args.field,
            "value": res.value, "reference": ref,
            "abs_error": None if ref is None else abs(res.value - ref),
            "restart_values": list(res.restart_values),
            "config": res.config.to_json() if args.format == "json" else None,
        }
        ref_txt = "n/a" if ref is None else f"{ref:.10g}, error {abs(res.value - ref):.2e}"
        text = (f"seed {seed}: anneal n={args.n} d={args.d} {args.field}: "
                f"|W| = {res.value:.10g} (reference {ref_txt})")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_gates(args) -> int:
    from .gates import verify_gate_identities

    results = verify_gate_identities(corrupt=args.corrupt)
    ok = all(passed for _, passed in results)
    payload = {"all_pass": ok, "identities": [{"name": n, "pass": p} for n, p in results]}
    text = "\n".join(f"{'PASS' if p else 'FAIL'}  {n}" for n, p in results)
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_VIOLATION


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $DIMWIT_SEED or 0)")

    parser = _Parser(prog="dimwit", description="Determinant dimension witness toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ideal", parents=[common], help="ideal 5x5 probabilities of the test circuit")
    p.add_argument("--decompose-ecr", action="store_true")
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("simulate", parents=[common], help="write a synthetic count dataset")
    p.add_argument("--shots", type=int, default=20000, help="shots per cell per job")
    p.add_argument("--jobs", type=int, default=10)
    p.add_argument("--scheduling", choices=("ALAP", "ASAP", "unspecified"), default="unspecified")
    p.add_argument("--decompose-ecr", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", parents=[common], help="pooled and per-job witness of a dataset")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--sigma", type=float, default=6.0, help="violation threshold in standard errors")
    p.add_argument("--csv", help="also write per-job W values to this CSV file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("maxima", parents=[common], help="extremal witness values")
    p.add_argument("--mode", choices=("anneal", "closed-form", "classical"), default="anneal")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--field", choices=("real", "complex"), default="complex")
    p.add_argument("--case", help="closed-form case name (overrides the n/d/field lookup)")
    p.add_argument("--restarts", type=int)
    p.add_argument("--steps", type=int, help="annealing steps per temperature")
    p.add_argument("--cooling", type=float, help="annealing cooling rate")
    p.set_defaults(func=cmd_maxima)

    p = sub.add_parser("gates", parents=[common], help="verify gate transpilation identities")
    p.add_argument("--corrupt", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_gates)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    from .experiment import DatasetParseError
    from .states import ValidationError

    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DatasetParseError, ValidationError) as exc:
        print(f"dimwit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"dimwit {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
