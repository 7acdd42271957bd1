"""Command line front end.

    stormer-kit <check-psd|block-check|stormer-check|decompose|make-state|
                 ppt-check|map-test|selftest> [flags] [files]

Exit codes: 0 when the tested condition holds (or the run succeeded), 1 when
it fails (or a witness against a map was found), 2 on malformed input.
Reports go to stdout (JSON with --json), diagnostics to stderr; identical
inputs, flags, and seed produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .blocks import Partition2, assemble, psd_oracle, psd_via_contraction
from .errors import InputError, StormerKitError
from .io import (
    block_to_payload,
    load_block,
    load_map_spec,
    load_matrix,
    load_partition_blocks,
    matrix_to_payload,
    render_report,
)
from .linalg import Tolerance, adjoint, is_psd, op_norm
from .maps import theorem1_necessity_trial, witness_search
from .selftest import run_selftest
from .states import (
    DensityState,
    is_ppt,
    partial_transpose,
    separable_decomposition,
    separable_state,
    state_from_block,
)
from .stormer import (
    OperatorPair,
    canonical_decomposition,
    gram_block,
    reconstruct_block,
    stormer_test,
    swap_block,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _tol(args) -> Tolerance:
    return Tolerance(abs_eps=args.tol_abs, rel_eps=args.tol_rel)


def _report(args, command, verdict, metrics=None, artifacts=None, message=None):
    report = {
        "command": command,
        "verdict": verdict,
        "metrics": metrics or {},
        "artifacts": artifacts or {},
        "seed": int(args.seed),
        "tolerance": {
            "abs_eps": float(args.tol_abs),
            "rel_eps": float(args.tol_rel),
            "rcond": float(args.rcond),
        },
    }
    if message is not None:
        report["message"] = message
    return report


def _min_eig(m) -> float:
    return float(np.linalg.eigvalsh(0.5 * (m + adjoint(m)))[0])


def _verdict(flag: bool) -> str:
    return "true" if flag else "false"


def _load_pair(args) -> OperatorPair:
    return OperatorPair(load_matrix(args.a1), load_matrix(args.a2))


def cmd_check_psd(args):
    m = load_matrix(args.file)
    tol = _tol(args)
    ok = is_psd(m, tol)
    metrics = {"min_eig": _min_eig(m), "op_norm": op_norm(m)}
    return _report(args, "check-psd", _verdict(ok), metrics), EXIT_OK if ok else EXIT_FAIL


def cmd_block_check(args):
    a, b, c = load_partition_blocks(args.file)
    p = Partition2(a, b, c)
    tol = _tol(args)
    cert = psd_via_contraction(p, tol, args.rcond)
    oracle = psd_oracle(p, tol)
    metrics = {
        "min_eig": _min_eig(assemble(p)),
        "oracle_psd": int(oracle),
        "factorization_psd": int(cert.psd),
    }
    if math.isfinite(cert.residual):
        metrics["residual"] = float(cert.residual)
    if cert.w is not None:
        metrics["contraction_norm"] = op_norm(cert.w)
    return _report(args, "block-check", _verdict(cert.psd), metrics), (
        EXIT_OK if cert.psd else EXIT_FAIL
    )


def cmd_stormer_check(args):
    if args.block is not None:
        x = load_block(args.block)
    elif args.a1 is not None and args.a2 is not None:
        x = gram_block(_load_pair(args))
    else:
        raise InputError("pass either --block or both --a1 and --a2")
    tol = _tol(args)
    ok = stormer_test(x, tol)
    metrics = {
        "min_eig_direct": _min_eig(x.assembled()),
        "min_eig_swapped": _min_eig(swap_block(x).assembled()),
    }
    return _report(args, "stormer-check", _verdict(ok), metrics), (
        EXIT_OK if ok else EXIT_FAIL
    )


def cmd_decompose(args):
    pair = _load_pair(args)
    tol = _tol(args)
    x = gram_block(pair)
    metrics = {
        "min_eig_direct": _min_eig(x.assembled()),
        "min_eig_swapped": _min_eig(swap_block(x).assembled()),
    }
    try:
        dec = canonical_decomposition(pair, tol, args.rcond)
    except StormerKitError as exc:
        verdict = "degenerate" if "degenerate" in str(exc) else "false"
        return _report(args, "decompose", verdict, metrics, message=str(exc)), EXIT_FAIL
    rec = reconstruct_block(dec).assembled()
    ref = x.assembled()
    metrics["residual"] = float(np.linalg.norm(rec - ref) / max(np.linalg.norm(ref), 1e-300))
    artifacts = {
        "alphas": [float(a) for a in dec.alphas],
        "lambdas": [[float(l.real), float(l.imag)] for l in dec.lambdas],
        "phis": matrix_to_payload(dec.phis),
        "es": matrix_to_payload(dec.es),
    }
    verdict = "degenerate" if dec.degenerate else "true"
    return _report(args, "decompose", verdict, metrics, artifacts), EXIT_OK


def cmd_make_state(args):
    pair = _load_pair(args)
    tol = _tol(args)
    x = gram_block(pair)
    rho = state_from_block(x, tol)
    metrics = {"min_eig_state": _min_eig(rho.matrix)}
    try:
        dec = canonical_decomposition(pair, tol, args.rcond)
    except StormerKitError as exc:
        return _report(args, "make-state", "false", metrics, message=str(exc)), EXIT_FAIL
    sep = separable_decomposition(dec)
    metrics["residual"] = float(
        np.linalg.norm(separable_state(sep) - rho.matrix) / np.linalg.norm(rho.matrix)
    )
    ppt = is_ppt(rho, tol)
    metrics["min_eig_partial_transpose"] = _min_eig(partial_transpose(rho, 1))
    metrics["ppt"] = int(ppt)
    artifacts = {
        "state": matrix_to_payload(rho.matrix),
        "weights": [float(w) for w in sep.weights],
        "factor1": matrix_to_payload(sep.factor1),
        "factor2": matrix_to_payload(sep.factor2),
    }
    return _report(args, "make-state", _verdict(ppt), metrics, artifacts), (
        EXIT_OK if ppt else EXIT_FAIL
    )


def cmd_ppt_check(args):
    m = load_matrix(args.state)
    rho = DensityState((args.n, args.d), m)
    tol = _tol(args)
    ppt = is_ppt(rho, tol)
    metrics = {"min_eig_partial_transpose": _min_eig(partial_transpose(rho, 1))}
    return _report(args, "ppt-check", _verdict(ppt), metrics), (
        EXIT_OK if ppt else EXIT_FAIL
    )


def cmd_map_test(args):
    phi = load_map_spec(args.map)
    tol = _tol(args)
    d = args.d if args.d is not None else phi.input_dim
    if d is None:
        raise StormerKitError("map does not fix a dimension; pass --d")
    rep = theorem1_necessity_trial(
        phi, seed=args.seed, trials=args.trials, n=args.n, d=d, tol=tol
    )
    metrics = {
        "trials": rep.trials,
        "violations": rep.violations,
        "worst_min_eig": float(rep.worst_min_eig),
    }
    if rep.violations > 0:
        return _report(args, "map-test", "false", metrics), EXIT_FAIL
    if args.witness_budget > 0:
        found = witness_search(
            phi, seed=args.seed, budget=args.witness_budget, n=args.n, d=d, tol=tol
        )
        if found is not None:
            metrics["witness_min_eig"] = float(found.min_eig)
            metrics["witness_evaluations"] = found.evaluations
            artifacts = {"witness": block_to_payload(found.block)}
            return _report(args, "map-test", "false", metrics, artifacts), EXIT_FAIL
        metrics["witness_evaluations"] = args.witness_budget
        return _report(args, "map-test", "inconclusive", metrics), EXIT_OK
    return _report(args, "map-test", "true", metrics), EXIT_OK


def cmd_selftest(args):
    result = run_selftest(seed=args.seed, tol=_tol(args))
    metrics = {name: int(suite["passed"]) for name, suite in result["suites"].items()}
    artifacts = {"suites": result["suites"]}
    ok = result["passed"]
    return _report(args, "selftest", _verdict(ok), metrics, artifacts), (
        EXIT_OK if ok else EXIT_FAIL
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-abs", type=float, default=1e-10, help="absolute tolerance")
    common.add_argument("--tol-rel", type=float, default=1e-9, help="relative tolerance")
    common.add_argument("--rcond", type=float, default=1e-12, help="pseudoinverse cutoff")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized runs")
    common.add_argument("--json", action="store_true", help="machine-readable report")

    parser = argparse.ArgumentParser(
        prog="stormer-kit",
        description="Block-matrix positivity and decomposability analysis tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-psd", parents=[common], help="PSD test of a matrix file")
    p.add_argument("file")
    p.set_defaults(handler=cmd_check_psd)

    p = sub.add_parser(
        "block-check",
        parents=[common],
        help="positivity of a partition {A,B,C} via contraction factorization",
    )
    p.add_argument("file")
    p.set_defaults(handler=cmd_block_check)

    p = sub.add_parser(
        "stormer-check",
        parents=[common],
        help="two-sided positivity of a Gram pair or a block file",
    )
    p.add_argument("--a1", help="matrix file for the first operator")
    p.add_argument("--a2", help="matrix file for the second operator")
    p.add_argument("--block", help="block matrix file")
    p.set_defaults(handler=cmd_stormer_check)

    p = sub.add_parser(
        "decompose", parents=[common], help="canonical decomposition of a Gram pair"
    )
    p.add_argument("--a1", required=True)
    p.add_argument("--a2", required=True)
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser(
        "make-state",
        parents=[common],
        help="normalized state, separable decomposition, and PPT verdict of a pair",
    )
    p.add_argument("--a1", required=True)
    p.add_argument("--a2", required=True)
    p.set_defaults(handler=cmd_make_state)

    p = sub.add_parser("ppt-check", parents=[common], help="PPT test of a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--n", type=int, required=True, help="first factor dimension")
    p.add_argument("--d", type=int, required=True, help="second factor dimension")
    p.set_defaults(handler=cmd_ppt_check)

    p = sub.add_parser(
        "map-test",
        parents=[common],
        help="necessity trials and optional witness search for a positive map",
    )
    p.add_argument("--map", required=True, help="identity | transpose | choi3 | spec file")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--n", type=int, default=2, help="block count of trial matrices")
    p.add_argument("--d", type=int, default=None, help="block dimension (defaults to the map's)")
    p.add_argument("--witness-budget", type=int, default=0)
    p.set_defaults(handler=cmd_map_test)

    p = sub.add_parser("selftest", parents=[common], help="reduced invariant suites")
    p.set_defaults(handler=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.handler(args)
    except StormerKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # malformed input must never produce a traceback
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render_report(report, args.json))
    return code


if __name__ == "__main__":
    sys.exit(main())
