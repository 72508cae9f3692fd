"""Command line entry point: JSON reports on stdout, summaries on stderr.

Exit codes: 0 all checks pass, 2 a checked assertion failed, 3 bad input or
an unmet hypothesis.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ainfinity import parse_signs
from .bar import model_bar_table
from .errors import EvenMiddleDegree, HypothesisFailure, InputError
from .graded import GradedMap, finite_order_supertrace_audit
from .grassmann import DivisorSpec, involution_search, minimal_chern_grading, wplus_fano_check
from .picard_lefschetz import HomologyModel
from . import pipeline

EXIT_OK, EXIT_ASSERTION, EXIT_INPUT = 0, 2, 3


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(report: dict, summary: str, ok: bool) -> int:
    print(pipeline.dumps(report))
    print(summary, file=sys.stderr)
    return EXIT_OK if ok else EXIT_ASSERTION


def cmd_certificate(args) -> int:
    model = HomologyModel.from_json(_load_json(args.model))
    try:
        rep = pipeline.certificate(model, args.k_max, args.threshold)
    except EvenMiddleDegree as exc:
        report = {"refused": True, "reason": str(exc), "constant_trace": exc.constant_trace}
        print(pipeline.dumps(report))
        print(f"no certificate: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = rep.to_json()
    bounds = ", ".join(str(r["bound"]) for r in rep.rows)
    return _emit(out, f"certificate c={rep.c}: bounds {bounds}; passed={rep.passed}", rep.passed)


def cmd_bar(args) -> int:
    if args.k < 1:
        raise InputError("--k must be positive")
    em, en = parse_signs(args.signs)
    rows = model_bar_table(args.model, em, en, range(1, args.k + 1))
    dims = [r.dim for r in rows]
    formal = args.model.startswith("formal")
    checks = {"matches_closed_form": all(r.matches_closed_form and r.dim == r.closed_form_dim for r in rows)}
    if formal:
        checks["dims_equal_k"] = all(r.dim == r.k for r in rows)
    else:
        checks["bounded_by_2"] = max(dims) <= 2
    report = {
        "model": args.model,
        "signs": args.signs,
        "rows": [r.to_json() for r in rows],
        "checks": checks,
        "passed": all(checks.values()),
    }
    if not formal and em == en:
        report["open_question"] = {
            "quoted_claim": "dim H(B_k) is 0 or 1 depending on the parity of k",
            "computed": dims,
            "consistent": all(d <= 1 for d in dims),
        }
    return _emit(report, f"bar {args.model} {args.signs}: dims {dims}", report["passed"])


def cmd_grassmann_search(args) -> int:
    rep = involution_search(args.p, args.q)
    return _emit(
        rep.to_json(),
        f"Gr({2 * args.p + 1},{2 * args.q}): l={rep.l}, violating t={rep.violating_t}, sign {rep.sign_choice}",
        rep.passed,
    )


def cmd_grassmann_check(args) -> int:
    spec = DivisorSpec(args.k, args.n, args.d)
    w = wplus_fano_check(spec)
    report = {"spec": spec.to_json(), **w.to_json(), "excluded": w.below_threshold}
    if w.wplus and w.fano:
        report["grading"] = minimal_chern_grading(spec).to_json()
    return _emit(report, f"{spec.to_json()}: wplus={w.wplus} fano={w.fano} dim_even={w.dim_even}", True)


def cmd_ring(args) -> int:
    rep = pipeline.ring_classification(DivisorSpec(args.k, args.n, args.d), args.k_max)
    return _emit(rep.to_json(), f"ring via {rep.path}: {rep.verdict}", rep.verdict == pipeline.RING_VERDICT)


def cmd_spectral_flow(args) -> int:
    from .spectral_flow import verify

    rep = verify(args.trials, args.seed, args.steps)
    summary = (
        f"spectral flow: closed form error {rep['closed_form']['max_error']:.2e}, "
        f"kernel dims {rep['kernel_dims']}, {rep['agreements']}/{rep['trials']} crossing trials agree"
    )
    return _emit(rep, summary, rep["passed"])


def cmd_str_audit(args) -> int:
    m = GradedMap.from_json(_load_json(args.input))
    rep = finite_order_supertrace_audit(m, args.order)
    return _emit(rep.to_json(), f"STr audit: |a|={rep.abs_value:.6g} <= {rep.dim}: {rep.passed}", rep.passed)


def cmd_lag_bound(args) -> int:
    return _emit({"intersection": args.intersection, "bound": pipeline.lag_bound(args.intersection)}, "lag bound", True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certificate", help="infinite-order certificate from a homology model")
    p.add_argument("--model", required=True, help="HomologyModel JSON file")
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--threshold", type=int, default=pipeline.DEFAULT_THRESHOLD)
    p.set_defaults(func=cmd_certificate)

    p = sub.add_parser("bar", help="truncated bar homology of the model modules")
    p.add_argument("--model", choices=("formal", "deformed", "formal_x2", "deformed_x2m1"), required=True)
    p.add_argument("--signs", default="++")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_bar)

    g = sub.add_parser("grassmann", help="Grassmannian divisor combinatorics")
    gsub = g.add_subparsers(dest="grassmann_command", required=True)
    p = gsub.add_parser("search", help="involution search on Gr(2p+1, 2q)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_grassmann_search)
    p = gsub.add_parser("check", help="W+/Fano/grading predicates for a degree-d divisor in Gr(k,n)")
    for name in ("--k", "--n", "--d"):
        p.add_argument(name, type=int, required=True)
    p.set_defaults(func=cmd_grassmann_check)

    p = sub.add_parser("ring", help="Floer cohomology ring classification for a Grassmannian divisor")
    for name in ("--k", "--n", "--d"):
        p.add_argument(name, type=int, required=True)
    p.add_argument("--k-max", type=int, default=8)
    p.set_defaults(func=cmd_ring)

    s = sub.add_parser("spectral-flow", help="monodromy and crossing-parity checks")
    ssub = s.add_subparsers(dest="sf_command", required=True)
    p = ssub.add_parser("verify")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=200)
    p.set_defaults(func=cmd_spectral_flow)

    s = sub.add_parser("str", help="supertrace audits")
    ssub = s.add_subparsers(dest="str_command", required=True)
    p = ssub.add_parser("audit")
    p.add_argument("--input", required=True, help="GradedMap JSON file")
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_str_audit)

    p = sub.add_parser("lag-bound", help="|intersection number| lower bound")
    p.add_argument("--intersection", type=int, required=True)
    p.set_defaults(func=cmd_lag_bound)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisFailure as exc:
        print(pipeline.dumps({"error": "hypothesis", "gate": exc.gate, "detail": str(exc)}))
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ValueError) as exc:
        print(pipeline.dumps({"error": "input", "detail": str(exc)}))
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
