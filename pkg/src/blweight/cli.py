"""Command-line entry point.

Exit codes: 0 when a verdict was computed (whatever it says), 1 when a
hypothesis or precondition fails, 2 for malformed input or usage, 3 when an
internal invariant breaks.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .decomposition import decompose, naive_spread, weight_shift_report
from .errors import InputError, InvariantError, PreconditionError
from .feasibility import (check_necessary, check_subspace, check_subspace_strict, check_sufficient,
                          classify, sufficient_index_violations)
from .instance_io import (Instance, classification_to_dict, family_to_dict, fit_to_csv, flat_label,
                          flat_to_dict, integrability_to_dict, load_bundled, load_instance, make_report,
                          slope_result_to_dict, verdict_to_dict, vertices_to_dict, violation_to_dict,
                          write_report)
from .structure import closure, enumerate_flats, extend_generic, is_generic

EXIT_OK, EXIT_PRECONDITION, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
DEMO_FIXTURE = "example3_counterexample.json"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _scales(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad scale list {text!r}") from None
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="blweight", description="Exact feasibility checks and numerics for weighted multilinear forms.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, instance=True):
        sp = sub.add_parser(name, help=help_text)
        if instance:
            sp.add_argument("instance", help="instance JSON file")
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")
        sp.add_argument("--flat-cap", type=_positive_int, help="maximum N for flat enumeration")
        return sp

    sp = add("generic", "genericity verdict")
    sp.add_argument("--extend", action="store_true", help="also produce a vector keeping the set generic")
    add("check", "sufficient and necessary verdicts with per-constraint detail")
    add("classify", "sufficient_interior / necessary_only / infeasible")
    add("flats", "list the flats")
    add("decompose", "redistribute negative weight exponents")
    for name, text in (("vertices", "vertices of the necessary-condition polytope"),
                       ("interior-point", "an interior point by maximizing the least slack")):
        sp = add(name, text)
        sp.add_argument("--slice-lambda-zero", action="store_true", help="restrict to lambda = 0")
        sp.add_argument("--vertex-cap", type=_positive_int, help="maximum 2N for vertex enumeration")
    sp = add("estimate", "Monte Carlo growth experiments")
    sp.add_argument("--test", required=True, choices=["scaling", "subspace", "translation", "integrability"])
    sp.add_argument("--flat", help="comma-separated 1-based indices of a flat (subspace/translation)")
    sp.add_argument("--samples", type=_positive_int, default=10 ** 6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--epsilon", type=float, default=0.05, help="integrability exponent slack")
    sp.add_argument("--terms", type=_positive_int, default=1 << 12, help="integrability truncation L")
    sp.add_argument("--scales", type=_scales, help="comma-separated increasing scale grid")
    sp.add_argument("--csv", help="write (scale, estimate, stderr) rows here")
    sp.add_argument("--threads", type=_positive_int, default=1)
    add("demo-counterexample", "non-generic example where the naive redistribution fails", instance=False)
    return p


def _load(args, need_indices: bool = False, noncollinear: bool = False) -> Instance:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        inst = load_instance(args.instance, require_noncollinear=noncollinear)
    if need_indices and inst.indices is None:
        raise InputError(f"{args.instance}: this command needs an 'indices' block")
    return inst


def _flats(args, E):
    return enumerate_flats(E, args.flat_cap)


def _parse_flat(text: str | None, E):
    if text is None:
        raise InputError("--flat is required for this test")
    try:
        idx = [int(t) - 1 for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"--flat: bad index list {text!r}") from None
    if any(not 0 <= j < E.N for j in idx):
        raise InputError(f"--flat: indices must lie in 1..{E.N}")
    F = closure(idx, E)
    if set(F.members) != set(idx):
        raise InputError(f"--flat: {flat_label(sorted(set(idx)))} is not closed; its closure is {F.label()}")
    return F


def subspace_table(E, ix, flats) -> list[dict]:
    """Strict and non-strict subspace rows per flat, side by side."""
    w = ix.weights()
    rows = []
    for F in flats:
        lhs = sum((w[j] for j in range(E.N) if j not in F.members), Fraction(0))
        row = {"flat": F.label(), "rank": F.rank, "lhs": lhs, "nonstrict_rhs": E.m - F.rank,
               "nonstrict_holds": lhs >= E.m - F.rank}
        dim = max(F.rank, 1)
        if dim <= E.m - 1:
            row.update(strict_rhs=E.m - dim, strict_holds=lhs > E.m - dim)
        else:
            row.update(strict_rhs=None, strict_holds=None)
        rows.append(row)
    return rows


def cmd_generic(args):
    inst = _load(args)
    E = inst.vectors
    out = {"generic": is_generic(E), "m": E.m, "N": E.N}
    if args.extend:
        out["extension"] = extend_generic(E)
    return make_report("generic", **out)


def cmd_check(args):
    E, ix = _load(args, need_indices=True)
    flats = _flats(args, E)
    out = {"sufficient": verdict_to_dict(check_sufficient(E, ix, flats)), "subspace_table": subspace_table(E, ix, flats)}
    if E.collinear_pairs():
        out["necessary"] = None
        out["necessary_skipped"] = "collinear pair present"
    else:
        out["necessary"] = verdict_to_dict(check_necessary(E, ix, flats))
    return make_report("check", **out)


def cmd_classify(args):
    E, ix = _load(args, need_indices=True)
    return make_report("classify", **classification_to_dict(classify(E, ix, _flats(args, E))))


def cmd_flats(args):
    E = _load(args).vectors
    flats = _flats(args, E)
    return make_report("flats", count=len(flats), flats=[flat_to_dict(F) for F in flats])


def cmd_decompose(args):
    E, ix = _load(args, need_indices=True)
    fam = decompose(E, ix, _flats(args, E))
    shifts = [{"path": [j + 1 for j in leaf.alpha_path], "shift": s} for leaf, s in weight_shift_report(fam)]
    return make_report("decompose", family=family_to_dict(fam), weight_shifts=shifts)


def _system(args):
    from .polytope import build_system, with_lambda_zero
    E = _load(args, noncollinear=True).vectors
    system = build_system(E, flats=_flats(args, E))
    return with_lambda_zero(system) if args.slice_lambda_zero else system


def cmd_vertices(args):
    from .polytope import enumerate_vertices
    system = _system(args)
    verts = enumerate_vertices(system, args.vertex_cap)
    return make_report("vertices", slice_lambda_zero=args.slice_lambda_zero, **vertices_to_dict(system, verts))


def cmd_interior_point(args):
    from .polytope import chebyshev_like_interior_point
    pt = chebyshev_like_interior_point(_system(args))
    body = None if pt is None else {"point": pt.point, "min_slack": pt.min_slack}
    return make_report("interior_point", slice_lambda_zero=args.slice_lambda_zero, interior_point=body)


def cmd_estimate(args):
    from . import estimator as est
    E, ix = _load(args, need_indices=True)
    if args.test == "integrability":
        rep = est.integrability_test(E, ix, args.epsilon, args.terms)
        return make_report("estimate", backend=est.BACKEND, **integrability_to_dict(rep))
    kw = dict(samples=args.samples, seed=args.seed, threads=args.threads)
    if args.scales is not None:
        kw["scales"] = args.scales
    if args.test == "scaling":
        res = est.scaling_slope_test(E, ix, **kw)
    else:
        F = _parse_flat(args.flat, E)
        fn = est.subspace_slope_test if args.test == "subspace" else est.translation_test
        res = fn(E, ix, F, **kw)
    if args.csv:
        Path(args.csv).write_text(fit_to_csv(res.fit))
    return make_report("estimate", backend=est.BACKEND, samples=args.samples, seed=args.seed,
                       **slope_result_to_dict(res))


def demo_counterexample() -> dict:
    """Non-generic demo: check the index vector, spread along 2 v1 = v2 + v4, recheck."""
    E, ix = load_bundled(DEMO_FIXTURE)
    flats = enumerate_flats(E)
    index_violations = sufficient_index_violations(E, ix, flats)
    necessary = check_necessary(E, ix, flats)
    flat = closure([0, 2, 4], E)
    branches = []
    for j, beta in naive_spread(E, ix, target=0, basis=[1, 3]):
        trial = ix.with_lambda(beta)
        bad = [v for v in check_subspace(E, trial, flats) if v.where == flat.members]
        strict_bad = [v for v in check_subspace_strict(E, trial, flats) if v.where == flat.members]
        branches.append({"branch": f"beta^({j + 1},0)", "beta": beta,
                         "necessary_subspace_violations_at_flat": [violation_to_dict(v) for v in bad],
                         "strict_subspace_violations_at_flat": [violation_to_dict(v) for v in strict_bad],
                         "fails_at_flat": bool(bad)})
    return make_report("demo_counterexample",
                       instance=DEMO_FIXTURE,
                       generic=is_generic(E),
                       index_conditions_hold=not index_violations,
                       index_violations=[violation_to_dict(v) for v in index_violations],
                       necessary=verdict_to_dict(necessary),
                       dependency="2 v1 = v2 + v4",
                       flat=flat.label(),
                       bound=E.m - flat.rank,
                       branches=branches,
                       all_branches_fail=all(b["fails_at_flat"] for b in branches))


COMMANDS = {
    "generic": cmd_generic, "check": cmd_check, "classify": cmd_classify, "flats": cmd_flats,
    "decompose": cmd_decompose, "vertices": cmd_vertices, "interior-point": cmd_interior_point,
    "estimate": cmd_estimate, "demo-counterexample": lambda args: demo_counterexample(),
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report = COMMANDS[args.command](args)
        text = write_report(report)
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
