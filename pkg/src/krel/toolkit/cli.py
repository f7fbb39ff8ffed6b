"""Command-line interface.

Exit codes: 0 all checks pass, 1 a violation was found, 2 usage or parse
error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .. import extensions as X
from .. import spectra as S
from .. import weyl as W
from ..errors import InternalInvariantViolation, KrelError, PreconditionFailed
from ..krein import KreinSpace, reference_decomposition
from ..relation import (L_T, Relation, classify, intersect, is_dissipative, is_selfadjoint, is_symmetric,
                        make_relation)
from .render import FORMATS, parse_window, render_locus
from .serialize import InstanceFile, load, save
from .suite import CLAIM_GROUPS, SuiteConfig, run_suite, single_instance_report

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
CLAIMS = ("1.3a", "1.3b", "1.3c", "2.2", "7.1", "7.2", "all")
FORMULA_POINT = 2j


def _fmt(z) -> str:
    z = complex(z)
    re = 0.0 if abs(z.real) < 1e-12 else z.real
    im = 0.0 if abs(z.imag) < 1e-12 else z.imag
    return f"{re:.10g}{im:+.10g}i"


def _spec_text(spec) -> str:
    if spec.all_of_C:
        return "all of C"
    if not spec.eigenvalues:
        return "empty"
    return ", ".join(f"{_fmt(mu)} (x{k})" for mu, k in sorted(spec.eigenvalues, key=lambda e: (round(e[0].imag, 9), round(e[0].real, 9))))


# -- examples ------------------------------------------------------------------------

def two_dimensional_example(beta=1.0):
    """The two-dimensional symmetric T, its self-adjoint extension T0 and N = T0 meet Sigma."""
    sp = KreinSpace(1, 1)
    T = make_relation(sp, [[1.0], [0.0]], [[0.0], [-beta]])
    T0 = make_relation(sp, np.eye(2), [[0.0, beta], [-beta, 0.0]])
    N = make_relation(sp, [[0.0], [1.0]], [[beta], [0.0]])
    return T, T0, N


# -- commands ------------------------------------------------------------------------

def cmd_locus(args) -> int:
    data = render_locus(args.m, args.p, parse_window(args.window), args.res, args.format)
    Path(args.out).write_bytes(data)
    print(f"wrote {args.out} ({len(data)} bytes)")
    return EXIT_OK


def _inspect_data(f: InstanceFile) -> dict:
    T = f.T
    sp = T.space
    R = reference_decomposition(sp)
    flags = classify(T, R)
    out = {
        "signature": [sp.kappa_minus, sp.kappa_plus],
        "dim": T.d,
        "dim_domain": T.domain().dim,
        "dim_range": T.range().dim,
        "dim_mul": T.mul().dim,
        "dim_ker": T.ker().dim,
        "dim_adjoint": T.adjoint().d,
        "classes": flags.as_dict(),
        "dim_L_T": L_T(T).dim,
        "meta": f.meta,
    }
    if flags.class_L:
        loc = S.locus_params(T, R)
        out["locus"] = {"m": loc.m, "p": loc.p}
    if f.ext_F is not None:
        E = f.extension
        out["extension"] = {"dim": E.d, "selfadjoint": is_selfadjoint(E), "dissipative": is_dissipative(E),
                            "contains_T": E.contains(T)}
    return out


def cmd_inspect(args) -> int:
    data = _inspect_data(load(args.file))
    if args.json:
        print(json.dumps(data, indent=1, sort_keys=True, default=str))
        return EXIT_OK
    print(f"signature (kappa-, kappa+) = {tuple(data['signature'])}")
    print(f"dim T = {data['dim']}, dim T^c = {data['dim_adjoint']}")
    print(f"dim D_T = {data['dim_domain']}, dim R_T = {data['dim_range']}, "
          f"dim Ind T = {data['dim_mul']}, dim Ker T = {data['dim_ker']}")
    print("classes: " + ", ".join(f"{k}={v}" for k, v in data["classes"].items()))
    print(f"dim L_T = {data['dim_L_T']}")
    if "locus" in data:
        print(f"locus: m = {data['locus']['m']:.10g}, p = {data['locus']['p']:.10g}")
    if "extension" in data:
        e = data["extension"]
        print(f"extension: dim {e['dim']}, selfadjoint={e['selfadjoint']}, dissipative={e['dissipative']}, "
              f"contains T={e['contains_T']}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    f = load(args.file)
    T = f.T
    print(f"sigma_p(T) = {_spec_text(S.point_spectrum(T))}")
    print(f"sigma_p(T^c) = {_spec_text(S.point_spectrum(T.adjoint()))}")
    T0 = f.extension
    if T0 is not None:
        print(f"sigma_p(T0) = {_spec_text(S.point_spectrum(T0))}")
    if is_symmetric(T):
        d = X.deficiency(T)
        print(f"sigma_p(Sigma) = {_spec_text(S.point_spectrum(d.Sigma))}")
        if T0 is not None:
            N = intersect(T0, d.Sigma)
            print(f"sigma_p(N) = {_spec_text(S.point_spectrum(N))}  (N = T0 meet Sigma, dim {N.d})")
            if intersect(T, N).d == 0:
                for lam in (1j, -1j, 2j, 1 + 1j):
                    q = X.o_set_query(T, N, lam)
                    print(f"O-set at {_fmt(lam)}: {'member' if q.member else 'not a member'}")
    return EXIT_OK


def _selfadjoint_target(T, T0):
    for A in (T0, T):
        if A is not None and is_selfadjoint(A):
            return A
    return None


def _verify(T: Relation, T0, claim: str):
    """Reports for one claim; missing hypotheses raise PreconditionFailed."""
    R = reference_decomposition(T.space)
    reps = []
    if claim in ("1.3a", "1.3b", "1.3c"):
        if T0 is None:
            raise PreconditionFailed("an extension T0 is required")
        reps.append(S.verify_eigenvalue_location(T, T0, R, parts=(claim[-1],)))
    elif claim == "2.2":
        hit = False
        for A in (T, T0):
            if A is None:
                continue
            if is_selfadjoint(A):
                reps.append(S.verify_half_plane_resolvent(A, R)); hit = True
            elif is_dissipative(A) and A.d == A.n:
                reps.append(S.verify_half_plane_resolvent(A, R, variant="dissipative")); hit = True
        if is_symmetric(T):
            reps += [S.check_half_plane_inclusion(T, R, z) for z in (3j, 1 - 2j)]
        if not hit:
            raise PreconditionFailed("a self-adjoint or maximal dissipative relation")
    elif claim == "7.1":
        A = _selfadjoint_target(T, T0)
        if A is None:
            raise PreconditionFailed("a self-adjoint relation")
        reps += [S.verify_eigenvalue_enclosure(A, R), W.regularity_regions(A, R)]
    elif claim == "7.2":
        A = _selfadjoint_target(T, T0)
        if A is None or not A.domain().contains(A.space.H_minus):
            raise PreconditionFailed("a self-adjoint relation in class (L)")
        exc = W.exception_set(A, R)
        if exc is None:
            raise PreconditionFailed("a finite exception set")
        first = [FORMULA_POINT] if np.min(np.abs(exc - FORMULA_POINT)) >= W.EXCLUSION else []
        lams = first + [z for z in W.admissible_points(A, R, 2) if z != FORMULA_POINT]
        for z in lams:
            reps += [W.check_gamma_field(A, R, z), W.check_resolvent_formula(A, R, z)]
        if len(lams) >= 2:
            reps.append(W.schur_and_difference(A, R, lams[0], lams[1]))
        lhs, rhs = W.resolvent_formula_sides(A, R, lams[0])
        if lhs.size == 1:
            a, b = complex(lhs[0, 0]), complex(rhs[0, 0])
            print(f"resolvent formula at {_fmt(lams[0])}: lhs = {a.real:.15g}{a.imag:+.15g}i, "
                  f"rhs = {b.real:.15g}{b.imag:+.15g}i, |lhs - rhs| = {abs(a - b):.3e}")
        else:
            print(f"resolvent formula at {_fmt(lams[0])}: max |lhs - rhs| = {np.max(np.abs(lhs - rhs)):.3e}")
    return reps


def cmd_verify(args) -> int:
    f = load(args.file)
    T = f.T
    T0 = load(args.extension).T if args.extension else f.extension
    claims = CLAIMS[:-1] if args.claim == "all" else (args.claim,)
    reports, skipped = [], []
    for c in claims:
        try:
            reports += _verify(T, T0, c)
        except PreconditionFailed as exc:
            if args.claim != "all":
                print(f"claim {c} not applicable: {exc.predicate}", file=sys.stderr)
                return EXIT_USAGE
            skipped.append((c, exc.predicate))
    if args.claim == "all":
        reps, skip, errors = single_instance_report(T, T0, CLAIM_GROUPS, tag=str(args.file))
        reports += reps
        skipped += [(k, n) for k, n in skip.items()]
        if errors:
            for e in errors:
                print(f"internal invariant violation: {e}", file=sys.stderr)
            return EXIT_INTERNAL
    for r in reports:
        print(r.summary())
        for v in r.violations:
            print(f"  violation: {v.claim} at {v.lam} (slack {v.slack:.3g}) {v.detail}")
    for c, why in skipped:
        print(f"skipped {c}: {why}")
    bad = [r for r in reports if not r.passed]
    print(f"{len(reports)} reports, {len(bad)} failing")
    if bad:
        print(f"counterexample: {args.file}")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_fuzz(args) -> int:
    claims = tuple(c.strip() for c in args.claims.split(",")) if args.claims else CLAIM_GROUPS
    unknown = [c for c in claims if c not in CLAIM_GROUPS]
    if unknown:
        print(f"unknown claim groups: {', '.join(unknown)}; known: {', '.join(CLAIM_GROUPS)}", file=sys.stderr)
        return EXIT_USAGE
    cfg = SuiteConfig(seed=args.seed, count=args.count, max_dim=args.max_dim, max_neg=args.max_neg,
                      claims=claims, dump_dir=args.dump)
    res = run_suite(cfg)
    print(res.summary())
    for path in res.counterexamples:
        print(f"counterexample: {path}")
    for e in res.errors:
        print(f"internal invariant violation: {e}", file=sys.stderr)
    if res.errors:
        return EXIT_INTERNAL
    return EXIT_OK if not res.violations else EXIT_VIOLATION


def cmd_example(args) -> int:
    if args.name != "5.3":
        print(f"unknown example {args.name!r}; available: 5.3", file=sys.stderr)
        return EXIT_USAGE
    T, T0, N = two_dimensional_example(args.beta)
    out = Path(args.out)
    meta = {"kind": "two_dimensional_example", "beta": args.beta}
    paths = [save(InstanceFile.of(T, T0, meta), out / "T.json"),
             save(InstanceFile.of(T0, None, meta), out / "T0.json"),
             save(InstanceFile.of(N, None, meta), out / "N.json")]
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="krel", description="Linear relations in Krein spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("locus", help="render the excluded locus Gamma_T")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--window", default="-3,3,-3,3", help="XMIN,XMAX,YMIN,YMAX")
    p.add_argument("--res", type=int, default=601)
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_locus)

    p = sub.add_parser("inspect", help="dimensions and classes of an instance file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("spectrum", help="point spectra of an instance file")
    p.add_argument("file")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="check claims on an instance file")
    p.add_argument("file")
    p.add_argument("--claim", choices=CLAIMS, default="all")
    p.add_argument("--extension", help="instance file whose relation is used as T0")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", help="randomized verification suite")
    p.add_argument("--seed", type=int, default=SuiteConfig.seed)
    p.add_argument("--count", type=int, default=SuiteConfig.count)
    p.add_argument("--max-dim", type=int, default=SuiteConfig.max_dim)
    p.add_argument("--max-neg", type=int, default=SuiteConfig.max_neg)
    p.add_argument("--claims", help="comma-separated claim groups: " + ",".join(CLAIM_GROUPS))
    p.add_argument("--dump", default="counterexamples", help="directory for counterexample files")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("example", help="write a worked example as instance files")
    p.add_argument("name")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_example)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalInvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except KrelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
