"""Randomized verification suite over generated instances.

Each instance is generated from its own stream (master seed, index), carried
to the frame of its decomposition and passed through every claim group.
Checks whose hypotheses fail are recorded as skips; violations are data and
the offending instance is written to disk when a dump directory is given.
"""

from __future__ import annotations

import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import extensions as X
from .. import spectra as S
from .. import weyl as W
from ..errors import (DegenerateSubspaceMetric, InternalInvariantViolation, PreconditionFailed,
                      ShiftSingular)
from ..krein import reference_decomposition
from ..numeric import Subspace
from ..relation import (check_adjoint_on_domain, check_equality_criterion, check_image_identities,
                        componentwise_sum, in_frame, is_dissipative, is_selfadjoint, is_symmetric)
from .generate import Instance, companion_pairs, generate, instance_rng, random_profile
from .serialize import from_instance, save

__all__ = ["CLAIM_GROUPS", "SuiteConfig", "SuiteResult", "DEFAULT_SEED", "check_instance", "run_suite",
           "worker_count"]

DEFAULT_SEED = 20240917
PROFILE_STREAM = 99
SUBSPACE_STREAM = 98

CLAIM_GROUPS = ("location", "structure", "images", "blocks", "half_plane", "rotation", "enclosure",
                "minus_family", "kernel_sum", "deficiency", "ranges", "regularity", "gamma")

SKIPPED = (PreconditionFailed, DegenerateSubspaceMetric, ShiftSingular)


@dataclass
class SuiteConfig:
    seed: int = DEFAULT_SEED
    count: int = 500
    max_dim: int = 12
    max_neg: int = 4
    claims: tuple = CLAIM_GROUPS
    dump_dir: str | None = None
    workers: int | None = None


@dataclass
class SuiteResult:
    config: SuiteConfig
    reports: list = field(default_factory=list)
    skipped: Counter = field(default_factory=Counter)
    errors: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def violations(self):
        return [v for r in self.reports for v in r.violations]

    @property
    def passed(self) -> bool:
        return not self.violations and not self.errors

    def per_claim(self) -> dict:
        """claim id -> (checks, violations), sorted by claim id."""
        out = {}
        for r in self.reports:
            c, v = out.get(r.claim_id, (0, 0))
            out[r.claim_id] = (c + r.checks, v + len(r.violations))
        return dict(sorted(out.items()))

    def summary(self) -> str:
        lines = [f"{k}: {'PASS' if v == 0 else 'FAIL'} ({c} checks, {v} violations)"
                 for k, (c, v) in self.per_claim().items()]
        lines.append(f"instances: {self.config.count}, violations: {len(self.violations)}, "
                     f"internal errors: {len(self.errors)}, skipped checks: {sum(self.skipped.values())}, "
                     f"time: {self.elapsed:.1f}s")
        return "\n".join(lines)


def worker_count(requested: int | None = None) -> int:
    """Workers from the argument, else KREL_THREADS, else 1."""
    if requested is None:
        env = os.environ.get("KREL_THREADS", "").strip()
        requested = int(env) if env.isdigit() else 1
    return max(1, int(requested))


def make_instance(seed: int, index: int, max_dim=12, max_neg=4) -> Instance:
    profile = random_profile(instance_rng(seed, index, PROFILE_STREAM), seed, max_dim, max_neg)
    return generate(profile, index)


def _random_subspace(rng, n) -> Subspace:
    k = int(rng.integers(0, n + 1))
    M = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return Subspace.span(M)


def _run(calls, skipped, errors, tag):
    reports = []
    for name, fn in calls:
        try:
            reports.append(fn())
        except SKIPPED as exc:
            skipped[f"{name}: {getattr(exc, 'predicate', type(exc).__name__)}"] += 1
        except InternalInvariantViolation as exc:
            errors.append((tag, name, str(exc)))
    return reports


def check_instance(inst: Instance, claims=CLAIM_GROUPS, tag="", sub_rng=None):
    """All claim groups on one instance; returns (reports, skipped, internal errors)."""
    skipped, errors = Counter(), []
    D = inst.D
    T = in_frame(inst.T, D)
    T0 = in_frame(inst.T0, D) if inst.T0 is not None else None
    R = reference_decomposition(T.space)
    sp = T.space
    calls = []
    claims = set(claims)

    if "location" in claims and T0 is not None:
        calls.append(("location", lambda: S.verify_eigenvalue_location(T, T0, R, instance=tag)))
    if "structure" in claims:
        N = T0 if T0 is not None else T.adjoint()
        calls.append(("structure", lambda N=N: S.check_structure(T, N, R, instance=tag)))
    if "images" in claims:
        rng = sub_rng if sub_rng is not None else np.random.default_rng(0)
        L = _random_subspace(rng, sp.n)
        calls.append(("images", lambda L=L: check_image_identities(T, L, instance=tag)))
        if is_symmetric(T):
            calls.append(("images", lambda: check_adjoint_on_domain(T, instance=tag)))
        if T0 is not None:
            calls.append(("images", lambda: check_equality_criterion(T, T0, instance=tag)))
    if "blocks" in claims:
        calls.append(("blocks", lambda: S.check_block_adjoints(T, R, T0, instance=tag)))
    if "half_plane" in claims:
        for z in (3j, 1 - 2j):
            calls.append(("half_plane", lambda z=z: S.check_half_plane_inclusion(T, R, z, instance=tag)))
        for A in [x for x in (T, T0) if x is not None]:
            if is_selfadjoint(A):
                calls.append(("half_plane", lambda A=A: S.verify_half_plane_resolvent(A, R, instance=tag)))
            elif is_dissipative(A) and A.d == A.n:
                calls.append(("half_plane", lambda A=A: S.verify_half_plane_resolvent(
                    A, R, variant="dissipative", instance=tag)))
    if "rotation" in claims:
        loc = S.locus_params(T, R)
        lam = complex(0.3, -(loc.m * 1.5 + 0.5))
        if S.in_gamma(lam, loc.m, loc.p):
            calls.append(("rotation", lambda lam=lam: S.rotation_report(T, R, lam, instance=tag)))
    if "enclosure" in claims:
        for A in [x for x in (T, T0) if x is not None and is_selfadjoint(x)]:
            calls.append(("enclosure", lambda A=A: S.verify_eigenvalue_enclosure(A, R, instance=tag)))

    if "deficiency" in claims and is_symmetric(T):
        d = X.deficiency(T)
        calls += [
            ("deficiency", lambda: X.check_deficiency_decomposition(T, d, instance=tag)),
            ("deficiency", lambda: X.sigma_characteristics(T, d, instance=tag)),
            ("deficiency", lambda: X.check_kernel_triviality(T, instance=tag)),
            ("deficiency", lambda: X.check_domain_meet(T, d, instance=tag)),
            ("deficiency", lambda: X.check_regular_domain(T, T0, d, instance=tag)),
            ("deficiency", lambda: X.check_cayley_identities(T, T0, d, instance=tag)),
            ("deficiency", lambda: X.check_operator_part_criteria(T, instance=tag)),
            ("deficiency", lambda: X.check_class_L_equivalences(T, R, instance=tag)),
            ("deficiency", lambda: X.check_deficiency_spectrum(T, R, instance=tag)),
        ]
    if "kernel_sum" in claims:
        for name, A, N in companion_pairs(inst):
            spec = S.point_spectrum(componentwise_sum(A, N))
            lams = ([] if spec.all_of_C else [m for m, _ in spec.eigenvalues][:3]) + [0.7 + 0.4j, 1j, -1j]
            for lam in lams:
                calls.append(("kernel_sum", lambda A=A, N=N, lam=lam: X.kernel_sum_analysis(
                    A, N, lam, instance=f"{tag} {name}")[2]))

    weyl_rels = [(T, None)] + ([(T0, T)] if T0 is not None else [])
    for A, sub in weyl_rels:
        lams = W.admissible_points(A, R, 2)
        saL = is_selfadjoint(A) and A.domain().contains(sp.H_minus)
        for z in lams[:1]:
            if "minus_family" in claims:
                calls.append(("minus_family", lambda A=A, z=z: W.check_resolvent_identities(A, R, z, instance=tag)))
                calls.append(("minus_family", lambda A=A, sub=sub, z=z: W.check_minus_family(
                    sub if sub is not None else A, A if sub is not None else None, R, z, instance=tag)))
            if "ranges" in claims:
                calls.append(("ranges", lambda A=A, z=z: W.check_plus_family_range(A, R, z, instance=tag)))
                calls.append(("ranges", lambda A=A, z=z: W.check_range_identities(A, R, z, instance=tag)))
        if "gamma" in claims and saL:
            for z in lams:
                calls.append(("gamma", lambda A=A, z=z: W.check_gamma_field(A, R, z, instance=tag)))
                calls.append(("gamma", lambda A=A, z=z: W.check_resolvent_formula(A, R, z, instance=tag)))
            if len(lams) == 2:
                calls.append(("gamma", lambda A=A, l=lams: W.schur_and_difference(A, R, l[0], l[1], instance=tag)))
                calls.append(("gamma", lambda A=A, l=lams: W.check_difference_telescoping(
                    A, R, l + [l[0] + 0.37j], instance=tag)))
        if "regularity" in claims:
            calls.append(("regularity", lambda A=A: W.regularity_regions(A, R, grid=3, instance=tag)))

    reports = _run(calls, skipped, errors, tag)
    return reports, skipped, errors


def _one(args):
    seed, index, max_dim, max_neg, claims = args
    inst = make_instance(seed, index, max_dim, max_neg)
    tag = f"seed={seed} index={index}"
    reports, skipped, errors = check_instance(inst, claims, tag, instance_rng(seed, index, SUBSPACE_STREAM))
    bad = any(not r.passed for r in reports) or bool(errors)
    return index, reports, skipped, errors, (from_instance(inst) if bad else None)


def run_suite(config: SuiteConfig | None = None, progress=None) -> SuiteResult:
    """Run every configured claim group over config.count instances."""
    config = config or SuiteConfig()
    t0 = time.perf_counter()
    jobs = [(config.seed, i, config.max_dim, config.max_neg, tuple(config.claims)) for i in range(config.count)]
    workers = worker_count(config.workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            outs = list(ex.map(_one, jobs, chunksize=8))
    else:
        outs = []
        for job in jobs:
            outs.append(_one(job))
            if progress:
                progress(job[1])
    res = SuiteResult(config)
    for index, reports, skipped, errors, dump in sorted(outs, key=lambda o: o[0]):
        res.reports.extend(reports)
        res.skipped.update(skipped)
        res.errors.extend(errors)
        if dump is not None and config.dump_dir:
            path = Path(config.dump_dir) / f"counterexample_{config.seed}_{index}.json"
            res.counterexamples.append(str(save(dump, path)))
    res.reports.sort(key=lambda r: (r.claim_id, _index_of(r.instance)))
    res.elapsed = time.perf_counter() - t0
    return res


def _index_of(tag: str) -> int:
    for part in tag.split():
        if part.startswith("index="):
            return int(part[6:])
    return -1


def single_instance_report(T, T0=None, claims=CLAIM_GROUPS, tag="file") -> tuple:
    """Run the claim groups on one explicit relation (reference decomposition)."""
    inst = Instance(T, T0, reference_decomposition(T.space), {"kind": "file"})
    return check_instance(inst, claims, tag)
