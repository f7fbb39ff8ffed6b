"""Acceptance criteria; each test prints one PASS/FAIL line."""

import hashlib
import time

import numpy as np
import pytest

from krel import extensions as X
from krel import spectra as S
from krel import weyl as W
from krel.relation import classify, intersect
from krel.toolkit.cli import main
from krel.toolkit.suite import SuiteConfig, run_suite

from conftest import two_dim

GOLDEN_LOCUS_SHA256 = "6e3a497194c4f7338e23a05ead28c14642fcdacd08dfe33148904cdb493d2fd5"


@pytest.fixture
def verdict(capsys):
    def say(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return say


@pytest.fixture(scope="module")
def suite_result():
    return run_suite(SuiteConfig())


def test_criterion_1_tribonacci(verdict):
    t0 = time.perf_counter()
    t = S.tribonacci_constant()
    dt = time.perf_counter() - t0
    err, cubic = abs(t - 1.83929), abs(t**3 - t**2 - t - 1)
    verdict(1, err <= 1e-5 and cubic <= 1e-12 and dt < 0.5,
            f"t0 = {t:.15f}, |t0 - 1.83929| = {err:.2e}, cubic residual = {cubic:.1e}, {dt * 1e3:.2f} ms")


def test_criterion_2_two_dimensional_oracle(verdict):
    t0 = time.perf_counter()
    sp, T, T0, N = two_dim(1.0)
    fails = []
    s0 = S.point_spectrum(T0)
    ev = sorted(s0.values, key=lambda z: z.imag)
    if len(ev) != 2 or abs(ev[0] + 1j) > 1e-9 or abs(ev[1] - 1j) > 1e-9:
        fails.append(f"sigma_p(T0) = {ev}")
    for name, R in (("T", T), ("N", N)):
        s = S.point_spectrum(R)
        if s.all_of_C or s.eigenvalues:
            fails.append(f"sigma_p({name}) not empty")
    Sig = X.deficiency(T).Sigma
    if not intersect(T0, Sig).equals(N):
        fails.append("N != T0 meet Sigma")
    sv = sorted(S.point_spectrum(Sig).values, key=lambda z: z.real)
    if len(sv) != 2 or abs(sv[0] + 1) > 1e-9 or abs(sv[1] - 1) > 1e-9:
        fails.append(f"sigma_p(Sigma) = {sv}")
    for lam, member in ((1j, False), (-1j, False), (2j, True), (1 + 1j, True)):
        q = X.o_set_query(T, N, lam)
        if q.member != member or not q.certified:
            fails.append(f"O-set membership at {lam}")
    c = classify(T)
    if not (c.class_LP and not c.class_LPprime and c.L_T.is_zero()):
        fails.append("classes")
    loc = S.locus_params(T)
    xs = np.linspace(-2, 2, 101)
    L = xs[None, :] + 1j * xs[:, None]
    inc = np.array([[loc.in_c(z) for z in row] for row in L])
    if not np.array_equal(inc, (L.imag != 0) & (np.abs(L.imag) <= 1)):
        fails.append("C_T grid")
    dt = time.perf_counter() - t0
    if dt > 1.0:
        fails.append(f"runtime {dt:.2f}s")
    verdict(2, not fails, "; ".join(fails) or f"all oracle values match, {dt:.3f} s")


def test_criterion_3_resolvent_formula(verdict):
    sp, T, T0, N = two_dim(1.0)
    t0 = time.perf_counter()
    lhs, rhs = W.resolvent_formula_sides(T0, None, 2j)
    dt = time.perf_counter() - t0
    e1, e2 = abs(lhs[0, 0] - 2j / 3), abs(rhs[0, 0] - 2j / 3)
    verdict(3, max(e1, e2) <= 1e-12 and dt < 0.5,
            f"lhs error {e1:.1e}, rhs error {e2:.1e} against 2i/3, {dt * 1e3:.1f} ms")


def test_criterion_4_locus_bound(verdict):
    t0 = time.perf_counter()
    t = S.tribonacci_constant()
    worst = -np.inf
    for m in (0.5, 1.0, 2.0):
        for p in (0.0, 0.4 * m, 0.8 * m, m):
            w = 4 * m
            xs = np.linspace(-w, w, 401)
            L = xs[None, :] + 1j * xs[:, None]
            inc = (L.imag != 0) & ~S.in_gamma_grid(L, m, p)
            worst = max(worst, float(np.max(np.abs(L.imag[inc]) - (t * m + 1e-9))))
    dt = time.perf_counter() - t0
    verdict(4, worst <= 0 and dt <= 5.0, f"max excess {worst:.3g} over 12 pairs, {dt:.2f} s")


def test_criterion_5_locus_replication(verdict, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"locus{k}.csv"
        assert main(["locus", "--m", "1", "--p", "0.8", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    rows = {tuple(l.split(",")[:2]): l.split(",")[2] for l in outs[0].decode().splitlines()[1:]}
    digest = hashlib.sha256(outs[0]).hexdigest()
    ok = outs[0] == outs[1] and rows[("0", "2")] == "1" and rows[("0", "0.5")] == "0" and digest == GOLDEN_LOCUS_SHA256
    verdict(5, ok, f"2i in Gamma_T: {rows[('0', '2')] == '1'}, 0.5i in Gamma_T: {rows[('0', '0.5')] == '1'}, "
                   f"byte-identical reruns: {outs[0] == outs[1]}, golden sha256 match: {digest == GOLDEN_LOCUS_SHA256}")


def test_criterion_6_fuzz_suite(verdict, suite_result):
    res = suite_result
    groups = sorted(res.per_claim())
    ok = res.passed and res.elapsed <= 60.0 and res.config.count == 500
    verdict(6, ok, f"{len(res.reports)} reports in {len(groups)} checks, {len(res.violations)} violations, "
                   f"{len(res.errors)} internal errors, {sum(res.skipped.values())} skipped, {res.elapsed:.1f} s")


def test_criterion_7_structure(verdict, suite_result):
    reps = [r for r in suite_result.reports if r.claim_id == "structure"]
    bad = [r.instance for r in reps if not r.passed]
    verdict(7, len(reps) == 500 and not bad,
            f"{len(reps)} instances, {sum(r.checks for r in reps)} checks, failing: {bad[:3]}")


def test_criterion_8_cli_round_trip(verdict, tmp_path, capsys):
    import json
    codes = [main(["example", "5.3", "--beta", "1", "--out", str(tmp_path)])]
    t = str(tmp_path / "T.json")
    capsys.readouterr()
    codes.append(main(["inspect", t, "--json"]))
    info = json.loads(capsys.readouterr().out)
    codes.append(main(["spectrum", t]))
    spec = capsys.readouterr().out.splitlines()
    codes.append(main(["verify", t, "--claim", "all"]))
    ver = capsys.readouterr().out.splitlines()
    fails = []
    want = ["sigma_p(T) = empty", "sigma_p(T0) = 0-1i (x1), 0+1i (x1)", "sigma_p(Sigma) = -1+0i (x1), 1+0i (x1)",
            "O-set at 0+1i: not a member", "O-set at 0-1i: not a member", "O-set at 0+2i: member",
            "O-set at 1+1i: member"]
    fails += [w for w in want if w not in spec]
    if not any(l.startswith("sigma_p(N) = empty") for l in spec):
        fails.append("sigma_p(N)")
    cl = info["classes"]
    if not (cl["class_LP"] and not cl["class_LPprime"] and info["dim_L_T"] == 0):
        fails.append("classes")
    line = [l for l in ver if l.startswith("resolvent formula at 0+2i")]
    vals = [complex(v.split(",")[0].replace("i", "j")) for v in line[0].split("= ")[1:3]] if line else []
    if len(vals) != 2 or any(abs(v - 2j / 3) > 1e-12 for v in vals):
        fails.append("resolvent formula line")
    if codes != [0, 0, 0, 0]:
        fails.append(f"exit codes {codes}")
    verdict(8, not fails, "; ".join(fails) or f"exit codes {codes}; {ver[-1]}")
