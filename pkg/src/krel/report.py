"""Verification reports shared by the checkers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numeric import Subspace, gap


@dataclass
class Violation:
    instance: str
    claim: str
    lam: complex | None
    slack: float
    detail: str = ""

    def as_dict(self) -> dict:
        lam = None if self.lam is None else [float(np.real(self.lam)), float(np.imag(self.lam))]
        return {"instance": self.instance, "claim": self.claim, "lambda": lam,
                "slack": float(self.slack), "detail": self.detail}


@dataclass
class VerificationReport:
    """Outcome of one or more checks.

    ``violations`` lists failed checks with the measured slack (a gap, a
    residual, or a signed margin); ``notes`` carries informational findings
    that are not failures.  ``max_residual`` is the worst gap or residual seen
    among the checks that passed or failed.
    """

    claim_id: str
    instances_checked: int = 1
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    checks: int = 0
    max_residual: float = 0.0
    instance: str = ""

    @property
    def passed(self) -> bool:
        return not self.violations

    def expect(self, ok, claim, lam=None, slack=0.0, detail=""):
        """Record a boolean check."""
        self.checks += 1
        if not ok:
            self.violations.append(Violation(self.instance, claim, lam, float(slack), detail))
        return bool(ok)

    def expect_small(self, value, tol, claim, lam=None, detail=""):
        """Record a residual that must not exceed ``tol``."""
        value = float(value)
        self.max_residual = max(self.max_residual, value)
        return self.expect(value <= tol, claim, lam, value, detail)

    def expect_equal(self, A: Subspace, B: Subspace, tol, claim, lam=None):
        """Record subspace equality by the gap metric (dimensions must agree)."""
        g = gap(A, B) if A.dim == B.dim else 1.0
        detail = "" if A.dim == B.dim else f"dimensions {A.dim} vs {B.dim}"
        return self.expect_small(g, tol, claim, lam, detail)

    def expect_contains(self, big: Subspace, small: Subspace, tol, claim, lam=None):
        return self.expect_small(big.residual(small), tol, claim, lam)

    def expect_rel_equal(self, R, S, tol, claim, lam=None):
        g = R.gap(S) if R.d == S.d else 1.0
        detail = "" if R.d == S.d else f"dimensions {R.d} vs {S.d}"
        return self.expect_small(g, tol, claim, lam, detail)

    def note(self, text):
        self.notes.append(text)

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)
        self.checks += other.checks
        self.max_residual = max(self.max_residual, other.max_residual)
        return self

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{self.claim_id}: {status} ({self.checks} checks, "
                f"{len(self.violations)} violations, max residual {self.max_residual:.2e})")

    def as_dict(self) -> dict:
        return {"claim": self.claim_id, "passed": self.passed,
                "instances_checked": self.instances_checked, "checks": self.checks,
                "max_residual": self.max_residual,
                "violations": [v.as_dict() for v in self.violations],
                "notes": list(self.notes)}
