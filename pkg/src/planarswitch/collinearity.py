"""The set Z where Ax and Bx are linearly dependent.

Z is the zero set of the quadratic form Q(x) = det(Ax, Bx).  Its
discriminant Delta decides whether Z is the origin only (Delta < 0), one
line (Delta = 0) or two lines (Delta > 0); on the lines the two fields are
proportional, Bx = alpha Ax, and the common sign of the two alphas
(direct vs inverse orientation) drives the stability split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InconsistentInvariantsError, NotCollinearError, PreconditionError
from .invariants import CaseTag, InvariantTriple, NormalForm
from .linalg2 import as_vec2
from .tolerances import DEGENERACY_TOL, near_zero, tol_sign


@dataclass(frozen=True)
class Slope:
    """A projective slope: a finite value or the vertical line."""

    value: float = 0.0
    infinite: bool = False

    @staticmethod
    def finite(v: float) -> "Slope":
        if not math.isfinite(v):
            raise ValueError("finite slope required; use Slope.vertical()")
        return Slope(float(v), False)

    @staticmethod
    def vertical() -> "Slope":
        return Slope(0.0, True)

    def direction(self) -> np.ndarray:
        """A nonzero vector on the line."""
        if self.infinite:
            return np.array([0.0, 1.0])
        return np.array([1.0, self.value])

    def angle(self) -> float:
        """Projective angle in [0, pi)."""
        if self.infinite:
            return math.pi / 2.0
        a = math.atan(self.value)
        return a if a >= 0.0 else a + math.pi

    def __str__(self) -> str:
        return "inf" if self.infinite else repr(self.value)


class ZKind(Enum):
    ORIGIN_ONLY = "origin_only"
    ONE_LINE = "one_line"
    TWO_LINES = "two_lines"


@dataclass(frozen=True)
class ZSet:
    kind: ZKind
    m_plus: Slope | None = None
    m_minus: Slope | None = None

    def lines(self) -> list[Slope]:
        if self.kind is ZKind.ORIGIN_ONLY:
            return []
        if self.kind is ZKind.ONE_LINE:
            return [self.m_plus]
        return [self.m_plus, self.m_minus]


class Orientation(Enum):
    DIRECT = "direct"
    INVERSE = "inverse"
    NOT_APPLICABLE = "not_applicable"


def collinearity_discriminant(inv: InvariantTriple) -> float:
    """Delta = k^2 - 4 eta rho k + sign(delta) 4 eta^2."""
    return (inv.k ** 2 - 4.0 * inv.eta * inv.rho * inv.k
            + inv.delta_sign * 4.0 * inv.eta ** 2)


def _delta_scale(inv: InvariantTriple) -> float:
    return max(1.0, inv.k ** 2, abs(4.0 * inv.eta * inv.rho * inv.k),
               4.0 * inv.eta ** 2)


def quadratic_form(nf: NormalForm, x) -> float:
    """Q(x) = det(A_nf x, B_nf x), evaluated directly on the matrices.

    The closed case formula is exposed separately (quadratic_form_by_case)
    as a cross-check.
    """
    x = as_vec2(x)
    u = nf.A_nf @ x
    v = nf.B_nf @ x
    return float(u[0] * v[1] - u[1] * v[0])


def quadratic_form_by_case(nf: NormalForm, x) -> float:
    """Case formula for Q; must agree with quadratic_form to 1e-12."""
    x = as_vec2(x)
    eta, rho, k, s = nf.inv.eta, nf.inv.rho, nf.inv.k, nf.inv.delta_sign
    x1, x2 = x
    if nf.case is CaseTag.S1:
        return float(x2 * ((rho + 1.0) * x2 + 2.0 * eta * x1))
    if nf.case is CaseTag.SMINUS1:
        return float(x2 * ((rho - 1.0) * x2 - 2.0 * eta * x1))
    return float((rho - s * eta / k) * x2 ** 2 + k * x1 * x2 + eta * k * x1 ** 2)


def slopes(inv: InvariantTriple, case: CaseTag, tol: float = DEGENERACY_TOL) -> ZSet:
    """Angular coefficients of the lines of Z, per case.

    The degenerate denominators produce a genuinely vertical line, kept
    projectively rather than as a large float.
    """
    Delta = collinearity_discriminant(inv)
    sc = _delta_scale(inv)
    if near_zero(Delta, sc, tol):
        if case.singular:
            raise InconsistentInvariantsError("Delta == 0 cannot happen for k == 0")
        # Delta = 0 forces m0 = -2 eta in the regular case
        m0 = Slope.finite(-2.0 * inv.eta)
        return ZSet(ZKind.ONE_LINE, m0, m0)
    if Delta < 0.0:
        return ZSet(ZKind.ORIGIN_ONLY)

    root = math.sqrt(Delta)
    eta, rho, k = inv.eta, inv.rho, inv.k
    if case is CaseTag.RMINUS1:
        chi = rho + eta / k
        if near_zero(chi, max(1.0, abs(rho), abs(eta / k)), tol):
            return ZSet(ZKind.TWO_LINES, Slope.vertical(), Slope.finite(-eta))
        return ZSet(ZKind.TWO_LINES,
                    Slope.finite((-k + root) / (2.0 * chi)),
                    Slope.finite((-k - root) / (2.0 * chi)))
    if case is CaseTag.R1:
        chi = rho - eta / k
        if near_zero(chi, max(1.0, abs(rho), abs(eta / k)), tol):
            return ZSet(ZKind.TWO_LINES, Slope.finite(-eta), Slope.vertical())
        return ZSet(ZKind.TWO_LINES,
                    Slope.finite((-k + root) / (2.0 * chi)),
                    Slope.finite((-k - root) / (2.0 * chi)))
    if case is CaseTag.R0:
        return ZSet(ZKind.TWO_LINES,
                    Slope.finite((-k + root) / (2.0 * rho)),
                    Slope.finite((-k - root) / (2.0 * rho)))
    if case is CaseTag.S1:
        return ZSet(ZKind.TWO_LINES, Slope.finite(0.0),
                    Slope.finite(-2.0 * inv.eta / (inv.rho + 1.0)))
    # S-1
    return ZSet(ZKind.TWO_LINES, Slope.finite(0.0),
                Slope.finite(2.0 * inv.eta / (inv.rho - 1.0)))


def _alpha_on_line(nf: NormalForm, m: Slope) -> float:
    """Least-squares alpha with B_nf x = alpha A_nf x on the line of slope m."""
    x = m.direction()
    u = nf.A_nf @ x
    v = nf.B_nf @ x
    denom = float(u @ u)
    if denom == 0.0:
        raise NotCollinearError("A_nf x vanished on a line of Z")
    alpha = float(u @ v) / denom
    resid = float(np.linalg.norm(v - alpha * u))
    if resid > 1e-9 * max(1.0, float(np.linalg.norm(v))):
        raise NotCollinearError(
            f"residual {resid:.3e} on line m={m}: fields not collinear"
        )
    # cross-check against the closed formula in the regular, finite-m case
    if not nf.case.singular and not m.infinite and abs(m.value) > 1e-12:
        formula = (nf.inv.k + nf.inv.rho * m.value) / (nf.inv.eta * m.value)
        if abs(formula - alpha) > 1e-8 * max(1.0, abs(alpha)):
            raise InconsistentInvariantsError(
                f"alpha mismatch: least-squares {alpha!r} vs formula {formula!r}"
            )
    return alpha


def collinearity_factors(nf: NormalForm, zset: ZSet) -> tuple[float, float]:
    """(alpha_plus, alpha_minus); for a single line the factor repeats."""
    if zset.kind is ZKind.ORIGIN_ONLY:
        raise PreconditionError("collinearity factors need Delta >= 0")
    if zset.kind is ZKind.ONE_LINE:
        a0 = _alpha_on_line(nf, zset.m_plus)
        return a0, a0
    return _alpha_on_line(nf, zset.m_plus), _alpha_on_line(nf, zset.m_minus)


def orientation(inv: InvariantTriple, Delta: float,
                tol: float = DEGENERACY_TOL) -> Orientation:
    """Direct when k < 2 eta rho, inverse when k > 2 eta rho.

    k == 2 eta rho together with Delta >= 0 is impossible for valid
    inputs (it forces Delta = -4 det A det B < 0), so hitting that
    combination indicates an internal inconsistency.
    """
    sc = _delta_scale(inv)
    if not near_zero(Delta, sc, tol) and Delta < 0.0:
        return Orientation.NOT_APPLICABLE
    gap = inv.k - 2.0 * inv.eta * inv.rho
    gsc = max(1.0, abs(inv.k), abs(2.0 * inv.eta * inv.rho))
    side = tol_sign(gap, gsc, tol)
    if side == 0:
        raise InconsistentInvariantsError(
            "Delta >= 0 with k == 2 eta rho is unreachable for valid inputs"
        )
    return Orientation.DIRECT if side < 0 else Orientation.INVERSE


def clockwise_check(nf: NormalForm, zset: ZSet) -> bool:
    """On Z \\ {0} the field A_nf x never points counterclockwise.

    Checks A x . (-x2, x1) <= 1e-12 at sample points on each line.
    """
    for m in zset.lines():
        for h in (1.0, -1.0, 0.5):
            x = h * m.direction()
            u = nf.A_nf @ x
            if float(-u[0] * x[1] + u[1] * x[0]) > 1e-12:
                return False
    return True


@dataclass(frozen=True)
class CollinearityData:
    Delta: float
    zset: ZSet
    alpha_plus: float | None
    alpha_minus: float | None
    orientation: Orientation


def collinearity_data(nf: NormalForm, tol: float = DEGENERACY_TOL) -> CollinearityData:
    """Aggregate Delta, Z, the alphas and the orientation for a normal form."""
    inv = nf.inv
    Delta = collinearity_discriminant(inv)
    zset = slopes(inv, nf.case, tol)
    orient = orientation(inv, Delta, tol)
    if zset.kind is ZKind.ORIGIN_ONLY:
        return CollinearityData(Delta, zset, None, None, orient)
    ap, am = collinearity_factors(nf, zset)
    return CollinearityData(Delta, zset, ap, am, orient)
