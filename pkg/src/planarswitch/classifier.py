"""End-to-end stability classification.

The decision tree: commuting pairs are trivially GUAS; Delta < 0 means the
fields are collinear only at the origin (GUAS); Delta >= 0 with inverse
orientation gives a constant convexified control escaping to infinity
(static instability) or, in the degenerate one-line case, a semidefinite
common Lyapunov function (uniformly stable, not GUAS); direct orientation
reduces to the worst trajectory: singular and positive-k regular subcases
are GUAS (invariant projective cone), while the rotating k < 0 subcase is
decided by the half-turn norm ratio R (< 1 GUAS, = 1 uniformly stable,
> 1 unbounded).

Every verdict carries a machine-checkable certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .collinearity import (
    Orientation,
    ZKind,
    ZSet,
    collinearity_data,
    collinearity_discriminant,
)
from .errors import InconsistentInvariantsError, PreconditionError
from .invariants import (
    InvariantTriple,
    NormalForm,
    Rejection,
    SystemPair,
    normal_form,
    validate_pair,
)
from .linalg2 import det, trace
from .tolerances import DEGENERACY_TOL, RATIO_TOL, is_fragile, near_zero


class ThetaBranch(Enum):
    TRIG_ARCTAN = "trig_arctan"
    TRIG_HALF_PI = "trig_half_pi"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"


@dataclass(frozen=True)
class ThetaValue:
    """Duration of the B-flow arc between the two lines of Z (t2 > 0)."""

    theta: float
    branch: ThetaBranch


def b_flow_time(inv: InvariantTriple, Delta: float,
                tol: float = DEGENERACY_TOL) -> ThetaValue:
    """Time for the B-flow to carry the second line of Z onto the first.

    Only defined in the rotating regime (Delta > 0, k < 0).  For complex
    eigenvalues of B the arctan is taken on the branch in (0, pi) so the
    flow time is positive; for real eigenvalues the arctanh argument is
    guaranteed in (0, 1); for the nondiagonalizable B the time is rational
    in the invariants.
    """
    if not (Delta > 0.0 and inv.k < 0.0):
        raise PreconditionError("b_flow_time requires Delta > 0 and k < 0")
    root = math.sqrt(Delta)
    if inv.delta_sign < 0:
        denom = inv.k * inv.rho + 2.0 * inv.eta
        if near_zero(denom, max(1.0, abs(inv.k * inv.rho), abs(2 * inv.eta)), tol):
            return ThetaValue(math.pi / 2.0, ThetaBranch.TRIG_HALF_PI)
        theta = math.atan(root / denom)
        if theta < 0.0:
            theta += math.pi
        return ThetaValue(theta, ThetaBranch.TRIG_ARCTAN)
    if inv.delta_sign > 0:
        denom = inv.k * inv.rho - 2.0 * inv.eta
        return ThetaValue(math.atanh(root / denom), ThetaBranch.HYPERBOLIC)
    return ThetaValue(root / (inv.k * inv.rho), ThetaBranch.PARABOLIC)


class RatioBranch(Enum):
    GENERIC = "generic"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class RatioR:
    """Norm ratio of the worst trajectory over one half turn.

    t1 is the A-flow duration between the two lines of Z, t2 the B-flow
    duration back; R = ||gamma(t1 + t2)|| / ||gamma(0)|| starting on the
    first line.
    """

    R: float
    t1: float
    t2: float
    formula_branch: RatioBranch


def half_turn_ratio(inv: InvariantTriple, nf: NormalForm,
                    tol: float = DEGENERACY_TOL) -> RatioR:
    """Analytic half-turn ratio R for the rotating direct case.

    Requires Delta > 0, k < 0 and direct orientation (k < 2 eta rho).
    The degenerate branch applies when rho - sign(delta) eta / k vanishes
    (possible only for complex eigenvalues of B).
    """
    Delta = collinearity_discriminant(inv)
    if not (Delta > 0.0 and inv.k < 0.0):
        raise PreconditionError("half_turn_ratio requires Delta > 0 and k < 0")
    if not (inv.k < 2.0 * inv.eta * inv.rho):
        raise PreconditionError("half_turn_ratio requires direct orientation")
    root = math.sqrt(Delta)
    eta, rho, k, s = inv.eta, inv.rho, inv.k, inv.delta_sign
    theta = b_flow_time(inv, Delta, tol)
    t1 = root / (eta * k)
    chi = rho - s * eta / k
    if near_zero(chi, max(1.0, abs(rho), abs(eta / k)), tol):
        # possible only when B has complex eigenvalues; here the two lines
        # are the vertical axis and x2 = -eta x1, the switching times are
        # t1 = -1/eta and t2 = arctan(-k/eta), and the two arc ratios
        # multiply to sqrt(k^2 + eta^2)/|eta| times the exponential factor
        # (this matches the chi -> 0 limit of the generic expression and
        # the integrated trajectory)
        R = (math.sqrt(k * k + eta * eta) / -eta) \
            * math.exp(root / k + rho * theta.theta)
        return RatioR(float(R), float(t1), float(theta.theta),
                      RatioBranch.DEGENERATE)
    trAB = trace(nf.A_nf @ nf.B_nf)
    detB = det(nf.B_nf)
    R = abs(((-k + root) / (-k - root))
            * (2.0 * k * rho * rho - s * (trAB + root))
            / (2.0 * k * math.sqrt(detB) * chi)) \
        * math.exp(root / k + rho * theta.theta)
    return RatioR(float(R), float(t1), float(theta.theta), RatioBranch.GENERIC)


def static_instability_certificate(nf: NormalForm,
                                   alphas: tuple[float, float]) -> tuple[float, float]:
    """Constant convexified control u0 with an unstable mixed matrix.

    For inverse orientation (Delta > 0, k > 2 eta rho) the mixed matrix
    M(u0) = u0 A + (1 - u0) B has negative determinant, hence a positive
    real eigenvalue; returns (u0, that eigenvalue).
    """
    ap, am = alphas
    prod, tot = ap * am, ap + am
    u0 = (prod - 0.5 * tot) / (1.0 + prod - tot)
    if not (0.0 < u0 < 1.0):
        raise InconsistentInvariantsError(f"u0 = {u0!r} outside (0, 1)")
    M = u0 * nf.A_nf + (1.0 - u0) * nf.B_nf
    dM = det(M)
    if not dM < 0.0:
        raise InconsistentInvariantsError(f"det M(u0) = {dM!r} not negative")
    half_tr = trace(M) / 2.0
    lam = half_tr + math.sqrt(half_tr * half_tr - dM)
    return float(u0), float(lam)


def semidefinite_lyapunov_check(nf: NormalForm, n_points: int = 100,
                                seed: int = 0) -> bool:
    """Verify the semidefinite common Lyapunov function of the Delta = 0
    inverse case: V(x) = x1^2 + x2^2 / (4 eta^2), whose derivative along
    either field is a nonpositive multiple of (x2 + 2 eta x1)^2."""
    eta, rho = nf.inv.eta, nf.inv.rho
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-2.0, 2.0, size=(n_points, 2))
    for x in pts:
        grad = np.array([2.0 * x[0], x[1] / (2.0 * eta * eta)])
        da = float(grad @ (nf.A_nf @ x))
        db = float(grad @ (nf.B_nf @ x))
        sq = (x[1] + 2.0 * eta * x[0]) ** 2
        if abs(da - sq / (2.0 * eta)) > 1e-10 * max(1.0, sq):
            return False
        if abs(db - rho * sq / (2.0 * eta * eta)) > 1e-10 * max(1.0, sq):
            return False
        if da > 1e-12 or db > 1e-12:
            return False
    return True


@dataclass(frozen=True)
class ProjectiveArc:
    """Connected component of the projective circle containing the
    eigendirection of A, delimited by the two lines of Z (angles in
    [0, pi), circle of circumference pi)."""

    cut_low: float
    cut_high: float
    witness_slope: float  # eigendirection of B inside the component


def projective_guas_check(nf: NormalForm, zset: ZSet,
                          tol: float = DEGENERACY_TOL) -> ProjectiveArc | None:
    """Invariant-cone criterion for the positive-k regular subcases.

    On the projective line, remove the two points of Z; if an
    eigendirection of B lies in the component containing A's
    eigendirection (slope 0), the cone over that component is invariant
    and the worst trajectory cannot rotate: the system is GUAS.
    Returns the arc, or None when inconclusive.
    """
    inv = nf.inv
    Delta = collinearity_discriminant(inv)
    if not (Delta > 0.0 and inv.delta_sign > 0 and inv.k > 0.0
            and inv.k < 2.0 * inv.eta * inv.rho):
        raise PreconditionError(
            "projective criterion applies to Delta > 0, delta > 0, "
            "0 < k < 2 eta rho"
        )
    if zset.kind is not ZKind.TWO_LINES:
        raise PreconditionError("projective criterion needs two lines in Z")
    cuts = sorted(m.angle() for m in zset.lines())
    c1, c2 = cuts
    # p_A sits at angle 0; the cuts are never at 0 since Q(1, 0) = eta k != 0
    def in_component(phi: float) -> bool:
        return phi < c1 or phi > c2

    for slope in (inv.k, -inv.k):
        phi = math.atan(slope)
        if phi < 0.0:
            phi += math.pi
        if in_component(phi):
            return ProjectiveArc(c1, c2, slope)
    return None


class VerdictKind(Enum):
    GUAS = "GUAS"
    UNIFORMLY_STABLE_NOT_GUAS = "uniformly_stable_not_GUAS"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Certificate:
    kind: str
    payload: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    certificate: Certificate
    warnings: tuple[str, ...] = ()
    nf: NormalForm | None = None
    Delta: float | None = None
    orientation: Orientation | None = None


def _fragility_warnings(inv: InvariantTriple, Delta: float,
                        tol: float) -> list[str]:
    w = []
    dscale = max(1.0, abs(inv.rho) ** 2, abs(inv.rho))
    if is_fragile(inv.delta, dscale, tol):
        w.append(f"delta = {inv.delta!r} is within 10x of the zero tolerance")
    kscale = max(1.0, abs(inv.eta * inv.rho), inv.eta ** 2)
    if is_fragile(inv.k, kscale, tol):
        w.append(f"k = {inv.k!r} is within 10x of the zero tolerance")
    Dscale = max(1.0, inv.k ** 2, abs(4 * inv.eta * inv.rho * inv.k),
                 4 * inv.eta ** 2)
    if is_fragile(Delta, Dscale, tol):
        w.append(f"Delta = {Delta!r} is within 10x of the zero tolerance")
    return w


def classify(pair: SystemPair, tol: float = DEGENERACY_TOL,
             ratio_tol: float = RATIO_TOL) -> Verdict:
    """Full stability classification of a switched pair.

    Raises NotHurwitzError on invalid input and BothDiagonalizableError
    when the pair is out of scope (both matrices diagonalizable);
    everything else -- including instability -- is a verdict, not an error.
    """
    res = validate_pair(pair, tol)
    if res.rejection is Rejection.COMMUTING:
        return Verdict(VerdictKind.GUAS, Certificate("commuting"))
    if res.rejection is Rejection.BOTH_DIAGONALIZABLE:
        from .errors import BothDiagonalizableError

        raise BothDiagonalizableError(
            "both matrices are diagonalizable; see the prior "
            "diagonalizable-case stability conditions (out of scope here)"
        )

    nf = normal_form(pair, tol)
    inv = nf.inv
    Delta = collinearity_discriminant(inv)
    warnings = _fragility_warnings(inv, Delta, tol)
    data = collinearity_data(nf, tol)
    orient = data.orientation

    def verdict(kind, cert, extra_warnings=()):
        return Verdict(kind, cert, tuple(warnings) + tuple(extra_warnings),
                       nf, Delta, orient)

    Dscale = max(1.0, inv.k ** 2, abs(4 * inv.eta * inv.rho * inv.k),
                 4 * inv.eta ** 2)
    if near_zero(Delta, Dscale, tol):
        # single collinearity line
        if orient is Orientation.INVERSE:
            if not semidefinite_lyapunov_check(nf):
                raise InconsistentInvariantsError(
                    "semidefinite Lyapunov identities failed on a Delta = 0 "
                    "inverse instance"
                )
            return verdict(
                VerdictKind.UNIFORMLY_STABLE_NOT_GUAS,
                Certificate("semidefinite_lyapunov",
                            {"V_coeffs": (1.0, 1.0 / (4.0 * inv.eta ** 2))}),
            )
        return verdict(VerdictKind.GUAS, Certificate("degenerate_direct"))

    if Delta < 0.0:
        return verdict(VerdictKind.GUAS, Certificate("definite_Q",
                                                     {"Delta": Delta}))

    # Delta > 0: two lines
    if orient is Orientation.INVERSE:
        u0, lam = static_instability_certificate(
            nf, (data.alpha_plus, data.alpha_minus))
        return verdict(
            VerdictKind.UNBOUNDED,
            Certificate("static_instability",
                        {"u0": u0, "unstable_eigenvalue": lam}),
        )

    # direct orientation
    if nf.case.singular:
        return verdict(VerdictKind.GUAS, Certificate("singular_case"))
    if inv.k > 0.0:
        if inv.delta_sign <= 0:
            raise InconsistentInvariantsError(
                "k > 0 with Delta > 0 and direct orientation is unreachable "
                "unless B has real distinct eigenvalues"
            )
        arc = projective_guas_check(nf, data.zset, tol)
        if arc is None:
            raise InconsistentInvariantsError(
                "projective cone criterion inconclusive on a positive-k "
                "regular instance"
            )
        return verdict(
            VerdictKind.GUAS,
            Certificate("projective_cone",
                        {"cut_low": arc.cut_low, "cut_high": arc.cut_high,
                         "witness_slope": arc.witness_slope}),
        )

    # rotating regular case: decide by the half-turn ratio
    ratio = half_turn_ratio(inv, nf, tol)
    cert = Certificate("ratio_rotation",
                       {"R": ratio.R, "t1": ratio.t1, "t2": ratio.t2,
                        "branch": ratio.formula_branch.value})
    if abs(ratio.R - 1.0) <= ratio_tol * max(1.0, ratio.R):
        return verdict(
            VerdictKind.UNIFORMLY_STABLE_NOT_GUAS, cert,
            extra_warnings=(f"half-turn ratio R = {ratio.R!r} is on the "
                            "R = 1 boundary within tolerance",),
        )
    if ratio.R < 1.0:
        return verdict(VerdictKind.GUAS, cert)
    return verdict(VerdictKind.UNBOUNDED, cert)
