"""Coordinate-invariant parameters, input validation, and normal forms.

The classification of the switched system x' = u A x + (1-u) B x depends
only on three coordinate-invariant real parameters (eta, rho, k) together
with the sign of delta, the discriminant of B's characteristic equation.
This module computes them, validates the standing hypotheses (both
matrices Hurwitz, noncommuting, at least one nondiagonalizable), and
constructs the canonical pair (A_nf, B_nf) together with the change of
basis T and time scale tau that realize it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import linalg2
from .errors import NotHurwitzError, PlanarSwitchError
from .linalg2 import SpectralTag, as_mat2, commutator, det, spectral_kind, trace
from .tolerances import DEGENERACY_TOL, near_zero, tol_sign


@dataclass(frozen=True)
class SystemPair:
    """A pair of 2x2 Hurwitz matrices defining the switched system."""

    A: np.ndarray
    B: np.ndarray

    @staticmethod
    def of(A, B) -> "SystemPair":
        return SystemPair(as_mat2(A), as_mat2(B))


def check_hurwitz(M, which: str) -> None:
    tr, dt = trace(M), det(M)
    if not (tr < 0.0 and dt > 0.0):
        raise NotHurwitzError(which, tr, dt)


class Rejection(Enum):
    COMMUTING = "commuting"
    BOTH_DIAGONALIZABLE = "both_diagonalizable"


@dataclass(frozen=True)
class PairContext:
    """Validated pair, with roles ordered so A is the nondiagonalizable one."""

    A: np.ndarray
    B: np.ndarray
    swapped: bool


@dataclass(frozen=True)
class ValidationResult:
    context: PairContext | None = None
    rejection: Rejection | None = None

    @property
    def ok(self) -> bool:
        return self.context is not None


def validate_pair(pair: SystemPair, tol: float = DEGENERACY_TOL) -> ValidationResult:
    """Check the standing hypotheses, in order:

    1. both matrices Hurwitz (violation is an input error, not a verdict);
    2. [A, B] != 0 -- commuting Hurwitz pairs are trivially GUAS and are
       returned as a COMMUTING rejection for the caller to short-circuit;
    3. at least one matrix nondiagonalizable; if only B is, the roles are
       swapped (the system is symmetric under (A, B, u) -> (B, A, 1-u)).
       If both are diagonalizable the input is out of scope.
    """
    A, B = as_mat2(pair.A), as_mat2(pair.B)
    check_hurwitz(A, "A")
    check_hurwitz(B, "B")

    C = commutator(A, B)
    comm_scale = max(1.0, float(np.max(np.abs(A))) * float(np.max(np.abs(B))))
    if all(near_zero(c, comm_scale, tol) for c in C.flat):
        return ValidationResult(rejection=Rejection.COMMUTING)

    a_nondiag = spectral_kind(A, tol).tag is SpectralTag.REPEATED_NONDIAGONALIZABLE
    b_nondiag = spectral_kind(B, tol).tag is SpectralTag.REPEATED_NONDIAGONALIZABLE
    if a_nondiag:
        return ValidationResult(context=PairContext(A, B, swapped=False))
    if b_nondiag:
        return ValidationResult(context=PairContext(B, A, swapped=True))
    return ValidationResult(rejection=Rejection.BOTH_DIAGONALIZABLE)


@dataclass(frozen=True)
class InvariantTriple:
    """Coordinate-invariant parameters of the validated pair.

    eta and rho are both negative (normalized traces of A and B); k
    measures the interaction and plays the role the eigenvector cross
    ratio plays in the diagonalizable case; delta is the discriminant of
    B's characteristic equation and delta_sign its tolerance-resolved sign.
    """

    eta: float
    rho: float
    k: float
    delta: float
    delta_sign: int


def compute_invariants(ctx: PairContext, tol: float = DEGENERACY_TOL) -> InvariantTriple:
    """Invariants of the ordered pair (A nondiagonalizable).

    delta = Tr(B)^2 - 4 det(B).  For delta != 0 the parameters are
    normalized by sqrt(|delta|) (making them invariant under joint
    positive scaling); for delta == 0 the unnormalized convention is used.
    """
    A, B = ctx.A, ctx.B
    trA, trB = trace(A), trace(B)
    delta = trB * trB - 4.0 * det(B)
    delta_scale = max(1.0, float(np.max(np.abs(B)))) ** 2
    s = tol_sign(delta, delta_scale, tol)
    cross = trace(A @ B) - 0.5 * trA * trB
    if s == 0:
        eta = trA / 2.0
        rho = trB / 2.0
        k = cross
    else:
        root = np.sqrt(abs(delta))
        eta = trA / root
        rho = trB / root
        k = 4.0 / abs(delta) * cross
    return InvariantTriple(float(eta), float(rho), float(k), float(delta), s)


class CaseTag(Enum):
    S1 = "S1"
    SMINUS1 = "S-1"
    R1 = "R1"
    RMINUS1 = "R-1"
    R0 = "R0"

    @property
    def singular(self) -> bool:
        return self in (CaseTag.S1, CaseTag.SMINUS1)


def case_tag(inv: InvariantTriple, d_minus_a_sign: int | None = None,
             tol: float = DEGENERACY_TOL) -> CaseTag:
    """Case tag from the invariants.

    k == 0 splits into S1 / S-1 according to the order of B's diagonal
    entries in the coordinates where A is a Jordan block; that order is
    only available during normal-form construction, so callers in the
    singular case must pass sign(d - a) explicitly.
    """
    k_scale = max(1.0, abs(inv.eta) * abs(inv.rho), inv.eta * inv.eta)
    if near_zero(inv.k, k_scale, tol):
        if d_minus_a_sign is None:
            raise ValueError(
                "singular case (k == 0): pass d_minus_a_sign from the "
                "normal-form construction to split S1 vs S-1"
            )
        return CaseTag.S1 if d_minus_a_sign > 0 else CaseTag.SMINUS1
    if inv.delta_sign > 0:
        return CaseTag.R1
    if inv.delta_sign < 0:
        return CaseTag.RMINUS1
    return CaseTag.R0


@dataclass(frozen=True)
class NormalForm:
    """Canonical pair plus the transformation that realizes it.

    T is invertible and tau > 0 with T^-1 (A/tau) T == A_nf and
    T^-1 (B/tau) T == B_nf, where (A, B) is the role-ordered pair
    (after any swap).
    """

    A_nf: np.ndarray
    B_nf: np.ndarray
    T: np.ndarray
    tau: float
    case: CaseTag
    inv: InvariantTriple
    swapped: bool

    def to_normal_coords(self, x) -> np.ndarray:
        return np.linalg.solve(self.T, linalg2.as_vec2(x))

    def from_normal_coords(self, x) -> np.ndarray:
        return self.T @ linalg2.as_vec2(x)

    def residual(self, A, B) -> float:
        """Max realizability defect over both matrices (relative)."""
        Ti = np.linalg.inv(self.T)
        rA = Ti @ (as_mat2(A) / self.tau) @ self.T - self.A_nf
        rB = Ti @ (as_mat2(B) / self.tau) @ self.T - self.B_nf
        sc = max(1.0, float(np.max(np.abs(self.A_nf))),
                 float(np.max(np.abs(self.B_nf))))
        return float(max(np.max(np.abs(rA)), np.max(np.abs(rB))) / sc)


def _jordan_basis(A: np.ndarray, lam: float, probe_order=((1.0, 0.0), (0.0, 1.0)),
                  tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Basis (w, v) with (A - lam I) v = w != 0 and (A - lam I) w = 0.

    In this basis A is the Jordan block [[lam, 1], [0, lam]].  The probe
    order is fixed so the construction is deterministic; either probe
    yields the same downstream invariants (tested).
    """
    N = A - lam * np.eye(2)
    scale = max(1.0, float(np.max(np.abs(A))))
    for p in probe_order:
        v = np.asarray(p, dtype=float)
        w = N @ v
        if not near_zero(float(np.linalg.norm(w)), scale, tol):
            return np.column_stack([w, v])
    raise PlanarSwitchError("matrix is diagonalizable; no Jordan basis")


def normal_form(pair: SystemPair, tol: float = DEGENERACY_TOL,
                _probe_order=((1.0, 0.0), (0.0, 1.0))) -> NormalForm:
    """Constructive reduction to the canonical pair.

    Steps: (1) similarity taking A to a Jordan block; (2) a shear
    normalizing B's off-diagonal structure (which branch depends on
    whether B's lower-left entry in Jordan coordinates vanishes, i.e. on
    k == 0); (3) a time rescale and diagonal conjugation normalizing the
    remaining magnitudes.

    Raises on invalid input; rejected pairs (commuting / both
    diagonalizable) raise PlanarSwitchError -- callers that want to treat
    those as classifications should use validate_pair first.
    """
    res = validate_pair(pair, tol)
    if not res.ok:
        raise PlanarSwitchError(f"pair rejected: {res.rejection.value}")
    ctx = res.context
    A, B = ctx.A, ctx.B
    inv = compute_invariants(ctx, tol)

    lam = trace(A) / 2.0
    P = _jordan_basis(A, lam, _probe_order, tol)
    B1 = np.linalg.solve(P, B @ P)
    a, b = B1[0, 0], B1[0, 1]
    c, d = B1[1, 0], B1[1, 1]
    c_scale = max(1.0, float(np.max(np.abs(A))) * float(np.max(np.abs(B))))

    if not near_zero(c, c_scale, tol):
        # regular case: shear kills the diagonal asymmetry of B
        shear = np.array([[1.0, (a - d) / (2.0 * c)], [0.0, 1.0]])
        if inv.delta_sign == 0:
            T = P @ shear
            tau = 1.0
        else:
            root = np.sqrt(abs(inv.delta))
            tau = root / 2.0
            Tp = np.diag([np.sqrt(2.0) / abs(inv.delta) ** 0.25,
                          abs(inv.delta) ** 0.25 / np.sqrt(2.0)])
            T = P @ shear @ Tp
        case = case_tag(inv, tol=tol)
        A_nf = np.array([[inv.eta, 1.0], [0.0, inv.eta]])
        B_nf = np.array([
            [inv.rho, inv.delta_sign / inv.k if inv.delta_sign != 0 else 0.0],
            [inv.k, inv.rho],
        ])
    else:
        # singular case: B is diagonal in Jordan coordinates after a shear
        if near_zero(a - d, c_scale, tol):
            raise PlanarSwitchError(
                "degenerate singular case a == d contradicts delta > 0"
            )
        shear = np.array([[1.0, -b / (a - d)], [0.0, 1.0]])
        root = np.sqrt(inv.delta)
        tau = root / 2.0
        Tp = np.diag([np.sqrt(2.0) / inv.delta ** 0.25,
                      inv.delta ** 0.25 / np.sqrt(2.0)])
        T = P @ shear @ Tp
        case = case_tag(inv, d_minus_a_sign=(1 if d > a else -1), tol=tol)
        A_nf = np.array([[inv.eta, 1.0], [0.0, inv.eta]])
        if case is CaseTag.S1:
            B_nf = np.diag([inv.rho - 1.0, inv.rho + 1.0])
        else:
            B_nf = np.diag([inv.rho + 1.0, inv.rho - 1.0])

    return NormalForm(A_nf, B_nf, T, float(tau), case, inv, ctx.swapped)
