"""Exact 2x2 linear algebra.

Matrices are plain (2, 2) float numpy arrays, vectors are (2,) arrays.
Besides arithmetic and spectral data, this module provides closed-form
matrix exponentials for the normal-form shapes used by the rest of the
package (Jordan block, rotation-like, hyperbolic, shear, diagonal), plus
an independent scaling-and-squaring series oracle for testing them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ShapeMismatchError
from .tolerances import DEGENERACY_TOL, near_zero


def as_mat2(M) -> np.ndarray:
    """Coerce to a finite (2, 2) float array."""
    A = np.asarray(M, dtype=float)
    if A.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def as_vec2(v) -> np.ndarray:
    """Coerce to a finite (2,) float array."""
    x = np.asarray(v, dtype=float)
    if x.shape != (2,):
        raise ValueError(f"expected a 2-vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector entries must be finite")
    return x


def trace(M) -> float:
    M = as_mat2(M)
    return float(M[0, 0] + M[1, 1])


def det(M) -> float:
    M = as_mat2(M)
    return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])


def commutator(A, B) -> np.ndarray:
    """AB - BA."""
    A, B = as_mat2(A), as_mat2(B)
    return A @ B - B @ A


class SpectralTag(Enum):
    REAL_DISTINCT = "real_distinct"
    COMPLEX_PAIR = "complex_pair"
    REPEATED_DIAGONALIZABLE = "repeated_diagonalizable"
    REPEATED_NONDIAGONALIZABLE = "repeated_nondiagonalizable"


@dataclass(frozen=True)
class SpectralKind:
    tag: SpectralTag
    discriminant: float


def spectral_kind(M, tol: float = DEGENERACY_TOL) -> SpectralKind:
    """Eigenvalue structure of M from the characteristic discriminant.

    A repeated eigenvalue is diagonalizable iff M is a scalar matrix
    (2x2 special case), which is what the off-diagonal test checks.
    """
    M = as_mat2(M)
    disc = trace(M) ** 2 - 4.0 * det(M)
    scale = max(1.0, float(np.max(np.abs(M)))) ** 2
    if near_zero(disc, scale, tol):
        off_scale = max(1.0, float(np.max(np.abs(M))))
        scalar = (
            near_zero(M[0, 1], off_scale, tol)
            and near_zero(M[1, 0], off_scale, tol)
            and near_zero(M[0, 0] - M[1, 1], off_scale, tol)
        )
        tag = (
            SpectralTag.REPEATED_DIAGONALIZABLE
            if scalar
            else SpectralTag.REPEATED_NONDIAGONALIZABLE
        )
    elif disc > 0:
        tag = SpectralTag.REAL_DISTINCT
    else:
        tag = SpectralTag.COMPLEX_PAIR
    return SpectralKind(tag, float(disc))


def expm_normal(M, t: float, kind: SpectralKind | None = None,
                tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Closed-form exp(M t) for the normal-form shapes.

    Supported shapes: diagonal; equal-diagonal matrices mu*I + N with N
    strictly off-diagonal, which covers the Jordan block (upper shear),
    the lower shear, the rotation-like form (N^2 = -w^2 I) and the
    hyperbolic form (N^2 = +w^2 I).  Anything else raises
    ShapeMismatchError.  `kind`, when given, is cross-checked against the
    detected shape.
    """
    M = as_mat2(M)
    scale = max(1.0, float(np.max(np.abs(M))))
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]

    if near_zero(b, scale, tol) and near_zero(c, scale, tol):
        E = np.diag([np.exp(a * t), np.exp(d * t)])
        _check_kind_consistency(M, kind, tol)
        return E

    if not near_zero(a - d, scale, tol):
        raise ShapeMismatchError(
            "off-diagonal matrix with unequal diagonal is not a supported "
            f"normal-form shape: {M.tolist()}"
        )

    # M = mu*I + N with N = [[0, b], [c, 0]]; N^2 = (b*c) I.
    mu = 0.5 * (a + d)
    N = np.array([[0.0, b], [c, 0.0]])
    p = b * c
    if near_zero(p, scale * scale, tol):
        core = np.eye(2) + N * t
    elif p < 0:
        w = np.sqrt(-p)
        core = np.cos(w * t) * np.eye(2) + (np.sin(w * t) / w) * N
    else:
        w = np.sqrt(p)
        core = np.cosh(w * t) * np.eye(2) + (np.sinh(w * t) / w) * N
    _check_kind_consistency(M, kind, tol)
    return np.exp(mu * t) * core


def _check_kind_consistency(M: np.ndarray, kind: SpectralKind | None,
                            tol: float) -> None:
    if kind is None:
        return
    actual = spectral_kind(M, tol)
    if actual.tag is not kind.tag:
        raise ShapeMismatchError(
            f"declared spectral kind {kind.tag} does not match matrix "
            f"(actual {actual.tag})"
        )


# series oracle parameters: desk-scale matrices, accuracy over speed
_SERIES_ORDER = 18
_MAX_SQUARINGS = 20


def expm_reference(M, t: float) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring on a truncated Taylor
    series.  Independent oracle for expm_normal; also the exact flow map
    used by the simulation oracle."""
    X = as_mat2(M) * float(t)
    norm = float(np.max(np.abs(X)))
    s = 0
    if norm > 0.5:
        s = min(_MAX_SQUARINGS, int(np.ceil(np.log2(norm / 0.5))))
    Y = X / (2.0 ** s)
    # Horner evaluation of sum_{j=0}^{order} Y^j / j!
    E = np.eye(2) + Y / _SERIES_ORDER
    for j in range(_SERIES_ORDER - 1, 0, -1):
        E = np.eye(2) + (Y @ E) / j
    for _ in range(s):
        E = E @ E
    return E
