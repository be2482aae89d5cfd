"""Shared generators for the test suite.

Systems are generated directly in normal-form coordinates from sampled
invariants (which makes the expected case tags and formulas transparent),
then optionally conjugated and rescaled to exercise the reduction
pipeline.
"""

from __future__ import annotations

import numpy as np

from planarswitch import SystemPair


def jordan_A(eta: float) -> np.ndarray:
    return np.array([[eta, 1.0], [0.0, eta]])


def regular_B(rho: float, k: float, delta_sign: int) -> np.ndarray:
    if k == 0.0:
        raise ValueError("regular case needs k != 0")
    off = 0.0 if delta_sign == 0 else delta_sign / k
    return np.array([[rho, off], [k, rho]])


def singular_B(rho: float, variant: str) -> np.ndarray:
    if variant == "S1":
        return np.diag([rho - 1.0, rho + 1.0])
    if variant == "S-1":
        return np.diag([rho + 1.0, rho - 1.0])
    raise ValueError(variant)


def normal_pair(eta: float, rho: float, k: float, delta_sign: int) -> SystemPair:
    """Pair already in normal form with the given invariants."""
    return SystemPair.of(jordan_A(eta), regular_B(rho, k, delta_sign))


def singular_pair(eta: float, rho: float, variant: str = "S-1") -> SystemPair:
    return SystemPair.of(jordan_A(eta), singular_B(rho, variant))


def is_hurwitz(M) -> bool:
    M = np.asarray(M, dtype=float)
    return float(np.trace(M)) < 0.0 and float(np.linalg.det(M)) > 0.0


def random_invariants(rng, delta_sign=None, eta_range=(0.1, 2.5),
                      rho_range=(0.1, 2.5), k_range=(-4.0, 4.0)):
    """Sample (eta, rho, k, delta_sign) consistent with a valid system.

    rho < -1 is enforced where B's real eigenvalues require it
    (delta > 0 regular case).
    """
    if delta_sign is None:
        delta_sign = int(rng.choice([-1, 0, 1]))
    eta = -float(rng.uniform(*eta_range))
    rho = -float(rng.uniform(*rho_range))
    if delta_sign > 0 and rho >= -1.0:
        rho -= 1.0 + float(rng.uniform(0.05, 1.0))
    k = float(rng.uniform(*k_range))
    if abs(k) < 1e-2:
        k = 1e-2 if k >= 0 else -1e-2
    return eta, rho, k, delta_sign


def random_normal_pair(rng, delta_sign=None, **kw):
    """Random valid pair in normal-form coordinates (regular case)."""
    while True:
        eta, rho, k, s = random_invariants(rng, delta_sign, **kw)
        B = regular_B(rho, k, s)
        if is_hurwitz(B):
            return normal_pair(eta, rho, k, s), (eta, rho, k, s)


def random_rotating_invariants(rng):
    """Invariants of a rotating direct system: k < 0, Delta > 0.

    For k < 0 the orientation is automatically direct and Delta > 0 holds
    in every regular case except some complex-eigenvalue configurations,
    which are resampled.
    """
    while True:
        eta, rho, k, s = random_invariants(rng)
        if k >= 0.0:
            k = -abs(k)
        if s > 0 and rho >= -1.0:
            rho -= 1.2
        Delta = k * k - 4 * eta * rho * k + s * 4 * eta * eta
        B = regular_B(rho, k, s)
        if Delta > 1e-6 and is_hurwitz(B):
            return eta, rho, k, s


def random_conjugation(rng, cond_max: float = 100.0) -> np.ndarray:
    while True:
        T = rng.uniform(-2.0, 2.0, (2, 2))
        if abs(np.linalg.det(T)) > 0.05 and np.linalg.cond(T) <= cond_max:
            return T


def conjugated(pair: SystemPair, T, tau1: float = 1.0,
               tau2: float = 1.0) -> SystemPair:
    """Similarity transform plus independent positive time scales."""
    T = np.asarray(T, dtype=float)
    Ti = np.linalg.inv(T)
    return SystemPair.of(tau1 * Ti @ pair.A @ T, tau2 * Ti @ pair.B @ T)
