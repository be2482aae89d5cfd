"""Degeneracy tolerance policy.

All exact case splits (delta = 0, k = 0, Delta = 0, R = 1) are resolved by
treating a quantity q as zero when |q| <= tol * max(1, scale), where scale
is the magnitude of the inputs q was computed from.  Near-misses within
10x of the threshold are reported as fragile-classification warnings.
"""

DEGENERACY_TOL = 1e-9
RATIO_TOL = 1e-9

# borderline quantities within this factor of the tolerance get a warning
FRAGILE_FACTOR = 10.0


def near_zero(q: float, scale: float = 1.0, tol: float = DEGENERACY_TOL) -> bool:
    return abs(q) <= tol * max(1.0, scale)


def tol_sign(q: float, scale: float = 1.0, tol: float = DEGENERACY_TOL) -> int:
    """Sign of q with the declared zero band."""
    if near_zero(q, scale, tol):
        return 0
    return 1 if q > 0 else -1


def is_fragile(q: float, scale: float = 1.0, tol: float = DEGENERACY_TOL) -> bool:
    """True when q is near the zero band but not inside it."""
    band = tol * max(1.0, scale)
    return band < abs(q) <= FRAGILE_FACTOR * band
