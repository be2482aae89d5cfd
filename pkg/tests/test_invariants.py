"""Validation, invariant computation, and normal-form construction."""

import numpy as np
import pytest

from planarswitch import (
    CaseTag,
    NotHurwitzError,
    PlanarSwitchError,
    Rejection,
    SystemPair,
    case_tag,
    compute_invariants,
    normal_form,
    validate_pair,
)

from helpers import (
    conjugated,
    jordan_A,
    random_conjugation,
    random_normal_pair,
    singular_pair,
)


def test_not_hurwitz_rejected():
    bad = np.array([[1.0, 1.0], [0.0, 1.0]])
    ok = np.array([[-1.0, 1.0], [-1.0, -1.0]])
    with pytest.raises(NotHurwitzError):
        validate_pair(SystemPair.of(bad, ok))
    with pytest.raises(NotHurwitzError):
        validate_pair(SystemPair.of(ok, bad))
    # zero trace / zero det sit exactly on the boundary and are invalid
    with pytest.raises(NotHurwitzError):
        validate_pair(SystemPair.of(np.array([[0.0, 1.0], [-1.0, 0.0]]), ok))


def test_commuting_rejection():
    A = np.array([[-1.0, 1.0], [0.0, -1.0]])
    res = validate_pair(SystemPair.of(A, 2.0 * A))
    assert res.rejection is Rejection.COMMUTING


def test_both_diagonalizable_rejection():
    A = np.diag([-2.0, -4.0])
    B = np.array([[-3.0, 1.0], [1.0, -3.0]])
    res = validate_pair(SystemPair.of(A, B))
    assert res.rejection is Rejection.BOTH_DIAGONALIZABLE


def test_role_swap_when_only_second_is_nondiagonalizable():
    A = np.array([[-3.0, 1.0], [1.0, -3.0]])  # real distinct
    B = jordan_A(-1.0)
    res = validate_pair(SystemPair.of(A, B))
    assert res.ok and res.context.swapped
    assert np.allclose(res.context.A, B)


def test_invariants_on_normal_forms_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(300):
        pair, (eta, rho, k, s) = random_normal_pair(rng)
        ctx = validate_pair(pair).context
        inv = compute_invariants(ctx)
        assert inv.delta_sign == s
        assert inv.eta == pytest.approx(eta, rel=1e-9)
        assert inv.rho == pytest.approx(rho, rel=1e-9)
        assert inv.k == pytest.approx(k, rel=1e-9)
        assert inv.eta < 0.0 and inv.rho < 0.0


def test_case_tag_regular_and_singular():
    pair, _ = random_normal_pair(np.random.default_rng(0), delta_sign=-1)
    inv = compute_invariants(validate_pair(pair).context)
    assert case_tag(inv) is CaseTag.RMINUS1

    sp = singular_pair(-1.0, -3.0, "S-1")
    inv_s = compute_invariants(validate_pair(sp).context)
    with pytest.raises(ValueError):
        case_tag(inv_s)  # k == 0 needs the diagonal-order split
    assert case_tag(inv_s, d_minus_a_sign=-1) is CaseTag.SMINUS1
    assert case_tag(inv_s, d_minus_a_sign=+1) is CaseTag.S1


def test_normal_form_realizes_canonical_pair():
    rng = np.random.default_rng(11)
    for _ in range(200):
        pair, (eta, rho, k, s) = random_normal_pair(rng)
        T = random_conjugation(rng)
        moved = conjugated(pair, T, tau1=1.0, tau2=1.0)
        nf = normal_form(moved)
        assert nf.residual(moved.A, moved.B) <= 1e-8
        assert np.allclose(nf.A_nf, [[nf.inv.eta, 1.0], [0.0, nf.inv.eta]])
        assert nf.inv.eta == pytest.approx(eta, rel=1e-7)
        assert nf.inv.rho == pytest.approx(rho, rel=1e-7)
        assert nf.inv.k == pytest.approx(k, rel=1e-6, abs=1e-8)


def test_normal_form_singular_case():
    pair = singular_pair(-1.0, -3.0, "S-1")
    nf = normal_form(pair)
    assert nf.case is CaseTag.SMINUS1
    assert np.allclose(nf.B_nf, np.diag([-2.0, -4.0]))
    assert nf.residual(pair.A, pair.B) <= 1e-12


def test_normal_form_coordinate_maps_are_inverse():
    pair, _ = random_normal_pair(np.random.default_rng(5))
    nf = normal_form(pair)
    x = np.array([0.3, -1.7])
    assert np.allclose(nf.from_normal_coords(nf.to_normal_coords(x)), x)


def test_normal_form_rejects_commuting():
    A = jordan_A(-1.0)
    with pytest.raises(PlanarSwitchError):
        normal_form(SystemPair.of(A, 3.0 * A))


def test_jordan_probe_order_independence():
    """Either deterministic probe vector yields identical invariants."""
    rng = np.random.default_rng(21)
    for _ in range(100):
        pair, _ = random_normal_pair(rng)
        moved = conjugated(pair, random_conjugation(rng))
        nf1 = normal_form(moved, _probe_order=((1.0, 0.0), (0.0, 1.0)))
        nf2 = normal_form(moved, _probe_order=((0.0, 1.0), (1.0, 0.0)))
        assert nf1.case is nf2.case
        assert nf1.inv.k == pytest.approx(nf2.inv.k, rel=1e-9, abs=1e-12)
        assert nf1.inv.eta == pytest.approx(nf2.inv.eta, rel=1e-9)
        assert nf1.inv.rho == pytest.approx(nf2.inv.rho, rel=1e-9)


def test_swap_symmetry_of_invariants():
    """When both orders are in scope the swapped pair reuses the same
    reduction, so invariants agree with the unswapped run."""
    A = jordan_A(-1.0)
    B = np.array([[-3.0, 1.0], [1.0, -3.0]])
    nf_fwd = normal_form(SystemPair.of(A, B))
    nf_swp = normal_form(SystemPair.of(B, A))
    assert not nf_fwd.swapped and nf_swp.swapped
    assert nf_fwd.inv == nf_swp.inv
