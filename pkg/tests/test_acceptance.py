"""Acceptance gate: the nine primary criteria, one pass/fail line each.

Run with `pytest -s tests/test_acceptance.py` to see the lines; each
criterion is a separate test so the gate reports them independently.
"""

import json
import math
import time

import numpy as np

from planarswitch import (
    ConstantU,
    RandomDwell,
    VerdictKind,
    classify,
    collinearity_data,
    collinearity_discriminant,
    expm_normal,
    expm_reference,
    half_turn_ratio,
    normal_form,
    simulate,
    worst_trajectory,
)
from planarswitch.cli import main
from planarswitch.invariants import InvariantTriple
from planarswitch.linalg2 import det

from helpers import (
    conjugated,
    normal_pair,
    random_conjugation,
    random_normal_pair,
    random_rotating_invariants,
    singular_pair,
)


def _line(num: int, name: str, ok: bool, t0: float, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    extra = f" [{detail}]" if detail else ""
    print(f"{status}: criterion {num} ({name}) in {time.time() - t0:.1f}s{extra}")
    assert ok, f"criterion {num} ({name}) failed{extra}"


def test_criterion_1_collinearity_factor_identities():
    """alpha+ alpha- == detB/detA and alpha+ + alpha- == (2 eta rho - k)/detA
    over 10,000 valid pairs with Delta >= 0, to 1e-9 relative."""
    t0 = time.time()
    rng = np.random.default_rng(101)
    checked, worst = 0, 0.0
    while checked < 10_000:
        if checked % 10 == 9:
            eta = -float(rng.uniform(0.1, 2.5))
            rho = -float(rng.uniform(1.1, 3.5))
            pair = singular_pair(eta, rho, "S-1" if checked % 20 == 9 else "S1")
        else:
            pair, _ = random_normal_pair(rng)
        nf = normal_form(pair)
        Delta = collinearity_discriminant(nf.inv)
        if Delta < 0.0:
            continue
        data = collinearity_data(nf)
        ap, am = data.alpha_plus, data.alpha_minus
        dA, dB = det(nf.A_nf), det(nf.B_nf)
        inv = nf.inv
        e1 = abs(ap * am - dB / dA) / max(1.0, abs(dB / dA))
        want = (2.0 * inv.eta * inv.rho - inv.k) / dA
        e2 = abs(ap + am - want) / max(1.0, abs(want))
        worst = max(worst, e1, e2)
        checked += 1
    _line(1, "collinearity factor identities", worst <= 1e-9, t0,
          f"max rel err {worst:.2e} over {checked} pairs")
    assert time.time() - t0 < 10.0


def test_criterion_2_coordinate_invariance():
    """(eta, rho, k, Delta) and the verdict kind are invariant under random
    similarity (cond <= 100) and joint positive time scaling."""
    t0 = time.time()
    rng = np.random.default_rng(103)
    worst = 0.0
    ok = True
    for _ in range(1000):
        pair, (eta, rho, k, s) = random_normal_pair(rng)
        T = random_conjugation(rng, cond_max=100.0)
        # joint scaling leaves the normalized invariants fixed only when
        # delta != 0; the delta == 0 convention is scale-covariant instead
        tau = float(rng.uniform(0.2, 5.0)) if s != 0 else 1.0
        moved = conjugated(pair, T, tau1=tau, tau2=tau)
        v0 = classify(pair)
        v1 = classify(moved)
        if v0.kind is not v1.kind:
            ok = False
            break
        i0, i1 = v0.nf.inv, v1.nf.inv
        D0 = collinearity_discriminant(i0)
        D1 = collinearity_discriminant(i1)
        for a, b in ((i0.eta, i1.eta), (i0.rho, i1.rho), (i0.k, i1.k),
                     (D0, D1)):
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    ok = ok and worst <= 1e-7
    _line(2, "coordinate invariance", ok, t0, f"max rel drift {worst:.2e}")
    assert time.time() - t0 < 10.0


def _rotating_suite(rng):
    """>= 200 rotating systems spanning all regular cases, both ratio
    formula branches, and the pi/2 arc-time denominator zero."""
    suite = []
    # generic complex / real / nondiagonalizable B
    for s in (-1, 1, 0):
        n = 0
        while n < 60:
            eta, rho, k, ss = random_rotating_invariants(rng)
            if ss != s:
                continue
            if s == -1 and abs(rho + eta / k) < 1e-3:
                continue  # keep the generic branch well-conditioned
            suite.append((eta, rho, k, s))
            n += 1
    # degenerate branch: chi = rho + eta/k == 0 (complex case only)
    for _ in range(20):
        eta = -float(rng.uniform(0.1, 2.5))
        k = -float(rng.uniform(0.1, 4.0))
        suite.append((eta, -eta / k, k, -1))
    # arc-time denominator zero: k rho + 2 eta == 0 -> theta = pi/2
    for _ in range(20):
        eta = -float(rng.uniform(0.1, 2.5))
        k = -float(rng.uniform(0.1, 4.0))
        suite.append((eta, -2.0 * eta / k, k, -1))
    return suite


def test_criterion_3_half_turn_ratio_anchoring():
    """Analytic R equals the integrated worst-trajectory half-turn norm
    ratio to 1e-8 relative on >= 200 rotating systems."""
    t0 = time.time()
    rng = np.random.default_rng(107)
    suite = _rotating_suite(rng)
    assert len(suite) >= 200
    worst = 0.0
    for eta, rho, k, s in suite:
        nf = normal_form(normal_pair(eta, rho, k, s))
        R = half_turn_ratio(nf.inv, nf).R
        traj = worst_trajectory(nf, [1.0, 0.0], max_half_turns=1)
        measured = traj.half_turn_ratios[0]
        worst = max(worst, abs(measured - R) / max(abs(R), 1e-300))
    _line(3, "half-turn ratio anchoring", worst <= 1e-8, t0,
          f"max rel err {worst:.2e} over {len(suite)} systems")
    assert time.time() - t0 < 30.0


def test_criterion_4_golden_verdicts():
    """The nine worked systems, with pinned certificate values."""
    t0 = time.time()
    ok = True
    msgs = []

    def check(cond, msg):
        nonlocal ok
        if not cond:
            ok = False
            msgs.append(msg)

    v = classify(singular_pair(-1.0, -3.0, "S-1"))
    check(v.kind is VerdictKind.GUAS and v.certificate.kind == "singular_case",
          "singular")

    v = classify(normal_pair(-0.1, -0.1, 1.0, -1))
    check(v.kind is VerdictKind.UNBOUNDED, "static kind")
    check(abs(v.certificate.payload["u0"] - 0.75) <= 1e-9, "u0")
    check(abs(v.certificate.payload["unstable_eigenvalue"]
              - (-0.1 + math.sqrt(0.125))) <= 1e-9, "eigenvalue")

    v = classify(normal_pair(-1.0, -1.0, -1.0, -1))
    pinned = math.sqrt(2.0) * math.exp(-1.0 - 3.0 * math.pi / 4.0)
    check(v.kind is VerdictKind.GUAS, "degenerate kind")
    check(abs(v.certificate.payload["R"] - pinned) <= 1e-12, "degenerate R")

    v = classify(normal_pair(-1.0, -2.0, -1.0, 1))
    check(v.kind is VerdictKind.GUAS
          and v.certificate.kind == "ratio_rotation", "hyperbolic")

    v = classify(normal_pair(-1.0, -2.0, 0.52, 1))
    check(v.kind is VerdictKind.GUAS
          and v.certificate.kind == "projective_cone", "projective")

    v = classify(normal_pair(-1.0, -1.0, -1.0, 0))
    root = math.sqrt(5.0)
    pinned = abs((1.0 + root) / (1.0 - root)) * math.exp(-2.0 * root)
    check(v.kind is VerdictKind.GUAS, "parabolic kind")
    check(abs(v.certificate.payload["R"] - pinned) <= 1e-9, "parabolic R")

    v = classify(normal_pair(-1.0, -1.0, 2.0 + 2.0 * math.sqrt(2.0), -1))
    check(v.kind is VerdictKind.UNIFORMLY_STABLE_NOT_GUAS
          and v.certificate.kind == "semidefinite_lyapunov", "one-line inverse")

    v = classify(normal_pair(-1.0, -1.0, 2.0 - 2.0 * math.sqrt(2.0), -1))
    check(v.kind is VerdictKind.GUAS
          and v.certificate.kind == "degenerate_direct", "one-line direct")

    v = classify(normal_pair(-0.01, -0.01, -10.0, -1))
    check(v.kind is VerdictKind.UNBOUNDED
          and v.certificate.payload["R"] > 1.0, "dynamic")

    _line(4, "golden verdicts", ok, t0, "; ".join(msgs))


def _fuzz_system(rng):
    """A fuzz-set entry whose verdict is efficiently checkable: skip
    rotating systems with R within 5% of the stability boundary (their
    simulations would need impractically many half turns / horizons)."""
    while True:
        if rng.uniform() < 0.05:
            eta = -float(rng.uniform(0.25, 0.4))
            pair = normal_pair(eta, eta, -float(rng.uniform(8.0, 12.0)), -1)
        else:
            pair, _ = random_normal_pair(rng, eta_range=(0.3, 2.5),
                                         rho_range=(0.3, 2.5),
                                         k_range=(-6.0, 6.0))
        v = classify(pair)
        if v.certificate.kind == "ratio_rotation":
            R = v.certificate.payload["R"]
            if 0.95 < R < 1.05:
                continue
        if v.kind is VerdictKind.UNIFORMLY_STABLE_NOT_GUAS:
            continue
        return pair, v


def test_criterion_5_classifier_simulator_agreement():
    """GUAS verdicts decay under 20 random switching signals; Unbounded
    verdicts blow up under their certificate policy. 500 systems."""
    t0 = time.time()
    rng = np.random.default_rng(109)
    n_guas = n_unb = 0
    disagreements = []
    for i in range(500):
        pair, v = _fuzz_system(rng)
        inv = v.nf.inv
        rate = min(abs(inv.eta), abs(inv.rho))
        if v.kind is VerdictKind.GUAS:
            n_guas += 1
            t_max = 400.0 / rate
            for seed in range(20):
                traj = simulate(pair, RandomDwell(seed, 0.05, 0.5),
                                [1.0, 0.0], t_max, t_max, stop_below=1e-6)
                if traj.norms()[-1] >= 1e-6:
                    disagreements.append((i, "GUAS", seed))
                    break
        else:
            n_unb += 1
            cert = v.certificate
            if cert.kind == "static_instability":
                u0 = cert.payload["u0"]
                lam = cert.payload["unstable_eigenvalue"]
                M = u0 * pair.A + (1.0 - u0) * pair.B
                vals, vecs = np.linalg.eig(M)
                x0 = np.real(vecs[:, np.argmax(np.real(vals))])
                t_max = 20.0 / lam
                traj = simulate(pair, ConstantU(u0), x0, t_max,
                                t_max / 50.0, stop_above=1e6)
            else:
                R = cert.payload["R"]
                turns = int(math.ceil(math.log(1e6) / math.log(R))) + 1
                nf = v.nf
                traj = worst_trajectory(nf, [1.0, 0.0], max_half_turns=turns)
            n0 = float(np.linalg.norm(traj.samples[0].state))
            if traj.norms()[-1] <= 1e6 * n0:
                disagreements.append((i, "unbounded", None))
    ok = not disagreements and n_guas > 0 and n_unb > 0
    _line(5, "classifier-simulator agreement", ok, t0,
          f"{n_guas} GUAS / {n_unb} unbounded, "
          f"{len(disagreements)} disagreements")
    assert time.time() - t0 < 300.0


def test_criterion_6_orientation_boundary_guard():
    """k == 2 eta rho forces Delta = -4 detA detB < 0 (so the orientation
    split never faces Delta >= 0 on the boundary); 10,000 constructions."""
    t0 = time.time()
    rng = np.random.default_rng(113)
    ok = True
    worst = 0.0
    for _ in range(10_000):
        s = int(rng.choice([-1, 0, 1]))
        eta = -float(rng.uniform(0.05, 3.0))
        rho = -float(rng.uniform(1.05, 3.0)) if s > 0 else -float(rng.uniform(0.05, 3.0))
        k = 2.0 * eta * rho
        inv = InvariantTriple(eta, rho, k, float(s), s)
        Delta = collinearity_discriminant(inv)
        A_nf = np.array([[eta, 1.0], [0.0, eta]])
        B_nf = np.array([[rho, s / k if s != 0 else 0.0], [k, rho]])
        want = -4.0 * det(A_nf) * det(B_nf)
        ok = ok and Delta < 0.0
        worst = max(worst, abs(Delta - want) / max(1.0, abs(want)))
    ok = ok and worst <= 1e-9
    _line(6, "orientation boundary guard", ok, t0,
          f"max rel err {worst:.2e}")


def test_criterion_7_semidefinite_lyapunov_identities():
    """On >= 50 one-line inverse instances, both derivative identities hold
    at 100 points to 1e-10, are <= 0, and vanish on x2 = -2 eta x1."""
    t0 = time.time()
    rng = np.random.default_rng(127)
    ok = True
    n = 0
    while n < 60:
        s = int(rng.choice([-1, 0, 1]))
        eta = -float(rng.uniform(0.1, 3.0))
        rho = -float(rng.uniform(1.1, 3.0)) if s > 0 else -float(rng.uniform(0.1, 3.0))
        k = 2.0 * eta * (rho - math.sqrt(rho * rho - s))
        pair = normal_pair(eta, rho, k, s)
        v = classify(pair)
        if v.kind is not VerdictKind.UNIFORMLY_STABLE_NOT_GUAS:
            ok = False
            break
        nf = v.nf
        pts = rng.uniform(-1.0, 1.0, size=(100, 2))
        for x in pts:
            grad = np.array([2.0 * x[0], x[1] / (2.0 * eta * eta)])
            da = float(grad @ (nf.A_nf @ x))
            db = float(grad @ (nf.B_nf @ x))
            sq = (x[1] + 2.0 * eta * x[0]) ** 2
            ok = ok and abs(da - sq / (2.0 * eta)) <= 1e-10 * max(1.0, sq)
            ok = ok and abs(db - rho * sq / (2.0 * eta * eta)) <= 1e-10 * max(1.0, sq)
            ok = ok and da <= 1e-12 and db <= 1e-12
        for x1 in rng.uniform(-1.0, 1.0, size=20):
            x = np.array([x1, -2.0 * eta * x1])
            grad = np.array([2.0 * x[0], x[1] / (2.0 * eta * eta)])
            ok = ok and abs(float(grad @ (nf.A_nf @ x))) <= 1e-12
            ok = ok and abs(float(grad @ (nf.B_nf @ x))) <= 1e-12
        n += 1
    _line(7, "semidefinite Lyapunov identities", ok, t0, f"{n} instances")


def test_criterion_8_expm_against_series_oracle():
    """Closed-form exponentials match the scaling-and-squaring series
    oracle to 1e-12 (elementwise, relative to the result magnitude)."""
    t0 = time.time()
    rng = np.random.default_rng(131)
    worst = 0.0
    for _ in range(2000):
        shape = rng.integers(0, 5)
        mu = rng.uniform(-2.0, 2.0)
        if shape == 0:
            M = np.diag(rng.uniform(-2.0, 2.0, 2))
        elif shape == 1:
            M = np.array([[mu, rng.uniform(-2, 2)], [0.0, mu]])
        elif shape == 2:
            M = np.array([[mu, 0.0], [rng.uniform(-2, 2), mu]])
        elif shape == 3:
            M = np.array([[mu, rng.uniform(0.1, 2)],
                          [-rng.uniform(0.1, 2), mu]])
        else:
            M = np.array([[mu, rng.uniform(0.1, 2)],
                          [rng.uniform(0.1, 2), mu]])
        t = rng.uniform(-5.0, 5.0)
        E = expm_normal(M, t)
        Rf = expm_reference(M, t)
        worst = max(worst,
                    float(np.max(np.abs(E - Rf)) / max(1.0, np.max(np.abs(Rf)))))
    _line(8, "expm vs series oracle", worst <= 1e-12, t0,
          f"max err {worst:.2e}")


def test_criterion_9_cli_determinism(tmp_path):
    """simulate --policy random --seed 42 is byte-identical across runs;
    classify reports round-trip through JSON."""
    t0 = time.time()
    doc = {"A": [[-1.0, 1.0], [0.0, -1.0]],
           "B": [[-2.0, -1.0], [-1.0, -2.0]], "label": "gate"}
    inp = tmp_path / "sys.json"
    inp.write_text(json.dumps(doc))
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        rc = main(["simulate", "--input", str(inp), "--policy", "random",
                   "--seed", "42", "--t-max", "30", "--dt", "0.1",
                   "--output", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
    identical = outs[0] == outs[1]

    rep_path = tmp_path / "rep.json"
    rc = main(["classify", "--input", str(inp), "--output", str(rep_path)])
    parsed = json.loads(rep_path.read_text())
    round_trips = (rc == 0 and json.loads(json.dumps(parsed)) == parsed
                   and parsed["verdict"] == "GUAS")
    _line(9, "CLI determinism", identical and round_trips, t0)
