"""Worst-trajectory construction and switching-policy simulation.

All flows here are exact (closed-form or series matrix exponentials);
switching times come from analytic formulas or from bisection on the
exact flow, so there is no global integration error.  The simulator is
the independent oracle the classifier's verdicts are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classifier import b_flow_time
from .collinearity import (
    Orientation,
    Slope,
    ZKind,
    ZSet,
    collinearity_discriminant,
    orientation,
    quadratic_form,
    slopes,
)
from .errors import InconsistentInvariantsError, PreconditionError
from .invariants import NormalForm, SystemPair, normal_form
from .linalg2 import as_mat2, as_vec2, expm_normal, expm_reference
from .tolerances import DEGENERACY_TOL


@dataclass(frozen=True)
class Sample:
    t: float
    state: np.ndarray
    active: str  # "A", "B" or "u=<value>"
    event: str = ""  # "", "switch+", "switch-"


@dataclass(frozen=True)
class SwitchEvent:
    t: float
    line: str  # "+" or "-"
    state: np.ndarray


@dataclass
class Trajectory:
    samples: list[Sample] = field(default_factory=list)
    switch_events: list[SwitchEvent] = field(default_factory=list)
    half_turn_ratios: list[float] = field(default_factory=list)
    rotating: bool = False

    def norms(self) -> np.ndarray:
        return np.array([float(np.linalg.norm(s.state)) for s in self.samples])

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])


# --- switching policies -------------------------------------------------

@dataclass(frozen=True)
class ConstantU:
    u: float

    def __post_init__(self):
        if not 0.0 <= self.u <= 1.0:
            raise PreconditionError("constant policy needs u in [0, 1]")


@dataclass(frozen=True)
class RandomDwell:
    """Alternating A/B with uniform dwell times; seeded PCG64 so output
    files are bit-reproducible across platforms."""

    seed: int
    dwell_min: float
    dwell_max: float

    def __post_init__(self):
        if not (self.dwell_min > 0.0 and self.dwell_max >= self.dwell_min):
            raise PreconditionError("need 0 < dwell_min <= dwell_max")


@dataclass(frozen=True)
class WorstCase:
    max_half_turns: int = 50


PolicySpec = ConstantU | RandomDwell | WorstCase


# --- geometric helpers --------------------------------------------------

def _line_distance(x: np.ndarray, m: Slope) -> float:
    if m.infinite:
        return abs(float(x[0]))
    return abs(float(x[1] - m.value * x[0])) / math.sqrt(1.0 + m.value ** 2)


def _project_to_line(x: np.ndarray, m: Slope) -> np.ndarray:
    """Point on the line of slope m with the norm of x (positive branch)."""
    d = m.direction()
    return float(np.linalg.norm(x)) * d / float(np.linalg.norm(d))


def _radial_cosine(M: np.ndarray, x: np.ndarray) -> float:
    v = M @ x
    nv = float(np.linalg.norm(v))
    nx = float(np.linalg.norm(x))
    if nv == 0.0:
        return -1.0
    return float(v @ x) / (nv * nx)


def _pick_field(nf: NormalForm, x: np.ndarray, eps: float = 1e-6) -> str:
    """Smallest-angle rule: the field whose velocity is closest to the
    exiting radial direction.  On Z the fields are collinear; the tie is
    broken by probing an epsilon step of each flow."""
    ca = _radial_cosine(nf.A_nf, x)
    cb = _radial_cosine(nf.B_nf, x)
    if abs(ca - cb) > 1e-9:
        return "A" if ca > cb else "B"
    ya = expm_normal(nf.A_nf, eps) @ x
    yb = expm_normal(nf.B_nf, eps) @ x
    return "A" if _radial_cosine(nf.A_nf, ya) >= _radial_cosine(nf.B_nf, yb) else "B"


# --- crossing detection -------------------------------------------------

def crossing_times(nf: NormalForm, mode: str, x0, zset: ZSet | None = None,
                   horizon: float = 50.0, n_grid: int = 4000) -> list[float]:
    """Times t in [0, horizon] where the flow of the given mode from x0
    crosses Z (roots of Q along the exact flow), sorted.

    Found by sign-bisection on the exact flow to absolute tolerance
    1e-12; a start point already on Z contributes the root t = 0.
    """
    if mode not in ("A", "B"):
        raise ValueError("mode must be 'A' or 'B'")
    M = nf.A_nf if mode == "A" else nf.B_nf
    x0 = as_vec2(x0)
    if float(np.linalg.norm(x0)) == 0.0:
        raise PreconditionError("x0 must be nonzero")

    def q_at(t: float) -> float:
        return quadratic_form(nf, expm_normal(M, t) @ x0)

    roots: list[float] = []
    q0 = q_at(0.0)
    qscale = max(1.0, float(np.linalg.norm(x0)) ** 2)
    on_z = abs(q0) <= 1e-10 * qscale
    if on_z:
        roots.append(0.0)
    t_lo = (horizon / n_grid) * 1e-3 if on_z else 0.0

    ts = np.linspace(t_lo, horizon, n_grid)
    qs = np.array([q_at(t) for t in ts])
    ref_sign = 0.0
    prev_t = None
    for t, q in zip(ts, qs):
        s = math.copysign(1.0, q) if q != 0.0 else 0.0
        if ref_sign == 0.0 and s != 0.0:
            ref_sign = s
            prev_t = t
            continue
        if s != 0.0 and s != ref_sign:
            lo, hi = prev_t, t
            while hi - lo > 1e-12:
                mid = 0.5 * (lo + hi)
                if math.copysign(1.0, q_at(mid)) == ref_sign:
                    lo = mid
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
            ref_sign = s
        prev_t = t
    return roots


def _first_crossing(nf: NormalForm, M: np.ndarray, x: np.ndarray,
                    horizon: float, n_grid: int = 600) -> float | None:
    """First strictly positive root of Q along the flow of M from x, or
    None if there is no sign change within the horizon."""

    def q_at(t: float) -> float:
        return quadratic_form(nf, expm_normal(M, t) @ x)

    nx2 = float(np.linalg.norm(x)) ** 2
    t_lo = (horizon / n_grid) * 1e-3 if abs(q_at(0.0)) <= 1e-10 * nx2 else 0.0
    prev_t, prev_q = t_lo, q_at(t_lo)
    # Q decays like the squared flow; compare signs relative to magnitude
    for t in np.linspace(t_lo, horizon, n_grid)[1:]:
        q = q_at(t)
        if prev_q != 0.0 and q != 0.0 and math.copysign(1.0, q) != math.copysign(1.0, prev_q):
            lo, hi = prev_t, t
            ref = math.copysign(1.0, prev_q)
            while hi - lo > 1e-12:
                mid = 0.5 * (lo + hi)
                if math.copysign(1.0, q_at(mid)) == ref:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev_t, prev_q = t, q
    return None


# --- worst trajectory ---------------------------------------------------

_ARC_SAMPLES = 12
_NONROT_EVENT_CAP = 10_000
_NONROT_NORM_STOP = 1e-9


def worst_trajectory(nf: NormalForm, x0, max_half_turns: int = 50,
                     tol: float = DEGENERACY_TOL) -> Trajectory:
    """The trajectory whose velocity stays closest to the exiting radial
    direction; it switches fields exactly on Z.

    Rotating regime (two lines, k < 0): alternates the exact A-flow
    (first line to second) and B-flow (back), recording the norm ratio of
    every half turn.  Non-rotating regimes follow the smallest-angle rule
    with bisection-located crossings until the state has decayed (the
    system is then GUAS by construction).
    """
    x0 = as_vec2(x0)
    if float(np.linalg.norm(x0)) == 0.0:
        raise PreconditionError("x0 must be nonzero")
    inv = nf.inv
    Delta = collinearity_discriminant(inv)
    orient = orientation(inv, Delta, tol)
    if orient is Orientation.INVERSE:
        raise PreconditionError(
            "worst trajectory is defined for direct orientation only"
        )
    if orient is Orientation.NOT_APPLICABLE:
        raise PreconditionError("worst trajectory needs Delta >= 0")
    zset = slopes(inv, nf.case, tol)

    rotating = zset.kind is ZKind.TWO_LINES and inv.k < 0.0
    if rotating:
        return _worst_rotating(nf, x0, zset, Delta, max_half_turns)
    return _worst_non_rotating(nf, x0)


def _worst_rotating(nf: NormalForm, x0: np.ndarray, zset: ZSet,
                    Delta: float, max_half_turns: int) -> Trajectory:
    inv = nf.inv
    root = math.sqrt(Delta)
    t1 = root / (inv.eta * inv.k)
    t2 = b_flow_time(inv, Delta).theta
    if not (t1 > 0.0 and t2 > 0.0):
        raise InconsistentInvariantsError("nonpositive switching times")

    traj = Trajectory(rotating=True)
    x = _project_to_line(x0, zset.m_plus)
    t = 0.0
    traj.samples.append(Sample(t, x.copy(), "A", "switch+"))
    for _ in range(max_half_turns):
        n_start = float(np.linalg.norm(x))
        t, x = _append_arc(traj, nf.A_nf, x, t, t1, "A", skip_first=True)
        if _line_distance(x, zset.m_minus) > 1e-10 * float(np.linalg.norm(x)):
            raise InconsistentInvariantsError("A-flow missed the second line")
        traj.switch_events.append(SwitchEvent(t, "-", x.copy()))
        traj.samples[-1] = Sample(t, x.copy(), "B", "switch-")
        t, x = _append_arc(traj, nf.B_nf, x, t, t2, "B", skip_first=True)
        if _line_distance(x, zset.m_plus) > 1e-10 * float(np.linalg.norm(x)):
            raise InconsistentInvariantsError("B-flow missed the first line")
        traj.switch_events.append(SwitchEvent(t, "+", x.copy()))
        traj.samples[-1] = Sample(t, x.copy(), "A", "switch+")
        traj.half_turn_ratios.append(float(np.linalg.norm(x)) / n_start)
    return traj


def _append_arc(traj: Trajectory, M: np.ndarray, x: np.ndarray, t0: float,
                duration: float, label: str, skip_first: bool) -> tuple[float, np.ndarray]:
    offsets = np.linspace(0.0, duration, _ARC_SAMPLES + 1)
    start = 1 if skip_first else 0
    y = x
    for dt in offsets[start:]:
        y = expm_normal(M, float(dt)) @ x
        traj.samples.append(Sample(t0 + float(dt), y.copy(), label))
    return t0 + duration, y


def _worst_non_rotating(nf: NormalForm, x0: np.ndarray) -> Trajectory:
    traj = Trajectory(rotating=False)
    x = x0.copy()
    t = 0.0
    stop_norm = _NONROT_NORM_STOP * float(np.linalg.norm(x0))
    rate = max(abs(nf.inv.eta), abs(nf.inv.rho), 0.1)
    horizon = 50.0 / rate
    traj.samples.append(Sample(t, x.copy(), _pick_field(nf, x)))
    for _ in range(_NONROT_EVENT_CAP):
        if float(np.linalg.norm(x)) <= stop_norm:
            break
        label = _pick_field(nf, x)
        M = nf.A_nf if label == "A" else nf.B_nf
        tc = _first_crossing(nf, M, x, horizon)
        if tc is None:
            # no further crossing: decay with the current field
            t, x = _decay_out(traj, nf, M, x, t, label, stop_norm)
            break
        t, x = _append_arc(traj, M, x, t, tc, label, skip_first=True)
        line = _nearest_line_label(nf, x)
        traj.switch_events.append(SwitchEvent(t, line, x.copy()))
        traj.samples[-1] = Sample(t, x.copy(), label, f"switch{line}")
    return traj


def _nearest_line_label(nf: NormalForm, x: np.ndarray) -> str:
    zset = slopes(nf.inv, nf.case)
    lines = zset.lines()
    if len(lines) == 1:
        return "+"
    dp = _line_distance(x, zset.m_plus)
    dm = _line_distance(x, zset.m_minus)
    return "+" if dp <= dm else "-"


def _decay_out(traj: Trajectory, nf: NormalForm, M: np.ndarray, x: np.ndarray,
               t: float, label: str, stop_norm: float,
               max_time: float = 1e5) -> tuple[float, np.ndarray]:
    rate = max(abs(nf.inv.eta), abs(nf.inv.rho), 0.01)
    chunk = 2.0 / rate
    elapsed = 0.0
    while float(np.linalg.norm(x)) > stop_norm and elapsed < max_time:
        t, x = _append_arc(traj, M, x, t, chunk, label, skip_first=True)
        elapsed += chunk
    return t, x


# --- policy simulation --------------------------------------------------

def simulate(pair: SystemPair, policy: PolicySpec, x0, t_max: float,
             sample_dt: float, stop_below: float | None = None,
             stop_above: float | None = None,
             tol: float = DEGENERACY_TOL) -> Trajectory:
    """Exact piecewise flow of the switched system under a policy.

    Samples at every multiple of sample_dt plus all switch instants.
    stop_below / stop_above truncate the run early once the state norm
    crosses the given bound (the dynamics are unchanged; only the horizon
    shrinks) -- used by the bulk verdict-vs-simulation checks.
    """
    if not (t_max > 0.0 and sample_dt > 0.0):
        raise PreconditionError("t_max and sample_dt must be positive")
    x0 = as_vec2(x0)
    A, B = as_mat2(pair.A), as_mat2(pair.B)

    if isinstance(policy, ConstantU):
        M = policy.u * A + (1.0 - policy.u) * B
        label = f"u={policy.u:g}"
        segments = [(float(t_max), M, label)]
        return _flow_segments(segments, x0, sample_dt, stop_below, stop_above)

    if isinstance(policy, RandomDwell):
        rng = np.random.default_rng(policy.seed)
        segments = []
        t_acc, use_a = 0.0, True
        while t_acc < t_max:
            dwell = float(rng.uniform(policy.dwell_min, policy.dwell_max))
            dwell = min(dwell, t_max - t_acc)
            segments.append((dwell, A if use_a else B, "A" if use_a else "B"))
            t_acc += dwell
            use_a = not use_a
        return _flow_segments(segments, x0, sample_dt, stop_below, stop_above)

    if isinstance(policy, WorstCase):
        nf = normal_form(pair, tol)
        x0_nf = nf.to_normal_coords(x0)
        traj_nf = worst_trajectory(nf, x0_nf, policy.max_half_turns, tol)
        return _map_back(traj_nf, nf, t_max)

    raise PreconditionError(f"unknown policy {policy!r}")


def _flow_segments(segments, x0, sample_dt, stop_below, stop_above) -> Trajectory:
    traj = Trajectory(rotating=False)
    x = x0.copy()
    t = 0.0
    next_sample = 0.0
    n0 = float(np.linalg.norm(x0))
    traj.samples.append(Sample(0.0, x.copy(), segments[0][2]))
    next_sample += sample_dt
    for i, (dur, M, label) in enumerate(segments):
        t_end = t + dur
        while next_sample < t_end - 1e-15:
            y = expm_reference(M, next_sample - t) @ x
            traj.samples.append(Sample(next_sample, y, label))
            next_sample += sample_dt
            if _should_stop(y, n0, stop_below, stop_above):
                return traj
        x = expm_reference(M, dur) @ x
        t = t_end
        is_switch = i + 1 < len(segments)
        traj.samples.append(
            Sample(t, x.copy(), label, "switch+" if is_switch else "")
        )
        if is_switch:
            traj.switch_events.append(SwitchEvent(t, "+", x.copy()))
        if abs(next_sample - t) < 1e-15:
            next_sample += sample_dt
        if _should_stop(x, n0, stop_below, stop_above):
            return traj
    return traj


def _should_stop(x, n0, stop_below, stop_above) -> bool:
    n = float(np.linalg.norm(x))
    if stop_below is not None and n < stop_below * n0:
        return True
    if stop_above is not None and n > stop_above * n0:
        return True
    return False


def _map_back(traj_nf: Trajectory, nf: NormalForm, t_max: float) -> Trajectory:
    """Map a normal-form trajectory to original coordinates and time.

    Normal-form time s corresponds to original time s / tau, and states
    map through T.
    """
    traj = Trajectory(rotating=traj_nf.rotating,
                      half_turn_ratios=list(traj_nf.half_turn_ratios))
    for s in traj_nf.samples:
        t = s.t / nf.tau
        if t > t_max + 1e-12:
            break
        traj.samples.append(Sample(t, nf.T @ s.state, s.active, s.event))
    for e in traj_nf.switch_events:
        t = e.t / nf.tau
        if t > t_max + 1e-12:
            break
        traj.switch_events.append(SwitchEvent(t, e.line, nf.T @ e.state))
    return traj
