"""Structured reports for CLI output.

Reports are plain dicts serialized as JSON; floats round-trip exactly
(Python's repr is the shortest round-trip representation).
"""

from __future__ import annotations

import json
from typing import Any

from . import __version__
from .classifier import Verdict
from .invariants import NormalForm
from .tolerances import DEGENERACY_TOL, RATIO_TOL


def _slope_value(m) -> Any:
    if m is None:
        return None
    return "inf" if m.infinite else m.value


def _zset_dict(verdict: Verdict) -> Any:
    if verdict.nf is None:
        return None
    from .collinearity import slopes

    z = slopes(verdict.nf.inv, verdict.nf.case)
    return {
        "kind": z.kind.value,
        "m_plus": _slope_value(z.m_plus),
        "m_minus": _slope_value(z.m_minus),
    }


def build_report(label: str | None, verdict: Verdict,
                 tol: float = DEGENERACY_TOL,
                 ratio_tol: float = RATIO_TOL) -> dict:
    nf = verdict.nf
    rep: dict[str, Any] = {
        "label": label,
        "verdict": verdict.kind.value,
        "certificate": {"kind": verdict.certificate.kind,
                        **verdict.certificate.payload},
        "warnings": list(verdict.warnings),
        "tool_version": __version__,
        "tolerances": {"degenerate": tol, "ratio": ratio_tol},
    }
    if nf is not None:
        rep["swapped"] = nf.swapped
        rep["invariants"] = {
            "eta": nf.inv.eta,
            "rho": nf.inv.rho,
            "k": nf.inv.k,
            "delta": nf.inv.delta,
            "delta_sign": nf.inv.delta_sign,
            "Delta": verdict.Delta,
        }
        rep["case"] = nf.case.value
        rep["orientation"] = (verdict.orientation.value
                              if verdict.orientation else None)
        rep["slopes"] = _zset_dict(verdict)
    else:
        rep["swapped"] = None
        rep["invariants"] = None
        rep["case"] = None
        rep["orientation"] = None
        rep["slopes"] = None
    return rep


def normal_form_report(label: str | None, nf: NormalForm, A, B) -> dict:
    return {
        "label": label,
        "A_nf": nf.A_nf.tolist(),
        "B_nf": nf.B_nf.tolist(),
        "T": nf.T.tolist(),
        "tau": nf.tau,
        "case": nf.case.value,
        "swapped": nf.swapped,
        "invariants": {
            "eta": nf.inv.eta,
            "rho": nf.inv.rho,
            "k": nf.inv.k,
            "delta": nf.inv.delta,
            "delta_sign": nf.inv.delta_sign,
        },
        "residual": nf.residual(B, A) if nf.swapped else nf.residual(A, B),
        "tool_version": __version__,
    }


def to_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=False)


def to_text(rep: dict) -> str:
    lines = []

    def emit(prefix: str, obj: Any):
        if isinstance(obj, dict):
            for k, v in obj.items():
                emit(f"{prefix}{k}.", v) if isinstance(v, dict) else lines.append(
                    f"{prefix}{k}: {_fmt(v)}")
        else:
            lines.append(f"{prefix}: {_fmt(obj)}")

    emit("", rep)
    return "\n".join(lines) + "\n"


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return json.dumps(v)
    return str(v)
