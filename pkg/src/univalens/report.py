"""JSON run reports.

Every report has the same top-level keys; sections that a command does not
produce are ``null``.  Complex numbers are written as ``{"re": x, "im": y}``
and non-finite reals as ``null`` so the output stays strict JSON.
"""

from __future__ import annotations

import json
import math
from importlib import resources

REPORT_KEYS = (
    "tool_version",
    "command",
    "spec",
    "condition1",
    "condition2",
    "chain",
    "extension",
    "evidence",
    "figures",
    "assertions",
    "wall_time_ms",
)


def cnum(z) -> dict:
    z = complex(z)
    return {"re": real(z.real), "im": real(z.imag)}


def real(x):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return x + 0.0  # drop negative zero


def new_report(version: str, command: str, spec: dict) -> dict:
    report = dict.fromkeys(REPORT_KEYS)
    report.update(tool_version=version, command=command, spec=spec, wall_time_ms=0)
    return report


def condition_section(sup) -> dict:
    """Projection of a SupReport."""
    return {
        "sup": real(sup.sup_estimate),
        "bound": real(sup.bound),
        "satisfied": bool(sup.satisfied),
        "strict": bool(sup.strict),
        "margin": real(sup.margin),
        "argmax": cnum(sup.argmax),
        "samples": int(sup.samples),
        "refinement_rounds": int(sup.refinement_rounds),
    }


def chain_section(rep, times) -> dict:
    w = rep.worst
    return {
        "sup_abs_w": real(rep.sup_abs_w),
        "min_re_p": real(rep.min_re_p),
        "k": real(rep.k),
        "passed": bool(rep.passed),
        "samples": int(rep.samples),
        "times": [real(t) for t in times],
        "worst": {
            "z": cnum(w.z),
            "t": real(w.t),
            "L": cnum(w.L),
            "G": cnum(w.G),
            "w": cnum(w.w),
            "p": cnum(w.p),
        },
    }


def evidence_section(ev) -> dict:
    worst = ev.worst
    return {
        "passed": bool(ev.passed),
        "kind": ev.kind,
        "min_abs_derivative": real(ev.min_abs_derivative),
        "argmin_derivative": cnum(ev.argmin_derivative),
        "critical_windings": [
            {"radius": real(r), "winding": w} for r, w in sorted(ev.critical_windings.items())
        ],
        "probes": len(ev.probes),
        "worst_probe": None if worst is None else {
            "radius": real(worst.radius),
            "target": cnum(worst.target),
            "winding": int(worst.winding),
            "min_distance": real(worst.min_distance),
        },
    }


def dumps(report: dict) -> str:
    if tuple(report) != REPORT_KEYS:
        raise ValueError("report keys do not match the published layout")
    return json.dumps(report, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def load_schema() -> dict:
    text = resources.files("univalens").joinpath("schema/run_report.schema.json").read_text("utf-8")
    return json.loads(text)
