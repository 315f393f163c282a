"""Quasiconformal extension of F_beta and numerical univalence evidence.

The extension is ``F(z) = L(z, 0)`` inside the disk and
``F(z) = L(z/|z|, log|z|)`` outside.  Beltrami coefficients are measured
with central differences so they stay independent of the chain formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .criteria import CriterionSpec, GridSpec, check_criterion
from .errors import DegenerateDerivativeError, DomainError, WindingError
from .loewner import ChainParams, chain_value
from .quad import QuadConfig


@dataclass(frozen=True)
class ExtensionMap:
    params: ChainParams

    def __call__(self, z):
        return extend(self, z)


def extend(emap: ExtensionMap, z):
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    inside = r < 1
    out = np.empty(z.shape, dtype=complex)
    if np.any(inside):
        out[inside] = chain_value(emap.params, z[inside], 0.0)
    if np.any(~inside):
        ro = r[~inside]
        out[~inside] = chain_value(emap.params, z[~inside] / ro, np.log(ro))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class BeltramiSample:
    z: complex
    mu: complex
    mu_abs: float
    fd_step: float


def wirtinger(fn, z, step):
    """Central-difference Wirtinger derivatives ``(d/dz F, d/dzbar F)``."""
    z = np.asarray(z, dtype=complex)
    step = np.broadcast_to(np.asarray(step, dtype=float), z.shape)
    stencil = np.stack([z + step, z - step, z + 1j * step, z - 1j * step])
    values = np.asarray(fn(stencil))
    dx = (values[0] - values[1]) / (2 * step)
    dy = (values[2] - values[3]) / (2 * step)
    return (dx - 1j * dy) / 2, (dx + 1j * dy) / 2


def beltrami_field(emap: ExtensionMap, z, step=None):
    z = np.asarray(z, dtype=complex)
    if step is None:
        step = 1e-5 * np.abs(z)
    step = np.broadcast_to(np.asarray(step, dtype=float), z.shape)
    if np.any(step <= 0) or np.any(np.abs(z) <= 1 + 2 * step):
        raise DomainError("beltrami needs step > 0 and |z| > 1 + 2*step")
    dz, dzbar = wirtinger(emap, z, step)
    bad = np.abs(dz) < 1e-12
    if np.any(bad):
        where = complex(z.reshape(-1)[np.argmax(bad.reshape(-1))])
        raise DegenerateDerivativeError("d/dz of the extension vanishes", z=where)
    return dzbar / dz


def beltrami(emap: ExtensionMap, z: complex, step: float | None = None) -> BeltramiSample:
    step = 1e-5 * abs(z) if step is None else step
    mu = complex(beltrami_field(emap, complex(z), step))
    return BeltramiSample(complex(z), mu, abs(mu), float(step))


def estimate_k(emap: ExtensionMap, annulus=(1.001, 3.0), n_radii: int = 24, n_angles: int = 96) -> float:
    """Largest measured |mu| over a polar grid on the annulus."""
    r_in, r_out = annulus
    if not 1 < r_in < r_out:
        raise DomainError("annulus must satisfy 1 < r_in < r_out")
    radii = np.geomspace(r_in, r_out, n_radii)
    angles = np.pi - 2 * np.pi * np.arange(n_angles) / n_angles
    z = np.multiply.outer(radii, np.exp(1j * angles))
    return float(np.max(np.abs(beltrami_field(emap, z))))


@dataclass(frozen=True)
class QcResult:
    first: object
    main: object
    overall: bool
    k: float
    k_estimate: float | None = None
    cross_validated: bool | None = None


def check_qc_criterion(spec: CriterionSpec, f, grid: GridSpec = GridSpec(), cross_validate: bool = True,
                       annulus=(1.001, 5.0), quad: QuadConfig = QuadConfig()) -> QcResult:
    """Both conditions with bounds k(m+1)/2; on a pass, optionally compare with measured |mu|."""
    if spec.k is None:
        raise ValueError("check_qc_criterion needs k in the criterion spec")
    result = check_criterion(spec, f, grid)
    k_est = None
    validated = None
    if result.overall and cross_validate:
        emap = ExtensionMap(ChainParams.from_resolved(f, result.resolved, quad))
        k_est = estimate_k(emap, annulus)
        validated = k_est <= spec.k + 5e-3
    return QcResult(result.first, result.main, result.overall, spec.k, k_est, validated)


# -- univalence evidence -----------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    radius: float
    target: complex
    winding: int
    min_distance: float


@dataclass(frozen=True)
class EvidenceReport:
    """Numerical evidence for univalence; never a certificate."""

    passed: bool
    min_abs_derivative: float
    argmin_derivative: complex
    critical_windings: dict
    probes: list = field(default_factory=list)
    worst: ProbeResult | None = None
    kind: str = "evidence"


def winding_number(curve, target=0.0, guard: float = 1e-9) -> int:
    """Winding of a closed sampled curve around ``target`` (arg increments summed)."""
    rel = np.asarray(curve, dtype=complex) - target
    dist = float(np.min(np.abs(rel)))
    if dist < guard:
        raise WindingError(f"curve passes within {dist:.3g} of the target", z=complex(target))
    increments = np.angle(np.roll(rel, -1) / rel)
    return int(np.rint(np.sum(increments) / (2 * np.pi)))


def univalence_evidence(fn, grid: GridSpec = GridSpec(n_radii=32, n_angles=128), probes: int = 16,
                        radii=(0.5, 0.8, 0.95), samples: int = 4096, fd_step: float = 1e-6) -> EvidenceReport:
    """Critical-point scan plus argument-principle probes for an analytic map on the disk.

    A zero of fn' inside a probe circle shows up as a nonzero winding of fn'
    around 0; a non-injective circle image shows up as a probe winding != 1.
    """
    z = grid.points().reshape(-1)
    deriv = np.abs((np.asarray(fn(z + fd_step)) - np.asarray(fn(z - fd_step))) / (2 * fd_step))
    i = int(np.argmin(deriv))
    min_d, arg_d = float(deriv[i]), complex(z[i])

    theta = 2 * np.pi * np.arange(samples) / samples
    circle = np.exp(1j * theta)
    crit = {}
    results = []
    for r in radii:
        pts = r * circle
        stencil = np.asarray(fn(np.stack([pts, pts * (1 + fd_step / r), pts * (1 - fd_step / r)])))
        image = stencil[0]
        dfn = (stencil[1] - stencil[2]) / (2 * fd_step * circle)
        try:
            crit[float(r)] = winding_number(dfn, 0.0)
        except WindingError:
            # fn' vanishes on the circle itself.
            crit[float(r)] = None
        targets = np.asarray(fn(0.5 * r * np.exp(2j * np.pi * np.arange(probes) / probes)))
        for w in targets.reshape(-1):
            dist = float(np.min(np.abs(image - w)))
            results.append(ProbeResult(float(r), complex(w), winding_number(image, w), dist))

    bad = [p for p in results if p.winding != 1]
    worst = bad[0] if bad else min(results, key=lambda p: p.min_distance)
    no_critical = min_d > 1e-8 and all(v == 0 for v in crit.values())
    return EvidenceReport(bool(no_critical and not bad), min_d, arg_d, crit, results, worst)
