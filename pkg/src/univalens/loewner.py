"""The Loewner chain attached to F_beta and its transfer functions.

    L(z, t) = [phi1 + E z^beta (g(zeta) - alpha) / (1 + E z^beta h(zeta))]^(1/beta)

with ``zeta = e^-t z``, ``E = e^(beta m t) - e^(-beta t)`` and
``phi1 = beta * int_0^zeta u^(beta-1) f'(u) du``.  Writing ``phi1 = z^beta phi2``
gives ``L = z * phi4^(1/beta)``; the 1/beta power is the branch equal to
``a1(t)`` at ``z = 0``.

``G``, ``w`` and ``p`` are closed-form expressions in f, g, h at ``zeta``; no
numerical differentiation of ``L`` is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .branch import principal_log, principal_pow
from .errors import DomainError, PoleError, SingularityError, VanishingDenominatorError
from .quad import QuadConfig, operator_bracket

DENOM_TOL = 1e-12
POLE_TOL = 1e-14
DEFAULT_TIMES = tuple(np.round(np.arange(0, 61) * 0.05, 10)) + (4.0, 6.0, 10.0)


@dataclass(frozen=True)
class ChainParams:
    f: object
    g: object
    h: object
    alpha: complex = 0j
    beta: complex = 1 + 0j
    m: float = 1.0
    quad: QuadConfig = QuadConfig()

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "m", float(self.m))
        if not self.alpha.real < 0.5:
            raise DomainError("Re(alpha) must be less than 1/2")
        if not self.beta.real > 0:
            raise DomainError("Re(beta) must be positive")
        if not self.m > 0:
            raise DomainError("m must be positive")

    @classmethod
    def from_resolved(cls, f, resolved, quad: QuadConfig = QuadConfig()) -> "ChainParams":
        s = resolved.spec
        return cls(f, resolved.g, resolved.h, s.alpha, s.beta, s.m, quad)


@dataclass(frozen=True)
class ChainSample:
    z: complex
    t: float
    L: complex
    G: complex
    w: complex
    p: complex


def _log_phi4_origin(params: ChainParams, t, g0=1.0):
    """log of phi4(0, t) = (g0 - alpha) e^(beta m t) + (1 - g0 + alpha) e^(-beta t).

    The factor e^(beta m t) is pulled out so the logarithm stays continuous
    in t even when beta is complex.
    """
    b, m, a = params.beta, params.m, params.alpha
    t = np.asarray(t, dtype=float)
    inner = (g0 - a) + (1 - g0 + a) * np.exp(-b * (m + 1) * t)
    return b * m * t + principal_log(inner)


def a1(params: ChainParams, t):
    """Leading coefficient [(1-alpha) e^(beta m t) + alpha e^(-beta t)]^(1/beta)."""
    if np.any(np.asarray(t) < 0):
        raise DomainError("t must be non-negative")
    out = np.exp(_log_phi4_origin(params, t) / params.beta)
    return out[()] if np.ndim(out) == 0 else out


def _value(fn, z):
    return fn.jet(z, 0).value


def chain_value(params: ChainParams, z, t):
    """L(z, t) for broadcastable arrays ``z`` (|z| <= 1) and ``t`` (>= 0)."""
    z, t = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(t, dtype=float))
    if np.any(np.abs(z) > 1 + 1e-14) or np.any(t < 0):
        raise DomainError("chain_value requires |z| <= 1 and t >= 0")
    b, m, a = params.beta, params.m, params.alpha
    zeta = np.exp(-t) * z
    bracket, _ = operator_bracket(params.f, b, zeta, params.quad)
    phi2 = np.exp(-b * t) * bracket
    E = np.exp(b * m * t) - np.exp(-b * t)
    zb = principal_pow(z, b)
    phi3 = 1 + E * zb * _value(params.h, zeta)
    _guard(phi3, z, t, "phi3 = 1 + E z^beta h(e^-t z) vanishes")
    phi4 = phi2 + E * (_value(params.g, zeta) - a) / phi3
    _guard(phi4, z, t, "phi4 vanishes")
    g0 = complex(_value(params.g, 0.0))
    log_origin = _log_phi4_origin(params, t, g0)
    ratio = phi4 / np.exp(log_origin)
    out = z * np.exp(log_origin / b) * principal_pow(ratio, 1 / b)
    return out[()] if out.ndim == 0 else out


def _guard(values, z, t, message):
    bad = np.abs(values) < DENOM_TOL
    if np.any(bad):
        i = int(np.argmax(bad.reshape(-1)))
        where = complex(z.reshape(-1)[i])
        raise VanishingDenominatorError(f"{message} (t={float(t.reshape(-1)[i])})", z=where)


def transfer_G(params: ChainParams, z, t):
    """G(z, t): the closed form for which w = 2G/(m+1) - (m-1)/(m+1)."""
    z, t = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(t, dtype=float))
    b, m, a = params.beta, params.m, params.alpha
    zeta = np.exp(-t) * z
    fp = params.f.jet(zeta, 1).derivative(1)
    gj, hj = params.g.jet(zeta, 1), params.h.jet(zeta, 1)
    gv, gp = gj.value, gj.derivative(1)
    hv, hp = hj.value, hj.derivative(1)
    d = gv - a
    bad = np.abs(d) < POLE_TOL
    if np.any(bad):
        raise PoleError("g(e^-t z) - alpha vanishes", z=complex(z.reshape(-1)[np.argmax(bad.reshape(-1))]))
    q = np.exp(-b * (m + 1) * t)
    ezb = np.exp(-b * t) * principal_pow(z, b)
    term1 = q * (fp / d - 1)
    term2 = (1 - q) * (2 * ezb * fp * hv / d + zeta / b * gp / d)
    term3 = ezb * (1 - q) ** 2 / q * (ezb * fp * hv**2 / d + zeta / b * (hv * gp / d - hp))
    out = term1 + term2 + term3
    return out[()] if out.ndim == 0 else out


def transfer_w_p(params: ChainParams, z, t):
    G = np.asarray(transfer_G(params, z, t))
    m = params.m
    w = 2 * G / (m + 1) - (m - 1) / (m + 1)
    near = np.abs(1 - w) < POLE_TOL
    if np.any(near):
        zz = np.broadcast_to(np.asarray(z, dtype=complex), w.shape)
        raise SingularityError("w = 1, p is singular", z=complex(zz.reshape(-1)[np.argmax(near.reshape(-1))]))
    p = (1 + w) / (1 - w)
    if w.ndim == 0:
        return w[()], p[()]
    return w, p


@dataclass(frozen=True)
class ChainReport:
    sup_abs_w: float
    min_re_p: float
    worst: ChainSample
    samples: int
    k: float | None
    passed: bool


def verify_chain(params: ChainParams, zs, ts=DEFAULT_TIMES, k: float | None = None) -> ChainReport:
    """Check |w| < 1 (and |w| <= k) over all pairs of ``zs`` and ``ts``."""
    zs = np.asarray(zs, dtype=complex).reshape(-1)
    ts = np.asarray(ts, dtype=float).reshape(-1)
    if np.any(np.abs(zs) >= 1) or np.any(ts < 0):
        raise DomainError("verify_chain requires |z| < 1 and t >= 0")
    Z, T = np.meshgrid(zs, ts, indexing="ij")
    w, p = transfer_w_p(params, Z, T)
    aw = np.abs(w).reshape(-1)
    i = int(np.argmax(aw))
    zi, ti = complex(Z.reshape(-1)[i]), float(T.reshape(-1)[i])
    G = complex(transfer_G(params, zi, ti))
    worst = ChainSample(zi, ti, complex(chain_value(params, zi, ti)), G, complex(w.reshape(-1)[i]), complex(p.reshape(-1)[i]))
    sup_w = float(aw[i])
    passed = sup_w < 1 and (k is None or sup_w <= k)
    return ChainReport(sup_w, float(np.min(p.real)), worst, int(aw.size), k, bool(passed))
