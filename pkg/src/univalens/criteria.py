"""Univalence criteria over the unit disk.

The *first* condition bounds ``|f'/(g - alpha) - c|`` and the *main*
condition bounds the modulus of

    T1 + T2 + T3 - (m - 1)/2

with

    P  = |z|^(beta (m+1))
    T1 = (f'/(g-alpha) - 1) P
    T2 = (1 - P) [2 z^beta f' h/(g-alpha) + z g'/(beta (g-alpha))]
    T3 = z^(beta+1) (1-P)^2 / P * [z^(beta-1) f' h^2/(g-alpha) + (g' h/(g-alpha) - h')/beta]

by ``(m+1)/2`` (scaled by ``k`` for quasiconformal extensions).  Named
variants substitute particular ``g``, ``h`` and parameters; see
:func:`resolve_preset`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .branch import principal_log, principal_pow, real_pow_complex
from .errors import (
    AmbiguousPresetError,
    CriticalPointError,
    DomainError,
    OverflowGuardError,
    PoleError,
)
from .expr import FunctionExpr, class_a_check, parse
from .jets import Jet

POLE_TOL = 1e-14
LOG_OVERFLOW = 700.0
SERIES_RADIUS = 1e-3
SERIES_ORDER = 12


class Variant(str, enum.Enum):
    GENERAL = "general"
    BECKER = "becker"
    NEHARI = "nehari"
    OZAKI_NUNOKAWA = "ozaki_nunokawa"
    GOLUZIN = "goluzin"
    PASCU_334 = "pascu_334"
    COROLLARY_C1 = "corollary_c1"
    COROLLARY_C2 = "corollary_c2"
    COROLLARY_C33 = "corollary_c33"
    COROLLARY_C3STAR = "corollary_c3star"
    COROLLARY_C333 = "corollary_c333"
    COROLLARY_C34 = "corollary_c34"
    COROLLARY_C3 = "corollary_c3"

    @classmethod
    def from_name(cls, name: str) -> "Variant":
        key = name.strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown variant {name!r}") from None


class FirstCenter(str, enum.Enum):
    PROOF_FORM = "proof_form"
    PRINTED_FORM = "printed_form"


# -- functions derived from f ------------------------------------------------


class DerivedFunction:
    """An analytic function built from the jet of ``f``.

    ``build(fj, zj)`` receives the jet of ``f`` and of the identity at the
    same points (both two orders above the requested order) and returns the
    jet of the derived function.  When ``series`` is given, points with
    ``|z| < SERIES_RADIUS`` are evaluated from the Taylor coefficients of
    ``f`` at 0 instead, which sidesteps the removable singularity at 0.
    """

    def __init__(self, name: str, f, build, series=None):
        self.name = name
        self.f = f
        self._build = build
        self._series = series

    def __repr__(self) -> str:
        return f"DerivedFunction({self.name!r})"

    def __str__(self) -> str:
        return self.name

    def _direct(self, z, order: int) -> Jet:
        zj = Jet.variable(z, order + 2)
        return self._build(self.f.jet(z, order + 2), zj).truncate(order)

    def jet(self, z, order: int = 1) -> Jet:
        z = np.asarray(z, dtype=complex)
        if self._series is None:
            return self._direct(z, order)
        near = np.abs(z) < SERIES_RADIUS
        if not np.any(near):
            return self._direct(z, order)
        coeffs = self.f.jet(0.0, SERIES_ORDER).c
        near_jet = self._series(coeffs, Jet.variable(z[near], order))
        out = np.zeros((order + 1,) + z.shape, dtype=complex)
        out[(slice(None), near)] = near_jet.c
        if not np.all(near):
            out[(slice(None), ~near)] = self._direct(z[~near], order).c
        return Jet(out)

    def __call__(self, z):
        value = self.jet(z, 0).value
        return value[()] if np.ndim(value) == 0 else value


def _horner(coeffs, zj: Jet) -> Jet:
    acc = Jet.constant(coeffs[-1], zj.order, zj.shape)
    for c in coeffs[-2::-1]:
        acc = acc * zj + c
    return acc


def fprime(f) -> DerivedFunction:
    return DerivedFunction("f'", f, lambda fj, zj: fj.diff())


def fsecond(f) -> DerivedFunction:
    return DerivedFunction("f''", f, lambda fj, zj: fj.diff().diff())


def half_log_derivative(f) -> DerivedFunction:
    """-f''/(2 f')."""
    return DerivedFunction("-f''/(2f')", f, lambda fj, zj: -0.5 * fj.diff().diff() / fj.diff())


def quotient_squared(f) -> DerivedFunction:
    """(f(z)/z)^2."""
    return DerivedFunction(
        "(f/z)^2",
        f,
        lambda fj, zj: (fj / zj) * (fj / zj),
        series=lambda a, zj: _horner(a[1:], zj) * _horner(a[1:], zj),
    )


def ozaki_h(f) -> DerivedFunction:
    """1/z - f(z)/z^2 = -(f(z) - z)/z^2."""
    return DerivedFunction(
        "1/z - f/z^2",
        f,
        lambda fj, zj: -(fj - zj) / (zj * zj),
        series=lambda a, zj: -_horner(a[2:], zj),
    )


PRESETS = {
    "fprime": fprime,
    "fsecond": fsecond,
    "half_log_derivative": half_log_derivative,
    "quotient_squared": quotient_squared,
    "ozaki_h": ozaki_h,
}


def as_function(value, f):
    """Turn a preset name, expression text or function object into a function."""
    if value is None:
        return None
    if isinstance(value, str):
        key = value.strip().lower().replace("-", "_")
        if key in PRESETS:
            return PRESETS[key](f)
        return parse(value)
    return value


# -- specification -----------------------------------------------------------


@dataclass(frozen=True)
class CriterionSpec:
    m: float = 1.0
    alpha: complex = 0j
    beta: complex = 1 + 0j
    variant: Variant = Variant.GENERAL
    g: object = None
    h: object = None
    first_center: FirstCenter = FirstCenter.PROOF_FORM
    k: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "m", float(self.m))
        if isinstance(self.variant, str):
            object.__setattr__(self, "variant", Variant.from_name(self.variant))
        object.__setattr__(self, "first_center", FirstCenter(self.first_center))
        if not self.m > 0:
            raise DomainError("m must be positive")
        if not self.alpha.real < 0.5:
            raise DomainError("Re(alpha) must be less than 1/2")
        if not self.beta.real > 0:
            raise DomainError("Re(beta) must be positive")
        if self.k is not None:
            object.__setattr__(self, "k", float(self.k))
            if not 0 <= self.k < 1:
                raise DomainError("k must lie in [0, 1)")

    @property
    def bound(self) -> float:
        scale = 1.0 if self.k is None else self.k
        return scale * (self.m + 1) / 2


@dataclass(frozen=True)
class ResolvedCriterion:
    spec: CriterionSpec
    g: object
    h: object


_ZERO = parse("0")


def resolve_preset(spec: CriterionSpec, f) -> ResolvedCriterion:
    """Apply the substitutions of a named variant.

    Returns the resolved ``g`` and ``h`` together with a copy of ``spec``
    whose ``alpha``, ``beta`` and ``m`` carry the values the variant fixes.
    """
    v = spec.variant
    user_g = as_function(spec.g, f)
    user_h = as_function(spec.h, f)
    fixed: dict = {}
    if v is Variant.GENERAL:
        if user_g is None:
            raise ValueError("the general variant needs an explicit g")
        g, h = user_g, user_h if user_h is not None else _ZERO
    elif v is Variant.BECKER:
        g, h = fprime(f), _ZERO
        fixed = dict(alpha=0, beta=1, m=1)
    elif v is Variant.NEHARI:
        g, h = fprime(f), half_log_derivative(f)
        fixed = dict(alpha=0, beta=1, m=1)
    elif v is Variant.OZAKI_NUNOKAWA:
        g, h = quotient_squared(f), ozaki_h(f)
        fixed = dict(alpha=0, beta=1, m=1)
    elif v is Variant.GOLUZIN:
        if user_h is None:
            raise AmbiguousPresetError(
                "the goluzin substitution for h is ambiguous in its source; pass h explicitly"
            )
        g, h = fprime(f), user_h
        fixed = dict(alpha=0, beta=1, m=1)
    elif v is Variant.PASCU_334:
        g, h = fprime(f), _ZERO
        fixed = dict(alpha=0)
    elif v is Variant.COROLLARY_C1:
        if user_h is None:
            raise ValueError("corollary_c1 needs an explicit h")
        g, h = fprime(f), user_h
    elif v is Variant.COROLLARY_C2:
        g, h = fprime(f), fsecond(f)
    elif v is Variant.COROLLARY_C33:
        g, h = fprime(f), _ZERO
    elif v is Variant.COROLLARY_C3STAR:
        g, h = fprime(f), half_log_derivative(f)
        fixed = dict(alpha=0, beta=1)
    elif v is Variant.COROLLARY_C333:
        g, h = fprime(f), _ZERO
        fixed = dict(alpha=0)
    elif v is Variant.COROLLARY_C34:
        g, h = quotient_squared(f), _ZERO
        fixed = dict(alpha=0)
    elif v is Variant.COROLLARY_C3:
        g, h = fprime(f), fsecond(f)
        fixed = dict(alpha=0, beta=1)
    else:  # pragma: no cover
        raise ValueError(f"unhandled variant {v}")
    return ResolvedCriterion(replace(spec, **fixed), g, h)


# -- pointwise evaluation ----------------------------------------------------


@dataclass(frozen=True)
class PointEval:
    z: complex
    value: complex
    modulus: float
    bound: float
    satisfied: bool
    strict: bool


def _pole_check(denominator, z) -> None:
    bad = np.abs(denominator) < POLE_TOL
    if np.any(bad):
        where = complex(np.asarray(z).reshape(-1)[np.argmax(np.asarray(bad).reshape(-1))])
        raise PoleError("g(z) - alpha vanishes", z=where)


def first_strict(spec: CriterionSpec) -> bool:
    # The closed disk U(k) only needs a non-strict bound.
    return spec.k is None


def first_condition_values(spec: CriterionSpec, f, g, z):
    z = np.asarray(z, dtype=complex)
    fp = f.jet(z, 1).derivative(1)
    d = g.jet(z, 0).value - spec.alpha
    _pole_check(d, z)
    if spec.first_center is FirstCenter.PROOF_FORM:
        center = (spec.m + 1) / 2
    else:
        center = (spec.m - 1) / 2
    return fp / d - center


def _prefactor_log(spec: CriterionSpec, z, r):
    """log of z^(beta+1) / |z|^(beta(m+1)), assembled before exponentiating."""
    beta = spec.beta
    return (beta + 1) * principal_log(z) - beta * (spec.m + 1) * np.log(r)


def main_condition_values(spec: CriterionSpec, f, g, h, z):
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    if np.any(r == 0):
        raise DomainError("the main condition is evaluated only for z != 0")
    if spec.variant is Variant.PASCU_334:
        return _pascu_values(spec, f, z, r)
    beta, alpha, m = spec.beta, spec.alpha, spec.m
    fp = f.jet(z, 1).derivative(1)
    gj = g.jet(z, 1)
    hj = h.jet(z, 1)
    gv, gp = gj.value, gj.derivative(1)
    hv, hp = hj.value, hj.derivative(1)
    d = gv - alpha
    _pole_check(d, z)
    P = real_pow_complex(r, beta * (m + 1))
    zb = principal_pow(z, beta)
    t1 = (fp / d - 1) * P
    t2 = (1 - P) * (2 * zb * fp * hv / d + z * gp / (beta * d))
    bracket = principal_pow(z, beta - 1) * fp * hv**2 / d + (gp * hv / d - hp) / beta
    t3 = np.zeros_like(t1)
    active = bracket != 0
    if np.any(active):
        logmag = _prefactor_log(spec, z[active], r[active]).real + np.log(np.abs(bracket[active]))
        if np.any(logmag > LOG_OVERFLOW):
            where = complex(z[active][np.argmax(logmag)])
            raise OverflowGuardError("main-condition term overflows", z=where)
        pref = np.exp(_prefactor_log(spec, z[active], r[active]))
        t3[active] = pref * (1 - P[active]) ** 2 * bracket[active]
    return t1 + t2 + t3 - (m - 1) / 2


def _pascu_values(spec: CriterionSpec, f, z, r):
    fj = f.jet(z, 2)
    fp, fpp = fj.derivative(1), fj.derivative(2)
    if np.any(np.abs(fp) < POLE_TOL):
        where = complex(z.reshape(-1)[np.argmin(np.abs(fp).reshape(-1))])
        raise CriticalPointError("f' vanishes", z=where)
    rb = spec.beta.real
    return (1 - r ** ((spec.m + 1) * rb)) / rb * (z * fpp / fp)


def main_bound(spec: CriterionSpec) -> float:
    if spec.variant is Variant.PASCU_334:
        return 1.0 if spec.k is None else spec.k
    return spec.bound


def _point(z, value, bound, strict) -> PointEval:
    modulus = float(abs(value))
    ok = modulus < bound if strict else modulus <= bound
    return PointEval(complex(z), complex(value), modulus, bound, bool(ok), strict)


def eval_first_condition(spec: CriterionSpec, f, g, z) -> PointEval:
    value = first_condition_values(spec, f, g, complex(z))
    return _point(z, value, spec.bound, first_strict(spec))


def eval_main_condition(spec: CriterionSpec, f, g, h, z) -> PointEval:
    value = main_condition_values(spec, f, g, h, complex(z))
    return _point(z, value, main_bound(spec), False)


def schwarzian(f, z):
    """{f; z} = f'''/f' - (3/2) (f''/f')^2 from one order-3 jet."""
    z = np.asarray(z, dtype=complex)
    jet = f.jet(z, 3)
    d1, d2, d3 = jet.derivative(1), jet.derivative(2), jet.derivative(3)
    if np.any(np.abs(d1) < POLE_TOL):
        where = complex(z.reshape(-1)[np.argmin(np.abs(d1).reshape(-1))])
        raise CriticalPointError("f' vanishes", z=where)
    out = d3 / d1 - 1.5 * (d2 / d1) ** 2
    return out[()] if out.ndim == 0 else out


# -- supremum search ---------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    n_radii: int = 64
    n_angles: int = 256
    r_min: float = 1e-4
    r_max: float = 0.9995
    radial_spacing: str = "log_both_ends"

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max < 1:
            raise ValueError("grid radii must satisfy 0 < r_min < r_max < 1")
        if self.n_radii < 4 or self.n_angles < 4:
            raise ValueError("grid needs at least 4 radii and 4 angles")
        if self.radial_spacing != "log_both_ends":
            raise ValueError("only log_both_ends radial spacing is supported")

    def logit_radii(self) -> np.ndarray:
        return np.linspace(_logit(self.r_min), _logit(self.r_max), self.n_radii)

    def radii(self) -> np.ndarray:
        """Radii uniform in logit(r): geometric near 0, geometric in 1 - r near 1."""
        return _expit(self.logit_radii())

    def angles(self) -> np.ndarray:
        """Angles in (-pi, pi], starting at pi."""
        return math.pi - 2 * math.pi * np.arange(self.n_angles) / self.n_angles

    def points(self) -> np.ndarray:
        return np.multiply.outer(self.radii(), np.exp(1j * self.angles()))


def _logit(r):
    return np.log(r) - np.log1p(-r)


def _expit(x):
    return 1.0 / (1.0 + np.exp(-x))


# Refinement may walk past the grid toward the open boundary of the disk.
LOGIT_MIN = float(_logit(1e-12))
LOGIT_MAX = float(_logit(1 - 1e-12))


@dataclass(frozen=True)
class SupReport:
    sup_estimate: float
    argmax: complex
    samples: int
    refinement_rounds: int
    satisfied: bool
    margin: float
    bound: float
    strict: bool


class Which(str, enum.Enum):
    FIRST = "first"
    MAIN = "main"


def _wrap_angle(theta):
    """Map angles into (-pi, pi]."""
    return math.pi - np.mod(math.pi - theta, 2 * math.pi)


def maximize_modulus(evaluate, grid: GridSpec, n_candidates: int = 5,
                     min_rounds: int = 3, max_rounds: int = 80, step_tol: float = 1e-10):
    """Grid scan followed by compass-search refinement in (logit r, theta).

    ``evaluate`` maps a complex array to the moduli to maximize.  Returns
    ``(sup, argmax, samples, rounds)``; ties go to the smallest ``(r, theta)``.
    """
    xs = grid.logit_radii()
    thetas = grid.angles()
    X, T = np.meshgrid(xs, thetas, indexing="ij")
    X, T = X.ravel(), T.ravel()
    mod = np.asarray(evaluate(_expit(X) * np.exp(1j * T)), dtype=float)
    samples = mod.size
    order = np.lexsort((T, X, -mod))
    best_idx = order[:n_candidates]
    cx, ct, cm = X[best_idx].copy(), T[best_idx].copy(), mod[best_idx].copy()
    sx = np.full(cx.shape, 0.5 * (xs[1] - xs[0]))
    st = np.full(cx.shape, 0.5 * (2 * math.pi / grid.n_angles))
    offsets = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1) if (i, j) != (0, 0)], dtype=float)

    rounds = 0
    while rounds < max_rounds:
        if rounds >= min_rounds and np.all(sx < step_tol) and np.all(st < step_tol):
            break
        nx = np.clip(cx[:, None] + offsets[None, :, 0] * sx[:, None], LOGIT_MIN, LOGIT_MAX)
        nt = _wrap_angle(ct[:, None] + offsets[None, :, 1] * st[:, None])
        nm = np.asarray(evaluate(_expit(nx) * np.exp(1j * nt)), dtype=float)
        samples += nm.size
        rounds += 1
        for c in range(cx.size):
            k = int(np.argmax(nm[c]))
            if nm[c, k] > cm[c]:
                cx[c], ct[c], cm[c] = nx[c, k], nt[c, k], nm[c, k]
                sx[c] *= 2.0
                st[c] *= 2.0
                st[c] = min(st[c], math.pi / 4)
            else:
                sx[c] *= 0.5
                st[c] *= 0.5

    allx = np.concatenate([X, cx])
    allt = np.concatenate([T, ct])
    allm = np.concatenate([mod, cm])
    top = np.lexsort((allt, allx, -allm))[0]
    argmax = complex(_expit(allx[top]) * np.exp(1j * allt[top]))
    return float(allm[top]), argmax, samples, rounds


def sup_search(spec: CriterionSpec, f, g, h, grid: GridSpec = GridSpec(), which: Which = Which.MAIN) -> SupReport:
    which = Which(which)
    if which is Which.FIRST:
        bound, strict = spec.bound, first_strict(spec)

        def evaluate(z):
            return np.abs(first_condition_values(spec, f, g, z))
    else:
        bound, strict = main_bound(spec), False

        def evaluate(z):
            return np.abs(main_condition_values(spec, f, g, h, z))

    sup, argmax, samples, rounds = maximize_modulus(evaluate, grid)
    ok = sup < bound if strict else sup <= bound
    return SupReport(sup, argmax, samples, rounds, bool(ok), bound - sup, bound, strict)


@dataclass(frozen=True)
class CriterionResult:
    first: SupReport
    main: SupReport
    overall: bool
    resolved: ResolvedCriterion


def check_criterion(spec: CriterionSpec, f, grid: GridSpec = GridSpec()) -> CriterionResult:
    report = class_a_check(f)
    if not report.is_class_a:
        raise DomainError(
            f"f is not normalized: f(0)={report.f_at_0}, f'(0)={report.fprime_at_0}"
        )
    resolved = resolve_preset(spec, f)
    rs = resolved.spec
    first = sup_search(rs, f, resolved.g, resolved.h, grid, Which.FIRST)
    main = sup_search(rs, f, resolved.g, resolved.h, grid, Which.MAIN)
    return CriterionResult(first, main, first.satisfied and main.satisfied, resolved)
