import numpy as np
import pytest

from univalens.criteria import CriterionSpec, Variant, resolve_preset
from univalens.errors import DomainError, WindingError
from univalens.expr import parse
from univalens.loewner import ChainParams
from univalens.qcext import (
    ExtensionMap,
    beltrami,
    beltrami_field,
    check_qc_criterion,
    estimate_k,
    univalence_evidence,
    winding_number,
)
from univalens.quad import integral_operator

EXAMPLE1 = parse("z/(1 - z^2/2)")
ONE, ZERO = parse("1"), parse("0")


def trivial(m):
    return ExtensionMap(ChainParams(parse("z"), ONE, ZERO, 0, 1, m))


def example1_map():
    r = resolve_preset(CriterionSpec(m=1, beta=2, variant=Variant.COROLLARY_C34), EXAMPLE1)
    return ExtensionMap(ChainParams.from_resolved(EXAMPLE1, r))


def test_extension_inside_is_f_beta():
    z = np.array([0.1, 0.5j, -0.9 + 0.1j])
    np.testing.assert_allclose(example1_map()(z), integral_operator(EXAMPLE1, 2, z), atol=1e-12)


def test_continuity_across_the_circle():
    rng = np.random.default_rng(7)
    u = np.exp(1j * rng.uniform(-np.pi, np.pi, 500))
    emap = example1_map()
    jump = np.abs(emap((1 - 1e-7) * u) - emap((1 + 1e-7) * u))
    assert np.max(jump) < 1e-5


@pytest.mark.parametrize("m", [1, 1.5, 2, 3])
def test_trivial_family_beltrami_coefficient(m):
    rng = np.random.default_rng(3)
    z = rng.uniform(1.01, 4, 200) * np.exp(1j * rng.uniform(-np.pi, np.pi, 200))
    mu = beltrami_field(trivial(m), z)
    expected = (m - 1) / (m + 1) * z**2 / np.abs(z) ** 2
    assert np.max(np.abs(mu - expected)) < 1e-4


def test_fd_step_convergence():
    emap = example1_map()
    z = 1.3 * np.exp(0.7j)
    steps = [1e-2, 5e-3, 2.5e-3, 1.25e-3]
    mus = [beltrami(emap, z, s).mu_abs for s in steps]
    changes = np.abs(np.diff(mus))
    assert np.all(changes[1:] < 4 * changes[:-1])


def test_beltrami_domain():
    with pytest.raises(DomainError):
        beltrami(trivial(2), 0.5)


@pytest.mark.parametrize("m", [1.5, 2, 3])
def test_estimate_k_trivial_family(m):
    assert abs(estimate_k(trivial(m)) - (m - 1) / (m + 1)) < 1e-4


@pytest.mark.parametrize("f, spec", [
    ("z", CriterionSpec(m=2, g="1", k=0.4)),
    ("z", CriterionSpec(m=1.5, g="1", k=0.25)),
    ("z/(1 - z^2/2)", CriterionSpec(m=1, beta=2, variant=Variant.COROLLARY_C34, k=0.8)),
    ("z + z^2/8", CriterionSpec(m=1, variant=Variant.COROLLARY_C333, k=0.6)),
])
def test_qc_pass_implies_measured_bound(f, spec):
    res = check_qc_criterion(spec, parse(f), annulus=(1.001, 5.0))
    assert res.overall
    assert res.k_estimate <= spec.k + 5e-3
    assert res.cross_validated


def test_qc_fails_below_threshold():
    res = check_qc_criterion(CriterionSpec(m=2, g="1", k=1 / 3 - 0.05), parse("z"))
    assert not res.overall and res.k_estimate is None


def test_winding_number():
    circle = np.exp(2j * np.pi * np.arange(256) / 256)
    assert winding_number(circle) == 1
    assert winding_number(circle**2) == 2
    assert winding_number(circle, 3.0) == 0
    with pytest.raises(WindingError):
        winding_number(circle, 1.0)


def test_evidence_negative_control():
    ev = univalence_evidence(parse("z + z^2"))
    assert not ev.passed
    assert ev.min_abs_derivative < 0.05
    assert abs(ev.argmin_derivative + 0.5) < 0.05
    assert ev.kind == "evidence"


def test_evidence_positive_controls():
    assert univalence_evidence(parse("z")).passed
    assert univalence_evidence(lambda z: integral_operator(EXAMPLE1, 2, z)).passed
