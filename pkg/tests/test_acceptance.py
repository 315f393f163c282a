"""The twelve acceptance criteria, each checked at its stated tolerance.

Run with pytest (a summary line per criterion is printed at the end of the
session) or directly with ``python3 tests/test_acceptance.py``.
"""

import math
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from univalens.cli import main as cli_main
from univalens.criteria import (
    CriterionSpec,
    GridSpec,
    Variant,
    check_criterion,
    main_condition_values,
    resolve_preset,
    schwarzian,
    sup_search,
)
from univalens.expr import eval_jet, parse
from univalens.loewner import ChainParams, transfer_G
from univalens.qcext import ExtensionMap, check_qc_criterion, estimate_k, univalence_evidence
from univalens.quad import integral_operator

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

EXAMPLE1 = parse("z/(1 - z^2/2)")
C34 = CriterionSpec(m=1, beta=2, variant=Variant.COROLLARY_C34)


def random_disk(n, seed, r_max=0.99):
    rng = np.random.default_rng(seed)
    r = r_max * np.sqrt(rng.uniform(1e-4, 1, n))
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def criterion_1():
    r = resolve_preset(C34, EXAMPLE1)
    start = time.perf_counter()
    rep = sup_search(r.spec, EXAMPLE1, r.g, r.h, GridSpec(), "first")
    elapsed = time.perf_counter() - start
    ok = abs(rep.sup_estimate - 0.5) <= 1e-6 and rep.satisfied and rep.bound == 1 and elapsed < 5
    return ok, f"sup = {rep.sup_estimate:.12f}, bound {rep.bound}, {elapsed:.2f} s"


def criterion_2():
    r = resolve_preset(C34, EXAMPLE1)
    start = time.perf_counter()
    rep = sup_search(r.spec, EXAMPLE1, r.g, r.h, GridSpec(), "main")
    elapsed = time.perf_counter() - start
    ok = rep.sup_estimate <= 24 / 27 + 1e-6 and rep.satisfied and elapsed < 10
    return ok, f"sup = {rep.sup_estimate:.10f} <= {24 / 27:.10f}, {elapsed:.2f} s"


def criterion_3():
    z = np.multiply.outer(np.linspace(0.05, 0.95, 10), np.exp(1j * np.linspace(-np.pi, np.pi, 10, endpoint=False)))
    identity = parse("z")
    worst = max(float(np.max(np.abs(integral_operator(identity, b, z) - z))) for b in (1, 2, 0.5, 1 + 1j))
    beta_one = float(np.max(np.abs(integral_operator(EXAMPLE1, 1, z) - EXAMPLE1(z))))
    return worst < 1e-10 and beta_one < 1e-10, f"max |F_b(z) - z| = {worst:.2e}, max |F_1 - f| = {beta_one:.2e}"


def criterion_4():
    oracle = math.sqrt(2 * (0.25 / 0.875 + math.log(0.875)))
    value = integral_operator(EXAMPLE1, 2, 0.5)
    err = abs(value - oracle)
    return err < 1e-8, f"F_2(0.5) = {value.real:.12f}, oracle {oracle:.12f}, error {err:.1e}"


def criterion_5():
    rng = np.random.default_rng(5)
    g, h = parse("1 + z/4"), parse("0.3*z")
    worst = 0.0
    for _ in range(1000):
        theta, t = rng.uniform(-np.pi, np.pi), rng.uniform(0, 2)
        alpha = complex(rng.uniform(-0.5, 0.4), rng.uniform(-0.3, 0.3))
        beta = complex(rng.uniform(0.5, 2), rng.uniform(-1, 1))
        m = rng.uniform(0.5, 3)
        params = ChainParams(EXAMPLE1, g, h, alpha, beta, m)
        u = np.exp(1j * theta)
        G = transfer_G(params, u, t)
        spec = CriterionSpec(m=m, alpha=alpha, beta=beta, g="1")
        static = main_condition_values(spec, EXAMPLE1, g, h, np.exp(-t) * u)
        worst = max(worst, abs(abs(G - (m - 1) / 2) - abs(static)))
    return worst < 1e-10, f"max discrepancy {worst:.2e} over 1000 draws"


def criterion_6():
    z = random_disk(1000, 6)
    a = np.abs(z)
    j = EXAMPLE1.jet(z, 3)
    f0, d1, d2 = j.derivative(0), j.derivative(1), j.derivative(2)
    errs = {}

    r = resolve_preset(CriterionSpec(variant=Variant.BECKER), EXAMPLE1)
    errs["becker"] = np.abs(main_condition_values(r.spec, EXAMPLE1, r.g, r.h, z) - (1 - a**2) * z * d2 / d1)

    m = 1.7
    fz = parse("z*exp(z)")
    r = resolve_preset(CriterionSpec(m=m, variant=Variant.COROLLARY_C3STAR), fz)
    printed = z**2 * (1 - a ** (m + 1)) ** 2 / a ** (m + 1) * 0.5 * schwarzian(fz, z) - (m - 1) / 2
    errs["c3star"] = np.abs(main_condition_values(r.spec, fz, r.g, r.h, z) - printed) / np.maximum(1, np.abs(printed))

    m, beta = 1.5, 1.5 + 0.5j
    r = resolve_preset(CriterionSpec(m=m, beta=beta, variant=Variant.COROLLARY_C34), EXAMPLE1)
    P = np.exp(beta * (m + 1) * np.log(a))
    printed = (z**2 * d1 / f0**2 - 1) * P + 2 / beta * (1 - P) * (z * d1 / f0 - 1) - (m - 1) / 2
    errs["c34"] = np.abs(main_condition_values(r.spec, EXAMPLE1, r.g, r.h, z) - printed)

    worst = {k: float(np.max(v)) for k, v in errs.items()}
    return all(v < 1e-12 for v in worst.values()), ", ".join(f"{k} {v:.1e}" for k, v in worst.items())


def criterion_7():
    details, ok = [], True
    for m in (1.5, 2, 3):
        start = time.perf_counter()
        kstar = (m - 1) / (m + 1)
        emap = ExtensionMap(ChainParams(parse("z"), parse("1"), parse("0"), 0, 1, m))
        k_est = estimate_k(emap, (1.001, 3.0))
        passes = [check_qc_criterion(CriterionSpec(m=m, g="1", h="0", k=k), parse("z")).overall
                  for k in (kstar, min(kstar + 0.1, 0.99), kstar - 0.05)]
        elapsed = time.perf_counter() - start
        good = abs(k_est - kstar) <= 1e-4 and passes == [True, True, False] and elapsed < 10
        ok &= good
        details.append(f"m={m}: k_est {k_est:.8f} vs {kstar:.8f}, {elapsed:.2f} s")
    return ok, "; ".join(details)


def criterion_8():
    koebe = check_criterion(CriterionSpec(variant=Variant.BECKER), parse("z/(1 - z)^2"))
    bad = univalence_evidence(parse("z + z^2"))
    good = univalence_evidence(lambda z: integral_operator(EXAMPLE1, 2, z))
    ok = (not koebe.overall and koebe.main.sup_estimate > 1 and not bad.passed
          and abs(bad.argmin_derivative + 0.5) < 0.05 and good.passed)
    return ok, (f"Koebe becker sup {koebe.main.sup_estimate:.4f}; z+z^2 evidence {bad.passed} "
                f"(min |f'| near {bad.argmin_derivative:.3f}); F_2 evidence {good.passed}")


def criterion_9():
    rng = np.random.default_rng(9)
    z = 0.8 * np.sqrt(rng.uniform(0, 1, 200)) * np.exp(1j * rng.uniform(-np.pi, np.pi, 200))
    h = 1e-5
    worst = 0.0
    for source in ("z/(1 - z^2/2)", "-log(1 - z)", "z*exp(z)", "z/(1 - z)^2"):
        fn = parse(source)
        j, jp, jm = eval_jet(fn, z), eval_jet(fn, z + h), eval_jet(fn, z - h)
        lower = [(jp.d0, jm.d0), (jp.d1, jm.d1), (jp.d2, jm.d2)]
        for exact, (up, down) in zip((j.d1, j.d2, j.d3), lower):
            fd = (up - down) / (2 * h)
            worst = max(worst, float(np.max(np.abs(exact - fd) / np.maximum(1, np.abs(exact)))))
    return worst < 1e-6, f"max relative error {worst:.2e}"


def criterion_10():
    z = random_disk(200, 10, 0.9)
    mobius = float(np.max(np.abs(schwarzian(parse("z/(1 - z)"), z))))
    expo = float(np.max(np.abs(schwarzian(parse("exp(z) - 1"), z) + 0.5)))
    return mobius < 1e-10 and expo < 1e-10, f"Mobius {mobius:.1e}, exp(z)-1 deviation from -1/2 {expo:.1e}"


def criterion_11():
    rng = np.random.default_rng(11)
    n = 10_000
    x = rng.uniform(0, 1, n)
    x[x == 0] = 0.5
    beta = rng.uniform(0, 3, n) + 1j * rng.uniform(-10, 10, n)
    beta.real[beta.real == 0] = 1.5
    m = rng.uniform(0, 4, n)
    m[m == 0] = 2.0
    lhs = np.abs(1 - np.exp((m + 1) * beta * np.log(x))) / np.abs(beta)
    rhs = (1 - x ** ((m + 1) * beta.real)) / beta.real
    excess = float(np.max((lhs - rhs) / rhs))
    return excess <= 1e-12, f"largest relative excess {excess:.1e} over {n} draws"


def criterion_12():
    with tempfile.TemporaryDirectory() as tmp:
        dirs = [Path(tmp) / "a", Path(tmp) / "b"]
        codes = [cli_main(["reproduce", "example1", "--outdir", str(d)]) for d in dirs]
        names = sorted(p.name for p in dirs[0].iterdir())
        same = all((dirs[0] / n).read_bytes() == (dirs[1] / n).read_bytes() for n in names)
    return codes == [0, 0] and same and len(names) == 3, f"exit codes {codes}, identical files: {same} ({', '.join(names)})"


CRITERIA = [globals()[f"criterion_{i}"] for i in range(1, 13)]


@pytest.mark.parametrize("index", range(1, 13))
def test_acceptance(index):
    ok, detail = CRITERIA[index - 1]()
    line = f"criterion {index}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, detail


if __name__ == "__main__":
    for i, check in enumerate(CRITERIA, 1):
        ok, detail = check()
        print(f"criterion {i}: {'PASS' if ok else 'FAIL'} ({detail})")
