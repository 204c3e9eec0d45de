import math

import mpmath
import numpy as np
import pytest

from normlab.analytic import Disk
from normlab.constants import (C_BRACKET, gamma_quarter, hempel_lai_A, landau_check,
                               max_feasible_C, poisson_jensen_check, spherical_landau_check,
                               strip_map, strip_map_deriv_at_center, theorem4_feasible,
                               theorem4_lower_bound, theorem4_witness_check)
from normlab.dsl import parse_fn
from normlab.errors import BracketInvalid, HypothesisFailed, OmissionFailed
from normlab.report import FAIL, PASS
from normlab.roots import Root, RootList


def test_A_digits():
    A = hempel_lai_A()
    assert str(A.digits(8))[:8] == "4.376879"
    assert abs(float(A) / 4.3768796 - 1) <= 5e-7
    assert A.error < mpmath.mpf("1e-40")


def test_A_identities():
    with mpmath.workdps(60):
        g = gamma_quarter(60)
        assert abs(g * mpmath.gamma(mpmath.mpf(3) / 4) - mpmath.pi * mpmath.sqrt(2)) < mpmath.mpf("1e-55")
        assert abs(4 * mpmath.pi ** 2 * hempel_lai_A(60).value - g ** 4) < mpmath.mpf("1e-50")
    assert float(gamma_quarter()) == pytest.approx(3.6256099082219083, rel=1e-15)


def test_landau_examples():
    rep = landau_check(parse_fn("exp(z + 3)", domain=Disk(0, 2)), 0, 1)
    A = float(hempel_lai_A())
    assert rep.verdict == PASS and rep.margins["ratio"] == pytest.approx(1 / (3 + A), rel=1e-12)
    assert landau_check(parse_fn("5"), 0, 1).margins["ratio"] == 0
    with pytest.raises(OmissionFailed):
        landau_check(parse_fn("exp(2*i*z)"), 0, 1)


def test_spherical_landau_examples():
    assert spherical_landau_check(parse_fn("7"), 0, 1).margins["fsharp"] == 0
    rep = spherical_landau_check(parse_fn("exp(z + 3)", domain=Disk(0, 2)), 0, 1)
    assert rep.margins["fsharp"] == pytest.approx(math.exp(3) / (1 + math.exp(6)), rel=1e-12)
    rep = spherical_landau_check(parse_fn("exp(10*z + 3)"), 0, 0.1)
    assert rep.verdict == PASS
    assert rep.margins["fsharp"] == pytest.approx(10 * math.exp(3) / (1 + math.exp(6)), rel=1e-12)


@pytest.mark.parametrize("x0", [-0.5, -1.0, -5.0])
def test_strip_map(x0):
    rng = np.random.default_rng(7)
    y0 = 0.7
    z = rng.uniform(2 * x0, 0, 10_000) * (1 - 1e-9) + 1j * (y0 + rng.normal(0, 5 * abs(x0), 10_000))
    assert np.all(np.abs(strip_map(z, x0, y0)) < 1)
    assert strip_map(complex(x0, y0), x0, y0) == pytest.approx(0, abs=1e-15)
    assert abs(strip_map_deriv_at_center(x0) - math.pi / (4 * abs(x0))) <= 1e-10


def test_pj_examples():
    rep = poisson_jensen_check(parse_fn("z"), 0.5, 1)
    assert rep.verdict == PASS and rep.margins["lhs"] == pytest.approx(math.log(0.5))
    rep = poisson_jensen_check(parse_fn("z^2 - 0.25"), 0, 1)
    assert rep.verdict == PASS and rep.margins["lhs"] == pytest.approx(math.log(0.25))
    rep = poisson_jensen_check(parse_fn("exp(z)"), 0.3, 0.9)
    assert rep.margins["residual"] <= 1e-6 and rep.margins["rhs"] == pytest.approx(0.3, abs=1e-8)


def test_pj_supplied_zeros():
    zs = RootList((Root(0.5 + 0j, 1), Root(-0.5 + 0j, 1)), 2)
    rep = poisson_jensen_check(parse_fn("z^2 - 0.25"), 0.1 + 0.2j, 0.8, zs)
    assert rep.margins["residual"] <= 1e-6
    with pytest.raises(ValueError):
        poisson_jensen_check(parse_fn("z^2 - 0.25"), 0, 0.8, RootList((Root(0.5 + 0j, 1),), 1))


@pytest.mark.parametrize("expr,b", [("z^3 - 0.1*z + 0.02", 0.05j), ("(z - 0.3)^2*(z + 0.6i)", -0.2),
                                    ("z^6 + 0.5", 0.4 + 0.1j)])
def test_pj_polynomials(expr, b):
    assert poisson_jensen_check(parse_fn(expr), b, 0.95).margins["residual"] <= 1e-6


def test_lower_bound():
    assert theorem4_lower_bound(0.000024) == pytest.approx(9.2511, abs=1e-4)
    assert theorem4_lower_bound(1 / 9) == pytest.approx(2 * math.log(4 / 3), rel=1e-14)
    c = 3 - 2 * math.sqrt(2)
    assert abs(theorem4_lower_bound(c)) < 1e-14
    for C in (c * (1 - 1e-9), c * 0.5, 1e-6):
        assert theorem4_lower_bound(C) > 0
    for C in (c * (1 + 1e-9), 0.5, 0.9):
        assert theorem4_lower_bound(C) < 0


def test_feasibility_examples():
    v = theorem4_feasible(0.000024)
    assert v.feasible and v.margin > 0 and abs(v.margin) > v.budget and v.dps >= 50
    assert v.budget <= mpmath.mpf("1e-20")
    assert not theorem4_feasible(0.000025).feasible
    v = theorem4_feasible(0.01)
    assert not v.feasible
    assert float(v.lhs) == pytest.approx(2.02, abs=0.01) and float(v.rhs) == pytest.approx(3.83, abs=0.01)


def test_feasibility_antitone():
    seen_infeasible = False
    for C in np.logspace(-8, -2, 50):
        f = theorem4_feasible(float(C)).feasible
        assert not (seen_infeasible and f)
        seen_infeasible |= not f
    assert seen_infeasible


def test_max_feasible_C():
    tol = 1e-12
    c = max_feasible_C(tol)
    assert float(C_BRACKET[0]) < c < float(C_BRACKET[1])
    assert theorem4_feasible(c - 10 * tol).feasible
    assert not theorem4_feasible(c + 10 * tol).feasible


def test_bracket_validation():
    with pytest.raises(BracketInvalid):
        max_feasible_C(1e-10, bracket=("0.000025", "0.000026"))
    with pytest.raises(ValueError):
        max_feasible_C(1e-13)


def test_witness_genuine():
    f = parse_fn("4*z^2*exp(-2*z)")
    rep = theorem4_witness_check(f, 0.352)
    assert rep.verdict == PASS and rep.margins["min_modulus_slack"] > 0
    assert all(rep.meta["hypotheses"].values())


def test_witness_quadratic_example():
    f = parse_fn("40*z*(z - 0.1)")
    with pytest.raises(HypothesisFailed, match="ones_in_segment"):
        theorem4_witness_check(f, 0.22)
    rep = theorem4_witness_check(f, 0.22, check_hypothesis=False)
    assert rep.verdict == FAIL and rep.detail == "Violation" and rep.sample


def test_witness_value_count():
    with pytest.raises(HypothesisFailed):
        theorem4_witness_check(parse_fn("z + 2"), 0.5)
