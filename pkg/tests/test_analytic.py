import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from normlab import analytic as an
from normlab.analytic import Disk, GridSpec
from normlab.dsl import parse_fn
from normlab.errors import DomainExceeded, Overflow

finite = st.floats(-2, 2, allow_nan=False)
coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


# --- evaluation -----------------------------------------------------------------


def test_eval_examples():
    assert parse_fn("z^2 - 1")(2) == 3
    assert parse_fn("exp(2*i*z)")(0) == 1
    assert parse_fn("reflect(10*(0.05 - z))")(-0.05) == pytest.approx(1.0, abs=1e-14)


def test_domain_and_overflow():
    f = parse_fn("z", domain=an.UNIT_DISK)
    with pytest.raises(DomainExceeded):
        f(2.0)
    g = parse_fn("exp(z)")
    with pytest.raises(Overflow):
        g(800.0)
    # huge values stay usable through the log form
    assert g.log_abs(800.0) == pytest.approx(800.0)
    assert an.spherical_derivative(g, 800.0) == pytest.approx(math.exp(-800.0), rel=1e-12, abs=0)


def test_derivative_examples():
    assert parse_fn("z^2").deriv()(1) == 2
    assert parse_fn("exp(2*i*z)").deriv()(0) == 2j
    d = parse_fn("(z - 0.05)*10").deriv()
    assert d(0.3) == 10 and d(-0.7) == 10


def test_spherical_examples():
    assert an.spherical_derivative(parse_fn("z"), 0) == 1
    assert an.spherical_derivative(parse_fn("exp(2*i*z)"), 0) == pytest.approx(1.0)
    w = parse_fn("exp(-10*i*z)")
    assert an.spherical_derivative(w, 0.37) == pytest.approx(5.0)


def test_max_spherical_examples():
    z, H = an.max_spherical_on_disk(parse_fn("z"), 0, 0.5)
    assert (z, H) == (0, 1)
    z, H = an.max_spherical_on_disk(parse_fn("exp(-10*i*z)"), 0, 0.2)
    assert H == pytest.approx(5.0, rel=1e-12)
    assert abs(z.imag) < 1e-6
    assert an.max_spherical_on_disk(parse_fn("7"), 0, 0.5).value == 0


def test_circle_extrema_examples():
    f = parse_fn("z")
    assert an.min_modulus_on_circle(f, 0.5).value == pytest.approx(0.5)
    assert an.max_modulus_on_circle(f, 0.5).value == pytest.approx(0.5)
    g = parse_fn("2 + z")
    assert an.min_modulus_on_circle(g, 0.5).value == pytest.approx(1.5, abs=1e-12)
    assert an.max_modulus_on_circle(g, 0.5).value == pytest.approx(2.5, abs=1e-12)
    h = parse_fn("10*(0.05 - z)")
    assert an.min_modulus_on_circle(h, 0.5).value == pytest.approx(4.5, abs=1e-12)


def test_rescaled_substitution():
    f = parse_fn("exp(-10*i*z)")
    g = f.compose_affine(0.2, 0)
    pts = np.array([0.1 + 0.2j, -0.4j, 0.7])
    assert np.allclose(g(pts), np.exp(-2j * pts))


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(counts=(4, 96))
    with pytest.raises(ValueError):
        Disk(0, 0)


# --- properties -------------------------------------------------------------------

TREES = [
    "z^3 - 2*z + 0.5i",
    "exp(2*i*z)*(z - 0.3)",
    "exp(z^2 - 1) + z",
    "reflect(10*(0.05 - z))",
    "reflect(exp(i*z) + z^2)",
    "exp(exp(0.5*z))",
    "(z + 1)^4 * exp(-z)",
]


@pytest.mark.parametrize("expr", TREES)
@given(x=finite, y=finite)
def test_derivative_matches_central_differences(expr, x, y):
    f = parse_fn(expr)
    z = complex(x, y) * 0.5
    fp = f.deriv()(z)
    errs = []
    for h in (1e-3, 5e-4):
        fd = (f(z + h) - f(z - h)) / (2 * h)
        errs.append(abs(fd - fp))
    scale = 1 + abs(fp) + abs(f(z))
    # second order: halving h cuts the error by about four
    assert errs[1] <= 1e-5 * scale or errs[1] <= 0.3 * errs[0] + 1e-9 * scale


@given(x=finite, y=finite)
def test_reciprocal_invariance(x, y):
    h = parse_fn("z^2 - 0.5*i*z + 0.3")
    f = an.exp(h)
    inv = an.exp(-h)  # 1/f without a division node
    z = complex(x, y)
    assert an.spherical_derivative(f, z) == pytest.approx(an.spherical_derivative(inv, z), rel=1e-10)


@given(x=st.floats(-0.99, 0.99), c=st.lists(coef, min_size=1, max_size=5))
def test_reflect_is_real_on_axis(x, c):
    f = an.reflect(an.polynomial(c))
    v = f(x)
    assert abs(v.imag) <= 1e-12 * (1 + abs(v))
    p = an.polynomial(c)(x)
    assert v.real == pytest.approx(abs(p) ** 2, rel=1e-9, abs=1e-12)


@given(a=coef, b=coef, x=finite, y=finite)
def test_chain_rule_after_rescaling(a, b, x, y):
    f = parse_fn("exp(2*i*z) + z^3")
    if abs(a) < 1e-3:
        a = 1.0
    g = f.compose_affine(a, b)
    z = complex(x, y) * 0.3
    assert an.spherical_derivative(g, 0) == pytest.approx(abs(a) * an.spherical_derivative(f, b), rel=1e-10)
    assert g(z) == pytest.approx(f(a * z + b), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("expr", ["z^3 - 0.2", "exp(3*z) + z", "exp(-10*i*z)"])
def test_refinement_monotone(expr):
    f = parse_fn(expr)
    coarse = GridSpec(counts=(12, 24), refine=False)
    fine = GridSpec(counts=(24, 48), refine=False)
    assert an.max_spherical_on_disk(f, 0, 0.6, fine).value >= an.max_spherical_on_disk(f, 0, 0.6, coarse).value
    c1, c2 = an.circle_grid(refine=False), GridSpec("circle-samples", (512,), refine=False)
    assert an.max_modulus_on_circle(f, 0.6, grid=c2).value >= an.max_modulus_on_circle(f, 0.6, grid=c1).value
    assert an.min_modulus_on_circle(f, 0.6, grid=c2).value <= an.min_modulus_on_circle(f, 0.6, grid=c1).value


def test_argmax_tie_break_is_lowest_index():
    # constant modulus on the circle: every sample ties, the first angle wins
    f = parse_fn("exp(0*z) * 3")
    ext = an.max_modulus_on_circle(f, 0.5, grid=an.circle_grid(refine=False))
    assert ext.point == pytest.approx(0.5)
    assert cmath.isclose(ext.point, 0.5)
