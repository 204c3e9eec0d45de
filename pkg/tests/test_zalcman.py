import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normlab import analytic as an
from normlab.dsl import parse_fn
from normlab.errors import NoStop
from normlab.zalcman import (NORMALIZATION_TOL, WeightFn, find_rescaling,
                             linear_bound_margin, rescaled, rescaled_bound_margin, run_sequence)


def wave(k):
    return parse_fn("exp(-k*i*z)", {"k": k})


def test_wave_certificate():
    cert = find_rescaling(wave(10), 0, 1.0)
    assert 1 <= cert.rho * 10 <= 4
    assert abs(cert.c.imag) <= 1e-6
    assert cert.invariant_violations() == []
    assert cert.bound_margin >= -1e-6


def test_small_eps_rejected_by_guard():
    # phi(f#(0)) = (log 5)^2 ~ 2.59 does not exceed 2/0.3
    with pytest.raises(NoStop):
        find_rescaling(wave(10), 0, 0.3)


def test_s_grows_with_k():
    s10 = find_rescaling(wave(10), 0, 1.0).s
    s40 = find_rescaling(wave(40), 0, 0.3).s
    assert s40 > s10


def test_below_t0():
    with pytest.raises(NoStop):
        find_rescaling(parse_fn("z"), 0, 0.5, WeightFn(t0=8.0))


def test_certificate_matches_direct_maximum():
    f = wave(20)
    cert = find_rescaling(f, 0, 0.6)
    direct = an.max_spherical_on_disk(f, cert.a, cert.eps)
    assert cert.fc <= direct.value * (1 + 1e-9)
    assert cert.fc == pytest.approx(10.0, rel=1e-9)


@pytest.mark.parametrize("k", [10, 20, 40, 80])
def test_normalization(k):
    cert = find_rescaling(wave(k), 0, 2.5 / math.sqrt(k))
    assert abs(cert.rho * cert.fc - 1) <= NORMALIZATION_TOL
    g = rescaled(wave(k), cert.c, cert.rho)
    assert an.spherical_derivative(g, 0) == pytest.approx(1.0, abs=1e-12)


def test_rescaled_examples():
    f = parse_fn("z")
    assert rescaled(f, 0, 1.0)(0.3 + 0.1j) == pytest.approx(0.3 + 0.1j)
    g = rescaled(wave(10), 0, 0.2)
    z = np.array([0.1, 1 + 1j, -2.5j])
    assert np.allclose(g(z), np.exp(-2j * z), rtol=1e-14)


@settings(max_examples=40)
@given(st.complex_numbers(max_magnitude=1, allow_nan=False),
       st.floats(0.01, 5), st.sampled_from(["exp(2*z)", "z^3 - z", "exp(i*z) + z"]))
def test_chain_rule(c, rho, expr):
    f = parse_fn(expr)
    lhs = an.spherical_derivative(rescaled(f, c, rho), 0)
    assert lhs == pytest.approx(rho * an.spherical_derivative(f, c), rel=1e-10, abs=1e-300)


def test_rescaled_bounds_hold():
    cert = find_rescaling(wave(40), 0, 0.4)
    g = rescaled(wave(40), cert.c, cert.rho)
    assert rescaled_bound_margin(g, cert.s) >= -1e-6
    assert linear_bound_margin(g, cert.s / 2) >= -1e-6


def test_admissibility_log_squared():
    for t0 in (4.0, 8.0, 100.0):
        adm = WeightFn(t0=t0).admissibility()
        assert adm.ok
        assert adm.integral == pytest.approx(1 / math.log(t0), abs=1e-6)


def test_admissibility_other_kinds():
    adm = WeightFn("PowerLog", t0=8.0, exponent=3.0).admissibility()
    assert adm.ok and adm.integral == pytest.approx(1 / (2 * math.log(8) ** 2), abs=1e-6)
    tab = ((4.0, 2.0), (50.0, 16.0), (1e4, 90.0))
    assert WeightFn("Custom", t0=4.0, table=tab).admissibility().ok


def test_weight_validation():
    with pytest.raises(ValueError):
        WeightFn("PowerLog", exponent=1.0)
    with pytest.raises(ValueError):
        WeightFn(t0=1.0)
    with pytest.raises(ValueError):
        WeightFn("Custom", table=((5.0, 1.0), (2.0, 3.0)))


def test_sequence_wave_bounds():
    run = run_sequence(wave, 0j)
    assert len(run.ok_rows) == 4 and run.R_formula_consistent
    for row in run.rows:
        assert row.linear_margin >= -1e-6 and row.rescaled_margin >= -1e-6
        assert row.normalization <= NORMALIZATION_TOL


def test_sequence_R_late_growth():
    # R_k = t/(6 phi(t)) with t = k/2 grows once t exceeds e^2
    Rs = [r.R for r in run_sequence(wave, 0j, ks=(20, 40, 80, 160)).rows]
    assert all(y > x for x, y in zip(Rs, Rs[1:]))


def test_sequence_constants_error():
    run = run_sequence(lambda k: parse_fn("c", {"c": float(k)}), 0j, on_error="record")
    assert all(r.error and r.error.startswith("NoStop") for r in run.rows)
    with pytest.raises(NoStop):
        run_sequence(lambda k: parse_fn("c", {"c": float(k)}), 0j)


def test_affine_family():
    fam = lambda k: parse_fn("c*(z - a)", {"c": float(k) ** 2, "a": 1.0 / k})
    run = run_sequence(fam, 0j, ks=(10, 20, 40, 80))
    zs = [abs(r.z) for r in run.rows]
    assert all(r.error is None for r in run.rows)
    for k, row in zip((10, 20, 40, 80), run.rows):
        assert abs(row.z - 1.0 / k) < 1.0 / k
        direct = an.spherical_derivative(fam(k), 1.0 / k)
        assert direct == pytest.approx(k ** 2)
        assert 1.0 / row.rho <= direct * (1 + 1e-9)
    assert zs[-1] < zs[0]
