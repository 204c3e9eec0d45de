import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normlab import analytic as an
from normlab.analytic import Disk
from normlab.dsl import parse_fn
from normlab.errors import BoundaryRoot, HypothesisUnchecked
from normlab.roots import (_Shifted, _split, _square_count, count_a_points,
                           locate_a_points, multiple_root_resolution, verify_lemma7)


def from_roots(roots, lead=1.0):
    return an.polynomial(lead * np.poly(roots)[::-1])


def test_count_examples():
    assert count_a_points(parse_fn("z^2 - 1"), 0, Disk(0, 2)).count == 2
    assert count_a_points(parse_fn("exp(z)"), 0, Disk(0, 5)).count == 0
    rc = count_a_points(parse_fn("exp(-10*i*z)"), 1, Disk(0, 0.95))
    assert rc.count == 3 and rc.winding_residual < 0.25


def test_boundary_root_guard():
    with pytest.raises(BoundaryRoot):
        count_a_points(parse_fn("z^2 - 1"), 0, Disk(0, 1))


def test_locate_examples():
    rl = locate_a_points(parse_fn("z^2 - 1"), 0, Disk(0, 2), 1e-10)
    got = sorted((r.location.real, r.multiplicity) for r in rl.roots)
    assert [m for _, m in got] == [1, 1]
    assert got[0][0] == pytest.approx(-1, abs=1e-10) and got[1][0] == pytest.approx(1, abs=1e-10)

    (r,) = locate_a_points(parse_fn("(z - 0.3)^2"), 0, Disk(0, 1)).roots
    assert r.multiplicity == 2 and abs(r.location - 0.3) <= multiple_root_resolution(2)

    (r,) = locate_a_points(parse_fn("10*(0.05 - z)"), 1, Disk(0, 0.5)).roots
    assert r.multiplicity == 1 and abs(r.location + 0.05) < 1e-12


def test_locate_exp_one_points():
    rl = locate_a_points(parse_fn("exp(-10*i*z)"), 1, Disk(0, 0.95))
    want = sorted(2 * math.pi * m / 10 for m in (-1, 0, 1))
    assert sorted(r.location.real for r in rl.roots) == pytest.approx(want, abs=1e-10)


roots_st = st.lists(
    st.complex_numbers(max_magnitude=1.8, allow_nan=False, allow_infinity=False),
    min_size=1, max_size=6)


def _clear_of(points, circles, gap=1e-3):
    return all(abs(abs(p - c) - r) > gap for p in points for c, r in circles)


@given(roots_st, st.floats(0.3, 1.5))
def test_argument_principle(roots, r):
    if not _clear_of(roots, [(0, r)]):
        return
    f = from_roots(roots)
    assert count_a_points(f, 0, Disk(0, r)).count == sum(abs(z) < r for z in roots)


@given(roots_st)
def test_quadrisection_additivity(roots):
    box = (-1.0, 1.0, -1.0, 1.0)
    near = [abs(z.real) < 1e-3 or abs(z.imag) < 1e-3 or
            min(abs(abs(z.real) - 1), abs(abs(z.imag) - 1)) < 1e-3 for z in roots]
    if any(near):
        return
    sh = _Shifted(from_roots(roots), 0j)
    whole = _square_count(sh, box)
    assert whole == sum(_square_count(sh, b) for b in _split(box, 0.5))
    assert whole == sum(abs(z.real) < 1 and abs(z.imag) < 1 for z in roots)


@given(roots_st, st.floats(0.5, 3.0))
def test_rouche_consistency(roots, lead):
    f = from_roots(roots, lead)
    r = 0.9
    if an.min_modulus_on_circle(f, r).value <= 1.0 + 1e-6:
        return
    d = Disk(0, r)
    assert count_a_points(f, 0, d).count == count_a_points(f, 1, d).count


@settings(max_examples=30)
@given(roots_st)
def test_locate_count_round_trip(roots):
    if not _clear_of(roots, [(0, 1.0)], 1e-2):
        return
    f = from_roots(roots)
    d = Disk(0, 1.0)
    rl = locate_a_points(f, 0, d)
    assert sum(q.multiplicity for q in rl.roots) == count_a_points(f, 0, d).count == rl.count


def test_lemma7_examples():
    rep = verify_lemma7(parse_fn("10*(0.05 - z)"), 0.5)
    assert rep.hypothesis_ok and rep.verdict == "OnePair"
    assert rep.min_modulus == pytest.approx(4.5, rel=1e-9)
    rep = verify_lemma7(parse_fn("z + 2"), 0.5)
    assert rep.verdict == "Empty" and rep.min_modulus == pytest.approx(1.5, rel=1e-9)
    with pytest.raises(HypothesisUnchecked):
        verify_lemma7(parse_fn("z"), 0.5)


def test_lemma7_hypothesis_flag():
    rep = verify_lemma7(parse_fn("10*(z + 0.05)"), 0.5)
    assert not rep.hypothesis_ok


def test_lemma7_report_invariants():
    rep = verify_lemma7(parse_fn("10*(0.05 - z)"), 0.5)
    j = rep.to_json()
    assert (j["n_zeros"], j["n_ones"]) == (1, 1) and j["simple"]
    assert cmath.isclose(complex(*j["zeros"][0]["location"]), 0.05, abs_tol=1e-12)
