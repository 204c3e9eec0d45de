"""Explicit constants and inequality chains evaluated with mpmath.

Everything here that decides a sign near zero runs in extended precision; the
function-level checks (Landau, Poisson-Jensen, witnesses) use doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from . import analytic as an
from .analytic import AnalyticFn, Disk
from .errors import (BoundaryRoot, BracketInvalid, DomainExceeded, HypothesisFailed,
                     Indeterminate, OmissionFailed, QuadratureNonConvergent)
from .report import FAIL, PASS, CheckReport
from .roots import AXIS_TOL, RootList, count_a_points, locate_a_points

BASE_DPS = 50
MAX_DPS = 200
BASE_BUDGET = mpmath.mpf("1e-20")
TARGET_C = "0.000024"
C_BRACKET = ("0.000024", "0.000025")
A2_REFERENCE = (0.005874, 0.02529)  # cited bounds, metadata only


@dataclass(frozen=True)
class HighPrecisionReal:
    value: mpmath.mpf
    error: mpmath.mpf
    dps: int

    def __float__(self):
        return float(self.value)

    def digits(self, n: int = 20) -> str:
        return mpmath.nstr(self.value, n)

    def to_json(self):
        return {"value": mpmath.nstr(self.value, self.dps), "error": mpmath.nstr(self.error, 3),
                "dps": self.dps}


def _mp(x) -> mpmath.mpf:
    """Exact decimal reading of float inputs (``0.000024`` means 24e-6, not its binary neighbour)."""
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, float):
        return mpmath.mpf(repr(x))
    return mpmath.mpf(x)


# ---------------------------------------------------------------------------
# the constant A


def _A_agm() -> mpmath.mpf:
    # Gamma(1/4)^2 = (2 pi)^{3/2} / AGM(1, sqrt 2), hence A = 2 pi / AGM(1, sqrt 2)^2
    return 2 * mpmath.pi / mpmath.agm(1, mpmath.sqrt(2)) ** 2


def hempel_lai_A(dps: int = BASE_DPS) -> HighPrecisionReal:
    """``Gamma(1/4)^4 / (4 pi^2)`` via the arithmetic-geometric mean.

    The error bound is the distance to a recomputation with 20 guard digits.
    """
    with mpmath.workdps(dps + 20):
        ref = _A_agm()
    with mpmath.workdps(dps):
        val = _A_agm()
        err = abs(val - ref) + mpmath.mpf(10) ** (-dps)
        return HighPrecisionReal(val, err, dps)


def gamma_quarter(dps: int = BASE_DPS) -> mpmath.mpf:
    """``Gamma(1/4)`` from the same AGM relation."""
    with mpmath.workdps(dps):
        return mpmath.sqrt((2 * mpmath.pi) ** mpmath.mpf(1.5) / mpmath.agm(1, mpmath.sqrt(2)))


# ---------------------------------------------------------------------------
# Landau estimates


def _require_omission(f: AnalyticFn, a: complex, r: float):
    disk = Disk(complex(a), r)
    for target in (0, 1):
        if target == 0 and an.is_structurally_zero_free(f.node):
            continue
        n = count_a_points(f, target, disk).count
        if n:
            raise OmissionFailed(f"f takes the value {target} {n} time(s) in {disk}")


def landau_check(f: AnalyticFn, a: complex, r: float) -> CheckReport:
    """``|f'(a)| <= (2/r) |f(a)| (|log|f(a)|| + A)`` for ``f`` omitting 0 and 1 on ``D(a, r)``."""
    a = complex(a)
    _require_omission(f, a, r)
    A = float(hempel_lai_A().value)
    fa = f(a)
    lhs = abs(f.deriv()(a)) / (abs(fa) * (abs(math.log(abs(fa))) + A))
    bound = 2.0 / r
    ok = lhs <= bound
    return CheckReport("landau", PASS if ok else FAIL, {"ratio": lhs, "bound": bound,
                       "slack": bound - lhs}, {"a": a, "r": r, "A": A}, None,
                       None if ok else {"point": a, "ratio": lhs})


def spherical_landau_check(f: AnalyticFn, a: complex, r: float, B_used: float = 4.5) -> CheckReport:
    """``f#(a) <= B_used / r``; a failure means ``B_used`` is too small, nothing more."""
    a = complex(a)
    _require_omission(f, a, r)
    fs = an.spherical_derivative(f, a)
    bound = B_used / r
    ok = fs <= bound
    return CheckReport("spherical_landau", PASS if ok else FAIL,
                       {"fsharp": fs, "bound": bound, "slack": bound - fs},
                       {"a": a, "r": r, "B_used": B_used}, None,
                       None if ok else {"point": a, "fsharp": fs})


# ---------------------------------------------------------------------------
# strip map


def strip_map(z, x0: float, y0: float = 0.0):
    """Biholomorphic map of ``2 x0 < Re z < 0`` onto the unit disk sending ``x0 + i y0`` to 0."""
    if not x0 < 0:
        raise ValueError("x0 must be negative")
    arr = np.asarray(z, dtype=complex)
    if np.any(arr.real <= 2 * x0) or np.any(arr.real >= 0):
        raise DomainExceeded("point outside the strip 2*x0 < Re z < 0")
    w = (math.pi * 1j / (2 * x0)) * (arr - complex(x0, y0))
    out = np.tanh(w / 2)  # (e^w - 1)/(e^w + 1) without overflow
    return complex(out) if arr.ndim == 0 else out


def strip_map_derivative(z, x0: float, y0: float = 0.0):
    arr = np.asarray(z, dtype=complex)
    k = math.pi * 1j / (2 * x0)
    out = (k / 2) / np.cosh(k * (arr - complex(x0, y0)) / 2) ** 2
    return complex(out) if arr.ndim == 0 else out


def strip_map_deriv_at_center(x0: float) -> float:
    return abs(strip_map_derivative(complex(x0, 0.0), x0))


# ---------------------------------------------------------------------------
# Poisson-Jensen


def _pj_boundary(f: AnalyticFn, b: complex, r: float, tol: float = 1e-8, n0: int = 64,
                 n_max: int = 2 ** 20):
    prev = None
    n = n0
    while n <= n_max:
        th = 2 * np.pi * np.arange(n) / n
        w = r * np.exp(1j * th)
        val = float(np.mean(f.log_abs(w) * ((w + b) / (w - b)).real))
        if prev is not None and abs(val - prev) <= tol:
            return val, n
        prev, n = val, 2 * n
    raise QuadratureNonConvergent("boundary integral did not settle")


def poisson_jensen_check(f: AnalyticFn, b: complex, r: float, zeros: RootList | None = None,
                         tol: float = 1e-6) -> CheckReport:
    """Compare ``log|f(b)|`` with the boundary integral minus the zero terms on ``|z| = r``."""
    b = complex(b)
    if not abs(b) < r:
        raise ValueError("need |b| < r")
    disk = Disk(0j, r)
    f.check_disk(disk)
    try:
        n = 0 if an.is_structurally_zero_free(f.node) else count_a_points(f, 0, disk).count
    except BoundaryRoot as exc:
        raise BoundaryRoot(f"zero on |z| = {r}") from exc
    if zeros is None:
        zeros = locate_a_points(f, 0, disk) if n else RootList((), 0)
    if sum(q.multiplicity for q in zeros.roots) != n:
        raise ValueError("supplied zeros do not match the argument-principle count")
    boundary, samples = _pj_boundary(f, b, r)
    zero_term = sum(q.multiplicity * math.log(abs((r * r - q.location.conjugate() * b)
                                                  / (r * (b - q.location))))
                    for q in zeros.roots)
    lhs = f.log_abs(b)
    rhs = boundary - zero_term
    residual = abs(lhs - rhs)
    ok = residual <= tol
    return CheckReport("poisson_jensen", PASS if ok else FAIL,
                       {"residual": residual, "lhs": lhs, "rhs": rhs},
                       {"b": b, "r": r, "zeros": zeros, "samples": samples, "tol": tol}, None,
                       None if ok else {"b": b, "residual": residual})


# ---------------------------------------------------------------------------
# the feasibility inequality


def theorem4_lower_bound(C) -> float:
    """``2 log((1 - C) / (2 sqrt C))``."""
    C = float(C)
    if not 0 < C < 1:
        raise ValueError("need 0 < C < 1")
    return 2.0 * math.log((1.0 - C) / (2.0 * math.sqrt(C)))


def _sides(C: mpmath.mpf):
    A = _A_agm()
    lhs = mpmath.log(2 * mpmath.log((1 - C) / (2 * mpmath.sqrt(C))) + A)
    rhs = mpmath.log(mpmath.sqrt(A * A + mpmath.pi ** 2)) + mpmath.pi ** 2 / mpmath.log(1 / C)
    return lhs, rhs


@dataclass(frozen=True)
class FeasibilityVerdict:
    C: float
    lhs: HighPrecisionReal
    rhs: HighPrecisionReal
    feasible: bool
    margin: mpmath.mpf
    budget: mpmath.mpf
    dps: int

    def to_json(self):
        return {"C": self.C, "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(),
                "feasible": self.feasible, "margin": mpmath.nstr(self.margin, 20),
                "budget": mpmath.nstr(self.budget, 3), "dps": self.dps}


def theorem4_feasible(C, dps: int = BASE_DPS) -> FeasibilityVerdict:
    """Decide ``lhs > rhs`` for the critical inequality at ``C``.

    The budget is ``1e-20`` at 50 digits and shrinks by the same factor as the
    working precision grows; inside it the precision doubles, up to 200 digits,
    after which :class:`Indeterminate` is raised.
    """
    with mpmath.workdps(dps):
        Cm = _mp(C)
        if not 0 < Cm < 3 - 2 * mpmath.sqrt(2):
            raise ValueError("need 0 < C < 3 - 2 sqrt 2")
    while dps <= MAX_DPS:
        with mpmath.workdps(dps + 20):
            ref_l, ref_r = _sides(_mp(C))
        with mpmath.workdps(dps):
            lhs, rhs = _sides(_mp(C))
            margin = lhs - rhs
            budget = BASE_BUDGET * mpmath.mpf(10) ** (BASE_DPS - dps)
            err_l, err_r = abs(lhs - ref_l), abs(rhs - ref_r)
            if abs(margin) > budget + err_l + err_r:
                return FeasibilityVerdict(
                    float(C), HighPrecisionReal(lhs, err_l, dps), HighPrecisionReal(rhs, err_r, dps),
                    bool(margin > 0), margin, budget, dps)
        dps *= 2
    raise Indeterminate(f"sign of lhs - rhs at C = {C} unresolved at {MAX_DPS} digits")


def feasibility_margin(C, dps: int = BASE_DPS) -> mpmath.mpf:
    with mpmath.workdps(dps):
        lhs, rhs = _sides(_mp(C))
        return lhs - rhs


def max_feasible_C(tol: float = 1e-12, bracket=C_BRACKET, monotone_samples: int = 17) -> float:
    """Critical ``C*`` where both sides agree, by bisection inside ``bracket``."""
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")
    with mpmath.workdps(BASE_DPS):
        lo, hi = _mp(bracket[0]), _mp(bracket[1])
        try:
            ok_lo = theorem4_feasible(lo).feasible
            ok_hi = theorem4_feasible(hi).feasible
        except Indeterminate as exc:
            raise BracketInvalid(str(exc)) from exc
        if not (ok_lo and not ok_hi):
            raise BracketInvalid(f"need feasible at {bracket[0]} and infeasible at {bracket[1]}")
        ms = [feasibility_margin(lo + (hi - lo) * k / (monotone_samples - 1))
              for k in range(monotone_samples)]
        if any(m2 >= m1 for m1, m2 in zip(ms, ms[1:])):
            raise BracketInvalid("lhs - rhs is not decreasing across the bracket")
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if feasibility_margin(mid) > 0:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)


# ---------------------------------------------------------------------------
# witnesses for the radial theorem


def _on_segment(roots, lo: float, hi: float) -> bool:
    return all(abs(q.location.imag) <= AXIS_TOL and lo - AXIS_TOL <= q.location.real <= hi + AXIS_TOL
               for q in roots)


def theorem4_witness_check(f: AnalyticFn, r: float, n_s: int = 16, search_radius: float = 0.999,
                           check_hypothesis: bool = True) -> CheckReport:
    """Check the two consequences the radial theorem rests on for a concrete ``f``.

    (a) ``min_{|z|=s} |f| <= 1`` for sampled ``s`` in ``(r, 1)`` and at ``s = sqrt r``;
    (b) ``r >= 0.000024``.  When ``f`` has fewer than two zeros the check runs on
    ``1 - f(-z)``, which swaps the roles of zeros and 1-points.
    """
    if not 0 < r < 1:
        raise ValueError("need 0 < r < 1")
    search = Disk(0j, search_radius)
    zeros = locate_a_points(f, 0, search)
    ones = locate_a_points(f, 1, search)
    hyp = {
        "zeros_in_segment": _on_segment(zeros.roots, 0.0, r),
        "ones_in_segment": _on_segment(ones.roots, -r, 0.0),
        "both_values": zeros.count >= 1 and ones.count >= 1,
        "one_value_twice": zeros.count >= 2 or ones.count >= 2,
    }
    meta = {"r": r, "hypotheses": hyp, "zeros": zeros, "ones": ones,
            "A2_reference": list(A2_REFERENCE)}
    if check_hypothesis and not all(hyp.values()):
        raise HypothesisFailed("hypothesis violated: "
                               + ", ".join(k for k, v in hyp.items() if not v))
    work = f if zeros.count >= 2 else 1 - f.compose_affine(-1, 0)
    ss = [r + (1 - r) * k / (n_s + 1) for k in range(1, n_s + 1)] + [math.sqrt(r)]
    mins = [an.min_modulus_on_circle(work, s).value for s in ss]
    k = int(np.argmax(mins))
    a_ok = mins[k] <= 1 + 1e-12
    b_ok = r >= float(TARGET_C)
    ok = a_ok and b_ok
    margins = {"min_modulus_slack": 1 - mins[k], "r_minus_C": r - float(TARGET_C)}
    sample = None
    if not ok:
        sample = {"s": ss[k], "min_modulus": mins[k]} if not a_ok else {"r": r}
    return CheckReport("theorem4_witness", PASS if ok else FAIL, margins, meta, None, sample,
                       "" if ok else "Violation")


__all__ = [
    "HighPrecisionReal", "FeasibilityVerdict", "hempel_lai_A", "gamma_quarter", "landau_check",
    "spherical_landau_check", "strip_map", "strip_map_derivative", "strip_map_deriv_at_center",
    "poisson_jensen_check", "theorem4_lower_bound", "theorem4_feasible", "feasibility_margin",
    "max_feasible_C", "theorem4_witness_check",
]
