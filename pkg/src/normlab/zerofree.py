"""Exponential form of normalized zero-free functions and the growth bound.

A zero-free ``g`` on ``D(0, R)`` with ``g#(0) = 1`` and ``g#(z) <= 1 + |z|/R`` is
written ``g(z) = exp(c (z - b) + delta(z))`` where ``g(b) = 1``.  The logarithm
is continued by quadrature of ``g'/g`` along straight segments from ``b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import analytic as an
from .analytic import AnalyticFn, Disk, GridSpec
from .errors import (HypothesisFailed, NoUnitPoint, PathTooCloseToZero, PremiseFailed,
                     QuadratureNonConvergent)
from .report import FAIL, HYPOTHESIS_FAILED, PASS, CheckReport
from .roots import count_a_points, locate_a_points

B_DEFAULT = 4.5
UNIT_TOL = 1e-10
NORMALIZATION_BAND = (0.999, 1.001)
DELTA_GRID = (32, 64)
PATH_FLOOR = 1e-8  # minimal |g/g'| relative to the path length
GROWTH_TOL = 1e-12

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_MAX_DEPTH = 40


# ---------------------------------------------------------------------------
# continuation of log g


def _log_derivative(g: AnalyticFn, gp_node):
    """Vectorized ``g'/g`` from the scaled representations of ``g`` and ``g'``."""

    def fn(z):
        gm, gs = g.node.scaled(z)
        dm, ds = gp_node.scaled(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = (dm / gm) * np.exp(ds - gs)
        return ratio

    return fn


def _panels(fn, a, b):
    mid, half = (a + b) / 2, (b - a) / 2
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = fn(nodes)
    return (vals * _GL_W).sum(axis=1) * half, vals


def _integrate_segments(fn, starts, ends, floor: float, rtol: float = 1e-13):
    """Adaptive composite Gauss-Legendre of ``fn`` over each segment ``[start, end]``.

    A panel is accepted when its 16-point value agrees with the sum over its two
    halves.  ``floor`` is the smallest admissible ``1/|fn|`` on any node; below
    that the path is treated as passing through a zero.
    """
    starts = np.asarray(starts, dtype=complex).ravel()
    ends = np.asarray(ends, dtype=complex).ravel()
    total = np.zeros(starts.shape, dtype=complex)
    owner = np.arange(starts.size)
    a, b = starts, ends
    for _ in range(_MAX_DEPTH):
        if a.size == 0:
            return total
        m = (a + b) / 2
        whole, v0 = _panels(fn, a, b)
        left, v1 = _panels(fn, a, m)
        right, v2 = _panels(fn, m, b)
        worst = np.max(np.abs(np.concatenate([v0, v1, v2], axis=1)), axis=1)
        if not np.all(np.isfinite(worst)) or np.any(worst * floor > 1.0):
            raise PathTooCloseToZero("integration path passes too close to a zero of g")
        halves = left + right
        scale = np.maximum(np.abs(halves), np.abs(b - a) * worst)
        ok = np.abs(whole - halves) <= rtol * np.maximum(scale, 1e-300)
        np.add.at(total, owner[ok], halves[ok])
        bad = ~ok
        owner = np.concatenate([owner[bad], owner[bad]])
        a, b = np.concatenate([a[bad], m[bad]]), np.concatenate([m[bad], b[bad]])
    raise QuadratureNonConvergent("adaptive quadrature exceeded its subdivision depth")


def log_branch(g: AnalyticFn, b: complex, z):
    """Continuation ``h(z) = int_b^z g'/g`` along the segment ``[b, z]`` (``h(b) = 0``).

    Not reduced modulo ``2 pi i``.  Accepts scalars or arrays.
    """
    arr = np.asarray(z, dtype=complex)
    b = complex(b)
    g.check_points(np.append(arr.ravel(), b))
    length = float(np.max(np.abs(arr - b), initial=0.0))
    fn = _log_derivative(g, g.node.derivative())
    h = _integrate_segments(fn, np.full(arr.size, b), arr.ravel(), PATH_FLOOR * max(length, 1e-300))
    h = h.reshape(arr.shape)
    return complex(h) if arr.ndim == 0 else h


def log_branch_polar(g: AnalyticFn, b: complex, radius: float, n_r: int, n_t: int):
    """``h`` on the polar grid ``b + radius*(j/n_r)*e^{2 pi i k/n_t}`` (``j >= 1``).

    Integrates ring-to-ring along each ray and accumulates; returns ``(points, h)``
    with shape ``(n_r, n_t)``.
    """
    b = complex(b)
    radii = radius * np.arange(0, n_r + 1) / n_r
    th = 2 * np.pi * np.arange(n_t) / n_t
    pts = b + np.outer(radii, np.exp(1j * th))
    g.check_points(pts)
    fn = _log_derivative(g, g.node.derivative())
    steps = _integrate_segments(fn, pts[:-1].ravel(), pts[1:].ravel(), PATH_FLOOR * radius)
    h = np.cumsum(steps.reshape(n_r, n_t), axis=0)
    return pts[1:], h


# ---------------------------------------------------------------------------
# unit point and form


def zero_free_on(g: AnalyticFn, disk: Disk) -> bool:
    """Structural certificate first, then the argument principle."""
    if an.is_structurally_zero_free(g.node):
        return True
    return count_a_points(g, 0, disk).count == 0


def find_unit_point(g: AnalyticFn, search_radius: float, B_used: float = B_DEFAULT) -> complex:
    """The 1-point of ``g`` of smallest modulus in ``|z| <= search_radius``."""
    if search_radius > B_used:
        raise ValueError("search radius exceeds B_used")
    disk = Disk(0j, search_radius)
    if not zero_free_on(g, disk):
        raise HypothesisFailed("g has zeros in the search disk")
    roots = locate_a_points(g, 1.0, disk).locations()
    if not roots:
        raise NoUnitPoint(f"no 1-point in |z| <= {search_radius}")
    # smallest modulus; ties broken by argument in [0, 2 pi)
    return min(roots, key=lambda w: (round(abs(w), 12), math.atan2(w.imag, w.real) % (2 * math.pi)))


@dataclass(frozen=True)
class ZeroFreeForm:
    g: AnalyticFn
    R: float
    B_used: float
    b: complex
    c: complex
    hypotheses: dict = field(default_factory=dict, hash=False)

    @property
    def hypotheses_ok(self) -> bool:
        return all(self.hypotheses.values())

    def delta(self, z):
        """``delta(z) = h(z) - c (z - b)``."""
        arr = np.asarray(z, dtype=complex)
        return log_branch(self.g, self.b, arr) - self.c * (arr - self.b)

    def to_json(self):
        return {"R": self.R, "B_used": self.B_used, "b": [self.b.real, self.b.imag],
                "c": [self.c.real, self.c.imag], "hypotheses": dict(self.hypotheses)}


def normalization_consequence(g: AnalyticFn) -> tuple[float, float]:
    """``(|h'(0)|, 2 g#(0))``; the first always dominates the second."""
    g0 = g(0j)
    hp = abs(g.deriv()(0j) / g0)
    return hp, 2.0 * an.spherical_derivative(g, 0j)


def extract_form(g: AnalyticFn, R: float, B_used: float = B_DEFAULT,
                 grid: GridSpec | None = None, strict: bool = True) -> ZeroFreeForm:
    """Pre-check the hypotheses on ``D(0, R)`` and compute ``b``, ``c``.

    With ``strict=False`` failed pre-checks are recorded in ``hypotheses``
    instead of raising, so violating inputs can still be measured.
    """
    grid = grid or GridSpec()
    g.check_disk(Disk(0j, R))
    hyp = {}
    hyp["R_exceeds_256B"] = bool(R > 256 * B_used)
    g0 = an.spherical_derivative(g, 0j)
    hyp["normalized"] = bool(NORMALIZATION_BAND[0] <= g0 <= NORMALIZATION_BAND[1])
    n_r, n_t = grid.counts[0], grid.counts[-1]
    radii = R * np.arange(1, n_r + 1) / n_r
    pts = np.concatenate([[0j], np.outer(radii, np.exp(2j * np.pi * np.arange(n_t) / n_t)).ravel()])
    # g# peaks near |g| = 1, a thin curve when |g| varies fast; sample it directly
    pts = np.concatenate([pts, _level_points(g, 0j, R, n_r, n_t, 1.0)])
    slack = 1.0 + np.abs(pts) / R - an.spherical_derivative(g, pts)
    hyp["linear_growth"] = bool(np.min(slack) >= -1e-12)
    hyp["zero_free"] = bool(zero_free_on(g, Disk(0j, R)))
    failed = [k for k, v in hyp.items() if not v]
    if failed and (strict or not hyp["zero_free"]):
        raise HypothesisFailed(f"pre-check(s) failed: {', '.join(failed)}")
    b = find_unit_point(g, B_used, B_used)
    gb = g(b)
    if abs(gb - 1) > UNIT_TOL:
        raise NoUnitPoint(f"|g(b) - 1| = {abs(gb - 1):.3g}")
    c = complex(g.deriv()(b) / gb)
    return ZeroFreeForm(g, float(R), float(B_used), complex(b), c, hyp)


# ---------------------------------------------------------------------------
# bound verification


@dataclass(frozen=True)
class FormBoundReport:
    c_bound_ok: bool
    c_lower_margin: float
    c_upper_margin: float
    delta_margin: float
    delta_max: float
    worst_point: complex
    grid: tuple
    radius: float
    hypotheses: dict

    @property
    def ok(self) -> bool:
        return self.c_bound_ok and self.delta_margin > 0

    def to_json(self):
        return {"c_bound_ok": self.c_bound_ok, "c_lower_margin": self.c_lower_margin,
                "c_upper_margin": self.c_upper_margin, "delta_margin": self.delta_margin,
                "delta_max": self.delta_max,
                "worst_point": [self.worst_point.real, self.worst_point.imag],
                "grid": {"radii": self.grid[0], "angles": self.grid[1]},
                "radius": self.radius, "hypotheses": dict(self.hypotheses)}

    def to_check(self, timing: float | None = None) -> CheckReport:
        margins = {"c_lower": self.c_lower_margin, "c_upper": self.c_upper_margin,
                   "delta": self.delta_margin}
        meta = {"grid": list(self.grid), "radius": self.radius, "hypotheses": self.hypotheses}
        if not self.ok:
            verdict = FAIL  # hypothesis flags stay visible in meta
        else:
            verdict = PASS if all(self.hypotheses.values()) else HYPOTHESIS_FAILED
        sample = None if self.ok else {"point": self.worst_point, "delta_max": self.delta_max}
        return CheckReport("form_bounds", verdict, margins, meta, timing, sample)


def verify_form_bounds(form: ZeroFreeForm, grid: tuple = DELTA_GRID) -> FormBoundReport:
    """Check ``|c|`` against its two-sided bound and ``|delta|`` against the
    quadratic bound on ``|z - b| <= R/16`` (``grid`` = radii x angles)."""
    R, B = form.R, form.B_used
    lo, hi = 2 - 256 * B / R, 2 + 2 * B / R
    mod_c = abs(form.c)
    n_r, n_t = grid
    radius = R / 16
    pts, h = log_branch_polar(form.g, form.b, radius, n_r, n_t)
    delta = np.abs(h - form.c * (pts - form.b))
    slack = 128 * np.abs(pts - form.b) ** 2 / R - delta
    k = int(np.argmin(slack))
    return FormBoundReport(
        c_bound_ok=bool(lo <= mod_c <= hi), c_lower_margin=mod_c - lo, c_upper_margin=hi - mod_c,
        delta_margin=float(slack.flat[k]), delta_max=float(np.max(delta)),
        worst_point=complex(pts.flat[k]), grid=(n_r, n_t), radius=radius,
        hypotheses=dict(form.hypotheses))


# ---------------------------------------------------------------------------
# growth bound for functions whose derivative is controlled on a level set


def _level_points(f: AnalyticFn, a: complex, r: float, n_r: int, n_t: int, K: float):
    """Points of ``|f| = K`` found by sign changes along rays and circles of ``D(a, r)``."""
    logK = math.log(K)
    radii = r * np.arange(1, n_r + 1) / (n_r + 1)
    th = 2 * np.pi * np.arange(n_t) / n_t
    pts = a + np.outer(radii, np.exp(1j * th))
    d = f.log_abs(pts) - logK
    found = [pts[np.abs(d) <= 1e-14 * max(1.0, abs(logK))]]

    def along_ray(k):
        return lambda rho: f.log_abs(a + rho * np.exp(1j * th[k])) - logK

    def along_circle(j):
        return lambda t: f.log_abs(a + radii[j] * np.exp(1j * t)) - logK

    sign = np.sign(d)
    js, ks = np.nonzero(sign[:-1] * sign[1:] < 0)
    for j, k in zip(js, ks):
        rho = _crossing(along_ray(k), radii[j], radii[j + 1])
        found.append(np.array([a + rho * np.exp(1j * th[k])]))
    nxt = np.roll(sign, -1, axis=1)
    js, ks = np.nonzero(sign * nxt < 0)
    for j, k in zip(js, ks):
        t = _crossing(along_circle(j), th[k], th[k] + 2 * np.pi / n_t)
        found.append(np.array([a + radii[j] * np.exp(1j * t)]))
    return np.concatenate(found)


def _crossing(fn, lo, hi):
    flo, fhi = fn(lo), fn(hi)
    if flo * fhi > 0:  # re-evaluation flipped a sign that was at rounding level
        return lo if abs(flo) <= abs(fhi) else hi
    return brentq(fn, lo, hi, xtol=1e-14)


def verify_growth_bound(f: AnalyticFn, a: complex, r: float, K: float, L: float,
                        grid: GridSpec | None = None) -> CheckReport:
    """Check ``|f(z)| < K exp(2L|z-a|/K)`` on ``D(a, r/2)`` after checking the premise
    ``|f(a)| <= K`` and ``|f'| <= L`` on the sampled level set ``|f| = K``."""
    grid = grid or GridSpec()
    a = complex(a)
    f.check_disk(Disk(a, r))
    n_r, n_t = grid.counts[0], grid.counts[-1]
    if f.log_abs(a) > math.log(K) + 1e-12:
        raise PremiseFailed(f"|f(a)| = {abs(f(a)):.6g} exceeds K = {K}")
    level = _level_points(f, a, r, n_r, n_t, K)
    fp = f.deriv()
    worst_deriv = float(np.max(np.abs(fp(level)), initial=0.0))
    if worst_deriv > L * (1 + 1e-9):
        raise PremiseFailed(f"|f'| reaches {worst_deriv:.6g} > L = {L} on the level set")

    radii = (r / 2) * np.arange(1, n_r + 1) / (n_r + 1)
    pts = a + np.outer(radii, np.exp(2j * np.pi * np.arange(n_t) / n_t)).ravel()
    log_ratio = f.log_abs(pts) - math.log(K) - (2 * L / K) * np.abs(pts - a)
    center = f.log_abs(a) - math.log(K)
    k = int(np.argmax(log_ratio))
    worst = float(log_ratio[k])
    ok = worst < 0 and center <= GROWTH_TOL
    margins = {"worst_log_ratio": worst, "center_log_ratio": center,
               "level_deriv_max": worst_deriv}
    meta = {"grid": [n_r, n_t], "r": r, "K": K, "L": L, "level_points": int(level.size)}
    sample = None if ok else {"point": complex(pts[k]), "log_ratio": worst}
    return CheckReport("growth_bound", PASS if ok else FAIL, margins, meta, None, sample)
