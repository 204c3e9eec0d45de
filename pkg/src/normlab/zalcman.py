"""Constructive rescaling-point selection with explicit disk sizes.

Given ``f`` with large spherical derivative at ``a``, :func:`find_rescaling`
walks radii ``r_k = r_{k-1} + 1/phi(H(r_{k-1}))`` until the maximum
``H`` stops growing by more than a factor ``e``, then picks the weighted
maximizer ``c`` and returns ``rho = 1/f#(c)`` and ``s = f#(c) / (3 phi(f#(c)))``.
The rescaled function ``g(z) = f(c + rho z)`` is then re-checked on a grid
against ``g#(z) <= 1 / (1 - |z|/s)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from . import analytic as an
from .analytic import AnalyticFn, Disk, GridSpec
from .errors import BoundViolated, NoStop, NormlabError

BOUND_RTOL = 1e-6
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class WeightFn:
    """Non-decreasing weight ``phi`` on ``[t0, inf)``.

    ``LogSquared`` is ``(log t)^2``, ``PowerLog`` is ``(log t)^p`` with ``p > 1``,
    ``Custom`` interpolates a table of ``(t, phi)`` pairs linearly in
    ``log t`` and extends past the last node as ``C (log t)^p``, with ``p``
    read off the last segment.
    """

    kind: str = "LogSquared"
    t0: float = 4.0
    exponent: float = 2.0
    table: tuple = ()

    def __post_init__(self):
        if self.kind not in ("LogSquared", "PowerLog", "Custom"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if not self.t0 > 1:
            raise ValueError("t0 must exceed 1")
        if self.kind == "PowerLog" and not self.exponent > 1:
            raise ValueError("PowerLog exponent must exceed 1")
        if self.kind == "Custom":
            tab = tuple((float(t), float(v)) for t, v in self.table)
            if len(tab) < 2 or tab[0][0] > self.t0 or any(
                    t2 <= t1 for (t1, _), (t2, _) in zip(tab, tab[1:])):
                raise ValueError("custom table needs >= 2 increasing nodes starting at or before t0")
            object.__setattr__(self, "table", tab)

    @property
    def power(self) -> float:
        return 2.0 if self.kind == "LogSquared" else self.exponent

    def __call__(self, t: float) -> float:
        t = float(t)
        if t < self.t0:
            raise ValueError(f"weight evaluated below t0={self.t0}: {t}")
        return self.of_log(math.log(t))

    def of_log(self, u: float) -> float:
        """``phi(exp(u))`` without forming ``exp(u)``."""
        if self.kind != "Custom":
            return u ** self.power
        ts = [math.log(p[0]) for p in self.table]
        vs = [p[1] for p in self.table]
        if u <= ts[-1]:
            return float(np.interp(u, ts, vs))
        p = math.log(vs[-1] / vs[-2]) / math.log(ts[-1] / ts[-2]) if ts[-2] > 0 else 2.0
        return vs[-1] * (u / ts[-1]) ** p

    def describe(self) -> dict:
        out = {"kind": self.kind, "t0": self.t0}
        if self.kind == "PowerLog":
            out["exponent"] = self.exponent
        if self.kind == "Custom":
            out["table"] = [list(p) for p in self.table]
        return out

    def admissibility(self, T: float = 1e12, samples: int = 400) -> "Admissibility":
        """Sampled checks of monotonicity, ``phi(t)/t -> 0`` and the convergence of
        ``int_{t0}^inf dt / (t phi(t))`` (substituting ``u = log t``)."""
        ts = np.geomspace(self.t0, T, samples)
        vals = np.array([self(t) for t in ts])
        nondecreasing = bool(np.all(np.diff(vals) >= -1e-12 * np.abs(vals[1:])))
        ratio = vals / ts
        tail = ratio[samples // 2:]
        ratio_to_zero = bool(np.all(np.diff(tail) <= 0) and tail[-1] < 1e-6)

        def integrand(u):
            return 1.0 / self.of_log(u)

        lo, hi = math.log(self.t0), math.log(T)
        kinks = [math.log(t) for t, _ in self.table if lo < math.log(t) < hi] or None
        head, head_err = integrate.quad(integrand, lo, hi, limit=200, points=kinks, epsabs=1e-13, epsrel=1e-11)
        tail_val, tail_err = integrate.quad(integrand, math.log(T), np.inf, limit=200, epsabs=1e-13, epsrel=1e-11)
        total = head + tail_val
        converged = bool(math.isfinite(total) and head_err + tail_err < 1e-8 * max(1.0, total))
        return Admissibility(nondecreasing, ratio_to_zero, total, tail_val, converged)


@dataclass(frozen=True)
class Admissibility:
    nondecreasing: bool
    ratio_to_zero: bool
    integral: float
    tail_beyond_T: float
    converged: bool

    @property
    def ok(self) -> bool:
        return self.nondecreasing and self.ratio_to_zero and self.converged


LOG_SQUARED = WeightFn()


@dataclass(frozen=True)
class RescalingCertificate:
    a: complex
    eps: float
    r: float
    b: complex
    H: float
    t: float
    c: complex
    fc: float
    rho: float
    s: float
    bound_margin: float
    iterations: tuple = ()
    weight: dict = field(default_factory=dict)
    samples: int = 0

    def invariant_violations(self) -> list[str]:
        """Re-derive the certificate's algebraic claims from the stored fields."""
        bad = []
        phi_fc = None
        try:
            phi_fc = WeightFn(**{k: (tuple(tuple(p) for p in v) if k == "table" else v)
                                 for k, v in self.weight.items()})(self.fc)
        except (TypeError, ValueError):
            bad.append("weight not reconstructible")
        if self.rho != 1.0 / self.fc:
            bad.append("rho != 1/f#(c)")
        if phi_fc is not None and self.s != self.fc / (3.0 * phi_fc):
            bad.append("s != f#(c) / (3 phi(f#(c)))")
        if abs(self.c - self.a) + self.rho * self.s > self.eps * (1 + 1e-12):
            bad.append("D(c, rho s) not inside D(a, eps)")
        if self.fc < self.H:
            bad.append("f#(c) < f#(b)")
        if abs(self.c - self.b) > (2.0 / 3.0) * self.t * (1 + 1e-12):
            bad.append("|c - b| > 2t/3")
        return bad

    def to_json(self):
        return {"a": [self.a.real, self.a.imag], "eps": self.eps, "r": self.r,
                "b": [self.b.real, self.b.imag], "H": self.H, "t": self.t,
                "c": [self.c.real, self.c.imag], "fsharp_c": self.fc, "rho": self.rho,
                "s": self.s, "bound_margin": self.bound_margin,
                "iterations": [list(it) for it in self.iterations], "weight": self.weight,
                "samples": self.samples}


def rescaled(f: AnalyticFn, c: complex, rho: float) -> AnalyticFn:
    """``z -> f(c + rho z)``."""
    return f.compose_affine(rho, c)


def _polar_points(radius: float, n_r: int, n_t: int) -> np.ndarray:
    radii = radius * np.arange(1, n_r + 1) / n_r
    th = 2 * np.pi * np.arange(n_t) / n_t
    return np.concatenate([[0j], np.outer(radii, np.exp(1j * th)).ravel()])


def rescaled_bound_margin(g: AnalyticFn, s: float, grid: GridSpec | None = None,
                          frac: float = 0.9) -> float:
    """``min (1 - g#(z)(1 - |z|/s))`` over a polar grid of ``D(0, frac*s)``."""
    grid = grid or GridSpec()
    z = _polar_points(frac * s, grid.counts[0], grid.counts[-1])
    gs = an.spherical_derivative(g, z)
    return float(np.min(1.0 - gs * (1.0 - np.abs(z) / s)))


def linear_bound_margin(g: AnalyticFn, R: float, grid: GridSpec | None = None,
                        frac: float = 0.9) -> float:
    """``min (1 + |z|/R - g#(z))`` over a polar grid of ``D(0, frac*R)``."""
    grid = grid or GridSpec()
    z = _polar_points(frac * R, grid.counts[0], grid.counts[-1])
    gs = an.spherical_derivative(g, z)
    return float(np.min(1.0 + np.abs(z) / R - gs))


def find_rescaling(f: AnalyticFn, a: complex, eps: float, phi: WeightFn = LOG_SQUARED,
                   grid: GridSpec | None = None, strict: bool = True) -> RescalingCertificate:
    """Select ``c, rho, s`` for ``f`` near ``a`` and certify the rescaled bound.

    Raises :class:`NoStop` when ``f#(a)`` is below ``phi.t0``, when
    ``phi(f#(a)) <= 2/eps`` (the radius steps could leave the disk), or when the
    radius walk leaves ``[0, eps/2)`` without the growth test succeeding.
    """
    a = complex(a)
    grid = grid or GridSpec()
    f.check_disk(Disk(a, eps))
    fs = an.spherical_fn(f)
    fa = float(fs(np.array([a]))[0])
    if fa < phi.t0:
        raise NoStop(f"f#(a) = {fa:.6g} is below t0 = {phi.t0}")
    if phi(fa) <= 2.0 / eps:
        raise NoStop(f"phi(f#(a)) = {phi(fa):.6g} <= 2/eps = {2.0 / eps:.6g}")

    def H(r):
        return an.maximize_on_disk(fs, a, r, grid)

    r = 0.0
    cur = H(0.0)
    history = [(0.0, cur.value)]
    while r < eps / 2:
        step = 1.0 / phi(cur.value)
        if r + step >= eps:
            break
        nxt = H(r + step)
        if nxt.value <= math.e * cur.value:
            break
        r, cur = r + step, nxt
        history.append((r, cur.value))
    else:
        raise NoStop(f"radius walk left [0, eps/2) after {len(history)} steps")
    if r + 1.0 / phi(cur.value) >= eps:
        raise NoStop("stopping radius does not fit inside D(a, eps)")

    b = cur.argmax
    Hb = float(fs(np.array([b]))[0])
    t = 1.0 / phi(Hb)

    def weighted(z):
        return fs(z) * (1.0 - np.abs(z - b) / t)

    c = an.maximize_on_disk(weighted, b, t, grid).argmax
    fc = float(fs(np.array([c]))[0])
    rho = 1.0 / fc
    s = fc / (3.0 * phi(fc))
    g = rescaled(f, c, rho)
    margin = rescaled_bound_margin(g, s, grid)
    cert = RescalingCertificate(a, float(eps), r, b, Hb, t, c, fc, rho, s, margin,
                                tuple(history), phi.describe(),
                                1 + grid.counts[0] * grid.counts[-1])
    if strict:
        bad = cert.invariant_violations()
        if bad:
            raise BoundViolated("; ".join(bad))
        if margin < -BOUND_RTOL:
            raise BoundViolated(f"sampled rescaled bound fails with margin {margin:.3g}")
    return cert


# ---------------------------------------------------------------------------
# sequence wrapper


@dataclass(frozen=True)
class SequenceRow:
    k: float
    xi: complex | None = None
    eps: float | None = None
    z: complex | None = None
    rho: float | None = None
    s: float | None = None
    R: float | None = None
    R_formula: float | None = None
    linear_margin: float | None = None
    rescaled_margin: float | None = None
    normalization: float | None = None
    error: str | None = None

    def to_json(self):
        def cx(v):
            return None if v is None else [v.real, v.imag]
        return {"k": self.k, "xi": cx(self.xi), "eps": self.eps, "z": cx(self.z),
                "rho": self.rho, "s": self.s, "R": self.R, "R_formula": self.R_formula,
                "linear_margin": self.linear_margin, "rescaled_margin": self.rescaled_margin,
                "normalization": self.normalization, "error": self.error}


@dataclass(frozen=True)
class SequenceRun:
    rows: tuple

    @property
    def ok_rows(self):
        return [r for r in self.rows if r.error is None]

    @property
    def R_strictly_increasing(self) -> bool:
        Rs = [r.R for r in self.ok_rows]
        return len(Rs) == len(self.rows) and all(y > x for x, y in zip(Rs, Rs[1:]))

    @property
    def R_formula_consistent(self) -> bool:
        return all(abs(r.R - r.R_formula) <= 1e-12 * r.R for r in self.ok_rows)

    def to_json(self):
        return {"rows": [r.to_json() for r in self.rows],
                "R_strictly_increasing": self.R_strictly_increasing,
                "R_formula_consistent": self.R_formula_consistent}


def default_eps_schedule(eps0: float = 2.5) -> Callable[[float], float]:
    return lambda k: eps0 / math.sqrt(k)


def run_sequence(family: Callable[[float], AnalyticFn], z0: complex, eps_schedule=None,
                 phi: WeightFn = LOG_SQUARED, ks: Sequence[float] = (10, 20, 40, 80),
                 grid: GridSpec | None = None, on_error: str = "raise") -> SequenceRun:
    """Rescale each family member near ``z0``.

    For each ``k`` the center ``xi_k`` is the maximizer of ``f_k#`` on
    ``D(z0, eps_k)``; :func:`find_rescaling` then runs with ``a = xi_k``.
    ``R_k = s_k / 2`` and ``g_k#(z) <= 1 + |z|/R_k`` is sampled on ``D(0, 0.9 R_k)``.
    """
    if on_error not in ("raise", "record"):
        raise ValueError("on_error must be 'raise' or 'record'")
    eps_schedule = eps_schedule or default_eps_schedule()
    grid = grid or GridSpec()
    rows = []
    for k in ks:
        eps = float(eps_schedule(k))
        try:
            f = family(k)
            f.check_disk(Disk(z0, 2 * eps))
            xi = an.maximize_on_disk(an.spherical_fn(f), z0, eps, grid).argmax
            cert = find_rescaling(f, xi, eps, phi, grid)
            g = rescaled(f, cert.c, cert.rho)
            R = cert.s / 2
            rows.append(SequenceRow(
                k, xi, eps, cert.c, cert.rho, cert.s, R,
                1.0 / (6.0 * cert.rho * phi(1.0 / cert.rho)),
                linear_bound_margin(g, R, grid), cert.bound_margin,
                abs(cert.rho * cert.fc - 1.0)))
        except NormlabError as exc:
            if on_error == "raise":
                raise
            rows.append(SequenceRow(k, eps=eps, error=f"{type(exc).__name__}: {exc}"))
    return SequenceRun(tuple(rows))
