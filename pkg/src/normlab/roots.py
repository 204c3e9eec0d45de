"""Argument-principle counting and localization of a-points.

Contours are sampled adaptively: an arc is bisected while either the
observed increment of ``log(f - a)`` or the first-order prediction
``|f'/(f - a)| * |dz|`` exceeds pi/4.  The second test stops fast phase
rotation from aliasing; the first catches anything the derivative misses.
The winding number is the sum of the principal phase increments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import analytic as an
from .analytic import AnalyticFn, Disk, GridSpec
from .errors import (BoundaryRoot, ClusterUnresolved, HypothesisUnchecked, NonConvergent,
                     NormlabError)

MAX_SAMPLES = 2 ** 18
ARC_LIMIT = math.pi / 4
BOUNDARY_RTOL = 1e-9
CLUSTER_RTOL = 1e-8
AXIS_TOL = 1e-8
ACCEPT_RESIDUAL = 0.25


@dataclass(frozen=True)
class RootCount:
    a: complex
    disk: Disk
    count: int
    winding_residual: float
    samples: int

    def to_json(self):
        return {"a": [self.a.real, self.a.imag], "disk": self.disk.to_json(),
                "count": self.count, "winding_residual": self.winding_residual,
                "samples": self.samples}


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int


@dataclass(frozen=True)
class RootList:
    roots: tuple
    count: int

    def locations(self):
        return [r.location for r in self.roots]

    def to_json(self):
        return {"count": self.count,
                "roots": [{"location": [r.location.real, r.location.imag],
                           "multiplicity": r.multiplicity} for r in self.roots]}


class _Shifted:
    """``F = f - a`` and ``F'`` evaluated in scaled form."""

    def __init__(self, f: AnalyticFn, a: complex):
        self.F = f - a if a != 0 else f
        self.Fp = self.F.deriv()
        self._derivs = [self.F.node, self.Fp.node]

    def derivative_node(self, k: int):
        while len(self._derivs) <= k:
            self._derivs.append(self._derivs[-1].derivative())
        return self._derivs[k]

    def cluster_radius(self, z: complex, n: int) -> float:
        """Radius estimate of an n-root cluster at ``z`` from Taylor coefficients.

        With ``F = a_n (z - r_1)...(z - r_n) + ...`` near the cluster,
        ``|a_k / a_n| <= C(n, k) delta^(n-k)``; the largest implied delta is returned.
        """
        pt = np.array([z])
        mn, sn = self.derivative_node(n).scaled(pt)
        if mn[0] == 0:
            return math.inf
        delta = 0.0
        for k in range(n):
            mk, sk = self.derivative_node(k).scaled(pt)
            if mk[0] == 0:
                continue
            log_ratio = (math.log(abs(mk[0])) + sk[0] - math.log(abs(mn[0])) - sn[0]
                         + math.lgamma(n + 1) - math.lgamma(k + 1) - math.log(math.comb(n, k)))
            delta = max(delta, math.exp(log_ratio / (n - k)))
        return delta

    def logs(self, z):
        m, s = self.F.node.scaled(z)
        dm, ds = self.Fp.node.scaled(z)
        logF = an.scaled_log_abs(m, s)
        with np.errstate(divide="ignore", invalid="ignore"):
            rate = np.exp(an.scaled_log_abs(dm, ds) - logF)
        return m, logF, rate

    def newton_step(self, z: complex, mult: int = 1) -> complex:
        """Newton step for F, or for F^(mult-1) whose root marks an n-fold cluster."""
        m, s = self.derivative_node(mult - 1).scaled(np.array([z]))
        dm, ds = self.derivative_node(mult).scaled(np.array([z]))
        if m[0] == 0:
            return 0j
        if dm[0] == 0:
            return complex("nan")
        return complex((m[0] / dm[0]) * np.exp(s[0] - ds[0]))


def _circle_curve(center: complex, r: float):
    return lambda t: center + r * np.exp(2j * np.pi * t)


def _square_curve(x0, x1, y0, y1):
    corners = np.array([complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1),
                        complex(x0, y0)])

    def curve(t):
        t = np.asarray(t, dtype=float) * 4.0
        k = np.minimum(np.floor(t).astype(int), 3)
        u = t - k
        return corners[k] + u * (corners[k + 1] - corners[k])

    return curve


def _winding(sh: _Shifted, curve, scale: float, n0: int):
    """Return (winding, residual, samples) of ``F`` along a closed curve on [0, 1)."""
    t = np.arange(n0) / n0
    z = curve(t)
    m, logF, rate = sh.logs(z)
    while True:
        ratio = 1.0 / (1.0 + scale * rate)
        if np.any(m == 0) or np.any(~np.isfinite(logF)) or np.any(ratio < BOUNDARY_RTOL):
            raise BoundaryRoot("f - a (nearly) vanishes on the contour")
        nxt = np.roll(np.arange(len(t)), -1)
        dphase = np.angle(m[nxt] / m)
        dlog = np.hypot(logF[nxt] - logF, dphase)
        dz = np.abs(z[nxt] - z)
        pred = np.maximum(rate, rate[nxt]) * dz
        flagged = np.flatnonzero((dlog > ARC_LIMIT) | (pred > ARC_LIMIT))
        if flagged.size == 0:
            break
        if len(t) + flagged.size > MAX_SAMPLES:
            raise NonConvergent(f"contour needs more than {MAX_SAMPLES} samples")
        t_end = np.where(nxt[flagged] == 0, 1.0, t[nxt[flagged]])
        t_mid = 0.5 * (t[flagged] + t_end)
        if np.any(t_mid <= t[flagged]):
            raise BoundaryRoot("contour refinement reached machine resolution")
        z_mid = curve(t_mid)
        m2, l2, r2 = sh.logs(z_mid)
        order = np.argsort(np.concatenate([t, t_mid]), kind="stable")
        t = np.concatenate([t, t_mid])[order]
        z = np.concatenate([z, z_mid])[order]
        m = np.concatenate([m, m2])[order]
        logF = np.concatenate([logF, l2])[order]
        rate = np.concatenate([rate, r2])[order]
    nxt = np.roll(np.arange(len(t)), -1)
    raw = float(np.sum(np.angle(m[nxt] / m))) / (2 * np.pi)
    w = int(round(raw))
    return w, abs(raw - w), len(t)


def count_a_points(f: AnalyticFn, a: complex, disk: Disk,
                   quadrature: GridSpec | None = None) -> RootCount:
    """Number of solutions of ``f(z) = a`` in ``disk`` counted with multiplicity."""
    a = complex(a)
    f.check_disk(disk)
    n0 = an.circle_sample_count(disk.radius, quadrature)
    w, res, n = _winding(_Shifted(f, a), _circle_curve(disk.center, disk.radius), disk.radius, n0)
    if res >= ACCEPT_RESIDUAL:
        raise NonConvergent(f"winding residual {res:.3g} too large")
    return RootCount(a, disk, w, res, n)


def _square_count(sh: _Shifted, box) -> int:
    x0, x1, y0, y1 = box
    side = max(x1 - x0, y1 - y0)
    w, res, _ = _winding(sh, _square_curve(x0, x1, y0, y1), side, 256)
    if res >= ACCEPT_RESIDUAL:
        raise NonConvergent("square winding residual too large")
    return w


def _newton(sh: _Shifted, z: complex, mult: int, box, iters: int = 60):
    """(Modified) Newton from ``z``; None if it leaves the box or stalls early."""
    x0, x1, y0, y1 = box
    pad = 1e-9 * max(x1 - x0, y1 - y0)
    accept = 1e-12
    best = math.inf
    for _ in range(iters):
        step = sh.newton_step(z, mult)
        if not np.isfinite(step):
            return None
        z = z - step
        if not (x0 - pad <= z.real <= x1 + pad and y0 - pad <= z.imag <= y1 + pad):
            return None
        scale = max(1.0, abs(z))
        best = min(best, abs(step) / scale)
        if abs(step) <= 4e-16 * scale:
            return z
    return z if best <= accept else None


def multiple_root_resolution(n: int) -> float:
    """Separation below which an n-root cluster is indistinguishable from an n-fold root.

    Rounding noise of size eps in ``f`` moves an n-fold root by about eps**(1/n).
    """
    return (64 * np.finfo(float).eps) ** (1.0 / n) if n > 1 else 0.0


_SPLITS = (0.5, 0.5 + 0.0371, 0.5 - 0.0593, 0.5 + 0.1117, 0.5 - 0.1429)


def _split(box, frac):
    x0, x1, y0, y1 = box
    xm, ym = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
    return [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]


def _isolate(sh: _Shifted, box, n: int, tol: float, cluster: float, out: list, depth: int = 0):
    if n == 0:
        return
    side = max(box[1] - box[0], box[3] - box[2])
    center = complex(0.5 * (box[0] + box[1]), 0.5 * (box[2] + box[3]))
    if n == 1:
        z = _newton(sh, center, 1, box)
        if z is not None:
            out.append(Root(z, 1))
            return
    else:
        z = _newton(sh, center, n, box)
        merge = max(tol, cluster, multiple_root_resolution(n) * max(1.0, abs(z) if z else 0.0))
        if z is not None and sh.cluster_radius(z, n) <= merge:
            probe = max(1e3 * merge, 1e-9)
            try:
                w, res, _ = _winding(sh, _circle_curve(z, probe), probe, 64)
            except (BoundaryRoot, NonConvergent):
                w = -1
            if w == n:
                out.append(Root(z, n))
                return
        if side <= 10 * max(tol, cluster, multiple_root_resolution(n)):
            raise ClusterUnresolved(f"{n} roots persist in a square of side {side:.3g}")
    if depth > 200:
        raise ClusterUnresolved("subdivision depth exhausted")
    last_exc: Exception | None = None
    for frac in _SPLITS:
        kids = _split(box, frac)
        try:
            counts = [_square_count(sh, k) for k in kids]
        except (BoundaryRoot, NonConvergent) as exc:
            last_exc = exc
            continue
        if sum(counts) != n:
            last_exc = NonConvergent(f"sub-square counts {counts} do not add up to {n}")
            continue
        for k, c in zip(kids, counts):
            _isolate(sh, k, c, tol, cluster, out, depth + 1)
        return
    raise last_exc


def _merge(roots: list[Root], cluster: float) -> list[Root]:
    merged: list[Root] = []
    for r in sorted(roots, key=lambda q: (q.location.real, q.location.imag)):
        for i, q in enumerate(merged):
            if abs(q.location - r.location) <= cluster:
                merged[i] = Root(q.location, q.multiplicity + r.multiplicity)
                break
        else:
            merged.append(r)
    return merged


def locate_a_points(f: AnalyticFn, a: complex, disk: Disk, tol: float = 1e-10) -> RootList:
    """Isolate the a-points in ``disk`` by square subdivision, then polish by Newton."""
    a = complex(a)
    total = count_a_points(f, a, disk).count
    if total == 0:
        return RootList((), 0)
    sh = _Shifted(f, a)
    cluster = CLUSTER_RTOL * disk.radius
    last_exc: Exception | None = None
    for grow in (1.0 + 1e-3 * math.pi, 1.0 + 0.0271, 1.0 + 0.0613):
        h = disk.radius * grow
        box = (disk.center.real - h, disk.center.real + h, disk.center.imag - h, disk.center.imag + h)
        try:
            n_box = _square_count(sh, box)
            found: list[Root] = []
            _isolate(sh, box, n_box, tol, cluster, found)
        except (BoundaryRoot, NonConvergent) as exc:
            last_exc = exc
            continue
        inside = [r for r in _merge(found, cluster) if abs(r.location - disk.center) < disk.radius]
        if sum(r.multiplicity for r in inside) != total:
            last_exc = NonConvergent(
                f"located multiplicities {sum(r.multiplicity for r in inside)} != count {total}")
            continue
        return RootList(tuple(inside), total)
    raise last_exc


# ---------------------------------------------------------------------------
# zero / 1-point configuration check


@dataclass(frozen=True)
class Lemma7Report:
    hypothesis_ok: bool
    n_zeros: int
    n_ones: int
    verdict: str  # Empty | OnePair | Violation
    r: float
    min_modulus: float
    zeros: tuple = field(default=())
    ones: tuple = field(default=())
    simple: bool = True

    def to_json(self):
        def pts(rs):
            return [{"location": [q.location.real, q.location.imag],
                     "multiplicity": q.multiplicity} for q in rs]
        return {"hypothesis_ok": self.hypothesis_ok, "n_zeros": self.n_zeros,
                "n_ones": self.n_ones, "verdict": self.verdict, "r": self.r,
                "min_modulus": self.min_modulus, "simple": self.simple,
                "zeros": pts(self.zeros), "ones": pts(self.ones)}


def _on_axis(roots, sign: float) -> bool:
    return all(abs(q.location.imag) <= AXIS_TOL and sign * q.location.real >= -AXIS_TOL
               for q in roots)


def verify_lemma7(f: AnalyticFn, r: float, search_radius: float = 0.999) -> Lemma7Report:
    """Check the zero/1-point conclusion for ``f`` on ``D(0, r)``.

    Hypotheses: zeros of ``f`` in the search disk are real and non-negative,
    1-points real and non-positive, and ``min_{|z|=r} |f| > 1``.  The first
    two only set ``hypothesis_ok``; a failing modulus condition raises
    :class:`HypothesisUnchecked`.
    """
    if not 0 < r < search_radius:
        raise ValueError("need 0 < r < search_radius")
    mm = an.min_modulus_on_circle(f, r)
    if not mm.value > 1:
        raise HypothesisUnchecked(f"min |f| on |z|={r} is {mm.value:.6g} <= 1")
    search = Disk(0j, search_radius)
    try:
        zeros = locate_a_points(f, 0, search)
        ones = locate_a_points(f, 1, search)
    except NormlabError as exc:
        raise HypothesisUnchecked(f"could not locate a-points: {exc}") from exc
    hyp = _on_axis(zeros.roots, 1.0) and _on_axis(ones.roots, -1.0)
    inner = Disk(0j, r)
    n0 = count_a_points(f, 0, inner).count
    n1 = count_a_points(f, 1, inner).count
    z_in = tuple(q for q in zeros.roots if abs(q.location) < r)
    o_in = tuple(q for q in ones.roots if abs(q.location) < r)
    simple = all(q.multiplicity == 1 for q in z_in + o_in)
    if (n0, n1) == (0, 0):
        verdict = "Empty"
    elif (n0, n1) == (1, 1) and simple:
        verdict = "OnePair"
    else:
        verdict = "Violation"
    return Lemma7Report(hyp, n0, n1, verdict, r, mm.value, zeros.roots, ones.roots, simple)
