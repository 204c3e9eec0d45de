"""Holomorphic expression trees, exact derivatives and spherical-derivative scans.

Every tree evaluates in *scaled* form ``value = m * exp(s)`` with ``m`` complex
and ``s`` real.  Exponentials contribute to ``s`` directly, so phases and
log-moduli stay available far beyond the double range; public values are
converted back only at the boundary and raise :class:`Overflow` when they do
not fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainExceeded, Overflow

_RESCALE_HI = 1e150
_RESCALE_LO = 1e-150
_TIE_RTOL = 1e-12
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"disk radius must be positive and finite, got {self.radius}")
        if not (math.isfinite(self.center.real) and math.isfinite(self.center.imag)):
            raise ValueError("disk center must be finite")

    def contains(self, z, closed: bool = True) -> bool:
        d = np.abs(np.asarray(z, dtype=complex) - self.center)
        lim = self.radius * (1.0 + 1e-12)
        return bool(np.all(d <= lim) if closed else np.all(d < self.radius))

    def contains_disk(self, other: "Disk") -> bool:
        return abs(other.center - self.center) + other.radius <= self.radius * (1.0 + 1e-12)

    def to_json(self):
        return {"center": [self.center.real, self.center.imag], "radius": self.radius}


UNIT_DISK = Disk(0j, 1.0)


@dataclass(frozen=True)
class GridSpec:
    """Sampling recipe for scans.

    ``counts`` is ``(n,)`` for circles and segments and ``(n_radii, n_angles)``
    for polar disk grids.  ``density`` scales the circle default
    ``max(256, ceil(64 * r * density))``.
    """

    kind: str = "polar-disk-grid"
    counts: tuple = (48, 96)
    refine: bool = True
    density: float = 1.0

    def __post_init__(self):
        if self.kind not in ("circle-samples", "polar-disk-grid", "segment-samples"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        counts = tuple(int(c) for c in self.counts)
        if not counts or any(c < 8 for c in counts):
            raise ValueError("grid counts must be >= 8")
        object.__setattr__(self, "counts", counts)

    def to_json(self):
        return {"kind": self.kind, "counts": list(self.counts), "refine": self.refine,
                "density": self.density}


def circle_grid(density: float = 1.0, refine: bool = True) -> GridSpec:
    return GridSpec("circle-samples", (256,), refine, density)


def circle_sample_count(r: float, grid: GridSpec | None = None) -> int:
    density = grid.density if grid is not None else 1.0
    n = max(256, math.ceil(64 * r * density))
    if grid is not None and grid.kind == "circle-samples":
        n = max(n, grid.counts[0])
    return n


# ---------------------------------------------------------------------------
# scaled arithmetic helpers


def _normalize(m, s):
    a = np.abs(m)
    bad = (a > _RESCALE_HI) | ((a < _RESCALE_LO) & (a > 0))
    if np.any(bad):
        m = np.array(m, dtype=complex, copy=True)
        s = np.array(s, dtype=float, copy=True)
        # pre-scale by a power of two so subnormal moduli divide cleanly
        pre = np.where(a[bad] < 1, 2.0 ** 600, 2.0 ** -600)
        mb, ab = m[bad] * pre, a[bad] * pre
        m[bad] = mb / ab
        s[bad] = s[bad] + np.log(ab) - np.log(pre)
    return m, s


def scaled_to_value(m, s):
    with np.errstate(over="ignore", invalid="ignore"):
        v = m * np.exp(s)
    if not np.all(np.isfinite(v)):
        raise Overflow("function value outside the double range")
    return v


def scaled_log_abs(m, s):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(m)) + s


# ---------------------------------------------------------------------------
# expression nodes


class Node:
    """Abstract expression node.  Subclasses are frozen dataclasses."""

    def scaled(self, z):  # pragma: no cover - abstract
        raise NotImplementedError

    def derivative(self) -> "Node":  # pragma: no cover - abstract
        raise NotImplementedError

    def conj_reflect(self) -> "Node":  # pragma: no cover - abstract
        """Tree of ``z -> conj(f(conj(z)))``."""
        raise NotImplementedError

    def pretty(self) -> str:  # pragma: no cover - abstract
        raise NotImplementedError

    def value(self, z):
        return scaled_to_value(*self.scaled(z))


def _fmt_real(x: float) -> str:
    return repr(float(x))


def _fmt_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return _fmt_real(c.real)
    if c.real == 0:
        return f"{_fmt_real(c.imag)}i"
    sign = "+" if c.imag >= 0 else "-"
    return f"({_fmt_real(c.real)}{sign}{_fmt_real(abs(c.imag))}i)"


def _trim(coeffs) -> tuple:
    c = [complex(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (0j,)


@dataclass(frozen=True)
class Poly(Node):
    """Polynomial with ascending coefficients ``c0 + c1 z + ...``."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (0j,)

    def is_const(self, c=None) -> bool:
        return self.degree == 0 and (c is None or self.coeffs[0] == c)

    def scaled(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.full(z.shape, self.coeffs[-1], dtype=complex)
        with np.errstate(over="ignore", invalid="ignore"):
            for c in reversed(self.coeffs[:-1]):
                acc = acc * z + c
        if not np.all(np.isfinite(acc)):
            raise Overflow("polynomial value outside the double range")
        return _normalize(acc, np.zeros(z.shape))

    def derivative(self):
        if self.degree == 0:
            return Poly((0j,))
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def conj_reflect(self):
        return Poly(tuple(c.conjugate() for c in self.coeffs))

    def pretty(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            lit = _fmt_complex(c)
            if k == 0:
                terms.append(lit)
            else:
                mono = "z" if k == 1 else f"z^{k}"
                terms.append(mono if c == 1 else f"{lit}*{mono}")
        if not terms:
            return "0"
        return terms[0] if len(terms) == 1 else "(" + " + ".join(terms) + ")"


@dataclass(frozen=True)
class Exp(Node):
    child: Node

    def scaled(self, z):
        w = self.child.value(z)
        return np.exp(1j * w.imag), np.asarray(w.real, dtype=float)

    def derivative(self):
        return make_product([self, self.child.derivative()])

    def conj_reflect(self):
        return Exp(self.child.conj_reflect())

    def pretty(self):
        return f"exp({self.child.pretty()})"


@dataclass(frozen=True)
class Sum(Node):
    children: tuple

    def scaled(self, z):
        parts = [ch.scaled(z) for ch in self.children]
        with np.errstate(divide="ignore"):
            logs = [np.where(m == 0, -np.inf, s) for m, s in parts]
        smax = np.max(np.stack(logs), axis=0)
        smax = np.where(np.isfinite(smax), smax, 0.0)
        m = np.zeros(np.shape(smax), dtype=complex)
        for (mi, si) in parts:
            with np.errstate(over="ignore", invalid="ignore"):
                m = m + np.where(mi == 0, 0, mi * np.exp(si - smax))
        return _normalize(m, smax)

    def derivative(self):
        return make_sum([ch.derivative() for ch in self.children])

    def conj_reflect(self):
        return make_sum([ch.conj_reflect() for ch in self.children])

    def pretty(self):
        return "(" + " + ".join(ch.pretty() for ch in self.children) + ")"


@dataclass(frozen=True)
class Product(Node):
    children: tuple

    def scaled(self, z):
        m, s = self.children[0].scaled(z)
        for ch in self.children[1:]:
            mi, si = ch.scaled(z)
            m, s = _normalize(m * mi, s + si)
        return m, s

    def derivative(self):
        terms = []
        for i, ch in enumerate(self.children):
            d = ch.derivative()
            if isinstance(d, Poly) and d.is_zero():
                continue
            terms.append(make_product(list(self.children[:i]) + [d] + list(self.children[i + 1:])))
        return make_sum(terms)

    def conj_reflect(self):
        return make_product([ch.conj_reflect() for ch in self.children])

    def pretty(self):
        return "*".join(f"({ch.pretty()})" if isinstance(ch, (Sum, Product)) else ch.pretty()
                        for ch in self.children)


@dataclass(frozen=True)
class AffinePrecompose(Node):
    """``z -> child(a*z + b)``."""

    child: Node
    a: complex
    b: complex

    def scaled(self, z):
        return self.child.scaled(self.a * np.asarray(z, dtype=complex) + self.b)

    def derivative(self):
        return make_product([Poly((self.a,)), make_affine(self.child.derivative(), self.a, self.b)])

    def conj_reflect(self):
        return make_affine(self.child.conj_reflect(), complex(self.a).conjugate(),
                           complex(self.b).conjugate())

    def pretty(self):
        inner = f"({_fmt_complex(self.a)}*z + {_fmt_complex(self.b)})"
        return _substitute_z(self.child.pretty(), inner)


@dataclass(frozen=True)
class ReflectSymmetrize(Node):
    """``z -> child(z) * conj(child(conj z))``; real on the real axis."""

    child: Node

    def scaled(self, z):
        z = np.asarray(z, dtype=complex)
        m1, s1 = self.child.scaled(z)
        m2, s2 = self.child.scaled(np.conj(z))
        return _normalize(m1 * np.conj(m2), s1 + s2)

    def derivative(self):
        u, du = self.child, self.child.derivative()
        return make_sum([make_product([du, u.conj_reflect()]),
                         make_product([u, du.conj_reflect()])])

    def conj_reflect(self):
        return self

    def pretty(self):
        return f"reflect({self.child.pretty()})"


def _substitute_z(text: str, inner: str) -> str:
    out = []
    for i, ch in enumerate(text):
        prev_ok = i == 0 or not (text[i - 1].isalnum() or text[i - 1] == "_")
        next_ok = i + 1 == len(text) or not (text[i + 1].isalnum() or text[i + 1] == "_")
        out.append(inner if ch == "z" and prev_ok and next_ok else ch)
    return "".join(out)


# ---------------------------------------------------------------------------
# smart constructors (light canonicalization keeps derivative trees small)


def _poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p.coeffs), len(q.coeffs))
    a = list(p.coeffs) + [0j] * (n - len(p.coeffs))
    b = list(q.coeffs) + [0j] * (n - len(q.coeffs))
    return Poly(tuple(x + y for x, y in zip(a, b)))


def _poly_mul(p: Poly, q: Poly) -> Poly:
    if p.is_const(1):
        return q
    if q.is_const(1):
        return p
    out = [0j] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, x in enumerate(p.coeffs):
        for j, y in enumerate(q.coeffs):
            out[i + j] += x * y
    return Poly(tuple(out))


def make_sum(children: Sequence[Node]) -> Node:
    flat: list[Node] = []
    for ch in children:
        flat.extend(ch.children if isinstance(ch, Sum) else [ch])
    poly = None
    rest = []
    for ch in flat:
        if isinstance(ch, Poly):
            poly = ch if poly is None else _poly_add(poly, ch)
        else:
            rest.append(ch)
    if poly is not None and not poly.is_zero():
        rest.insert(0, poly)
    if not rest:
        return Poly((0j,))
    return rest[0] if len(rest) == 1 else Sum(tuple(rest))


def make_product(children: Sequence[Node]) -> Node:
    flat: list[Node] = []
    for ch in children:
        flat.extend(ch.children if isinstance(ch, Product) else [ch])
    poly = None
    rest = []
    for ch in flat:
        if isinstance(ch, Poly):
            poly = ch if poly is None else _poly_mul(poly, ch)
        else:
            rest.append(ch)
    if poly is not None and poly.is_zero():
        return Poly((0j,))
    if poly is not None and not poly.is_const(1):
        rest.insert(0, poly)
    if not rest:
        return Poly((1 + 0j,))
    return rest[0] if len(rest) == 1 else Product(tuple(rest))


def make_affine(child: Node, a: complex, b: complex) -> Node:
    a, b = complex(a), complex(b)
    if a == 1 and b == 0:
        return child
    if isinstance(child, Poly):
        # Horner composition p(a z + b)
        lin = Poly((b, a))
        acc = Poly((child.coeffs[-1],))
        for c in reversed(child.coeffs[:-1]):
            acc = _poly_add(_poly_mul(acc, lin), Poly((c,)))
        return acc
    if isinstance(child, AffinePrecompose):
        return make_affine(child.child, child.a * a, child.a * b + child.b)
    return AffinePrecompose(child, a, b)


def is_structurally_zero_free(node: Node) -> bool:
    """True when the tree cannot vanish anywhere (exp factors, nonzero constants)."""
    if isinstance(node, Exp):
        return True
    if isinstance(node, Poly):
        return node.degree == 0 and not node.is_zero()
    if isinstance(node, Product):
        return all(is_structurally_zero_free(ch) for ch in node.children)
    if isinstance(node, (AffinePrecompose, ReflectSymmetrize)):
        if isinstance(node, AffinePrecompose) and node.a == 0:
            return not np.any(node.child.scaled(np.array([node.b]))[0] == 0)
        return is_structurally_zero_free(node.child)
    return False


# ---------------------------------------------------------------------------
# public function object


@dataclass(frozen=True)
class AnalyticFn:
    """A holomorphic function: an expression tree plus its declared domain.

    ``domain=None`` means the whole plane; every representable tree is entire,
    so the domain only restricts where callers may evaluate.
    """

    node: Node
    domain: Disk | None = None
    name: str | None = field(default=None, compare=False)

    # evaluation -----------------------------------------------------------
    def check_points(self, z):
        if self.domain is not None and not self.domain.contains(z):
            raise DomainExceeded(f"point(s) outside domain {self.domain}")

    def check_disk(self, disk: Disk):
        if self.domain is not None and not self.domain.contains_disk(disk):
            raise DomainExceeded(f"{disk} not contained in domain {self.domain}")

    def scaled(self, z):
        arr = np.asarray(z, dtype=complex)
        self.check_points(arr)
        return self.node.scaled(arr)

    def __call__(self, z):
        arr = np.asarray(z, dtype=complex)
        v = scaled_to_value(*self.scaled(arr))
        return complex(v) if arr.ndim == 0 else v

    def log_abs(self, z):
        arr = np.asarray(z, dtype=complex)
        out = scaled_log_abs(*self.scaled(arr))
        return float(out) if arr.ndim == 0 else out

    # structure --------------------------------------------------------------
    def deriv(self) -> "AnalyticFn":
        return AnalyticFn(self.node.derivative(), self.domain, None)

    def with_domain(self, domain: Disk | None) -> "AnalyticFn":
        return AnalyticFn(self.node, domain, self.name)

    def pretty(self) -> str:
        return self.node.pretty()

    def compose_affine(self, a: complex, b: complex) -> "AnalyticFn":
        """``z -> self(a z + b)`` with the domain pulled back."""
        dom = None
        if self.domain is not None:
            dom = Disk((self.domain.center - b) / a, self.domain.radius / abs(a))
        return AnalyticFn(make_affine(self.node, a, b), dom, None)

    def conj_reflect(self) -> "AnalyticFn":
        dom = None if self.domain is None else Disk(self.domain.center.conjugate(),
                                                     self.domain.radius)
        return AnalyticFn(self.node.conj_reflect(), dom, None)

    # arithmetic --------------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, AnalyticFn):
            return other.node
        return Poly((complex(other),))

    def __add__(self, other):
        return AnalyticFn(make_sum([self.node, self._lift(other)]), self.domain)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * (other if isinstance(other, AnalyticFn) else complex(other))

    def __rsub__(self, other):
        return (-1) * self + other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, other):
        return AnalyticFn(make_product([self.node, self._lift(other)]), self.domain)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are representable")
        return AnalyticFn(make_product([self.node] * n), self.domain)

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"AnalyticFn({label}{self.pretty()})"


# constructors -----------------------------------------------------------------


def polynomial(coeffs, domain: Disk | None = None) -> AnalyticFn:
    """Polynomial from ascending coefficients."""
    return AnalyticFn(Poly(tuple(coeffs)), domain)


def constant(c, domain: Disk | None = None) -> AnalyticFn:
    return polynomial([c], domain)


def identity(domain: Disk | None = None) -> AnalyticFn:
    return polynomial([0, 1], domain)


def exp(f: AnalyticFn) -> AnalyticFn:
    return AnalyticFn(Exp(f.node), f.domain)


def reflect(f: AnalyticFn) -> AnalyticFn:
    return AnalyticFn(ReflectSymmetrize(f.node), f.domain)


def affine_precompose(f: AnalyticFn, a: complex, b: complex) -> AnalyticFn:
    return f.compose_affine(a, b)


# ---------------------------------------------------------------------------
# pointwise operations


def eval_fn(f: AnalyticFn, z):
    return f(z)


def deriv(f: AnalyticFn) -> AnalyticFn:
    return f.deriv()


def _spherical_from_scaled(fm, fs, dm, ds):
    log_num = scaled_log_abs(dm, ds)
    log_f = scaled_log_abs(fm, fs)
    with np.errstate(invalid="ignore"):
        log_den = np.logaddexp(0.0, 2.0 * log_f)
    out = np.exp(log_num - log_den)
    return np.where(np.isfinite(log_num), out, 0.0)


def spherical_derivative(f: AnalyticFn, z, fprime: AnalyticFn | None = None):
    """``|f'(z)| / (1 + |f(z)|^2)``, computed in log form so huge moduli are fine."""
    arr = np.asarray(z, dtype=complex)
    fprime = fprime if fprime is not None else f.deriv()
    fm, fs = f.scaled(arr)
    dm, ds = fprime.node.scaled(arr)
    out = _spherical_from_scaled(fm, fs, dm, ds)
    return float(out) if arr.ndim == 0 else out


def spherical_fn(f: AnalyticFn) -> Callable:
    """Vectorized ``z -> f#(z)`` with the derivative tree built once."""
    fp = f.deriv()
    return lambda z: spherical_derivative(f, z, fp)


# ---------------------------------------------------------------------------
# scans


def _argmax_tiebreak(values: np.ndarray) -> int:
    vmax = np.max(values)
    if not np.isfinite(vmax):
        return int(np.argmax(values))
    thresh = vmax - _TIE_RTOL * max(abs(vmax), 1e-300)
    return int(np.flatnonzero(values >= thresh)[0])


def _golden_max(func1d: Callable[[float], float], lo: float, hi: float, iters: int = 40):
    """Golden-section search for a maximum of a scalar function on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = func1d(c), func1d(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = func1d(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = func1d(d)
    return (c, fc) if fc >= fd else (d, fd)


@dataclass(frozen=True)
class DiskMax:
    argmax: complex
    value: float
    samples: int
    refined: bool

    def __iter__(self):
        return iter((self.argmax, self.value))


def maximize_on_disk(func: Callable, a: complex, r: float, grid: GridSpec | None = None) -> DiskMax:
    """Maximize a real vectorized ``func`` over the closed disk ``|z - a| <= r``.

    Polar grid (center first, then rings outward); ties go to the lowest polar
    index.  With ``grid.refine`` one golden-section pass in radius and then in
    angle polishes the grid winner; the refined point is kept only if better.
    """
    grid = grid or GridSpec()
    n_r, n_t = grid.counts[0], grid.counts[-1]
    a = complex(a)
    if r == 0:
        v = float(np.asarray(func(np.array([a])))[0])
        return DiskMax(a, v, 1, False)
    radii = r * np.arange(1, n_r + 1) / n_r
    thetas = 2 * np.pi * np.arange(n_t) / n_t
    pts = np.concatenate([[a], (a + np.outer(radii, np.exp(1j * thetas))).ravel()])
    vals = np.asarray(func(pts), dtype=float)
    idx = _argmax_tiebreak(vals)
    best_z, best_v = complex(pts[idx]), float(vals[idx])
    if not grid.refine:
        return DiskMax(best_z, best_v, len(pts), False)

    if idx == 0:
        rho0, th0 = 0.0, 0.0
    else:
        k = idx - 1
        rho0, th0 = radii[k // n_t], thetas[k % n_t]
    dr, dt = r / n_r, 2 * np.pi / n_t

    def at(rho, th):
        return float(np.asarray(func(np.array([a + rho * np.exp(1j * th)])))[0])

    rho_lo, rho_hi = max(0.0, rho0 - dr), min(r, rho0 + dr)
    rho1, v1 = _golden_max(lambda x: at(x, th0), rho_lo, rho_hi)
    th1, v2 = th0, v1
    if rho1 > 0:
        th1, v2 = _golden_max(lambda t: at(rho1, t), th0 - dt, th0 + dt)
    cand = a + rho1 * np.exp(1j * th1)
    if v2 > best_v + _TIE_RTOL * abs(best_v):
        return DiskMax(complex(cand), v2, len(pts), True)
    return DiskMax(best_z, best_v, len(pts), True)


def max_spherical_on_disk(f: AnalyticFn, a: complex, r: float,
                          grid: GridSpec | None = None) -> DiskMax:
    """Grid approximation of ``H(r) = max_{|z-a| <= r} f#(z)``."""
    f.check_disk(Disk(a, max(r, 1e-300)))
    return maximize_on_disk(spherical_fn(f), a, r, grid)


@dataclass(frozen=True)
class CircleExtremum:
    value: float
    point: complex
    samples: int
    refined: bool

    def to_json(self):
        return {"value": self.value, "point": [self.point.real, self.point.imag],
                "samples": self.samples, "refined": self.refined}


def _circle_scan(f: AnalyticFn, r: float, center: complex, grid: GridSpec | None, sign: float):
    center = complex(center)
    f.check_disk(Disk(center, r))
    n = circle_sample_count(r, grid)
    th = 2 * np.pi * np.arange(n) / n
    logs = f.log_abs(center + r * np.exp(1j * th))
    score = sign * logs
    idx = _argmax_tiebreak(np.where(np.isnan(score), -np.inf, score))
    best_t, best_s = th[idx], score[idx]
    refine = grid.refine if grid is not None else True
    if refine and np.isfinite(best_s):
        dt = 2 * np.pi / n
        t1, s1 = _golden_max(lambda t: sign * f.log_abs(center + r * np.exp(1j * t)),
                             best_t - dt, best_t + dt)
        if s1 > best_s + _TIE_RTOL * max(abs(best_s), 1.0):
            best_t, best_s = t1, s1
    logv = sign * best_s
    with np.errstate(over="ignore"):
        value = float(np.exp(logv))
    if not math.isfinite(value):
        raise Overflow("modulus extremum outside the double range")
    return CircleExtremum(value, complex(center + r * np.exp(1j * best_t)), n, bool(refine))


def max_modulus_on_circle(f: AnalyticFn, r: float, center: complex = 0j,
                          grid: GridSpec | None = None) -> CircleExtremum:
    """``M(r, f) = max_{|z - center| = r} |f(z)|`` by sampling plus golden refinement."""
    return _circle_scan(f, r, center, grid, 1.0)


def min_modulus_on_circle(f: AnalyticFn, r: float, center: complex = 0j,
                          grid: GridSpec | None = None) -> CircleExtremum:
    return _circle_scan(f, r, center, grid, -1.0)
