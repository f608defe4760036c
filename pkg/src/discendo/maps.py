"""Analytic self-maps of the unit disc as a small expression algebra.

A map is a tree of :class:`MapExpr` nodes.  Each node knows how to

* evaluate itself and its derivative (vectorised over NumPy arrays),
* bound its image of a closed Euclidean disc by another disc, which gives
  rigorous sup-norm upper bounds, and
* expand itself in a Taylor series about an interior point when a closed
  form exists.  Anything without one (the singular inner factor inside
  :class:`Tau`) is expanded numerically through the Cauchy integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import DomainError, SingularityError
from .geometry import DiscPoint, check_disc

#: Radius of the sampling circle for numerical Taylor coefficients.
CAUCHY_RADIUS = 0.75
#: Minimum number of Cauchy samples; keeps low coefficients independent of N.
CAUCHY_MIN_SAMPLES = 1024
#: Guard radius around the boundary singularity of ``Tau``.
TAU_GUARD = 1e-12


class _NoClosedForm(Exception):
    pass


# ---------------------------------------------------------------------------
# Power series


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Truncated Maclaurin series ``sum(coeffs[k] * z**k for k <= degree)``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a power series needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return complex(out) if out.ndim == 0 else out

    def truncate(self, n: int) -> "PowerSeries":
        return PowerSeries(_fit(self.coeffs, n))

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_multiply(self, other, max(self.degree, other.degree))
        return PowerSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"PowerSeries({self.coeffs.tolist()!r})"


def _fit(c, n):
    out = np.zeros(n + 1, dtype=complex)
    m = min(n + 1, len(c))
    out[:m] = c[:m]
    return out


def _mul(a, b, n):
    return _fit(np.convolve(a[: n + 1], b[: n + 1]), n)


def series_multiply(a: PowerSeries, b: PowerSeries, n: int) -> PowerSeries:
    """Cauchy product of ``a`` and ``b`` truncated to degree ``n``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    return PowerSeries(_mul(a.coeffs, b.coeffs, n))


def _compose_series(outer, inner, n):
    # Horner in the series ring; inner must have zero constant term.
    res = np.zeros(n + 1, dtype=complex)
    for c in outer[: n + 1][::-1]:
        res = _mul(res, inner, n)
        res[0] += c
    return res


# ---------------------------------------------------------------------------
# Disc images


def _mobius_disc(a, b, c, d, z0, r):
    """Image of the closed disc D(z0, r) under w -> (a w + b) / (c w + d)."""
    q = c * z0 + d
    den = abs(q) ** 2 - abs(c) ** 2 * r * r
    if den <= 0:
        raise DomainError("disc contains the pole of the Moebius map")
    center = ((a * z0 + b) * np.conj(q) - a * np.conj(c) * r * r) / den
    radius = r * abs(a * d - b * c) / den
    return complex(center), float(radius)


def _clip(disc):
    c, r = disc
    if abs(c) + r > 1.0:
        return 0j, 1.0
    return disc


# ---------------------------------------------------------------------------
# Expression nodes


class MapExpr:
    """Base class of map expressions.  Subclasses are frozen dataclasses."""

    polynomial = False

    def __call__(self, z):
        return evaluate(self, z)

    def _value(self, z):
        raise NotImplementedError

    def _deriv(self, z):
        raise NotImplementedError

    def _image_disc(self, c, r):
        raise NotImplementedError

    def _expand(self, w0, n):
        raise _NoClosedForm

    def children(self) -> tuple["MapExpr", ...]:
        return ()

    def walk(self) -> Iterator["MapExpr"]:
        yield self
        for child in self.children():
            yield from child.walk()

    def to_text(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.to_text()

    def __mul__(self, other):
        return NotImplemented

    def __rmul__(self, s):
        return Scale(s, self)


def _num(x) -> str:
    x = complex(x)
    if x.imag == 0:
        return repr(float(x.real))
    return f"c({float(x.real)!r},{float(x.imag)!r})"


@dataclass(frozen=True)
class Identity(MapExpr):
    polynomial = True

    def _value(self, z):
        return z

    def _deriv(self, z):
        return np.ones_like(z)

    def _image_disc(self, c, r):
        return c, r

    def _expand(self, w0, n):
        return _fit(np.array([w0, 1.0]), n)

    def to_text(self):
        return "z"


@dataclass(frozen=True)
class Constant(MapExpr):
    c: DiscPoint
    polynomial = True

    def __post_init__(self):
        if not isinstance(self.c, DiscPoint):
            object.__setattr__(self, "c", DiscPoint(self.c))

    def _value(self, z):
        return np.full_like(z, self.c.value)

    def _deriv(self, z):
        return np.zeros_like(z)

    def _image_disc(self, c, r):
        return self.c.value, 0.0

    def _expand(self, w0, n):
        return _fit(np.array([self.c.value]), n)

    def to_text(self):
        v = self.c.value
        return f"c({v.real!r},{v.imag!r})"


@dataclass(frozen=True)
class Monomial(MapExpr):
    k: int
    polynomial = True

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("monomial degree must be a positive integer")
        object.__setattr__(self, "k", int(self.k))

    def _value(self, z):
        return z**self.k

    def _deriv(self, z):
        return self.k * z ** (self.k - 1)

    def _image_disc(self, c, r):
        return 0j, (abs(c) + r) ** self.k

    def _expand(self, w0, n):
        k = self.k
        return _fit(np.array([math.comb(k, j) * w0 ** (k - j) for j in range(k + 1)]), n)

    def to_text(self):
        return f"z^{self.k}"


@dataclass(frozen=True)
class Affine(MapExpr):
    """``z -> a z + b`` with ``|a| + |b| <= 1``."""

    a: complex
    b: complex
    polynomial = True

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        if abs(a) + abs(b) > 1.0 + 1e-15:
            raise DomainError("affine map needs |a| + |b| <= 1 to map the disc into itself")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def _value(self, z):
        return self.a * z + self.b

    def _deriv(self, z):
        return np.full_like(z, self.a)

    def _image_disc(self, c, r):
        return self.a * c + self.b, abs(self.a) * r

    def _expand(self, w0, n):
        return _fit(np.array([self.a * w0 + self.b, self.a]), n)

    def to_text(self):
        return f"affine({_num(self.a)},{_num(self.b)})"


@dataclass(frozen=True)
class Rotation(MapExpr):
    theta: float
    polynomial = True

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def unit(self):
        return complex(math.cos(self.theta), math.sin(self.theta))

    def _value(self, z):
        return self.unit * z

    def _deriv(self, z):
        return np.full_like(z, self.unit)

    def _image_disc(self, c, r):
        return self.unit * c, r

    def _expand(self, w0, n):
        return _fit(self.unit * np.array([w0, 1.0]), n)

    def to_text(self):
        return f"rot({self.theta!r})"


def _mobius_expand(alpha, w0, n):
    big_a = w0 + alpha
    big_c = 1.0 + np.conj(alpha) * w0
    q = -np.conj(alpha) / big_c
    out = np.empty(n + 1, dtype=complex)
    out[0] = big_a / big_c
    if n:
        powers = q ** np.arange(n + 1)
        out[1:] = (big_a * powers[1:] + powers[:-1]) / big_c
    return out


@dataclass(frozen=True)
class MoebiusMap(MapExpr):
    """``z -> (z + alpha) / (1 + conj(alpha) z)``."""

    alpha: DiscPoint

    def __post_init__(self):
        if not isinstance(self.alpha, DiscPoint):
            object.__setattr__(self, "alpha", DiscPoint(self.alpha))

    @property
    def _a(self):
        return self.alpha.value

    def _value(self, z):
        return (z + self._a) / (1.0 + np.conj(self._a) * z)

    def _deriv(self, z):
        return (1.0 - abs(self._a) ** 2) / (1.0 + np.conj(self._a) * z) ** 2

    def _image_disc(self, c, r):
        return _mobius_disc(1.0, self._a, np.conj(self._a), 1.0, c, r)

    def _expand(self, w0, n):
        return _mobius_expand(self._a, w0, n)

    def to_text(self):
        v = self._a
        if v.imag == 0:
            return f"mobius({v.real!r})"
        return f"mobius({v.real!r},{v.imag!r})"


@dataclass(frozen=True)
class MoebiusInverse(MoebiusMap):
    """``z -> (z - alpha) / (1 - conj(alpha) z)``, the inverse of :class:`MoebiusMap`."""

    @property
    def _a(self):
        return -self.alpha.value

    def to_text(self):
        v = self.alpha.value
        if v.imag == 0:
            return f"mobinv({v.real!r})"
        return f"mobinv({v.real!r},{v.imag!r})"


@dataclass(frozen=True)
class BlaschkeProduct(MapExpr):
    """Finite Blaschke product with factors ``(|a|/a) (a - z) / (1 - conj(a) z)``.

    A zero at the origin contributes the factor ``z``.
    """

    zeros: tuple

    def __post_init__(self):
        zs = tuple(z if isinstance(z, DiscPoint) else DiscPoint(z) for z in self.zeros)
        if not zs:
            raise ValueError("a Blaschke product needs at least one zero")
        object.__setattr__(self, "zeros", zs)

    @property
    def points(self) -> np.ndarray:
        return np.array([z.value for z in self.zeros], dtype=complex)

    def _factors(self, z):
        out = []
        for a in self.points:
            if a == 0:
                out.append((z, np.ones_like(z)))
            else:
                u = abs(a) / a
                den = 1.0 - np.conj(a) * z
                out.append((u * (a - z) / den, u * (abs(a) ** 2 - 1.0) / den**2))
        return out

    def _value(self, z):
        out = np.ones_like(z)
        for val, _ in self._factors(z):
            out = out * val
        return out

    def _deriv(self, z):
        factors = self._factors(z)
        vals = [v for v, _ in factors]
        prefix = [np.ones_like(z)]
        for v in vals[:-1]:
            prefix.append(prefix[-1] * v)
        out = np.zeros_like(z)
        suffix = np.ones_like(z)
        for j in range(len(vals) - 1, -1, -1):
            out = out + prefix[j] * factors[j][1] * suffix
            suffix = suffix * vals[j]
        return out

    def _image_disc(self, c, r):
        if len(self.zeros) == 1:
            a = self.points[0]
            if a == 0:
                return c, r
            u = abs(a) / a
            # u (a - w) / (1 - conj(a) w) = (-u w + u a) / (-conj(a) w + 1)
            return _mobius_disc(-u, u * a, -np.conj(a), 1.0, c, r)
        bound = 1.0
        for z in self.zeros:
            fc, fr = BlaschkeProduct((z,))._image_disc(c, r)
            bound *= min(1.0, abs(fc) + fr)
        return 0j, bound

    def _expand(self, w0, n):
        out = _fit(np.array([1.0]), n)
        for a in self.points:
            if a == 0:
                fac = _fit(np.array([w0, 1.0]), n)
            else:
                fac = -(abs(a) / a) * _mobius_expand(-a, w0, n)
            out = _mul(out, fac, n)
        return out

    def to_text(self):
        parts = []
        for z in self.zeros:
            v = z.value
            parts.append(repr(v.real) if v.imag == 0 else f"c({v.real!r},{v.imag!r})")
        return "blaschke[" + ",".join(parts) + "]"


def _tau_exponent(z):
    return (z + 1.0) / (z - 1.0)


def _cauchy_coefficients(f, n, samples=None):
    m = samples or CAUCHY_MIN_SAMPLES
    w = CAUCHY_RADIUS * np.exp(2j * np.pi * np.arange(m) / m)
    c = np.fft.fft(f(w)) / m
    return c[: n + 1] / CAUCHY_RADIUS ** np.arange(n + 1)


def tau_log10_bound(c: complex, r: float) -> float:
    """``log10`` of an upper bound for ``|Tau|`` on the closed disc D(c, r).

    Uses ``|Tau(w)| = |w| exp(-P(w)) / 2`` where ``P(w) = Re((1+w)/(1-w))``;
    the Cayley map sends D(c, r) to a disc on which ``P`` has an explicit
    minimum.  Stays finite where the bound itself underflows.
    """
    reach = abs(c) + r
    if reach >= 1.0:
        return math.log10(0.5)
    if reach == 0:
        return -math.inf
    cc, cr = _mobius_disc(1.0, 1.0, -1.0, 1.0, c, r)
    min_re = max(cc.real - cr, 0.0)
    return math.log10(0.5 * reach) - min_re / math.log(10.0)


@dataclass(frozen=True)
class Tau(MapExpr):
    """``z -> z exp((z + 1) / (z - 1)) / 2``; essential singularity at 1."""

    def _check(self, z):
        if np.any(np.abs(z - 1.0) <= TAU_GUARD):
            raise SingularityError("tau evaluated within the guard disc of its singularity at 1")

    def _value(self, z):
        self._check(z)
        return 0.5 * z * np.exp(_tau_exponent(z))

    def _deriv(self, z):
        self._check(z)
        return 0.5 * np.exp(_tau_exponent(z)) * (1.0 - 2.0 * z / (z - 1.0) ** 2)

    def _image_disc(self, c, r):
        return 0j, min(0.5, 10.0 ** tau_log10_bound(c, r))

    def _expand(self, w0, n):
        if w0 != 0:
            raise _NoClosedForm
        out = np.zeros(n + 1, dtype=complex)
        if n:
            out[1:] = 0.5 * _cauchy_coefficients(lambda w: np.exp(_tau_exponent(w)), n - 1,
                                                 _sample_count(n))
        return out

    def to_text(self):
        return "tau"


@dataclass(frozen=True)
class Scale(MapExpr):
    """``z -> s * inner(z)`` with ``|s| <= 1``."""

    s: complex
    inner: MapExpr = field(default_factory=Identity)

    def __post_init__(self):
        s = complex(self.s)
        if abs(s) > 1.0:
            raise DomainError(f"scale factor must satisfy |s| <= 1, got {s!r}")
        object.__setattr__(self, "s", s)

    @property
    def polynomial(self):
        return self.inner.polynomial

    def children(self):
        return (self.inner,)

    def _value(self, z):
        return self.s * self.inner._value(z)

    def _deriv(self, z):
        return self.s * self.inner._deriv(z)

    def _image_disc(self, c, r):
        ic, ir = _clip(self.inner._image_disc(c, r))
        return self.s * ic, abs(self.s) * ir

    def _expand(self, w0, n):
        return self.s * self.inner._expand(w0, n)

    def to_text(self):
        return f"{_num(self.s)}*{self.inner.to_text()}"


@dataclass(frozen=True)
class Compose(MapExpr):
    """``z -> outer(inner(z))``."""

    outer: MapExpr
    inner: MapExpr

    @property
    def polynomial(self):
        return self.outer.polynomial and self.inner.polynomial

    def children(self):
        return (self.outer, self.inner)

    def _value(self, z):
        return self.outer._value(self.inner._value(z))

    def _deriv(self, z):
        w = self.inner._value(z)
        return self.outer._deriv(w) * self.inner._deriv(z)

    def _image_disc(self, c, r):
        return self.outer._image_disc(*_clip(self.inner._image_disc(c, r)))

    def _expand(self, w0, n):
        g = self.inner._expand(w0, n)
        h = self.outer._expand(g[0], n)
        tail = g.copy()
        tail[0] = 0.0
        return _compose_series(h, tail, n)

    def to_text(self):
        return f"compose({self.outer.to_text()},{self.inner.to_text()})"


# ---------------------------------------------------------------------------
# Operations


def _scalar_or_array(out):
    return complex(out) if np.ndim(out) == 0 else out


def evaluate(m: MapExpr, z):
    """Value of ``m`` at the interior point(s) ``z``."""
    z = np.asarray(check_disc(z), dtype=complex)
    return _scalar_or_array(m._value(z))


def derivative(m: MapExpr, z):
    """Exact complex derivative of ``m`` at ``z`` by structural recursion."""
    z = np.asarray(check_disc(z), dtype=complex)
    return _scalar_or_array(m._deriv(z))


def _sample_count(n, oversampling=4):
    need = 4 * (n + 1) * oversampling
    return max(CAUCHY_MIN_SAMPLES, 1 << (need - 1).bit_length())


def taylor(m: MapExpr, n: int, oversampling: int = 4) -> PowerSeries:
    """Maclaurin coefficients of ``m`` up to degree ``n``.

    Closed forms are used throughout the tree when available.  Otherwise
    the coefficients come from the trapezoidal rule applied to the Cauchy
    integral on ``|z| = CAUCHY_RADIUS``; with M samples the aliasing error
    of coefficient k is of order ``CAUCHY_RADIUS**(M - k)`` and rounding is
    amplified by ``CAUCHY_RADIUS**-k``.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    try:
        return PowerSeries(m._expand(0j, n))
    except _NoClosedForm:
        pass
    return PowerSeries(_cauchy_coefficients(m._value, n, _sample_count(n, oversampling)))


def image_disc(m: MapExpr, r: float, center: complex = 0j) -> tuple[complex, float]:
    """A closed disc containing ``m(D(center, r))``."""
    if r < 0 or abs(center) + r > 1.0:
        raise DomainError("disc must lie in the closed unit disc")
    return _clip(m._image_disc(complex(center), float(r)))


def sup_bound(m: MapExpr, r: float) -> float:
    """Rigorous upper bound for ``sup |m|`` on ``|z| <= r``."""
    c, rad = image_disc(m, r)
    return min(1.0, abs(c) + rad)


def sup_norm_estimate(m: MapExpr, r: float, samples: int = 1024) -> tuple[float, float]:
    """Two-sided bounds on ``max |m(z)|`` over ``|z| <= r``.

    The lower bound is the largest sampled modulus on the circle ``|z| = r``
    (the maximum over the disc is attained there).  The upper bound adds a
    Lipschitz fill-in between neighbouring samples, using Cauchy and
    Schwarz-Pick bounds on ``|m'|``, and is capped by the structural bound
    of :func:`sup_bound`.
    """
    if not 0 < r < 1:
        raise DomainError("radius must lie in (0, 1)")
    if samples < 1:
        raise ValueError("need at least one sample")
    z = r * np.exp(2j * np.pi * np.arange(samples) / samples)
    lower = float(np.max(np.abs(evaluate(m, z))))

    outer_r = 0.5 * (1.0 + r)
    lip = min(sup_bound(m, outer_r) / (outer_r - r), sup_bound(m, 1.0) / (1.0 - r * r))
    upper = min(lower + lip * math.pi * r / samples, sup_bound(m, r))
    return lower, max(upper, lower)


def is_boundary_regular(m: MapExpr) -> bool:
    """True when ``m`` extends continuously to the closed disc (no ``Tau`` node)."""
    return not any(isinstance(node, Tau) for node in m.walk())


def geometric_zeros(n: int) -> tuple[float, ...]:
    """The zero sequence ``1 - 2**(1 - k)``, ``k = 1..n`` (first zero at 0)."""
    if n < 1:
        raise ValueError("need at least one zero")
    return tuple(1.0 - 2.0 ** (1 - k) for k in range(1, n + 1))
