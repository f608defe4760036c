"""Points, Moebius shifts and invariant distances in the open unit disc.

Every function here accepts either scalars (``complex``, ``float`` or
:class:`DiscPoint`) or NumPy arrays of complex values and is vectorised
over the latter.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: Largest modulus accepted for an interior point.
GUARD_RADIUS = 1.0 - 1e-14


def _as_complex(z):
    if isinstance(z, DiscPoint):
        return z.value
    if isinstance(z, np.ndarray):
        return z.astype(complex, copy=False)
    return complex(z)


def check_disc(z, name="z"):
    """Return ``z`` as complex (array), raising DomainError outside the disc."""
    z = _as_complex(z)
    mod = np.abs(z)
    if np.any(~np.isfinite(mod)) or np.any(mod > GUARD_RADIUS):
        bad = float(np.max(mod))
        raise DomainError(f"{name} must lie in the open unit disc, got modulus {bad!r}")
    return z


@dataclass(frozen=True)
class DiscPoint:
    """A complex number strictly inside the unit disc."""

    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(check_disc(complex(self.value), "value")))

    def __complex__(self):
        return self.value

    def __abs__(self):
        return abs(self.value)


@dataclass(frozen=True)
class MoebiusShift:
    """The disc automorphism ``z -> (z + alpha) / (1 + conj(alpha) z)``."""

    alpha: DiscPoint

    def __post_init__(self):
        if not isinstance(self.alpha, DiscPoint):
            object.__setattr__(self, "alpha", DiscPoint(self.alpha))

    def __call__(self, z):
        return _shift(self.alpha.value, check_disc(z))


def _shift(alpha, z):
    return (z + alpha) / (1.0 + np.conj(alpha) * z)


def _rho(z, w):
    return np.abs(z - w) / np.abs(1.0 - np.conj(w) * z)


def pseudo_distance(z, w):
    """Pseudohyperbolic distance ``|z - w| / |1 - conj(w) z|``."""
    z = check_disc(z)
    w = check_disc(w, "w")
    return _rho(z, w)


def hyperbolic_distance(z, w):
    """``atanh`` of the pseudohyperbolic distance."""
    return np.arctanh(pseudo_distance(z, w))


def same_part(z, w):
    """Interior points always share a Gleason part: this is ``rho(z, w) < 1``."""
    return bool(np.all(pseudo_distance(z, w) < 1.0))


def moebius_eval(a: MoebiusShift, z):
    z = check_disc(z)
    value = _shift(a.alpha.value, z)
    if np.ndim(value):
        return value
    return DiscPoint(value)


def moebius_derivative(a: MoebiusShift, z):
    """Derivative ``(1 - |alpha|^2) / (1 + conj(alpha) z)^2``."""
    z = check_disc(z)
    alpha = a.alpha.value
    d = (1.0 - abs(alpha) ** 2) / (1.0 + np.conj(alpha) * z) ** 2
    return d if np.ndim(d) else complex(d)


def moebius_inverse(a: MoebiusShift):
    """The inverse automorphism ``z -> (z - alpha) / (1 - conj(alpha) z)`` as a map expression."""
    from .maps import Identity, MoebiusInverse

    if a.alpha.value == 0:
        return Identity()
    return MoebiusInverse(a.alpha)
