"""Spectra of composition operators: predicted sets and finite sections.

The predicted spectrum of a compact composition operator with symbol
``psi`` is ``{psi'(z0)**n : n >= 1} | {0, 1}`` where ``z0`` is the
interior fixed point.  Finite sections are built on the monomial basis:
column ``k`` of the matrix holds the Taylor coefficients of ``psi**k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .geometry import DiscPoint
from .maps import Compose, MapExpr, MoebiusInverse, MoebiusMap, evaluate, taylor


@dataclass(frozen=True)
class SpectrumSet:
    multiplier: complex
    n_max: int
    eps: float
    geometric: tuple[complex, ...]

    @property
    def points(self) -> tuple[complex, ...]:
        """``1``, the geometric points by decreasing modulus, then ``0``."""
        return (1 + 0j,) + self.geometric + (0j,)

    @property
    def nonzero(self) -> tuple[complex, ...]:
        return (1 + 0j,) + self.geometric


def theoretical_spectrum(mu: complex, n_max: int = 16, eps: float = 0.0) -> SpectrumSet:
    """Predicted spectrum for multiplier ``mu``.

    Powers ``mu**n`` for ``1 <= n <= n_max`` are kept while ``|mu**n| >= eps``;
    powers that vanish coincide with the point 0 and are not repeated.
    """
    mu = complex(mu)
    if not abs(mu) < 1:
        raise DomainError("the multiplier of a compact composition operator has modulus < 1")
    geo = []
    p = 1 + 0j
    for _ in range(n_max):
        p = p * mu
        if p == 0 or abs(p) < eps:
            break
        geo.append(p)
    return SpectrumSet(mu, n_max, eps, tuple(geo))


@dataclass(frozen=True, eq=False)
class CompositionMatrix:
    """``entries[j, k]`` is the coefficient of ``z**j`` in ``psi(z)**k``."""

    entries: np.ndarray

    @property
    def N(self) -> int:
        return self.entries.shape[0]


def build_truncation(m: MapExpr, N: int) -> CompositionMatrix:
    if N < 1:
        raise ValueError("dimension must be at least 1")
    base = taylor(m, N - 1).coeffs
    out = np.zeros((N, N), dtype=complex)
    col = np.zeros(N, dtype=complex)
    col[0] = 1.0
    for k in range(N):
        out[:, k] = col
        col = np.convolve(col, base)[:N]
    return CompositionMatrix(out)


def _sort_key(v):
    # arguments in [0, 2pi), with rounding noise and signed zeros folded onto 0
    arg = float(np.angle(v))
    if arg < -1e-12:
        arg += 2 * np.pi
    return (-round(abs(v), 12), max(arg, 0.0))


def _order(values):
    values = np.asarray(values, dtype=complex)
    idx = sorted(range(values.size), key=lambda i: _sort_key(values[i]))
    return values[idx]


def eigenvalues(M) -> np.ndarray:
    """Eigenvalues with multiplicity, ordered by decreasing modulus then argument."""
    a = M.entries if isinstance(M, CompositionMatrix) else np.asarray(M, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("need a square matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return _order(vals)


def match_multisets(a, b) -> list[tuple[complex, complex, float]]:
    """Greedy pairing: each element of ``a`` (largest first) takes its nearest unused partner in ``b``."""
    a = _order(a)
    pool = list(np.asarray(b, dtype=complex))
    pairs = []
    for x in a:
        if not pool:
            break
        j = int(np.argmin([abs(x - y) for y in pool]))
        y = pool.pop(j)
        pairs.append((complex(x), complex(y), float(abs(x - y))))
    return pairs


@dataclass(frozen=True)
class SpectrumComparison:
    k: int
    pairs: tuple[tuple[complex, complex, float], ...]
    max_distance: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_distance <= self.tol


def compare_spectra(computed, predicted: SpectrumSet, k: int = 8, tol: float = 1e-6) -> SpectrumComparison:
    """Match the top ``k`` predicted nonzero points against the top ``k`` computed ones."""
    computed = _order(computed)
    targets = predicted.nonzero
    if k < 1 or k > len(targets) or k > computed.size:
        raise ValueError(f"k={k} exceeds the available points "
                         f"({len(targets)} predicted, {computed.size} computed)")
    pairs = match_multisets(targets[:k], computed[:k])
    return SpectrumComparison(k, tuple(pairs), max(p[2] for p in pairs), tol)


def conjugate_to_origin(m: MapExpr, z0) -> MapExpr:
    """``a^-1 o m o a`` with ``a`` the shift taking 0 to ``z0``; fixes the origin."""
    z0 = z0 if isinstance(z0, DiscPoint) else DiscPoint(z0)
    if abs(evaluate(m, z0.value) - z0.value) > 1e-8:
        raise ValueError("z0 is not a fixed point of the map")
    if z0.value == 0:
        return m
    return Compose(MoebiusInverse(z0), Compose(m, MoebiusMap(z0)))


def ab_ba_check(A, B, tol: float = 1e-8) -> bool:
    """Nonzero eigenvalues of ``AB`` and ``BA`` agree as multisets within ``tol``."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A and B must be square matrices of the same size")
    ab = eigenvalues(A @ B)
    ba = eigenvalues(B @ A)
    ab = ab[np.abs(ab) > tol]
    ba = ba[np.abs(ba) > tol]
    if ab.size != ba.size:
        return False
    return all(d <= tol for _, _, d in match_multisets(ab, ba))
