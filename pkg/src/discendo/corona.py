"""Finite-stage surrogates for endomorphisms built from boundary nets.

A point ``m`` of the corona is approached by a real net ``x_k -> 1``.  At
stage ``k`` the analytic disc through ``m`` is replaced by the Moebius
shift ``a_k(z) = (z + x_k) / (1 + x_k z)``, so the symbol ``tau^ o L_m``
becomes the honest self-map ``tau o a_k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError, RangeError, TestFunctionError
from .fixed_point import compact_range_check
from .geometry import DiscPoint, MoebiusShift, _rho, check_disc, moebius_eval
from .maps import (BlaschkeProduct, Compose, MapExpr, MoebiusMap, Tau, derivative, evaluate,
                   image_disc, is_boundary_regular, sup_norm_estimate, tau_log10_bound)

#: Margin used when certifying that a tau has compact range.
RANGE_MARGIN = 1e-3

TestFunction = Union[MapExpr, Callable]


@dataclass(frozen=True)
class BoundaryNet:
    """Strictly increasing reals in (0, 1) tending to the boundary point 1."""

    stages: tuple[float, ...]

    def __post_init__(self):
        xs = tuple(float(x) for x in self.stages)
        if not xs:
            raise ValueError("a net needs at least one stage")
        if any(not 0 < x < 1 for x in xs):
            raise DomainError("net stages must lie in (0, 1)")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("net stages must be strictly increasing")
        object.__setattr__(self, "stages", xs)

    @classmethod
    def geometric(cls, K: int = 20) -> "BoundaryNet":
        """Stages ``1 - 2**-k`` for ``k = 1..K``."""
        return cls(tuple(1.0 - 2.0**-k for k in range(1, K + 1)))

    def __len__(self):
        return len(self.stages)

    def __getitem__(self, k: int) -> float:
        """Stage ``k`` counted from 1."""
        if not 1 <= k <= len(self.stages):
            raise IndexError(f"stage {k} outside 1..{len(self.stages)}")
        return self.stages[k - 1]


def lm_surrogate(net: BoundaryNet, k: int, z) -> DiscPoint:
    return moebius_eval(MoebiusShift(net[k]), z)


def _require_compact(tau: MapExpr):
    if not compact_range_check(tau, RANGE_MARGIN).is_compact:
        raise RangeError(f"{tau} does not have range in a compact subset of the disc")


def psi_stage(tau: MapExpr, net: BoundaryNet, k: int) -> MapExpr:
    """``tau o a_k``, the stage-k stand-in for ``tau^ o L_m``."""
    _require_compact(tau)
    return Compose(tau, MoebiusMap(net[k]))


@dataclass(frozen=True)
class LimitReport:
    converged: bool
    value: complex | None
    stages: tuple[complex, ...]
    tol: float


def psi_limit(tau: MapExpr, net: BoundaryNet, z, tol: float = 1e-6) -> LimitReport:
    """Stagewise values of ``tau(a_k(z))`` with a Cauchy test on the last three.

    A failed test is reported, not resolved: the limit can depend on the net.
    """
    _require_compact(tau)
    z = complex(check_disc(z))
    values = tuple(evaluate(tau, moebius_eval(MoebiusShift(x), z).value) for x in net.stages)
    tail = values[-3:]
    ok = len(tail) == 3 and all(abs(a - b) <= tol for a in tail for b in tail)
    return LimitReport(ok, values[-1] if ok else None, values, tol)


# ---------------------------------------------------------------------------
# Endomorphisms


@dataclass(frozen=True)
class CompositionInDisc:
    """``T f = f o omega``."""

    omega: MapExpr


@dataclass(frozen=True)
class RankOne:
    """``T f = f^(n) 1`` with ``n`` approached along ``net``."""

    net: BoundaryNet


@dataclass(frozen=True)
class GeneralizedComposition:
    """``T f = f^(L_m(tau(z)))`` with ``m`` approached along ``net``."""

    net: BoundaryNet
    tau: MapExpr

    def __post_init__(self):
        _require_compact(self.tau)


EndomorphismModel = Union[CompositionInDisc, RankOne, GeneralizedComposition]


def _call(f: TestFunction, w):
    if isinstance(f, MapExpr):
        return evaluate(f, w)
    return f(w)


def _check_regular(f: TestFunction):
    if isinstance(f, MapExpr) and not is_boundary_regular(f):
        raise TestFunctionError(f"{f} has no continuous extension to the boundary")


def _step(model: EndomorphismModel, w, k: int):
    """Image of ``w`` under the stage-k point map behind ``model``."""
    if isinstance(model, CompositionInDisc):
        return evaluate(model.omega, w)
    if isinstance(model, RankOne):
        return model.net[k]
    if isinstance(model, GeneralizedComposition):
        t = evaluate(model.tau, w)
        x = model.net[k]
        return (t + x) / (1 + x * t)
    raise TypeError(f"unknown endomorphism model {model!r}")


def apply_endomorphism(model: EndomorphismModel, f: TestFunction, z, k: int = 1):
    return iterate_endomorphism(model, f, z, 1, k)


def iterate_endomorphism(model: EndomorphismModel, f: TestFunction, z, p: int, k: int = 1):
    """``(T**p f)(z)`` at stage ``k``; vectorised over arrays of ``z``."""
    if p < 1:
        raise ValueError("power must be at least 1")
    if not isinstance(model, CompositionInDisc):
        _check_regular(f)
    w = check_disc(z)
    for _ in range(p):
        w = _step(model, w, k)
    if isinstance(model, RankOne) and np.ndim(z):
        w = np.full(np.shape(z), w, dtype=complex)
    return _call(f, w)


# ---------------------------------------------------------------------------
# Interpolating sequences and the two examples


@dataclass(frozen=True)
class InterpolatingSequence:
    points: tuple[complex, ...]
    delta_n: tuple[float, ...]

    @property
    def delta(self) -> float:
        return min(self.delta_n)


def interpolating_check(points, n: int | None = None) -> InterpolatingSequence:
    """Separation products ``prod_{k != j} rho(z_k, z_j)`` over the first ``n`` points."""
    pts = np.asarray(check_disc(np.asarray(points, dtype=complex)), dtype=complex).ravel()
    if n is not None:
        if not 1 <= n <= pts.size:
            raise ValueError(f"truncation {n} outside 1..{pts.size}")
        pts = pts[:n]
    rho = _rho(pts[:, None], pts[None, :])
    np.fill_diagonal(rho, 1.0)
    delta = np.prod(rho, axis=0)
    if np.any(delta == 0):
        raise ValueError("points must be distinct")
    return InterpolatingSequence(tuple(complex(p) for p in pts), tuple(float(d) for d in delta))


@dataclass(frozen=True)
class StageSup:
    x: float
    lower: float
    upper: float
    log10_upper: float


def example_a_stage(x: float, radius: float = 0.5, samples: int = 1024) -> StageSup:
    """Bounds on ``sup |tau(a_x(z))|`` over ``|z| <= radius``; ``x = 0`` gives ``tau`` itself."""
    psi = Compose(Tau(), MoebiusMap(x)) if x else Tau()
    lo, hi = sup_norm_estimate(psi, radius, samples)
    c, r = image_disc(MoebiusMap(x), radius) if x else (0j, radius)
    log_hi = min(tau_log10_bound(c, r), math.log10(hi) if hi > 0 else math.inf)
    return StageSup(float(x), lo, hi, log_hi)


def verify_example_a(net: BoundaryNet, radius: float = 0.5, samples: int = 1024) -> list[StageSup]:
    """Per-stage sup bounds of the stage symbols ``tau o a_k`` for the singular ``tau``."""
    if not 0 < radius <= 0.9:
        raise ValueError("radius must lie in (0, 0.9]")
    return [example_a_stage(x, radius, samples) for x in net.stages]


def decay_bound(x: float, radius: float) -> float:
    """Closed-form bound ``exp(-(1+x)(1-r)/((1-x)(1+r))) / 2`` for the stage sup."""
    return 0.5 * math.exp(-(1 + x) * (1 - radius) / ((1 - x) * (1 + radius)))


@dataclass(frozen=True)
class ExampleBReport:
    zeros: tuple[complex, ...]
    d: tuple[float, ...]
    delta_n: tuple[float, ...]

    @property
    def min_d(self) -> float:
        return min(self.d)


def verify_example_b(zeros, identity_tol: float = 1e-10) -> ExampleBReport:
    """``d_n = |B'(z_n)| (1 - |z_n|^2) / 2`` for the symbol ``B / 2``.

    Each ``d_n`` is the derivative at 0 of ``(B o a_n) / 2`` with ``a_n``
    the shift to the n-th zero, and must equal half the separation product
    ``delta_n``; the identity is enforced to ``identity_tol``.
    """
    pts = tuple(complex(z) for z in np.ravel(zeros))
    if not pts or pts[0] != 0:
        raise ValueError("the zero sequence must start at the origin")
    seq = interpolating_check(pts)
    B = BlaschkeProduct(pts)
    pts_arr = np.array(pts)
    d = 0.5 * np.abs(derivative(B, pts_arr)) * (1 - np.abs(pts_arr) ** 2)
    err = np.max(np.abs(d - 0.5 * np.array(seq.delta_n)))
    if err > identity_tol:
        raise ArithmeticError(f"d_n = delta_n / 2 violated by {err:.3e}")
    return ExampleBReport(pts, tuple(float(v) for v in d), seq.delta_n)
