"""Interior fixed points of strict self-maps and the compact-range test."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .geometry import GUARD_RADIUS, DiscPoint
from .maps import MapExpr, derivative, evaluate, sup_norm_estimate

#: Radius at which the range of a map is probed.
PROBE_RADIUS = 1.0 - 1e-6
#: Picard steps shorter than this hand over to Newton's method.
NEWTON_SWITCH = 1e-4


class RangeVerdict(enum.Enum):
    COMPACT = "compact"
    NOT_COMPACT = "not_compact"
    INCONCLUSIVE = "inconclusive"

    @property
    def is_compact(self) -> bool:
        return self is RangeVerdict.COMPACT


@dataclass(frozen=True)
class RangeReport:
    verdict: RangeVerdict
    lower: float
    upper: float
    threshold: float


def range_report(m: MapExpr, margin: float, samples: int = 1024) -> RangeReport:
    if not 0 < margin < 1:
        raise ValueError("margin must lie in (0, 1)")
    lower, upper = sup_norm_estimate(m, PROBE_RADIUS, samples)
    threshold = 1.0 - margin
    if upper <= threshold:
        verdict = RangeVerdict.COMPACT
    elif lower > threshold:
        verdict = RangeVerdict.NOT_COMPACT
    else:
        verdict = RangeVerdict.INCONCLUSIVE
    return RangeReport(verdict, lower, upper, threshold)


def compact_range_check(m: MapExpr, margin: float, samples: int = 1024) -> RangeVerdict:
    """Decide whether the range of ``m`` sits inside ``|w| <= 1 - margin``.

    Returns ``INCONCLUSIVE`` when the sampled lower bound and the rigorous
    upper bound straddle the threshold.
    """
    return range_report(m, margin, samples).verdict


@dataclass(frozen=True)
class FixedPointResult:
    z0: DiscPoint
    multiplier: complex
    residual: float
    iterations: int


def find_fixed_point(m: MapExpr, tol: float = 1e-12, max_iter: int = 100_000,
                     start: complex = 0j, polish: bool = True) -> FixedPointResult:
    """Fixed point of ``m`` by Picard iteration, finished with Newton steps.

    The map must send the disc into a compact subset of itself; then the
    iteration contracts the hyperbolic metric and converges from any seed.
    Automorphisms and maps whose iterates drift to the boundary raise
    :class:`ConvergenceError`.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    z = complex(start)
    newton = False
    for it in range(1, max_iter + 1):
        try:
            fz = evaluate(m, z)
        except DomainError as exc:
            raise ConvergenceError(f"iterates left the disc after {it - 1} steps") from exc
        step = fz - z
        # the hyperbolic test rejects iterates creeping towards a boundary fixed point
        if abs(step) <= tol and abs(step) <= math.sqrt(tol) * abs(1 - z.conjugate() * fz):
            return FixedPointResult(DiscPoint(z), derivative(m, z), abs(step), it)
        znew = fz
        if polish and (newton or abs(step) < NEWTON_SWITCH):
            newton = True
            slope = derivative(m, z) - 1.0
            if slope != 0:
                trial = z - step / slope
                # keep the Newton step only if it lowers the residual
                if abs(trial) < GUARD_RADIUS and abs(evaluate(m, trial) - trial) < abs(step):
                    znew = trial
        if not abs(znew) <= GUARD_RADIUS:
            raise ConvergenceError(f"iterates reached the boundary after {it} steps")
        z = znew
    raise ConvergenceError(f"no fixed point within {max_iter} iterations (residual {abs(step):.3e})")


def multiplier_bound(m: MapExpr, z0) -> float:
    """Schwarz-Pick bound ``(1 - |m(z0)|^2) / (1 - |z0|^2)`` on ``|m'(z0)|``."""
    z0 = complex(z0)
    return float((1 - abs(evaluate(m, z0)) ** 2) / (1 - abs(z0) ** 2))


def seeds(count: int, rng: np.random.Generator, radius: float = 0.95) -> np.ndarray:
    """Uniform random interior starting points."""
    r = radius * np.sqrt(rng.random(count))
    return r * np.exp(2j * np.pi * rng.random(count))
