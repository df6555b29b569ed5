"""Closed-form success-probability layer for matched-phase amplitude amplification.

Everything here is a pure function of (k, phi, lambda).  The hot scalar
kernels live in :mod:`cmqsearch.kernels` (compiled when available); this
module adds the domain types, the extremum/range formulas, and the iteration
count rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from cmqsearch import kernels
from cmqsearch.errors import DomainError

DEFAULT_K_MAX = 10**6


@dataclass(frozen=True)
class TargetFraction:
    """Fraction lam = M/N of marked items, with theta = arcsin(sqrt(lam)) cached."""

    lam: float
    theta: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise DomainError(f"lambda must be in (0, 1), got {self.lam}")
        object.__setattr__(self, "theta", math.asin(math.sqrt(self.lam)))


@dataclass(frozen=True)
class PhaseAngle:
    """Matched phase phi, restricted to (0, pi] since P is symmetric about pi."""

    phi: float

    def __post_init__(self):
        if not 0.0 < self.phi <= math.pi:
            raise DomainError(f"phi must be in (0, pi], got {self.phi}")


@dataclass(frozen=True)
class RotationAngle:
    """Per-iteration rotation delta = arccos(1 - lam*(1 - cos(phi)))."""

    delta: float

    def __post_init__(self):
        if not 0.0 < self.delta < math.pi:
            raise DomainError(f"delta must be in (0, pi), got {self.delta}")


@dataclass(frozen=True)
class SuccessCurve:
    """The probability curve P(lam) for a fixed iteration count and phase."""

    k: int
    phi: PhaseAngle

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")

    def coefficients(self, lam: TargetFraction) -> tuple[float, float]:
        """Cosine-series coefficients (A, B) of P at this lam."""
        return kernels.p_coefficients(self.k, self.phi.phi, lam.lam)


@dataclass(frozen=True)
class IterationBand:
    """Lambda interval [lo, hi) on which exactly k iterations are optimal."""

    k: int
    lo: float
    hi: float


@dataclass(frozen=True)
class GroverAmplitudePair:
    """Amplitudes on the marked / unmarked superpositions."""

    a: complex
    b: complex


def rotation_angle(lam: TargetFraction, phi: PhaseAngle) -> RotationAngle:
    return RotationAngle(kernels.delta_angle(phi.phi, lam.lam))


def success_probability(curve: SuccessCurve, lam: TargetFraction) -> float:
    return kernels.p_success(curve.k, curve.phi.phi, lam.lam)


def success_derivative(curve: SuccessCurve, lam: TargetFraction) -> float:
    return kernels.p_derivative(curve.k, curve.phi.phi, lam.lam)


def local_maxima(k: int, phi: PhaseAngle) -> list[float]:
    """All probability-1 points of the k-iteration curve inside (0, 1), ascending."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    denom = 1.0 - math.cos(phi.phi)
    points = []
    for j in range(1, k + 1):
        lam = (1.0 - math.cos((2 * j - 1) * math.pi / (2 * k + 1))) / denom
        if lam < 1.0:
            points.append(lam)
    return points


def phi_min(k: int) -> PhaseAngle:
    """Smallest usable phase on band k; below it the curve's peak leaves the band."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    num = 2.0 - 2.0 * math.cos(math.pi / (2 * k + 1))
    den = 1.0 - math.cos(math.pi / (2 * k - 1)) if k > 1 else 2.0
    return PhaseAngle(math.acos(1.0 - num / den))


def first_max_point(k: int, phi: PhaseAngle) -> float:
    """Leftmost probability-1 point; lies inside band k iff phi > phi_min(k)."""
    if phi.phi <= phi_min(k).phi:
        raise DomainError(
            f"phi={phi.phi} <= phi_min({k})={phi_min(k).phi}: peak leaves band {k}"
        )
    return (1.0 - math.cos(math.pi / (2 * k + 1))) / (1.0 - math.cos(phi.phi))


def min_point_k1(phi: PhaseAngle) -> float:
    """Interior minimum point of the one-iteration curve on [1/4, 1)."""
    if phi.phi <= phi_min(1).phi:
        raise DomainError(f"phi={phi.phi} <= pi/3: no interior minimum in band 1")
    c = math.cos(phi.phi)
    return (5.0 - 4.0 * c) / (6.0 - 6.0 * c)


def iteration_band(k: int) -> IterationBand:
    """Band k = [sin^2(pi/(4k+2)), sin^2(pi/(4k-2))), with hi = 1 for k = 1."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    lo = math.sin(math.pi / (4 * k + 2)) ** 2
    hi = 1.0 if k == 1 else math.sin(math.pi / (4 * k - 2)) ** 2
    return IterationBand(k=k, lo=lo, hi=hi)


def _ci(x: float) -> int:
    """Closest integer, exact halves rounded down: CI(x) = k iff k-1/2 < x <= k+1/2."""
    k = math.floor(x + 0.5)
    if k == x + 0.5:
        k -= 1
    return int(k)


def iterations_for(lam: TargetFraction, k_max: int = DEFAULT_K_MAX) -> int:
    """Iteration count of the multiphase algorithm: the k with lam in band k."""
    k = _ci(math.pi / (4.0 * lam.theta))
    if k > k_max:
        raise DomainError(f"k={k} exceeds cap k_max={k_max}")
    return k


def grover_iterations(lam: TargetFraction) -> int:
    """Optimal Grover iteration count; zero for lam in [1/2, 1)."""
    return _ci(math.pi / (4.0 * lam.theta) - 0.5)
