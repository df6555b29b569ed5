"""Equal-level multiphase optimization on a single iteration band.

The optimal-phase condition is a coupled system: all segment-boundary success
probabilities and the tail value must share one common level.  We solve it by
level-set marching -- given a candidate level q, segments are constructed
left-to-right with two nested 1-D bisections (phase at the left boundary,
next boundary after the peak) -- wrapped in an outer bisection on q, using
that feasibility with a fixed number of phases is monotone decreasing in q.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from cmqsearch import analytic
from cmqsearch.analytic import IterationBand, PhaseAngle, iteration_band, min_point_k1, phi_min
from cmqsearch.errors import BracketError, ConfigError, DomainError, VerificationError
from cmqsearch.kernels import p_success

_MAX_BISECT = 200


@dataclass(frozen=True)
class SolverConfig:
    lambda_tol: float = 1e-12
    phase_tol: float = 1e-12
    level_tol: float = 1e-9
    grid_points: int = 10_000
    max_nk: int = 64

    def __post_init__(self):
        if min(self.lambda_tol, self.phase_tol, self.level_tol) <= 0.0:
            raise ConfigError("tolerances must be positive")
        if self.max_nk < 1:
            raise ConfigError("max_nk must be >= 1")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be >= 2")


@dataclass(frozen=True)
class PhaseSegment:
    m: int
    lo: float
    hi: float
    phi: PhaseAngle


@dataclass(frozen=True)
class PhasePlan:
    k: int
    p_cri: float
    n_k: int
    segments: tuple[PhaseSegment, ...]
    q_k_pi: float
    level_residual: float

    @property
    def phases(self) -> list[float]:
        return [s.phi.phi for s in self.segments]

    @property
    def boundaries(self) -> list[float]:
        return [self.segments[0].lo] + [s.hi for s in self.segments]

    def probability_at(self, lam: float) -> float:
        """Planned piecewise success probability (half-open segment membership)."""
        bounds = self.boundaries
        if not bounds[0] <= lam < bounds[-1]:
            raise DomainError(f"lambda {lam} outside band {self.k}")
        i = bisect_right(bounds, lam) - 1
        return p_success(self.k, self.segments[i].phi.phi, lam)


def _peak(k: int, phi: float) -> float:
    return (1.0 - math.cos(math.pi / (2 * k + 1))) / (1.0 - math.cos(phi))


def _branch_cap(k: int, a: float) -> float:
    """Largest phase whose peak is still at or right of a (peak(cap) == a)."""
    c1 = 1.0 - math.cos(math.pi / (2 * k + 1))
    r = c1 / a
    if r >= 2.0:
        return math.pi
    return math.acos(1.0 - r)


def _solve_phase(k: int, a: float, q: float, cfg: SolverConfig) -> float:
    """Smallest phase with P(a) = q on the branch where a is left of the peak.

    P(a; phi) grows from its value just above phi_min up to 1 at the branch
    cap (where the peak sits exactly on a).  If it never drops below q the
    constraint is inactive and the deepest admissible phase is returned.
    """
    lo = phi_min(k).phi + 1e-12
    hi = _branch_cap(k, a)
    if p_success(k, lo, a) >= q:
        return lo
    f_hi = p_success(k, hi, a) - q
    if f_hi < 0.0:
        raise BracketError(
            f"no sign change solving phase on band {k} at lambda={a}, level={q}"
        )
    for _ in range(_MAX_BISECT):
        if hi - lo <= cfg.phase_tol:
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if p_success(k, mid, a) - q < 0.0:
            lo = mid
        else:
            hi = mid
    return hi  # the >= q side, so the boundary value never undershoots q


def _boundary_after_peak(k: int, phi: float, q: float, hi_pt: float,
                         cfg: SolverConfig) -> float:
    """Point right of the peak where P falls back to level q."""
    lo = _peak(k, phi)
    hi = hi_pt
    if p_success(k, phi, hi_pt) >= q:  # pragma: no cover - caller checks the tail
        raise BracketError(f"curve does not fall to {q} before {hi_pt} on band {k}")
    for _ in range(_MAX_BISECT):
        if hi - lo <= cfg.lambda_tol:
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if p_success(k, phi, mid) >= q:
            lo = mid
        else:
            hi = mid
    return lo


def _tail_point(k: int, phi: float, band: IterationBand) -> float:
    """Equal-level tail checkpoint: interior minimum for k=1, band end for k>=2."""
    if k == 1:
        return min_point_k1(PhaseAngle(phi))
    return band.hi


def intersection_point(k: int, phi_hi: PhaseAngle, phi_lo: PhaseAngle,
                       cfg: SolverConfig) -> float:
    """Crossing of the phi_hi and phi_lo curves between their peaks.

    On that bracket the phi_hi curve is decreasing and the phi_lo curve
    increasing, so the difference changes sign exactly once.
    """
    if not phi_min(k).phi < phi_lo.phi < phi_hi.phi <= math.pi:
        raise DomainError(
            f"need phi_min({k}) < phi_lo < phi_hi <= pi, "
            f"got {phi_lo.phi}, {phi_hi.phi}"
        )
    lo = _peak(k, phi_hi.phi)
    hi = _peak(k, phi_lo.phi)
    if hi - lo <= cfg.lambda_tol:  # near-equal phases: peaks (and crossing) coincide
        return 0.5 * (lo + hi)

    def diff(lam: float) -> float:
        return p_success(k, phi_hi.phi, lam) - p_success(k, phi_lo.phi, lam)

    if not (diff(lo) > 0.0 > diff(hi)):
        raise BracketError(
            f"curve difference does not change sign on ({lo}, {hi}) for band {k}"
        )
    for _ in range(_MAX_BISECT):
        if hi - lo <= cfg.lambda_tol:
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if diff(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def march_level(k: int, q: float, cfg: SolverConfig
                ) -> tuple[list[float], list[float], bool]:
    """Greedy left-to-right segment construction at common level q.

    Returns (phases, boundaries, feasible).  ``boundaries`` always starts at
    the band's lower edge; when feasible it ends at the band's upper edge.
    Infeasible means the phase-count cap was reached before full coverage.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"level q must be in (0, 1), got {q}")
    band = iteration_band(k)
    a = band.lo
    phases: list[float] = []
    boundaries: list[float] = [a]
    while len(phases) < cfg.max_nk:
        phi = _solve_phase(k, a, q, cfg)
        if phases and phi >= phases[-1]:
            raise BracketError(
                f"phase ordering violated on band {k}: {phi} >= {phases[-1]}"
            )
        phases.append(phi)
        tail = _tail_point(k, phi, band)
        if p_success(k, phi, tail) >= q:
            boundaries.append(band.hi)
            return phases, boundaries, True
        a = _boundary_after_peak(k, phi, q, tail, cfg)
        boundaries.append(a)
    return phases, boundaries, False


def largest_min_success(k: int, n_k: int, cfg: SolverConfig
                        ) -> tuple[float, list[float], list[float]]:
    """Largest level achievable with exactly n_k phases on band k.

    Outer bisection on the level; feasibility of the march with at most n_k
    phases is monotone decreasing in the level.
    """
    if not 1 <= n_k <= cfg.max_nk:
        raise ConfigError(f"n_k={n_k} outside [1, max_nk={cfg.max_nk}]")

    def feasible(q: float) -> bool:
        phases, _, ok = march_level(k, q, cfg)
        return ok and len(phases) <= n_k

    lo = 0.5
    while not feasible(lo):
        lo *= 0.5
        if lo < 1e-12:  # pragma: no cover - one phase always covers some level
            raise BracketError(f"no feasible level found on band {k} with n_k={n_k}")
    hi = 1.0 - 1e-12
    if feasible(hi):
        lo = hi
    for _ in range(_MAX_BISECT):
        if hi - lo <= 0.5 * cfg.level_tol:
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    phases, boundaries, ok = march_level(k, lo, cfg)
    assert ok and len(phases) <= n_k
    # The march may cover the band with fewer phases than allowed only when
    # the level is far below Q_k(n_k); at the supremum it uses all of them.
    return lo, phases, boundaries


def optimal_phase_count(k: int, p_cri: float, cfg: SolverConfig) -> int:
    """Least phase count whose largest minimum level reaches p_cri (increment loop)."""
    if not 0.0 < p_cri < 1.0:
        raise DomainError(f"p_cri must be in (0, 1), got {p_cri}")
    n = 1
    while n <= cfg.max_nk:
        q, _, _ = largest_min_success(k, n, cfg)
        if q >= p_cri:
            return n
        n += 1
    raise ConfigError(f"p_cri={p_cri} not reachable on band {k} within max_nk={cfg.max_nk}")


def build_plan(k: int, p_cri: float, cfg: SolverConfig | None = None) -> PhasePlan:
    """Full plan for one band: phase count, phases, boundaries, achieved level."""
    cfg = cfg or SolverConfig()
    n_k = optimal_phase_count(k, p_cri, cfg)
    q, phases, boundaries = largest_min_success(k, n_k, cfg)
    segments = tuple(
        PhaseSegment(m=i + 1, lo=boundaries[i], hi=boundaries[i + 1],
                     phi=PhaseAngle(phases[i]))
        for i in range(len(phases))
    )
    plan = PhasePlan(k=k, p_cri=p_cri, n_k=len(phases), segments=segments,
                     q_k_pi=q, level_residual=_level_residual(k, phases, boundaries))
    _check_guarantee(plan, cfg)
    return plan


def _level_residual(k: int, phases: list[float], boundaries: list[float]) -> float:
    band = iteration_band(k)
    levels = [p_success(k, phases[0], boundaries[0])]
    levels += [p_success(k, phases[m], boundaries[m]) for m in range(1, len(phases))]
    levels.append(p_success(k, phases[-1], _tail_point(k, phases[-1], band)))
    return max(levels) - min(levels)


def _check_guarantee(plan: PhasePlan, cfg: SolverConfig) -> None:
    band = iteration_band(plan.k)
    n = cfg.grid_points
    step = (band.hi - band.lo) / n
    worst = min(plan.probability_at(band.lo + i * step) for i in range(n))
    if worst < plan.p_cri - cfg.level_tol:
        raise VerificationError(
            f"plan for band {plan.k} dips to {worst} < p_cri - level_tol"
        )
