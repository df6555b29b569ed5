"""Range classification, plan lookup, and baseline algorithm comparisons."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from cmqsearch import analytic
from cmqsearch.analytic import PhaseAngle, TargetFraction, grover_iterations, iterations_for
from cmqsearch.errors import AmbiguityError, DomainError, RangeError
from cmqsearch.kernels import p_success
from cmqsearch.optimizer import PhasePlan, SolverConfig, build_plan


@dataclass(frozen=True)
class PlanTable:
    """Plans for every band intersecting [lambda0, 1), indexed by k = 1..k_max."""

    p_cri: float
    lambda0: float
    plans: tuple[PhasePlan, ...]
    cfg: SolverConfig

    @property
    def coverage_lo(self) -> float:
        return self.plans[-1].segments[0].lo

    def plan(self, k: int) -> PhasePlan:
        if not 1 <= k <= len(self.plans):
            raise RangeError(f"no plan for band {k} (table holds 1..{len(self.plans)})")
        return self.plans[k - 1]


def build_table(p_cri: float, lambda0: float, cfg: SolverConfig | None = None) -> PlanTable:
    if not 0.0 < lambda0 < 1.0:
        raise DomainError(f"lambda0 must be in (0, 1), got {lambda0}")
    cfg = cfg or SolverConfig()
    k_max = iterations_for(TargetFraction(lambda0))
    plans = tuple(build_plan(k, p_cri, cfg) for k in range(1, k_max + 1))
    return PlanTable(p_cri=p_cri, lambda0=lambda0, plans=plans, cfg=cfg)


@dataclass(frozen=True)
class KigrQuery:
    """Either an exact lambda or a half-open range [lo, hi) that is known to
    contain it."""

    exact_lambda: float | None = None
    range: tuple[float, float] | None = None

    def __post_init__(self):
        if (self.exact_lambda is None) == (self.range is None):
            raise DomainError("provide exactly one of exact_lambda or range")
        if self.exact_lambda is not None and not 0.0 < self.exact_lambda < 1.0:
            raise DomainError(f"lambda must be in (0, 1), got {self.exact_lambda}")
        if self.range is not None:
            lo, hi = self.range
            if not 0.0 < lo < hi <= 1.0:
                raise DomainError(f"need 0 < lo < hi <= 1, got [{lo}, {hi})")


def _segment_of(table: PlanTable, lam: float) -> tuple[int, int]:
    if lam < table.coverage_lo:
        raise RangeError(
            f"lambda={lam} below table coverage [{table.coverage_lo}, 1)"
        )
    k = iterations_for(TargetFraction(lam))
    plan = table.plan(k)
    for seg in plan.segments:
        if seg.lo <= lam < seg.hi:
            return k, seg.m
    raise RangeError(f"lambda={lam} not covered by band {k} segments")  # pragma: no cover


def classify(query: KigrQuery, table: PlanTable) -> tuple[int, int]:
    """Resolve a query to the unique (band, segment) containing it.

    A range query must sit wholly inside one segment; straddling queries are
    outside the identifiable-range regime and fail loudly.
    """
    if query.exact_lambda is not None:
        return _segment_of(table, query.exact_lambda)
    lo, hi = query.range
    k, m = _segment_of(table, lo)
    seg = table.plan(k).segments[m - 1]
    if hi <= seg.hi:
        return k, m
    k2, m2 = _segment_of(table, min(hi, math.nextafter(1.0, 0.0)))
    raise AmbiguityError(
        f"range [{lo}, {hi}) straddles segment (k={k}, m={m}) "
        f"[{seg.lo}, {seg.hi}) and segment (k={k2}, m={m2})"
    )


def plan_for(lam: TargetFraction, table: PlanTable) -> tuple[int, PhaseAngle]:
    """Iteration count and phase guaranteeing P >= p_cri at this lambda."""
    k, m = _segment_of(table, lam.lam)
    return k, table.plan(k).segments[m - 1].phi


def baseline_fixed_phase(phi: PhaseAngle, lam: TargetFraction) -> int:
    """Optimal iteration count when the phase is fixed ahead of time."""
    return math.floor((math.pi / 4.0) / math.asin(math.sqrt(lam.lam) * math.sin(phi.phi / 2.0)))


def baseline_long(lam: TargetFraction) -> tuple[int, float]:
    """Minimal exact-search iteration count and its certainty phase."""
    k = math.ceil(math.pi / (4.0 * lam.theta) - 0.5)
    s = math.sin(math.pi / (4 * k + 2)) / math.sqrt(lam.lam)
    if s > 1.0:
        if s > 1.0 + 1e-12:
            raise DomainError(f"inadmissible k={k} for lambda={lam.lam}")
        s = 1.0
    return k, 2.0 * math.asin(s)


def baseline_yoder_bound(p_cri: float, lam: TargetFraction) -> int:
    """Iteration lower bound of the optimal fixed-point algorithm for P >= p_cri."""
    if not 0.0 < p_cri < 1.0:
        raise DomainError(f"p_cri must be in (0, 1), got {p_cri}")
    delta = math.sqrt(1.0 - p_cri)
    return math.ceil(math.log(2.0 / delta) / (2.0 * math.sqrt(lam.lam)) - 0.5)


def crossover_pcri() -> float:
    """Threshold above which the fixed-point bound exceeds pi/(4*sqrt(lambda)).

    Equality log(2/delta)/2 = pi/4 gives delta = 2*exp(-pi/2), i.e.
    P* = 1 - 4*exp(-pi) ~ 0.8271.
    """
    return 1.0 - 4.0 * math.exp(-math.pi)


class Relation(enum.Enum):
    EQUAL = "equal"
    PLUS_ONE = "plus_one"


def iteration_relation(lam: TargetFraction) -> Relation:
    """Whether our count matches Grover's or exceeds it by one at this lambda."""
    k = iterations_for(lam)
    split = math.sin(math.pi / (4 * k)) ** 2
    return Relation.EQUAL if lam.lam < split else Relation.PLUS_ONE


@dataclass(frozen=True)
class BaselineComparison:
    lam: float
    k_ours: int
    k_grover: int
    k_fixed: int
    k_long: int
    phi_long: float
    k_yoder_lb: int
    p_ours: float
    p_grover: float
    p_fixed: float


def compare(lam: TargetFraction, table: PlanTable, p_cri: float,
            fixed_phi: PhaseAngle) -> BaselineComparison:
    """Per-lambda iteration and probability report across all baselines."""
    k_ours, phi = plan_for(lam, table)
    k_g = grover_iterations(lam)
    k_f = baseline_fixed_phase(fixed_phi, lam)
    k_l, phi_l = baseline_long(lam)
    return BaselineComparison(
        lam=lam.lam,
        k_ours=k_ours,
        k_grover=k_g,
        k_fixed=k_f,
        k_long=k_l,
        phi_long=phi_l,
        k_yoder_lb=baseline_yoder_bound(p_cri, lam),
        p_ours=p_success(k_ours, phi.phi, lam.lam),
        p_grover=p_success(k_g, math.pi, lam.lam) if k_g > 0 else lam.lam,
        p_fixed=p_success(k_f, fixed_phi.phi, lam.lam) if k_f > 0 else lam.lam,
    )
