"""Exact statevector and two-level oracles for the analytic layer.

Two independent realizations of the same dynamics:

* a 2x2 evolution in the invariant subspace spanned by the marked / unmarked
  superpositions, and
* a full 2^n-amplitude statevector with an explicit marked set, where the
  phase oracle and the zero-state reflection are applied as diagonal /
  rank-one updates (O(N) per iteration, no gate decomposition).

Global phase is kept (including the leading minus sign of the iteration) so
the closed-form amplitude can be checked verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cmqsearch.analytic import PhaseAngle, TargetFraction
from cmqsearch.errors import DomainError
from cmqsearch.kernels import delta_angle
from cmqsearch.planner import baseline_long

MAX_QUBITS = 14


def g_matrix(phi: PhaseAngle, theta: float) -> np.ndarray:
    """Matched-phase iteration matrix on the (marked, unmarked) subspace."""
    if not 0.0 < theta < math.pi / 2.0:
        raise DomainError(f"theta must be in (0, pi/2), got {theta}")
    e = np.exp(1j * phi.phi)
    s, c = math.sin(theta), math.cos(theta)
    return np.array([
        [-e * (e * s * s + c * c), (1.0 - e) * s * c],
        [e * (1.0 - e) * s * c, -e * c * c - s * s],
    ])


@dataclass(frozen=True)
class TwoLevelState:
    a: complex
    b: complex
    k: int

    @property
    def success_probability(self) -> float:
        return abs(self.a) ** 2


def evolve_two_level(k: int, phi: PhaseAngle, lam: TargetFraction) -> TwoLevelState:
    """Apply the 2x2 iteration k times to the equal-superposition start."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    g = g_matrix(phi, lam.theta)
    v = np.array([math.sin(lam.theta), math.cos(lam.theta)], dtype=complex)
    for _ in range(k):
        v = g @ v
    return TwoLevelState(a=complex(v[0]), b=complex(v[1]), k=k)


def two_level_closed_form(k: int, phi: PhaseAngle, lam: TargetFraction) -> complex:
    """Closed-form marked amplitude after k iterations, global phase included."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    d = delta_angle(phi.phi, lam.lam)
    e = np.exp(1j * phi.phi)
    pref = (math.sin(lam.theta) / math.sin(d)) * (-1.0) ** k * np.exp(1j * (k - 1) * phi.phi)
    return complex(pref * (e * math.sin((k + 1) * d) - math.sin(k * d)))


@dataclass
class Statevector:
    """2^n complex amplitudes plus the marked basis-index set."""

    n_qubits: int
    amps: np.ndarray
    marked: frozenset[int]

    @classmethod
    def uniform(cls, n_qubits: int, marked) -> "Statevector":
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise DomainError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
        n = 1 << n_qubits
        marked = frozenset(int(x) for x in marked)
        if not marked or len(marked) >= n:
            raise DomainError("marked set must be nonempty and proper")
        if any(not 0 <= x < n for x in marked):
            raise DomainError("marked index out of range")
        amps = np.full(n, 1.0 / math.sqrt(n), dtype=complex)
        return cls(n_qubits=n_qubits, amps=amps, marked=marked)

    @property
    def lam(self) -> float:
        return len(self.marked) / len(self.amps)

    def marked_probability(self) -> float:
        idx = np.fromiter(self.marked, dtype=np.intp)
        return float(np.sum(np.abs(self.amps[idx]) ** 2))

    def apply_iteration(self, phi: PhaseAngle) -> None:
        """One matched-phase iteration G = -(I - (1-e^{i phi})|psi><psi|) S_f^phi."""
        e = np.exp(1j * phi.phi)
        idx = np.fromiter(self.marked, dtype=np.intp)
        self.amps[idx] *= e                       # phase oracle on marked items
        mean = self.amps.sum() / len(self.amps)   # <psi|v> / sqrt(N)
        self.amps -= (1.0 - e) * mean             # reflection about |psi>
        self.amps *= -1.0


def statevector_run(n_qubits: int, marked, k: int, phi: PhaseAngle) -> float:
    """Marked-set probability after k exact iterations from the uniform state."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    state = Statevector.uniform(n_qubits, marked)
    for _ in range(k):
        state.apply_iteration(phi)
    return state.marked_probability()


def run_long_exact(n_qubits: int, marked) -> float:
    """Run the exact-search baseline (its own k and phase) on the statevector."""
    state = Statevector.uniform(n_qubits, marked)
    k, phi = baseline_long(TargetFraction(state.lam))
    for _ in range(k):
        state.apply_iteration(PhaseAngle(phi))
    return state.marked_probability()


def sample_measurement(state: Statevector, shots: int, seed: int) -> dict[int, int]:
    """Multinomial measurement samples; returns nonzero counts per basis index."""
    if shots < 1:
        raise DomainError(f"shots must be >= 1, got {shots}")
    probs = np.abs(state.amps) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return {int(i): int(c) for i, c in enumerate(counts) if c}
