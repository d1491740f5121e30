"""Single-query deletion of a marked item.

The deletion step is ``S = -W I_0 W I_c``. It runs right to left: the oracle
phase on every unmarked item, a Walsh-Hadamard transform, the phase on |0>,
a second transform, then an overall sign. Both conditional phases use the
same angle ``phi``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .statevector import (
    StateVector,
    apply_global_phase,
    apply_marked_complement_phase,
    apply_walsh_hadamard,
    apply_zero_phase,
    check_qubits,
    negate,
    uniform_state,
)

# pi to long-double precision; np.pi is only good to 1e-16.
PI_LONG = np.longdouble("3.14159265358979323846264338327950288")
FIXED_PHASE = math.pi / 3


class Mode(str, enum.Enum):
    EXACT = "exact"
    FIXED = "fixed"  # phase frozen at its large-N limit pi/3


class CaseTag(str, enum.Enum):
    DELETED = "DeletedCase"
    PHASE_SHIFTED = "PhaseShiftedCase"
    IDENTITY = "IdentityCase"


def classify(k: int) -> CaseTag:
    """Outcome class of ``k`` deletion steps; depends only on k mod 3."""
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    return (CaseTag.IDENTITY, CaseTag.DELETED, CaseTag.PHASE_SHIFTED)[k % 3]


@dataclass(frozen=True)
class PhaseParameters:
    N: int
    sin_beta: float
    cos_beta: float
    phi: float
    sin_half_phi: float
    cos_half_phi: float

    @property
    def beta(self) -> float:
        return math.asin(self.sin_beta)


def _check_size(N: int) -> None:
    if N < 2:
        raise ValueError(f"database size must be >= 2, got {N}")


def matched_phase(N: int) -> PhaseParameters:
    """Phase angle that makes one deletion step exact for a database of size N.

    sin(phi/2) = 1 / (2 cos(beta)) with sin(beta) = 1/sqrt(N), so phi falls
    from pi/2 at N = 2 towards pi/3 as N grows.
    """
    _check_size(N)
    sin_half = 0.5 * math.sqrt(N / (N - 1))
    return PhaseParameters(
        N=N,
        sin_beta=math.sqrt(1 / N),
        cos_beta=math.sqrt((N - 1) / N),
        phi=2 * math.asin(sin_half),
        sin_half_phi=sin_half,
        cos_half_phi=0.5 * math.sqrt((3 * N - 4) / (N - 1)),
    )


def deletion_phase(mode: Mode, N: int, dtype=np.complex128):
    """Phase angle for ``mode``, in the real precision matching ``dtype``."""
    mode = Mode(mode)
    _check_size(N)
    if np.dtype(dtype) == np.complex128:
        return matched_phase(N).phi if mode is Mode.EXACT else FIXED_PHASE
    if mode is Mode.FIXED:
        return PI_LONG / 3
    big_n = np.longdouble(N)
    return 2 * np.arcsin(np.sqrt(big_n / (big_n - 1)) / 2)


def predicted_global_phase(k: int, phi: float) -> float:
    """Overall phase the closed forms attach to the state after ``k`` steps.

    Deleted case: (k - 1/2) phi - pi/2. Phase-shifted case: pi + k phi, the
    phase carried by the marked item. Identity case: k phi.
    """
    if k == 0:
        return 0.0
    case = classify(k)
    if case is CaseTag.DELETED:
        return (k - 0.5) * phi - math.pi / 2
    if case is CaseTag.PHASE_SHIFTED:
        return math.pi + k * phi
    return k * phi


class PhaseOracle:
    """The only component that knows the marked index.

    Each call applies I_c (a phase on every unmarked item) and counts as one
    query.
    """

    def __init__(self, tau: int):
        self._tau = tau
        self.calls = 0

    def __call__(self, state: StateVector, phi) -> StateVector:
        self.calls += 1
        return apply_marked_complement_phase(state, self._tau, phi)

    def __repr__(self):
        return f"PhaseOracle(calls={self.calls})"


def apply_deletion_step(state: StateVector, oracle: PhaseOracle | int, phi) -> StateVector:
    """One application of S = -W I_0 W I_c, in place.

    ``oracle`` is a :class:`PhaseOracle` or a bare marked index.
    """
    if not isinstance(oracle, PhaseOracle):
        oracle = PhaseOracle(oracle)
    oracle(state, phi)
    apply_walsh_hadamard(state)
    apply_zero_phase(state, phi)
    apply_walsh_hadamard(state)
    return negate(state)


@dataclass(frozen=True)
class DeletionConfig:
    n: int
    tau: int
    k: int = 1
    mode: Mode = Mode.EXACT
    normalize_global_phase: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        if not 0 <= self.tau < 1 << self.n:
            raise IndexError(f"tau out of range [0, {1 << self.n})")
        if self.k < 0:
            raise ValueError(f"iteration count must be >= 0, got {self.k}")

    @property
    def N(self) -> int:
        return 1 << self.n


@dataclass
class IterationOutcome:
    case_tag: CaseTag
    residual_marked_magnitude: float
    final_state: StateVector
    oracle_calls: int
    phi: float


def run(config: DeletionConfig, cap: int | None = None, dtype=np.complex128) -> IterationOutcome:
    """Apply ``config.k`` deletion steps to the uniform database state.

    With ``normalize_global_phase`` the phase returned by
    :func:`predicted_global_phase` is divided out at the end.
    """
    check_qubits(config.n, cap)
    state = uniform_state(config.n, cap=cap, dtype=dtype)
    phi = deletion_phase(config.mode, config.N, dtype)
    oracle = PhaseOracle(config.tau)
    for _ in range(config.k):
        apply_deletion_step(state, oracle, phi)
    if config.normalize_global_phase and config.k > 0:
        apply_global_phase(state, -predicted_global_phase(config.k, phi))
    return IterationOutcome(
        case_tag=classify(config.k),
        residual_marked_magnitude=float(abs(state.amps[config.tau])),
        final_state=state,
        oracle_calls=oracle.calls,
        phi=float(phi),
    )


def approximate_residual(N: int) -> float:
    """Marked-item magnitude left by one fixed pi/3 step: N^(-3/2)."""
    _check_size(N)
    return N ** -1.5


def classical_deletion_queries(N: int, tau_position: int) -> int:
    """Queries a linear scan spends locating the marked item before deleting it."""
    if not 0 <= tau_position < N:
        raise IndexError(f"tau out of range [0, {N})")
    queries = 0
    for i in range(N):
        queries += 1
        if i == tau_position:
            break
    return queries


def classical_average_queries(N: int) -> float:
    """Mean linear-scan cost over a uniformly placed marked item, (N + 1) / 2."""
    return (N + 1) / 2
