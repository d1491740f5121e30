"""Closed-form two-level model of the deletion step.

Starting from the uniform state, the register never leaves the plane spanned
by ``|c>`` (the normalized uniform superposition of the unmarked items) and
``|tau>`` (the marked item). Every 2x2 matrix here uses the basis order
``(|c>, |tau>)``. These formulas are the oracle the statevector simulation is
checked against, so they do not call into it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .deletion import FIXED_PHASE, CaseTag, Mode, classify, matched_phase
from .statevector import StateVector, check_qubits

SQRT3_2 = math.sqrt(3) / 2

# sin and cos of k*pi/3 for k mod 6, written out exactly
_SIN_TABLE = (0.0, SQRT3_2, SQRT3_2, 0.0, -SQRT3_2, -SQRT3_2)
_COS_TABLE = (1.0, 0.5, -0.5, -1.0, -0.5, 0.5)


@dataclass(frozen=True)
class TwoDState:
    a_c: complex
    a_tau: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.a_c, self.a_tau], dtype=complex)

    @classmethod
    def from_array(cls, vec) -> TwoDState:
        return cls(complex(vec[0]), complex(vec[1]))

    def norm(self) -> float:
        return math.hypot(abs(self.a_c), abs(self.a_tau))


def initial_state(N: int) -> TwoDState:
    """The uniform database state, cos(beta)|c> + sin(beta)|tau>."""
    return TwoDState(math.sqrt((N - 1) / N), math.sqrt(1 / N))


def s_matrix(N: int, phi: float) -> np.ndarray:
    """The deletion operator restricted to the (|c>, |tau>) plane."""
    if N < 2:
        raise ValueError(f"database size must be >= 2, got {N}")
    sb = math.sqrt(1 / N)
    cb = math.sqrt((N - 1) / N)
    e = cmath.exp(1j * phi)
    return np.array(
        [
            [-e * (1 + (e - 1) * cb * cb), -(e - 1) * sb * cb],
            [-e * (e - 1) * sb * cb, -e + (e - 1) * cb * cb],
        ]
    )


@dataclass(frozen=True)
class SpectralDecomposition:
    U: np.ndarray
    eigenvalues: np.ndarray  # column j of U pairs with eigenvalues[j]
    beta_prime: float
    R: float

    @property
    def Lambda(self) -> np.ndarray:
        return np.diag(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        return self.U @ self.Lambda @ self.U.conj().T

    def power(self, k: int) -> np.ndarray:
        return self.U @ np.diag(self.eigenvalues**k) @ self.U.conj().T


def spectral_decompose(N: int, phi: float) -> SpectralDecomposition:
    """S = U diag(-e^{i(phi + 2b')}, -e^{i(phi - 2b')}) U^dagger.

    b' = arcsin(sin(phi/2) cos(beta)). With the matched phase b' is pi/6 for
    every N. R normalizes the columns of U:
    R = sin^2(beta) + (cos(phi/2) cos(beta) + cos(b'))^2.
    """
    if N < 2:
        raise ValueError(f"database size must be >= 2, got {N}")
    sb = math.sqrt(1 / N)
    cb = math.sqrt((N - 1) / N)
    beta_prime = math.asin(math.sin(phi / 2) * cb)
    a = math.cos(phi / 2) * cb + math.cos(beta_prime)
    R = sb * sb + a * a
    U = np.array(
        [
            [cmath.exp(-0.5j * phi) * a, -sb],
            [sb, cmath.exp(0.5j * phi) * a],
        ]
    ) / math.sqrt(R)
    eigenvalues = np.array(
        [-cmath.exp(1j * (phi + 2 * beta_prime)), -cmath.exp(1j * (phi - 2 * beta_prime))]
    )
    return SpectralDecomposition(U, eigenvalues, beta_prime, R)


def trig_values(k: int) -> tuple[float, float]:
    """(sin(k pi/3), cos(k pi/3)) from the exact period-6 table."""
    return _SIN_TABLE[k % 6], _COS_TABLE[k % 6]


class TrigRow(NamedTuple):
    k: int
    sin_theta: float
    cos_theta: float
    alt_sin_theta: float  # (-1)^k sin(theta)
    alt_cos_theta: float  # (-1)^k cos(theta)


def trig_period_table(k_max: int) -> list[TrigRow]:
    """Rows for k = 1..k_max with theta = k pi/3."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    rows = []
    for k in range(1, k_max + 1):
        s, c = trig_values(k)
        sign = -1.0 if k % 2 else 1.0
        # 0.0 * -1 would print as -0.0
        rows.append(TrigRow(k, s, c, sign * s + 0.0, sign * c + 0.0))
    return rows


def s_power(N: int, k: int) -> np.ndarray:
    """Closed form of S^k at the matched phase, theta = k pi/3."""
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    phi = matched_phase(N).phi
    s, c = trig_values(k)
    r_diag = math.sqrt((3 * N - 4) / (3 * N))
    r_re = math.sqrt(1 / (3 * (N - 1)))
    r_im = math.sqrt((3 * N - 4) / (3 * N * (N - 1)))
    prefactor = (-1) ** k * cmath.exp(1j * k * phi)
    return prefactor * np.array(
        [
            [c + 1j * s * r_diag, s * r_re + 1j * s * r_im],
            [-s * r_re + 1j * s * r_im, c - 1j * s * r_diag],
        ]
    )


def approximate_s_matrix(N: int) -> np.ndarray:
    """S with both phases frozen at pi/3, in the simplified closed form."""
    if N < 2:
        raise ValueError(f"database size must be >= 2, got {N}")
    root3 = math.sqrt(3)
    return np.array(
        [
            [(N - 2) / (2 * N) - 0.5j * root3, math.sqrt(N - 1) / (2 * N) - 1j * math.sqrt(3 * (N - 1)) / (2 * N)],
            [math.sqrt(N - 1) / N, (1 - 2 * N) / (2 * N) - 1j * root3 / (2 * N)],
        ]
    )


def predict_final(N: int, k: int, mode: Mode = Mode.EXACT) -> tuple[TwoDState, CaseTag]:
    """Predicted plane state after ``k`` steps from the uniform state.

    Exact mode uses the per-case closed forms. Fixed mode has none, so it
    applies :func:`approximate_s_matrix` ``k`` times.
    """
    mode = Mode(mode)
    case = classify(k)
    start = initial_state(N)
    if k == 0:
        return start, case
    if mode is Mode.FIXED:
        vec = np.linalg.matrix_power(approximate_s_matrix(N), k) @ start.as_array()
        return TwoDState.from_array(vec), case

    phi = matched_phase(N).phi
    if case is CaseTag.DELETED:
        return TwoDState(cmath.exp(1j * ((k - 0.5) * phi - math.pi / 2)), 0j), case
    if case is CaseTag.PHASE_SHIFTED:
        # unmarked part lags the marked item by phi
        return (
            TwoDState(
                cmath.exp(1j * (math.pi + (k - 1) * phi)) * start.a_c,
                cmath.exp(1j * (math.pi + k * phi)) * start.a_tau,
            ),
            case,
        )
    g = cmath.exp(1j * k * phi)
    return TwoDState(g * start.a_c, g * start.a_tau), case


def lift_to_full(two_d: TwoDState, tau: int, n: int, cap: int | None = None) -> StateVector:
    """Embed a plane state in the full register: amp[tau] = a_tau, others a_c/sqrt(N-1)."""
    check_qubits(n, cap)
    N = 1 << n
    if not 0 <= tau < N:
        raise IndexError(f"tau out of range [0, {N})")
    if abs(two_d.norm() - 1) > 1e-12:
        raise ValueError(f"plane state is not normalized (norm {two_d.norm()!r})")
    amps = np.full(N, two_d.a_c / math.sqrt(N - 1), dtype=complex)
    amps[tau] = two_d.a_tau
    return StateVector(n, amps)


def project_to_plane(state: StateVector, tau: int) -> TwoDState:
    """Components of ``state`` along |c> and |tau>."""
    N = state.size
    if not 0 <= tau < N:
        raise IndexError(f"tau out of range [0, {N})")
    a_tau = complex(state.amps[tau])
    a_c = (complex(state.amps.sum()) - a_tau) / math.sqrt(N - 1)
    return TwoDState(a_c, a_tau)


def fixed_phase_matrix(N: int) -> np.ndarray:
    """s_matrix at phi = pi/3, the unsimplified form of approximate_s_matrix."""
    return s_matrix(N, FIXED_PHASE)
