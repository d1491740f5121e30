"""Dense statevector register and the primitive unitaries of the deletion step.

Index ``i`` of ``StateVector.amps`` is the integer read off the qubit register
with qubit ``q`` as bit ``q`` (little-endian). None of the operations here
single out a qubit, so the convention only matters when printing amplitudes.

Every operation mutates the state it is given and returns that same object.
"""

from __future__ import annotations

import cmath
import os
from dataclasses import dataclass

import numpy as np

from ._butterfly import walsh_hadamard_inplace

DEFAULT_QUBIT_CAP = 26
CAP_ENV_VAR = "QDELETE_CAP"

SUPPORTED_DTYPES = (np.dtype(np.complex128), np.dtype(np.clongdouble))


class QubitCapacityError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


def qubit_cap() -> int:
    """Qubit cap in force: ``$QDELETE_CAP`` if set, else 26."""
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_QUBIT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{CAP_ENV_VAR} must be >= 1, got {cap}")
    return cap


def check_qubits(n: int, cap: int | None = None) -> None:
    cap = qubit_cap() if cap is None else cap
    if not 1 <= n <= cap:
        raise QubitCapacityError(
            f"qubit count {n} outside [1, {cap}] (qubit cap is {cap}; "
            f"a register needs 16*2^n bytes)"
        )


@dataclass(eq=False)
class StateVector:
    """``2**n`` complex amplitudes of an ``n``-qubit register."""

    n: int
    amps: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        amps = self.amps
        if amps.ndim != 1 or amps.shape[0] != 1 << self.n:
            raise DimensionMismatchError(
                f"expected {1 << self.n} amplitudes for n={self.n}, got shape {amps.shape}"
            )
        if amps.dtype not in SUPPORTED_DTYPES:
            raise TypeError(f"unsupported amplitude dtype {amps.dtype}")
        if not amps.flags.c_contiguous:
            self.amps = np.ascontiguousarray(amps)

    @property
    def size(self) -> int:
        return self.amps.shape[0]

    @property
    def dtype(self) -> np.dtype:
        return self.amps.dtype

    def copy(self) -> StateVector:
        return StateVector(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def uniform_state(n: int, cap: int | None = None, dtype=np.complex128) -> StateVector:
    """Equal superposition over all ``2**n`` basis states."""
    check_qubits(n, cap)
    dtype = np.dtype(dtype)
    amp = 1 / np.sqrt(np.finfo(dtype).dtype.type(1 << n))
    return StateVector(n, np.full(1 << n, amp, dtype=dtype))


def basis_state(n: int, index: int, cap: int | None = None, dtype=np.complex128) -> StateVector:
    check_qubits(n, cap)
    _check_index(index, 1 << n)
    amps = np.zeros(1 << n, dtype=dtype)
    amps[index] = 1
    return StateVector(n, amps)


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish random normalized state (normalized complex Gaussian)."""
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    amps /= np.linalg.norm(amps)
    return StateVector(n, amps)


def _check_index(index: int, size: int) -> None:
    if not 0 <= index < size:
        raise IndexError(f"tau out of range [0, {size})")


def unit_phase(theta, dtype=np.complex128):
    """e^{i theta} evaluated in the precision of ``dtype``."""
    dtype = np.dtype(dtype)
    if dtype == np.complex128:
        return cmath.exp(1j * float(theta))
    theta = np.longdouble(theta)
    return dtype.type(np.cos(theta) + 1j * np.sin(theta))


def apply_walsh_hadamard(state: StateVector) -> StateVector:
    walsh_hadamard_inplace(state.amps, state.n)
    return state


def apply_marked_complement_phase(state: StateVector, tau: int, phi) -> StateVector:
    """Multiply every amplitude except ``tau`` by e^{i phi} (the I_c oracle)."""
    _check_index(tau, state.size)
    kept = state.amps[tau]
    state.amps *= unit_phase(phi, state.dtype)
    state.amps[tau] = kept
    return state


def apply_zero_phase(state: StateVector, phi) -> StateVector:
    """Multiply the amplitude of |0> by e^{i phi}."""
    state.amps[0] *= unit_phase(phi, state.dtype)
    return state


def apply_global_phase(state: StateVector, theta) -> StateVector:
    state.amps *= unit_phase(theta, state.dtype)
    return state


def negate(state: StateVector) -> StateVector:
    """Global phase of pi, applied exactly."""
    np.negative(state.amps, out=state.amps)
    return state


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|, clipped to [0, 1]."""
    if a.n != b.n:
        raise DimensionMismatchError(f"fidelity between n={a.n} and n={b.n} registers")
    return min(1.0, float(abs(np.vdot(a.amps, b.amps))))
