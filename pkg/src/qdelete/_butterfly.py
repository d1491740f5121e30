"""In-place Walsh-Hadamard butterflies.

complex128 buffers go through numba kernels: the low qubits are processed
block by block while the block sits in cache, and the remaining qubits are
handled three at a time (radix-8) so each sweep over main memory retires
three butterfly levels. The kernels run on the interleaved float64 view of
the buffer: the butterfly is real-linear, so real and imaginary parts go
through the same contiguous loops and qubit q sits at float stride 2**(q+1).
Other complex dtypes (clongdouble) use a plain numpy pass per qubit.
"""

import numpy as np
from numba import njit

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

# 2**15 complex128 amplitudes = 512 KiB, inside L2.
BLOCK_QUBITS = 15


@njit(cache=True)
def _butterfly(a, b):
    for j in range(a.size):
        x = a[j]
        y = b[j]
        a[j] = (x + y) * _INV_SQRT2
        b[j] = (x - y) * _INV_SQRT2


@njit(cache=True)
def _single_pass(amps, q):
    h = 2 << q
    for i in range(0, amps.size, 2 * h):
        _butterfly(amps[i:i + h], amps[i + h:i + 2 * h])


@njit(cache=True)
def _double_pass(amps, q):
    # levels q and q+1 fused; each level still scales by 1/sqrt(2)
    h = 2 << q
    for i in range(0, amps.size, 4 * h):
        x0 = amps[i:i + h]
        x1 = amps[i + h:i + 2 * h]
        x2 = amps[i + 2 * h:i + 3 * h]
        x3 = amps[i + 3 * h:i + 4 * h]
        for j in range(h):
            a = x0[j]
            b = x1[j]
            c = x2[j]
            d = x3[j]
            s = (a + b) * _INV_SQRT2
            t = (a - b) * _INV_SQRT2
            u = (c + d) * _INV_SQRT2
            w = (c - d) * _INV_SQRT2
            x0[j] = (s + u) * _INV_SQRT2
            x1[j] = (t + w) * _INV_SQRT2
            x2[j] = (s - u) * _INV_SQRT2
            x3[j] = (t - w) * _INV_SQRT2


@njit(cache=True)
def _triple_pass(amps, q):
    # levels q, q+1, q+2 fused
    h = 2 << q
    for i in range(0, amps.size, 8 * h):
        y0 = amps[i:i + h]
        y1 = amps[i + h:i + 2 * h]
        y2 = amps[i + 2 * h:i + 3 * h]
        y3 = amps[i + 3 * h:i + 4 * h]
        y4 = amps[i + 4 * h:i + 5 * h]
        y5 = amps[i + 5 * h:i + 6 * h]
        y6 = amps[i + 6 * h:i + 7 * h]
        y7 = amps[i + 7 * h:i + 8 * h]
        for j in range(h):
            a0 = (y0[j] + y1[j]) * _INV_SQRT2
            a1 = (y0[j] - y1[j]) * _INV_SQRT2
            a2 = (y2[j] + y3[j]) * _INV_SQRT2
            a3 = (y2[j] - y3[j]) * _INV_SQRT2
            a4 = (y4[j] + y5[j]) * _INV_SQRT2
            a5 = (y4[j] - y5[j]) * _INV_SQRT2
            a6 = (y6[j] + y7[j]) * _INV_SQRT2
            a7 = (y6[j] - y7[j]) * _INV_SQRT2
            b0 = (a0 + a2) * _INV_SQRT2
            b1 = (a1 + a3) * _INV_SQRT2
            b2 = (a0 - a2) * _INV_SQRT2
            b3 = (a1 - a3) * _INV_SQRT2
            b4 = (a4 + a6) * _INV_SQRT2
            b5 = (a5 + a7) * _INV_SQRT2
            b6 = (a4 - a6) * _INV_SQRT2
            b7 = (a5 - a7) * _INV_SQRT2
            y0[j] = (b0 + b4) * _INV_SQRT2
            y1[j] = (b1 + b5) * _INV_SQRT2
            y2[j] = (b2 + b6) * _INV_SQRT2
            y3[j] = (b3 + b7) * _INV_SQRT2
            y4[j] = (b0 - b4) * _INV_SQRT2
            y5[j] = (b1 - b5) * _INV_SQRT2
            y6[j] = (b2 - b6) * _INV_SQRT2
            y7[j] = (b3 - b7) * _INV_SQRT2


@njit(cache=True)
def _levels(amps, lo, hi):
    q = lo
    while q + 2 < hi:
        _triple_pass(amps, q)
        q += 3
    while q + 1 < hi:
        _double_pass(amps, q)
        q += 2
    if q < hi:
        _single_pass(amps, q)


@njit(cache=True)
def _blocked_low(amps, nq):
    blk = 2 << nq
    for start in range(0, amps.size, blk):
        _levels(amps[start:start + blk], 0, nq)


def _wht_complex128(amps, n, block_qubits=BLOCK_QUBITS):
    amps = amps.view(np.float64)
    low = min(n, block_qubits)
    _blocked_low(amps, low)
    _levels(amps, low, n)


def _wht_generic(amps, n):
    inv_sqrt2 = 1 / np.sqrt(amps.real.dtype.type(2))
    for q in range(n):
        pairs = amps.reshape(-1, 2, 1 << q)
        a = pairs[:, 0, :]
        b = pairs[:, 1, :]
        diff = a - b
        a += b
        b[...] = diff
        amps *= inv_sqrt2


def walsh_hadamard_inplace(amps: np.ndarray, n: int) -> None:
    """Overwrite ``amps`` (length 2**n, contiguous) with H^{(x)n} amps."""
    if amps.dtype == np.complex128:
        _wht_complex128(amps, n)
    else:
        _wht_generic(amps, n)
