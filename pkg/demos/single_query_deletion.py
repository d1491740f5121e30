"""
Deleting one item with one query
================================

A database of N = 2**n items starts in the uniform superposition. One
application of the deletion step, which consults the oracle once, removes
the marked item and leaves the other N - 1 items equally weighted.
"""

import numpy as np

from qdelete import DeletionConfig, matched_phase, run

n, tau = 4, 11
N = 1 << n

# The phase is matched to the database size.
phi = matched_phase(N).phi
print(f"N = {N}, matched phase = {phi:.6f} rad")

out = run(DeletionConfig(n, tau, k=1))
amps = out.final_state.amps

# The marked amplitude is gone up to rounding.
print(f"|amp[tau]| after one step: {abs(amps[tau]):.2e}")
print(f"oracle calls: {out.oracle_calls}")

# Every other item carries the same amplitude e^{i(phi - pi)/2} / sqrt(N - 1).
target = np.exp(0.5j * (phi - np.pi)) / np.sqrt(N - 1)
others = np.delete(amps, tau)
print(f"max deviation of unmarked amplitudes: {np.abs(others - target).max():.2e}")

# A classical scan needs (N + 1) / 2 lookups on average just to find tau.
print(f"classical average lookups: {(N + 1) / 2}")
