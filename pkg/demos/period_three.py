"""
Repeating the step cycles with period three
===========================================

Applying the deletion step again does not keep deleting. Inside the plane
spanned by the unmarked superposition and the marked item the operator
cubes to a pure phase, so the outcome cycles: deleted, phase shifted,
back to the start.
"""

import numpy as np

from qdelete import DeletionConfig, fidelity, run, uniform_state

n, tau = 5, 7
N = 1 << n
uniform = uniform_state(n)

for k in range(1, 10):
    out = run(DeletionConfig(n, tau, k))
    amps = out.final_state.amps
    print(f"k={k}  {out.case_tag.value:<17} |amp[tau]|={abs(amps[tau]):.4f}  "
          f"overlap with start={fidelity(out.final_state, uniform):.6f}")

# In the phase-shifted case every magnitude returns to 1/sqrt(N), but the
# unmarked items trail the marked one by the matched phase.
out = run(DeletionConfig(n, tau, 2))
amps = out.final_state.amps
lag = np.angle(amps[0] / amps[tau])
print(f"\nk=2: unmarked minus marked phase = {lag:.6f}, -phi = {-out.phi:.6f}")
