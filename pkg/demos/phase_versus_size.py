"""
How the matched phase depends on N
==================================

The matched phase satisfies sin(phi/2) = sqrt(N / (N - 1)) / 2. It starts
at pi/2 for two items and falls monotonically toward pi/3. Pipe the CSV
into any plotting tool to draw the curve.
"""

import math

from qdelete import matched_phase

print("n,N,phi,phi_minus_pi_over_3")
for n in range(1, 21):
    N = 1 << n
    phi = matched_phase(N).phi
    print(f"{n},{N},{phi!r},{phi - math.pi / 3!r}")
