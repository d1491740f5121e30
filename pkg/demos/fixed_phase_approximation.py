"""
Freezing the phase at pi/3
==========================

As N grows the matched phase tends to pi/3. Using pi/3 for every size
leaves a marked amplitude of exactly N**-1.5 after one step, which is
already negligible for modest databases.
"""

import numpy as np

from qdelete import DeletionConfig, Mode, approximate_residual, run

print(f"{'n':>3} {'N':>8} {'residual':>12} {'N^-1.5':>12}")
for n in range(2, 21, 3):
    N = 1 << n
    out = run(DeletionConfig(n, N - 1, 1, Mode.FIXED))
    print(f"{n:>3} {N:>8} {out.residual_marked_magnitude:>12.4e} {approximate_residual(N):>12.4e}")

# With extended precision the agreement holds to about twelve digits.
n = 16
N = 1 << n
out = run(DeletionConfig(n, 0, 1, Mode.FIXED), dtype=np.clongdouble)
rel = abs(out.residual_marked_magnitude * N**1.5 - 1)
print(f"\nn={n}, long double run: relative error {rel:.1e}")
