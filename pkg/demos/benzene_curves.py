"""Multiscale curves for a planar benzene ring.

As the radius grows, each hydrogen first bonds to its carbon (12 -> 6
components), then the carbon ring closes (one component, one loop), and the
loop fills once the ring's diagonals connect.  The smallest nonzero
eigenvalue of L_0 changes at every radius where a new distance class appears.
"""

import numpy as np

from perslap import datasets
from perslap.complex import build_distance_matrix, uniform_schedule
from perslap.pipelines import curve_jumps, spectral_curve

d = build_distance_matrix(datasets.benzene())
distinct = np.unique(np.round(d[np.triu_indices(12, 1)], 4))
print("distinct pair distances:", distinct.tolist())

sched = uniform_schedule(0.0, 2.49, 0.01)
b0 = spectral_curve(d, sched, 0, "betti")
b1 = spectral_curve(d, sched, 1, "betti")
lam = spectral_curve(d, sched, 0, "sec")

print("beta_0 changes at", curve_jumps(b0).tolist())
ones = b1.radii[b1.values == 1]
print(f"beta_1 = 1 for r in [{ones[0]:.2f}, {ones[-1]:.2f}]")
print("lambda2 changes at", curve_jumps(lam).tolist())
print("\n   r   beta0  beta1  lambda2")
for k in range(0, len(sched), 10):
    print(f"{sched[k]:5.2f}  {b0.values[k]:5.0f}  {b1.values[k]:5.0f}  {lam.values[k]:8.4f}")
