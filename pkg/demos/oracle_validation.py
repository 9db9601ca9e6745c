"""Laplacian nullity against exact persistent homology on random clouds.

Every persistent Betti number read from a persistent Laplacian's zero
eigenvalues is compared with an exact rational rank computation, for all
pairs of critical radii and q <= 2.  The three boundary constructions are
swept side by side; only "subspace" agrees everywhere.
"""

import sys

from perslap.boundary import CONSTRUCTIONS
from perslap.validation import random_cross_check

n = int(sys.argv[1]) if len(sys.argv) > 1 else 40
for construction in CONSTRUCTIONS:
    check = random_cross_check(n, seed=0, max_points=8, q_max=2, construction=construction)
    print(f"{construction:>10}: {check.cells} cells, {len(check.mismatches)} mismatches")
    for t, s, q, lap, exact in check.mismatches[:3]:
        print(f"            e.g. t={t:.4f} s={s:.4f} q={q}: Laplacian {lap}, exact {exact}")
