"""Fullerene stability from the area under a spectral curve.

For each cage we integrate a statistic of L_0 over radius and fit heat of
formation as a linear function of that area.  Without the original
structure files the cages are synthetic: exact C20 and C60 polyhedra and
evenly spread spherical cages for the other sizes.  Pass a directory of
``C20.xyz`` ... ``C60.xyz`` files as the first argument to use real data.
"""

import sys
from pathlib import Path

from perslap import datasets
from perslap.io import read_structure
from perslap.pipelines import fullerene_pipeline
from perslap.spectral import STATISTICS

if len(sys.argv) > 1:
    folder = Path(sys.argv[1])
    cages = {n: read_structure(p) for n in datasets.FULLERENE_ENERGIES for p in folder.glob(f"{n}.*")}
    source = str(folder)
else:
    cages = datasets.fullerene_surrogates()
    source = "synthetic cages"

print(f"structures: {', '.join(cages)} ({source})")
for alpha in STATISTICS:
    m = fullerene_pipeline(cages, datasets.FULLERENE_ENERGIES, alpha)
    print(f"{alpha:>4}: Pearson {m.pearson:+.3f}, slope {m.slope:+.4g}, intercept {m.intercept:+.4g}")
if len(sys.argv) == 1:
    print("\nOnly two of these cages are real fullerene geometries, so the correlations")
    print("above show the pipeline running end to end, not a physical result.")
