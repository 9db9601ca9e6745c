"""Hollow, shelled and solid tetrahedra: what the Laplacian spectra see.

Zero eigenvalues count holes in each dimension: three independent loops in
the edge skeleton, one enclosed void in the triangle shell, and nothing in
the solid.  The nonzero part of the spectrum is the same value 4 throughout.
"""

from perslap import datasets
from perslap.boundary import boundary_matrix
from perslap.homology import betti_numbers
from perslap.spectral import laplacian_q

for label, K in zip(("edge skeleton", "triangle shell", "solid"), datasets.tetrahedron_complexes()):
    print(f"{label}: f-vector {K.f_vector}, Betti {betti_numbers(K, K.dim)}")
    for q in range(K.dim + 1):
        ev = laplacian_q(K, q).spectrum().eigenvalues.round(6)
        print(f"  L_{q} spectrum {ev.tolist()}")

solid = datasets.tetrahedron_complexes()[2]
print("\nboundary of the edges (rows 0..3, columns 01 02 03 12 13 23):")
print(boundary_matrix(solid, 1).matrix)
