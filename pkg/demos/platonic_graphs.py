"""Graph Laplacians of the five platonic solids.

Each solid's vertex-edge graph is regular and connected, so the Laplacian
has a single zero eigenvalue.  The smallest nonzero eigenvalue measures
how well connected the graph is; the dodecahedron is the weakest.
"""

from perslap import datasets
from perslap.complex import graph_matrices
from perslap.spectral import laplacian_q

print(f"{'solid':<14}{'V':>4}{'E':>4}{'deg':>5}{'beta0':>7}{'lambda2':>10}{'lambda_max':>12}")
for name in datasets.PLATONIC:
    K = datasets.platonic_graph(name)
    _, deg, _ = graph_matrices(K)
    s = laplacian_q(K, 0).spectrum()
    print(
        f"{name:<14}{K.count(0):>4}{K.count(1):>4}{int(deg[0, 0]):>5}"
        f"{s.betti:>7}{s.lambda2_tilde:>10.4f}{s.eigenvalues[-1]:>12.4f}"
    )
