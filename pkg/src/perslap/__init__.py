"""Persistent spectral analysis of point clouds.

Vietoris-Rips filtrations, (persistent, weighted) combinatorial Laplacians,
their harmonic and non-harmonic spectra, an exact homology oracle, and two
regression pipelines (fullerene stability and protein B-factors).
"""

from .boundary import (
    BoundaryMatrix,
    Weight,
    boundary_matrix,
    cayley_menger_volume,
    persistent_boundary_matrix,
    simplex_volume,
    weighted_boundary_matrix,
)
from .complex import (
    Filtration,
    PointCloud,
    SimplicialComplex,
    build_distance_matrix,
    filtration,
    graph_matrices,
    rips_complex,
    simplex_birth_radius,
    uniform_schedule,
)
from .errors import DomainError, InputError, NumericalDomainError, ParseError, PerslapError
from .homology import PersistenceOracle, betti_numbers, persistent_betti_oracle
from .io import parse_pdb_ca, parse_xyz, read_structure
from .pipelines import (
    area_under_curve,
    bfactor_features,
    bfactor_fit,
    bfactor_predict,
    fullerene_pipeline,
    linear_least_squares,
    pearson,
    spectral_curve,
)
from .spectral import (
    PersistentLaplacian,
    Spectrum,
    eigvalsh,
    laplacian_q,
    persistent_betti,
    persistent_laplacian,
    persistent_spectrum,
    pseudoinverse,
    smallest_nonzero,
    spectral_stats,
    weighted_laplacian0,
)

__version__ = "0.1.0"
