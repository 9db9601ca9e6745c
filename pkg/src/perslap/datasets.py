"""Reference structures and small fixtures.

Everything here is generated in code: exact polyhedra, the planar benzene
model, the five-point filtration used in the persistent examples, synthetic
fullerene-like cages and a synthetic C-alpha chain.
"""

from __future__ import annotations

import itertools

import numpy as np

from .complex import (
    Filtration,
    PointCloud,
    SimplicialComplex,
    filtration,
    validate_distance_matrix,
)

GOLDEN = (1 + 5**0.5) / 2

# Heats of formation in eV/atom for the fullerene series (regression targets).
FULLERENE_ENERGIES: dict[str, float] = {
    "C20": 1.180,
    "C24": 1.050,
    "C26": 0.989,
    "C30": 0.850,
    "C32": 0.781,
    "C36": 0.706,
    "C50": 0.509,
    "C60": 0.401,
}

# Published weights w0..w11 of the B-factor model; scaling-dependent, reference only.
BFACTOR_REFERENCE_WEIGHTS = (
    10.6102, 0.2026, -0.0031, 0.2169, 0.3127, 0.2815,
    -0.4623, 1.0203, 0.6110, -0.6872, -1.0695, 4.4257,
)


def _cyclic(points: list[tuple[float, float, float]]) -> list[tuple[float, float, float]]:
    out = []
    for x, y, z in points:
        out += [(x, y, z), (y, z, x), (z, x, y)]
    return out


def _signs(base: tuple[float, float, float]) -> list[tuple[float, float, float]]:
    out = set()
    for sx, sy, sz in itertools.product((1, -1), repeat=3):
        out.add((sx * base[0], sy * base[1], sz * base[2]))
    return sorted(out)


def _unique(points: list[tuple[float, float, float]]) -> np.ndarray:
    arr = np.round(np.array(points, dtype=float), 12)
    return np.unique(arr + 0.0, axis=0)  # + 0.0 folds -0.0 into 0.0


def platonic_vertices(name: str) -> np.ndarray:
    """Vertices of a Platonic solid, scaled to unit edge length."""
    phi = GOLDEN
    if name == "tetrahedron":
        pts = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    elif name == "octahedron":
        pts = _cyclic(_signs((1, 0, 0)))
    elif name == "cube":
        pts = _signs((1, 1, 1))
    elif name == "icosahedron":
        pts = _cyclic(_signs((0, 1, phi)))
    elif name == "dodecahedron":
        pts = _signs((1, 1, 1)) + _cyclic(_signs((0, 1 / phi, phi)))
    else:
        raise ValueError(f"unknown solid {name!r}")
    x = _unique(pts)
    diff = x[:, None] - x[None]
    d = np.sqrt((diff**2).sum(-1))
    edge = d[d > 1e-9].min()
    return x / edge


PLATONIC = ("tetrahedron", "octahedron", "cube", "dodecahedron", "icosahedron")


def platonic_graph(name: str) -> SimplicialComplex:
    """1-skeleton of a Platonic solid: vertices joined iff at the (minimal) edge distance."""
    x = platonic_vertices(name)
    n = len(x)
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if abs(np.linalg.norm(x[i] - x[j]) - 1.0) < 1e-9
    ]
    return SimplicialComplex.from_simplices([(i,) for i in range(n)] + edges)


def tetrahedron_complexes() -> tuple[SimplicialComplex, SimplicialComplex, SimplicialComplex]:
    """Edges of a tetrahedron; plus its four triangles; plus the solid."""
    full = (0, 1, 2, 3)
    k1 = SimplicialComplex.from_simplices(itertools.combinations(full, 2))
    k2 = SimplicialComplex.from_simplices(itertools.combinations(full, 3))
    k3 = SimplicialComplex.from_simplices([full])
    return k1, k2, k3


def kite_complex() -> SimplicialComplex:
    """Vertices 1..5, edges 12, 23, 34, 24, 45 and the filled triangle 234."""
    return SimplicialComplex.from_simplices([(1, 2), (2, 3, 4), (4, 5)])


def five_point_distances() -> np.ndarray:
    """Abstract distances on five points whose Rips filtration runs through six stages.

    Stage radii (see :data:`FIVE_POINT_STAGES`) add, in turn: nothing; 01;
    12, 23, 03; 24; 02 with triangles 012, 023; 13 with 013, 123 and 0123.
    """
    d = np.zeros((5, 5))
    for (i, j), v in {
        (0, 1): 1.0, (1, 2): 1.1, (2, 3): 1.1, (0, 3): 1.1, (2, 4): 1.2,
        (0, 2): 1.3, (1, 3): 1.4, (0, 4): 2.4, (1, 4): 2.3, (3, 4): 2.2,
    }.items():
        d[i, j] = d[j, i] = v
    return validate_distance_matrix(d)


# Radius of stage K1..K6; each sits strictly between consecutive birth radii.
FIVE_POINT_STAGES = (0.0, 0.52, 0.57, 0.62, 0.67, 0.72)


def five_point_filtration(hand_built: bool = False) -> Filtration:
    """Six-stage filtration on five vertices, either from distances or from explicit births."""
    if not hand_built:
        return filtration(five_point_distances(), FIVE_POINT_STAGES, q_max_build=3)
    s = FIVE_POINT_STAGES
    births = {(v,): 0.0 for v in range(5)}
    births[(0, 1)] = s[1]
    births.update({e: s[2] for e in [(1, 2), (2, 3), (0, 3)]})
    births[(2, 4)] = s[3]
    births.update({e: s[4] for e in [(0, 2), (0, 1, 2), (0, 2, 3)]})
    births.update({e: s[5] for e in [(1, 3), (0, 1, 3), (1, 2, 3), (0, 1, 2, 3)]})
    return Filtration.from_births(births, s)


def benzene(cc: float = 1.39, ch: float = 1.09) -> PointCloud:
    """Planar benzene: carbons on a regular hexagon, hydrogens radially outward."""
    ang = np.deg2rad(60.0 * np.arange(6))
    ring = np.stack([np.cos(ang), np.sin(ang), np.zeros(6)], axis=1)
    coords = np.vstack([cc * ring, (cc + ch) * ring])
    return PointCloud(coords, elements=("C",) * 6 + ("H",) * 6)


def dodecahedral_cage(bond: float = 1.44) -> PointCloud:
    """C20 as a regular dodecahedron with the given bond length."""
    return PointCloud(platonic_vertices("dodecahedron") * bond, elements=("C",) * 20)


def truncated_icosahedron(bond: float = 1.42) -> PointCloud:
    """C60 as a uniform truncated icosahedron with the given bond length."""
    phi = GOLDEN
    bases = [(0, 1, 3 * phi), (1, 2 + phi, 2 * phi), (phi, 2, phi**3)]
    pts = [p for b in bases for s in _signs(b) for p in _cyclic([s])]
    x = _unique(pts)
    assert len(x) == 60
    return PointCloud(x / 2.0 * bond, elements=("C",) * 60)


def spherical_cage(n_atoms: int, area_per_atom: float = 2.62) -> PointCloud:
    """Fullerene-like cage: a Fibonacci lattice on a sphere with fixed surface density."""
    radius = np.sqrt(n_atoms * area_per_atom / (4 * np.pi))
    k = np.arange(n_atoms) + 0.5
    z = 1 - 2 * k / n_atoms
    theta = np.pi * (1 + 5**0.5) * k
    rho = np.sqrt(1 - z * z)
    pts = np.stack([rho * np.cos(theta), rho * np.sin(theta), z], axis=1) * radius
    return PointCloud(pts, elements=("C",) * n_atoms)


def fullerene_surrogates() -> dict[str, PointCloud]:
    """Cages standing in for the eight fullerenes: exact C20 and C60, Fibonacci cages otherwise."""
    out = {}
    for name in FULLERENE_ENERGIES:
        n = int(name[1:])
        if n == 20:
            out[name] = dodecahedral_cage()
        elif n == 60:
            out[name] = truncated_icosahedron()
        else:
            out[name] = spherical_cage(n)
    return out


def synthetic_ca_chain(n: int = 319, seed: int = 0, step: float = 3.8) -> PointCloud:
    """Compact self-avoiding random chain with C-alpha spacing.

    Steps keep a roughly 100 degree virtual bond angle, stay inside a sphere
    sized like a globular protein of ``n`` residues and keep non-bonded
    atoms at least 4 A apart.  B-factors are left unset.
    """
    rng = np.random.default_rng(seed)
    confine = 3.0 * n ** (1 / 3) + 6.0
    pts = [np.zeros(3), np.array([step, 0.0, 0.0])]
    while len(pts) < n:
        prev = pts[-1] - pts[-2]
        prev /= np.linalg.norm(prev)
        for _ in range(500):
            v = rng.normal(size=3)
            v -= v.dot(prev) * prev
            v /= np.linalg.norm(v)
            angle = np.deg2rad(rng.uniform(50, 90))  # deviation from straight
            cand = pts[-1] + step * (np.cos(angle) * prev + np.sin(angle) * v)
            if np.linalg.norm(cand) > confine:
                continue
            if len(pts) > 2 and np.min(np.linalg.norm(np.array(pts[:-1]) - cand, axis=1)) < 4.0:
                continue
            pts.append(cand)
            break
        else:
            # dead end: back off a few residues and retry
            del pts[max(2, len(pts) - 5):]
    labels = tuple(f"A:{i + 1}:GLY" for i in range(n))
    return PointCloud(np.array(pts), elements=("C",) * n, labels=labels)
