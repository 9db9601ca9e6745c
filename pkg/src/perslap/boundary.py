"""Boundary matrices, persistent boundary matrices and volume weights.

Row and column bases follow the lexicographic order of the complex, and the
column of ``(v0, ..., vq)`` carries ``(-1)**i`` in the row of the face that
omits ``vi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from .complex import Filtration, Simplex, SimplicialComplex
from .errors import DomainError, InputError, NumericalDomainError

CONSTRUCTIONS = ("subspace", "truncated", "selection")
CONVENTIONS = ("consistent", "literal")

# Cayley-Menger radicands within CM_CLAMP * scale of zero are rounding noise: the
# simplex is flat, and taking the root would turn 1e-18 noise into a 1e-9 volume.
CM_CLAMP = 1e-12


class Weight(Enum):
    """Column weighting of boundary matrices."""

    NONE = "none"
    VOLUME = "vol"
    INVERSE = "inv"

    @classmethod
    def parse(cls, value: "Weight | str | None") -> "Weight":
        if value is None:
            return cls.NONE
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {
            "none": cls.NONE, "unweighted": cls.NONE,
            "vol": cls.VOLUME, "volume": cls.VOLUME,
            "inv": cls.INVERSE, "inverse": cls.INVERSE, "inversevolume": cls.INVERSE,
        }
        if key not in aliases:
            raise InputError(f"unknown weight mode {value!r}; expected none, vol or inv")
        return aliases[key]


@dataclass(frozen=True, eq=False)
class BoundaryMatrix:
    """Dense matrix of a boundary map with labeled bases.

    ``rows`` are (q-1)-simplices and ``cols`` q-simplices.  A persistent
    matrix built with the ``subspace`` construction may append columns that are
    combinations of several q-simplices; those columns are labeled ``None`` and
    ``chains`` holds the coefficients of every column over ``support``.
    """

    matrix: np.ndarray
    rows: tuple[Simplex, ...]
    cols: tuple[Simplex | None, ...]
    q: int
    t: float | None = None
    p: float = 0.0
    weight: Weight = Weight.NONE
    convention: str = "consistent"
    construction: str | None = None
    support: tuple[Simplex, ...] | None = None
    chains: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.matrix.shape != (len(self.rows), len(self.cols)):
            raise InputError(
                f"matrix shape {self.matrix.shape} does not match bases "
                f"({len(self.rows)}, {len(self.cols)})"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def n_combinations(self) -> int:
        return sum(c is None for c in self.cols)


# ---------------------------------------------------------------------------
# Volumes
# ---------------------------------------------------------------------------


def _cm_volume_from_sq(sq: np.ndarray) -> float:
    """Volume from a (q+1)x(q+1) matrix of squared distances."""
    k = sq.shape[0]
    q = k - 1
    if q == 0:
        return 1.0
    if q == 1:
        return float(math.sqrt(sq[0, 1]))
    cm = np.ones((k + 1, k + 1))
    cm[0, 0] = 0.0
    cm[1:, 1:] = sq
    det = np.linalg.det(cm)
    radicand = (-1) ** (q + 1) * det / (math.factorial(q) ** 2 * 2**q)
    scale = float(sq.max()) ** q if sq.size else 0.0
    if abs(radicand) <= CM_CLAMP * max(scale, 1e-300):
        return 0.0
    if radicand < 0:
        raise NumericalDomainError(
            f"negative Cayley-Menger radicand {radicand:.3e}: distances are not Euclidean-embeddable"
        )
    return float(math.sqrt(radicand))


def cayley_menger_volume(coords: Sequence[Sequence[float]]) -> float:
    """q-volume of the simplex spanned by ``q+1`` points (1 for a single point)."""
    x = np.asarray(coords, dtype=float)
    if x.ndim != 2 or x.shape[0] == 0:
        raise InputError("need a non-empty (q+1, n) array of points")
    if x.shape[0] - 1 > x.shape[1]:
        raise InputError(f"{x.shape[0]} points cannot span a simplex in dimension {x.shape[1]}")
    diff = x[:, None, :] - x[None, :, :]
    return _cm_volume_from_sq(np.einsum("ijk,ijk->ij", diff, diff))


def simplex_volume(d: np.ndarray, s: Sequence[int]) -> float:
    """q-volume of ``s`` computed from the distance matrix alone."""
    idx = list(s)
    sub = np.asarray(d, dtype=float)[np.ix_(idx, idx)]
    return _cm_volume_from_sq(sub * sub)


def simplex_weights(
    d: np.ndarray, simplices: Sequence[Simplex], weight: Weight, convention: str = "consistent"
) -> np.ndarray:
    """Column scale factors for ``simplices`` under the given weighting."""
    weight = Weight.parse(weight)
    if convention not in CONVENTIONS:
        raise InputError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    if weight is Weight.NONE:
        return np.ones(len(simplices))
    if d is None:
        raise InputError("weighted matrices need a distance matrix")
    vols = np.array([simplex_volume(d, s) for s in simplices], dtype=float)
    if weight is Weight.INVERSE:
        if np.any(vols == 0):
            bad = simplices[int(np.argmin(vols))]
            raise DomainError(f"simplex {bad} has zero volume; inverse-volume weight undefined")
        w = 1.0 / vols
    else:
        w = vols
    return np.sqrt(w) if convention == "consistent" else w


# ---------------------------------------------------------------------------
# Boundary matrices
# ---------------------------------------------------------------------------


def _signed_boundary(rows: dict[Simplex, int], cols: Sequence[Simplex], n_rows: int) -> np.ndarray:
    """Signed incidence of ``cols`` against the face index ``rows``; absent faces are ignored."""
    m = np.zeros((n_rows, len(cols)), dtype=np.int64)
    for j, s in enumerate(cols):
        for i in range(len(s)):
            r = rows.get(s[:i] + s[i + 1 :])
            if r is not None:
                m[r, j] = -1 if i % 2 else 1
    return m


def boundary_matrix(K: SimplicialComplex, q: int) -> BoundaryMatrix:
    """Matrix of the boundary map from q-chains to (q-1)-chains.

    ``q = 0`` gives the 1 x N zero matrix.
    """
    if q < 0:
        raise InputError("q must be non-negative")
    if q > K.dim:
        raise DomainError(f"no {q}-simplices: complex has dimension {K.dim}")
    cols = K[q]
    if q == 0:
        return BoundaryMatrix(np.zeros((1, len(cols)), dtype=np.int64), ((),), cols, 0)
    rows = K[q - 1]
    return BoundaryMatrix(_signed_boundary(K.index(q - 1), cols, len(rows)), rows, cols, q)


def weighted_boundary_matrix(
    K: SimplicialComplex,
    q: int,
    mode: Weight | str,
    d: np.ndarray | None,
    *,
    convention: str = "consistent",
) -> BoundaryMatrix:
    """Boundary matrix with each column scaled by the weight of its simplex.

    ``consistent`` scales by the square root of the volume (or inverse
    volume), so the induced 0-Laplacian carries ``-d_ij`` (or ``-1/d_ij``)
    off the diagonal; ``literal`` scales by the weight itself.
    """
    mode = Weight.parse(mode)
    b = boundary_matrix(K, q)
    if mode is Weight.NONE:
        return b
    scale = simplex_weights(d, b.cols, mode, convention)
    return BoundaryMatrix(b.matrix * scale[None, :], b.rows, b.cols, q, weight=mode, convention=convention)


def restricted_boundary(
    K_t: SimplicialComplex,
    K_s: SimplicialComplex,
    q: int,
    *,
    construction: str = "subspace",
    col_scale: np.ndarray | None = None,
) -> tuple[np.ndarray, tuple[Simplex | None, ...], np.ndarray | None]:
    """Boundary of q-chains of ``K_s`` seen in the (q-1)-chains of ``K_t``.

    Returns ``(matrix, column labels, chain coefficients or None)``.

    Constructions, for the domain of q-chains of ``K_s`` whose boundary lies in ``K_t``:

    ``subspace``
        the exact subspace: simplices whose faces all lie in ``K_t`` plus an
        orthonormal basis of the cancelling combinations of the remaining ones.
        Its Laplacian nullity is the persistent Betti number.
    ``selection``
        only the simplices whose faces all lie in ``K_t``.
    ``truncated``
        every simplex of ``K_s`` touching ``K_t``, with rows outside ``K_t`` dropped.
    """
    if construction not in CONSTRUCTIONS:
        raise InputError(f"unknown construction {construction!r}; expected one of {CONSTRUCTIONS}")
    cols = K_s[q]
    full_rows = K_s[q - 1]
    full = _signed_boundary(K_s.index(q - 1), cols, len(full_rows))
    if col_scale is not None:
        full = full * col_scale[None, :]
    t_index = K_t.index(q - 1)
    inside = np.array([s in t_index for s in full_rows], dtype=bool)
    ins, out = full[inside], full[~inside]
    qualifies = ~np.any(out != 0, axis=0)
    if construction == "truncated":
        keep = np.any(ins != 0, axis=0)
        return ins[:, keep], tuple(s for s, k in zip(cols, keep) if k), None
    labels: tuple[Simplex | None, ...] = tuple(s for s, k in zip(cols, qualifies) if k)
    base = ins[:, qualifies]
    if construction == "selection" or qualifies.all():
        return base, labels, None
    rest = np.flatnonzero(~qualifies)
    z = null_space(out[:, rest].astype(float))
    if z.shape[1] == 0:
        return base, labels, None
    coeff = np.zeros((len(cols), len(labels) + z.shape[1]))
    coeff[np.flatnonzero(qualifies), np.arange(len(labels))] = 1.0
    coeff[rest, len(labels):] = z
    matrix = np.hstack([base.astype(float), ins[:, rest] @ z])
    return matrix, labels + (None,) * z.shape[1], coeff


def persistent_boundary_matrix(
    f: Filtration,
    t: float,
    p: float,
    q: int,
    *,
    construction: str = "subspace",
    mode: Weight | str = Weight.NONE,
    convention: str = "consistent",
) -> BoundaryMatrix:
    """Persistent boundary matrix from q-chains of ``K_{t+p}`` into (q-1)-chains of ``K_t``.

    See :func:`restricted_boundary` for the ``construction`` choices.  At
    ``p = 0`` every construction returns :func:`boundary_matrix` of ``K_t``.
    """
    if p < 0:
        raise InputError("p must be non-negative")
    if q < 0:
        raise InputError("q must be non-negative")
    t = f.check_radius(t)
    s_radius = f.check_radius(t + p)
    mode = Weight.parse(mode)
    K_t, K_s = f.snapshot(t), f.snapshot(s_radius)
    meta = dict(t=t, p=float(p), weight=mode, convention=convention, construction=construction)
    if q == 0:
        return BoundaryMatrix(np.zeros((1, K_t.count(0)), dtype=np.int64), ((),), K_t[0], 0, **meta)
    scale = None
    if mode is not Weight.NONE:
        if f.distances is None:
            raise InputError("weighted persistent matrices need a distance-based filtration")
        scale = simplex_weights(f.distances, K_s[q], mode, convention)
    matrix, labels, coeff = restricted_boundary(K_t, K_s, q, construction=construction, col_scale=scale)
    return BoundaryMatrix(
        matrix, K_t[q - 1], labels, q, support=K_s[q] if coeff is not None else None, chains=coeff, **meta
    )
