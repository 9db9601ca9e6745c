"""Combinatorial and persistent Laplacians and their spectra.

An eigenvalue counts as zero when it is at most ``tau * max(1, lambda_max)``.
Harmonic eigenvalues give (persistent) Betti numbers; the rest feed
``lambda2_tilde`` and the summary statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .boundary import (
    BoundaryMatrix,
    Weight,
    boundary_matrix,
    persistent_boundary_matrix,
    weighted_boundary_matrix,
)
from .complex import Filtration, Simplex, SimplicialComplex, _as_distances, within_reach
from .errors import DomainError, InputError

DEFAULT_TAU = 1e-9
SYMMETRY_TOL = 1e-9

STATISTICS = ("sum", "avg", "max", "std", "var", "sec")


def zero_threshold(eigenvalues: np.ndarray, tau: float = DEFAULT_TAU) -> float:
    """Largest value treated as a zero eigenvalue."""
    if tau <= 0:
        raise InputError("zero tolerance must be positive")
    lam_max = float(eigenvalues[-1]) if len(eigenvalues) else 0.0
    return tau * max(1.0, lam_max)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with the zero rule applied."""

    eigenvalues: np.ndarray
    tau: float = DEFAULT_TAU

    def __post_init__(self) -> None:
        ev = np.sort(np.asarray(self.eigenvalues, dtype=float).reshape(-1))
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    def __len__(self) -> int:
        return self.eigenvalues.size

    @property
    def threshold(self) -> float:
        return zero_threshold(self.eigenvalues, self.tau)

    @property
    def betti(self) -> int:
        return int(np.count_nonzero(self.eigenvalues <= self.threshold))

    @property
    def nonzero(self) -> np.ndarray:
        return self.eigenvalues[self.eigenvalues > self.threshold]

    @property
    def lambda2_tilde(self) -> float | None:
        nz = self.nonzero
        return float(nz[0]) if nz.size else None

    def stats(self) -> dict[str, float | None]:
        return spectral_stats(self)


@dataclass(frozen=True, eq=False)
class PersistentLaplacian:
    """Symmetric PSD matrix acting on the q-chains of ``K_t``.

    ``p = 0`` and ``t = None`` describe an ordinary combinatorial Laplacian.
    """

    matrix: np.ndarray
    basis: tuple[Simplex, ...]
    q: int
    t: float | None = None
    p: float = 0.0
    weight: Weight = Weight.NONE
    construction: str | None = None
    _spectra: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectrum(self, tau: float = DEFAULT_TAU) -> Spectrum:
        ev = self._spectra.get("ev")
        if ev is None:
            ev = eigvalsh(self.matrix)
            self._spectra["ev"] = ev
        return Spectrum(ev, tau)


MatrixLike = Union[np.ndarray, PersistentLaplacian]


def _matrix(m: MatrixLike) -> np.ndarray:
    return m.matrix if isinstance(m, PersistentLaplacian) else np.asarray(m, dtype=float)


def eigvalsh(m: MatrixLike, sym_tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric matrix (LAPACK ``syevd``)."""
    a = _matrix(m).astype(float, copy=False)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    if a.size == 0:
        return np.zeros(0)
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(a - a.T).max() > sym_tol * scale:
        raise InputError("matrix is not symmetric")
    return np.linalg.eigvalsh(a)


def _gram(b: np.ndarray) -> np.ndarray:
    g = b @ b.T
    # integer inputs are already exact; weighted ones get their rounding asymmetry removed
    return g if g.dtype.kind == "i" else (g + g.T) / 2.0


def _assemble(upper: BoundaryMatrix | None, lower: BoundaryMatrix, n: int) -> np.ndarray:
    up = _gram(upper.matrix) if upper is not None and upper.shape[1] else np.zeros((n, n), dtype=np.int64)
    low = _gram(lower.matrix.T) if lower.q > 0 else np.zeros((n, n), dtype=np.int64)
    return np.asarray(up + low, dtype=float)


def laplacian_q(
    K: SimplicialComplex,
    q: int,
    mode: Weight | str = Weight.NONE,
    d: np.ndarray | None = None,
    *,
    convention: str = "consistent",
) -> PersistentLaplacian:
    """q-combinatorial Laplacian ``B_{q+1} B_{q+1}^T + B_q^T B_q`` of ``K``."""
    if q < 0 or q > K.dim:
        raise DomainError(f"no {q}-simplices: complex has dimension {K.dim}")
    mode = Weight.parse(mode)
    if mode is not Weight.NONE and d is not None:
        d = _as_distances(d)
    lower = weighted_boundary_matrix(K, q, mode, d, convention=convention)
    upper = weighted_boundary_matrix(K, q + 1, mode, d, convention=convention) if q < K.dim else None
    return PersistentLaplacian(_assemble(upper, lower, K.count(q)), K[q], q, weight=mode)


def laplacian_entrywise(K: SimplicialComplex, q: int) -> np.ndarray:
    """Unweighted q-Laplacian from adjacency and orientation rules alone.

    Diagonal: upper degree plus ``q + 1`` (plain degree for ``q = 0``).
    Off-diagonal: 0 for upper-adjacent pairs, otherwise +1 or -1 for
    lower-adjacent pairs with similar or dissimilar orientation.
    """
    if q < 0 or q > K.dim:
        raise DomainError(f"no {q}-simplices: complex has dimension {K.dim}")
    simplices = K[q]
    n = len(simplices)
    cofaces = set(K[q + 1])
    out = np.zeros((n, n), dtype=np.int64)
    if q == 0:
        pos = K.index(0)
        for u, v in K[1]:
            i, j = pos[(u,)], pos[(v,)]
            out[i, j] = out[j, i] = -1
            out[i, i] += 1
            out[j, j] += 1
        return out
    up_degree = {s: 0 for s in simplices}
    for c in cofaces:
        for i in range(len(c)):
            up_degree[c[:i] + c[i + 1 :]] += 1
    # group q-simplices by shared (q-1)-face
    by_face: dict[Simplex, list[tuple[int, int]]] = {}
    for j, s in enumerate(simplices):
        out[j, j] = up_degree[s] + q + 1
        for i in range(q + 1):
            sign = -1 if i % 2 else 1
            by_face.setdefault(s[:i] + s[i + 1 :], []).append((j, sign))
    for members in by_face.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                (i, si), (j, sj) = members[a], members[b]
                union = tuple(sorted(set(simplices[i]) | set(simplices[j])))
                if union in cofaces:
                    continue
                out[i, j] = out[j, i] = si * sj
    return out


def persistent_laplacian(
    f: Filtration,
    t: float,
    p: float,
    q: int,
    mode: Weight | str = Weight.NONE,
    *,
    construction: str = "subspace",
    convention: str = "consistent",
) -> PersistentLaplacian:
    """Persistent Laplacian on the q-chains of ``K_t`` seen from ``K_{t+p}``.

    The upper term uses the persistent boundary matrix from ``K_{t+p}``
    (``construction`` as in :func:`perslap.boundary.restricted_boundary`),
    the lower term the ordinary boundary matrix of ``K_t``.
    """
    t = f.check_radius(t)
    f.check_radius(t + p)
    mode = Weight.parse(mode)
    K_t = f.snapshot(t)
    n = K_t.count(q)
    if q < 0 or n == 0:
        raise DomainError(f"no {q}-simplices at radius {t}")
    upper = persistent_boundary_matrix(f, t, p, q + 1, construction=construction, mode=mode, convention=convention)
    lower = weighted_boundary_matrix(K_t, q, mode, f.distances, convention=convention)
    return PersistentLaplacian(_assemble(upper, lower, n), K_t[q], q, t, float(p), mode, construction)


def persistent_spectrum(
    f: Filtration,
    t: float,
    p: float,
    q: int,
    mode: Weight | str = Weight.NONE,
    *,
    tau: float = DEFAULT_TAU,
    construction: str = "subspace",
    convention: str = "consistent",
) -> Spectrum | None:
    """Spectrum of :func:`persistent_laplacian`, or ``None`` when ``K_t`` has no q-simplices."""
    if q < 0 or f.snapshot(f.check_radius(t)).count(q) == 0:
        f.check_radius(t + p)
        return None
    lap = persistent_laplacian(f, t, p, q, mode, construction=construction, convention=convention)
    return lap.spectrum(tau)


def persistent_betti(s: Spectrum) -> int:
    """Number of harmonic (zero) eigenvalues."""
    return s.betti


def smallest_nonzero(s: Spectrum) -> float | None:
    """Smallest eigenvalue above the zero threshold; ``None`` for a zero matrix."""
    return s.lambda2_tilde


def spectral_stats(s: Spectrum) -> dict[str, float | None]:
    """Sum, mean, max, population std and variance over all eigenvalues, plus ``sec``."""
    ev = s.eigenvalues
    if ev.size == 0:
        raise InputError("empty spectrum")
    var = float(np.var(ev))
    return {
        "sum": float(ev.sum()),
        "avg": float(ev.mean()),
        "max": float(ev[-1]),
        "std": float(np.sqrt(var)),
        "var": var,
        "sec": s.lambda2_tilde,
    }


def weighted_laplacian0(
    d: np.ndarray,
    r: float,
    mode: Weight | str = Weight.NONE,
    *,
    strict_overlap: bool = False,
) -> PersistentLaplacian:
    """0-Laplacian of the contact graph ``d_ij <= 2r`` with edge weights 1, d_ij or 1/d_ij.

    Built directly from the distance matrix; no clique enumeration.
    """
    if r < 0:
        raise InputError("radius must be non-negative")
    d = _as_distances(d)
    mode = Weight.parse(mode)
    n = d.shape[0]
    contact = within_reach(d, 2.0 * r, strict_overlap)
    np.fill_diagonal(contact, False)
    if mode is Weight.NONE:
        w = contact.astype(float)
    elif mode is Weight.VOLUME:
        w = np.where(contact, d, 0.0)
    else:
        if np.any(contact & (d == 0)):
            raise DomainError("coincident points in contact: inverse-distance weight undefined")
        with np.errstate(divide="ignore"):
            w = np.where(contact, 1.0 / np.where(contact, d, 1.0), 0.0)
    lap = np.diag(w.sum(axis=1)) - w
    return PersistentLaplacian(lap, tuple((i,) for i in range(n)), 0, float(r), 0.0, mode)


def pseudoinverse(m: MatrixLike, tau: float = DEFAULT_TAU) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a symmetric PSD matrix from its eigendecomposition."""
    a = _matrix(m)
    if a.size == 0:
        return np.zeros_like(a, dtype=float)
    eigvalsh(a)  # symmetry check
    lam, u = np.linalg.eigh(a)
    keep = lam > zero_threshold(lam, tau)
    uk = u[:, keep]
    out = (uk / lam[keep]) @ uk.T
    return (out + out.T) / 2.0
