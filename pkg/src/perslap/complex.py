"""Point clouds, distance matrices, Vietoris-Rips complexes and filtrations.

Simplices are tuples of strictly ascending vertex indices; the ascending order
is also the orientation.  Within each dimension a complex keeps its simplices
in lexicographic order, so every matrix derived from it has a reproducible
row/column basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, InputError

Simplex = tuple[int, ...]

DEFAULT_QMAX_BUILD = 3
DEFAULT_SIMPLEX_BUDGET = 2_000_000

# Relative slack on the overlap test: distances equal to 2r up to rounding count
# as ties, so symmetric structures change at one grid radius, not two.
TIE_RTOL = 1e-10


def within_reach(values: np.ndarray, limit: float, strict: bool) -> np.ndarray:
    """``values <= limit`` (or ``< limit`` when strict), with ties decided by :data:`TIE_RTOL`."""
    if strict:
        return values < limit * (1.0 - TIE_RTOL)
    return values <= limit * (1.0 + TIE_RTOL)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Ordered points in R^n; point ``i`` has index ``i``.

    ``elements``, ``bfactors`` and ``labels`` are optional per-point metadata
    (element symbol, crystallographic B-factor, residue label).
    """

    coords: np.ndarray
    elements: tuple[str, ...] | None = None
    bfactors: np.ndarray | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        c = np.array(self.coords, dtype=float)
        if c.ndim != 2 or c.shape[1] < 1:
            raise InputError(f"coordinates must form an (N, n) array with n >= 1, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise InputError("coordinates must be finite")
        object.__setattr__(self, "coords", _readonly(c))
        n = c.shape[0]
        for name in ("elements", "labels"):
            val = getattr(self, name)
            if val is not None:
                val = tuple(val)
                if len(val) != n:
                    raise InputError(f"{name} has {len(val)} entries for {n} points")
                object.__setattr__(self, name, val)
        if self.bfactors is not None:
            b = np.array(self.bfactors, dtype=float)
            if b.shape != (n,):
                raise InputError(f"bfactors has shape {b.shape} for {n} points")
            object.__setattr__(self, "bfactors", _readonly(b))

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]], **meta) -> "PointCloud":
        """Build from a list of coordinate vectors, rejecting ragged input."""
        dims = {len(p) for p in points}
        if len(dims) > 1:
            raise InputError(f"inconsistent coordinate dimensions: {sorted(dims)}")
        if not points:
            return cls(np.zeros((0, 1)), **meta)
        return cls(np.asarray(points, dtype=float), **meta)

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def subset(self, order: Sequence[int]) -> "PointCloud":
        """Points reordered (or selected) by ``order``, metadata carried along."""
        idx = list(order)
        pick = lambda t: None if t is None else tuple(t[i] for i in idx)  # noqa: E731
        return PointCloud(
            self.coords[idx],
            elements=pick(self.elements),
            bfactors=None if self.bfactors is None else self.bfactors[idx],
            labels=pick(self.labels),
        )


def build_distance_matrix(cloud: PointCloud | np.ndarray) -> np.ndarray:
    """Euclidean distance matrix of a point cloud (read-only ``float`` array)."""
    if not isinstance(cloud, PointCloud):
        cloud = PointCloud(np.asarray(cloud, dtype=float))
    if len(cloud) == 0:
        raise InputError("point cloud is empty")
    x = cloud.coords
    diff = x[:, None, :] - x[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    # exact symmetry and zero diagonal regardless of summation order
    d = np.maximum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return _readonly(d)


def validate_distance_matrix(d: np.ndarray | Sequence[Sequence[float]]) -> np.ndarray:
    """Check symmetry, zero diagonal and non-negativity; returns a float copy."""
    a = np.array(d, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InputError(f"distance matrix must be square and non-empty, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError("distance matrix has non-finite entries")
    if not np.array_equal(a, a.T):
        raise InputError("distance matrix is not symmetric")
    if np.any(np.diag(a) != 0):
        raise InputError("distance matrix has a nonzero diagonal")
    if np.any(a < 0):
        raise InputError("distance matrix has negative entries")
    return _readonly(a)


def _as_distances(d: np.ndarray) -> np.ndarray:
    if isinstance(d, np.ndarray) and d.dtype == float and not d.flags.writeable:
        return d  # already validated or produced by build_distance_matrix
    return validate_distance_matrix(d)


def simplex_birth_radius(d: np.ndarray, s: Sequence[int]) -> float:
    """Radius at which ``s`` enters the Rips filtration: half its diameter."""
    d = np.asarray(d)
    idx = list(s)
    if not idx:
        raise InputError("empty simplex")
    if min(idx) < 0 or max(idx) >= d.shape[0]:
        raise InputError(f"simplex {tuple(idx)} has a vertex outside 0..{d.shape[0] - 1}")
    if len(idx) == 1:
        return 0.0
    return float(d[np.ix_(idx, idx)].max() / 2.0)


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed simplicial complex; ``simplices[q]`` lists the q-simplices.

    Construct hand-built complexes with :meth:`from_simplices`, which adds all
    faces.  The direct constructor validates ordering and closure.
    """

    simplices: tuple[tuple[Simplex, ...], ...]

    def __post_init__(self) -> None:
        levels = tuple(tuple(tuple(int(v) for v in s) for s in level) for level in self.simplices)
        while levels and not levels[-1]:
            levels = levels[:-1]
        object.__setattr__(self, "simplices", levels)
        for q, level in enumerate(levels):
            for s in level:
                if len(s) != q + 1 or any(a >= b for a, b in zip(s, s[1:])) or s[0] < 0:
                    raise InputError(f"{s} is not a strictly ascending {q}-simplex")
            if any(a >= b for a, b in zip(level, level[1:])):
                raise InputError(f"dimension-{q} simplices are not sorted and unique")
            if q > 0:
                below = set(levels[q - 1])
                for s in level:
                    for i in range(q + 1):
                        if s[:i] + s[i + 1 :] not in below:
                            raise InputError(f"face {s[:i] + s[i + 1:]} of {s} is missing")

    @classmethod
    def _trusted(cls, levels: tuple[tuple[Simplex, ...], ...]) -> "SimplicialComplex":
        obj = object.__new__(cls)
        while levels and not levels[-1]:
            levels = levels[:-1]
        object.__setattr__(obj, "simplices", levels)
        return obj

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Smallest complex containing the given simplices (all faces added)."""
        found: dict[int, set[Simplex]] = {}
        for s in simplices:
            t = tuple(sorted(int(v) for v in s))
            if len(set(t)) != len(t) or not t:
                raise InputError(f"invalid simplex {tuple(s)}")
            stack = [t]
            while stack:
                u = stack.pop()
                level = found.setdefault(len(u) - 1, set())
                if u in level:
                    continue
                level.add(u)
                if len(u) > 1:
                    stack.extend(u[:i] + u[i + 1 :] for i in range(len(u)))
        top = max(found, default=-1)
        return cls._trusted(tuple(tuple(sorted(found.get(q, ()))) for q in range(top + 1)))

    @property
    def dim(self) -> int:
        """Top dimension; -1 for the empty complex."""
        return len(self.simplices) - 1

    def __getitem__(self, q: int) -> tuple[Simplex, ...]:
        if 0 <= q < len(self.simplices):
            return self.simplices[q]
        return ()

    def count(self, q: int) -> int:
        return len(self[q])

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    @cached_property
    def _index(self) -> tuple[dict[Simplex, int], ...]:
        return tuple({s: i for i, s in enumerate(level)} for level in self.simplices)

    def index(self, q: int) -> dict[Simplex, int]:
        """Position of each q-simplex in the basis order."""
        return self._index[q] if 0 <= q < len(self._index) else {}

    def __contains__(self, s: object) -> bool:
        if not isinstance(s, tuple) or not s:
            return False
        return s in self.index(len(s) - 1)

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return all(s in other for level in self.simplices for s in level)

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * n for q, n in enumerate(self.f_vector))

    def relabel(self, perm: Sequence[int]) -> "SimplicialComplex":
        """Complex with vertex ``v`` renamed to ``perm[v]``."""
        return SimplicialComplex.from_simplices(
            [perm[v] for v in s] for level in self.simplices for s in level
        )


# ---------------------------------------------------------------------------
# Rips construction
# ---------------------------------------------------------------------------


def _clique_levels(
    d: np.ndarray, diameter: float, q_max_build: int, strict: bool, budget: int
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """All cliques up to ``q_max_build + 1`` vertices of the graph ``d <= diameter``.

    Returns per-dimension vertex arrays (lexicographic rows) and birth radii.
    """
    n = d.shape[0]
    adj = within_reach(d, diameter, strict)
    np.fill_diagonal(adj, False)
    cliques = [np.arange(n, dtype=np.int64)[:, None]]
    births = [np.zeros(n)]
    total = n
    for _ in range(q_max_build):
        prev, pb = cliques[-1], births[-1]
        if prev.shape[0] == 0:
            break
        common = adj[prev[:, 0]].copy()
        for j in range(1, prev.shape[1]):
            common &= adj[prev[:, j]]
        # extend only by larger vertices, so each clique is generated once, in order
        common &= np.arange(n)[None, :] > prev[:, -1:]
        rows, verts = np.nonzero(common)
        total += rows.size
        if total > budget:
            raise DomainError(f"simplex budget of {budget} exceeded while enumerating cliques")
        new = np.hstack([prev[rows], verts[:, None]])
        nb = np.maximum(pb[rows], d[prev[rows], verts[:, None]].max(axis=1) / 2.0)
        cliques.append(new)
        births.append(nb)
    while len(cliques) > 1 and cliques[-1].shape[0] == 0:
        cliques.pop()
        births.pop()
    return cliques, births


def rips_complex(
    d: np.ndarray,
    r: float,
    q_max_build: int = DEFAULT_QMAX_BUILD,
    *,
    strict_overlap: bool = False,
    budget: int = DEFAULT_SIMPLEX_BUDGET,
) -> SimplicialComplex:
    """Vietoris-Rips complex at radius ``r``: simplices whose vertices are pairwise within ``2r``.

    ``strict_overlap`` switches the membership test from ``d <= 2r`` to ``d < 2r``.
    """
    if r < 0:
        raise InputError("radius must be non-negative")
    if q_max_build < 0:
        raise InputError("q_max_build must be non-negative")
    d = _as_distances(d)
    cliques, _ = _clique_levels(d, 2.0 * r, q_max_build, strict_overlap, budget)
    return SimplicialComplex._trusted(tuple(tuple(map(tuple, c.tolist())) for c in cliques))


@dataclass(frozen=True, eq=False)
class Filtration:
    """Nested family of complexes indexed by radius.

    Each simplex carries a birth radius; the snapshot at ``r`` holds every
    simplex born at or before ``r`` (strictly before when ``strict_overlap``,
    vertices excepted).  ``distances`` is ``None`` for hand-built filtrations.
    """

    schedule: np.ndarray
    levels: tuple[np.ndarray, ...]
    births: tuple[np.ndarray, ...]
    distances: np.ndarray | None = None
    q_max_build: int = DEFAULT_QMAX_BUILD
    strict_overlap: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        s = np.array(self.schedule, dtype=float).reshape(-1)
        if s.size == 0:
            raise InputError("radius schedule is empty")
        if np.any(np.diff(s) <= 0):
            raise InputError("radius schedule must be strictly increasing")
        if s[0] < 0:
            raise InputError("radii must be non-negative")
        object.__setattr__(self, "schedule", _readonly(s))

    @classmethod
    def from_births(
        cls,
        births: Mapping[Sequence[int], float],
        schedule: Sequence[float],
        *,
        strict_overlap: bool = False,
    ) -> "Filtration":
        """Hand-built filtration from an explicit simplex -> birth-radius map.

        The map must be face-closed with births non-decreasing along faces.
        """
        table = {tuple(sorted(int(v) for v in s)): float(b) for s, b in births.items()}
        top = max((len(s) - 1 for s in table), default=-1)
        levels, bs = [], []
        for q in range(top + 1):
            keys = sorted(s for s in table if len(s) == q + 1)
            for s in keys:
                for i in range(q + 1 if q > 0 else 0):
                    face = s[:i] + s[i + 1 :]
                    if face not in table:
                        raise InputError(f"face {face} of {s} has no birth radius")
                    if table[face] > table[s]:
                        raise InputError(f"face {face} is born after {s}")
            levels.append(np.array(keys, dtype=np.int64).reshape(len(keys), q + 1))
            bs.append(np.array([table[s] for s in keys]))
        return cls(schedule, tuple(levels), tuple(bs), None, max(top, 0), strict_overlap)

    @property
    def delta_r(self) -> float | None:
        """Uniform grid spacing, or ``None`` when the schedule is not uniform."""
        if self.schedule.size < 2:
            return None
        steps = np.diff(self.schedule)
        if np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
            return float(steps[0])
        return None

    def birth(self, s: Sequence[int]) -> float:
        t = tuple(sorted(s))
        q = len(t) - 1
        if q >= len(self.levels):
            raise InputError(f"{t} is not in the filtration")
        hit = np.nonzero(np.all(self.levels[q] == np.array(t), axis=1))[0]
        if hit.size == 0:
            raise InputError(f"{t} is not in the filtration")
        return float(self.births[q][hit[0]])

    def birth_map(self) -> dict[Simplex, float]:
        return {
            tuple(row): float(b)
            for lev, bs in zip(self.levels, self.births)
            for row, b in zip(lev.tolist(), bs)
        }

    def check_radius(self, r: float) -> float:
        """Reject radii outside the schedule range; snap near-grid radii onto the grid.

        Snapping makes ``t + p`` land exactly on a schedule radius even when the
        addition rounds, so a simplex born at that radius is not lost.
        """
        lo, hi = self.schedule[0], self.schedule[-1]
        slack = 1e-12 * max(1.0, abs(hi))
        if not (lo - slack <= r <= hi + slack):
            raise InputError(f"radius {r} lies outside the schedule [{lo}, {hi}]")
        i = int(np.clip(np.searchsorted(self.schedule, r), 1, self.schedule.size) - 1)
        for j in (i, min(i + 1, self.schedule.size - 1)):
            if abs(self.schedule[j] - r) <= slack:
                return float(self.schedule[j])
        return float(r)

    def snapshot(self, r: float) -> SimplicialComplex:
        """Complex K_r (not range-checked; use :meth:`check_radius` for that)."""
        key = float(r)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = []
        for q, (lev, bs) in enumerate(zip(self.levels, self.births)):
            mask = within_reach(bs, r, self.strict_overlap and q > 0)
            out.append(tuple(map(tuple, lev[mask].tolist())))
        k = SimplicialComplex._trusted(tuple(out))
        if len(self._cache) < 4096:
            self._cache[key] = k
        return k

    def __len__(self) -> int:
        return int(self.schedule.size)

    def __getitem__(self, i: int) -> SimplicialComplex:
        return self.snapshot(self.schedule[i])

    def critical_radii(self) -> np.ndarray:
        """Distinct birth radii (the radii at which the complex changes)."""
        return np.unique(np.concatenate([b for b in self.births if b.size]))


def filtration(
    d: np.ndarray,
    schedule: Sequence[float],
    q_max_build: int = DEFAULT_QMAX_BUILD,
    *,
    strict_overlap: bool = False,
    budget: int = DEFAULT_SIMPLEX_BUDGET,
) -> Filtration:
    """Rips filtration of ``d`` over ``schedule``, built once at the largest radius."""
    d = _as_distances(d)
    sched = np.array(schedule, dtype=float).reshape(-1)
    if sched.size == 0:
        raise InputError("radius schedule is empty")
    cliques, births = _clique_levels(d, 2.0 * float(sched.max()), q_max_build, strict_overlap, budget)
    for c, b in zip(cliques, births):
        _readonly(c)
        _readonly(b)
    return Filtration(sched, tuple(cliques), tuple(births), d, q_max_build, strict_overlap)


def uniform_schedule(r_min: float, r_max: float, dr: float) -> np.ndarray:
    """Grid ``r_min, r_min + dr, ...`` up to ``r_max`` inclusive (with rounding slack)."""
    if dr <= 0:
        raise InputError("grid spacing must be positive")
    if r_max < r_min:
        raise InputError("r_max must not be below r_min")
    n = int(np.floor((r_max - r_min) / dr + 1e-9)) + 1
    # multiply rather than accumulate so grid points stay exact multiples of dr
    return np.round(r_min + dr * np.arange(n), 12)


# ---------------------------------------------------------------------------
# Graph matrices
# ---------------------------------------------------------------------------


def graph_matrices(K: SimplicialComplex) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Adjacency, degree and graph Laplacian of the 1-skeleton (vertex basis order)."""
    pos = K.index(0)
    n = len(pos)
    a = np.zeros((n, n), dtype=np.int64)
    for u, v in K[1]:
        i, j = pos[(u,)], pos[(v,)]
        a[i, j] = a[j, i] = 1
    deg = np.diag(a.sum(axis=1))
    return a, deg, deg - a
