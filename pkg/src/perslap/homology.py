"""Exact Betti numbers, used to check Laplacian nullities.

Nothing here touches floating point: boundary matrices are rebuilt as integer
lists and reduced with fraction-free elimination over the rationals, or mod 2.
"""

from __future__ import annotations

import math
import warnings
from typing import Sequence

from .complex import Filtration, Simplex, SimplicialComplex
from .errors import InputError, TorsionWarning

FIELDS = ("Q", "Z2")

IntMatrix = list[list[int]]


def integer_boundary(rows: Sequence[Simplex], cols: Sequence[Simplex]) -> IntMatrix:
    """Signed incidence matrix (rows x cols) as nested lists; faces absent from ``rows`` are dropped."""
    pos = {s: i for i, s in enumerate(rows)}
    m = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for i in range(len(s)):
            r = pos.get(s[:i] + s[i + 1 :])
            if r is not None:
                m[r][j] = (-1) ** i
    return m


def _check_field(field: str) -> None:
    if field not in FIELDS:
        raise InputError(f"unknown field {field!r}; expected one of {FIELDS}")


def rank(m: IntMatrix, field: str = "Q") -> int:
    """Exact rank; Bareiss elimination over Q, Gaussian elimination over Z/2."""
    _check_field(field)
    if not m or not m[0]:
        return 0
    if field == "Z2":
        # rows packed into Python ints as bit vectors
        rows = [sum(1 << j for j, v in enumerate(row) if v % 2) for row in m]
        r = 0
        basis: dict[int, int] = {}
        for v in rows:
            while v:
                top = v.bit_length() - 1
                if top in basis:
                    v ^= basis[top]
                else:
                    basis[top] = v
                    r += 1
                    break
        return r
    a = [list(row) for row in m]
    n_rows, n_cols = len(a), len(a[0])
    r, prev = 0, 1
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        for i in range(r + 1, n_rows):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            for k in range(c + 1, n_cols):
                # Bareiss step: exact division keeps entries integral and bounded
                row_i[k] = (pv * row_i[k] - f * row_r[k]) // prev
            row_i[c] = 0
        prev = pv
        r += 1
        if r == n_rows:
            break
    return r


class Echelon:
    """Incrementally grown basis of a subspace, kept in integer echelon form.

    Over Q each stored vector is divided by the gcd of its entries after every
    elimination step, so entries stay small without fractions.  Over Z/2
    vectors are bit masks.
    """

    def __init__(self, field: str = "Q") -> None:
        _check_field(field)
        self.field = field
        self._rows: dict[int, object] = {}  # leading index -> vector

    def copy(self) -> "Echelon":
        out = Echelon(self.field)
        out._rows = dict(self._rows)
        return out

    def __len__(self) -> int:
        return len(self._rows)

    def add(self, vector: Sequence[int]) -> bool:
        """Insert ``vector``; returns True when it enlarged the span."""
        if self.field == "Z2":
            v = sum(1 << j for j, x in enumerate(vector) if x % 2)
            while v:
                top = v.bit_length() - 1
                p = self._rows.get(top)
                if p is None:
                    self._rows[top] = v
                    return True
                v ^= p
            return False
        v = list(vector)
        n = len(v)
        lead = next((j for j in range(n) if v[j]), None)
        while lead is not None:
            p = self._rows.get(lead)
            if p is None:
                self._rows[lead] = _primitive(v)
                return True
            a, b = p[lead], v[lead]
            v = [a * x - b * y for x, y in zip(v, p)]
            lead = next((j for j in range(lead + 1, n) if v[j]), None)
            if lead is not None:
                v = _primitive(v)
        return False


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return v
    return [x // g for x in v] if g > 1 else v


def nullspace(m: IntMatrix, n_cols: int, field: str = "Q") -> IntMatrix:
    """Integer basis of the kernel of ``m`` (vectors of length ``n_cols``).

    Gauss-Jordan elimination with gcd-normalized integer rows; each free
    column yields one kernel vector, cleared of denominators.
    """
    _check_field(field)
    a = [[v % 2 for v in row] if field == "Z2" else list(row) for row in m]
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                if field == "Z2":
                    a[i] = [(x + y) % 2 for x, y in zip(a[i], pr)]
                else:
                    f, pv = a[i][c], pr[c]
                    a[i] = _primitive([pv * x - f * y for x, y in zip(a[i], pr)])
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    pivot_set = set(pivots)
    basis = []
    for fc in (c for c in range(n_cols) if c not in pivot_set):
        if field == "Z2":
            v = [0] * n_cols
            v[fc] = 1
            for row, pc in enumerate(pivots):
                v[pc] = a[row][fc] % 2
        else:
            # row: a_pc * x_pc + a_fc * x_fc = 0  =>  x_pc = -a_fc * L / a_pc with x_fc = L
            lcm = 1
            for row, pc in enumerate(pivots):
                if a[row][fc]:
                    lcm = lcm * abs(a[row][pc]) // math.gcd(lcm, abs(a[row][pc]))
            v = [0] * n_cols
            v[fc] = lcm
            for row, pc in enumerate(pivots):
                if a[row][fc]:
                    v[pc] = -a[row][fc] * lcm // a[row][pc]
            v = _primitive(v)
        basis.append(v)
    return basis


def _transpose(vectors: IntMatrix, n: int) -> IntMatrix:
    return [[v[i] for v in vectors] for i in range(n)]


def boundary_rank(K: SimplicialComplex, q: int, field: str = "Q") -> int:
    """Rank of the boundary map on q-chains (0 for ``q <= 0`` or no q-simplices)."""
    if q <= 0 or not K[q]:
        return 0
    return rank(integer_boundary(K[q - 1], K[q]), field)


def betti_numbers(K: SimplicialComplex, q_max: int, field: str = "Q") -> list[int]:
    """``[beta_0, ..., beta_{q_max}]`` as kernel dimension minus image rank."""
    _check_field(field)
    if q_max > K.dim + 1:
        raise InputError(f"q_max {q_max} exceeds dimension + 1 = {K.dim + 1}")
    ranks = [boundary_rank(K, q, field) for q in range(q_max + 2)]
    return [K.count(q) - ranks[q] - ranks[q + 1] for q in range(q_max + 1)]


def _boundary_echelon(K_s: SimplicialComplex, q: int, field: str) -> Echelon:
    """Echelon basis of the image of the boundary map on (q+1)-chains of ``K_s``."""
    ech = Echelon(field)
    rows = K_s[q]
    pos = {s: i for i, s in enumerate(rows)}
    for c in K_s[q + 1]:
        v = [0] * len(rows)
        for i in range(len(c)):
            v[pos[c[:i] + c[i + 1 :]]] = (-1) ** i
        ech.add(v)
    return ech


def _cycle_basis(K_t: SimplicialComplex, q: int, field: str) -> IntMatrix:
    if q == 0:
        return [[int(i == j) for i in range(K_t.count(0))] for j in range(K_t.count(0))]
    return nullspace(integer_boundary(K_t[q - 1], K_t[q]), K_t.count(q), field)


def _persistent_from_parts(
    K_t: SimplicialComplex, K_s: SimplicialComplex, q: int, cycles: IntMatrix, image: Echelon
) -> int:
    """``dim Z - dim(Z meet B)`` where ``dim(Z meet B) = dim Z + dim B - dim(Z + B)``."""
    dim_z = len(cycles)
    if dim_z == 0:
        return 0
    pos = K_s.index(q)
    slots = [pos[s] for s in K_t[q]]
    span = image.copy()
    dim_b = len(span)
    for z in cycles:
        v = [0] * K_s.count(q)
        for k, c in zip(slots, z):
            v[k] = c
        span.add(v)
    intersection = dim_z + dim_b - len(span)
    return dim_z - intersection


def persistent_betti_exact(
    K_t: SimplicialComplex, K_s: SimplicialComplex, q: int, field: str = "Q"
) -> int:
    """Dimension of the q-cycles of ``K_t`` modulo boundaries coming from ``K_s``.

    All spaces are written in the q-chains of ``K_s``.
    """
    _check_field(field)
    if q < 0 or not K_t[q]:
        return 0
    if not K_t.is_subcomplex_of(K_s):
        raise InputError("K_t must be a subcomplex of K_{t+p}")
    return _persistent_from_parts(
        K_t, K_s, q, _cycle_basis(K_t, q, field), _boundary_echelon(K_s, q, field)
    )


class PersistenceOracle:
    """Exact persistent Betti numbers of one filtration, caching per-radius work.

    Cycle bases depend only on ``t`` and boundary spans only on ``t + p``, so
    sweeping every pair of radii costs one span extension per pair.
    """

    def __init__(self, f: Filtration, field: str = "Q") -> None:
        _check_field(field)
        self.filtration = f
        self.field = field
        self._cycles: dict[tuple[float, int], IntMatrix] = {}
        self._images: dict[tuple[float, int], Echelon] = {}

    def betti(self, t: float, p: float, q: int) -> int:
        f = self.filtration
        if p < 0:
            raise InputError("p must be non-negative")
        t = f.check_radius(t)
        s = f.check_radius(t + p)
        K_t, K_s = f.snapshot(t), f.snapshot(s)
        if q < 0 or not K_t[q]:
            return 0
        cycles = self._cycles.get((t, q))
        if cycles is None:
            cycles = self._cycles[(t, q)] = _cycle_basis(K_t, q, self.field)
        image = self._images.get((s, q))
        if image is None:
            image = self._images[(s, q)] = _boundary_echelon(K_s, q, self.field)
        return _persistent_from_parts(K_t, K_s, q, cycles, image)


def persistent_betti_oracle(f: Filtration, t: float, p: float, q: int, field: str = "Q") -> int:
    """p-persistent q-th Betti number of the filtration at radius ``t``."""
    return PersistenceOracle(f, field).betti(t, p, q)


def compare_fields(K_t: SimplicialComplex, K_s: SimplicialComplex, q: int) -> int:
    """Rational persistent Betti number, warning when the mod-2 count differs."""
    over_q = persistent_betti_exact(K_t, K_s, q, "Q")
    over_2 = persistent_betti_exact(K_t, K_s, q, "Z2")
    if over_q != over_2:
        warnings.warn(
            f"q={q}: rational count {over_q} differs from mod-2 count {over_2} (torsion)",
            TorsionWarning,
            stacklevel=2,
        )
    return over_q


def connected_components(K: SimplicialComplex) -> int:
    """Component count of the 1-skeleton by union-find."""
    parent = {s[0]: s[0] for s in K[0]}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(parent)
    for u, v in K[1]:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count
