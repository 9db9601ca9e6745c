"""Spectral curves and the two regression workflows built on them.

Fullerene stability: each structure's spectral curve is integrated into an
area, and the areas are fitted linearly to heats of formation.

B-factors: each residue gets one feature per radius, the diagonal entry of the
pseudoinverse of the contact-graph Laplacian, and the features are fitted
linearly to the experimental B-factors.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

import numpy as np

from .boundary import Weight
from .complex import PointCloud, build_distance_matrix, filtration, uniform_schedule
from .errors import DomainError, InputError
from .spectral import (
    DEFAULT_TAU,
    STATISTICS,
    Spectrum,
    laplacian_q,
    pseudoinverse,
    spectral_stats,
    weighted_laplacian0,
)

CURVE_STATISTICS = STATISTICS + ("betti",)
BFACTOR_SCHEDULE = tuple(float(r) for r in range(2, 13))
FULLERENE_DR = 0.01

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    """Worker cap from ``PERSLAP_THREADS`` (default 1, i.e. serial)."""
    raw = os.environ.get("PERSLAP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"PERSLAP_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """Order-preserving map; results are reduced by the caller in input order."""
    items = list(items)
    n = thread_count() if threads is None else max(1, threads)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpectralCurve:
    """One statistic of L_q^{r+0} sampled on a uniform radius grid."""

    radii: np.ndarray
    values: np.ndarray
    alpha: str
    q: int
    dr: float

    def __post_init__(self) -> None:
        if self.radii.shape != self.values.shape or self.radii.ndim != 1:
            raise InputError("radii and values must be matching 1-D arrays")

    def __len__(self) -> int:
        return self.radii.size


def statistic(s: Spectrum | None, alpha: str) -> float:
    """Value of ``alpha`` for one spectrum; an absent Laplacian or ``sec`` reads as 0."""
    if alpha not in CURVE_STATISTICS:
        raise InputError(f"unknown statistic {alpha!r}; expected one of {CURVE_STATISTICS}")
    if s is None or len(s) == 0:
        return 0.0
    if alpha == "betti":
        return float(s.betti)
    value = spectral_stats(s)[alpha]
    return 0.0 if value is None else float(value)


def _grid_step(schedule: np.ndarray) -> float:
    if schedule.size < 2:
        return 0.0
    steps = np.diff(schedule)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-6, atol=1e-12):
        raise InputError("schedule must be uniform and strictly increasing")
    return float(steps[0])


def curve_spectra(
    d: np.ndarray,
    schedule: Sequence[float],
    q: int = 0,
    mode: Weight | str = Weight.NONE,
    *,
    tau: float = DEFAULT_TAU,
    strict_overlap: bool = False,
    threads: int | None = None,
) -> list[Spectrum | None]:
    """Spectra of L_q^{r+0} for every ``r`` in ``schedule`` (``None`` where K_r has no q-simplices).

    ``q = 0`` goes straight from distances to the contact-graph Laplacian.
    Higher ``q`` builds one filtration and reads snapshots from it.
    """
    sched = np.asarray(schedule, dtype=float)
    mode = Weight.parse(mode)
    if q < 0:
        raise InputError("q must be non-negative")
    if q == 0:
        def one(r: float) -> Spectrum:
            return weighted_laplacian0(d, r, mode, strict_overlap=strict_overlap).spectrum(tau)
        return parallel_map(one, sched, threads)
    f = filtration(d, sched, q_max_build=q + 1, strict_overlap=strict_overlap)

    def one_q(r: float) -> Spectrum | None:
        K = f.snapshot(r)
        if K.count(q) == 0:
            return None
        return laplacian_q(K, q, mode, f.distances).spectrum(tau)

    return parallel_map(one_q, sched, threads)


def spectral_curve(
    d: np.ndarray,
    schedule: Sequence[float],
    q: int = 0,
    alpha: str = "sec",
    mode: Weight | str = Weight.NONE,
    *,
    tau: float = DEFAULT_TAU,
    strict_overlap: bool = False,
    threads: int | None = None,
) -> SpectralCurve:
    """Statistic ``alpha`` of L_q^{r+0} along a uniform schedule."""
    sched = np.asarray(schedule, dtype=float)
    if sched.size == 0:
        raise InputError("schedule is empty")
    dr = _grid_step(sched)
    alpha = alpha.lower()
    statistic(None, alpha)  # validates the name before any work
    spectra = curve_spectra(d, sched, q, mode, tau=tau, strict_overlap=strict_overlap, threads=threads)
    values = np.array([statistic(s, alpha) for s in spectra])
    return SpectralCurve(sched, values, alpha, q, dr)


def area_under_curve(c: SpectralCurve) -> float:
    """Negative Riemann sum ``-sum(values) * dr``."""
    if len(c) == 0:
        raise InputError("curve is empty")
    return -float(np.sum(c.values)) * c.dr


def curve_jumps(c: SpectralCurve, atol: float = 1e-9) -> np.ndarray:
    """Radii at which the curve value changes from the previous grid point."""
    change = np.abs(np.diff(c.values)) > atol * np.maximum(1.0, np.abs(c.values[:-1]))
    return c.radii[1:][change]


# ---------------------------------------------------------------------------
# Regression helpers
# ---------------------------------------------------------------------------


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation coefficient."""
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise InputError("pearson needs two equal-length sequences of at least 2 values")
    da, db = a - a.mean(), b - b.mean()
    na, nb = np.sqrt(da @ da), np.sqrt(db @ db)
    scale_a = max(1.0, float(np.abs(a).max()))
    scale_b = max(1.0, float(np.abs(b).max()))
    if na <= 1e-14 * scale_a * np.sqrt(a.size) or nb <= 1e-14 * scale_b * np.sqrt(b.size):
        raise DomainError("correlation undefined: an input has zero variance")
    return float(np.clip((da @ db) / (na * nb), -1.0, 1.0))


def add_intercept(x: np.ndarray) -> np.ndarray:
    """Prepend a column of ones."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    return np.hstack([np.ones((x.shape[0], 1)), x])


def linear_least_squares(x: np.ndarray, y: Sequence[float]) -> np.ndarray:
    """Minimum-norm least-squares weights (SVD based; tolerates rank deficiency)."""
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.ndim != 2 or b.shape != (a.shape[0],):
        raise InputError(f"shape mismatch: X {a.shape}, y {b.shape}")
    if a.shape[0] < a.shape[1]:
        raise InputError("need at least as many rows as columns")
    w, *_ = np.linalg.lstsq(a, b, rcond=None)
    return w


# ---------------------------------------------------------------------------
# Fullerene stability
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StabilityModel:
    """Per-structure areas, the linear energy model fitted to them, and its correlation."""

    alpha: str
    q: int
    names: tuple[str, ...]
    areas: np.ndarray
    energies: np.ndarray
    slope: float
    intercept: float
    predictions: np.ndarray
    pearson: float

    def rows(self) -> list[dict[str, object]]:
        return [
            {"name": n, "area": a, "energy": e, "predicted": p}
            for n, a, e, p in zip(self.names, self.areas, self.energies, self.predictions)
        ]


def default_fullerene_schedule(cloud: PointCloud, dr: float = FULLERENE_DR) -> np.ndarray:
    """0 to half the structure diameter plus one step."""
    d = build_distance_matrix(cloud)
    return uniform_schedule(0.0, float(d.max()) / 2.0 + dr, dr)


def fullerene_pipeline(
    structures: Mapping[str, PointCloud] | Sequence[tuple[str, PointCloud]],
    energies: Mapping[str, float] | Sequence[float],
    alpha: str = "max",
    schedule: Sequence[float] | None = None,
    *,
    q: int = 0,
    mode: Weight | str = Weight.NONE,
    dr: float = FULLERENE_DR,
    threads: int | None = None,
) -> StabilityModel:
    """Fit ``energy = slope * area + intercept`` over a family of structures.

    With ``schedule=None`` each structure uses its own grid from 0 to half
    its diameter plus ``dr``.
    """
    items = list(structures.items()) if isinstance(structures, Mapping) else list(structures)
    names = tuple(n for n, _ in items)
    if isinstance(energies, Mapping):
        missing = [n for n in names if n not in energies]
        if missing:
            raise InputError(f"no energy for {', '.join(missing)}")
        e = np.array([energies[n] for n in names], dtype=float)
    else:
        e = np.asarray(energies, dtype=float)
    if e.shape != (len(items),):
        raise InputError(f"{len(items)} structures but {e.size} energies")
    if len(items) < 3:
        raise InputError("need at least 3 structures")

    def area(item: tuple[str, PointCloud]) -> float:
        cloud = item[1]
        sched = default_fullerene_schedule(cloud, dr) if schedule is None else schedule
        curve = spectral_curve(build_distance_matrix(cloud), sched, q, alpha, mode, threads=1)
        return area_under_curve(curve)

    areas = np.array(parallel_map(area, items, threads))
    w = linear_least_squares(add_intercept(areas), e)
    pred = add_intercept(areas) @ w
    return StabilityModel(alpha, q, names, areas, e, float(w[1]), float(w[0]), pred, pearson(pred, e))


# ---------------------------------------------------------------------------
# B-factors
# ---------------------------------------------------------------------------


def bfactor_features(
    cloud: PointCloud | np.ndarray,
    schedule: Sequence[float] = BFACTOR_SCHEDULE,
    mode: Weight | str = Weight.NONE,
    *,
    tau: float = DEFAULT_TAU,
    threads: int | None = None,
) -> np.ndarray:
    """Raw features: column ``k`` holds the diagonal of pinv(L_0) at radius ``schedule[k]``."""
    d = build_distance_matrix(cloud)

    def column(r: float) -> np.ndarray:
        return np.diag(pseudoinverse(weighted_laplacian0(d, r, mode), tau)).copy()

    return np.stack(parallel_map(column, list(schedule), threads), axis=1)


def standardize(features: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-column z-scores; constant columns are only centred."""
    x = np.asarray(features, dtype=float)
    means = x.mean(axis=0)
    scales = x.std(axis=0)
    scales = np.where(scales > 1e-12 * np.maximum(1.0, np.abs(means)), scales, 1.0)
    return (x - means) / scales, means, scales


@dataclass(frozen=True, eq=False)
class BFactorModel:
    """Linear B-factor model on standardized features; ``weights[0]`` is the intercept."""

    schedule: tuple[float, ...]
    means: np.ndarray
    scales: np.ndarray
    weights: np.ndarray
    predictions: np.ndarray
    pearson: float


def bfactor_predict(model: BFactorModel, features: np.ndarray) -> np.ndarray:
    """Predictions for raw features, using the stored column scaling."""
    x = (np.asarray(features, dtype=float) - model.means) / model.scales
    if x.shape[1] != model.weights.size - 1:
        raise InputError(f"expected {model.weights.size - 1} feature columns, got {x.shape[1]}")
    return add_intercept(x) @ model.weights


def bfactor_fit(
    features: np.ndarray, b_exp: Sequence[float], schedule: Sequence[float] = BFACTOR_SCHEDULE
) -> BFactorModel:
    """Standardize raw features, fit by least squares, report Pearson against ``b_exp``."""
    x = np.asarray(features, dtype=float)
    y = np.asarray(b_exp, dtype=float)
    if x.ndim != 2 or y.shape != (x.shape[0],):
        raise InputError(f"features {x.shape} and B-factors {y.shape} do not match")
    if x.shape[1] != len(schedule):
        raise InputError(f"{x.shape[1]} feature columns for a schedule of {len(schedule)} radii")
    z, means, scales = standardize(x)
    w = linear_least_squares(add_intercept(z), y)
    pred = add_intercept(z) @ w
    return BFactorModel(tuple(float(r) for r in schedule), means, scales, w, pred, pearson(pred, y))


def bfactor_pipeline(
    cloud: PointCloud, schedule: Sequence[float] = BFACTOR_SCHEDULE, mode: Weight | str = Weight.NONE
) -> BFactorModel:
    """Features, fit and correlation for a C-alpha cloud carrying B-factors."""
    if cloud.bfactors is None:
        raise InputError("point cloud has no B-factors")
    return bfactor_fit(bfactor_features(cloud, schedule, mode), cloud.bfactors, schedule)
