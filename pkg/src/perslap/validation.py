"""Cross-check of Laplacian nullities against the exact homology oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complex import Filtration, build_distance_matrix, filtration
from .homology import PersistenceOracle
from .spectral import DEFAULT_TAU, persistent_spectrum


@dataclass
class CrossCheck:
    """Tally of compared (t, t+p, q) cells; ``mismatches`` holds (t, t+p, q, laplacian, exact)."""

    cells: int = 0
    mismatches: list[tuple[float, float, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def merge(self, other: "CrossCheck") -> None:
        self.cells += other.cells
        self.mismatches += other.mismatches


def cross_check(
    f: Filtration,
    q_max: int = 2,
    radii: Sequence[float] | None = None,
    *,
    construction: str = "subspace",
    tau: float = DEFAULT_TAU,
) -> CrossCheck:
    """Compare persistent Betti numbers from both routes for every radius pair and q.

    ``radii`` defaults to the filtration's schedule.  An absent Laplacian
    (no q-simplices at ``t``) counts as zero harmonic eigenvalues.
    """
    oracle = PersistenceOracle(f)
    grid = list(f.schedule if radii is None else radii)
    out = CrossCheck()
    for i, t in enumerate(grid):
        for s in grid[i:]:
            p = s - t
            for q in range(q_max + 1):
                spectrum = persistent_spectrum(f, t, p, q, tau=tau, construction=construction)
                lap = 0 if spectrum is None else spectrum.betti
                exact = oracle.betti(t, p, q)
                out.cells += 1
                if lap != exact:
                    out.mismatches.append((float(t), float(s), q, lap, exact))
    return out


def event_filtration(d: np.ndarray, q_max: int = 2) -> Filtration:
    """Filtration sampled at radius 0 and at every distinct edge birth radius."""
    n = d.shape[0]
    births = np.unique(d[np.triu_indices(n, 1)] / 2.0)
    sched = np.unique(np.concatenate([[0.0], births]))
    return filtration(d, sched, q_max_build=q_max + 1)


def random_cross_check(
    n_clouds: int,
    seed: int = 0,
    max_points: int = 8,
    q_max: int = 2,
    *,
    construction: str = "subspace",
) -> CrossCheck:
    """Cross-check on random clouds of 3..``max_points`` points in the unit square or cube."""
    rng = np.random.default_rng(seed)
    out = CrossCheck()
    for _ in range(n_clouds):
        n = int(rng.integers(3, max_points + 1))
        dim = int(rng.integers(2, 4))
        d = build_distance_matrix(rng.random((n, dim)))
        out.merge(cross_check(event_filtration(d, q_max), q_max, construction=construction))
    return out
