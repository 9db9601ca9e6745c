from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from perslap.complex import SimplicialComplex, build_distance_matrix, filtration

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def point_clouds(draw, min_points: int = 2, max_points: int = 8, dims=(2, 3)):
    """Small uniform random clouds in the unit square or cube."""
    n = draw(st.integers(min_points, max_points))
    dim = draw(st.sampled_from(dims))
    seed = draw(st.integers(0, 2**32 - 1))
    return np.random.default_rng(seed).random((n, dim))


@st.composite
def random_complexes(draw, max_vertices: int = 7, max_dim: int = 3):
    """Face closure of a few random simplices."""
    n = draw(st.integers(1, max_vertices))
    k = draw(st.integers(1, 6))
    tops = []
    for _ in range(k):
        size = draw(st.integers(1, min(n, max_dim + 1)))
        tops.append(draw(st.permutations(range(n)))[:size])
    return SimplicialComplex.from_simplices(tops)


def random_rips(seed: int, n: int | None = None, r: float | None = None, q_max: int = 3):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(4, 10))
    x = rng.random((n, int(rng.integers(2, 4))))
    d = build_distance_matrix(x)
    r = r if r is not None else float(rng.uniform(0.2, 0.6))
    return x, d, filtration(d, [r], q_max).snapshot(r)


def all_cliques(d: np.ndarray, limit: float, max_size: int) -> set[tuple[int, ...]]:
    """Brute force: every vertex subset whose pairwise distances are within ``limit``."""
    n = d.shape[0]
    out = set()
    for size in range(1, max_size + 1):
        for c in itertools.combinations(range(n), size):
            if all(d[i, j] <= limit for i, j in itertools.combinations(c, 2)):
                out.add(c)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    def record(number: int, passed: bool, detail: str) -> None:
        ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
