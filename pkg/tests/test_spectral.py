import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from perslap import datasets
from perslap.boundary import Weight, boundary_matrix
from perslap.complex import (
    SimplicialComplex,
    build_distance_matrix,
    filtration,
    graph_matrices,
    rips_complex,
)
from perslap.errors import DomainError, InputError
from perslap.homology import connected_components
from perslap.spectral import (
    Spectrum,
    eigvalsh,
    laplacian_entrywise,
    laplacian_q,
    persistent_boundary_matrix,
    persistent_laplacian,
    persistent_spectrum,
    pseudoinverse,
    smallest_nonzero,
    spectral_stats,
    weighted_laplacian0,
)

from conftest import point_clouds, random_complexes, random_rips

PLATONIC_LAMBDA2 = {
    "tetrahedron": (4.00, 1e-3),
    "octahedron": (4.00, 1e-3),
    "cube": (2.00, 1e-3),
    "dodecahedron": (0.7639, 1e-3),
    "icosahedron": (2.76, 1e-2),
}
# edge connectivity of each platonic graph, used by the algebraic connectivity lower bound
PLATONIC_EDGE_CONNECTIVITY = {"tetrahedron": 3, "octahedron": 4, "cube": 3, "dodecahedron": 3, "icosahedron": 5}


# -- eigen-solver and zero rule ---------------------------------------------


def test_eigvalsh_small_cases():
    lap = 4 * np.eye(4) - np.ones((4, 4))
    assert np.allclose(eigvalsh(lap), [0, 4, 4, 4], atol=1e-12)
    assert np.allclose(eigvalsh(np.eye(3)), [1, 1, 1])
    assert np.allclose(eigvalsh(np.array([[1.0, -1.0], [-1.0, 1.0]])), [0, 2], atol=1e-15)
    assert eigvalsh(np.zeros((0, 0))).size == 0


def test_eigvalsh_rejects_asymmetric_and_non_square():
    with pytest.raises(InputError):
        eigvalsh(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InputError):
        eigvalsh(np.zeros((2, 3)))


def test_zero_rule_and_betti():
    assert Spectrum([0, 0, 2, 2, 4]).betti == 2
    assert Spectrum([4, 4, 4, 4]).betti == 0
    assert Spectrum(np.zeros(5)).betti == 5
    # threshold is relative to the largest eigenvalue, floored at 1
    assert Spectrum([1e-10, 1.0]).betti == 1
    assert Spectrum([1e-6, 1e4]).betti == 1
    assert Spectrum([1e-6, 1e2]).betti == 0
    with pytest.raises(InputError):
        Spectrum([1.0], tau=0).betti


def test_statistics_by_hand():
    s = spectral_stats(Spectrum([0, 4, 4, 4]))
    assert s == {"sum": 12.0, "avg": 3.0, "max": 4.0, "std": pytest.approx(math.sqrt(3)), "var": 3.0, "sec": 4.0}
    z = spectral_stats(Spectrum([0.0]))
    assert (z["sum"], z["avg"], z["max"], z["var"], z["sec"]) == (0.0, 0.0, 0.0, 0.0, None)
    t = spectral_stats(Spectrum([0, 0, 2, 2, 4]))
    assert (t["sum"], t["avg"], t["max"], t["sec"]) == (8.0, 1.6, 4.0, 2.0)
    assert smallest_nonzero(Spectrum([0, 0])) is None
    with pytest.raises(InputError):
        spectral_stats(Spectrum([]))


@given(st.lists(st.floats(0, 50), min_size=1, max_size=12))
def test_statistics_match_numpy_population_moments(values):
    s = spectral_stats(Spectrum(values))
    assert s["var"] == pytest.approx(np.var(values), rel=1e-9, abs=1e-9)
    assert s["std"] == pytest.approx(np.std(values), rel=1e-9, abs=1e-9)
    assert s["sum"] == pytest.approx(sum(values), rel=1e-12, abs=1e-12)


# -- combinatorial Laplacians -----------------------------------------------


@pytest.mark.parametrize("name", list(PLATONIC_LAMBDA2))
def test_platonic_graph_connectivity_value(name):
    K = datasets.platonic_graph(name)
    s = laplacian_q(K, 0).spectrum()
    value, tol = PLATONIC_LAMBDA2[name]
    assert s.betti == 1
    assert s.lambda2_tilde == pytest.approx(value, abs=tol)
    n = K.count(0)
    if K.count(1) < n * (n - 1) // 2:
        bound = 2 * PLATONIC_EDGE_CONNECTIVITY[name] * (1 - math.cos(math.pi / n))
        assert s.lambda2_tilde >= bound - 1e-12


def test_dodecahedron_value_is_three_minus_root_five():
    s = laplacian_q(datasets.platonic_graph("dodecahedron"), 0).spectrum()
    assert s.lambda2_tilde == pytest.approx(3 - math.sqrt(5), abs=1e-12)


def test_kite_edge_laplacian_spectrum():
    K = datasets.kite_complex()
    lap = laplacian_q(K, 1)
    expected = sorted([3, (5 - 5**0.5) / 2, (5 + 5**0.5) / 2, (5 - 13**0.5) / 2, (5 + 13**0.5) / 2])
    assert lap.dim == 5
    assert np.allclose(lap.spectrum().eigenvalues, expected, atol=1e-12)


def test_kite_spectrum_independent_of_orientation():
    """Reversing vertex order flips every orientation; the spectrum must not move."""
    K = datasets.kite_complex()
    flipped = K.relabel([0, 5, 4, 3, 2, 1])
    a = laplacian_q(K, 1).spectrum().eigenvalues
    b = laplacian_q(flipped, 1).spectrum().eigenvalues
    assert np.allclose(a, b, atol=1e-12)


def test_tetrahedron_family_laplacians():
    skeleton, shell, solid = datasets.tetrahedron_complexes()
    assert np.array_equal(laplacian_q(shell, 1).matrix, 4 * np.eye(6))
    assert np.array_equal(laplacian_q(solid, 2).matrix, 4 * np.eye(4))
    printed_l1 = np.array(
        [
            [2, 1, 1, -1, -1, 0],
            [1, 2, 1, 1, 0, -1],
            [1, 1, 2, 0, 1, 1],
            [-1, 1, 0, 2, 1, -1],
            [-1, 0, 1, 1, 2, 1],
            [0, -1, 1, -1, 1, 2],
        ]
    )
    assert np.array_equal(laplacian_q(skeleton, 1).matrix, printed_l1)
    printed_l2 = np.array([[3, 1, -1, 1], [1, 3, 1, -1], [-1, 1, 3, 1], [1, -1, 1, 3]])
    assert np.array_equal(laplacian_q(shell, 2).matrix, printed_l2)


def test_edgeless_zero_laplacian_and_domain_errors():
    K = SimplicialComplex.from_simplices([(0,), (1,), (2,)])
    assert not laplacian_q(K, 0).matrix.any()
    with pytest.raises(DomainError):
        laplacian_q(K, 1)
    with pytest.raises(DomainError):
        laplacian_entrywise(K, 2)


def test_graph_laplacian_agrees_with_q0():
    K = datasets.platonic_graph("cube")
    _, _, lap = graph_matrices(K)
    assert np.array_equal(laplacian_q(K, 0).matrix, lap)


@given(random_complexes())
def test_entrywise_assembly_equals_product_assembly(K):
    for q in range(K.dim + 1):
        assert np.array_equal(laplacian_entrywise(K, q), laplacian_q(K, q).matrix.astype(np.int64))


@given(point_clouds(min_points=3, max_points=8), st.floats(0.1, 0.6))
def test_laplacians_are_symmetric_psd(x, r):
    d = build_distance_matrix(x)
    K = rips_complex(d, r)
    for q in range(K.dim + 1):
        for mode in Weight:
            try:
                lap = laplacian_q(K, q, mode, d)
            except DomainError:
                continue
            m = lap.matrix
            assert np.array_equal(m, m.T)
            s = lap.spectrum()
            assert s.eigenvalues[0] >= -s.threshold


@given(point_clouds(min_points=3, max_points=8), st.floats(0.1, 0.6), st.randoms(use_true_random=False))
def test_spectra_invariant_under_point_relabeling(x, r, rnd):
    perm = list(range(len(x)))
    rnd.shuffle(perm)
    d = build_distance_matrix(x)
    dp = build_distance_matrix(x[perm])
    K, Kp = rips_complex(d, r), rips_complex(dp, r)
    for q in range(K.dim + 1):
        for mode in (Weight.NONE, Weight.VOLUME):
            try:
                a = laplacian_q(K, q, mode, d).spectrum().eigenvalues
            except DomainError:
                continue
            b = laplacian_q(Kp, q, mode, dp).spectrum().eigenvalues
            assert np.abs(a - b).max(initial=0) <= 1e-9 * max(1.0, float(np.abs(a).max(initial=0)))


@pytest.mark.parametrize("seed", range(100))
def test_graph_spectral_bounds(seed):
    _, _, K = random_rips(seed, q_max=1)
    _, deg, _ = graph_matrices(K)
    ev = laplacian_q(K, 0).spectrum().eigenvalues
    degs = np.diag(deg)
    pos = K.index(0)
    if K.count(1):
        edge_bound = max(degs[pos[(u,)]] + degs[pos[(v,)]] for u, v in K[1])
        assert ev[-1] <= edge_bound + 1e-9
    assert ev[0] >= -1e-9
    assert ev[-1] <= 2 * degs.max() + 1e-9


@pytest.mark.parametrize("seed", range(30))
def test_zero_multiplicity_counts_components(seed):
    _, _, K = random_rips(seed)
    assert laplacian_q(K, 0).spectrum().betti == connected_components(K)


# -- weighted ----------------------------------------------------------------


def test_weighted_laplacian0_two_points():
    one = build_distance_matrix(np.array([[0.0], [1.0]]))
    two = build_distance_matrix(np.array([[0.0], [2.0]]))
    assert np.array_equal(weighted_laplacian0(one, 1.0).matrix, [[1, -1], [-1, 1]])
    assert np.allclose(weighted_laplacian0(two, 1.5, "vol").matrix, [[2, -2], [-2, 2]])
    assert np.allclose(weighted_laplacian0(two, 1.5, "inv").matrix, [[0.5, -0.5], [-0.5, 0.5]])
    assert not weighted_laplacian0(two, 0.9).matrix.any()


def test_weighted_laplacian0_errors():
    same = build_distance_matrix(np.array([[0.0], [0.0]]))
    with pytest.raises(DomainError):
        weighted_laplacian0(same, 0.1, "inv")
    with pytest.raises(InputError):
        weighted_laplacian0(same, -1)


@given(point_clouds(min_points=2, max_points=9), st.floats(0.0, 0.8))
def test_direct_and_complex_routes_agree_for_q0(x, r):
    d = build_distance_matrix(x)
    K = rips_complex(d, r, q_max_build=1)
    for mode in Weight:
        direct = weighted_laplacian0(d, r, mode).matrix
        via_complex = laplacian_q(K, 0, mode, d).matrix
        assert np.allclose(direct, via_complex, atol=1e-12)


@pytest.mark.parametrize("seed", range(50))
def test_weighting_preserves_nullity(seed):
    # 3-D points in general position: every simplex up to a tetrahedron has positive volume
    x = np.random.default_rng(seed).random((int(6 + seed % 4), 3))
    d = build_distance_matrix(x)
    K = rips_complex(d, 0.45)
    for q in range(K.dim + 1):
        plain = laplacian_q(K, q).spectrum().betti
        for mode in (Weight.VOLUME, Weight.INVERSE):
            for convention in ("consistent", "literal"):
                lap = laplacian_q(K, q, mode, d, convention=convention)
                assert lap.spectrum().betti == plain
                assert np.linalg.matrix_rank(lap.matrix, tol=1e-9 * max(1, np.abs(lap.matrix).max())) == (
                    lap.dim - plain
                )


# -- persistent --------------------------------------------------------------


def test_persistent_at_zero_offset_is_combinatorial():
    f = datasets.five_point_filtration()
    for r in datasets.FIVE_POINT_STAGES:
        K = f.snapshot(r)
        for q in range(K.dim + 1):
            assert np.array_equal(persistent_laplacian(f, r, 0.0, q).matrix, laplacian_q(K, q).matrix)


def test_persistent_spectrum_absent_without_simplices():
    f = datasets.five_point_filtration()
    assert persistent_spectrum(f, 0.0, 0.57, 1) is None
    with pytest.raises(DomainError):
        persistent_laplacian(f, 0.0, 0.57, 1)
    with pytest.raises(InputError):
        persistent_spectrum(f, 0.0, 3.0, 1)


@given(point_clouds(min_points=4, max_points=8), st.floats(0.15, 0.45), st.floats(0.01, 0.3))
def test_unchanged_upper_term_gives_identical_matrix(x, t, p):
    """No new (q+1)-simplex with all faces in K_t means the persistent matrix is the plain one, bit for bit."""
    d = build_distance_matrix(x)
    f = filtration(d, [t, t + p])
    K_t, K_s = f.snapshot(t), f.snapshot(t + p)
    for q in range(K_t.dim + 1):
        pb = persistent_boundary_matrix(f, t, p, q + 1)
        if pb.cols != K_t[q + 1]:
            continue
        a = persistent_laplacian(f, t, p, q).matrix
        b = laplacian_q(K_t, q).matrix
        assert np.array_equal(a, b)


def test_persistent_laplacian_is_symmetric_psd_on_five_points():
    f = datasets.five_point_filtration()
    st_ = datasets.FIVE_POINT_STAGES
    for i, t in enumerate(st_):
        for s in st_[i:]:
            for q in range(3):
                for c in ("subspace", "truncated", "selection"):
                    sp = persistent_spectrum(f, t, s - t, q, construction=c)
                    if sp is None:
                        continue
                    assert sp.eigenvalues[0] >= -sp.threshold


def test_persistent_vertex_chain_dimension():
    f = datasets.five_point_filtration()
    lap = persistent_laplacian(f, 0.57, 0.05, 0)
    assert lap.dim == 5 and lap.basis == tuple((i,) for i in range(5))
    b = boundary_matrix(f.snapshot(0.57), 1)
    assert b.shape == (5, 4)


# -- pseudoinverse -----------------------------------------------------------


def test_pseudoinverse_small_cases():
    assert np.allclose(pseudoinverse(np.array([[1.0, -1.0], [-1.0, 1.0]])), [[0.25, -0.25], [-0.25, 0.25]])
    assert np.allclose(pseudoinverse(np.eye(3)), np.eye(3))
    assert not pseudoinverse(np.zeros((3, 3))).any()


@pytest.mark.parametrize("seed", range(20))
def test_penrose_conditions(seed):
    _, d, K = random_rips(seed)
    for mode in Weight:
        m = weighted_laplacian0(d, 0.3 + 0.02 * seed, mode).matrix
        p = pseudoinverse(m)
        scale = max(1.0, np.abs(m).max())
        assert np.abs(m @ p @ m - m).max() <= 1e-8 * scale
        assert np.abs(p @ m @ p - p).max() <= 1e-8 * max(1.0, np.abs(p).max())
        assert np.abs((m @ p) - (m @ p).T).max() <= 1e-8
        assert np.abs((p @ m) - (p @ m).T).max() <= 1e-8
        assert np.allclose(p, np.linalg.pinv(m, rcond=1e-9, hermitian=True), atol=1e-8)
