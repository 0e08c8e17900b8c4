import numpy as np
import pytest

from clustopt.errors import (
    AllZeroError,
    DimensionMismatchError,
    InvalidParamsError,
    NotSymmetricError,
    SizeLimitError,
)
from clustopt.graphs import build_graph, complete_graph, cycle_graph, laplacian
from clustopt.spectral import (
    JacobianSpec,
    build_jacobian,
    convergence_rate,
    default_zero_tol,
    eig_general,
    eig_symmetric,
    lambda2_laplacian,
    spectral_report,
)
from helpers import jacobi_eigenvalues, random_connected_graph


class TestEigSolvers:
    def test_identity(self):
        assert eig_symmetric(np.eye(3)).tolist() == [1.0, 1.0, 1.0]

    def test_rotation_generator(self):
        vals = eig_general(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        assert sorted(vals.imag.tolist()) == pytest.approx([-1.0, 1.0], abs=1e-12)
        assert vals.real == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_not_symmetric_rejected(self):
        with pytest.raises(NotSymmetricError):
            eig_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_size_cap(self):
        with pytest.raises(SizeLimitError):
            eig_symmetric(np.eye(5), size_cap=4)
        with pytest.raises(SizeLimitError):
            eig_general(np.eye(5), size_cap=4)

    def test_against_jacobi_oracle(self):
        rng = np.random.default_rng(19)
        m = rng.standard_normal((50, 50))
        m = m + m.T
        assert eig_symmetric(m) == pytest.approx(jacobi_eigenvalues(m), abs=1e-8)


class TestLambda2:
    @pytest.mark.parametrize("n", [4, 10, 25, 50])
    def test_complete_graph(self, n):
        assert lambda2_laplacian(complete_graph(n)) == pytest.approx(n, abs=1e-8)

    @pytest.mark.parametrize("n", [4, 7, 16, 50])
    def test_cycle(self, n):
        expected = 2.0 - 2.0 * np.cos(2.0 * np.pi / n)
        assert lambda2_laplacian(cycle_graph(n)) == pytest.approx(expected, abs=1e-8)

    def test_disconnected_is_zero(self):
        g = build_graph([(0, 1, 1), (2, 3, 1)], n=4)
        assert lambda2_laplacian(g) == 0.0

    def test_positive_iff_connected(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            g = random_connected_graph(rng, int(rng.integers(4, 30)))
            lam2 = lambda2_laplacian(g)
            assert 0.0 < lam2 <= g.n
            if g.edge_count < g.n * (g.n - 1) // 2:
                assert lam2 < g.n  # the bound is tight only on complete graphs

    def test_sparse_path_matches_dense(self):
        # above the dense cutoff the Lanczos path must agree with a direct solve
        rng = np.random.default_rng(55)
        g = random_connected_graph(rng, 2100, extra_p=0.002)
        lam2 = lambda2_laplacian(g)
        dense = np.sort(np.linalg.eigvalsh(laplacian(g)))[1]
        assert lam2 == pytest.approx(dense, rel=1e-8, abs=1e-10)


class TestJacobian:
    def test_single_node(self):
        spec = JacobianSpec(laplacian=np.zeros((1, 1)), alpha=0.5,
                            hessian_diag=np.array([2.0]))
        jac = build_jacobian(spec)
        assert jac.tolist() == [[0.0, -0.5], [0.0, -1.0]]
        vals = np.sort(eig_general(jac).real)
        assert vals == pytest.approx([-1.0, 0.0], abs=1e-14)

    def test_zero_curvature_doubles_laplacian_spectrum(self):
        rng = np.random.default_rng(3)
        g = random_connected_graph(rng, 12)
        lap = laplacian(g)
        spec = JacobianSpec(laplacian=lap, alpha=0.7,
                            hessian_diag=np.zeros(12))
        vals = np.sort(eig_general(build_jacobian(spec)).real)
        expected = np.sort(np.concatenate([-eig_symmetric(lap)] * 2))
        # defective pairs smear by ~sqrt(backward error); tolerance reflects it
        assert vals == pytest.approx(expected, abs=5e-6)
        assert np.abs(eig_general(build_jacobian(spec)).imag).max() < 5e-6

    def test_alpha_continuity(self):
        rng = np.random.default_rng(4)
        g = random_connected_graph(rng, 8)
        lap = laplacian(g)
        h = rng.uniform(0.5, 2.0, 8)
        base = np.sort(np.concatenate([-eig_symmetric(lap)] * 2))
        for alpha in (1e-4, 1e-6):
            spec = JacobianSpec(laplacian=lap, alpha=alpha, hessian_diag=h)
            vals = np.sort(eig_general(build_jacobian(spec)).real)
            assert np.abs(vals - base).max() < 50 * np.sqrt(alpha)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            JacobianSpec(laplacian=np.zeros((3, 3)), alpha=1.0,
                         hessian_diag=np.zeros(2))

    def test_alpha_must_be_positive(self):
        with pytest.raises(InvalidParamsError):
            JacobianSpec(laplacian=np.zeros((2, 2)), alpha=0.0,
                         hessian_diag=np.zeros(2))

    def test_consensus_direction_is_structural_zero(self):
        rng = np.random.default_rng(9)
        for alpha in (1e-4, 1.0):
            g = random_connected_graph(rng, 10)
            lap = laplacian(g)
            h = rng.uniform(0.0, 3.0, 10)
            jac = build_jacobian(JacobianSpec(lap, alpha, h))
            null_dir = np.concatenate([np.ones(10), np.zeros(10)])
            assert np.abs(jac @ null_dir).max() <= 1e-12 * (1 + np.abs(jac).max())

    def test_near_zero_eigenvalue_exists_without_curvature(self):
        # small alpha keeps the defective zero pair inside the tolerance
        rng = np.random.default_rng(21)
        for _ in range(5):
            g = random_connected_graph(rng, int(rng.integers(4, 16)))
            lap = laplacian(g)
            spec = JacobianSpec(lap, 1e-4, np.zeros(g.n))
            vals = eig_general(build_jacobian(spec))
            assert np.abs(vals.real).min() < default_zero_tol(lap)


class TestConvergenceRate:
    def test_zero_curvature_equals_lambda2(self):
        rng = np.random.default_rng(101)
        for _ in range(20):
            n = int(rng.integers(4, 30))
            g = random_connected_graph(rng, n)
            spec = JacobianSpec(laplacian=laplacian(g), alpha=1.0,
                                hessian_diag=np.zeros(n))
            assert convergence_rate(spec) == pytest.approx(
                lambda2_laplacian(g), abs=1e-8)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(7)
        g = random_connected_graph(rng, 15)
        h = rng.uniform(0.0, 30.0, 15)
        lap = laplacian(g)
        rate = convergence_rate(JacobianSpec(lap, 0.01, h))
        perm = rng.permutation(15)
        lap_p = lap[np.ix_(perm, perm)]
        rate_p = convergence_rate(JacobianSpec(lap_p, 0.01, h[perm]))
        assert rate_p == pytest.approx(rate, abs=1e-8)

    def test_positive_for_connected_quartic_like_curvatures(self):
        rng = np.random.default_rng(13)
        g = random_connected_graph(rng, 20)
        h = rng.uniform(0.0, 30.0, 20)
        rate = convergence_rate(JacobianSpec(laplacian(g), 0.001, h))
        assert rate > 0

    def test_all_zero_raises(self):
        # edgeless single node with zero curvature has only the structural zero
        spec = JacobianSpec(laplacian=np.zeros((1, 1)), alpha=1.0,
                            hessian_diag=np.zeros(1))
        with pytest.raises(AllZeroError):
            convergence_rate(spec)

    def test_zero_tol_validation(self):
        spec = JacobianSpec(laplacian=np.eye(2) - 0.5, alpha=1.0,
                            hessian_diag=np.zeros(2))
        with pytest.raises(InvalidParamsError):
            convergence_rate(spec, zero_tol=0.0)

    def test_default_zero_tol_scales_with_norm(self):
        lap = laplacian(complete_graph(5))
        assert default_zero_tol(lap) == pytest.approx(1e-9 * (1 + 8.0))


class TestSpectralReport:
    def test_report_with_zero_curvature(self):
        g = complete_graph(6)
        report = spectral_report(g, alpha=0.5)
        assert report.lambda2_laplacian == pytest.approx(6.0, abs=1e-8)
        assert report.rate == pytest.approx(6.0, abs=1e-8)
        assert report.n == 6
        assert report.alpha == 0.5
