import numpy as np
import pytest

from pshoa.errors import DomainError
from pshoa.linalg import rls_solve, rls_solve_info, tridiag_sym_eig


class TestTridiagEig:
    def test_decoupled(self):
        w, v = tridiag_sym_eig([2.0, 2.0], [0.0])
        assert np.allclose(w, [2.0, 2.0])

    def test_two_by_two(self):
        w, v = tridiag_sym_eig([0.0, 0.0], [1.0])
        assert np.allclose(w, [-1.0, 1.0], atol=1e-15)

    def test_random_residuals(self):
        rng = np.random.default_rng(7)
        diag = rng.normal(size=50)
        off = rng.normal(size=49)
        w, v = tridiag_sym_eig(diag, off)
        t = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
        for i in range(50):
            assert np.linalg.norm(t @ v[:, i] - w[i] * v[:, i]) < 1e-10
        assert np.all(np.diff(w) >= 0)
        assert np.max(np.abs(v.T @ v - np.eye(50))) < 1e-12

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            tridiag_sym_eig([1.0, 2.0, 3.0], [0.5])


class TestRls:
    def test_identity(self):
        x = rls_solve(np.eye(3), np.array([1.0, 2.0, 3.0]), 0.0)
        assert np.allclose(x, [1, 2, 3], atol=1e-14)

    def test_scalar_shrinkage(self):
        # closed form of the regularized solution: 1 / (1 + 1)
        x = rls_solve(np.eye(1), np.array([1.0]), 1.0)
        assert x[0] == pytest.approx(0.5, abs=1e-15)

    def test_overdetermined_recovery(self):
        rng = np.random.default_rng(3)
        m = rng.normal(size=(20, 5)) + 1j * rng.normal(size=(20, 5))
        x_true = rng.normal(size=5) + 1j * rng.normal(size=5)
        x = rls_solve(m, m @ x_true, 0.0)
        assert np.linalg.norm(x - x_true) < 1e-10

    def test_matches_normal_equations(self):
        rng = np.random.default_rng(11)
        for sigma in (0.3, 1.0, 4.0):
            m = rng.normal(size=(30, 8)) + 1j * rng.normal(size=(30, 8))
            b = rng.normal(size=30) + 1j * rng.normal(size=30)
            x = rls_solve(m, b, sigma)
            mh = m.conj().T
            x_ref = np.linalg.solve(mh @ m + sigma * np.eye(8), mh @ b)
            assert np.linalg.norm(x - x_ref) < 1e-8 * np.linalg.norm(x_ref)

    def test_monotone_shrinkage(self):
        rng = np.random.default_rng(5)
        m = rng.normal(size=(12, 6)) + 1j * rng.normal(size=(12, 6))
        b = rng.normal(size=12) + 1j * rng.normal(size=12)
        norms = [np.linalg.norm(rls_solve(m, b, s)) for s in (0.0, 0.1, 1.0, 10.0, 100.0)]
        assert all(a >= b_ for a, b_ in zip(norms, norms[1:]))

    def test_rank_reporting(self):
        m = np.diag([1.0, 1e-3, 1e-15])
        sol = rls_solve_info(m, np.ones(3), 0.0)
        assert sol.rank == 2
        assert sol.x[2] == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            rls_solve(np.eye(3), np.ones(4), 0.0)

    def test_negative_sigma(self):
        with pytest.raises(DomainError):
            rls_solve(np.eye(2), np.ones(2), -1.0)
