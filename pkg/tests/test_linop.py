"""Linear-operator wrappers: arithmetic, hermiticity, densification."""
import numpy as np
import pytest
import scipy.sparse as sp

from schwinger_ed.errors import CapacityError
from schwinger_ed.linop import (
    DiagonalOperator,
    LinearOperator,
    commutator_defect,
    hermiticity_defect,
    random_state,
)


def _random_hermitian(n, seed=0):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (m + m.conj().T) / 2


class TestLinearOperator:
    def test_from_matrix_apply(self):
        m = _random_hermitian(6)
        op = LinearOperator.from_matrix(m)
        v = random_state(6, seed=1)
        assert np.allclose(op.apply(v), m @ v)
        assert np.allclose(op(v), m @ v)

    def test_arithmetic_matches_matrices(self):
        a = LinearOperator.from_matrix(_random_hermitian(5, 1))
        b = LinearOperator.from_matrix(_random_hermitian(5, 2))
        v = random_state(5, seed=3)
        am, bm = a.to_matrix(), b.to_matrix()
        assert np.allclose((a + b)(v), (am + bm) @ v)
        assert np.allclose((a - b)(v), (am - bm) @ v)
        assert np.allclose((2.5 * a)(v), 2.5 * am @ v)
        assert np.allclose((a @ b)(v), am @ (bm @ v))

    def test_dimension_mismatch_rejected(self):
        a = LinearOperator.from_matrix(_random_hermitian(4))
        b = LinearOperator.from_matrix(_random_hermitian(5))
        with pytest.raises(ValueError):
            _ = a + b

    def test_to_matrix_capacity(self):
        op = LinearOperator(10, matvec=lambda v: v, hermitian=True)
        with pytest.raises(CapacityError):
            op.to_matrix(cap=5)

    def test_sparse_matrix_roundtrip(self):
        m = sp.random(8, 8, density=0.3, random_state=0)
        m = m + m.T
        op = LinearOperator.from_matrix(m.tocsr())
        assert np.allclose(op.to_matrix(), m.toarray())


class TestDiagonalOperator:
    def test_apply(self):
        d = DiagonalOperator(np.arange(5.0))
        v = np.ones(5)
        assert np.allclose(d(v), np.arange(5.0))

    def test_combines_with_sparse(self):
        d = DiagonalOperator(np.arange(4.0))
        m = sp.eye(4, format="csr")
        s = LinearOperator.from_matrix(m) + d
        assert np.allclose(s.to_matrix(), np.eye(4) + np.diag(np.arange(4.0)))


class TestDefects:
    def test_hermiticity_defect(self):
        h = LinearOperator.from_matrix(_random_hermitian(6))
        assert hermiticity_defect(h, trials=5) < 1e-12
        rng = np.random.default_rng(0)
        nh = LinearOperator.from_matrix(rng.standard_normal((6, 6)))
        assert hermiticity_defect(nh, trials=5) > 1e-3

    def test_commutator_defect(self):
        m = _random_hermitian(6)
        a = LinearOperator.from_matrix(m)
        b = LinearOperator.from_matrix(m @ m)  # commutes with m
        assert commutator_defect(a, b, 5) < 1e-10

    def test_random_state_deterministic_and_normalized(self):
        v1 = random_state(16, seed=5)
        v2 = random_state(16, seed=5)
        assert np.array_equal(v1, v2)
        assert np.linalg.norm(v1) == pytest.approx(1.0)
