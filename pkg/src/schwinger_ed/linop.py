"""Matrix-free Hermitian linear operators backed by sparse matrices.

Every Hamiltonian in the package is a :class:`LinearOperator`: a dimension, a
pure ``matvec``, and a hermitian flag.  Operators built from explicit sparse
matrices keep a handle to them so the dense oracle can materialize cheaply.
"""
from __future__ import annotations

from typing import Callable

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError

#: Dimension cap for dense materialization.
DENSE_CAP = 4096


class LinearOperator:
    """Hermitian-flagged linear map on complex vectors of fixed dimension."""

    def __init__(
        self,
        dim: int,
        matvec: Callable[[np.ndarray], np.ndarray],
        hermitian: bool = True,
        matrix: sp.spmatrix | np.ndarray | None = None,
    ):
        self.dim = dim
        self._matvec = matvec
        self.hermitian = hermitian
        self._matrix = matrix

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape[0] != self.dim:
            raise ValueError(f"vector length {v.shape[0]} != operator dim {self.dim}")
        return self._matvec(v)

    __call__ = apply

    @classmethod
    def from_matrix(cls, mat: sp.spmatrix | np.ndarray, hermitian: bool = True) -> "LinearOperator":
        if sp.issparse(mat):
            mat = mat.tocsr()
        return cls(mat.shape[0], lambda v: mat @ v, hermitian=hermitian, matrix=mat)

    def to_matrix(self, cap: int = DENSE_CAP) -> np.ndarray:
        """Materialize as a dense array; guarded by ``cap``."""
        if self.dim > cap:
            raise CapacityError(f"dimension {self.dim} exceeds dense cap {cap}")
        if self._matrix is not None:
            m = self._matrix
            return m.toarray() if sp.issparse(m) else np.asarray(m)
        cols = [self.apply(_unit(self.dim, j)) for j in range(self.dim)]
        return np.column_stack(cols)

    # -- small operator algebra (used by tests and effective theories) ------

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        _check_dims(self, other)
        mat = _combine_matrices(self, other, lambda a, b: a + b)
        return LinearOperator(
            self.dim,
            lambda v: self.apply(v) + other.apply(v),
            hermitian=self.hermitian and other.hermitian,
            matrix=mat,
        )

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        _check_dims(self, other)
        mat = _combine_matrices(self, other, lambda a, b: a - b)
        return LinearOperator(
            self.dim,
            lambda v: self.apply(v) - other.apply(v),
            hermitian=self.hermitian and other.hermitian,
            matrix=mat,
        )

    def __rmul__(self, scalar: complex) -> "LinearOperator":
        herm = self.hermitian and abs(np.imag(scalar)) == 0
        mat = None if self._matrix is None else scalar * self._matrix
        return LinearOperator(self.dim, lambda v: scalar * self.apply(v), herm, matrix=mat)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        _check_dims(self, other)
        return LinearOperator(
            self.dim, lambda v: self.apply(other.apply(v)), hermitian=False
        )


class DiagonalOperator(LinearOperator):
    """Diagonal operator; exposes its diagonal for exact sector algebra."""

    def __init__(self, diagonal: np.ndarray):
        diagonal = np.asarray(diagonal, dtype=np.float64)
        super().__init__(len(diagonal), lambda v: diagonal * v, hermitian=True)
        self.diagonal = diagonal

    def to_matrix(self, cap: int = DENSE_CAP) -> np.ndarray:
        if self.dim > cap:
            raise CapacityError(f"dimension {self.dim} exceeds dense cap {cap}")
        return np.diag(self.diagonal)


def _unit(dim: int, j: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[j] = 1.0
    return v


def _check_dims(a: LinearOperator, b: LinearOperator):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _combine_matrices(a: LinearOperator, b: LinearOperator, op):
    ma = a._matrix if a._matrix is not None else (sp.diags(a.diagonal) if isinstance(a, DiagonalOperator) else None)
    mb = b._matrix if b._matrix is not None else (sp.diags(b.diagonal) if isinstance(b, DiagonalOperator) else None)
    if ma is None or mb is None:
        return None
    if sp.issparse(ma) and not sp.issparse(mb):
        mb = sp.csr_matrix(mb)
    if sp.issparse(mb) and not sp.issparse(ma):
        ma = sp.csr_matrix(ma)
    return op(ma, mb)


def random_state(dim: int, seed: int = 0) -> np.ndarray:
    """Deterministic normalized complex random vector."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def hermiticity_defect(op: LinearOperator, trials: int = 20, seed: int = 0) -> float:
    """max |<u, Av> - <Au, v>| over random unit vector pairs."""
    worst = 0.0
    for k in range(trials):
        u = random_state(op.dim, seed=seed + 2 * k)
        v = random_state(op.dim, seed=seed + 2 * k + 1)
        worst = max(worst, abs(np.vdot(u, op.apply(v)) - np.vdot(op.apply(u), v)))
    return worst


def commutator_defect(a: LinearOperator, b: LinearOperator, trials: int = 20, seed: int = 0) -> float:
    """max ||ABv - BAv|| / ||v|| over random unit vectors."""
    worst = 0.0
    for k in range(trials):
        v = random_state(a.dim, seed=seed + k)
        worst = max(worst, float(np.linalg.norm(a.apply(b.apply(v)) - b.apply(a.apply(v)))))
    return worst
