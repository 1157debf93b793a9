#!/usr/bin/env python
"""
Symmetric bilinear forms given as a sparse matrix plus a low-rank term.
"""
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator


class SymmetricForm:
    """
    The form (phi, psi) -> phi^T (S + U W U^T) psi.

    ``form[phi, psi]`` and ``form(phi, psi)`` evaluate the form;
    ``form.matvec(x)`` applies the matrix.
    """

    def __init__(self, sparse, low_rank=None, weights=None):
        """
        Args:
            sparse: symmetric (n, n) sparse matrix S
            low_rank: optional (n, r) dense factor U
            weights: symmetric (r, r) matrix W
        """
        self.sparse = sp.csr_matrix(sparse)
        n = self.sparse.shape[0]
        if low_rank is None:
            self.low_rank = np.zeros((n, 0))
            self.weights = np.zeros((0, 0))
        else:
            self.low_rank = np.asarray(low_rank, dtype=float).reshape(n, -1)
            self.weights = np.asarray(weights, dtype=float)

    @property
    def shape(self):
        return self.sparse.shape

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        out = self.sparse @ x
        if self.low_rank.shape[1]:
            out = out + self.low_rank @ (self.weights @ (self.low_rank.T @ x))
        return out

    def __call__(self, phi, psi):
        return float(np.asarray(phi, dtype=float) @ self.matvec(psi))

    def __getitem__(self, pair):
        phi, psi = pair
        return self(phi, psi)

    def to_dense(self):
        dense = self.sparse.toarray()
        if self.low_rank.shape[1]:
            dense += self.low_rank @ self.weights @ self.low_rank.T
        return 0.5 * (dense + dense.T)

    def reduced(self, basis):
        """The form restricted to the column space of a sparse or dense basis."""
        if sp.issparse(basis):
            sparse = (basis.T @ self.sparse @ basis).tocsr()
            low_rank = basis.T @ self.low_rank
        else:
            basis = np.asarray(basis, dtype=float)
            sparse = sp.csr_matrix(basis.T @ (self.sparse @ basis))
            low_rank = basis.T @ self.low_rank
        return SymmetricForm(sparse, low_rank, self.weights)

    def as_operator(self):
        n = self.shape[0]
        return LinearOperator((n, n), matvec=self.matvec, matmat=self.matvec, dtype=float)
