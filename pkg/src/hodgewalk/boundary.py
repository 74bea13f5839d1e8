"""Sparse boundary matrices, degree weights, and the orientation lifting.

All matrices are scipy.sparse CSR/CSC with integer-valued float entries; the
lifted index convention is: oriented edge ``a`` in ``[0, n1)`` is the
reference orientation of edge ``a`` and ``a + n1`` is its reversal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.io import mmwrite

from .complex import SimplicialComplex

__all__ = [
    "build_b1",
    "build_b2",
    "DegreeMatrices",
    "build_degree_matrices",
    "Lifting",
    "build_lifting",
    "lifting_lemma_checks",
    "dump_matrix",
]


def build_b1(sc: SimplicialComplex) -> sp.csr_matrix:
    """Signed node-to-edge incidence matrix (n0 x n1).

    The column of edge (i, j), i < j, carries -1 at row i and +1 at row j.
    """
    rows, cols, vals = [], [], []
    for col, (i, j) in enumerate(sc.edges):
        rows.extend((i, j))
        cols.extend((col, col))
        vals.extend((-1.0, 1.0))
    return sp.csr_matrix((vals, (rows, cols)), shape=(sc.n0, sc.n1))


def build_b2(sc: SimplicialComplex) -> sp.csr_matrix:
    """Signed edge-to-triangle incidence matrix (n1 x n2).

    The column of triangle (i, j, k), i < j < k, carries +1 at edge (j, k),
    -1 at edge (i, k), and +1 at edge (i, j).
    """
    rows, cols, vals = [], [], []
    for col, (i, j, k) in enumerate(sc.triangles):
        rows.extend((sc.edge_index(j, k), sc.edge_index(i, k), sc.edge_index(i, j)))
        cols.extend((col, col, col))
        vals.extend((1.0, -1.0, 1.0))
    return sp.csr_matrix((vals, (rows, cols)), shape=(sc.n1, sc.n2))


@dataclass(frozen=True)
class DegreeMatrices:
    """Diagonal degree weights.

    d2[e] = max(deg(e), 1); d1 = 2 * |B1| @ d2 per node; d3 = 1/3;
    d4_hat[a] = 1 if deg = 0 else 3*deg and d5_hat[a] = 1 iff deg = 0,
    both tiled over the 2*n1 oriented edges.
    """

    d1: np.ndarray
    d2: np.ndarray
    d3: float
    d4_hat: np.ndarray
    d5_hat: np.ndarray


def build_degree_matrices(sc: SimplicialComplex, b1: sp.spmatrix, b2: sp.spmatrix) -> DegreeMatrices:
    deg = np.asarray(abs(b2).sum(axis=1)).ravel()
    d2 = np.maximum(deg, 1.0)
    d1 = 2.0 * (abs(b1) @ d2)
    d4 = np.where(deg == 0, 1.0, 3.0 * deg)
    d5 = (deg == 0).astype(float)
    return DegreeMatrices(
        d1=d1,
        d2=d2,
        d3=1.0 / 3.0,
        d4_hat=np.tile(d4, 2),
        d5_hat=np.tile(d5, 2),
    )


@dataclass(frozen=True)
class Lifting:
    """Orientation-doubling operators on the 2*n1 lifted edge space."""

    v: sp.csr_matrix            # [+I; -I], 2n1 x n1
    sigma: sp.csr_matrix        # orientation swap permutation, 2n1 x 2n1
    b1_hat: sp.csr_matrix       # B1 @ V^T = [B1, -B1]
    b1_hat_pos: sp.csr_matrix
    b1_hat_neg: sp.csr_matrix
    b2_hat: sp.csr_matrix       # V @ B2 = [B2; -B2]
    b2_hat_pos: sp.csr_matrix
    b2_hat_neg: sp.csr_matrix
    a_lower: sp.csr_matrix      # lower-adjacency of the lifted walk
    a_upper: sp.csr_matrix      # upper-adjacency of the lifted walk


def _part(m: sp.spmatrix, keep_positive: bool) -> sp.csr_matrix:
    # Built from fresh triplets: scipy's maximum/eliminate_zeros pipeline can
    # share buffers with the source and corrupt it.
    coo = sp.coo_matrix(m)
    mask = coo.data > 0 if keep_positive else coo.data < 0
    data = coo.data[mask] if keep_positive else -coo.data[mask]
    return sp.csr_matrix((data, (coo.row[mask], coo.col[mask])), shape=coo.shape)


def _pos(m: sp.spmatrix) -> sp.csr_matrix:
    return _part(m, keep_positive=True)


def _neg(m: sp.spmatrix) -> sp.csr_matrix:
    return _part(m, keep_positive=False)


def build_lifting(b1: sp.spmatrix, b2: sp.spmatrix) -> Lifting:
    n1 = b1.shape[1]
    eye = sp.identity(n1, format="csr")
    v = sp.vstack([eye, -eye]).tocsr()
    sigma = sp.vstack([sp.hstack([sp.csr_matrix((n1, n1)), eye]),
                       sp.hstack([eye, sp.csr_matrix((n1, n1))])]).tocsr()
    b1_hat = (b1 @ v.T).tocsr()
    b2_hat = (v @ b2).tocsr()
    b1p, b1n = _pos(b1_hat), _neg(b1_hat)
    b2p, b2n = _pos(b2_hat), _neg(b2_hat)
    a_lower = (b1n.T @ b1p + b1p.T @ b1n).tocsr()
    a_upper = (b2p @ b2n.T + b2n @ b2p.T).tocsr()
    return Lifting(
        v=v,
        sigma=sigma,
        b1_hat=b1_hat,
        b1_hat_pos=b1p,
        b1_hat_neg=b1n,
        b2_hat=b2_hat,
        b2_hat_pos=b2p,
        b2_hat_neg=b2n,
        a_lower=a_lower,
        a_upper=a_upper,
    )


def lifting_lemma_checks(sc: SimplicialComplex) -> dict[str, bool]:
    """Exact integer checks of the lifted-walk bookkeeping identities.

    Verifies, in integer arithmetic:
      * ``b1b2_zero``: B1 @ B2 == 0,
      * ``qf_sigma_qb``: the forward normalizer permutes into the backward
        one under the orientation swap,
      * ``d1_halving``: D1^{-1} B1_hat^+ == (1/2) B1_hat^+ Q_f^{-1},
        cross-multiplied so only integers are compared.
    """
    b1 = build_b1(sc).astype(np.int64)
    b2 = build_b2(sc).astype(np.int64)
    deg = np.asarray(abs(b2).sum(axis=1)).ravel()
    d2 = np.maximum(deg, 1).astype(np.int64)
    a_node = (abs(b1) @ d2).astype(np.int64)         # D1 = 2 * diag(a_node)

    lift = build_lifting(b1, b2)
    d2_hat = sp.diags(np.tile(d2, 2).astype(np.int64))
    m_f = (d2_hat @ lift.b1_hat_neg.astype(np.int64).T @ lift.b1_hat_pos.astype(np.int64)).tocsr()
    m_b = (d2_hat @ lift.b1_hat_pos.astype(np.int64).T @ lift.b1_hat_neg.astype(np.int64)).tocsr()
    q_f = np.asarray(m_f.sum(axis=0)).ravel().astype(np.int64)
    q_b = np.asarray(m_b.sum(axis=0)).ravel().astype(np.int64)

    n1 = sc.n1
    flip = np.concatenate([np.arange(n1, 2 * n1), np.arange(n1)])
    qf_sigma_qb = bool(np.array_equal(q_f, q_b[flip]))

    # D1^{-1} B1_hat^+ has value 1/(2 a_v) at (v, b); (1/2) B1_hat^+ Q_f^{-1}
    # has 1/(2 q_f[b]).  Equality of the rationals <=> a_v == q_f[b] at every
    # stencil entry.
    coo = lift.b1_hat_pos.tocoo()
    d1_halving = bool(np.array_equal(a_node[coo.row], q_f[coo.col]))

    prod = (b1 @ b2).tocoo()
    b1b2_zero = bool(prod.nnz == 0 or not np.any(prod.data))

    return {"b1b2_zero": b1b2_zero, "qf_sigma_qb": qf_sigma_qb, "d1_halving": d1_halving}


def dump_matrix(matrix: sp.spmatrix, path) -> None:
    """Write a sparse matrix as MatrixMarket coordinate text."""
    mmwrite(str(path), sp.coo_matrix(matrix))
