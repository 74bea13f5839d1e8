"""Hodge decomposition of edge flows into gradient + curl + harmonic parts.

Three flavors are supported:

* ``unnormalized``  -- split against im(B1^T), im(B2), ker(B1^T B1 + B2 B2^T),
  orthogonal in the standard inner product;
* ``symmetrized``   -- split against im(D2^{1/2} B1^T), im(D2^{-1/2} B2) and
  the kernel of the symmetrized normalized Laplacian, also orthogonal in the
  standard inner product;
* ``normalized``    -- split against im(D2 B1^T), im(B2) and the kernel of
  the normalized Laplacian, orthogonal in the D2^{-1}-weighted inner
  product.  Computed by conjugating the symmetrized split with D2^{+-1/2}.

The least-squares problems are rank-deficient exactly when the complex has
unfilled cycles, so only residuals are consumed; the solver is a minimum-norm
safe iterative method driven purely by matvec / transpose-matvec.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import lsqr

from .errors import ConvergenceError, DimensionError
from .laplacian import NormalizedL1

__all__ = ["HodgeComponents", "decompose", "harmonic_basis", "harmonic_project"]

_FLAVORS = ("unnormalized", "symmetrized", "normalized")


@dataclass(frozen=True)
class HodgeComponents:
    """Gradient/curl/harmonic split of one edge flow."""

    gradient: np.ndarray
    curl: np.ndarray
    harmonic: np.ndarray
    flavor: str
    residual_grad: float   # ls objective of the gradient fit
    residual_curl: float   # ls objective of the curl fit

    def total(self) -> np.ndarray:
        return self.gradient + self.curl + self.harmonic


def _min_norm_lstsq(a: sp.spmatrix, c: np.ndarray, rel_tol: float, iter_lim: int) -> np.ndarray:
    """Projection of c onto range(a) via an LSQR solve; returns a @ x*."""
    if a.shape[1] == 0:
        return np.zeros(a.shape[0])
    result = lsqr(a, c, atol=rel_tol, btol=rel_tol, conlim=0.0, iter_lim=iter_lim)
    x, istop, itn, r1norm = result[0], result[1], result[2], result[3]
    if istop == 7:
        raise ConvergenceError(
            f"least-squares solve hit the iteration limit ({itn} iterations)",
            residuals=[float(r1norm)],
        )
    return a @ x


def decompose(
    l1: NormalizedL1,
    flow,
    flavor: str = "symmetrized",
    rel_tol: float = 1e-10,
) -> HodgeComponents:
    """Split ``flow`` into gradient, curl, and harmonic components.

    The gradient part is the least-squares projection onto the (weighted)
    cut space, the curl part onto the (weighted) triangle circulations, and
    the harmonic part is the remainder.
    """
    if flavor not in _FLAVORS:
        raise ValueError(f"flavor must be one of {_FLAVORS}, got {flavor!r}")
    c = np.asarray(flow, dtype=float).ravel()
    if c.shape[0] != l1.n1:
        raise DimensionError(f"flow has length {c.shape[0]}, expected n1={l1.n1}")

    if flavor == "normalized":
        inner = decompose(l1, l1._d2_inv_sqrt * c, flavor="symmetrized", rel_tol=rel_tol)
        scale = l1._d2_sqrt
        return HodgeComponents(
            gradient=scale * inner.gradient,
            curl=scale * inner.curl,
            harmonic=scale * inner.harmonic,
            flavor="normalized",
            residual_grad=inner.residual_grad,
            residual_curl=inner.residual_curl,
        )

    if flavor == "symmetrized":
        a_grad = (sp.diags(l1._d2_sqrt) @ l1.b1.T).tocsr()
        a_curl = (sp.diags(l1._d2_inv_sqrt) @ l1.b2).tocsr()
    else:
        a_grad = l1.b1.T.tocsr()
        a_curl = l1.b2.tocsr()

    iter_lim = 10 * (l1.n0 + l1.n1 + l1.n2)
    g = _min_norm_lstsq(a_grad, c, rel_tol, iter_lim)
    r = _min_norm_lstsq(a_curl, c, rel_tol, iter_lim)
    h = c - g - r
    return HodgeComponents(
        gradient=g,
        curl=r,
        harmonic=h,
        flavor=flavor,
        residual_grad=float(np.linalg.norm(g - c)),
        residual_curl=float(np.linalg.norm(r - c)),
    )


def harmonic_basis(l1: NormalizedL1) -> np.ndarray:
    """Orthonormal n1 x k basis of the numerical kernel of the symmetrized
    normalized Laplacian; k is the kernel dimension."""
    return l1.harmonic_basis()


def harmonic_project(l1: NormalizedL1, flow) -> np.ndarray:
    """Coefficients H^T @ flow of the harmonic projection.

    Because the basis is orthonormal, the (basis-invariant) projector norm
    ||H H^T flow|| equals ``np.linalg.norm`` of the returned coefficients.
    """
    c = np.asarray(flow, dtype=float).ravel()
    if c.shape[0] != l1.n1:
        raise DimensionError(f"flow has length {c.shape[0]}, expected n1={l1.n1}")
    return l1.harmonic_basis().T @ c
