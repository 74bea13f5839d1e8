"""Simplicial PageRank for edges, with gauges, norms, and graph baselines.

The standard edge PageRank solves (beta I + L1) pi = (beta - 2) x for
beta > 2 and the generalized variant solves (kappa I + L1) pi = x for any
kappa > 0, where x = V^T mu projects a lifted teleport distribution.  Both
systems are solved on the symmetric positive-definite similarity transform
(shift + L1s) and mapped back with D2^{+-1/2}.

Scores derived from pi: its 2-norm, and the 2-norms of its gradient, curl
and harmonic components under the weighted normalized Hodge decomposition
(the decomposition whose subspaces are invariant under the solve, so the
zero patterns of the components are exact).  The harmonic norm is the
"harmonic PageRank" used for ranking edges by their role in the cycle
structure of the complex.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.linalg import cho_factor, cho_solve
from scipy.sparse.linalg import cg
from scipy.stats import spearmanr

from .complex import SimplicialComplex
from .decomposition import decompose
from .errors import ConvergenceError, DimensionError, ParameterError, UnsupportedQuery
from .laplacian import NormalizedL1

__all__ = [
    "PageRankQuery",
    "PageRankResult",
    "pagerank",
    "gauge_normalize",
    "pagerank_norms",
    "harmonic_pagerank_all_edges",
    "RankStability",
    "rank_stability",
    "baseline_edge_pagerank",
    "node_pagerank",
]

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class PageRankQuery:
    """Teleport plus mode parameters.

    ``teleport`` is either an edge index (personalized: x = e_edge) or a
    full length-n1 vector x.  Standard mode requires beta > 2; generalized
    mode requires kappa > 0.
    """

    teleport: int | np.ndarray
    mode: str = "standard"
    beta: float = 2.5
    kappa: float = 1e-3

    def validate(self, n1: int) -> None:
        if self.mode not in ("standard", "generalized"):
            raise ParameterError(f"mode must be 'standard' or 'generalized', got {self.mode!r}")
        if self.mode == "standard" and not self.beta > 2.0:
            raise ParameterError(f"standard mode needs beta > 2, got beta={self.beta}")
        if self.mode == "generalized" and not self.kappa > 0.0:
            raise ParameterError(f"generalized mode needs kappa > 0, got kappa={self.kappa}")
        if isinstance(self.teleport, (int, np.integer)):
            if not 0 <= self.teleport < n1:
                raise IndexError(f"teleport edge {self.teleport} out of range [0, {n1})")
        elif np.asarray(self.teleport).ravel().shape[0] != n1:
            raise DimensionError("teleport vector length must equal n1")

    def is_personalized(self) -> bool:
        return isinstance(self.teleport, (int, np.integer))

    def teleport_vector(self, n1: int) -> np.ndarray:
        if self.is_personalized():
            x = np.zeros(n1)
            x[int(self.teleport)] = 1.0
            return x
        return np.asarray(self.teleport, dtype=float).ravel()

    @property
    def shift(self) -> float:
        return self.beta if self.mode == "standard" else self.kappa

    @property
    def scale(self) -> float:
        # Standard mode keeps the (beta - 2) teleport scaling; the
        # generalized definition drops it.
        return self.beta - 2.0 if self.mode == "standard" else 1.0


@dataclass(frozen=True)
class PageRankResult:
    pi: np.ndarray
    query: PageRankQuery
    gauge: np.ndarray = field(default=None)   # diagonal of Theta; None == identity
    norms: dict = field(default=None)

    def ungauged(self) -> np.ndarray:
        """The solution in the canonical reference orientations."""
        return self.pi if self.gauge is None else self.gauge * self.pi


def _solve_shifted(l1: NormalizedL1, shift: float, rhs_sym: np.ndarray) -> np.ndarray:
    """Solve (shift I + L1s) y = rhs_sym for the SPD symmetrized system."""
    n1 = l1.n1
    if n1 <= l1.dense_cap:
        system = l1.dense_sym() + shift * np.eye(n1)
        return cho_solve(cho_factor(system), rhs_sym)
    op = sp.linalg.LinearOperator(
        (n1, n1), matvec=lambda v: shift * v + l1.apply_sym(v), dtype=float
    )
    y, info = cg(op, rhs_sym, rtol=1e-13, atol=0.0, maxiter=20 * n1)
    if info != 0:
        raise ConvergenceError(
            f"shifted solve did not converge (info={info})",
            residuals=[float(np.linalg.norm(shift * y + l1.apply_sym(y) - rhs_sym))],
        )
    return y


def pagerank(l1: NormalizedL1, query: PageRankQuery) -> PageRankResult:
    """Solve the edge PageRank system for one query.

    The returned solution always satisfies
    ||(shift I + L1) pi - scale * x|| <= 1e-10 ||x||.
    """
    query.validate(l1.n1)
    x = query.teleport_vector(l1.n1)
    x_norm = np.linalg.norm(x)
    if x_norm == 0.0:
        return PageRankResult(pi=np.zeros(l1.n1), query=query)
    y = _solve_shifted(l1, query.shift, l1._d2_inv_sqrt * x)
    pi = query.scale * (l1._d2_sqrt * y)
    residual = np.linalg.norm(query.shift * pi + l1.apply(pi) - query.scale * x)
    if residual > RESIDUAL_TOL * x_norm:
        raise ConvergenceError(
            "pagerank solve residual above tolerance", residuals=[float(residual)]
        )
    return PageRankResult(pi=pi, query=query)


def gauge_normalize(l1: NormalizedL1, result: PageRankResult) -> PageRankResult:
    """Flip reference orientations so a personalized solution is nonnegative.

    Only personalized (indicator-teleport) queries are supported; for a
    general teleport the sign patterns of the contributing columns mix and
    no single orientation flip makes the vector nonnegative.
    """
    if not result.query.is_personalized():
        raise UnsupportedQuery("gauge normalization is defined for personalized queries only")
    pi = result.ungauged()
    theta = np.where(pi < 0.0, -1.0, 1.0)
    # The teleport edge's own entry is a diagonal entry of a positive
    # definite inverse, hence positive; keep its orientation fixed.
    theta[int(result.query.teleport)] = 1.0
    return replace(result, pi=theta * pi, gauge=theta)


def pagerank_norms(l1: NormalizedL1, result: PageRankResult) -> dict[str, float]:
    """2-norms of pi and of its gradient/curl/harmonic components.

    Components follow the weighted normalized Hodge decomposition of the
    canonical-orientation solution, so the reported norms are invariant
    under gauge transformations.
    """
    pi = result.ungauged()
    parts = decompose(l1, pi, flavor="normalized")
    return {
        "l2": float(np.linalg.norm(pi)),
        "grad": float(np.linalg.norm(parts.gradient)),
        "curl": float(np.linalg.norm(parts.curl)),
        "harm": float(np.linalg.norm(parts.harmonic)),
    }


def harmonic_pagerank_all_edges(l1: NormalizedL1, beta: float = 2.5) -> np.ndarray:
    """Harmonic PageRank score of every edge.

    Score of edge e is the 2-norm of the harmonic component of the
    personalized PageRank vector seeded at e.  All n1 solves share one
    factorization (dense path) or one operator (iterative path), and the
    harmonic projection reuses a single kernel basis.
    """
    if not beta > 2.0:
        raise ParameterError(f"beta must exceed 2, got {beta}")
    n1 = l1.n1
    if n1 == 0:
        return np.zeros(0)
    h = l1.harmonic_basis()
    if h.shape[1] == 0:
        return np.zeros(n1)
    # Personalized solutions, symmetrized frame: Y = (beta I + L1s)^{-1}
    # D2^{-1/2}, one column per teleport edge.
    if n1 <= l1.dense_cap:
        system = l1.dense_sym() + beta * np.eye(n1)
        y = cho_solve(cho_factor(system), np.diag(l1._d2_inv_sqrt))
    else:
        cols = []
        for e in range(n1):
            rhs = np.zeros(n1)
            rhs[e] = l1._d2_inv_sqrt[e]
            cols.append(_solve_shifted(l1, beta, rhs))
        y = np.column_stack(cols)
    coeffs = h.T @ y                       # kernel coefficients per edge
    weighted = (l1._d2_sqrt[:, None] * h) @ coeffs
    return (beta - 2.0) * np.linalg.norm(weighted, axis=0)


@dataclass(frozen=True)
class RankStability:
    """Pairwise Spearman correlations of harmonic PageRank rankings."""

    betas: tuple[float, ...]
    rho: np.ndarray               # |betas| x |betas|, nan on excluded pairs
    mean_rho: float
    excluded: tuple[tuple[int, int], ...]


def rank_stability(l1: NormalizedL1, beta_grid) -> RankStability:
    """Mean pairwise Spearman rank correlation across a beta grid.

    Ties get average ranks.  Pairs involving a constant score vector have
    undefined correlation; they are flagged and excluded from the mean.
    """
    betas = tuple(float(b) for b in beta_grid)
    if len(betas) < 2:
        raise ParameterError("need at least two beta values")
    scores = [harmonic_pagerank_all_edges(l1, beta=b) for b in betas]
    m = len(betas)
    rho = np.full((m, m), np.nan)
    np.fill_diagonal(rho, 1.0)
    excluded = []
    pair_values = []
    for i in range(m):
        for j in range(i + 1, m):
            if np.ptp(scores[i]) == 0.0 or np.ptp(scores[j]) == 0.0:
                excluded.append((i, j))
                log.warning("constant score vector for beta pair (%s, %s); excluded", betas[i], betas[j])
                continue
            value = float(spearmanr(scores[i], scores[j]).statistic)
            rho[i, j] = rho[j, i] = value
            pair_values.append(value)
    mean = float(np.mean(pair_values)) if pair_values else float("nan")
    return RankStability(betas=betas, rho=rho, mean_rho=mean, excluded=tuple(excluded))


def node_pagerank(sc: SimplicialComplex, alpha: float = 0.85) -> np.ndarray:
    """Classic node PageRank on the 1-skeleton with uniform teleport.

    Solves (I - alpha P) pi = (1 - alpha) mu with the column-stochastic
    transition P = A D^{-1}; columns of isolated vertices carry the teleport
    distribution so the solution still sums to one.
    """
    n0 = sc.n0
    if n0 == 0:
        return np.zeros(0)
    adj = np.zeros((n0, n0))
    for i, j in sc.edges:
        adj[i, j] = adj[j, i] = 1.0
    deg = adj.sum(axis=0)
    mu = np.full(n0, 1.0 / n0)
    p = np.divide(adj, deg[None, :], out=np.zeros_like(adj), where=deg[None, :] > 0)
    p[:, deg == 0] = mu[:, None]
    pi = np.linalg.solve(np.eye(n0) - alpha * p, (1.0 - alpha) * mu)
    return pi


def _dense_pagerank(adj: np.ndarray, alpha: float) -> np.ndarray:
    n = adj.shape[0]
    if n == 0:
        return np.zeros(0)
    deg = adj.sum(axis=0)
    mu = np.full(n, 1.0 / n)
    p = np.divide(adj, deg[None, :], out=np.zeros_like(adj), where=deg[None, :] > 0)
    p[:, deg == 0] = mu[:, None]
    return np.linalg.solve(np.eye(n) - alpha * p, (1.0 - alpha) * mu)


def baseline_edge_pagerank(sc: SimplicialComplex, variant: str, alpha: float = 0.85) -> np.ndarray:
    """Graph-based edge scores to compare simplicial PageRank against.

    ``node_sum`` and ``node_diff`` map node PageRank onto edges via the sum
    or absolute difference of the endpoint scores; ``line_graph`` runs node
    PageRank on the line graph of the 1-skeleton.
    """
    if variant not in ("node_sum", "node_diff", "line_graph"):
        raise ParameterError(f"unknown baseline variant {variant!r}")
    if variant in ("node_sum", "node_diff"):
        pi = node_pagerank(sc, alpha=alpha)
        scores = np.zeros(sc.n1)
        for e, (i, j) in enumerate(sc.edges):
            scores[e] = pi[i] + pi[j] if variant == "node_sum" else abs(pi[i] - pi[j])
        return scores
    # Line graph: one node per edge, adjacency = shared endpoint.
    n1 = sc.n1
    incident: dict[int, list[int]] = {}
    for e, (i, j) in enumerate(sc.edges):
        incident.setdefault(i, []).append(e)
        incident.setdefault(j, []).append(e)
    adj = np.zeros((n1, n1))
    for edges in incident.values():
        for a in edges:
            for b in edges:
                if a != b:
                    adj[a, b] = 1.0
    return _dense_pagerank(adj, alpha)
