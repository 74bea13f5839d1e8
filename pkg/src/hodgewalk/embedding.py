"""Harmonic and spectral embeddings of edges, flows, and trajectories.

An edge embeds as the projection of its indicator flow onto the orthonormal
harmonic basis; a trajectory embeds through its accumulated +-1 traversal
flow, with one point per prefix so the temporal evolution in embedding space
can be traced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex import SimplicialComplex
from .errors import DimensionError, InvalidTrajectory
from .laplacian import NormalizedL1, spectrum

__all__ = [
    "Trajectory",
    "EmbeddingPoint",
    "trajectory_flow",
    "embed_edge",
    "embed_trajectory",
    "spectral_embed",
]


@dataclass(frozen=True)
class Trajectory:
    """A walk along edges of a complex, stored as its vertex sequence."""

    vertices: tuple[int, ...]
    traj_id: int | str | None = None

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise InvalidTrajectory("a trajectory needs at least two vertices")
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def n_steps(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class EmbeddingPoint:
    coordinates: np.ndarray
    provenance: int | str | None = None
    prefix_index: int | None = None


def _step_increments(sc: SimplicialComplex, traj: Trajectory) -> list[tuple[int, float]]:
    """(edge index, traversal sign) per step; signs accumulate on revisits."""
    steps = []
    for t, (u, v) in enumerate(zip(traj.vertices, traj.vertices[1:])):
        if not sc.has_edge(u, v):
            raise InvalidTrajectory(
                f"step {t}: ({u}, {v}) is not an edge of the complex", step=t, pair=(u, v)
            )
        sign = 1.0 if u < v else -1.0
        steps.append((sc.edge_index(u, v), sign))
    return steps


def trajectory_flow(sc: SimplicialComplex, traj: Trajectory) -> np.ndarray:
    """Edge flow of a trajectory: +1 along, -1 against the reference
    orientation per traversal, accumulating over repeated traversals."""
    flow = np.zeros(sc.n1)
    for edge, sign in _step_increments(sc, traj):
        flow[edge] += sign
    return flow


def embed_edge(l1: NormalizedL1, edge_index: int, direction: int = 1) -> EmbeddingPoint:
    """Harmonic embedding H^T (direction * e_edge) of a single oriented edge.

    An empty harmonic space yields a 0-dimensional point, not an error.
    """
    if not 0 <= edge_index < l1.n1:
        raise IndexError(f"edge index {edge_index} out of range [0, {l1.n1})")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    h = l1.harmonic_basis()
    return EmbeddingPoint(
        coordinates=float(direction) * h[edge_index, :].copy(),
        provenance=edge_index,
    )


def embed_trajectory(l1: NormalizedL1, traj: Trajectory) -> list[EmbeddingPoint]:
    """Prefix embedding sequence of a trajectory, one edge at a time.

    Point t is the harmonic embedding of the flow accumulated over the first
    t steps; point 0 is the origin and the final point is the embedding of
    the complete trajectory.
    """
    h = l1.harmonic_basis()
    steps = _step_increments(l1.complex, traj)
    flow = np.zeros(l1.n1)
    points = [EmbeddingPoint(np.zeros(h.shape[1]), traj.traj_id, 0)]
    for t, (edge, sign) in enumerate(steps, start=1):
        flow[edge] += sign
        points.append(EmbeddingPoint(h.T @ flow, traj.traj_id, t))
    return points


def spectral_embed(l1: NormalizedL1, flow, k_prime: int) -> EmbeddingPoint:
    """Projection of a flow onto the first k' eigenvectors (ascending
    eigenvalue order) of the symmetrized normalized Laplacian."""
    c = np.asarray(flow, dtype=float).ravel()
    if c.shape[0] != l1.n1:
        raise DimensionError(f"flow has length {c.shape[0]}, expected n1={l1.n1}")
    if not 0 <= k_prime <= l1.n1:
        raise DimensionError(f"k' must lie in [0, n1={l1.n1}]")
    if k_prime == 0:
        return EmbeddingPoint(np.zeros(0))
    dec = spectrum(l1, k=k_prime, which="smallest")
    return EmbeddingPoint(dec.eigenvectors[:, :k_prime].T @ c)
