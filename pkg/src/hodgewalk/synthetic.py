"""Seeded synthetic complexes used by the demos and the verification suite."""

from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy.spatial import Delaunay

from .complex import SimplicialComplex, clique_complex, from_simplices

__all__ = [
    "running_example",
    "two_hole_complex",
    "clique_ring_complex",
    "random_clique_complex",
]


def running_example() -> SimplicialComplex:
    """Seven-node complex with two filled triangles and two unfilled cycles."""
    edges = [(1, 2), (1, 3), (2, 3), (2, 4), (2, 6), (3, 4), (4, 5), (4, 7), (5, 6), (5, 7)]
    triangles = [(1, 2, 3), (2, 3, 4)]
    return from_simplices(edges, triangles)


def two_hole_complex(
    n_points: int = 400,
    seed: int = 5,
    holes=(((0.3, 0.3), 0.12), ((0.72, 0.72), 0.12)),
) -> tuple[SimplicialComplex, np.ndarray]:
    """Triangulated unit square with two circular obstacles.

    Draws seeded random points, Delaunay-triangulates them, removes every
    edge passing within a hole radius of a hole center, and fills all
    remaining 3-cliques.  Returns the complex and the point coordinates
    (indexed by vertex id).  With the default parameters the complex has a
    two-dimensional harmonic space, one dimension per hole.
    """
    rng = np.random.default_rng(seed)
    points = rng.uniform(size=(n_points, 2))
    tri = Delaunay(points)
    edges = set()
    for simplex in tri.simplices:
        for a, b in combinations(sorted(int(v) for v in simplex), 2):
            edges.add((a, b))

    def blocked(a: int, b: int) -> bool:
        for center, radius in holes:
            if _segment_distance(points[a], points[b], np.asarray(center)) < radius:
                return True
        return False

    kept = [e for e in edges if not blocked(*e)]
    sc = clique_complex(kept)
    coords = np.array([points[label] for label in sc.labels])
    return sc, coords


def _segment_distance(p: np.ndarray, q: np.ndarray, c: np.ndarray) -> float:
    d = q - p
    denom = float(d @ d)
    t = 0.0 if denom == 0.0 else float(np.clip((c - p) @ d / denom, 0.0, 1.0))
    return float(np.linalg.norm(p + t * d - c))


def clique_ring_complex() -> tuple[SimplicialComplex, dict[str, tuple[int, int]]]:
    """A 30-clique bridged to a ring of four 8-cliques.

    The four 8-cliques are joined into a ring by single edges between
    designated port nodes, and one bridge edge attaches the ring to the
    30-clique, so the complex has exactly one unfilled cycle.  Returns the
    complex plus the named probe edges: ``bulk`` (inside the 30-clique),
    ``bridge`` (the cut edge), and ``cycle`` (one ring edge).
    """
    edges = []
    edges.extend(combinations(range(30), 2))
    blocks = [range(30 + 8 * b, 38 + 8 * b) for b in range(4)]
    for block in blocks:
        edges.extend(combinations(block, 2))
    ring = [(31, 38), (39, 46), (47, 54), (55, 30)]
    edges.extend(ring)
    bridge = (29, 30)
    edges.append(bridge)
    sc = clique_complex(edges)
    probes = {"bulk": (0, 1), "bridge": bridge, "cycle": ring[0]}
    return sc, probes


def random_clique_complex(n0: int, p: float, seed: int) -> SimplicialComplex:
    """Clique complex of a seeded Erdos-Renyi graph G(n0, p).

    Isolated vertices are dropped by construction (the complex is built
    from the surviving edges).
    """
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i, j in combinations(range(n0), 2) if rng.random() < p]
    if not edges:
        edges = [(0, 1)]
    return clique_complex(edges)
