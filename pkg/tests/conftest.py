"""Shared fixtures: the running seven-node example and its frozen matrices.

The incidence matrices below are transcribed literals (node rows 1..7 map to
ids 0..6, columns in lexicographic edge/triangle order), kept independent of
the builders so they can serve as an oracle against them.
"""

import numpy as np
import pytest

from hodgewalk import NormalizedL1, synthetic

# Edge order: [1,2],[1,3],[2,3],[2,4],[2,6],[3,4],[4,5],[4,7],[5,6],[5,7]
FIG1_B1 = np.array([
    [-1, -1,  0,  0,  0,  0,  0,  0,  0,  0],
    [ 1,  0, -1, -1, -1,  0,  0,  0,  0,  0],
    [ 0,  1,  1,  0,  0, -1,  0,  0,  0,  0],
    [ 0,  0,  0,  1,  0,  1, -1, -1,  0,  0],
    [ 0,  0,  0,  0,  0,  0,  1,  0, -1, -1],
    [ 0,  0,  0,  0,  1,  0,  0,  0,  1,  0],
    [ 0,  0,  0,  0,  0,  0,  0,  1,  0,  1],
], dtype=float)

# Triangle order: [1,2,3],[2,3,4]
FIG1_B2 = np.array([
    [ 1,  0],
    [-1,  0],
    [ 1,  1],
    [ 0, -1],
    [ 0,  0],
    [ 0,  1],
    [ 0,  0],
    [ 0,  0],
    [ 0,  0],
    [ 0,  0],
], dtype=float)

# Blue edge flow of the running example.
FIG1_FLOW = np.array([0, 1, 0, 0, 1, 0, -2, 0, -2, 0], dtype=float)


def fig1_dense_l1(b1: np.ndarray = FIG1_B1, b2: np.ndarray = FIG1_B2) -> np.ndarray:
    """Dense normalized Laplacian assembled from the frozen matrices only."""
    deg = np.abs(b2).sum(axis=1)
    d2 = np.maximum(deg, 1.0)
    d1 = 2.0 * (np.abs(b1) @ d2)
    return (d2[:, None] * b1.T) @ (b1 / d1[:, None]) + (b2 / 3.0) @ b2.T / d2[None, :]


@pytest.fixture(scope="session")
def fig1():
    return synthetic.running_example()


@pytest.fixture(scope="session")
def fig1_l1(fig1):
    return NormalizedL1(fig1)


@pytest.fixture(scope="session")
def two_hole():
    return synthetic.two_hole_complex()


@pytest.fixture(scope="session")
def two_hole_l1(two_hole):
    return NormalizedL1(two_hole[0])


@pytest.fixture(scope="session")
def clique_ring():
    return synthetic.clique_ring_complex()


@pytest.fixture(scope="session")
def clique_ring_l1(clique_ring):
    return NormalizedL1(clique_ring[0])


@pytest.fixture(scope="session")
def random_suite():
    """A spread of seeded clique complexes for property tests."""
    return [synthetic.random_clique_complex(15, 0.3, seed) for seed in range(6)]
