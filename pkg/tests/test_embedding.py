"""Edge, flow, and trajectory embeddings into the harmonic subspace."""

from collections import deque

import numpy as np
import pytest

from hodgewalk import (
    NormalizedL1,
    Trajectory,
    embed_edge,
    embed_trajectory,
    from_simplices,
    spectral_embed,
    trajectory_flow,
)
from hodgewalk.errors import DimensionError, InvalidTrajectory
from conftest import FIG1_FLOW

HOLE_CENTERS = np.array([[0.3, 0.3], [0.72, 0.72]])


def bfs_path(adj, a, b):
    prev = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            break
        for w in adj[u]:
            if w not in prev:
                prev[w] = u
                queue.append(w)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def loop_around(sc, pts, center, rho, m=12):
    """Closed walk encircling ``center`` once, built from angular anchors
    bridged by shortest paths."""
    adj = {v: set() for v in range(sc.n0)}
    for i, j in sc.edges:
        adj[i].add(j)
        adj[j].add(i)
    anchors = []
    for k in range(m):
        theta = 2 * np.pi * k / m
        p = center + rho * np.array([np.cos(theta), np.sin(theta)])
        v = int(np.argmin(np.linalg.norm(pts - p, axis=1)))
        if not anchors or anchors[-1] != v:
            anchors.append(v)
    anchors.append(anchors[0])
    walk = [anchors[0]]
    for a, b in zip(anchors, anchors[1:]):
        walk.extend(bfs_path(adj, a, b)[1:])
    return Trajectory(tuple(walk))


class TestEdgeEmbedding:
    def test_direction_negates(self, fig1_l1):
        fwd = embed_edge(fig1_l1, 3, 1)
        rev = embed_edge(fig1_l1, 3, -1)
        assert np.array_equal(fwd.coordinates, -rev.coordinates)

    def test_unfilled_triangle_coordinates(self):
        l1 = NormalizedL1(from_simplices([(1, 2), (1, 3), (2, 3)]))
        point = embed_edge(l1, 0, 1)
        assert abs(abs(point.coordinates[0]) - 1 / np.sqrt(3)) < 1e-12

    def test_far_from_holes_is_small(self, two_hole, two_hole_l1):
        sc, pts = two_hole
        h = two_hole_l1.harmonic_basis()
        mids = np.array([(pts[i] + pts[j]) / 2 for i, j in sc.edges])
        corner = int(np.argmin(np.linalg.norm(mids - np.array([0.05, 0.95]), axis=1)))
        mags = np.linalg.norm(h, axis=1)
        assert mags[corner] < 0.35 * mags.max()

    def test_empty_harmonic_space(self):
        l1 = NormalizedL1(from_simplices([], [(1, 2, 3)]))
        assert embed_edge(l1, 0, 1).coordinates.shape == (0,)

    def test_bad_edge_or_direction(self, fig1_l1):
        with pytest.raises(IndexError):
            embed_edge(fig1_l1, fig1_l1.n1, 1)
        with pytest.raises(ValueError):
            embed_edge(fig1_l1, 0, 2)


class TestTrajectoryFlow:
    def test_signs(self, fig1):
        # 2 -> 6 -> 5 -> 4 in original labels.
        ids = [fig1.label_to_id[v] for v in (2, 6, 5, 4)]
        flow = trajectory_flow(fig1, Trajectory(tuple(ids)))
        assert flow[fig1.edge_index(ids[0], ids[1])] == 1.0     # 2<6: along
        assert flow[fig1.edge_index(ids[1], ids[2])] == -1.0    # 6>5: against
        assert flow[fig1.edge_index(ids[2], ids[3])] == -1.0    # 5>4: against

    def test_revisits_accumulate(self, fig1):
        ids = [fig1.label_to_id[v] for v in (2, 6, 2, 6)]
        flow = trajectory_flow(fig1, Trajectory(tuple(ids)))
        assert flow[fig1.edge_index(ids[0], ids[1])] == 1.0
        ids = [fig1.label_to_id[v] for v in (2, 6, 5, 6)]
        flow = trajectory_flow(fig1, Trajectory(tuple(ids)))
        assert flow[fig1.edge_index(fig1.label_to_id[5], fig1.label_to_id[6])] == 0.0

    def test_invalid_step_names_offender(self, fig1):
        with pytest.raises(InvalidTrajectory) as err:
            trajectory_flow(fig1, Trajectory((0, 6)))
        assert err.value.step == 0 and err.value.pair == (0, 6)

    def test_too_short(self):
        with pytest.raises(InvalidTrajectory):
            Trajectory((3,))


class TestTrajectoryEmbedding:
    def test_reverse_cancels(self, fig1_l1):
        fig1 = fig1_l1.complex
        ids = tuple(fig1.label_to_id[v] for v in (2, 6, 5, 4))
        back = tuple(reversed(ids))
        points = embed_trajectory(fig1_l1, Trajectory(ids + back[1:]))
        assert np.linalg.norm(points[-1].coordinates) < 1e-12

    def test_single_edge_matches_embed_edge(self, fig1_l1):
        fig1 = fig1_l1.complex
        i, j = fig1.edges[4]
        points = embed_trajectory(fig1_l1, Trajectory((i, j)))
        direct = embed_edge(fig1_l1, 4, 1)
        assert np.allclose(points[-1].coordinates, direct.coordinates)

    def test_prefix_telescoping(self, fig1_l1):
        fig1 = fig1_l1.complex
        ids = tuple(fig1.label_to_id[v] for v in (1, 2, 6, 5, 4, 3))
        points = embed_trajectory(fig1_l1, Trajectory(ids))
        for t, (u, v) in enumerate(zip(ids, ids[1:]), start=1):
            sign = 1 if u < v else -1
            step = embed_edge(fig1_l1, fig1.edge_index(u, v), sign)
            delta = points[t].coordinates - points[t - 1].coordinates
            assert np.allclose(delta, step.coordinates, atol=1e-12)

    def test_loops_cluster_by_hole(self, two_hole, two_hole_l1):
        sc, pts = two_hole
        loop_a1 = loop_around(sc, pts, HOLE_CENTERS[0], 0.2)
        loop_a2 = loop_around(sc, pts, HOLE_CENTERS[0], 0.26, m=16)
        loop_b = loop_around(sc, pts, HOLE_CENTERS[1], 0.2)
        e_a1 = embed_trajectory(two_hole_l1, loop_a1)[-1].coordinates
        e_a2 = embed_trajectory(two_hole_l1, loop_a2)[-1].coordinates
        e_b = embed_trajectory(two_hole_l1, loop_b)[-1].coordinates
        # Same-hole loops land together; different holes are far apart, and
        # each loop has an O(1) embedding norm.
        assert np.linalg.norm(e_a1) > 1.0 and np.linalg.norm(e_b) > 1.0
        assert np.linalg.norm(e_a1 - e_a2) < 0.2
        assert np.linalg.norm(e_a1 - e_b) > 1.0
        # A loop around one hole is nearly orthogonal to a loop around the
        # other in embedding space.
        cos = abs(e_a1 @ e_b) / (np.linalg.norm(e_a1) * np.linalg.norm(e_b))
        assert cos < 0.3


class TestLinearity:
    def test_embedding_is_linear(self, fig1_l1):
        h = fig1_l1.harmonic_basis()
        rng = np.random.default_rng(8)
        f, g = rng.normal(size=(2, fig1_l1.n1))
        a, b = 0.7, -2.2
        assert np.allclose(h.T @ (a * f + b * g), a * (h.T @ f) + b * (h.T @ g), atol=1e-12)

    def test_norm_is_basis_invariant(self, fig1_l1):
        h = fig1_l1.harmonic_basis()
        rng = np.random.default_rng(9)
        q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
        rotated = h @ q
        f = rng.normal(size=fig1_l1.n1)
        assert np.linalg.norm(h.T @ f) == pytest.approx(np.linalg.norm(rotated.T @ f), abs=1e-12)


class TestSpectralEmbedding:
    def test_kernel_slice_matches_harmonic_norm(self, fig1_l1):
        point = spectral_embed(fig1_l1, FIG1_FLOW, k_prime=2)
        h = fig1_l1.harmonic_basis()
        assert np.linalg.norm(point.coordinates) == pytest.approx(
            np.linalg.norm(h.T @ FIG1_FLOW), abs=1e-8)

    def test_full_basis_preserves_norm(self, fig1_l1):
        point = spectral_embed(fig1_l1, FIG1_FLOW, k_prime=fig1_l1.n1)
        assert np.linalg.norm(point.coordinates) == pytest.approx(
            np.linalg.norm(FIG1_FLOW), abs=1e-10)

    def test_zero_flow(self, fig1_l1):
        point = spectral_embed(fig1_l1, np.zeros(fig1_l1.n1), k_prime=4)
        assert np.array_equal(point.coordinates, np.zeros(4))

    def test_k_prime_bounds(self, fig1_l1):
        with pytest.raises(DimensionError):
            spectral_embed(fig1_l1, FIG1_FLOW, k_prime=fig1_l1.n1 + 1)
