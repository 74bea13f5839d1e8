"""Monte Carlo simulation of the lifted edge-space random walk.

One step from an oriented edge: with probability 1/2 move through the
lower-adjacent connections (and then forward along or backward against the
orientation, 1/2 each, landing on a target edge with probability
proportional to its adjusted degree), otherwise move through the
upper-adjacent connections (uniformly to one of the oppositely-oriented
edges of a shared triangle, or, if the edge has no triangle, stay put or
flip orientation with probability 1/2 each).

The sampling tables are assembled from the complex's combinatorics alone,
so empirical frequencies provide an independent check of the analytic
transition matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex import SimplicialComplex

__all__ = ["WalkState", "WalkRun", "LiftedWalk"]


@dataclass(frozen=True)
class WalkState:
    """Position of one walker; ``oriented_edge`` is in [0, 2*n1)."""

    oriented_edge: int
    rng_seed: int
    step_count: int = 0


@dataclass(frozen=True)
class WalkRun:
    """Aggregated visits of a chain ensemble."""

    visits: np.ndarray        # counts over states, times 0..n_steps inclusive
    final_counts: np.ndarray  # counts of the state at time n_steps
    n_steps: int
    n_chains: int
    seed: int

    def visit_frequencies(self) -> np.ndarray:
        total = self.visits.sum()
        return self.visits / total if total else self.visits

    def final_distribution(self) -> np.ndarray:
        return self.final_counts / self.n_chains


class _Table:
    """Flat per-state categorical tables with a globally monotone cdf.

    Row b of the table occupies ``targets[offsets[b]:offsets[b+1]]`` and
    ``gcdf`` stores b + (within-row cumulative probability), which is
    strictly increasing across the whole array, so a draw u in [0, 1) from
    state b resolves with one searchsorted on key b + u.
    """

    def __init__(self, rows: list[list[tuple[int, float]]]):
        offsets = [0]
        targets: list[int] = []
        gcdf: list[float] = []
        for b, row in enumerate(rows):
            weights = np.array([w for _, w in row], dtype=float)
            cdf = np.cumsum(weights) / weights.sum()
            cdf[-1] = 1.0
            targets.extend(t for t, _ in row)
            gcdf.extend(b + cdf)
            offsets.append(len(targets))
        self.targets = np.asarray(targets, dtype=np.int64)
        self.gcdf = np.asarray(gcdf, dtype=float)
        self.offsets = np.asarray(offsets, dtype=np.int64)

    def sample(self, states: np.ndarray, u: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.gcdf, states + u, side="right")
        return self.targets[idx]


class LiftedWalk:
    """Sampler over the 2*n1 oriented-edge states of a complex."""

    def __init__(self, sc: SimplicialComplex):
        if sc.n1 == 0:
            raise ValueError("cannot walk on a complex with no edges")
        self.complex = sc
        n1 = sc.n1
        self.n_states = 2 * n1
        d2 = np.array([max(sc.degree(e), 1) for e in range(n1)], dtype=float)

        # Oriented edge a < n1 runs i -> j (i < j); a + n1 runs j -> i.
        source = np.empty(2 * n1, dtype=np.int64)
        target = np.empty(2 * n1, dtype=np.int64)
        for e, (i, j) in enumerate(sc.edges):
            source[e], target[e] = i, j
            source[e + n1], target[e + n1] = j, i
        self._source, self._target = source, target

        out_of_node: dict[int, list[tuple[int, float]]] = {}
        for a in range(2 * n1):
            out_of_node.setdefault(source[a], []).append((a, d2[a % n1]))

        forward_rows = [out_of_node[target[b]] for b in range(2 * n1)]
        flip = lambda a: a + n1 if a < n1 else a - n1
        backward_rows = [
            [(flip(a), w) for a, w in out_of_node[source[b]]] for b in range(2 * n1)
        ]

        tri_of_edge: dict[int, list[tuple[int, int, int]]] = {e: [] for e in range(n1)}
        for tri in sc.triangles:
            for pair in ((tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])):
                tri_of_edge[sc.edge_index(*pair)].append(tri)

        upper_rows: list[list[tuple[int, float]]] = []
        for b in range(2 * n1):
            e = b % n1
            if not tri_of_edge[e]:
                upper_rows.append([(b, 1.0), (flip(b), 1.0)])
                continue
            row = []
            or_b = 1.0 if b < n1 else -1.0
            for tri in tri_of_edge[e]:
                # Targets are the oriented edges whose sign relative to the
                # shared triangle is opposite to ours.
                want = -or_b * _face_sign(sc.edges[e], tri)
                for pair in ((tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])):
                    e2 = sc.edge_index(*pair)
                    orient = want * _face_sign(sc.edges[e2], tri)
                    row.append((e2 if orient > 0 else e2 + n1, 1.0))
            upper_rows.append(row)

        self._forward = _Table(forward_rows)
        self._backward = _Table(backward_rows)
        self._upper = _Table(upper_rows)

    # -- single-step protocol ------------------------------------------------
    def step(self, state: WalkState) -> WalkState:
        """One protocol step; deterministic in (rng_seed, step_count)."""
        rng = np.random.default_rng((state.rng_seed, state.step_count))
        u = rng.random(3)
        s = np.array([state.oriented_edge])
        draw = np.array([u[2]])
        if u[0] < 0.5:
            table = self._forward if u[1] < 0.5 else self._backward
        else:
            table = self._upper
        nxt = int(table.sample(s, draw)[0])
        return WalkState(nxt, state.rng_seed, state.step_count + 1)

    # -- vectorized ensembles --------------------------------------------------
    def run(self, start: int, n_steps: int, n_chains: int, seed: int) -> WalkRun:
        """Advance ``n_chains`` independent walkers from ``start``.

        Chain c consumes row c of a seed-derived uniform tensor, so chains
        are mutually independent and the whole run is reproducible.
        """
        if not 0 <= start < self.n_states:
            raise IndexError(f"start state {start} out of range [0, {self.n_states})")
        if n_steps < 0 or n_chains < 1:
            raise ValueError("need n_steps >= 0 and n_chains >= 1")
        rng = np.random.default_rng(seed)
        states = np.full(n_chains, start, dtype=np.int64)
        visits = np.zeros(self.n_states, dtype=np.int64)
        visits[start] += n_chains
        for _ in range(n_steps):
            u = rng.random((n_chains, 3))
            states = self._advance(states, u)
            np.add.at(visits, states, 1)
        final = np.bincount(states, minlength=self.n_states)
        return WalkRun(visits=visits, final_counts=final, n_steps=n_steps,
                       n_chains=n_chains, seed=seed)

    def _advance(self, states: np.ndarray, u: np.ndarray) -> np.ndarray:
        nxt = np.empty_like(states)
        lower = u[:, 0] < 0.5
        fwd = lower & (u[:, 1] < 0.5)
        bwd = lower & ~fwd
        upper = ~lower
        for table, mask in ((self._forward, fwd), (self._backward, bwd), (self._upper, upper)):
            if mask.any():
                nxt[mask] = table.sample(states[mask], u[mask, 2])
        return nxt

    def one_step_matrix(self, n_samples: int, seed: int) -> np.ndarray:
        """Empirical transition matrix: column b from n_samples one-step
        draws started at b."""
        cols = []
        for b in range(self.n_states):
            run = self.run(start=b, n_steps=1, n_chains=n_samples, seed=seed + b)
            cols.append(run.final_distribution())
        return np.column_stack(cols)


def _face_sign(edge: tuple[int, int], tri: tuple[int, int, int]) -> float:
    """Sign of an (ascending) edge inside an (ascending) triangle's boundary:
    (i,j) and (j,k) positive, (i,k) negative."""
    i, _, k = tri
    return -1.0 if edge == (i, k) else 1.0
