"""Oriented simplicial complexes of dimension <= 2.

A complex is stored as canonically sorted edge and triangle lists over dense
integer vertex ids.  The reference orientation of every simplex is ascending
vertex order, and the lexicographic position of a simplex in its list is its
index in every matrix and vector downstream.  Original (possibly non-integer)
vertex labels are kept in a relabeling map so inputs round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import DegenerateSimplex, ParseError

__all__ = [
    "SimplicialComplex",
    "from_simplices",
    "clique_complex",
    "from_set_collection",
    "read_complex",
    "write_complex",
]


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed complex with canonical simplex ordering.

    ``edges`` are (i, j) pairs with i < j, ``triangles`` are (i, j, k) with
    i < j < k, both sorted lexicographically.  ``labels`` maps a dense vertex
    id back to the original label; ``label_to_id`` is the inverse.
    Instances are immutable and safe to share across threads.
    """

    n0: int
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]
    labels: tuple[Hashable, ...] = ()
    label_to_id: dict[Hashable, int] = field(default_factory=dict, compare=False)
    _edge_index: dict[tuple[int, int], int] = field(default_factory=dict, compare=False, repr=False)
    _coface_count: tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def n1(self) -> int:
        return len(self.edges)

    @property
    def n2(self) -> int:
        return len(self.triangles)

    def edge_index(self, i: int, j: int) -> int:
        """Index of edge {i, j} in the canonical order."""
        key = (i, j) if i < j else (j, i)
        if key not in self._edge_index:
            raise KeyError(f"{key} is not an edge of the complex")
        return self._edge_index[key]

    def has_edge(self, i: int, j: int) -> bool:
        key = (i, j) if i < j else (j, i)
        return key in self._edge_index

    def degree(self, edge_index: int) -> int:
        """Number of triangles containing the given edge (its co-faces)."""
        if not 0 <= edge_index < self.n1:
            raise IndexError(f"edge index {edge_index} out of range [0, {self.n1})")
        return self._coface_count[edge_index]

    def betti_numbers(self) -> tuple[int, int]:
        """(beta_0, beta_1) from exact ranks of dense incidence matrices.

        This is the rank oracle the numerical-kernel checks elsewhere are
        validated against, so it builds its own signed incidence matrices and
        uses a rank-revealing SVD with threshold 1e-10 * sigma_max.  Desk
        scale only (dense n0 x n1 and n1 x n2 arrays).
        """
        b1 = np.zeros((self.n0, self.n1))
        for col, (i, j) in enumerate(self.edges):
            b1[i, col] = -1.0
            b1[j, col] = 1.0
        b2 = np.zeros((self.n1, self.n2))
        for col, (i, j, k) in enumerate(self.triangles):
            b2[self.edge_index(j, k), col] = 1.0
            b2[self.edge_index(i, k), col] = -1.0
            b2[self.edge_index(i, j), col] = 1.0
        rank_b1 = _svd_rank(b1)
        rank_b2 = _svd_rank(b2)
        return self.n0 - rank_b1, self.n1 - rank_b1 - rank_b2


def _svd_rank(a: np.ndarray, rel_tol: float = 1e-10) -> int:
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def _canonical_edge(pair: Sequence[Hashable]) -> tuple[Hashable, Hashable]:
    a, b = pair
    if a == b:
        raise DegenerateSimplex(f"edge with repeated vertex: {pair!r}")
    return (a, b)


def _canonical_triangle(triple: Sequence[Hashable]) -> tuple[Hashable, Hashable, Hashable]:
    a, b, c = triple
    if a == b or a == c or b == c:
        raise DegenerateSimplex(f"triangle with repeated vertex: {triple!r}")
    return (a, b, c)


def _sorted_labels(labels: Iterable[Hashable]) -> list[Hashable]:
    try:
        return sorted(labels)
    except TypeError:
        # Mixed label types: order by type name first so the result is still
        # deterministic.
        return sorted(labels, key=lambda x: (type(x).__name__, repr(x)))


def _assemble(
    edge_labels: Iterable[Sequence[Hashable]],
    triangle_labels: Iterable[Sequence[Hashable]],
    isolated_vertices: Iterable[Hashable] = (),
) -> SimplicialComplex:
    """Relabel, close downward, deduplicate and sort."""
    edge_set = {tuple(_sorted_labels(_canonical_edge(p))) for p in edge_labels}
    tri_set = {tuple(_sorted_labels(_canonical_triangle(t))) for t in triangle_labels}
    for (a, b, c) in tri_set:
        edge_set.update([(a, b), (a, c), (b, c)])

    vertices = set(isolated_vertices)
    for e in edge_set:
        vertices.update(e)
    labels = tuple(_sorted_labels(vertices))
    label_to_id = {lab: idx for idx, lab in enumerate(labels)}

    edges = tuple(sorted(tuple(sorted((label_to_id[a], label_to_id[b]))) for a, b in edge_set))
    triangles = tuple(
        sorted(tuple(sorted((label_to_id[a], label_to_id[b], label_to_id[c]))) for a, b, c in tri_set)
    )

    edge_index = {e: pos for pos, e in enumerate(edges)}
    cofaces = [0] * len(edges)
    for (i, j, k) in triangles:
        for pair in ((i, j), (i, k), (j, k)):
            cofaces[edge_index[pair]] += 1

    return SimplicialComplex(
        n0=len(labels),
        edges=edges,
        triangles=triangles,
        labels=labels,
        label_to_id=label_to_id,
        _edge_index=edge_index,
        _coface_count=tuple(cofaces),
    )


def from_simplices(
    edges: Iterable[Sequence[Hashable]],
    triangles: Iterable[Sequence[Hashable]] = (),
    isolated_vertices: Iterable[Hashable] = (),
) -> SimplicialComplex:
    """Build a complex from raw pair and triple lists.

    Pairs/triples may be unsorted and contain duplicates; missing faces of
    supplied triangles are added automatically.  A pair or triple with a
    repeated vertex raises :class:`DegenerateSimplex`.
    """
    return _assemble(edges, triangles, isolated_vertices)


def clique_complex(
    edge_list: Iterable[Sequence[Hashable]],
    isolated_vertices: Iterable[Hashable] = (),
) -> SimplicialComplex:
    """Clique complex of a simple graph: every 3-clique becomes a triangle.

    Triangles are enumerated by intersecting the neighborhood of the
    lower-degree endpoint of every edge with the other endpoint's, which is
    the standard O(n1^{3/2}) worst-case method.
    """
    edge_set = {tuple(_sorted_labels(_canonical_edge(p))) for p in edge_list}
    neighbors: dict[Hashable, set] = {}
    for a, b in edge_set:
        neighbors.setdefault(a, set()).add(b)
        neighbors.setdefault(b, set()).add(a)

    order = {lab: pos for pos, lab in enumerate(_sorted_labels(neighbors))}
    triangles = []
    for a, b in edge_set:
        lo, hi = (a, b) if len(neighbors[a]) <= len(neighbors[b]) else (b, a)
        for w in neighbors[lo]:
            # Scan the smaller neighborhood; keep w "above" both endpoints so
            # each triangle is reported exactly once.
            if order[w] > order[a] and order[w] > order[b] and w in neighbors[hi]:
                triangles.append((a, b, w))
    return _assemble(edge_set, triangles, isolated_vertices=isolated_vertices)


def from_set_collection(
    sets: Iterable[Iterable[Hashable]],
    include_oversized: bool = True,
) -> SimplicialComplex:
    """Complex induced by a collection of sets.

    Every size-2 subset of a set becomes an edge and every size-3 subset a
    triangle.  Sets with more than three elements contribute all their
    size-<=3 subsets when ``include_oversized`` is true (the default) and are
    dropped entirely otherwise.  Singletons only add vertices.
    """
    edges: list[tuple] = []
    triangles: list[tuple] = []
    singletons: list[Hashable] = []
    for raw in sets:
        members = set(raw)
        if len(members) > 3 and not include_oversized:
            continue
        if len(members) == 1:
            singletons.extend(members)
            continue
        edges.extend(combinations(_sorted_labels(members), 2))
        triangles.extend(combinations(_sorted_labels(members), 3))
    return _assemble(edges, triangles, isolated_vertices=singletons)


def write_complex(sc: SimplicialComplex, path) -> None:
    """Write the line-oriented text form: ``n0``, ``e i j``, ``t i j k``.

    Original labels are not serialized; the format carries dense vertex ids
    only.
    """
    with open(path, "w") as fh:
        fh.write(f"n0 {sc.n0}\n")
        for i, j in sc.edges:
            fh.write(f"e {i} {j}\n")
        for i, j, k in sc.triangles:
            fh.write(f"t {i} {j} {k}\n")


def read_complex(path) -> SimplicialComplex:
    """Parse the text form produced by :func:`write_complex`."""
    n0 = None
    edges: list[tuple[int, int]] = []
    triangles: list[tuple[int, int, int]] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "n0" and len(parts) == 2:
                    n0 = int(parts[1])
                elif parts[0] == "e" and len(parts) == 3:
                    edges.append((int(parts[1]), int(parts[2])))
                elif parts[0] == "t" and len(parts) == 4:
                    triangles.append((int(parts[1]), int(parts[2]), int(parts[3])))
                else:
                    raise ValueError(line)
            except ValueError as exc:
                raise ParseError(f"bad complex line {lineno}: {raw.rstrip()}", line=lineno) from exc
    if n0 is None:
        raise ParseError("missing 'n0 <int>' header")
    referenced = [v for simplex in (*edges, *triangles) for v in simplex]
    if referenced and not (0 <= min(referenced) and max(referenced) < n0):
        raise ParseError(f"vertex id outside [0, {n0}) in simplex lines")
    return from_simplices(edges, triangles, isolated_vertices=range(n0))
