"""Construction, closure, degrees, homology ranks, and serialization."""

from itertools import combinations

import pytest

from hodgewalk import (
    clique_complex,
    from_set_collection,
    from_simplices,
    read_complex,
    write_complex,
)
from hodgewalk.errors import DegenerateSimplex, ParseError


class TestFromSimplices:
    def test_running_example_dimensions(self, fig1):
        assert (fig1.n0, fig1.n1, fig1.n2) == (7, 10, 2)

    def test_empty(self):
        sc = from_simplices([], [])
        assert (sc.n0, sc.n1, sc.n2) == (0, 0, 0)

    def test_closure_completion(self):
        sc = from_simplices([], [(3, 1, 2)])
        assert sc.labels == (1, 2, 3)
        assert sc.edges == ((0, 1), (0, 2), (1, 2))
        assert sc.triangles == ((0, 1, 2),)

    def test_degenerate_triangle(self):
        with pytest.raises(DegenerateSimplex):
            from_simplices([], [(1, 1, 2)])

    def test_degenerate_edge(self):
        with pytest.raises(DegenerateSimplex):
            from_simplices([(4, 4)], [])

    def test_duplicates_collapse(self):
        sc = from_simplices([(2, 1), (1, 2), (1, 2)], [(1, 2, 3), (3, 2, 1)])
        assert sc.n1 == 3 and sc.n2 == 1

    def test_closure_is_idempotent(self, fig1):
        again = from_simplices(fig1.edges, fig1.triangles)
        assert again.edges == fig1.edges
        assert again.triangles == fig1.triangles
        assert again.n0 == fig1.n0

    def test_string_labels_round_trip(self):
        sc = from_simplices([("b", "a"), ("b", "c")], [])
        assert sc.labels == ("a", "b", "c")
        assert sc.label_to_id["b"] == 1

    def test_lexicographic_order(self):
        sc = from_simplices([(5, 1), (2, 1), (3, 2)], [])
        assert sc.edges == tuple(sorted(sc.edges))


class TestCliqueComplex:
    def test_running_example_skeleton(self, fig1):
        # The skeleton has three 3-cliques; the running example fills only
        # the first two, which is what makes {4,5,7} an unfilled cycle.
        sc = clique_complex(fig1.edges)
        assert sc.triangles == ((0, 1, 2), (1, 2, 3), (3, 4, 6))
        assert set(fig1.triangles) < set(sc.triangles)

    def test_path_graph_has_no_triangles(self):
        sc = clique_complex([(1, 2), (2, 3)])
        assert sc.n2 == 0

    def test_k4(self):
        vertices = range(4)
        edges = list(combinations(vertices, 2))
        expected = {t for t in combinations(vertices, 3)
                    if all(tuple(sorted(p)) in set(edges) for p in combinations(t, 2))}
        sc = clique_complex(edges)
        assert set(sc.triangles) == expected
        assert sc.n2 == 4

    def test_self_loop(self):
        with pytest.raises(DegenerateSimplex):
            clique_complex([(1, 1)])

    def test_every_triangle_edge_exists(self, random_suite):
        for sc in random_suite:
            for (i, j, k) in sc.triangles:
                assert sc.has_edge(i, j) and sc.has_edge(i, k) and sc.has_edge(j, k)


class TestFromSetCollection:
    def test_four_set(self):
        members = (1, 2, 3, 4)
        sc = from_set_collection([set(members)])
        assert set(sc.edges) == {tuple(sorted((a - 1, b - 1))) for a, b in combinations(members, 2)}
        assert sc.n1 == 6 and sc.n2 == 4

    def test_two_pairs(self):
        sc = from_set_collection([{1, 2}, {2, 3}])
        assert sc.n1 == 2 and sc.n2 == 0

    def test_singleton(self):
        sc = from_set_collection([{1}])
        assert sc.n0 == 1 and sc.n1 == 0

    def test_oversized_sets_flag(self):
        sets = [{1, 2, 3, 4}, {4, 5}]
        assert from_set_collection(sets).n1 == 7
        assert from_set_collection(sets, include_oversized=False).n1 == 1


class TestDegree:
    def test_running_example_degrees(self, fig1):
        two_three = fig1.edge_index(fig1.label_to_id[2], fig1.label_to_id[3])
        two_six = fig1.edge_index(fig1.label_to_id[2], fig1.label_to_id[6])
        assert fig1.degree(two_three) == 2
        assert fig1.degree(two_six) == 0

    def test_single_filled_triangle(self):
        sc = from_simplices([], [(1, 2, 3)])
        assert [sc.degree(e) for e in range(3)] == [1, 1, 1]

    def test_out_of_range(self, fig1):
        with pytest.raises(IndexError):
            fig1.degree(fig1.n1)


class TestBetti:
    def test_running_example(self, fig1):
        assert fig1.betti_numbers() == (1, 2)

    def test_unfilled_triangle(self):
        sc = from_simplices([(1, 2), (1, 3), (2, 3)])
        assert sc.betti_numbers() == (1, 1)

    def test_filled_triangle(self):
        sc = from_simplices([], [(1, 2, 3)])
        assert sc.betti_numbers() == (1, 0)

    def test_nonnegative(self, random_suite):
        for sc in random_suite:
            b0, b1 = sc.betti_numbers()
            assert b0 >= 1 and b1 >= 0


class TestSerialization:
    def test_round_trip(self, fig1, tmp_path):
        path = tmp_path / "complex.txt"
        write_complex(fig1, path)
        back = read_complex(path)
        assert back.edges == fig1.edges
        assert back.triangles == fig1.triangles
        assert back.n0 == fig1.n0

    def test_comments_and_isolated_vertices(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("# a comment\nn0 4\ne 0 1\n")
        sc = read_complex(path)
        assert sc.n0 == 4 and sc.n1 == 1

    def test_bad_line(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("n0 3\ne 0 x\n")
        with pytest.raises(ParseError) as err:
            read_complex(path)
        assert err.value.line == 2

    def test_missing_header(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("e 0 1\n")
        with pytest.raises(ParseError):
            read_complex(path)

    def test_id_beyond_header(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("n0 2\ne 0 5\n")
        with pytest.raises(ParseError):
            read_complex(path)

    def test_two_hole_round_trip_is_stable(self, two_hole, tmp_path):
        sc, _ = two_hole
        path = tmp_path / "t.txt"
        write_complex(sc, path)
        first = path.read_text()
        write_complex(read_complex(path), path)
        assert path.read_text() == first
