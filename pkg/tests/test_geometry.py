import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from inferpoly import lp
from inferpoly.geometry import (
    DimensionError,
    VertexPolytope,
    argmax_face,
    edge_directions,
    hull_reduce,
    in_cone,
    is_vertex,
    nullspace_vector,
    rank,
)
from oracles import lp_hull, lp_is_vertex

FIVE_POINTS = [(3, 0), (2, 2), (1, 2), (1, 0), (0, 4)]

points_2d = st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=12)
points_3d = st.lists(st.tuples(*[st.integers(-3, 3)] * 3), min_size=1, max_size=10)


class TestExactLP:
    def test_simple_optimum(self):
        # max x + y s.t. x + 2y + s = 4, 3x + y + t = 6
        res = lp.solve([1, 1, 0, 0], [[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6])
        assert res.status == lp.OPTIMAL
        assert res.value == Fraction(14, 5)

    def test_infeasible(self):
        assert lp.solve([0, 0], [[1, 1], [1, 1]], [1, 2]).status == lp.INFEASIBLE

    def test_unbounded(self):
        assert lp.solve([1, 0], [[1, -1]], [0]).status == lp.UNBOUNDED

    def test_redundant_rows(self):
        x = lp.feasible_point([[1, 1], [2, 2]], [2, 4])
        assert x is not None and x[0] + x[1] == 2

    def test_degenerate_cycling_example(self):
        # Beale's classic cycling instance terminates under Bland's rule
        c = [Fraction(3, 4), -150, Fraction(1, 50), -6, 0, 0, 0]
        A = [
            [Fraction(1, 4), -60, Fraction(-1, 25), 9, 1, 0, 0],
            [Fraction(1, 2), -90, Fraction(-1, 50), 3, 0, 1, 0],
            [0, 0, 1, 0, 0, 0, 1],
        ]
        res = lp.solve(c, A, [0, 0, 1])
        assert res.status == lp.OPTIMAL
        assert res.value == Fraction(1, 20)


class TestIsVertex:
    def test_five_points_vertex(self):
        assert is_vertex((2, 2), FIVE_POINTS)

    def test_five_points_interior(self):
        assert not is_vertex((1, 2), FIVE_POINTS)

    def test_singleton(self):
        assert is_vertex((0, 0), [(0, 0)])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            is_vertex((0, 0), [(0, 0), (1, 2, 3)])

    def test_empty(self):
        with pytest.raises(ValueError):
            is_vertex((0, 0), [])

    def test_point_not_in_set(self):
        with pytest.raises(ValueError):
            is_vertex((9, 9), FIVE_POINTS)

    def test_collinear_middle(self):
        assert not is_vertex((1, 1, 1), [(0, 0, 0), (1, 1, 1), (2, 2, 2)])

    @settings(max_examples=60, deadline=None)
    @given(points_3d)
    def test_agrees_with_float_lp(self, pts):
        pts = sorted(set(pts))
        for p in pts:
            assert is_vertex(p, pts) == lp_is_vertex(p, pts)


class TestHullReduce:
    def test_five_points(self):
        assert hull_reduce(FIVE_POINTS, 2).vertices == ((0, 4), (1, 0), (2, 2), (3, 0))

    def test_collinear(self):
        assert hull_reduce([(0, 0), (1, 1), (2, 2)], 2).vertices == ((0, 0), (2, 2))

    def test_single(self):
        assert hull_reduce([(5, 7)], 2).vertices == ((5, 7),)

    def test_empty(self):
        with pytest.raises(ValueError):
            hull_reduce([], 2)

    def test_wrong_dimension(self):
        with pytest.raises(DimensionError):
            hull_reduce([(1, 2)], 3)

    @settings(max_examples=80, deadline=None)
    @given(points_2d)
    def test_matches_oracle_2d(self, pts):
        assert set(hull_reduce(pts, 2).vertices) == lp_hull(pts)

    @settings(max_examples=60, deadline=None)
    @given(points_3d)
    def test_matches_oracle_3d_and_idempotent(self, pts):
        P = hull_reduce(pts, 3)
        assert set(P.vertices) == lp_hull(pts)
        assert hull_reduce(P.vertices, 3) == P
        assert all(is_vertex(p, P.vertices) for p in P.vertices)

    def test_lower_dimensional_in_high_dimension(self):
        # a hexagon placed in a 2-plane inside Z^5
        hexagon = [(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)]
        lift = [(a, b, a + b, 3, a - 2 * b) for a, b in hexagon]
        interior = [(0, 0, 0, 3, 0), (1, 1, 2, 3, -1)]
        assert set(hull_reduce(lift + interior, 5).vertices) == set(lift)


class TestArgmaxFace:
    P = hull_reduce(FIVE_POINTS, 2)

    def test_x_direction(self):
        assert argmax_face(self.P, (1, 0)) == [(3, 0)]

    def test_y_direction(self):
        assert argmax_face(self.P, (0, 1)) == [(0, 4)]

    def test_tie(self):
        seg = VertexPolytope.from_vertices([(0, 0), (1, 0)])
        assert set(argmax_face(seg, (0, 1))) == {(0, 0), (1, 0)}

    def test_rational_direction(self):
        assert argmax_face(self.P, (Fraction(1, 3), Fraction(1, 2))) == [(0, 4)]

    def test_zero_direction(self):
        with pytest.raises(ValueError):
            argmax_face(self.P, (0, 0))

    def test_random_directions_attain_max(self):
        rng = random.Random(5)
        for _ in range(200):
            w = (Fraction(rng.randint(-50, 50), rng.randint(1, 9)), Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
            if w == (0, 0):
                continue
            face = argmax_face(self.P, w)
            best = max(w[0] * x + w[1] * y for x, y in self.P.vertices)
            assert all(w[0] * x + w[1] * y == best for x, y in face)


class TestEdgeDirections:
    def test_square(self):
        sq = VertexPolytope.from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert edge_directions(sq) == {(1, 0), (0, 1)}

    def test_five_points(self):
        assert edge_directions(hull_reduce(FIVE_POINTS, 2)) == {(1, 0), (1, -2), (1, -1), (1, -4)}

    def test_point(self):
        assert edge_directions(VertexPolytope.from_vertices([(1, 1)])) == set()

    def test_cube_edge_graph(self):
        cube = VertexPolytope.from_vertices([(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])
        assert all(len(nb) == 3 for nb in cube.adjacency)
        assert edge_directions(cube) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}

    def test_octahedron_edge_graph(self):
        octa = VertexPolytope.from_vertices([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
        assert sum(len(nb) for nb in octa.adjacency) == 2 * 12


class TestVertexPolytope:
    def test_canonical_order(self):
        P = VertexPolytope.from_vertices([(3, 0), (0, 4), (1, 0)])
        assert P.vertices == ((0, 4), (1, 0), (3, 0))

    def test_text_roundtrip(self):
        P = hull_reduce(FIVE_POINTS, 2)
        text = P.to_text()
        assert text.splitlines()[0] == "2 4"
        assert VertexPolytope.from_text(text) == P

    def test_translate_and_scale(self):
        P = hull_reduce(FIVE_POINTS, 2)
        assert P.translate((1, 1)).vertices == tuple((x + 1, y + 1) for x, y in P.vertices)
        assert P.scale(2).vertices == tuple((2 * x, 2 * y) for x, y in P.vertices)


def test_cone_membership():
    assert in_cone((1, 1), [(1, 0), (0, 1)])
    assert not in_cone((-1, 1), [(1, 0), (0, 1)])
    assert in_cone((0, 0), [(1, 0)])
    assert not in_cone((1, 0), [])


def test_linear_algebra_helpers():
    assert rank([(1, 2, 3), (2, 4, 6), (0, 1, 0)]) == 2
    n = nullspace_vector([(1, 0, 0), (0, 1, 1)], 3)
    assert n in {(0, 1, -1), (0, -1, 1)}
    assert nullspace_vector([(1, 0, 0)], 3) is None
