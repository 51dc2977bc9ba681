"""Newton polytope arithmetic and Minkowski sums of many polytopes.

Adding polynomials takes the hull of the union of their Newton polytopes;
multiplying them takes the Minkowski sum.  Large sums are computed by walking
the vertex graph of the sum: at a vertex ``a + b`` of ``A + B`` the tangent
cone is generated by the edges of ``A`` at ``a`` together with the edges of
``B`` at ``b``, and its extreme rays are exactly the edges of the sum.  Every
neighbour reached that way is automatically a vertex, so no point of
``A + B`` that is not a vertex is ever tested.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Optional, Sequence

from . import planar
from .geometry import (
    DimensionError,
    Point,
    VertexPolytope,
    _Echelon,
    add,
    hull_reduce,
    in_cone,
    primitive,
    project,
    sub,
    with_adjacency,
)

Witness = tuple


@dataclass(frozen=True)
class NewtonPolytope:
    """A polytope whose vertices may carry one explaining hidden assignment each."""

    polytope: VertexPolytope
    witness: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        if self.witness is not None and not set(self.witness) <= set(self.polytope.vertices):
            raise ValueError("witness keys must be vertices")

    @classmethod
    def monomial(cls, exponent: Sequence[int], label: Witness = ()) -> "NewtonPolytope":
        p = tuple(int(x) for x in exponent)
        return cls(VertexPolytope((p,), len(p)), {p: tuple(label)})

    @property
    def vertices(self) -> tuple[Point, ...]:
        return self.polytope.vertices

    @property
    def dim(self) -> int:
        return self.polytope.dim


def _least(*labels):
    present = [w for w in labels if w is not None]
    return min(present) if present else None


def np_add(P: NewtonPolytope, Q: NewtonPolytope) -> NewtonPolytope:
    """Newton polytope of a sum of polynomials; shared vertices keep the least witness."""
    if P.dim != Q.dim:
        raise DimensionError("cannot add polytopes of different dimension")
    hull = hull_reduce(P.vertices + Q.vertices, P.dim)
    if P.witness is None or Q.witness is None:
        return NewtonPolytope(hull)
    wit = {v: _least(P.witness.get(v), Q.witness.get(v)) for v in hull.vertices}
    return NewtonPolytope(hull, wit)


def np_mul(P: NewtonPolytope, Q: NewtonPolytope) -> NewtonPolytope:
    """Newton polytope of a product: the Minkowski sum, witnesses concatenated."""
    if P.dim != Q.dim:
        raise DimensionError("cannot multiply polytopes of different dimension")
    sums = {}
    for p in P.vertices:
        for q in Q.vertices:
            sums.setdefault(add(p, q), (p, q))
    hull = hull_reduce(sums, P.dim)
    if P.witness is None or Q.witness is None:
        return NewtonPolytope(hull)
    wit = {}
    for v in hull.vertices:
        p, q = sums[v]  # a vertex of a sum decomposes uniquely
        wit[v] = tuple(P.witness[p]) + tuple(Q.witness[q])
    return NewtonPolytope(hull, wit)


# ---------------------------------------------------------------------------
# many-summand Minkowski sums


class _Graph:
    __slots__ = ("verts", "adj")

    def __init__(self, verts: list[Point], adj: list[list[int]]):
        self.verts = verts
        self.adj = adj


def _lexmax(verts: list[Point]) -> int:
    return max(range(len(verts)), key=verts.__getitem__)


def _graph_sum(A: _Graph, B: _Graph) -> _Graph:
    va, adja, vb, adjb = A.verts, A.adj, B.verts, B.adj
    start = (_lexmax(va), _lexmax(vb))
    index = {start: 0}
    order = [start]
    adj: list[list[int]] = []
    k = 0
    while k < len(order):
        ia, ib = order[k]
        classes: dict[Point, list] = {}
        for ja in adja[ia]:
            classes.setdefault(primitive(sub(va[ja], va[ia])), [None, None])[0] = ja
        for jb in adjb[ib]:
            classes.setdefault(primitive(sub(vb[jb], vb[ib])), [None, None])[1] = jb
        keys = list(classes)
        ech = _Echelon()
        simplicial = all(ech.insert(key) for key in keys)
        nbrs = []
        for key in keys:
            if not simplicial and in_cone(key, [o for o in keys if o != key]):
                continue
            ja, jb = classes[key]
            nb = (ia if ja is None else ja, ib if jb is None else jb)
            if nb not in index:
                index[nb] = len(order)
                order.append(nb)
            nbrs.append(index[nb])
        adj.append(nbrs)
        k += 1
    return _Graph([add(va[a], vb[b]) for a, b in order], adj)


def _planar_sum(A: _Graph, B: _Graph) -> _Graph:
    poly = planar.minkowski_pair(A.verts, B.verts)
    return _cycle_graph(poly)


def _cycle_graph(poly: list) -> _Graph:
    k = len(poly)
    if k == 1:
        return _Graph(list(poly), [[]])
    if k == 2:
        return _Graph(list(poly), [[1], [0]])
    return _Graph(list(poly), [[(i - 1) % k, (i + 1) % k] for i in range(k)])


def _pair_job(args):
    kind, A, B = args
    return _planar_sum(A, B) if kind == "planar" else _graph_sum(A, B)


def _reduce_tree(graphs: list[_Graph], kind: str, jobs: int) -> _Graph:
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while len(graphs) > 1:
            pairs = [(kind, graphs[i], graphs[i + 1]) for i in range(0, len(graphs) - 1, 2)]
            rest = graphs[-1:] if len(graphs) % 2 else []
            if pool is not None and len(pairs) > 1:
                summed = list(pool.map(_pair_job, pairs))
            else:
                summed = [_pair_job(p) for p in pairs]
            graphs = summed + rest
    finally:
        if pool is not None:
            pool.shutdown()
    return graphs[0]


class _Lift:
    """Integer coordinates on the linear span shared by all summands."""

    def __init__(self, polys: Sequence[VertexPolytope]):
        ech = _Echelon()
        d = polys[0].dim
        for P in polys:
            v0 = P.vertices[0]
            for v in P.vertices[1:]:
                if ech.rank == d:
                    break
                ech.insert(sub(v, v0))
        self.rows = sorted(ech.rows)
        self.frame = tuple(c for c, _ in self.rows)
        self.dim = d

    def down(self, p: Point) -> Point:
        return project(p, self.frame)

    def up(self, y: Sequence[int], base_full: Point, base_red: Point) -> Point:
        out = list(base_full)
        for (_, row), yi, bi in zip(self.rows, y, base_red):
            t = yi - bi
            if t:
                for j, rj in enumerate(row):
                    if rj:
                        out[j] += t * rj
        return tuple(int(x) for x in out)


def minkowski_sum_many(polys: Iterable[VertexPolytope], jobs: int = 1) -> VertexPolytope:
    """Vertex set (with edge graph attached) of the Minkowski sum of ``polys``.

    Identical summands are merged into one scaled copy, the rest are summed
    pairwise in a balanced reduction tree, largest first.  The result is in
    canonical (lexicographic) order and does not depend on summand order.
    """
    polys = list(polys)
    if not polys:
        raise ValueError("empty list of polytopes")
    d = polys[0].dim
    if any(P.dim != d for P in polys):
        raise DimensionError("summands of different dimension")
    counts = Counter(polys)
    distinct = sorted(counts, key=lambda P: (-len(P), P.vertices))
    scaled = [P.scale(counts[P]) if counts[P] > 1 else P for P in distinct]

    lift = _Lift(scaled)
    base_full = tuple(sum(P.vertices[0][i] for P in scaled) for i in range(d))
    base_red = lift.down(base_full)
    k = len(lift.frame)
    if k == 0:
        return with_adjacency(VertexPolytope((base_full,), d), [()])

    if k <= 2:
        def to2(p):
            q = lift.down(p)
            return q if k == 2 else (q[0], 0)

        graphs = [_cycle_graph(planar.convex_hull([to2(v) for v in P.vertices])) for P in scaled]
        total = _reduce_tree(graphs, "planar", jobs)
        red = [v[:k] for v in total.verts]
    else:
        graphs = [_Graph([lift.down(v) for v in P.vertices], [list(nb) for nb in P.adjacency]) for P in scaled]
        total = _reduce_tree(graphs, "graph", jobs)
        red = total.verts

    full = [lift.up(y, base_full, base_red) for y in red]
    order = sorted(range(len(full)), key=full.__getitem__)
    pos = {old: new for new, old in enumerate(order)}
    adjacency = [[pos[j] for j in total.adj[i]] for i in order]
    out = VertexPolytope(tuple(full[i] for i in order), d)
    return with_adjacency(out, adjacency)


# ---------------------------------------------------------------------------
# vertex-count bounds


@dataclass(frozen=True)
class BoundReport:
    m: Optional[int]
    M: int
    d: int
    gs_bound: Optional[int]
    fif_bound: int
    dominant_term: Fraction

    def line(self) -> str:
        dom = self.dominant_term
        dom_s = str(dom.numerator) if dom.denominator == 1 else f"{dom.numerator}/{dom.denominator}"
        m = "-" if self.m is None else str(self.m)
        gs = "-" if self.gs_bound is None else str(self.gs_bound)
        return f"m={m} M={self.M} d={self.d} gs={gs} fif={self.fif_bound} dominant={dom_s}"


def gs_bound(m: int, d: int) -> int:
    """Upper bound on the vertices of a Minkowski sum whose summands have m edge directions."""
    return 2 * sum(comb(m - 1, j) for j in range(d))


def bounds(m: Optional[int], M: int, d: int) -> BoundReport:
    if d < 1 or M < 0 or (m is not None and m < 1):
        raise ValueError("need m >= 1, M >= 0, d >= 1")
    edges = (2 * M + 1) ** d
    fif = 2 * sum(comb(edges - 1, j) for j in range(d))
    dominant = Fraction(2 ** (d * d - d + 1), factorial(d - 1)) * M ** (d * (d - 1))
    return BoundReport(m, M, d, None if m is None else gs_bound(m, d), fif, dominant)
