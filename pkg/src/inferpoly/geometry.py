"""Exact geometry of lattice polytopes given by their vertices.

Every yes/no answer returned from this module is backed by an exact
certificate.  A floating-point non-negative least squares solve (NNLS) is
used only to *guess* which certificate to build; the certificate itself is
checked in integer/rational arithmetic, and when it cannot be built the
question is handed to the exact Bland-rule simplex in :mod:`inferpoly.lp`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import nnls

from . import lp

Point = tuple[int, ...]

#: how often each decision route was taken; handy when profiling big runs
STATS: Counter = Counter()


class DimensionError(ValueError):
    pass


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Point:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence[int], v: Sequence[int]) -> Point:
    return tuple(a + b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> Point:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = reduce(gcd, v, 0)
    if g <= 1:
        return tuple(v)
    return tuple(a // g for a in v)


def canonical_direction(v: Sequence[int]) -> Point:
    """Primitive representative of the line spanned by ``v``, first nonzero entry positive."""
    p = primitive(v)
    for a in p:
        if a:
            return p if a > 0 else tuple(-x for x in p)
    return p


# ---------------------------------------------------------------------------
# small exact linear algebra


def _solve_spd(G: list[list[int]], rhs: list[int]) -> list[Fraction]:
    """Gaussian elimination for a nonsingular system (used on Gram matrices)."""
    n = len(G)
    M = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(G, rhs)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        pivot = M[c][c]
        rowc = [x / pivot for x in M[c]]
        M[c] = rowc
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], rowc)]
    return [M[r][n] for r in range(n)]


class _Echelon:
    """Incrementally maintained row-echelon basis, for rank and independence tests."""

    def __init__(self):
        self.rows: list[tuple[int, list[Fraction]]] = []

    def reduce(self, v: Sequence) -> list[Fraction]:
        w = [Fraction(x) for x in v]
        for col, row in self.rows:
            f = w[col]
            if f:
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def insert(self, v: Sequence) -> bool:
        w = self.reduce(v)
        col = next((i for i, x in enumerate(w) if x), None)
        if col is None:
            return False
        piv = w[col]
        w = [x / piv for x in w]
        # keep earlier rows reduced in the new pivot column
        self.rows = [(c, [a - r[col] * b for a, b in zip(r, w)] if r[col] else r) for c, r in self.rows]
        self.rows.append((col, w))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(c for c, _ in self.rows))


def rank(vectors: Iterable[Sequence[int]]) -> int:
    ech = _Echelon()
    for v in vectors:
        ech.insert(v)
    return ech.rank


def nullspace_vector(rows: Sequence[Sequence[int]], dim: int) -> Optional[Point]:
    """An integer vector orthogonal to ``rows`` when they span a hyperplane, else ``None``."""
    ech = _Echelon()
    for r in rows:
        ech.insert(r)
    if ech.rank != dim - 1:
        return None
    # bring to reduced form (insert already keeps it reduced) and read the free column
    pivots = {c for c, _ in ech.rows}
    free = next(i for i in range(dim) if i not in pivots)
    x = [Fraction(0)] * dim
    x[free] = Fraction(1)
    for c, row in ech.rows:
        x[c] = -row[free]
    den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in x), 1)
    return primitive([int(f * den) for f in x])


# ---------------------------------------------------------------------------
# cone membership


def _projection(cols: list[Point], g: Point) -> tuple[list[Fraction], list[Fraction]]:
    """Exact least squares of ``g`` on independent ``cols``: (coefficients, residual)."""
    G = [[dot(a, b) for b in cols] for a in cols]
    rhs = [dot(a, g) for a in cols]
    lam = _solve_spd(G, rhs)
    r = [Fraction(x) for x in g]
    for coef, c in zip(lam, cols):
        if coef:
            r = [ri - coef * ci for ri, ci in zip(r, c)]
    return lam, r


def _independent_subset(cols: list[Point], order: Iterable[int]) -> list[int]:
    ech = _Echelon()
    return [j for j in order if ech.insert(cols[j])]


def _member_certificate(g: Point, cols: list[Point], support: list[int]) -> bool:
    basis = _independent_subset(cols, support)
    if not basis:
        return not any(g)
    lam, r = _projection([cols[j] for j in basis], g)
    return not any(r) and all(x >= 0 for x in lam)


def _separation_certificate(g: Point, cols: list[Point], support: list[int]) -> bool:
    basis = _independent_subset(cols, support)
    if basis:
        _, r = _projection([cols[j] for j in basis], g)
    else:
        r = [Fraction(x) for x in g]
    if not any(r):
        return False
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in r), 1)
    w = [int(x * den) for x in r]
    return dot(w, g) > 0 and all(dot(w, c) <= 0 for c in cols)


def in_cone(g: Sequence[int], gens: Sequence[Sequence[int]]) -> bool:
    """Exactly decide whether integer vector ``g`` is a non-negative combination of ``gens``."""
    g = tuple(g)
    cols = [tuple(c) for c in gens]
    if not any(g):
        return True
    if not cols:
        return False
    A = np.array(cols, dtype=float).T
    b = np.array(g, dtype=float)
    try:
        lam, rnorm = nnls(A, b)
    except RuntimeError:  # iteration limit; let the exact solver decide
        lam, rnorm = np.zeros(len(cols)), None
    support = [int(j) for j in np.argsort(-lam) if lam[j] > 1e-12]
    if rnorm is not None:
        scale = 1.0 + float(np.abs(b).max())
        if rnorm <= 1e-7 * scale:
            if _member_certificate(g, cols, support):
                STATS["member-cert"] += 1
                return True
            if _separation_certificate(g, cols, support):
                STATS["separation-cert"] += 1
                return False
        else:
            if _separation_certificate(g, cols, support):
                STATS["separation-cert"] += 1
                return False
            if _member_certificate(g, cols, support):
                STATS["member-cert"] += 1
                return True
    STATS["simplex"] += 1
    k = len(g)
    A_eq = [[c[i] for c in cols] for i in range(k)]
    return lp.feasible_point(A_eq, list(g)) is not None


def _check_points(points: Sequence[Sequence[int]]) -> int:
    if not points:
        raise ValueError("empty point set")
    d = len(points[0])
    if any(len(p) != d for p in points):
        raise DimensionError("points of unequal dimension")
    return d


def is_vertex(p: Sequence[int], S: Iterable[Sequence[int]]) -> bool:
    """True iff ``p`` is a vertex of conv(S), i.e. some ``w`` has w.p > w.q for all other q."""
    pts = list({tuple(q) for q in S})
    p = tuple(p)
    _check_points(pts + [p])
    if p not in set(pts):
        raise ValueError("p must belong to S")
    others = [q for q in pts if q != p]
    if not others:
        return True
    frame = affine_frame(pts)
    pp = project(p, frame) + (1,)
    gens = [project(q, frame) + (1,) for q in others]
    return not in_cone(pp, gens)


def affine_frame(points: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Coordinates whose projection is injective on the affine hull of ``points``."""
    base = points[0]
    ech = _Echelon()
    d = len(base)
    for p in points[1:]:
        if ech.rank == d:
            break
        ech.insert(sub(p, base))
    return ech.pivots


def project(p: Sequence[int], frame: Sequence[int]) -> Point:
    return tuple(p[i] for i in frame)


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class VertexPolytope:
    """A lattice polytope stored as its vertex set in lexicographic order."""

    vertices: tuple[Point, ...]
    dim: int

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a polytope needs at least one vertex")

    @classmethod
    def from_vertices(cls, vertices: Iterable[Sequence[int]], dim: Optional[int] = None) -> "VertexPolytope":
        """Wrap points already known to be the vertices (no hull reduction)."""
        vs = tuple(sorted({tuple(int(x) for x in v) for v in vertices}))
        d = _check_points(vs)
        if dim is not None and dim != d:
            raise DimensionError(f"expected dimension {dim}, got {d}")
        return cls(vs, d)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._index

    @cached_property
    def _index(self) -> dict[Point, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def index(self, p: Sequence[int]) -> int:
        return self._index[tuple(p)]

    @cached_property
    def frame(self) -> tuple[int, ...]:
        return affine_frame(self.vertices)

    @property
    def affine_dim(self) -> int:
        return len(self.frame)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour indices of each vertex along the edges of the polytope."""
        return _edge_graph(self)

    def translate(self, t: Sequence[int]) -> "VertexPolytope":
        out = VertexPolytope(tuple(add(v, t) for v in self.vertices), self.dim)
        if "adjacency" in self.__dict__:
            out.__dict__["adjacency"] = self.adjacency
        return out

    def scale(self, k: int) -> "VertexPolytope":
        if k <= 0:
            raise ValueError("scale factor must be positive")
        out = VertexPolytope(tuple(tuple(k * x for x in v) for v in self.vertices), self.dim)
        if "adjacency" in self.__dict__:
            out.__dict__["adjacency"] = self.adjacency
        return out

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[j]) for i, nb in enumerate(self.adjacency) for j in nb if i < j]

    def to_text(self) -> str:
        lines = [f"{self.dim} {len(self.vertices)}"]
        lines += [" ".join(str(x) for x in v) for v in self.vertices]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "VertexPolytope":
        rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        d, k = int(rows[0][0]), int(rows[0][1])
        verts = [tuple(int(x) for x in r) for r in rows[1 : 1 + k]]
        if len(verts) != k or any(len(v) != d for v in verts):
            raise ValueError("malformed vertex list")
        return cls.from_vertices(verts, d)


def with_adjacency(P: VertexPolytope, adjacency) -> VertexPolytope:
    """Attach an already known edge graph (index based, same vertex order)."""
    P.__dict__["adjacency"] = tuple(tuple(sorted(nb)) for nb in adjacency)
    return P


def hull_reduce(points: Iterable[Sequence[int]], d: Optional[int] = None) -> VertexPolytope:
    """Keep exactly the points that are vertices of the convex hull."""
    pts = sorted({tuple(int(x) for x in p) for p in points})
    dim = _check_points(pts)
    if d is not None and d != dim:
        raise DimensionError(f"expected dimension {d}, got {dim}")
    if len(pts) <= 2:
        return VertexPolytope(tuple(pts), dim)
    frame = affine_frame(pts)
    lifted = {p: project(p, frame) + (1,) for p in pts}
    alive = list(pts)
    # a point found to be inside the hull can be dropped from later tests
    for p in pts:
        others = [lifted[q] for q in alive if q != p]
        if in_cone(lifted[p], others):
            alive.remove(p)
    return VertexPolytope(tuple(alive), dim)


def argmax_face(P: VertexPolytope, w: Sequence) -> list[Point]:
    """Vertices of ``P`` maximising ``w.x`` (more than one means ``w`` is not generic for P)."""
    if len(w) != P.dim:
        raise DimensionError("direction has wrong dimension")
    w = [Fraction(x) for x in w]
    if not any(w):
        raise ValueError("zero direction")
    vals = [dot(w, v) for v in P.vertices]
    best = max(vals)
    return [v for v, s in zip(P.vertices, vals) if s == best]


def _edge_graph(P: VertexPolytope) -> tuple[tuple[int, ...], ...]:
    vs = P.vertices
    n = len(vs)
    adj: list[set[int]] = [set() for _ in range(n)]
    if n == 2:
        adj[0].add(1)
        adj[1].add(0)
    elif n > 2:
        frame = P.frame
        red = [project(v, frame) for v in vs]
        for i in range(n):
            gens = {j: sub(red[j], red[i]) for j in range(n) if j != i}
            for j in range(i + 1, n):
                others = [g for k, g in gens.items() if k != j]
                if not in_cone(gens[j], others):
                    adj[i].add(j)
                    adj[j].add(i)
    return tuple(tuple(sorted(a)) for a in adj)


def edge_directions(P: VertexPolytope) -> set[Point]:
    """One primitive integer vector (sign-normalised) per parallel class of edges."""
    return {canonical_direction(sub(v, u)) for u, v in P.edges()}
