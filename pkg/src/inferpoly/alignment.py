"""Two-parameter pairwise alignment.

An alignment with z matches, x mismatches and y spaces scores
z - alpha*x - beta*y.  For sequences of equal length n, x + y' + z = n with
y' = y/2 (insertions), so every alignment polytope projects losslessly to
a lattice polygon in the (y', z) plane.  Unequal lengths use (x, y).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np

from . import planar
from .geometry import VertexPolytope
from .polyalg import minkowski_sum_many

GAP = "-"
MAX_COUNT_N = 10


@dataclass(frozen=True)
class Alignment:
    mu1: str
    mu2: str

    def counts(self) -> tuple[int, int, int]:
        """(mismatches, spaces, matches)."""
        x = y = z = 0
        for a, b in zip(self.mu1, self.mu2):
            if a == GAP or b == GAP:
                y += 1
            elif a == b:
                z += 1
            else:
                x += 1
        return x, y, z

    def __str__(self) -> str:
        return f"{self.mu1}/{self.mu2}"


@dataclass(frozen=True)
class ScoringParams:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))

    @property
    def beta_prime(self) -> Fraction:
        return 2 * self.beta

    def score(self, x: int, y: int, z: int) -> Fraction:
        return z - self.alpha * x - self.beta * y


@dataclass(frozen=True)
class AlignmentPolygon:
    n1: int
    n2: int
    coords: str  # "y'z" for equal lengths, "xy" otherwise
    polytope: VertexPolytope
    witness: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def vertices(self) -> tuple:
        return self.polytope.vertices

    def ccw(self) -> list:
        return planar.convex_hull(self.vertices) if len(self.vertices) > 2 else list(self.vertices)

    def counts(self, p) -> tuple[int, int, int]:
        """(x, y, z) of the alignments at a point of the polygon."""
        a, b = p
        if self.coords == "y'z":
            y, z = 2 * a, b
            x = self.n1 - a - b
        else:
            x, y = a, b
            z = (self.n1 + self.n2 - 2 * x - y) // 2
        return x, y, z


def _alphabet(s1: str, s2: str, alphabet: Optional[Sequence[str]]) -> tuple[str, ...]:
    if not s1 or not s2:
        raise ValueError("sequences must be nonempty")
    if alphabet is None:
        alphabet = sorted(set(s1) | set(s2))
    alphabet = tuple(alphabet)
    if GAP in alphabet:
        raise ValueError("the gap symbol cannot be part of the alphabet")
    missing = (set(s1) | set(s2)) - set(alphabet)
    if missing:
        raise ValueError(f"symbols {sorted(missing)} not in the alphabet")
    return alphabet


class _Order:
    """Total order on partial alignments: (mu1, mu2) lexicographic, gap first.

    A partial mu1 that has not consumed all of sigma1 gets a sentinel above
    every symbol, so prefixes compare the same way their completions do.
    """

    def __init__(self, alphabet, n1):
        self.rank = {GAP: 0, **{s: i + 1 for i, s in enumerate(alphabet)}}
        self.top = len(alphabet) + 1
        self.n1 = n1

    def key(self, i: int, mu1: tuple, mu2: tuple) -> tuple:
        return (mu1 + ((self.top,) if i < self.n1 else ()), mu2)


def _grid_moves(s1, s2, i, j):
    """Moves into cell (i, j): (source, column of mu1, column of mu2, dy, dz)."""
    out = []
    if i > 0 and j > 0:
        out.append(((i - 1, j - 1), s1[i - 1], s2[j - 1], 0, int(s1[i - 1] == s2[j - 1])))
    if i > 0:
        out.append(((i - 1, j), s1[i - 1], GAP, 1, 0))
    if j > 0:
        out.append(((i, j - 1), GAP, s2[j - 1], 1, 0))
    return out


def alignment_polygon(s1: str, s2: str, alphabet: Optional[Sequence[str]] = None) -> AlignmentPolygon:
    """Polygon of achievable (y', z) (or (x, y)) by 2-D polytope propagation on the edit grid."""
    alphabet = _alphabet(s1, s2, alphabet)
    n1, n2 = len(s1), len(s2)
    order = _Order(alphabet, n1)
    rank = order.rank
    inv = {v: k for k, v in rank.items()}
    # cell -> {(spaces, matches): (key, mu1, mu2)}
    cells: dict = {(0, 0): {(0, 0): (order.key(0, (), ()), (), ())}}
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            if (i, j) == (0, 0):
                continue
            bucket: dict = {}
            for src, c1, c2, dy, dz in _grid_moves(s1, s2, i, j):
                for (y, z), (_, m1, m2) in cells[src].items():
                    m1n, m2n = m1 + (rank[c1],), m2 + (rank[c2],)
                    key = order.key(i, m1n, m2n)
                    p = (y + dy, z + dz)
                    old = bucket.get(p)
                    if old is None or key < old[0]:
                        bucket[p] = (key, m1n, m2n)
            if len(bucket) > 2:
                keep = set(planar.convex_hull(bucket))
                bucket = {p: v for p, v in bucket.items() if p in keep}
            cells[(i, j)] = bucket
        if i > 0:
            for j in range(n2 + 1):
                cells.pop((i - 1, j), None)
    final = cells[(n1, n2)]
    equal = n1 == n2
    mapped = {}
    for (y, z), (_, m1, m2) in final.items():
        if equal:
            p = (y // 2, z)
        else:
            p = ((n1 + n2 - y - 2 * z) // 2, y)
        mapped[p] = Alignment("".join(inv[c] for c in m1), "".join(inv[c] for c in m2))
    hull = planar.convex_hull(mapped)
    poly = VertexPolytope.from_vertices(hull, 2)
    return AlignmentPolygon(n1, n2, "y'z" if equal else "xy", poly, {p: mapped[p] for p in poly.vertices})


def optimal_alignment(s1: str, s2: str, params: ScoringParams, alphabet=None) -> tuple[Alignment, Fraction]:
    """Best alignment under z - alpha*x - beta*y, ties to the least (mu1, mu2)."""
    alphabet = _alphabet(s1, s2, alphabet)
    n1, n2 = len(s1), len(s2)
    order = _Order(alphabet, n1)
    rank = order.rank
    inv = {v: k for k, v in rank.items()}
    a, b = params.alpha, params.beta
    best: dict = {(0, 0): (Fraction(0), order.key(0, (), ()), (), ())}
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            if (i, j) == (0, 0):
                continue
            cur = None
            for src, c1, c2, dy, dz in _grid_moves(s1, s2, i, j):
                sc, _, m1, m2 = best[src]
                if dy:
                    sc = sc - b
                elif dz:
                    sc = sc + 1
                else:
                    sc = sc - a
                m1n, m2n = m1 + (rank[c1],), m2 + (rank[c2],)
                key = order.key(i, m1n, m2n)
                if cur is None or sc > cur[0] or (sc == cur[0] and key < cur[1]):
                    cur = (sc, key, m1n, m2n)
            best[(i, j)] = cur
    sc, _, m1, m2 = best[(n1, n2)]
    return Alignment("".join(inv[c] for c in m1), "".join(inv[c] for c in m2)), sc


def all_alignments(s1: str, s2: str):
    """Every alignment of the two sequences (exponentially many; for oracles)."""
    def rec(i, j):
        if i == len(s1) and j == len(s2):
            yield "", ""
            return
        if i < len(s1) and j < len(s2):
            for a, b in rec(i + 1, j + 1):
                yield s1[i] + a, s2[j] + b
        if i < len(s1):
            for a, b in rec(i + 1, j):
                yield s1[i] + a, GAP + b
        if j < len(s2):
            for a, b in rec(i, j + 1):
                yield GAP + a, s2[j] + b

    for a, b in rec(0, 0):
        yield Alignment(a, b)


# ---------------------------------------------------------------------------
# slope families


def slope_parameters(u: int, v: int, n: int) -> tuple[int, int]:
    """(a, b) of the two-block construction giving an edge of slope u/v in length n."""
    if not 0 < u < v:
        raise ValueError("need 0 < u < v")
    if 6 * v - 2 * u <= n:
        return 2 * v, v - u
    if (v - u) % 2 == 0 and 3 * v - u <= n:
        return v, (v - u) // 2
    raise ValueError(f"no construction for slope {u}/{v} within length {n}")


def slope_family(u: int, v: int, n: int) -> tuple[str, str]:
    """Binary pair of length n whose polygon has an edge of slope u/v."""
    a, b = slope_parameters(u, v, n)
    pad = "0" * (n - 2 * a - 2 * b)
    s1 = "0" * a + "1" * b + "0" * b + "1" * a + pad
    s2 = "1" * a + "0" * b + "1" * b + "0" * a + pad
    return s1, s2


def slope_family_vertices(u: int, v: int, n: int) -> list[tuple[int, int]]:
    """Expected polygon of slope_family(u, v, n) in (y', z)."""
    a, b = slope_parameters(u, v, n)
    r = n - 2 * a - 2 * b
    pts = {(0, r), (b, r + 3 * b), (a + b, r + a + b), (n, 0), (r, 0)}
    return sorted(pts)


def feasible_slopes(n: int, primitive: bool = True) -> list[tuple[int, int]]:
    """Pairs (u, v), u < v, 6v - 2u <= n; with ``primitive`` only one pair per slope."""
    out = []
    for v in range(2, n // 4 + 2):
        for u in range(1, v):
            if 6 * v - 2 * u <= n and (not primitive or gcd(u, v) == 1):
                out.append((u, v))
    return out


# ---------------------------------------------------------------------------
# exhaustive counting over binary pairs


def _profiles(n: int, chunk: int = 1 << 16) -> np.ndarray:
    """Distinct (zmax, zmin) profiles over insertions h = 0..n for all binary pairs of length n.

    Row layout: zmax[0..n] then zmin[0..n]; -1 marks an impossible h (never
    happens for equal lengths, kept for safety).
    """
    total = 4**n
    seen = set()
    rows = []
    bits = np.arange(n, dtype=np.int64)
    NEG, POS = -100, 100
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        s1 = (idx[:, None] >> bits) & 1
        s2 = ((idx[:, None] >> n) >> bits) & 1
        P = len(idx)
        # zmax[j][h], zmin[j][h] along the current row i
        zmax = np.full((n + 1, n + 1, P), NEG, dtype=np.int16)
        zmin = np.full((n + 1, n + 1, P), POS, dtype=np.int16)
        zmax[0, 0] = 0
        zmin[0, 0] = 0
        for j in range(1, n + 1):  # row 0: V moves only
            zmax[j, 0] = 0
            zmin[j, 0] = 0
        for i in range(1, n + 1):
            nmax = np.full_like(zmax, NEG)
            nmin = np.full_like(zmin, POS)
            for j in range(0, n + 1):
                for h in range(0, i + 1):
                    cmax = np.full(P, NEG, dtype=np.int16)
                    cmin = np.full(P, POS, dtype=np.int16)
                    if h >= 1:  # H from (i-1, j) with h-1
                        np.maximum(cmax, zmax[j, h - 1], out=cmax)
                        np.minimum(cmin, zmin[j, h - 1], out=cmin)
                    if j >= 1:
                        # D from (i-1, j-1), same h
                        m = (s1[:, i - 1] == s2[:, j - 1]).astype(np.int16)
                        ok = zmax[j - 1, h] > NEG
                        np.maximum(cmax, np.where(ok, zmax[j - 1, h] + m, NEG), out=cmax)
                        np.minimum(cmin, np.where(ok, zmin[j - 1, h] + m, POS), out=cmin)
                        # V from (i, j-1), same h
                        np.maximum(cmax, nmax[j - 1, h], out=cmax)
                        np.minimum(cmin, nmin[j - 1, h], out=cmin)
                    nmax[j, h] = cmax
                    nmin[j, h] = cmin
            zmax, zmin = nmax, nmin
        prof = np.concatenate([zmax[n], zmin[n]], axis=0).T  # P x 2(n+1)
        prof = np.where((prof == NEG) | (prof == POS), -1, prof)
        for row in np.unique(prof, axis=0):
            t = tuple(int(x) for x in row)
            if t not in seen:
                seen.add(t)
                rows.append(t)
    return np.array(sorted(rows), dtype=np.int64)


def profile_polygon(row: Sequence[int], n: int) -> list[tuple[int, int]]:
    pts = []
    for h in range(n + 1):
        if row[h] >= 0:
            pts.append((h, int(row[h])))
            pts.append((h, int(row[n + 1 + h])))
    return planar.convex_hull(pts)


def binary_polygons(n: int) -> list[VertexPolytope]:
    """Distinct alignment polygons over all pairs of binary sequences of length n."""
    if not 1 <= n <= MAX_COUNT_N:
        raise ValueError(f"n must be in 1..{MAX_COUNT_N}")
    polys = {tuple(profile_polygon(r, n)) for r in _profiles(n)}
    return sorted((VertexPolytope.from_vertices(p, 2) for p in polys), key=lambda P: P.vertices)


@dataclass(frozen=True)
class AlignmentCount:
    n: int
    polygons: int
    count: int
    meaningful: int
    meaningful_alpha_le_beta: int
    slope_families: int
    summed: VertexPolytope = field(repr=False, compare=False)

    def record(self) -> dict:
        return {
            "n": self.n,
            "polygons": self.polygons,
            "count": self.count,
            "meaningful": self.meaningful,
            "meaningful_alpha_le_beta": self.meaningful_alpha_le_beta,
            "slope_families": self.slope_families,
        }


def _outward_normals(poly: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    # for a ccw polygon the outward normal of edge e is (e_y, -e_x)
    return [(e[1], -e[0]) for e in planar.edge_vectors(list(poly))]


def _inside(normal, alpha_le_beta: bool) -> bool:
    p, q = normal
    return q > 0 and (p < 0 if alpha_le_beta else p < q)


def meaningful_vertices(summed: VertexPolytope, alpha_le_beta: bool = False) -> int:
    """Vertices whose normal cone meets the open region alpha, beta > 0 (optionally alpha < beta).

    A (y', z) direction of the score is (alpha - beta', 1 + alpha), which
    sweeps the open cone {q > 0, p < q}; with alpha < beta it is {q > 0, p < 0}.
    Each edge normal strictly inside the cone adds one more vertex.
    """
    verts = summed.vertices
    if len(verts) == 1:
        return 1
    ccw = planar.convex_hull(verts)
    inside = sum(_inside(nrm, alpha_le_beta) for nrm in _outward_normals(ccw))
    return 1 + inside


def count_alignment_inference_functions(n: int, jobs: int = 1) -> AlignmentCount:
    """Exhaustive count over all 4^n binary pairs of length n."""
    polys = binary_polygons(n)
    summed = minkowski_sum_many(polys, jobs=jobs)
    return AlignmentCount(
        n=n,
        polygons=len(polys),
        count=len(summed),
        meaningful=meaningful_vertices(summed),
        meaningful_alpha_le_beta=meaningful_vertices(summed, alpha_le_beta=True),
        slope_families=len(feasible_slopes(n)),
        summed=summed,
    )


def meaningful_cone_count(n: int, alpha_le_beta: bool = False) -> int:
    """Inference functions of the length-n binary model with meaningful parameters."""
    summed = minkowski_sum_many(binary_polygons(n))
    return meaningful_vertices(summed, alpha_le_beta)


def pairs(n: int, alphabet: str = "01"):
    """All ordered pairs of sequences of length n over ``alphabet``."""
    seqs = ["".join(t) for t in itertools.product(alphabet, repeat=n)]
    for a in seqs:
        for b in seqs:
            yield a, b
