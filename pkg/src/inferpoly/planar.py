"""Integer 2-D convex hulls and polygon Minkowski sums."""

from __future__ import annotations

from functools import cmp_to_key
from math import gcd
from typing import Iterable, Sequence

Point2 = tuple[int, int]


def cross(o: Point2, a: Point2, b: Point2) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Sequence[int]]) -> list[Point2]:
    """Andrew's monotone chain; strict vertices only, counter-clockwise from the lex-min point."""
    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if len(pts) <= 2:
        return pts
    lower: list[Point2] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) > 1 else hull[:1]


def edge_vectors(poly: Sequence[Point2]) -> list[Point2]:
    """Counter-clockwise boundary edge vectors (a segment gives two opposite vectors)."""
    k = len(poly)
    if k < 2:
        return []
    return [(poly[(i + 1) % k][0] - poly[i][0], poly[(i + 1) % k][1] - poly[i][1]) for i in range(k)]


def _half(v: Point2) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2 pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_cmp(a: Point2, b: Point2) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    c = a[0] * b[1] - a[1] * b[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


angle_key = cmp_to_key(angle_cmp)


def _rotate_to_start(poly: list[Point2]) -> list[Point2]:
    # start from the lowest point (min y, then min x) so edges begin at angle 0
    i = min(range(len(poly)), key=lambda k: (poly[k][1], poly[k][0]))
    return poly[i:] + poly[:i]


def minkowski_pair(P: Sequence[Point2], Q: Sequence[Point2]) -> list[Point2]:
    """Vertices (ccw) of P + Q for convex polygons given as ccw vertex lists."""
    if len(P) == 1 or len(Q) == 1:
        t, R = (P[0], Q) if len(P) == 1 else (Q[0], P)
        return [(r[0] + t[0], r[1] + t[1]) for r in R]
    P = _rotate_to_start(list(P))
    Q = _rotate_to_start(list(Q))
    ep, eq = edge_vectors(P), edge_vectors(Q)
    cur = (P[0][0] + Q[0][0], P[0][1] + Q[0][1])
    out = [cur]
    i = j = 0
    while i < len(ep) or j < len(eq):
        if j == len(eq) or (i < len(ep) and angle_cmp(ep[i], eq[j]) <= 0):
            if j < len(eq) and angle_cmp(ep[i], eq[j]) == 0:
                e = (ep[i][0] + eq[j][0], ep[i][1] + eq[j][1])
                j += 1
            else:
                e = ep[i]
            i += 1
        else:
            e = eq[j]
            j += 1
        cur = (cur[0] + e[0], cur[1] + e[1])
        out.append(cur)
    out.pop()  # back at the start
    return _drop_collinear(out)


def _drop_collinear(poly: list[Point2]) -> list[Point2]:
    k = len(poly)
    if k <= 2:
        return poly
    keep = [poly[i] for i in range(k) if cross(poly[i - 1], poly[i], poly[(i + 1) % k]) != 0]
    return keep if keep else [min(poly), max(poly)]


def minkowski_many_edge_merge(polys: Iterable[Sequence[Point2]]) -> list[Point2]:
    """Sum of many polygons by sorting all edge vectors by angle and walking the boundary."""
    start = [0, 0]
    edges: list[Point2] = []
    any_poly = False
    for poly in polys:
        any_poly = True
        poly = _rotate_to_start(list(poly))
        start[0] += poly[0][0]
        start[1] += poly[0][1]
        edges.extend(edge_vectors(poly))
    if not any_poly:
        raise ValueError("empty list of polygons")
    merged: list[list[int]] = []
    for e in sorted(edges, key=angle_key):
        if merged and angle_cmp(tuple(merged[-1]), e) == 0:
            merged[-1][0] += e[0]
            merged[-1][1] += e[1]
        else:
            merged.append([e[0], e[1]])
    cur = (start[0], start[1])
    out = [cur]
    for e in merged[:-1]:
        cur = (cur[0] + e[0], cur[1] + e[1])
        out.append(cur)
    return out


def edge_direction_count(polys: Iterable[Sequence[Point2]]) -> int:
    """Vertex count of the sum of polygons: the number of distinct oriented edge directions."""
    dirs = set()
    for poly in polys:
        for e in edge_vectors(list(poly)):
            g = gcd(e[0], e[1])
            dirs.add((e[0] // g, e[1] // g))
    return max(len(dirs), 1)
