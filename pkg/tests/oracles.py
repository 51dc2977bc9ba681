"""Independent reference implementations used only by the tests.

None of these import the geometry code under test: hulls come from scipy's
LP solver on tiny integer inputs, counts from direct enumeration.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

import numpy as np
from scipy.optimize import linprog


def lp_is_vertex(p, pts) -> bool:
    """p is a vertex iff it is not a convex combination of the other points (HiGHS LP)."""
    others = [q for q in pts if tuple(q) != tuple(p)]
    if not others:
        return True
    A = np.array(others, dtype=float).T
    A_eq = np.vstack([A, np.ones(len(others))])
    b_eq = np.append(np.array(p, dtype=float), 1.0)
    res = linprog(np.zeros(len(others)), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return res.status != 0


def lp_hull(points) -> set:
    pts = sorted({tuple(int(x) for x in p) for p in points})
    return {p for p in pts if lp_is_vertex(p, pts)}


def brute_minkowski(polys) -> set:
    sums = {tuple([0] * len(polys[0][0]))}
    for P in polys:
        sums = {tuple(a + b for a, b in zip(s, v)) for s in sums for v in P}
    return lp_hull(sums)


def calkin_wilf_pairs(n: int) -> int:
    """#{(a, b) : a, b >= 1, gcd(a, b) = 1, a + b < n}; every positive rational appears once."""
    count = 0
    stack = [(1, 1)]
    while stack:
        a, b = stack.pop()
        if a + b >= n:
            continue
        count += 1
        stack.append((a, a + b))
        stack.append((a + b, b))
    return count


def gcd_pairs(n: int) -> int:
    return sum(1 for a in range(1, n) for b in range(1, n) if a + b < n and gcd(a, b) == 1)


def alignments(s1: str, s2: str):
    """All alignments as column lists, by recursion on the last column."""
    if not s1 and not s2:
        return [("", "")]
    out = []
    if s1 and s2:
        out += [(a + s1[-1], b + s2[-1]) for a, b in alignments(s1[:-1], s2[:-1])]
    if s1:
        out += [(a + s1[-1], b + "-") for a, b in alignments(s1[:-1], s2)]
    if s2:
        out += [(a + "-", b + s2[-1]) for a, b in alignments(s1, s2[:-1])]
    return out


def xyz(mu1: str, mu2: str) -> tuple[int, int, int]:
    x = sum(a != b and "-" not in (a, b) for a, b in zip(mu1, mu2))
    y = sum("-" in (a, b) for a, b in zip(mu1, mu2))
    z = sum(a == b and a != "-" for a, b in zip(mu1, mu2))
    return x, y, z


def alignment_key(mu1: str, mu2: str, alphabet: str = "01"):
    rank = {"-": 0, **{c: i + 1 for i, c in enumerate(alphabet)}}
    return ([rank[c] for c in mu1], [rank[c] for c in mu2])


def brute_polygon(s1: str, s2: str) -> set:
    pts = set()
    for a, b in alignments(s1, s2):
        x, y, z = xyz(a, b)
        pts.add((y // 2, z) if len(s1) == len(s2) else (x, y))
    return lp_hull(pts)


def brute_best_alignment(s1, s2, alpha, beta, alphabet="01"):
    best = None
    for a, b in alignments(s1, s2):
        x, y, z = xyz(a, b)
        sc = z - Fraction(alpha) * x - Fraction(beta) * y
        key = (-sc, alignment_key(a, b, alphabet))
        if best is None or key < best[0]:
            best = (key, (a, b), sc)
    return best[1], best[2]


def zeta_partial(s: int, N: int = 200000) -> float:
    """Float zeta(s) with the midpoint of the integral tail bounds."""
    i = np.arange(1, N + 1, dtype=np.float64)
    tail = 0.5 * ((N + 1) ** (1 - s) + N ** (1 - s)) / (s - 1)
    return float(np.sum(i**-s)) + tail


def slope_set(polys) -> set:
    """Distinct primitive oriented edge directions of ccw polygons."""
    dirs = set()
    for poly in polys:
        k = len(poly)
        if k < 2:
            continue
        for i in range(k):
            dx = poly[(i + 1) % k][0] - poly[i][0]
            dy = poly[(i + 1) % k][1] - poly[i][1]
            g = gcd(dx, dy)
            dirs.add((dx // g, dy // g))
    return dirs


def hidden_assignments(l: int, q: int):
    return itertools.product(range(l), repeat=q)
