"""Counting inference functions, arrangement chambers and primitive sets.

The inference functions of a model are the vertices of the Minkowski sum of
its observation polytopes.  The lower-bound construction reduces to chambers
of a central hyperplane arrangement, which are the vertices of the zonotope
of its normals.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .geometry import VertexPolytope, edge_directions, nullspace_vector, dot
from .inference import (
    DEFAULT_CAP,
    UnexplainableObservation,
    _viterbi_int,
    compile_trellis,
    observation_list,
    observation_polytope,
)
from .models import FactorModel, complexity_M
from .polyalg import BoundReport, bounds, minkowski_sum_many


class BudgetExceeded(ValueError):
    """Parameters outside the range where the exact computation is attempted."""


@dataclass(frozen=True)
class CountReport:
    model: str
    num_observations: int
    explained: int
    distinct_polytopes: int
    polytope: VertexPolytope = field(repr=False)
    count: int
    bound_report: BoundReport
    wall_time: float = field(compare=False)

    @property
    def within_bounds(self) -> bool:
        b = self.bound_report
        return self.count <= b.fif_bound and (b.gs_bound is None or self.count <= b.gs_bound)

    def record(self) -> dict:
        b = self.bound_report
        return {
            "model": self.model,
            "observations": self.num_observations,
            "explained": self.explained,
            "distinct": self.distinct_polytopes,
            "count": self.count,
            "m": b.m,
            "M": b.M,
            "d": b.d,
            "gs": b.gs_bound,
            "fif": b.fif_bound,
        }


def _polytope_job(args):
    model, tau = args
    try:
        return observation_polytope(model, tau).polytope
    except UnexplainableObservation:
        return None


def observation_polytopes(model: FactorModel, observations=None, cap: int = DEFAULT_CAP, jobs: int = 1) -> dict:
    """NP(f_tau) for each observation; unexplainable observations map to ``None``."""
    obs = observation_list(model, observations, cap)
    if jobs > 1 and len(obs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            polys = list(pool.map(_polytope_job, [(model, t) for t in obs], chunksize=8))
    else:
        polys = [_polytope_job((model, t)) for t in obs]
    return dict(zip(obs, polys))


def count_inference_functions(
    model: FactorModel, jobs: int = 1, cap: int = DEFAULT_CAP, observations=None
) -> CountReport:
    """Number of inference functions = vertices of the sum of all observation polytopes.

    Unexplainable observations contribute no factor (they map to the marker
    under every parameter choice).
    """
    t0 = time.perf_counter()
    polys = observation_polytopes(model, observations, cap, jobs)
    present = [P for P in polys.values() if P is not None]
    if not present:
        raise UnexplainableObservation("no observation has positive probability")
    total = minkowski_sum_many(present, jobs=jobs)
    dirs = set()
    for P in set(present):
        dirs |= edge_directions(P)
    report = bounds(max(len(dirs), 1), complexity_M(model), model.d)
    return CountReport(
        model=model.name,
        num_observations=len(polys),
        explained=len(present),
        distinct_polytopes=len(set(present)),
        polytope=total,
        count=len(total),
        bound_report=report,
        wall_time=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# sampling cross-check


def _philox(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed).jumped(stream))


def random_directions(d: int, samples: int, seed: int, scale: int = 2**20) -> np.ndarray:
    """Integer directions from Gaussian draws (rotation invariant before rounding)."""
    rng = _philox(seed)
    return np.rint(rng.standard_normal((samples, d)) * scale).astype(np.int64)


def sample_inference_functions(
    model: FactorModel, samples: int, seed: int, observations=None, cap: int = DEFAULT_CAP
) -> int:
    """Distinct inference functions seen over ``samples`` random parameter points.

    A direction whose maximum on NP(f_tau) is attained at a single vertex
    picks that vertex's witness; ties fall back to Viterbi so the table is
    exactly Phi_v either way.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    obs = observation_list(model, observations, cap)
    W = random_directions(model.d, samples, seed)
    names: dict = {None: 0}
    cols = []
    for tau in obs:
        try:
            P = observation_polytope(model, tau)
        except UnexplainableObservation:
            cols.append(np.zeros(samples, dtype=np.int64))
            continue
        V = np.array(P.vertices, dtype=np.int64)
        ids = np.array([names.setdefault(P.witness[v], len(names)) for v in P.vertices], dtype=np.int64)
        scores = W @ V.T
        best = scores.max(axis=1)
        ties = (scores == best[:, None]).sum(axis=1) > 1
        col = ids[scores.argmax(axis=1)]
        if ties.any():
            tr = compile_trellis(model, model.encode_observed(tau))
            for i in np.nonzero(ties)[0]:
                h, _ = _viterbi_int(tr, tuple(int(x) for x in W[i]))
                col[i] = names.setdefault(model.decode_hidden(h), len(names))
        cols.append(col)
    table = np.stack(cols, axis=1)
    return int(len(np.unique(table, axis=0)))


# ---------------------------------------------------------------------------
# hyperplane arrangements


@dataclass(frozen=True)
class ArrangementReport:
    d: int
    n: int
    normals: np.ndarray = field(repr=False, compare=False)
    chamber_count: int
    max_extreme_rays_per_chamber: Optional[int] = None
    distinct_rays: Optional[int] = None

    def record(self) -> dict:
        out = {"d": self.d, "n": self.n, "normals": len(self.normals), "chambers": self.chamber_count}
        if self.max_extreme_rays_per_chamber is not None:
            out["max_rays"] = self.max_extreme_rays_per_chamber
            out["rays"] = self.distinct_rays
        return out


_CHAMBER_BUDGET = {2: 10**4, 3: 8, 4: 7}
_MINKOWSKI_2D_LIMIT = 50_000


def arrangement_normals(d: int, n: int) -> np.ndarray:
    """Primitive a in Z^d with every a_i >= 1 and sum(a) < n, in lexicographic order."""
    if d == 2:
        rows = []
        for a1 in range(1, n - 1):
            a2 = np.arange(1, n - a1, dtype=np.int64)
            a2 = a2[np.gcd(a2, a1) == 1]
            rows.append(np.column_stack([np.full(len(a2), a1, dtype=np.int64), a2]))
        return np.concatenate(rows) if rows else np.zeros((0, 2), dtype=np.int64)
    out = []
    for a in itertools.product(range(1, n), repeat=d):
        if sum(a) < n and _gcd_all(a) == 1:
            out.append(a)
    return np.array(out, dtype=np.int64).reshape(-1, d)


def _gcd_all(a) -> int:
    g = 0
    for x in a:
        g = gcd(g, int(x))
    return g


def _zonotope(normals: np.ndarray, d: int, jobs: int = 1) -> VertexPolytope:
    segs = [VertexPolytope.from_vertices([(0,) * d, tuple(int(x) for x in a)], d) for a in normals]
    return minkowski_sum_many(segs, jobs=jobs)


def _planar_zonotope_size(normals: np.ndarray) -> int:
    # edges of the zonotope are +a and -a; all normals lie in the open first
    # quadrant and are pairwise non-parallel, so sorting by slope is the merge
    order = np.argsort(normals[:, 1] / normals[:, 0], kind="stable")
    e = normals[order]
    crosses = e[:-1, 0] * e[1:, 1] - e[:-1, 1] * e[1:, 0]
    if (crosses <= 0).any():
        raise ArithmeticError("slope sort is not strict")
    return 2 * len(e)


def _check_budget(d: int, n: int, budget: dict) -> None:
    if d < 2 or n < 3:
        raise ValueError("need d >= 2 and n >= 3")
    if d not in budget or n > budget[d]:
        raise BudgetExceeded(f"(d={d}, n={n}) is outside the exact budget")


def arrangement_chambers(d: int, n: int, jobs: int = 1) -> ArrangementReport:
    """Chambers of {a.x = 0 : a_i >= 1, sum(a) < n} as vertices of the zonotope of the normals."""
    _check_budget(d, n, _CHAMBER_BUDGET)
    normals = arrangement_normals(d, n)
    if d == 2 and len(normals) > _MINKOWSKI_2D_LIMIT:
        count = _planar_zonotope_size(normals)
    else:
        count = len(_zonotope(normals, d, jobs))
    if d == 2 and count != 2 * len(normals):
        raise ArithmeticError("planar chamber count disagrees with 2 x normals")
    return ArrangementReport(d, n, normals, count)


_RAY_BUDGET = {2: 50, 3: 6}


def _cone_rays(edges: list, d: int) -> set:
    """Extreme rays of {w : w.e <= 0 for all e in edges} (a pointed full-dimensional cone)."""
    rays = set()
    for sub in itertools.combinations(edges, d - 1):
        w = nullspace_vector(sub, d)
        if w is None:
            continue
        for cand in (w, tuple(-x for x in w)):
            if all(dot(cand, e) <= 0 for e in edges):
                rays.add(cand)
    return rays


def extreme_rays_check(d: int, n: int, jobs: int = 1) -> ArrangementReport:
    """Chambers with their extreme rays; the maximum must not exceed 2^(d(d-1))."""
    _check_budget(d, n, _RAY_BUDGET)
    normals = arrangement_normals(d, n)
    Z = _zonotope(normals, d, jobs)
    verts = Z.vertices
    best = 0
    all_rays: set = set()
    for i, nbrs in enumerate(Z.adjacency):
        edges = [tuple(a - b for a, b in zip(verts[j], verts[i])) for j in nbrs]
        rays = _cone_rays(edges, d)
        best = max(best, len(rays))
        all_rays |= rays
    if best > 2 ** (d * (d - 1)):
        raise ArithmeticError("a chamber has more extreme rays than allowed")
    return ArrangementReport(d, n, normals, len(verts), best, len(all_rays))


# ---------------------------------------------------------------------------
# primitive sets


def _minors_gcd(mats: np.ndarray) -> np.ndarray:
    """gcd of all maximal minors of each m x d matrix in ``mats`` (shape s x m x d)."""
    s, m, d = mats.shape
    if m == 1:
        return np.gcd.reduce(mats[:, 0, :], axis=1)
    if m == 2 and int(mats.max(initial=0)) < 2**31:
        g = np.zeros(s, dtype=np.int64)
        for i, j in itertools.combinations(range(d), 2):
            minor = mats[:, 0, i] * mats[:, 1, j] - mats[:, 0, j] * mats[:, 1, i]
            g = np.gcd(g, minor)
        return g
    out = np.zeros(s, dtype=object)
    for k in range(s):
        rows = [[int(x) for x in r] for r in mats[k]]
        g = 0
        for cols in itertools.combinations(range(d), m):
            g = gcd(g, _det([[r[c] for c in cols] for r in rows]))
        out[k] = g
    return out


def _det(M: list[list[int]]) -> int:
    # Bareiss fraction-free elimination
    M = [row[:] for row in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


_CHUNK = 1 << 16


def primitive_probability(d: int, m: int, box: int, samples: int, seed: int) -> float:
    """Fraction of random sets of m vectors in [0, box]^d that extend to a basis of Z^d."""
    if not 1 <= m < d:
        raise ValueError("need 1 <= m < d; the limit diverges for m >= d")
    if box < 100:
        raise ValueError("box must be at least 100")
    if samples < 1:
        raise ValueError("samples must be positive")
    hits = 0
    for stream, start in enumerate(range(0, samples, _CHUNK)):
        k = min(_CHUNK, samples - start)
        mats = _philox(seed, stream).integers(0, box, size=(k, m, d), endpoint=True, dtype=np.int64)
        hits += int((_minors_gcd(mats) == 1).sum())
    return hits / samples


def _zeta_interval(s: int, N: int, digits: int = 30) -> tuple[Fraction, Fraction]:
    scale = 10**digits
    lo = hi = 0
    for i in range(1, N + 1):
        q, r = divmod(scale, i**s)
        lo += q
        hi += q + (r > 0)
    # integral tail bounds for sum_{i > N} i^-s
    tail_lo = Fraction(1, (s - 1) * (N + 1) ** (s - 1))
    tail_hi = Fraction(1, (s - 1) * N ** (s - 1))
    return Fraction(lo, scale) + tail_lo, Fraction(hi, scale) + tail_hi


def zeta_reference(d: int, m: int, width: float = 1e-6) -> tuple[Fraction, Fraction]:
    """Rational interval containing prod_{j=d-m+1}^{d} 1/zeta(j)."""
    if not 1 <= m < d:
        raise ValueError("need 1 <= m < d; zeta(1) diverges")
    N = 1000
    while True:
        lo = hi = Fraction(1)
        for s in range(d - m + 1, d + 1):
            z_lo, z_hi = _zeta_interval(s, N)
            lo /= z_hi
            hi /= z_lo
        if hi - lo <= width:
            return lo, hi
        N *= 2
