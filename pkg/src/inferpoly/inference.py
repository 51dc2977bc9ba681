"""Fixed-parameter inference and polytope propagation on factor models.

Every factor model is compiled, for one observation, into a layered trellis.
Hidden variables are assigned in index order; the state after a layer is the
assignment of those variables that some not-yet-applied factor still needs.
A factor is applied (its exponent added) as soon as its last hidden variable
is assigned, and a missing table entry prunes the transition.  On chains the
trellis is the usual Viterbi trellis; on the alignment grid its states are
the frontier of the edit graph.

Running the trellis with (max, +) gives Viterbi; running it with
(hull of union, Minkowski sum) gives the Newton polytope of f_tau.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional, Sequence

from .geometry import hull_reduce
from .models import FactorModel
from .polyalg import NewtonPolytope

DEFAULT_CAP = 2**20


class UnexplainableObservation(ValueError):
    """The observation has probability zero for every hidden assignment."""


class CapExceeded(ValueError):
    """Refusal to enumerate more observations than the configured cap."""


@dataclass(frozen=True)
class Layer:
    var: tuple  # ("h", k) for hidden variable k or ("o", j) for a free observed variable
    # (source state, symbol, target state, exponent) for every live transition
    moves: tuple


@dataclass(frozen=True)
class Trellis:
    d: int
    start_exponent: tuple
    layers: tuple
    dead: bool

    def max_degree(self) -> int:
        best = {0: sum(self.start_exponent)}
        for layer in self.layers:
            nxt: dict = {}
            for src, _, dst, exp in layer.moves:
                if src in best:
                    s = best[src] + sum(exp)
                    if s > nxt.get(dst, -1):
                        nxt[dst] = s
            best = nxt
        if self.dead or not best:
            raise UnexplainableObservation("no positive-probability assignment")
        return best[0]


def _order(model: FactorModel, free_observed: bool) -> list[tuple]:
    order: list[tuple] = []
    if not free_observed:
        return [("h", k) for k in range(model.q)]
    placed: set[int] = set()
    first_hidden: dict[int, int] = {}
    for f in model.factors:
        key = min(f.scope_hidden) if f.scope_hidden else -1
        for j in f.scope_observed:
            first_hidden[j] = min(first_hidden.get(j, key), key)
    by_hidden: dict[int, list[int]] = {}
    for j, k in first_hidden.items():
        by_hidden.setdefault(k, []).append(j)
    for j in sorted(by_hidden.get(-1, [])):
        order.append(("o", j))
        placed.add(j)
    for k in range(model.q):
        for j in sorted(by_hidden.get(k, [])):
            if j not in placed:
                order.append(("o", j))
                placed.add(j)
        order.append(("h", k))
    return order


def _compile(model: FactorModel, tau: Optional[tuple]) -> Trellis:
    free = tau is None
    order = _order(model, free)
    pos = {var: i for i, var in enumerate(order)}
    zero = (0,) * model.d
    start = list(zero)
    dead = False

    def vars_of(f):
        out = [("h", k) for k in f.scope_hidden]
        if free:
            out += [("o", j) for j in f.scope_observed]
        return out

    # trigger position of every factor; constant factors are applied up front
    triggers: dict[int, list] = {}
    for f in model.factors:
        vs = vars_of(f)
        if not vs:
            e = f.table.get(tuple(tau[j] for j in f.scope_observed))
            if e is None:
                dead = True
            else:
                start = [a + b for a, b in zip(start, e)]
            continue
        triggers.setdefault(max(pos[v] for v in vs), []).append(f)
    last_use: dict[tuple, int] = {}
    for t, fs in triggers.items():
        for f in fs:
            for v in vars_of(f):
                last_use[v] = max(last_use.get(v, -1), t)

    hid_size = len(model.hidden_alphabet)
    obs_size = len(model.observed_alphabet)
    frontier: list[tuple] = []
    states = {(): 0}
    layers = []
    for t, var in enumerate(order):
        ext = frontier + [var]
        keep = [v for v in ext if last_use.get(v, -1) > t]
        keep_idx = [ext.index(v) for v in keep]
        fs = triggers.get(t, [])
        # how each factor reads its key off the extended assignment
        readers = []
        for f in fs:
            idx_h = [ext.index(("h", k)) for k in f.scope_hidden]
            if free:
                readers.append((f, idx_h + [ext.index(("o", j)) for j in f.scope_observed], None))
            else:
                readers.append((f, idx_h, tuple(tau[j] for j in f.scope_observed)))
        size = hid_size if var[0] == "h" else obs_size
        new_states: dict[tuple, int] = {}
        moves = []
        for assign, si in states.items():
            for s in range(size):
                full = assign + (s,)
                exp = zero
                ok = True
                for f, idx, const in readers:
                    key = tuple(full[i] for i in idx)
                    if const is not None:
                        key += const
                    e = f.table.get(key)
                    if e is None:
                        ok = False
                        break
                    exp = tuple(a + b for a, b in zip(exp, e)) if exp is not zero else tuple(e)
                if not ok:
                    continue
                nxt = tuple(full[i] for i in keep_idx)
                di = new_states.setdefault(nxt, len(new_states))
                moves.append((si, s, di, exp))
        layers.append(Layer(var, tuple(moves)))
        states = new_states
        frontier = keep
    if not states:
        dead = True
    return Trellis(model.d, tuple(start), tuple(layers), dead)


@lru_cache(maxsize=4096)
def compile_trellis(model: FactorModel, tau: Optional[tuple]) -> Trellis:
    """Trellis for observation ``tau`` (symbol indices); ``None`` leaves observations free."""
    return _compile(model, tau)


def _integer_direction(v: Sequence) -> tuple[tuple[int, ...], int]:
    fr = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    return tuple(int(x * den) for x in fr), den


def _check_v(model: FactorModel, v: Sequence) -> tuple[tuple[int, ...], int]:
    if len(v) != model.d:
        raise ValueError(f"parameter point must have {model.d} coordinates")
    return _integer_direction(v)


def _viterbi_int(tr: Trellis, w: tuple[int, ...]) -> tuple[tuple, int]:
    if tr.dead:
        raise UnexplainableObservation("no positive-probability assignment")
    best = {0: (sum(a * b for a, b in zip(w, tr.start_exponent)), ())}
    for layer in tr.layers:
        hidden = layer.var[0] == "h"
        nxt: dict = {}
        for src, sym, dst, exp in layer.moves:
            cur = best.get(src)
            if cur is None:
                continue
            score = cur[0] + sum(a * b for a, b in zip(w, exp))
            prefix = cur[1] + (sym,) if hidden else cur[1]
            old = nxt.get(dst)
            if old is None or score > old[0] or (score == old[0] and prefix < old[1]):
                nxt[dst] = (score, prefix)
        best = nxt
    if not best:
        raise UnexplainableObservation("no positive-probability assignment")
    score, h = best[0]
    return h, score


def viterbi(model: FactorModel, tau, v: Sequence) -> tuple[str, Fraction]:
    """Tie-break-least explanation of ``tau`` under log-parameters ``v`` and its score."""
    t = model.encode_observed(tau)
    w, den = _check_v(model, v)
    h, score = _viterbi_int(compile_trellis(model, t), w)
    return model.decode_hidden(h), Fraction(score, den)


def observation_polytope(model: FactorModel, tau) -> NewtonPolytope:
    """NP(f_tau) by polytope propagation; each vertex carries its least hidden witness."""
    t = model.encode_observed(tau)
    tr = compile_trellis(model, t)
    if tr.dead:
        raise UnexplainableObservation("no positive-probability assignment")
    d = model.d
    cur: dict[int, dict] = {0: {tr.start_exponent: ()}}
    for layer in tr.layers:
        nxt: dict[int, dict] = {}
        for src, sym, dst, exp in layer.moves:
            pts = cur.get(src)
            if pts is None:
                continue
            bucket = nxt.setdefault(dst, {})
            for p, pref in pts.items():
                q = tuple(a + b for a, b in zip(p, exp))
                wit = pref + (sym,)
                old = bucket.get(q)
                if old is None or wit < old:
                    bucket[q] = wit
        cur = {}
        for s, bucket in nxt.items():
            if len(bucket) > 2:
                hull = hull_reduce(bucket, d)
                bucket = {p: bucket[p] for p in hull.vertices}
            cur[s] = bucket
    if not cur:
        raise UnexplainableObservation("no positive-probability assignment")
    pts = cur[0]
    hull = hull_reduce(pts, d)
    return NewtonPolytope(hull, {p: model.decode_hidden(pts[p]) for p in hull.vertices})


@dataclass(frozen=True)
class InferenceFunction:
    """Table from every observation string to its explanation (``None``: unexplainable)."""

    table: dict

    def __hash__(self):
        return hash(tuple(sorted(self.table.items(), key=lambda kv: kv[0])))

    def __eq__(self, other):
        return isinstance(other, InferenceFunction) and self.table == other.table


def observation_list(model: FactorModel, observations=None, cap: int = DEFAULT_CAP) -> list[str]:
    if observations is not None:
        obs = [model.decode_observed(model.encode_observed(t)) for t in observations]
        if len(obs) > cap:
            raise CapExceeded(f"{len(obs)} observations exceed the cap {cap}")
        return obs
    total = len(model.observed_alphabet) ** model.n
    if total > cap:
        raise CapExceeded(f"{total} observations exceed the cap {cap}")
    return list(model.observations())


def inference_function(model: FactorModel, v: Sequence, cap: int = DEFAULT_CAP, observations=None) -> InferenceFunction:
    """Phi_v on all observations (or on the given subset)."""
    w, _ = _check_v(model, v)
    table = {}
    for tau in observation_list(model, observations, cap):
        tr = compile_trellis(model, model.encode_observed(tau))
        try:
            h, _ = _viterbi_int(tr, w)
            table[tau] = model.decode_hidden(h)
        except UnexplainableObservation:
            table[tau] = None
    return InferenceFunction(table)


def brute_force_polytope(model: FactorModel, tau):
    """Hull over all hidden assignments by enumeration, with least witnesses (small models only)."""
    import itertools

    from .models import monomial_of

    t = model.encode_observed(tau)
    pts: dict = {}
    for h in itertools.product(range(len(model.hidden_alphabet)), repeat=model.q):
        m = monomial_of(model, h, t)
        if m is not None and (m not in pts or h < pts[m]):
            pts[m] = h
    if not pts:
        raise UnexplainableObservation("no positive-probability assignment")
    hull = hull_reduce(pts, model.d)
    return NewtonPolytope(hull, {p: model.decode_hidden(pts[p]) for p in hull.vertices})
