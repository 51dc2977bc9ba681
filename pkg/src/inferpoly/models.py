"""Discrete graphical models whose local factors are monomials.

Directed models (conditional probability tables) and undirected ones
(clique potentials) share one representation: a list of factors, each a
table from joint assignments of its scope to exponent vectors.  A missing
table entry is a structural zero (probability 0).  The normalising constant
of an undirected model is dropped; it does not depend on the hidden data.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class Factor:
    scope_hidden: tuple[int, ...]
    scope_observed: tuple[int, ...]
    # keys are symbol-index tuples: hidden scope values, then observed scope values
    table: dict = field(hash=False)

    def value(self, h: Sequence[int], tau: Sequence[int]) -> Optional[Exponent]:
        key = tuple(h[i] for i in self.scope_hidden) + tuple(tau[j] for j in self.scope_observed)
        return self.table.get(key)


@dataclass(frozen=True)
class FactorModel:
    d: int
    param_names: tuple[str, ...]
    hidden_alphabet: tuple[str, ...]
    q: int
    observed_alphabet: tuple[str, ...]
    n: int
    factors: tuple[Factor, ...] = field(hash=False)
    edges: Optional[int] = None
    name: str = "model"
    hidden_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.q < 1 or self.n < 1:
            raise ValueError("need at least one hidden and one observed variable")
        if len(self.param_names) != self.d:
            raise ValueError("one name per parameter required")
        for alpha in (self.hidden_alphabet, self.observed_alphabet):
            if len(set(alpha)) != len(alpha) or any(len(s) != 1 for s in alpha):
                raise ValueError("alphabets must be distinct single characters")
        lh, lo = len(self.hidden_alphabet), len(self.observed_alphabet)
        for f in self.factors:
            if any(not 0 <= i < self.q for i in f.scope_hidden) or any(not 0 <= j < self.n for j in f.scope_observed):
                raise ValueError("factor scope out of range")
            width = len(f.scope_hidden) + len(f.scope_observed)
            for key, exp in f.table.items():
                if len(key) != width or len(exp) != self.d:
                    raise ValueError("malformed factor table entry")
                if any(not 0 <= s < lh for s in key[: len(f.scope_hidden)]):
                    raise ValueError("hidden symbol out of range")
                if any(not 0 <= s < lo for s in key[len(f.scope_hidden) :]):
                    raise ValueError("observed symbol out of range")

    # -- symbol conversions -------------------------------------------------

    def encode_hidden(self, h) -> tuple[int, ...]:
        return _encode(h, self.hidden_alphabet, self.q, "hidden")

    def encode_observed(self, tau) -> tuple[int, ...]:
        return _encode(tau, self.observed_alphabet, self.n, "observed")

    def decode_hidden(self, h: Sequence[int]) -> str:
        return "".join(self.hidden_alphabet[s] for s in h)

    def decode_observed(self, tau: Sequence[int]) -> str:
        return "".join(self.observed_alphabet[s] for s in tau)

    def pretty_hidden(self, h: Sequence[int]) -> str:
        if self.hidden_names is None:
            return self.decode_hidden(h)
        return " ".join(self.hidden_names[s] for s in h)

    def observations(self):
        """All observation strings in lexicographic (alphabet) order."""
        for tau in itertools.product(range(len(self.observed_alphabet)), repeat=self.n):
            yield self.decode_observed(tau)

    # -- JSON -----------------------------------------------------------------

    def to_json(self) -> dict:
        hidden = {"alphabet": list(self.hidden_alphabet), "count": self.q}
        if self.hidden_names is not None:
            hidden["names"] = list(self.hidden_names)
        out = {
            "name": self.name,
            "d": self.d,
            "params": list(self.param_names),
            "hidden": hidden,
            "observed": {"alphabet": list(self.observed_alphabet), "count": self.n},
            "factors": [],
        }
        if self.edges is not None:
            out["edges"] = self.edges
        for f in self.factors:
            table = {}
            for key, exp in sorted(f.table.items()):
                nh = len(f.scope_hidden)
                s = "".join(self.hidden_alphabet[k] for k in key[:nh]) + "".join(
                    self.observed_alphabet[k] for k in key[nh:]
                )
                table[s] = list(exp)
            out["factors"].append(
                {"scope_hidden": list(f.scope_hidden), "scope_observed": list(f.scope_observed), "table": table}
            )
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "FactorModel":
        hid = tuple(data["hidden"]["alphabet"])
        obs = tuple(data["observed"]["alphabet"])
        hpos = {s: i for i, s in enumerate(hid)}
        opos = {s: i for i, s in enumerate(obs)}
        factors = []
        for fd in data["factors"]:
            sh, so = tuple(fd["scope_hidden"]), tuple(fd["scope_observed"])
            table = {}
            for s, exp in fd["table"].items():
                if len(s) != len(sh) + len(so):
                    raise ValueError(f"table key {s!r} does not match the factor scope")
                key = tuple(hpos[c] for c in s[: len(sh)]) + tuple(opos[c] for c in s[len(sh) :])
                table[key] = tuple(int(x) for x in exp)
            factors.append(Factor(sh, so, table))
        names = data["hidden"].get("names")
        return cls(
            d=int(data["d"]),
            param_names=tuple(data["params"]),
            hidden_alphabet=hid,
            q=int(data["hidden"]["count"]),
            observed_alphabet=obs,
            n=int(data["observed"]["count"]),
            factors=tuple(factors),
            edges=data.get("edges"),
            name=data.get("name", "model"),
            hidden_names=tuple(names) if names is not None else None,
        )

    @classmethod
    def loads(cls, text: str) -> "FactorModel":
        return cls.from_json(json.loads(text))


def _encode(x, alphabet, length, what) -> tuple[int, ...]:
    pos = {s: i for i, s in enumerate(alphabet)}
    if isinstance(x, str):
        try:
            out = tuple(pos[c] for c in x)
        except KeyError as e:
            raise ValueError(f"symbol {e.args[0]!r} not in the {what} alphabet") from None
    else:
        out = tuple(int(s) for s in x)
        if any(not 0 <= s < len(alphabet) for s in out):
            raise ValueError(f"{what} symbol out of range")
    if len(out) != length:
        raise ValueError(f"{what} assignment must have length {length}")
    return out


def monomial_of(model: FactorModel, h, tau) -> Optional[Exponent]:
    """Exponent vector of Prob(X=h, Y=tau), or ``None`` when that probability is zero."""
    hh = model.encode_hidden(h)
    tt = model.encode_observed(tau)
    total = [0] * model.d
    for f in model.factors:
        e = f.value(hh, tt)
        if e is None:
            return None
        for i, x in enumerate(e):
            total[i] += x
    return tuple(total)


def complexity_M(model: FactorModel) -> int:
    """Maximum total degree of f_tau over all observations tau."""
    from .inference import compile_trellis

    return compile_trellis(model, None).max_degree()


# ---------------------------------------------------------------------------
# model families

_POOL = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"


def build_homogeneous_hmm(
    n: int,
    l: int,
    lp: int,
    transition_exponents=None,
    emission_exponents=None,
    d: Optional[int] = None,
    param_names: Optional[Sequence[str]] = None,
) -> FactorModel:
    """Length-n hidden Markov model with shared transition and emission tables.

    With the default identity tables every entry t_ij and s_ij is its own
    parameter, so d = l*l + l*l'.  Custom tables give an exponent vector (or
    ``None`` for a structural zero) per entry.  The source X_1 is uniform and
    contributes nothing.
    """
    if n < 1 or l < 1 or lp < 1:
        raise ValueError("n, l, l' must be positive")
    if transition_exponents is None and emission_exponents is None:
        d = l * l + l * lp
        names = [f"t{a}{b}" for a in range(l) for b in range(l)] + [f"s{a}{b}" for a in range(l) for b in range(lp)]

        def unit(i):
            return tuple(int(k == i) for k in range(d))

        transition_exponents = [[unit(a * l + b) for b in range(l)] for a in range(l)]
        emission_exponents = [[unit(l * l + a * lp + b) for b in range(lp)] for a in range(l)]
        param_names = names
    if transition_exponents is None or emission_exponents is None:
        raise ValueError("give both exponent tables or neither")
    if len(transition_exponents) != l or any(len(r) != l for r in transition_exponents):
        raise ValueError("transition table must be l x l")
    if len(emission_exponents) != l or any(len(r) != lp for r in emission_exponents):
        raise ValueError("emission table must be l x l'")
    if d is None:
        d = len(next(e for row in emission_exponents for e in row if e is not None))
    if param_names is None:
        param_names = [f"theta{i + 1}" for i in range(d)]
    trans = {(a, b): tuple(e) for a in range(l) for b, e in enumerate(transition_exponents[a]) if e is not None}
    emit = {(a, b): tuple(e) for a in range(l) for b, e in enumerate(emission_exponents[a]) if e is not None}
    factors = [Factor((i, i + 1), (), trans) for i in range(n - 1)]
    factors += [Factor((i,), (i,), emit) for i in range(n)]
    return FactorModel(
        d=d,
        param_names=tuple(param_names),
        hidden_alphabet=tuple(_POOL[:l]),
        q=n,
        observed_alphabet=tuple(_POOL[:lp]),
        n=n,
        factors=tuple(factors),
        edges=2 * n - 1,
        name=f"hmm-n{n}-l{l}-l{lp}",
    )


def build_lowerbound_hmm(d: int, n: int) -> FactorModel:
    """The 4d+4 state HMM on observations {S, C} whose cones realise every a.v = 0.

    Hidden states s_i, c_i, s'_i, c'_i (1 <= i <= d+1).  An observation with
    S exactly at positions 1, a_1+1, ..., a_1+...+a_d+1 is explained only by
    t = s_1 c_1^(a_1-1) s_2 ... (monomial theta^a) or by its primed copy
    (monomial 1).
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if n < d + 2:
        raise ValueError("n must be at least d + 2")
    k = d + 1
    names = [f"s{i}" for i in range(1, k + 1)] + [f"c{i}" for i in range(1, k + 1)]
    names += [f"s'{i}" for i in range(1, k + 1)] + [f"c'{i}" for i in range(1, k + 1)]
    s = lambda i: i - 1  # noqa: E731
    c = lambda i: k + i - 1  # noqa: E731
    sp = lambda i: 2 * k + i - 1  # noqa: E731
    cp = lambda i: 3 * k + i - 1  # noqa: E731
    zero = (0,) * d

    def theta(i):
        return tuple(int(j == i - 1) for j in range(d))

    trans: dict = {}
    for i in range(1, k + 1):
        wt = theta(i) if i <= d else zero
        trans[(s(i), c(i))] = wt
        trans[(c(i), c(i))] = wt
        trans[(sp(i), cp(i))] = zero
        trans[(cp(i), cp(i))] = zero
        if i <= d:
            trans[(c(i), s(i + 1))] = wt
            trans[(cp(i), sp(i + 1))] = zero
            # blocks of length one
            trans[(s(i), s(i + 1))] = wt
            trans[(sp(i), sp(i + 1))] = zero
    S, C = 0, 1
    emit = {}
    for i in range(1, k + 1):
        emit[(s(i), S)] = zero
        emit[(sp(i), S)] = zero
        emit[(c(i), C)] = zero
        emit[(cp(i), C)] = zero
    factors = [Factor((i, i + 1), (), trans) for i in range(n - 1)]
    factors += [Factor((i,), (i,), emit) for i in range(n)]
    return FactorModel(
        d=d,
        param_names=tuple(f"theta{i}" for i in range(1, d + 1)),
        hidden_alphabet=tuple(_POOL[: 4 * k]),
        q=n,
        observed_alphabet=("S", "C"),
        n=n,
        factors=tuple(factors),
        edges=2 * n - 1,
        name=f"lowerbound-d{d}-n{n}",
        hidden_names=tuple(names),
    )


def block_observation(a: Sequence[int], n: int) -> str:
    """Observation with S exactly at positions 1, a1+1, ..., a1+...+ad+1 (1-based)."""
    if any(x < 1 for x in a) or sum(a) >= n:
        raise ValueError("need every a_i >= 1 and sum(a) < n")
    starts = {0}
    pos = 0
    for x in a:
        pos += x
        starts.add(pos)
    return "".join("S" if i in starts else "C" for i in range(n))


def block_path(a: Sequence[int], n: int, primed: bool = False) -> list[str]:
    """State names of the path t (or t') through the blocks of ``a``."""
    out = []
    p = "'" if primed else ""
    for i, x in enumerate(list(a) + [n - sum(a)], start=1):
        out += [f"s{p}{i}"] + [f"c{p}{i}"] * (x - 1)
    return out


# alignment pair model -------------------------------------------------------

ALIGN_MOVES = ("D", "H", "V", "O")  # diagonal, gap in sigma2, gap in sigma1, off the path
MISMATCH, SPACE, MATCH = 0, 1, 2


def build_alignment_model(n1: int, n2: int, alphabet: Sequence[str] = ("0", "1")) -> FactorModel:
    """Pair model for two sequences of lengths n1, n2 with monomials (mismatches, spaces, matches).

    Hidden variable k labels the grid node (i, j) = divmod(k, n2 + 1) with the
    move the alignment path makes out of it (``O`` when the path avoids the
    node); the end node (n1, n2) has no variable.  Consistency factors say
    that a node is on the path iff exactly one predecessor moves into it.
    Observed variables are sigma1 followed by sigma2.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("sequence lengths must be positive")
    alphabet = tuple(alphabet)
    width = n2 + 1
    q = (n1 + 1) * width - 1
    D, H, V, O = range(4)
    zero = (0, 0, 0)
    unit = {MISMATCH: (1, 0, 0), SPACE: (0, 1, 0), MATCH: (0, 0, 1)}

    def node(i, j):
        return i * width + j

    factors = []
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            if (i, j) == (n1, n2):
                continue
            u = node(i, j)
            moves = [O] if (i, j) != (0, 0) else []
            if i < n1:
                moves.append(H)
            if j < n2:
                moves.append(V)
            table = {}
            if i < n1 and j < n2:
                obs = (i, n1 + j)
                for m in moves + [D]:
                    for a in range(len(alphabet)):
                        for b in range(len(alphabet)):
                            if m == D:
                                table[(m, a, b)] = unit[MATCH if a == b else MISMATCH]
                            else:
                                table[(m, a, b)] = unit[SPACE] if m in (H, V) else zero
            else:
                obs = ()
                for m in moves:
                    table[(m,)] = unit[SPACE] if m in (H, V) else zero
            factors.append(Factor((u,), obs, table))
    # consistency: exactly one incoming move iff on the path
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            if (i, j) == (0, 0):
                continue
            preds = []
            if i > 0 and j > 0:
                preds.append((node(i - 1, j - 1), D))
            if i > 0:
                preds.append((node(i - 1, j), H))
            if j > 0:
                preds.append((node(i, j - 1), V))
            is_end = (i, j) == (n1, n2)
            scope = tuple(p for p, _ in preds) + (() if is_end else (node(i, j),))
            table = {}
            for combo in itertools.product(range(4), repeat=len(scope)):
                incoming = sum(combo[k] == mv for k, (_, mv) in enumerate(preds))
                if is_end:
                    ok = incoming == 1
                else:
                    on_path = combo[-1] != O
                    ok = incoming == (1 if on_path else 0)
                if ok:
                    table[combo] = zero
            factors.append(Factor(scope, (), table))
    return FactorModel(
        d=3,
        param_names=("x", "y", "z"),
        hidden_alphabet=ALIGN_MOVES,
        q=q,
        observed_alphabet=alphabet,
        n=n1 + n2,
        factors=tuple(factors),
        name=f"alignment-{n1}x{n2}",
    )


def alignment_labels(n1: int, n2: int, mu1: str, mu2: str) -> str:
    """Hidden string of the alignment model for the alignment (mu1, mu2)."""
    width = n2 + 1
    labels = ["O"] * ((n1 + 1) * width - 1)
    i = j = 0
    for a, b in zip(mu1, mu2):
        mv = "D" if a != "-" and b != "-" else ("H" if b == "-" else "V")
        labels[i * width + j] = mv
        i += mv in "DH"
        j += mv in "DV"
    return "".join(labels)
