import itertools
import random
from fractions import Fraction

import pytest

from inferpoly.geometry import argmax_face
from inferpoly.inference import (
    CapExceeded,
    UnexplainableObservation,
    brute_force_polytope,
    inference_function,
    observation_polytope,
    viterbi,
)
from inferpoly.models import (
    alignment_labels,
    block_path,
    build_alignment_model,
    build_homogeneous_hmm,
    build_lowerbound_hmm,
    monomial_of,
)
from oracles import lp_hull

LB = build_lowerbound_hmm(2, 7)


def named(model, h):
    return model.pretty_hidden(model.encode_hidden(h))


def random_hmm(rng, n, l=2, lp=2, d=2, zero_rate=0.2):
    def entry():
        return None if rng.random() < zero_rate else tuple(rng.randint(0, 2) for _ in range(d))

    T = [[entry() for _ in range(l)] for _ in range(l)]
    S = [[entry() for _ in range(lp)] for _ in range(l)]
    S[0][0] = S[0][0] or (0,) * d
    return build_homogeneous_hmm(n, l, lp, T, S, d=d)


def brute_viterbi(model, tau, v):
    """Tie-break-least maximiser by enumerating every hidden string in order."""
    best = None
    t = model.encode_observed(tau)
    for h in itertools.product(range(len(model.hidden_alphabet)), repeat=model.q):
        m = monomial_of(model, h, t)
        if m is None:
            continue
        s = sum(Fraction(a) * b for a, b in zip(v, m))
        if best is None or s > best[1]:
            best = (h, s)
    if best is None:
        return None
    return model.decode_hidden(best[0]), best[1]


class TestViterbi:
    def test_lowerbound_positive_side(self):
        h, s = viterbi(LB, "SCSCCSC", (1, 1))
        assert named(LB, h) == "s1 c1 s2 c2 c2 s3 c3" and s == 5

    def test_lowerbound_negative_side(self):
        h, s = viterbi(LB, "SCSCCSC", (1, -1))
        assert named(LB, h) == " ".join(block_path((2, 3), 7, primed=True)) and s == 0

    def test_alignment_gapless(self):
        m = build_alignment_model(2, 2)
        h, s = viterbi(m, "0001", (Fraction(-1, 2), Fraction(-2, 5), 1))
        assert h == alignment_labels(2, 2, "00", "01") and s == Fraction(1, 2)

    def test_unexplainable(self):
        with pytest.raises(UnexplainableObservation):
            viterbi(LB, "SSSSSSS", (1, 1))

    def test_wrong_parameter_length(self):
        with pytest.raises(ValueError):
            viterbi(LB, "SCSCCSC", (1, 1, 1))

    def test_matches_enumeration(self):
        rng = random.Random(2)
        for _ in range(40):
            m = random_hmm(rng, rng.randint(1, 5))
            v = (Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
            for tau in list(m.observations())[:6]:
                try:
                    got = viterbi(m, tau, v)
                except UnexplainableObservation:
                    assert brute_viterbi(m, tau, v) is None
                    continue
                assert got == brute_viterbi(m, tau, v)


class TestObservationPolytope:
    def test_hmm_n1_segment(self):
        m = build_homogeneous_hmm(1, 2, 2)
        P = observation_polytope(m, "0")
        s00 = tuple(int(k == 4) for k in range(8))
        s10 = tuple(int(k == 6) for k in range(8))
        assert set(P.vertices) == {s00, s10}

    def test_lowerbound_segment(self):
        P = observation_polytope(LB, "SCSCCSC")
        assert P.vertices == ((0, 0), (2, 3))
        assert named(LB, P.witness[(2, 3)]) == "s1 c1 s2 c2 c2 s3 c3"

    def test_alignment_triangle(self):
        m = build_alignment_model(2, 2)
        P = observation_polytope(m, "0110")
        assert set(P.vertices) == {(2, 0, 0), (0, 2, 1), (0, 4, 0)}
        # (0, 2, 1) is reached by two alignments; the witness is the least hidden string
        assert P.witness[(0, 2, 1)] == min(
            alignment_labels(2, 2, "01-", "-10"), alignment_labels(2, 2, "-01", "10-")
        )

    def test_witnesses_are_sound(self):
        rng = random.Random(4)
        for _ in range(20):
            m = random_hmm(rng, rng.randint(1, 5), d=3)
            for tau in m.observations():
                try:
                    P = observation_polytope(m, tau)
                except UnexplainableObservation:
                    continue
                for v, h in P.witness.items():
                    assert monomial_of(m, h, tau) == v

    def test_brute_force_with_lp_oracle(self):
        m = build_homogeneous_hmm(3, 2, 2)
        for tau in m.observations():
            P = observation_polytope(m, tau)
            B = brute_force_polytope(m, tau)
            assert P.vertices == B.vertices and P.witness == B.witness
        pts = set()
        for h in itertools.product(range(2), repeat=3):
            pts.add(monomial_of(m, h, "010"))
        assert set(observation_polytope(m, "010").vertices) == lp_hull(pts)


class TestConsistency:
    def test_viterbi_equals_face_maximum(self):
        rng = random.Random(7)
        models = [build_homogeneous_hmm(3, 2, 2), build_lowerbound_hmm(2, 5), build_alignment_model(2, 2)]
        models += [random_hmm(rng, 4, d=3) for _ in range(3)]
        checked = 0
        while checked < 1000:
            m = rng.choice(models)
            tau = rng.choice(list(m.observations()))
            try:
                P = observation_polytope(m, tau)
            except UnexplainableObservation:
                continue
            v = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(m.d))
            if not any(v):
                continue
            _, score = viterbi(m, tau, v)
            face = argmax_face(P.polytope, v)
            assert score == sum(a * b for a, b in zip(v, face[0]))
            checked += 1


class TestInferenceFunction:
    def test_hmm_n1_ties(self):
        m = build_homogeneous_hmm(1, 2, 2)
        v = [0] * 8
        v[m.param_names.index("s00")] = 1
        phi = inference_function(m, v)
        assert phi.table == {"0": "0", "1": "0"}

    def test_lowerbound_block_observation(self):
        phi = inference_function(LB, (1, 1))
        assert named(LB, phi.table["SCSCCSC"]) == "s1 c1 s2 c2 c2 s3 c3"
        assert phi.table["SSSSSSS"] is None

    def test_zero_vector_picks_least(self):
        m = build_homogeneous_hmm(3, 2, 2)
        phi = inference_function(m, [0] * 8)
        assert all(h == "000" for h in phi.table.values())

    def test_scaling_invariance(self):
        rng = random.Random(9)
        m = build_homogeneous_hmm(3, 2, 2)
        for _ in range(10):
            v = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(8)]
            lam = Fraction(rng.randint(1, 30), rng.randint(1, 7))
            assert inference_function(m, v) == inference_function(m, [lam * x for x in v])

    def test_cap(self):
        with pytest.raises(CapExceeded):
            inference_function(build_homogeneous_hmm(5, 2, 2), [0] * 8, cap=10)

    def test_subset_of_observations(self):
        phi = inference_function(LB, (1, -1), observations=["SCSCCSC"])
        assert list(phi.table) == ["SCSCCSC"]
