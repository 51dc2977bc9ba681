import itertools
import random
from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from inferpoly.counting import (
    BudgetExceeded,
    _det,
    _minors_gcd,
    _planar_zonotope_size,
    arrangement_chambers,
    arrangement_normals,
    count_inference_functions,
    random_directions,
    extreme_rays_check,
    primitive_probability,
    sample_inference_functions,
    zeta_reference,
)
from inferpoly.inference import UnexplainableObservation, inference_function
from inferpoly.models import (
    Factor,
    FactorModel,
    block_observation,
    build_homogeneous_hmm,
    build_lowerbound_hmm,
)
from oracles import calkin_wilf_pairs, gcd_pairs, zeta_partial


def lowerbound_blocks(d, n):
    """Only the block observations of the lower-bound construction."""
    out = []
    for a in itertools.product(range(1, n), repeat=d):
        if sum(a) < n:
            out.append(block_observation(a, n))
    return out


class TestExactCount:
    def test_hmm_length1(self):
        rep = count_inference_functions(build_homogeneous_hmm(1, 2, 2))
        assert rep.count == 4
        assert rep.num_observations == rep.explained == 2
        assert rep.within_bounds

    def test_hmm_length2_and_3(self):
        assert count_inference_functions(build_homogeneous_hmm(2, 2, 2)).count == 38
        assert count_inference_functions(build_homogeneous_hmm(3, 2, 2)).count == 398

    def test_record_fields(self):
        rec = count_inference_functions(build_homogeneous_hmm(1, 2, 2)).record()
        assert rec["count"] == 4 and rec["M"] == 1 and rec["d"] == 8 and rec["m"] == 2

    def test_order_invariance(self):
        m = build_homogeneous_hmm(3, 2, 2)
        obs = list(m.observations())
        random.Random(1).shuffle(obs)
        assert count_inference_functions(m, observations=obs).count == 398

    def test_parallel_same(self):
        m = build_lowerbound_hmm(2, 6)
        assert count_inference_functions(m, jobs=2).count == count_inference_functions(m).count

    def test_one_parameter_model_at_most_two(self):
        # with d = 1 there are two directions up to scaling, plus the zero vector's ties
        f = Factor((0, 1), (), {(a, b): (a + 2 * b,) for a in range(2) for b in range(2)})
        g = Factor((1,), (0,), {(a, y): (a * y,) for a in range(2) for y in range(2)})
        m = FactorModel(1, ("t",), ("0", "1"), 2, ("0", "1"), 1, (f, g))
        assert count_inference_functions(m).count <= 2

    def test_lowerbound_counts_within_bounds(self):
        for d, n, expected in [(2, 4, 10), (2, 5, 15), (2, 6, 23), (3, 5, 143)]:
            rep = count_inference_functions(build_lowerbound_hmm(d, n))
            assert rep.count == expected
            assert rep.within_bounds

    def test_unexplainable_skipped(self):
        m = build_lowerbound_hmm(2, 5)
        rep = count_inference_functions(m)
        assert rep.explained < rep.num_observations

    def test_nothing_explainable(self):
        m = build_lowerbound_hmm(2, 5)
        with pytest.raises(UnexplainableObservation):
            count_inference_functions(m, observations=["SSSSS"])


class TestSampling:
    def test_hmm_length1_all_found(self):
        assert sample_inference_functions(build_homogeneous_hmm(1, 2, 2), 2000, seed=3) == 4

    def test_single_sample(self):
        assert sample_inference_functions(build_homogeneous_hmm(2, 2, 2), 1, seed=0) == 1

    def test_never_exceeds_exact(self):
        m = build_homogeneous_hmm(2, 2, 2)
        assert sample_inference_functions(m, 3000, seed=5) <= 38

    def test_deterministic(self):
        m = build_homogeneous_hmm(2, 2, 2)
        assert sample_inference_functions(m, 500, seed=9) == sample_inference_functions(m, 500, seed=9)

    def test_restricted_lowerbound_matches_arrangement(self):
        m = build_lowerbound_hmm(2, 7)
        obs = lowerbound_blocks(2, 7)
        exact = count_inference_functions(m, observations=obs).count
        assert exact == arrangement_chambers(2, 7).chamber_count == 22
        assert sample_inference_functions(m, 10**4, seed=1, observations=obs) == 22

    def test_directions_give_full_tables(self):
        # the full HMM explains every observation at every sampled direction
        m = build_homogeneous_hmm(2, 2, 2)
        W = random_directions(m.d, 5, seed=2)
        for w in W:
            phi = inference_function(m, [Fraction(int(x)) for x in w])
            assert all(h is not None for h in phi.table.values())

    def test_bad_samples(self):
        with pytest.raises(ValueError):
            sample_inference_functions(build_homogeneous_hmm(1, 2, 2), 0, seed=0)


class TestArrangement:
    def test_d2_n4(self):
        assert arrangement_chambers(2, 4).chamber_count == 6

    def test_d2_n3(self):
        assert arrangement_chambers(2, 3).chamber_count == 2

    @pytest.mark.parametrize("n", [3, 5, 8, 13, 21, 40])
    def test_farey(self, n):
        got = arrangement_chambers(2, n).chamber_count
        assert got == 2 * calkin_wilf_pairs(n) == 2 * gcd_pairs(n)

    def test_normals(self):
        assert arrangement_normals(2, 5).tolist() == [[1, 1], [1, 2], [1, 3], [2, 1], [3, 1]]
        assert len(arrangement_normals(3, 5)) == 4

    def test_d3(self):
        # one plane, then four planes in general position: 2 * (1 + 3 + 3)
        assert arrangement_chambers(3, 4).chamber_count == 2
        assert arrangement_chambers(3, 5).chamber_count == 14

    def test_vectorized_route_matches_zonotope(self):
        normals = arrangement_normals(2, 60)
        assert _planar_zonotope_size(normals) == arrangement_chambers(2, 60).chamber_count

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            arrangement_chambers(3, 50)
        with pytest.raises(BudgetExceeded):
            arrangement_chambers(7, 10)
        with pytest.raises(ValueError):
            arrangement_chambers(1, 10)

    def test_record(self):
        assert arrangement_chambers(2, 4).record() == {"d": 2, "n": 4, "normals": 3, "chambers": 6}


class TestExtremeRays:
    def test_d2(self):
        rep = extreme_rays_check(2, 10)
        assert rep.max_extreme_rays_per_chamber == 2

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_d3_within_limit(self, n):
        rep = extreme_rays_check(3, n)
        assert rep.max_extreme_rays_per_chamber <= 64

    def test_d3_n6_values(self):
        rep = extreme_rays_check(3, 6)
        assert (rep.max_extreme_rays_per_chamber, rep.distinct_rays) == (4, 48)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            extreme_rays_check(3, 9)


class TestPrimitive:
    def test_det(self):
        assert _det([[2, 0, 1], [1, 3, 2], [1, 1, 1]]) == int(round(np.linalg.det([[2, 0, 1], [1, 3, 2], [1, 1, 1]])))
        assert _det([[0, 1], [1, 0]]) == -1
        assert _det([[1, 2], [2, 4]]) == 0

    def test_minors_gcd(self):
        mats = np.array([[[1, 0, 0], [0, 1, 0]], [[2, 0, 0], [0, 2, 0]], [[1, 1, 1], [1, 2, 3]]])
        assert list(_minors_gcd(mats)) == [1, 4, 1]
        assert list(_minors_gcd(np.array([[[4, 6]], [[3, 5]]]))) == [2, 1]

    def test_vectorized_minors_match_direct(self):
        rng = np.random.default_rng(0)
        mats = rng.integers(0, 50, size=(50, 2, 4))
        got = _minors_gcd(mats)
        for k in range(len(mats)):
            g = 0
            for i, j in itertools.combinations(range(4), 2):
                g = gcd(g, int(mats[k, 0, i] * mats[k, 1, j] - mats[k, 0, j] * mats[k, 1, i]))
            assert got[k] == g

    def test_bareiss_route(self):
        # m = 3 goes through the exact determinant
        mats = np.array([[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]], [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 2]]])
        assert list(_minors_gcd(mats)) == [1, 4]

    @pytest.mark.parametrize("d,m", [(2, 2), (3, 3), (2, 0)])
    def test_invalid(self, d, m):
        with pytest.raises(ValueError):
            primitive_probability(d, m, 1000, 10, seed=0)
        with pytest.raises(ValueError):
            zeta_reference(d, m)

    def test_small_box_rejected(self):
        with pytest.raises(ValueError):
            primitive_probability(2, 1, 10, 10, seed=0)

    def test_deterministic(self):
        assert primitive_probability(2, 1, 10**6, 5000, seed=4) == primitive_probability(2, 1, 10**6, 5000, seed=4)

    def test_close_to_reference(self):
        lo, hi = zeta_reference(2, 1)
        p = primitive_probability(2, 1, 10**6, 20000, seed=11)
        assert abs(p - float((lo + hi) / 2)) < 0.02

    @pytest.mark.parametrize("d,m,expected", [(2, 1, 0.607927), (3, 1, 0.831907), (3, 2, 0.505739)])
    def test_zeta_reference(self, d, m, expected):
        lo, hi = zeta_reference(d, m)
        assert hi - lo <= Fraction(1, 10**6)
        assert lo <= Fraction(expected + 1e-6) and hi >= Fraction(expected - 1e-6)
        ref = 1.0
        for s in range(d - m + 1, d + 1):
            ref /= zeta_partial(s)
        assert float(lo) - 1e-7 <= ref <= float(hi) + 1e-7
