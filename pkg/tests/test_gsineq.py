import random
from fractions import Fraction

import pytest

from ptower import gsineq as gs
from ptower.errors import RankUnsupported


def pair_poly(i, j):
    return gs.ZassenhausPolynomial(2, {i: 2} if i == j else {i: 1, j: 1})


class TestPolynomial:
    def test_level_one_rejected(self):
        with pytest.raises(ValueError):
            gs.ZassenhausPolynomial(2, {1: 1})

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            gs.ZassenhausPolynomial(2, {3: -1})

    def test_zero_counts_dropped(self):
        assert gs.ZassenhausPolynomial(2, {3: 1, 5: 0}).levels == {3: 1}

    def test_coefficients(self):
        assert gs.ZassenhausPolynomial(2, {5: 2}).coefficients() == [1, -2, 0, 0, 0, 2]


class TestEvaluate:
    def test_witness_value_from_level_five_pair(self):
        Z = gs.ZassenhausPolynomial(2, {5: 2})
        assert gs.evaluate(Z, Fraction(2, 3)) == Fraction(-17, 243)

    def test_constant_term(self):
        assert gs.evaluate(gs.ZassenhausPolynomial(7, {3: 2, 9: 4}), 0) == 1

    def test_double_root_at_one(self):
        # (t - 1)^2: one relation at level 2 against two generators
        assert gs.evaluate(gs.ZassenhausPolynomial(2, {2: 1}), 1) == 0

    def test_exactness_no_rounding(self):
        Z = gs.ZassenhausPolynomial(3, {7: 5})
        t = Fraction(123456789, 987654321)
        expected = 5 * t**7 - 3 * t + 1
        assert gs.evaluate(Z, t) == expected


class TestContradiction:
    def test_levels_three_nine(self):
        assert gs.gs_contradiction(gs.ZassenhausPolynomial(2, {3: 1, 9: 1})).has_nonpositive_point

    def test_levels_three_seven(self):
        report = gs.gs_contradiction(gs.ZassenhausPolynomial(2, {3: 1, 7: 1}))
        assert not report.has_nonpositive_point
        assert report.witness is None

    def test_two_level_five_relations(self):
        report = gs.gs_contradiction(gs.ZassenhausPolynomial(2, {5: 2}))
        assert report.has_nonpositive_point
        assert report.witness is not None

    def test_witness_certifies(self):
        for levels in [{3: 1, 9: 1}, {5: 2}, {3: 1, 11: 1}, {2: 4}]:
            Z = gs.ZassenhausPolynomial(2, levels)
            report = gs.gs_contradiction(Z)
            assert report.has_nonpositive_point
            assert 0 < report.witness < 1
            assert gs.evaluate(Z, report.witness) <= 0

    def test_no_relations_large_rank(self):
        # 1 - dt dips below zero inside (0,1) whenever d >= 2
        assert gs.gs_contradiction(gs.ZassenhausPolynomial(2, {})).has_nonpositive_point
        assert not gs.gs_contradiction(gs.ZassenhausPolynomial(1, {})).has_nonpositive_point

    def test_tangential_rational_touch(self):
        # 9t^2 - 6t + 1 = (3t - 1)^2 touches zero at the non-dyadic 1/3
        report = gs.gs_contradiction(gs.ZassenhausPolynomial(6, {2: 9}))
        assert report.has_nonpositive_point
        assert report.witness == Fraction(1, 3)

    @pytest.mark.parametrize("a,expected", [(a, a >= 9) for a in range(3, 16, 2)])
    def test_boundary_family_three(self, a, expected):
        assert gs.gs_contradiction(pair_poly(3, a)).has_nonpositive_point is expected

    @pytest.mark.parametrize("b", range(5, 16, 2))
    def test_boundary_family_five(self, b):
        assert gs.gs_contradiction(pair_poly(5, b)).has_nonpositive_point

    def test_monotone_in_depth(self):
        # moving one relation deeper can only create or keep a contradiction
        rng = random.Random(11)
        for _ in range(60):
            d = rng.randint(1, 5)
            levels = {}
            for _ in range(rng.randint(1, 4)):
                levels[rng.randint(2, 9)] = rng.randint(1, 3)
            before = gs.gs_contradiction(gs.ZassenhausPolynomial(d, levels))
            k = rng.choice(list(levels))
            deeper = dict(levels)
            deeper[k] -= 1
            deeper[k + rng.randint(1, 4)] = deeper.get(k + 1, 0) + 1
            after = gs.gs_contradiction(gs.ZassenhausPolynomial(d, deeper))
            if before.has_nonpositive_point:
                assert after.has_nonpositive_point


class TestMediumBound:
    def test_weak_form_threshold(self):
        assert gs.medium_bound(2, 2) == 1

    def test_rank_three_threshold(self):
        assert gs.medium_bound(3, 3) == 4

    def test_small_rank(self):
        assert gs.medium_bound(1, 2) == Fraction(1, 4)

    def test_contradiction_for_rank_three_tower(self):
        assert gs.medium_contradiction(3, 3, 3)

    def test_no_contradiction_at_rank_two(self):
        assert not gs.medium_contradiction(2, 2, 2)
        assert not gs.medium_contradiction(2, 2, 3)

    def test_agrees_with_full_test_at_level_two(self):
        # interior-optimum cases; the optimum sits at t = d/2r, so need 2r > d
        rng = random.Random(5)
        for _ in range(80):
            d = rng.randint(1, 8)
            r = rng.randint(1, 20)
            Z = gs.ZassenhausPolynomial(d, {2: r})
            full = gs.gs_contradiction(Z).has_nonpositive_point
            medium = gs.medium_contradiction(d, r, 2)
            if full:
                assert medium
            if medium and 2 * r > d:
                assert full


class TestAdmissibleTypes:
    def test_exactly_three_survivors(self):
        result = gs.admissible_types(15)
        assert [(t.i, t.j) for t in result.types] == [(3, 3), (3, 5), (3, 7)]
        assert result.beyond_excluded

    def test_three_nine_and_five_five_excluded(self):
        pairs = {(t.i, t.j) for t in gs.admissible_types(15).types}
        assert (3, 9) not in pairs
        assert (5, 5) not in pairs

    def test_rank_guard(self):
        with pytest.raises(RankUnsupported):
            gs.admissible_types(15, d=3)

    def test_small_cap_cannot_certify_beyond(self):
        result = gs.admissible_types(3)
        assert [(t.i, t.j) for t in result.types] == [(3, 3)]
        assert not result.beyond_excluded

    def test_survivors_positive_on_rational_grid(self):
        for t in gs.admissible_types(15).types:
            Z = pair_poly(t.i, t.j)
            assert all(
                gs.evaluate(Z, Fraction(n, 1000)) > 0 for n in range(1, 1000)
            )
