import math
import random

import pytest

from ptower import quadforms as qf
from ptower.errors import (
    BadDiscriminant,
    DiscriminantMismatch,
    NotNegative,
    NotPositiveDefinite,
    NotSquarefree,
)


def brute_force_reduced_forms(D):
    """Independent oracle: direct (a, b, c) scan over the reduced region."""
    forms = []
    for a in range(1, math.isqrt(-D // 3) + 1):
        for b in range(-a, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == -b or a == c):
                continue
            if math.gcd(a, math.gcd(b, c)) == 1:
                forms.append((a, b, c))
    return sorted(forms)


class TestFundamentalDiscriminant:
    def test_one_mod_four_forces_4m(self):
        assert qf.fundamental_discriminant(-1) == qf.FieldSpec(-1, -4)

    def test_three_mod_four_keeps_m(self):
        assert qf.fundamental_discriminant(-3299).D == -3299
        assert (-3299) % 4 == 1

    def test_paper_two_tower_field(self):
        assert qf.fundamental_discriminant(-4849845).D == -19399380

    def test_rejects_positive(self):
        with pytest.raises(NotNegative):
            qf.fundamental_discriminant(5)

    @pytest.mark.parametrize("m", [-4, -12, -50, -9, -4849845 * 49])
    def test_rejects_non_squarefree(self, m):
        with pytest.raises(NotSquarefree):
            qf.fundamental_discriminant(m)


class TestReduce:
    def test_already_reduced(self):
        f = qf.QuadForm(1, 0, 1)
        assert qf.reduce(f) == f

    def test_spec_example(self):
        assert qf.reduce(qf.QuadForm(6, 1, 1)) == qf.QuadForm(1, 1, 6)

    def test_boundary_form_untouched(self):
        f = qf.QuadForm(2, -1, 3)
        assert qf.reduce(f) == f

    def test_idempotent(self):
        f = qf.reduce(qf.QuadForm(127, 51, 9154))
        assert qf.reduce(f) == f

    def test_indefinite_rejected(self):
        with pytest.raises(NotPositiveDefinite):
            qf.QuadForm(1, 5, 1)

    def test_equivalence_preserved_under_unimodular_moves(self):
        # apply random words in the two generating transformations, reduce back
        rng = random.Random(7)
        forms = qf.enumerate_reduced_forms(-3299)
        for _ in range(50):
            f = rng.choice(forms)
            a, b, c = f.a, f.b, f.c
            for _ in range(rng.randint(1, 8)):
                if rng.random() < 0.5:
                    a, b, c = c, -b, a  # (x, y) -> (-y, x)
                else:
                    t = rng.randint(-3, 3)  # (x, y) -> (x + t y, y)
                    a, b, c = a, b + 2 * a * t, a * t * t + b * t + c
            assert qf.reduce(qf.QuadForm(a, b, c)) == f


class TestEnumeration:
    def test_discriminant_minus_four(self):
        assert qf.enumerate_reduced_forms(-4) == [qf.QuadForm(1, 0, 1)]

    def test_discriminant_minus_23(self):
        forms = qf.enumerate_reduced_forms(-23)
        assert [(f.a, f.b, f.c) for f in forms] == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]

    @pytest.mark.parametrize("D", [-4, -23, -3299, -10007])
    def test_against_brute_force_oracle(self, D):
        got = [(f.a, f.b, f.c) for f in qf.enumerate_reduced_forms(D)]
        assert got == brute_force_reduced_forms(D)

    def test_output_is_sorted(self):
        forms = qf.enumerate_reduced_forms(-10007)
        assert forms == sorted(forms)

    @pytest.mark.parametrize("D", [-5, -6, 3, 0])
    def test_bad_discriminants(self, D):
        with pytest.raises(BadDiscriminant):
            qf.enumerate_reduced_forms(D)


class TestComposition:
    def test_identity_law(self):
        assert qf.compose(qf.QuadForm(1, 1, 6), qf.QuadForm(2, 1, 3)) == qf.QuadForm(2, 1, 3)

    def test_inverse_classes(self):
        assert qf.compose(qf.QuadForm(2, 1, 3), qf.QuadForm(2, -1, 3)) == qf.QuadForm(1, 1, 6)

    def test_order_three_class(self):
        assert qf.compose(qf.QuadForm(2, 1, 3), qf.QuadForm(2, 1, 3)) == qf.QuadForm(2, -1, 3)

    def test_discriminant_mismatch(self):
        with pytest.raises(DiscriminantMismatch):
            qf.compose(qf.QuadForm(1, 0, 1), qf.QuadForm(1, 1, 6))

    @pytest.mark.parametrize("D", [-23, -3299, -10007])
    def test_group_laws_sampled(self, D):
        rng = random.Random(D)
        forms = qf.enumerate_reduced_forms(D)
        form_set = set(forms)
        ident = qf.principal_form(D)
        for _ in range(150):
            f, g, h = (rng.choice(forms) for _ in range(3))
            fg = qf.compose(f, g)
            assert fg in form_set
            assert fg == qf.compose(g, f)
            assert qf.compose(qf.compose(f, g), h) == qf.compose(f, qf.compose(g, h))
            assert qf.compose(f, ident) == f
            assert qf.compose(f, f.inverse()) == ident


class TestStructure:
    def test_trivial(self):
        assert qf.class_group_structure(-4) == qf.AbelianStructure((), 1)

    def test_order_three(self):
        assert qf.class_group_structure(-23) == qf.AbelianStructure((3,), 3)

    def test_scholz_taussky_field(self):
        structure = qf.class_group_structure(-3299)
        assert structure.order == len(qf.enumerate_reduced_forms(-3299))
        three_rank = sum(1 for d in structure.elementary_divisors if d % 3 == 0)
        assert three_rank == 2

    @pytest.mark.parametrize("D", [-23, -3299, -10007, -455])
    def test_against_torsion_count_oracle(self, D):
        # q-torsion count q^(number of divisors divisible by q) for each prime q | h
        structure = qf.class_group_structure(D)
        forms = qf.enumerate_reduced_forms(D)
        ident = qf.principal_form(D)
        h = len(forms)
        assert structure.order == h
        for q in {p for d in structure.elementary_divisors for p in qf._prime_factors(d)}:
            killed = sum(1 for f in forms if qf.form_pow(f, q) == ident)
            expected_rank = sum(1 for d in structure.elementary_divisors if d % q == 0)
            assert killed == q**expected_rank


class TestRanks:
    def test_trivial_group_rank(self):
        assert qf.p_rank(-4, 3) == 0

    def test_rank_one(self):
        assert qf.p_rank(-23, 3) == 1

    def test_rank_two(self):
        assert qf.p_rank(-3299, 3) == 2

    def test_rejects_composite_p(self):
        with pytest.raises(ValueError):
            qf.p_rank(-23, 6)

    @pytest.mark.parametrize(
        "D,expected", [(-4, 0), (-23, 0), (-3299, 0), (-19399380, 7)]
    )
    def test_two_rank_genus(self, D, expected):
        assert qf.two_rank_genus(D) == expected

    @pytest.mark.parametrize("D", [-4, -23, -3299, -10007, -455, -84])
    def test_genus_theory_cross_check(self, D):
        assert qf.p_rank(D, 2) == qf.two_rank_genus(D)

    @pytest.mark.parametrize("D", [-23, -3299, -455])
    def test_divisor_product_is_class_number(self, D):
        structure = qf.class_group_structure(D)
        assert structure.order == len(qf.enumerate_reduced_forms(D))
        prod = 1
        for d in structure.elementary_divisors:
            prod *= d
        assert prod == structure.order
