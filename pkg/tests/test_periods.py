from fractions import Fraction

import pytest

from toric_periods.errors import NotApplicable, OutOfTableRange, StarViolated
from toric_periods.instances import (case_datum, central_omega, character_family, torus_family)
from toric_periods.padic import Context
from toric_periods.periods import (PeriodProblem, align_torus, brute_force_integral,
                                   conductor_pi, conductor_pi_chi, conductor_rs,
                                   existence_routes, geometric_existence, matching_character,
                                   period_integral, predicted_integral, tunnell_epsilon,
                                   whole_torus_case)
from toric_periods.cuspidal import conductor_pi_table
from toric_periods.quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra
from toric_periods.quaternion import DIVISION, MATRIX


def problem_for(d, E, b=0, choice=0):
    return PeriodProblem(d, E, matching_character(E, central_omega(d), b=b, choice=choice))


def test_conductor_pi_examples():
    assert conductor_pi(case_datum(5, 1, 1)) == 4
    assert conductor_pi(case_datum(5, 3, 1)) == 3


@pytest.mark.parametrize("case", range(1, 7))
@pytest.mark.parametrize("n", [1, 2])
def test_conductor_table_agrees_with_norm(case, n):
    d = case_datum(5, case, n)
    assert conductor_pi(d) == conductor_pi_table(d)


def test_reference_conductor(reference):
    cr = conductor_rs(reference)
    assert (cr.c_rs, cr.l) == (8, 4)
    assert cr.norm_route == cr.case_route == 8


def test_conductor_for_other_torus(case1):
    E = QuadAlgebra(case1.ctx, RAMIFIED)
    for pr in character_family(case1, E):
        cr = conductor_rs(pr)
        assert cr.c_rs == 2 * max(case1.c_pi, conductor_pi_chi(E, pr.chi))


def test_tame_chi_conductor_independent_of_representative(case1):
    values = {conductor_rs(problem_for(case1, case1.L, 0, choice)).c_rs for choice in (0, 1)}
    assert values == {8}


def test_star_violation_is_reported(case1):
    pr = problem_for(case1, case1.L, case1.alpha.b.to_fraction())
    assert not pr.in_star_regime
    with pytest.raises(StarViolated):
        conductor_rs(pr)


def test_epsilon_inert_L_ramified_E(case1):
    E = QuadAlgebra(case1.ctx, RAMIFIED)
    eps = {tunnell_epsilon(pr) for pr in character_family(case1, E)}
    assert eps == {-1}


def test_epsilon_both_inert_even_conductors(case1):
    for pr in character_family(case1, case1.L):
        c1, c2 = pr.twisted_conductors
        if c1 % 2 == 0 and c2 % 2 == 0:
            assert tunnell_epsilon(pr) == 1


def test_split_torus_existence(case1):
    E = QuadAlgebra(case1.ctx, SPLIT)
    for pr in character_family(case1, E):
        assert geometric_existence(pr, MATRIX)
        assert not geometric_existence(pr, DIVISION)


@pytest.mark.parametrize("case", [1, 3, 4, 6])
def test_dichotomy_matches_epsilon(case):
    d = case_datum(5, case, 1)
    for E in torus_family(d):
        for pr in character_family(d, E):
            m_side = existence_routes(pr, MATRIX)
            d_side = existence_routes(pr, DIVISION)
            assert m_side[0] == m_side[1] and d_side[0] == d_side[1]
            assert m_side[0] != d_side[0]
            try:
                assert (tunnell_epsilon(pr) == 1) == m_side[0]
            except OutOfTableRange:
                pass


def test_whole_torus(case1):
    L = case1.L
    same = PeriodProblem(case1, L, case1.theta)
    report = whole_torus_case(same)
    assert report.match and report.support_measure == 1
    bar = PeriodProblem(case1, L, case1.theta.conjugate())
    report = whole_torus_case(bar, conjugate=True)
    assert report.match and report.support_measure == 1


def test_whole_torus_gate(reference):
    with pytest.raises(NotApplicable):
        whole_torus_case(reference)


def test_alignment_valuations(reference):
    info = align_torus(reference)
    assert info.v_norm_alpha_perp == -4
    c_pi, l = reference.datum.c_pi, conductor_rs(reference).l
    assert info.v_norm_alpha_perp == -(c_pi + l) // 2
    assert info.v_norm_beta_perp_shift == (c_pi - l) // 2


def test_reference_integral(reference):
    report = period_integral(reference)
    assert report.all_phases_zero and report.support_measure == Fraction(1, 6)
    assert abs(report.brute_value - 1 / 6) < 1e-9
    assert predicted_integral(reference).values == (Fraction(1, 6),)


def test_reference_integral_is_depth_stable(reference):
    align_torus(reference)
    report = brute_force_integral(reference, check_stability=True)
    assert report.support_measure == Fraction(1, 6)


def test_period_vanishes_without_test_vector(case1):
    E = QuadAlgebra(case1.ctx, RAMIFIED)
    for pr in character_family(case1, E):
        assert not geometric_existence(pr, MATRIX)
        report = period_integral(pr)
        assert abs(report.brute_value) < 1e-9


def test_ramified_case_prediction():
    d = case_datum(5, 3, 2)
    hits = 0
    for pr in character_family(d, d.L):
        if conductor_rs(pr).l == 5 and geometric_existence(pr, MATRIX):
            hits += 1
            assert predicted_integral(pr).values == (Fraction(1, 5),)
    assert hits


def test_two_valued_prediction():
    d = case_datum(5, 2, 1)
    seen = set()
    for pr in character_family(d, d.L):
        if geometric_existence(pr, MATRIX):
            pred = predicted_integral(pr)
            assert pred.l == 6
            assert set(pred.values) == {Fraction(1, 6), Fraction(1, 30)}
            report = period_integral(pr)
            seen.add(report.support_measure)
            assert report.support_measure in pred.values
    assert seen


@pytest.mark.parametrize("case", range(1, 7))
def test_vanishing_or_constant(case):
    d = case_datum(5, case, 1)
    for E in torus_family(d):
        for pr in character_family(d, E):
            try:
                report = period_integral(pr)
            except (NotApplicable, OutOfTableRange):
                continue
            if abs(report.brute_value) > 1e-9:
                assert report.all_phases_zero
                assert abs(report.brute_value - float(report.support_measure)) < 1e-9
            cr = conductor_rs(pr)
            assert cr.c_rs >= cr.c_pi_chi + 3


def test_split_support_stays_in_unit_shell(case1):
    from toric_periods.cuspidal import matrix_coefficient
    E = QuadAlgebra(case1.ctx, SPLIT)
    pr = next(iter(character_family(case1, E)))
    report = period_integral(pr)
    base = len(E.coset_reps(report.depth))
    extra = E.coset_reps(report.depth, shells=2)[base:]
    assert extra
    assert all(matrix_coefficient(case1, pr.embedding(c.elem)) is None for c in extra)
