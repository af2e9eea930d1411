from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toric_periods.errors import NoSolution, WeightViolation
from toric_periods.instances import case_datum, central_omega
from toric_periods.orbital import (TestFunction as KernelFunction, archimedean_orbital, archimedean_orbital_constant_term,
                                   archimedean_orbital_exact, b1_volume_closed_form,
                                   b1_volume_count, orbital_xi, orbital_zero, x_for_xi, xi_of)
from toric_periods.periods import PeriodProblem, matching_character, period_integral


@pytest.fixture(scope="module")
def setting():
    d = case_datum(5, 1, 1, precision=16)
    tf = KernelFunction(d)
    problems = {}
    for name, b in (("disjoint", 0), ("reference", Fraction(2, 25)), ("joint", Fraction(1, 125))):
        pr = PeriodProblem(d, d.L, matching_character(d.L, central_omega(d), b=b))
        problems[name] = (pr, period_integral(pr))
    return d, tf, problems


def test_normalization(setting):
    d, tf, _ = setting
    assert b1_volume_count(d) == b1_volume_closed_form(d) == Fraction(1, 120)
    assert tf.normalization == 120
    assert tf(d.B.one) == 120


def test_zero_orbit_is_normalized_period(setting):
    _, tf, problems = setting
    for pr, report in problems.values():
        assert abs(orbital_zero(tf, pr) - 120 * report.brute_value) < 1e-9


def test_disjoint_vanishing(setting):
    _, tf, problems = setting
    pr, _ = problems["disjoint"]
    for xi in (Fraction(2), Fraction(3), Fraction(-1), Fraction(7, 5), Fraction(2, 25)):
        try:
            x = x_for_xi(pr.embedding, xi)
        except NoSolution:
            continue
        assert abs(orbital_xi(tf, pr, x).value) < 1e-9


def test_factored_matches_brute(setting):
    _, tf, problems = setting
    for name in ("disjoint", "reference"):
        pr, _ = problems[name]
        L = pr.E
        for k in (0, 1):
            for a, b in ((1, 0), (1, 1), (2, 1)):
                x = L.elem(Fraction(a) * 5 ** k, Fraction(b) * 5 ** k)
                fast = orbital_xi(tf, pr, x, method="factored").value
                slow = orbital_xi(tf, pr, x, method="brute", depth=3).value
                assert abs(fast - slow) < 1e-9


def test_joint_envelope_and_far_vanishing(setting):
    _, tf, problems = setting
    pr, _ = problems["joint"]
    constants = []
    for d_val, u in ((0, 2), (0, 7), (1, 1), (6, 2), (7, 3)):
        try:
            x = x_for_xi(pr.embedding, 1 - Fraction(u) * 5 ** d_val)
        except NoSolution:
            continue
        r = orbital_xi(tf, pr, x)
        assert r.d == d_val and r.m == 2
        if d_val > r.m + 3:
            assert abs(r.value) < 1e-9
        if r.measured_constant is not None:
            constants.append(r.measured_constant)
    assert constants and all(abs(c) <= 3 for c in constants)


def test_singular_xi_rejected(setting):
    _, tf, problems = setting
    pr, _ = problems["joint"]
    x = x_for_xi(pr.embedding, 1)
    with pytest.raises(ValueError):
        orbital_xi(tf, pr, x)


@settings(max_examples=8, deadline=None)
@given(st.integers(1, 124).filter(lambda u: u % 5), st.integers(0, 3))
def test_depends_only_on_xi(setting, u, k):
    _, tf, problems = setting
    pr, _ = problems["disjoint"]
    E, emb = pr.E, pr.embedding
    x = E.elem(u, 5 ** k)
    # x * e with Nm(e) = 1 gives the same xi
    e = E.elem(3, 1) / E.elem(3, -1)
    assert xi_of(emb, x) == xi_of(emb, x * e)
    a = orbital_xi(tf, pr, x).value
    b = orbital_xi(tf, pr, x * e).value
    assert abs(a - b) < 1e-9


def test_archimedean_examples():
    assert archimedean_orbital(2, 1, -1.0) == pytest.approx(0.5)
    assert archimedean_orbital_exact(3, 1, -1) == 1
    with pytest.raises(WeightViolation):
        archimedean_orbital(2, 2, -1.0)
    with pytest.raises(WeightViolation):
        archimedean_orbital(3, 1, 0.5)


@given(st.integers(2, 8), st.integers(1, 7), st.fractions(max_denominator=50).filter(lambda x: x < 0))
def test_archimedean_symmetry(k, m, xi):
    if m >= k:
        return
    assert archimedean_orbital_exact(k, m, xi) == archimedean_orbital_exact(k, -m, xi)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(-5, 5), st.fractions(max_denominator=20).filter(lambda x: x < 0))
def test_archimedean_constant_term(k, m, xi):
    if not (k > abs(m) >= 1):
        return
    assert archimedean_orbital_exact(k, m, xi) == archimedean_orbital_constant_term(k, m, xi)
