from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toric_periods.appendix import appendix_model
from toric_periods.characters import MultCharSpec, Phase, psi_eval
from toric_periods.cuspidal import (APPENDIX, build_datum, formal_degree_closed_form,
                                    formal_degree_volume, in_J, intertwine_check,
                                    matrix_coefficient, orbit_trace, simple_char_eval,
                                    simple_char_linear, zb1_membership)
from toric_periods.errors import ConductorTooSmall, NotMinimal
from toric_periods.instances import case_datum, trivial
from toric_periods.padic import Context, teichmuller
from toric_periods.periods import conductor_pi
from toric_periods.quadratic import INERT, QuadAlgebra
from toric_periods.quaternion import DIVISION, MATRIX


@pytest.fixture(scope="module")
def spec_case1():
    """Case 1 at p = 5 with alpha = p^-2 / sqrt(2)."""
    from toric_periods.periods import matching_character
    L = QuadAlgebra(Context(5, 10), INERT)
    return build_datum(L, matching_character(L, trivial, b=Fraction(1, 50)), MATRIX)


@pytest.mark.parametrize("case, n, i, i_prime, dim, c_pi", [
    (1, 1, 1, 1, 1, 4),
    (2, 1, 1, 2, 5, 6),
    (5, 1, Fraction(3, 2), Fraction(3, 2), 1, 6),
])
def test_datum_table(case, n, i, i_prime, dim, c_pi):
    d = case_datum(5, case, n)
    assert (d.case, d.i, d.i_prime, d.dim_lambda, d.c_pi) == (case, i, i_prime, dim, c_pi)
    assert conductor_pi(d) == d.c_pi


def test_datum_rejections(ctx5, inert5):
    with pytest.raises(ConductorTooSmall):
        build_datum(inert5, MultCharSpec(inert5, tame_exp=1), MATRIX)
    with pytest.raises(NotMinimal):
        build_datum(inert5, MultCharSpec(inert5, inert5.elem(Fraction(1, 125), Fraction(1, 25))), MATRIX)


def test_simple_character_examples(spec_case1):
    d = spec_case1
    B, L = d.B, d.L
    assert simple_char_eval(d, L.one, B.perp(L.scalar(5))) == 0
    assert simple_char_eval(d, L.one, B.from_L(L.elem(0, 5))) == Phase(Fraction(2, 5))


def test_special_b1_in_case_2():
    d2 = appendix_model(case_datum(5, 2, 1))
    ctx, n, p = d2.ctx, d2.n, 5
    Dp = d2.L.D
    for b, c in [(5, 0), (0, 5), (10, 15), (25, 5)]:
        g = d2.B.from_matrix(((1, b), (c, 1)))
        expected = psi_eval(ctx.element(Fraction(1, p ** (2 * n + 1))) * (ctx.element(b) + ctx.element(c) / Dp))
        assert matrix_coefficient(d2, g) == expected


def test_zb1_examples(case1):
    d = case1
    B, L, ctx = d.B, d.L, d.ctx
    z, l, t = zb1_membership(d, B.scalar(7))
    assert z == 7 and l == L.one and t.is_zero()
    z, l, t = zb1_membership(d, B.one + B.perp(L.scalar(5)))
    assert z == 1 and l == L.one and t == B.perp(L.scalar(5))
    zeta = B.from_L(L.elem(0, 1) + L.scalar(teichmuller(ctx, 2)))
    assert zb1_membership(d, zeta) is None


def test_matrix_coefficient_examples(spec_case1):
    d = spec_case1
    B, L = d.B, d.L
    assert matrix_coefficient(d, B.one) == 0
    assert matrix_coefficient(d, B.one + B.perp(L.scalar(5))) == 0
    assert matrix_coefficient(d, B.from_L(L.elem(1, 5))) == Phase(Fraction(2, 5))


def test_intertwining(case1):
    d = case1
    B, L = d.B, d.L
    assert intertwine_check(d, B.from_L(L.elem(2, 3)))
    assert intertwine_check(d, B.one + B.perp(L.scalar(5)))
    ok, witness = intertwine_check(d, B.one + B.perp(L.scalar(2)), witness=True)
    assert not ok and witness is not None


def test_orbit_at_zero(case1):
    assert abs(orbit_trace(case1, case1.B.from_L(case1.L.zero)) - 1) < 1e-12


def test_orbit_vanishes_off_j0(case1):
    B, L = case1.B, case1.L
    assert abs(orbit_trace(case1, B.perp(L.elem(1, 2)))) < 1e-9


def test_formal_degree(case1):
    assert formal_degree_volume(case1) == formal_degree_closed_form(case1) == Fraction(1, 20)


small = st.integers(0, 124)


@settings(max_examples=40, deadline=None)
@given(small, small, small, small, small, small, small, small)
def test_phi_is_a_character_on_B1(a1, b1, c1, d1, a2, b2, c2, d2_):
    d = case_datum(5, 1, 1)
    B, L = d.B, d.L
    g = B.elem(L.elem(1 + 5 * a1, 5 * b1), L.elem(5 * c1, 5 * d1))
    h = B.elem(L.elem(1 + 5 * a2, 5 * b2), L.elem(5 * c2, 5 * d2_))
    assert matrix_coefficient(d, g * h) == matrix_coefficient(d, g) + matrix_coefficient(d, h)


@settings(max_examples=40, deadline=None)
@given(small, small, small, small)
def test_linear_formula_on_deep_elements(a, b, c, e):
    d = case_datum(5, 1, 1)
    B, L = d.B, d.L
    t = B.elem(L.elem(25 * a, 25 * b), L.elem(25 * c, 25 * e))
    assert simple_char_eval(d, L.one, t) == simple_char_linear(d, L.one, t)
