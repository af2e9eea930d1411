from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toric_periods.errors import ZeroInput
from toric_periods.padic import (Context, PadicNumber, hilbert_symbol, is_square, pexp, plog,
                                 teichmuller)

C3 = Context(5, 3)
C8 = Context(5, 8)

units = st.integers(1, 5 ** 8 - 1).filter(lambda n: n % 5)
rationals = st.fractions(max_denominator=10 ** 4).filter(lambda x: x != 0)


def test_carry_into_valuation():
    s = PadicNumber(C3, 0, 2, 3) + PadicNumber(C3, 0, 3, 3)
    assert (s.val, s.unit % 5) == (1, 1)


def test_self_difference_is_zero():
    x = C3.element(Fraction(7, 5))
    assert (x - x).is_zero()


def test_half():
    h = C3.element(Fraction(1, 2))
    assert (h.val, h.unit) == (0, 63)


@pytest.mark.parametrize("n, expected", [(4, True), (2, False), (5, False)])
def test_is_square(n, expected):
    assert is_square(C3.element(n)) is expected


def test_is_square_rejects_zero():
    with pytest.raises(ZeroInput):
        is_square(C3.zero)


@pytest.mark.parametrize("a, b, expected", [(1, 7, 1), (1, 10, 1), (2, 5, -1), (5, 5, 1)])
def test_hilbert_examples(a, b, expected):
    assert hilbert_symbol(C3.element(a), C3.element(b)) == expected


def test_hilbert_by_search():
    # (a, b) = 1 iff a x^2 + b y^2 = z^2 has a primitive solution mod 5^3
    def solvable(a, b):
        mod = 125
        for x in range(mod):
            for y in range(mod):
                z2 = (a * x * x + b * y * y) % mod
                if (x % 5 or y % 5) and any((z * z - z2) % mod == 0 for z in range(mod)):
                    return True
        return False
    for a, b in [(2, 5), (5, 5), (3, 10)]:
        assert (hilbert_symbol(C3.element(a), C3.element(b)) == 1) == solvable(a, b)


def test_teichmuller():
    assert teichmuller(C3, 1) == C3.one
    w = teichmuller(C3, 2)
    assert w.unit == 57 and (w ** 4) == C3.one
    assert teichmuller(C3, 4) == C3.element(-1)


def test_log_examples():
    assert plog(C3.one).is_zero()
    y = plog(C3.element(6))
    assert (y.val, y.lift(3)) == (1, 55)


@given(units, units)
def test_round_trip_fraction(n, d):
    x = Fraction(n, d)
    assert C8.element(x) * C8.element(d) == C8.element(n)


@given(rationals, rationals)
def test_multiplication_matches_rationals(x, y):
    assert C8.element(x) * C8.element(y) == C8.element(x * y)
    assert (C8.element(x) * C8.element(y)).valuation == C8.element(x).valuation + C8.element(y).valuation


@given(rationals, rationals, rationals)
def test_hilbert_bilinear(a, b, c):
    a, b, c = (C8.element(v) for v in (a, b, c))
    assert hilbert_symbol(a * b, c) == hilbert_symbol(a, c) * hilbert_symbol(b, c)
    assert hilbert_symbol(a, b) == hilbert_symbol(b, a)


@given(st.integers(1, 4))
def test_teichmuller_is_root_of_unity(r):
    w = teichmuller(C8, r)
    assert w ** 4 == C8.one and w.residue() == r


@settings(max_examples=50)
@given(st.integers(0, 5 ** 6))
def test_exp_inverts_log(t):
    x = C8.element(1 + 5 * t)
    assert pexp(plog(x)) == x
