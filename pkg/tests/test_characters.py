from fractions import Fraction

from hypothesis import given, settings, strategies as st

from toric_periods.characters import MultCharSpec, Phase, char_is_minimal, conductor_of, psi_eval
from toric_periods.instances import trivial
from toric_periods.periods import matching_character

unit_pairs = st.tuples(st.integers(-300, 300), st.integers(-300, 300)).filter(
    lambda t: t[0] % 5 or t[1] % 5)


def test_psi_values(ctx5):
    assert psi_eval(ctx5.element(1)) == 0
    assert psi_eval(ctx5.element(Fraction(1, 5))) == Fraction(1, 5)
    assert psi_eval(ctx5.element(Fraction(7, 25))) == Fraction(7, 25)


def test_psi_K_conductors(inert5, ramified5):
    assert inert5.psi_conductor == 0
    assert ramified5.psi_conductor == -1


def test_theta_on_level_one(inert5):
    # alpha = p^-2 / sqrt(2) = sqrt(2) / 50
    theta = matching_character(inert5, trivial, b=Fraction(1, 50))
    assert theta(inert5.elem(1, 5)) == Phase(Fraction(2, 5))


def test_conductors(inert5):
    assert conductor_of(MultCharSpec(inert5)) == 0
    assert conductor_of(MultCharSpec(inert5, inert5.elem(0, Fraction(1, 25)))) == 2
    assert conductor_of(MultCharSpec(inert5, tame_exp=1)) == 1
    assert MultCharSpec(inert5)(inert5.elem(3, 7)).is_zero()


def test_minimality(inert5):
    assert char_is_minimal(MultCharSpec(inert5, inert5.elem(0, Fraction(1, 25))))
    assert not char_is_minimal(MultCharSpec(inert5, inert5.elem(Fraction(1, 25), Fraction(1, 5))))


@settings(max_examples=60)
@given(unit_pairs, unit_pairs)
def test_character_is_multiplicative(inert5, s, t):
    chi = MultCharSpec(inert5, inert5.elem(0, Fraction(3, 125)), tame_exp=5)
    x, y = inert5.elem(*s), inert5.elem(*t)
    assert chi(x) + chi(y) == chi(x * y)


@settings(max_examples=60)
@given(unit_pairs)
def test_conjugate_is_galois_twist(inert5, s):
    chi = MultCharSpec(inert5, inert5.elem(0, Fraction(2, 25)), tame_exp=3)
    x = inert5.elem(*s)
    assert chi.conjugate()(x) == chi(x.conj())
