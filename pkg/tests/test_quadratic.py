from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toric_periods.quadratic import imaginary_part, norm_one_map

ints = st.integers(-200, 200)


def test_inert_norm(inert5):
    assert inert5.elem(1, 1).norm() == -1


def test_split_product(split5):
    x = split5.from_pair(1, 2) * split5.from_pair(3, 4)
    a, b = split5.to_pair(x)
    assert (a, b) == (3, 8)


def test_imaginary_part(inert5):
    assert imaginary_part(inert5.elem(3, 4)) == inert5.elem(0, 4)
    assert imaginary_part(inert5.scalar(7)).is_zero()


@pytest.mark.parametrize("a, b, expected", [(0, 1, True), (1, 5, False), (5, 1, True)])
def test_minimal_elements(inert5, a, b, expected):
    assert inert5.is_minimal_element(inert5.elem(a, b)) is expected


def test_filtration_volumes(inert5, ramified5):
    assert inert5.filtration_volume(1) == Fraction(1, 6)
    assert inert5.filtration_volume(2) == Fraction(1, 30)
    assert ramified5.filtration_volume(2) == Fraction(1, 25)


def test_filtration_volume_rejects_level_zero(inert5):
    with pytest.raises(ValueError):
        inert5.filtration_volume(0)


def test_coset_counts(inert5):
    cells = inert5.coset_reps(2)
    assert len(cells) == 30 and {c.weight for c in cells} == {Fraction(1, 30)}
    assert len(inert5.coset_reps(1)) == 6


@pytest.mark.parametrize("name", ["inert5", "ramified5", "split5"])
@pytest.mark.parametrize("M", [1, 2, 3])
def test_coset_weights_sum_to_total(request, name, M):
    K = request.getfixturevalue(name)
    assert sum(c.weight for c in K.coset_reps(M)) == K.total_volume()


def test_norm_one_examples(inert5):
    assert norm_one_map(inert5.scalar(3)) == inert5.one
    assert norm_one_map(inert5.elem(0, 1)) == -inert5.one


@given(ints, ints)
def test_norm_trace_identity(inert5, a, b):
    x = inert5.elem(a, b)
    if x.is_zero():
        return
    x0 = imaginary_part(x)
    half = x.trace() / 2
    assert x.norm() == half * half - (x0 * x0).a
    assert x.conj().conj() == x
    assert norm_one_map(x).norm() == 1


@given(ints, ints, ints, ints)
def test_norm_multiplicative(ramified5, a, b, c, d):
    x, y = ramified5.elem(a, b), ramified5.elem(c, d)
    assert (x * y).norm() == x.norm() * y.norm()
