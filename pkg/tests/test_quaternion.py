from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toric_periods.errors import NoEmbedding
from toric_periods.padic import Context
from toric_periods.quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra
from toric_periods.quaternion import (DIVISION, MATRIX, QuatAlgebra, decompose_relative,
                                      embed_second_torus, matrix_det, solve_norm)

CTX = Context(5, 10)
L = QuadAlgebra(CTX, INERT)
BM = QuatAlgebra.standard(L, MATRIX)
BD = QuatAlgebra.standard(L, DIVISION)

coords = st.integers(-60, 60)
quats = st.tuples(coords, coords, coords, coords).filter(any)


def q(B, a, b, c, d):
    return B.elem(L.elem(a, b), L.elem(c, d))


def test_nu_of_j():
    assert BM.nu(BM.j) == 0
    assert BD.nu(BD.j) == Fraction(1, 2)


def test_nu_on_L():
    for a, b in [(5, 0), (1, 25), (0, 125)]:
        x = L.elem(a, b)
        assert BM.nu(BM.from_L(x)) == L.valuation(x)


def test_unit_filtration():
    for n in range(1, 5):
        assert BM.in_subgroup(BM.one, n)
    assert BM.in_subgroup(BM.one + BM.perp(L.scalar(5)), 1)
    assert not BM.in_subgroup(BM.one + BM.perp(L.scalar(1)), 1)


def test_dual_lattice_phases():
    from toric_periods.characters import psi_eval
    basis = [BM.from_L(L.one), BM.from_L(L.sqrt_D), BM.j, BM.perp(L.sqrt_D)]
    for n in range(-2, 3):
        lattice = [b * CTX.power_of_p(n) for b in basis]
        dual = [b * CTX.power_of_p(-n) for b in basis]
        assert all(psi_eval(BM.pairing(x, y)).is_zero() for x in lattice for y in dual)
        lower = [b * CTX.power_of_p(-n - 1) for b in basis]
        assert any(not psi_eval(BM.pairing(x, y)).is_zero() for x in lattice for y in lower)


def test_orthogonal_decomposition():
    g = BM.from_L(L.elem(3, 4))
    x, y = BM.orthogonal_decompose(g)
    assert x == g and y.is_zero()
    alpha, t, l = L.elem(0, 1), L.elem(2, 7), L.elem(5, 3)
    A, T = BM.from_L(alpha), BM.perp(t)
    assert ((A * T - T * A) * BM.from_L(l)).trace().is_zero()


def test_relative_decomposition():
    E = QuadAlgebra(CTX, RAMIFIED)
    emb = embed_second_torus(E, BM)
    g = emb(E.elem(2, 3))
    part, rest = emb.decompose_relative(g)
    assert part == g and rest.is_zero()
    part, rest = emb.decompose_relative(emb.j_E)
    assert part.is_zero() and rest == emb.j_E


def test_embedding_of_L_stays_in_L():
    emb = embed_second_torus(L, BM)
    assert emb.beta.y.is_zero() and emb.beta * emb.beta == BM.scalar(L.D)


def test_ramified_embedding():
    E = QuadAlgebra(CTX, RAMIFIED, 5)
    emb = embed_second_torus(E, BM)
    assert emb.beta * emb.beta == BM.scalar(5)
    assert emb.beta.trace().is_zero()
    # the s = 1 branch: Nm(l1) = 5 - 2 = 3, with 6 + 2 sqrt 2 a solution mod 25
    assert (L.elem(6, 2).norm().lift(2) - 3) % 25 == 0
    assert solve_norm(L, CTX.element(3)).norm() == 3


def test_split_torus_misses_division_algebra():
    with pytest.raises(NoEmbedding):
        embed_second_torus(QuadAlgebra(CTX, SPLIT), BD)


def test_matrix_model_examples():
    one = BM.matrix_model(BM.one)
    assert one == ((1, 0), (0, 1))
    s = BM.matrix_model(BM.from_L(L.sqrt_D))
    assert s == ((0, 1), (L.D, 0))


@given(quats)
def test_reduced_norm(t):
    for B in (BM, BD):
        g = q(B, *t)
        assert g.norm() == g.x.norm() - B.gamma * g.y.norm()


@given(quats)
def test_matrix_model_is_faithful(t):
    g = q(BM, *t)
    m = BM.matrix_model(g)
    assert matrix_det(m) == g.norm()
    assert m[0][0] + m[1][1] == g.trace()
    assert BM.from_matrix(m) == g


@settings(max_examples=60)
@given(quats, quats)
def test_matrix_model_multiplicative(s, t):
    from toric_periods.quaternion import matrix_mul
    g, h = q(BM, *s), q(BM, *t)
    assert BM.matrix_model(g * h) == matrix_mul(BM.matrix_model(g), BM.matrix_model(h))


@settings(max_examples=200)
@given(quats, quats)
def test_semi_valuation_axioms(s, t):
    for B in (BM, BD):
        g, h = q(B, *s), q(B, *t)
        assert B.nu(g * h) >= B.nu(g) + B.nu(h)
        assert B.nu(g + h) >= min(B.nu(g), B.nu(h))
        x, y = B.perp(g.y), B.perp(h.y)
        if not (x.is_zero() or y.is_zero()):
            assert B.nu(x * y) == B.nu(x) + B.nu(y)


@given(coords, coords)
def test_commutator_valuation(c, d):
    t = L.elem(c, d)
    if t.is_zero():
        return
    alpha = L.elem(0, 25)
    A, T = BM.from_L(alpha), BM.perp(t)
    assert BM.nu(A * T - T * A) == L.valuation(alpha) + BM.nu(T)
