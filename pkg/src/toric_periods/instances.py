"""Reference representations, tori and character families used by sweeps, the CLI and the tests."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .characters import ZERO_PHASE
from .cuspidal import CuspidalDatum, build_datum, theta_B
from .errors import CentralMismatch
from .padic import Context
from .periods import PeriodProblem, matching_character
from .quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra
from .quaternion import DIVISION, MATRIX

# case -> (side, kind of L, parity of c(theta))
CASES = {
    1: (MATRIX, INERT, 0),
    2: (MATRIX, INERT, 1),
    3: (MATRIX, RAMIFIED, 0),
    4: (DIVISION, INERT, 0),
    5: (DIVISION, INERT, 1),
    6: (DIVISION, RAMIFIED, 0),
}


def trivial(_x):
    return ZERO_PHASE


def alpha_b(K: QuadAlgebra, c: int, r: int = 1) -> Fraction:
    """Imaginary coefficient r / p^k giving a minimal character of conductor c on K.

    Ramified K needs c even; c <= 1 is represented by b = 0.
    """
    p = K.ctx.p
    if c <= (0 if K.kind == SPLIT else 1):
        return Fraction(0)
    if K.kind == RAMIFIED:
        if c % 2:
            raise ValueError("minimal characters of a ramified field have even conductor")
        return Fraction(r, p ** (c // 2 + 1))
    return Fraction(r, p ** c)


def case_datum(p: int, case: int, n: int, D_L=None, precision: int | None = None,
               r: int = 1) -> CuspidalDatum:
    """The type of the given case with c(theta) = 2n + parity and trivial central character."""
    side, kind, parity = CASES[case]
    ctx = Context(p, precision or 4 * n + 8)
    L = QuadAlgebra(ctx, kind, D_L)
    theta = matching_character(L, trivial, b=alpha_b(L, 2 * n + parity, r))
    return build_datum(L, theta, side)


def torus_family(d: CuspidalDatum, split: bool = True) -> list[QuadAlgebra]:
    """One algebra per isomorphism class of E: inert, both ramified, split; L itself when E is L."""
    ctx = d.ctx
    out = [QuadAlgebra(ctx, INERT), QuadAlgebra(ctx, RAMIFIED),
           QuadAlgebra(ctx, RAMIFIED, ctx.nonsquare_unit() * ctx.p)]
    if split:
        out.append(QuadAlgebra(ctx, SPLIT))
    return [d.L if E.is_field and E.isomorphic(d.L) else E for E in out]


def central_omega(d: CuspidalDatum):
    return lambda x: theta_B(d, d.L.scalar(x))


def character_family(d: CuspidalDatum, E: QuadAlgebra, c_max: int | None = None,
                     star_only: bool = True) -> Iterator[PeriodProblem]:
    """Characters of E with central character matching pi, one per (c(chi), leading digit, choice)."""
    p = d.ctx.p
    omega = central_omega(d)
    top = d.c_theta if c_max is None else c_max
    for c_chi in range(0, top + 1):
        if E.kind == RAMIFIED and c_chi % 2:
            continue
        for r in range(1, p):
            b = alpha_b(E, c_chi, r)
            if b == 0 and r > 1:
                continue
            for choice in (0, 1):
                try:
                    chi = matching_character(E, omega, b=b, choice=choice)
                    problem = PeriodProblem(d, E, chi)
                except CentralMismatch:
                    continue
                if star_only and not problem.in_star_regime:
                    continue
                yield problem


def case_problems(p: int, case: int, n: int, D_L=None, split: bool = True) -> Iterator[PeriodProblem]:
    d = case_datum(p, case, n, D_L)
    for E in torus_family(d, split=split):
        yield from character_family(d, E)


def reference_problem(p: int = 5) -> PeriodProblem:
    """Case 1, n = 1, E = L, c(chi) = 2: the instance with l = 4 and period 1/6 at p = 5."""
    d = case_datum(p, 1, 1)
    chi = matching_character(d.L, central_omega(d), b=Fraction(2, p ** 2))
    return PeriodProblem(d, d.L, chi)
