"""Cuspidal data (L, theta, B): lattices, simple characters and minimal-vector matrix coefficients."""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import (
    BaseChar,
    MultCharSpec,
    Phase,
    ZERO_PHASE,
    char_is_minimal,
    psi_eval,
)
from .errors import (
    ConductorTooSmall,
    DepthInsufficient,
    NotMinimal,
    OutsideDomain,
    PrecisionTooLow,
)
from .quadratic import INERT, RAMIFIED, QuadAlgebra, QuadElem
from .quaternion import DIVISION, MATRIX, QuatAlgebra, QuatElem, matrix_det

DEFAULT, APPENDIX = "default", "appendix"

# (side, kind of L, parity of c(theta)) -> case index
_CASES = {
    (MATRIX, INERT, 0): 1,
    (MATRIX, INERT, 1): 2,
    (MATRIX, RAMIFIED, 0): 3,
    (DIVISION, INERT, 0): 4,
    (DIVISION, INERT, 1): 5,
    (DIVISION, RAMIFIED, 0): 6,
}


@dataclass
class CuspidalDatum:
    L: QuadAlgebra
    theta: MultCharSpec
    B: QuatAlgebra
    alpha: QuadElem
    c_theta: int
    n: int
    case: int
    i: Fraction
    i_prime: Fraction
    dim_lambda: int
    c_pi: int
    polarization: str = DEFAULT
    real_twist: BaseChar | None = field(default=None, repr=False)

    @property
    def ctx(self):
        return self.L.ctx

    @property
    def side(self) -> str:
        return self.B.side

    @property
    def q(self) -> int:
        return self.L.q

    @property
    def polarization_vector(self) -> QuadElem:
        return self.L.sqrt_D if self.polarization == APPENDIX else self.L.one

    @property
    def b1_shift(self) -> int:
        """k with pr(B^1) = p^k (lambda O_F + p O_L) j when dim Lambda = q."""
        return int(self.i - self.B.nu_j)

    def alpha_quat(self) -> QuatElem:
        return self.B.from_L(self.alpha)


def build_datum(L: QuadAlgebra, theta: MultCharSpec, side: str,
                polarization: str = DEFAULT, B: QuatAlgebra | None = None) -> CuspidalDatum:
    if not L.is_field:
        raise ValueError("L must be a field")
    if theta.algebra is not L:
        raise ValueError("theta must be a character of L")
    c = theta.conductor()
    if c <= 1:
        raise ConductorTooSmall("depth-zero data (c(theta) <= 1) are out of scope")
    if not char_is_minimal(theta):
        raise NotMinimal("theta is not minimal")
    if polarization not in (DEFAULT, APPENDIX):
        raise ValueError(f"unknown polarization {polarization!r}")
    if B is None:
        B = QuatAlgebra.standard(L, side)
    elif B.L is not L or B.side != side:
        raise ValueError("quaternion algebra does not match L and side")
    eps = B.eps
    i = Fraction((c - eps) // 2) + Fraction(eps, 2)
    i_prime = Fraction(-((eps - c) // 2)) + Fraction(eps, 2)
    case = _CASES.get((side, L.kind, c % 2))
    if case is None:
        raise NotMinimal(f"no minimal datum with c(theta) = {c} for {L.kind} L")
    n = c // 2
    c_pi = 2 * c if L.kind == INERT else c + 1
    if L.ctx.N < c_pi + 4:
        raise PrecisionTooLow(f"precision {L.ctx.N} < c(pi) + 4 = {c_pi + 4}")
    alpha = theta.alpha
    real_twist = None
    if not alpha.a.is_zero():
        # theta = theta_0 * (mu o Nm) with theta_0 imaginary; on B this is mu o Nrd
        real_twist = BaseChar(L.ctx, alpha=alpha.a)
    return CuspidalDatum(
        L=L, theta=theta, B=B, alpha=alpha, c_theta=c, n=n, case=case,
        i=i, i_prime=i_prime, dim_lambda=L.q if i_prime != i else 1,
        c_pi=c_pi, polarization=polarization, real_twist=real_twist,
    )


def conductor_pi_table(d: CuspidalDatum) -> int:
    n = d.n
    return {1: 4 * n, 2: 4 * n + 2, 3: 2 * n + 1, 4: 4 * n, 5: 4 * n + 2, 6: 2 * n + 1}[d.case]


# -- characters on L and on B ---------------------------------------------------------

def theta_B(d: CuspidalDatum, x: QuadElem) -> Phase:
    """theta, twisted by the sign on the uniformizer for a ramified L inside the division algebra."""
    phase = d.theta(x)
    if d.side == DIVISION and d.L.kind == RAMIFIED:
        phase = phase + Phase(Fraction(d.L.valuation(x), 2))
    return phase


def _real_twist_phase(d: CuspidalDatum, g: QuatElem, x: QuadElem) -> Phase:
    if d.real_twist is None:
        return ZERO_PHASE
    return d.real_twist(g.norm() / x.norm())


def _canonical_phase(d: CuspidalDatum, g: QuatElem) -> Phase:
    """Phase of x(1 + x^-1 y j): theta^B on x, trivial on the L-perp factor."""
    return theta_B(d, g.x) + _real_twist_phase(d, g, g.x)


def _perp_offset_ok(d: CuspidalDatum, w: QuadElem, polarized: bool) -> bool:
    """Is (w j) in pr(J) (polarized=False) or in pr(B^1) (polarized=True)?"""
    if w.is_zero():
        return True
    if d.B.nu(d.B.perp(w)) < d.i:
        return False
    if not polarized or d.dim_lambda == 1:
        return True
    k = d.b1_shift
    scaled = w / d.ctx.power_of_p(k)
    if d.L.valuation(scaled) < 0:
        return False
    # residue of scaled must lie on the F_p-line of lambda
    a_res = scaled.a.lift(1) if scaled.a.valuation >= 0 else None
    b_res = scaled.b.lift(1) if scaled.b.valuation >= 0 else None
    if d.polarization == APPENDIX:
        return a_res == 0
    return b_res == 0


def _central_split(d: CuspidalDatum, x: QuadElem):
    """x = z l with z in F^x, l in U_L(1); None when x is outside F^x U_L(1)."""
    if x.a.is_zero():
        return None
    if d.L.kind == INERT:
        if not x.b.is_zero() and x.b.valuation <= x.a.valuation:
            return None
    else:
        if not x.b.is_zero() and x.b.valuation < x.a.valuation:
            return None
    z = x.a
    return z, x / z


def zb1_membership(d: CuspidalDatum, g: QuatElem):
    """(z, l, t) with g = z l (1 + t), z central, l in U_L(1), t in pr(B^1); None outside Z B^1."""
    if g.x.is_zero():
        return None
    split = _central_split(d, g.x)
    if split is None:
        return None
    w = g.y / g.x
    if not _perp_offset_ok(d, w, polarized=True):
        return None
    z, l = split
    return z, l, d.B.perp(w)


def in_J(d: CuspidalDatum, g: QuatElem) -> bool:
    """J = L^x (1 + B^i)."""
    if g.x.is_zero():
        return False
    return _perp_offset_ok(d, g.y / g.x, polarized=False)


def in_ZJ1(d: CuspidalDatum, g: QuatElem) -> bool:
    return in_J(d, g) and _central_split(d, g.x) is not None


def in_H1(d: CuspidalDatum, g: QuatElem) -> bool:
    """H^1 = U_L(1)(1 + B^{i'})."""
    if g.x.is_zero() or not d.L.in_unit_filtration(g.x, 1):
        return False
    w = g.y / g.x
    return w.is_zero() or d.B.nu(d.B.perp(w)) >= d.i_prime


def simple_char_eval(d: CuspidalDatum, l: QuadElem, t: QuatElem) -> Phase:
    """theta~(l(1+t)) computed through the canonical factorization of 1 + t.

    Requires 1 + t in B^1 (elements of ZB^1 with trivial central part).
    """
    h = d.B.one + t
    parts = zb1_membership(d, h)
    if parts is None or not d.L.in_unit_filtration(h.x, 1):
        raise OutsideDomain("1 + t is not in B^1")
    return theta_B(d, l) + _canonical_phase(d, h)


def simple_char_linear(d: CuspidalDatum, l: QuadElem, t: QuatElem) -> Phase:
    """theta(l) psi(Tr(alpha t)), valid for 1 + t in K_A(i')."""
    if not t.is_zero() and d.B.nu(t) < d.i_prime:
        raise OutsideDomain("t is not in B^{i'}")
    return theta_B(d, l) + psi_eval((d.alpha_quat() * t).trace())


def matrix_coefficient(d: CuspidalDatum, g: QuatElem) -> Phase | None:
    """Phi(g) for the type 1 minimal vector with Phi(1) = 1; None where Phi vanishes.

    For dim Lambda = q the value is modelled on Z J^1 only (zero there off
    Z B^1); elements of J outside Z J^1 raise OutsideDomain.
    """
    if not in_J(d, g):
        return None
    if d.dim_lambda == 1:
        return _canonical_phase(d, g)
    if _central_split(d, g.x) is None:
        raise OutsideDomain("Phi on J outside Z J^1 needs the full Heisenberg model")
    if zb1_membership(d, g) is None:
        return None
    return _canonical_phase(d, g)


def matrix_coefficient_complex(d: CuspidalDatum, g: QuatElem) -> complex:
    ph = matrix_coefficient(d, g)
    return 0j if ph is None else ph.to_complex()


# -- intertwining ------------------------------------------------------------------------

def _h1_generators(d: CuspidalDatum):
    """Elements 1 + p^k e generating H^1 modulo K_A(c(theta)), e in {1, sqrt D, j, sqrt D j}."""
    L, B = d.L, d.B
    top = d.c_theta + 1
    gens = []
    for k in range(1, top + 1):
        s = L.uniformizer_power(k)
        for e in (L.one, L.sqrt_D):
            gens.append(B.from_L(L.one + s * e))
    for k in range(0, top + 1):
        s = L.uniformizer_power(k)
        for e in (L.one, L.sqrt_D):
            t = B.perp(s * e)
            if B.nu(t) >= d.i_prime:
                gens.append(B.one + t)
    return gens


def intertwine_check(d: CuspidalDatum, g: QuatElem, witness: bool = False):
    """Does g intertwine theta~ on the generators of H^1 that g conjugates into H^1?

    Elements of the form h * h' for two generators are scanned as well.
    """
    gi = g.inverse()
    base = _h1_generators(d)
    pool = base + [a * b for a, b in itertools.combinations(base, 2)]
    for h in pool:
        hc = gi * h * g
        if not in_H1(d, hc):
            continue
        if _canonical_phase(d, hc) != _canonical_phase(d, h):
            return (False, h) if witness else False
    return (True, None) if witness else True


# -- orbit integrals ---------------------------------------------------------------------

def quat_exp(x: QuatElem, terms: int | None = None) -> QuatElem:
    """exp(x) by its series; needs nu(x) > 0."""
    B = x.B
    if x.is_zero():
        return B.one
    v = B.semi_valuation(x)
    if v <= 0:
        raise OutsideDomain("exp needs nu(x) > 0")
    p = B.ctx.p
    target = B.ctx.N * B.L.e
    total = B.one
    power = B.one
    n = 1
    while True:
        power = power * x / n
        total = total + power
        n += 1
        # v_p(n!) <= (n-1)/(p-1), in L-units times e
        if n * v - Fraction(B.L.e * (n - 1), p - 1) > target or (terms and n > terms):
            break
    return total


def _perp_lattice_cells(d: CuspidalDatum, R: int, group: str):
    """Representatives w of the L-perp lattice of J (group='J') or B^1 (group='B1') modulo p^R O_L."""
    L, ctx = d.L, d.ctx
    p = ctx.p
    k0 = d.i - d.B.nu_j  # v_L(w) >= k0
    if group == "B1" and d.dim_lambda != 1:
        k = d.b1_shift
        lam = d.polarization_vector
        for s in range(p ** max(R - k, 0)):
            for r0 in range(p ** max(R - k - 1, 0)):
                for r1 in range(p ** max(R - k - 1, 0)):
                    w = (lam * s + L.elem(r0, r1) * p) * ctx.power_of_p(k)
                    yield w
        return
    # {w : v_L(w) >= k0}; L-units of the uniformizer
    e = L.e
    kL = math.ceil(k0)
    RL = e * R
    if L.kind == INERT:
        for a in range(0, p ** R, p ** kL) if kL > 0 else range(p ** R):
            for b in range(0, p ** R, p ** kL) if kL > 0 else range(p ** R):
                yield L.elem(a, b)
        return
    # ramified: w = a + b sqrt D, v_L = min(2 v(a), 2 v(b) + 1)
    ka = math.ceil(Fraction(kL, 2))
    kb = math.ceil(Fraction(kL - 1, 2))
    Ra = math.ceil(Fraction(RL, 2))
    Rb = math.ceil(Fraction(RL - 1, 2))
    for a in range(0, p ** Ra, p ** max(ka, 0)):
        for b in range(0, p ** Rb, p ** max(kb, 0)):
            yield L.elem(a, b)


def _orbit_sum(d: CuspidalDatum, x: QuatElem, R: int, group: str) -> complex:
    B = d.B
    alpha = d.alpha_quat()
    total = 0j
    count = 0
    for w in _perp_lattice_cells(d, R, group):
        g0 = B.one + B.perp(w)
        conj = g0.inverse() * alpha * g0
        total += psi_eval(B.pairing(conj, x)).to_complex()
        count += 1
    volume = d.dim_lambda if group == "J" else 1
    return total * volume / count


def orbit_depth(d: CuspidalDatum, x: QuatElem) -> int:
    """A depth R at which the orbit integrand is constant on cells w + p^R O_L."""
    nu = d.B.nu(x)
    lowest = 0 if nu == float("inf") else math.floor(min(nu, 0))
    return int(math.ceil(Fraction(d.c_theta, d.L.e))) - lowest + 1


def orbit_trace(d: CuspidalDatum, x: QuatElem, group: str = "J", depth: int | None = None,
                check: bool = False) -> complex:
    """Integral of psi<g^-1 alpha g, x> over the stabilizer quotient of J (or U_L(1)\\B^1).

    The measure gives total volume dim Lambda on J and 1 on B^1.
    """
    if group not in ("J", "B1"):
        raise ValueError("group must be 'J' or 'B1'")
    R = orbit_depth(d, x) if depth is None else depth
    value = _orbit_sum(d, x, R, group)
    if check:
        finer = _orbit_sum(d, x, R + 1, group)
        if abs(finer - value) > 1e-9:
            raise DepthInsufficient(f"orbit sum changes between depth {R} and {R + 1}")
    return value


def in_g_plus(x: QuatElem) -> bool:
    return x.trace().valuation > 0 and x.norm().valuation > 0


def in_j0(d: CuspidalDatum, x: QuatElem) -> bool:
    """log J^1 = {v_L(x_L) > 0, nu(x_perp) >= i}."""
    B = d.B
    if not x.x.is_zero() and d.L.valuation(x.x) <= 0:
        return False
    return x.y.is_zero() or B.nu(B.perp(x.y)) >= d.i


def in_log_H1(d: CuspidalDatum, x: QuatElem) -> bool:
    B = d.B
    if not x.x.is_zero() and d.L.valuation(x.x) <= 0:
        return False
    return x.y.is_zero() or B.nu(B.perp(x.y)) >= d.i_prime


# -- formal degree -----------------------------------------------------------------------

def formal_degree_closed_form(d: CuspidalDatum) -> Fraction:
    """Vol(Z \\ J) under Vol(Z \\ ZK) = 1 (matrix side, dim Lambda = 1)."""
    q = Fraction(d.q)
    if d.L.kind == INERT:
        return 1 / ((1 - 1 / q) * q ** (2 * d.n))
    return 2 / ((1 - q ** -2) * q ** (d.n + 1))


def _congruence_level(d: CuspidalDatum) -> int:
    """Smallest m with 1 + p^m M_2(Z_p) inside J."""
    ctx = d.ctx
    m = 1
    while True:
        pm = ctx.power_of_p(m)
        zero = ctx.zero
        ok = True
        for (r, c) in ((0, 0), (0, 1), (1, 0), (1, 1)):
            entries = [[zero, zero], [zero, zero]]
            entries[r][c] = pm
            mat = ((ctx.one + entries[0][0], entries[0][1]), (entries[1][0], ctx.one + entries[1][1]))
            if not in_J(d, d.B.from_matrix(mat)):
                ok = False
                break
        if ok:
            return m
        m += 1


def formal_degree_volume(d: CuspidalDatum) -> Fraction:
    """Integral of |Phi|^2 over Z \\ GL_2 by counting J inside GL_2(Z/p^m)."""
    if d.side != MATRIX:
        raise ValueError("the count runs in GL_2")
    if d.dim_lambda != 1:
        raise OutsideDomain("|Phi| off Z J^1 needs the full Heisenberg model")
    ctx = d.ctx
    p = ctx.p
    m = _congruence_level(d)
    mod = p ** m
    hits = 0
    total = 0
    for a, b, c, e in itertools.product(range(mod), repeat=4):
        if (a * e - b * c) % p == 0:
            continue
        total += 1
        mat = ((ctx.element(a), ctx.element(b)), (ctx.element(c), ctx.element(e)))
        if in_J(d, d.B.from_matrix(mat)):
            hits += 1
    cosets = 2 if d.L.kind == RAMIFIED else 1
    return Fraction(cosets * hits, total)


def complex_close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    return cmath.isclose(a, b, abs_tol=tol)
