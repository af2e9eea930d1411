"""Local orbital integrals of the relative trace formula for the minimal-vector test function."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .cuspidal import (CuspidalDatum, _central_split, formal_degree_closed_form, matrix_coefficient,
                       zb1_membership)
from .errors import DepthExceedsPrecision, DepthUnstable, NoSolution, NotApplicable, WeightViolation
from .padic import PadicNumber
from .periods import PeriodProblem, conductor_pi_chi, required_depth
from .quadratic import INERT, RAMIFIED, QuadElem, norm_one_map
from .quaternion import MATRIX, QuatElem, TorusEmbedding, norm_is_solvable, solve_norm


# -- the test function -----------------------------------------------------------------------

def in_ZB1(d: CuspidalDatum, g: QuatElem) -> bool:
    return zb1_membership(d, g) is not None


def b1_volume_closed_form(d: CuspidalDatum) -> Fraction:
    """Vol(Z \\ Z J^1) = Vol(Z \\ J) / [J : Z J^1] (matrix side, dim Lambda = 1)."""
    if d.side != MATRIX or d.dim_lambda != 1:
        raise NotApplicable("closed form covers the matrix side with dim Lambda = 1")
    index = d.q + 1 if d.L.kind == INERT else 2
    return formal_degree_closed_form(d) / index


def _b1_level(d: CuspidalDatum) -> int:
    ctx = d.ctx
    m = 1
    while True:
        pm = ctx.power_of_p(m)
        ok = True
        for r, c in itertools.product((0, 1), repeat=2):
            entries = [[ctx.one, ctx.zero], [ctx.zero, ctx.one]]
            entries[r][c] = entries[r][c] + pm
            mat = tuple(tuple(row) for row in entries)
            if not in_ZB1(d, d.B.from_matrix(mat)):
                ok = False
                break
        if ok:
            return m
        m += 1


def b1_volume_count(d: CuspidalDatum) -> Fraction:
    """Vol(Z \\ Z B^1) under Vol(Z \\ Z GL_2(O)) = 1, by counting O_F^x B^1 inside GL_2(Z/p^m)."""
    if d.side != MATRIX:
        raise NotApplicable("the count runs in GL_2")
    ctx = d.ctx
    p = ctx.p
    m = _b1_level(d)
    mod = p ** m
    hits = total = 0
    for a, b, c, e in itertools.product(range(mod), repeat=4):
        if (a * e - b * c) % p == 0:
            continue
        total += 1
        mat = ((ctx.element(a), ctx.element(b)), (ctx.element(c), ctx.element(e)))
        if in_ZB1(d, d.B.from_matrix(mat)):
            hits += 1
    return Fraction(hits, total)


@dataclass
class TestFunction:
    """f = Phi / Vol(Z \\ Z B^1) on Z B^1, zero elsewhere.

    Phi is used without conjugation so that the torus integral of f against
    chi^-1 is the normalized period of the type 1 minimal vector.
    """
    datum: CuspidalDatum
    normalization: Fraction = field(init=False)

    def __post_init__(self):
        d = self.datum
        vol = b1_volume_closed_form(d) if d.dim_lambda == 1 else b1_volume_count(d)
        self.normalization = 1 / vol

    def phase(self, g: QuatElem):
        """Phase of f(g), or None off Z B^1."""
        if not in_ZB1(self.datum, g):
            return None
        return matrix_coefficient(self.datum, g)

    def __call__(self, g: QuatElem) -> complex:
        ph = self.phase(g)
        return 0j if ph is None else float(self.normalization) * ph.to_complex()


# -- p-adic orbital integrals ------------------------------------------------------------------

def orbital_zero(tf: TestFunction, problem: PeriodProblem, depth: int | None = None,
                 check_stability: bool = False) -> complex:
    """I(0, f): the integral of f(t) chi^-1(t) over F^x \\ E^x, through the problem's embedding."""
    emb = problem.embedding
    if emb is None:
        raise ValueError("problem has no embedding")
    M = required_depth(problem, emb) if depth is None else depth

    def total(M):
        s = 0j
        for cell in problem.E.coset_reps(M):
            ph = tf.phase(emb(cell.elem))
            if ph is None:
                continue
            s += float(cell.weight) * (ph - problem.chi(cell.elem)).to_complex()
        return s * float(tf.normalization)

    value = total(M)
    if check_stability and abs(total(M + 1) - value) > 1e-10:
        raise DepthUnstable("I(0, f) changes with depth")
    return value


@dataclass
class OrbitalResult:
    xi: PadicNumber
    value: complex
    depth: int
    d: int | None = None
    m: int | None = None
    envelope_exponent: Fraction | None = None
    measured_constant: float | None = None


def xi_of(emb: TorusEmbedding, x: QuadElem) -> PadicNumber:
    """xi = -Nrd(j_E x)."""
    return -(emb.j_E * emb(x)).norm()


def x_for_xi(emb: TorusEmbedding, xi) -> QuadElem:
    """Some x in E with -Nrd(j_E x) = xi."""
    xi = emb.B.ctx.element(xi)
    target = -(xi / emb.j_E.norm())
    if not norm_is_solvable(emb.E, target):
        raise NoSolution("xi is not attained by this embedding")
    return solve_norm(emb.E, target)


def orbital_xi(tf: TestFunction, problem: PeriodProblem, x: QuadElem, method: str = "auto",
               depth: int | None = None, check_stability: bool = False) -> OrbitalResult:
    """I(xi, f) = integral over e in F^x \\ E^x and e' in E^1 of f(e (1 + j_E x e')) chi^-1(e).

    E^1 carries the image of the quotient measure under t -> t / tbar.
    ``method="brute"`` sums the double coset grid at a fixed depth;
    ``"factored"`` uses that f is a character on Z B^1 to do the e-integral
    exactly, and refines the e' grid only where Z B^1 can still be hit.
    """
    emb = problem.embedding
    if emb is None:
        raise ValueError("problem has no embedding")
    xi = xi_of(emb, x)
    if xi.is_zero():
        raise ValueError("xi must be nonzero")
    if (1 - xi).is_zero():
        raise ValueError("xi = 1 is a singular orbit")
    if method == "auto":
        method = "factored" if problem.E.is_field else "brute"
    if method == "brute":
        value, M = _orbital_brute(tf, problem, x, depth, check_stability)
    elif method == "factored":
        value, M = _orbital_factored(tf, problem, x)
    else:
        raise ValueError(f"unknown method {method!r}")
    d_val = (1 - xi).valuation
    c_pi = problem.datum.c_pi
    m = conductor_pi_chi(problem.E, problem.chi_n) - c_pi
    result = OrbitalResult(xi=xi, value=value, depth=M, d=d_val, m=m)
    env = Fraction(c_pi + d_val + m, 2)
    result.envelope_exponent = env
    if abs(value) > 1e-12:
        result.measured_constant = math.log(abs(value), problem.ctx.p) + float(env)
    return result


def _orbital_brute(tf, problem, x, depth, check_stability):
    emb, E = problem.embedding, problem.E
    jx = emb.j_E * emb(x)
    M = required_depth(problem, emb) + 1 if depth is None else depth

    def total(M):
        cells = E.coset_reps(M)
        rotations = [(c.weight, emb(norm_one_map(c.elem))) for c in cells]
        s = 0j
        for cell in cells:
            g0 = emb(cell.elem)
            chi_ph = problem.chi(cell.elem)
            for w2, rot in rotations:
                ph = tf.phase(g0 * (emb.B.one + jx * rot))
                if ph is None:
                    continue
                s += float(cell.weight * w2) * (ph - chi_ph).to_complex()
        return s * float(tf.normalization)

    value = total(M)
    if check_stability and abs(total(M + 1) - value) > 1e-10:
        raise DepthUnstable("I(xi, f) changes with depth")
    return value, M


def _nu_floor(problem: PeriodProblem, level: int) -> Fraction:
    """A lower bound for nu(iota(u)) over u in E with v_E(u) >= level."""
    E, emb, e_L = problem.E, problem.embedding, problem.datum.L.e
    nu_beta = emb.B.nu(emb.beta)
    a = -(-level // E.e)
    b = -(-(level - E.e + 1) // E.e)
    return min(Fraction(e_L * a), e_L * b + nu_beta)


def _first_level(problem: PeriodProblem, target) -> int:
    level = 1
    while _nu_floor(problem, level) < target:
        level += 1
    return level


def _unit_step(E, level: int) -> QuadElem:
    """p^floor(level/e) sqrt(D): 1 + r * step (r mod p) splits F^x U(level) into q classes."""
    return E.sqrt_D * E.ctx.power_of_p(level // E.e)


def _refine(E, elem: QuadElem, level: int, weight: Fraction):
    step = _unit_step(E, level)
    child_w = weight / E.ctx.p
    for r in range(E.ctx.p):
        yield elem * (1 + step * r), level + E.e, child_w


def _torus_cells(E, level: int):
    """Cells (t, level', weight) covering F^x \\ E^x, each F^x t U_E(level') with level' >= level."""
    out = []
    stack = [(E.one, 0, E.total_volume())]
    while stack:
        elem, lev, w = stack.pop()
        if lev >= level:
            out.append((elem, lev, w))
        elif lev == 0 and E.kind == INERT:
            # F^x \\ O_E^x / U_E(1) is P^1(F_q)
            for c in range(E.ctx.p):
                stack.append((E.elem(1, c), 1, w / (E.q + 1)))
            stack.append((E.elem(0, 1), 1, w / (E.q + 1)))
        elif lev == 0:
            # F^x \\ E^x / U_E(1) = {1, sqrt D}
            stack.append((E.one, 1, w / 2))
            stack.append((E.sqrt_D, 1, w / 2))
        else:
            stack.extend(_refine(E, elem, lev, w))
    return out


def _in_G(d: CuspidalDatum, g: QuatElem, k) -> bool:
    """g in Z U_L(1) (1 + B^k) for 1 <= k <= i, a group containing Z B^1."""
    if g.x.is_zero() or _central_split(d, g.x) is None:
        return False
    w = g.y / g.x
    return w.is_zero() or d.B.nu(d.B.perp(w)) >= k


def _unit_average(problem: PeriodProblem, tf: TestFunction, level: int, top: int) -> int:
    """1 if f o iota and chi agree on U_E(level), else 0 (a character average)."""
    E, emb = problem.E, problem.embedding
    for lev in range(level, top + 1):
        for y in (E.one, E.sqrt_D):
            u = 1 + E.uniformizer_power(lev) * y
            ph = tf.phase(emb(u))
            if ph is None or not (ph - problem.chi(u)).is_zero():
                return 0
    return 1


def _norm_shape_fails(B, g: QuatElem, shift, nu_g0, target) -> bool:
    """True if g and every g + g0 y with nu(y) >= shift miss Z K_A^x, seen through nu versus Nrd."""
    nu = B.nu(g)
    return nu < target and nu_g0 + shift > nu


def _orbital_factored(tf, problem, x):
    d, E, emb = tf.datum, problem.E, problem.embedding
    B = emb.B
    i_member = d.i_prime
    i_value = max(d.c_theta, d.i_prime)
    lev_B = _first_level(problem, i_member)
    lev_top = max(_first_level(problem, i_value), problem.chi.conductor() * E.e, lev_B)
    A = _unit_average(problem, tf, lev_B, lev_top)
    if A == 0:
        return 0j, lev_B
    reps = [(emb(c), problem.chi(c), w) for c, _, w in _torus_cells(E, lev_B)]
    jx = emb.j_E * emb(x)
    # Z B^1 needs 2 nu(g) = e_L v(Nrd g); Nrd(g0 (1 + jx e')) = Nm(g0)(1 - xi) on every cell
    d_val = (1 - xi_of(emb, x)).valuation
    e_L = d.L.e
    shape = {id(r[0]): (B.nu(r[0]), Fraction(e_L * (r[0].norm().valuation + d_val), 2))
             for r in reps}
    cap = problem.ctx.N - 3
    total = 0j
    deepest = 1
    stack = [(t, lev, w, None) for t, lev, w in _torus_cells(E, 1)]
    while stack:
        t, lev, w, alive = stack.pop()
        if lev > cap:
            raise DepthExceedsPrecision(f"E^1 refinement reached level {lev}")
        e1 = emb(norm_one_map(t))
        g1 = B.one + jx * e1
        if g1.norm().is_zero():
            raise ValueError("1 + j_E x e' is singular")
        h = g1.inverse() * jx * e1
        k = B.nu(h) + _nu_floor(problem, lev)
        pool = reps if alive is None else alive
        if k < i_member:
            shift = B.nu(jx * e1) + _nu_floor(problem, lev)
            pool = [r for r in pool if not _norm_shape_fails(B, r[0] * g1, shift, *shape[id(r[0])])]
            if not pool:
                continue
        if k >= i_value:
            deepest = max(deepest, lev)
            for g0, chi_ph, wc in pool:
                g = g0 * g1
                ph = tf.phase(g)
                if ph is not None:
                    total += float(w * wc) * (ph - chi_ph).to_complex()
            continue
        if k >= i_member:
            survivors = [r for r in pool if in_ZB1(d, r[0] * g1)]
        elif k >= 1:
            kk = min(k, d.i)
            survivors = [r for r in pool if _in_G(d, r[0] * g1, kk)]
        else:
            survivors = pool
        if survivors:
            for child in _refine(E, t, lev, w):
                stack.append(child + (survivors,))
    return total * A * float(tf.normalization), deepest


# -- archimedean closed form -----------------------------------------------------------------

def _check_weight(k: int, m: int):
    if not (k > abs(m) >= 1):
        raise WeightViolation(f"need k > |m| >= 1, got k={k}, m={m}")


def archimedean_orbital_exact(k: int, m: int, xi) -> Fraction:
    """(1 - xi)^-(k-1) * sum_{i=0}^{k-|m|-1} C(k+m-1, i) C(k-m-1, i) (-xi)^i, exactly."""
    _check_weight(k, m)
    xi = Fraction(xi)
    if xi >= 0:
        raise WeightViolation("the closed form is stated for xi < 0")
    s = sum(Fraction(math.comb(k + m - 1, i) * math.comb(k - m - 1, i)) * (-xi) ** i
            for i in range(k - abs(m)))
    return s / (1 - xi) ** (k - 1)


def archimedean_orbital(k: int, m: int, xi: float) -> float:
    _check_weight(k, m)
    if xi >= 0:
        raise WeightViolation("the closed form is stated for xi < 0")
    s = sum(math.comb(k + m - 1, i) * math.comb(k - m - 1, i) * (-xi) ** i
            for i in range(k - abs(m)))
    return s / (1 - xi) ** (k - 1)


def archimedean_orbital_constant_term(k: int, m: int, xi) -> Fraction:
    """The same sum as the constant term in z of (1 - xi z)^(k+m-1) (1 + 1/z)^(k-m-1)."""
    _check_weight(k, m)
    z = sympy.Symbol("z")
    t = -sympy.Rational(Fraction(xi).numerator, Fraction(xi).denominator)
    expr = sympy.expand((1 + t * z) ** (k + m - 1) * (1 + 1 / z) ** (k - m - 1))
    const = sympy.Poly(sympy.expand(expr * z ** (k - m - 1)), z).coeff_monomial(z ** (k - m - 1))
    total = Fraction(int(sympy.numer(const)), int(sympy.denom(const)))
    return total / (1 - Fraction(xi)) ** (k - 1)
