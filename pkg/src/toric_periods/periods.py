"""Toric period integrals of minimal vectors: conductors, existence, epsilon test, alignment and sums."""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import BaseChar, MultCharSpec, Phase, ZERO_PHASE
from .cuspidal import CuspidalDatum, conductor_pi_table, matrix_coefficient, theta_B
from .errors import (
    CentralMismatch,
    DepthUnstable,
    ExistenceFails,
    NoSolution,
    NoEmbedding,
    NotApplicable,
    OutsideDomain,
    OutOfTableRange,
    PrecisionExhausted,
    StarViolated,
)
from .padic import PadicNumber, hilbert_symbol, is_square, legendre, teichmuller
from .quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra, QuadElem
from .quaternion import (
    DIVISION,
    MATRIX,
    QuatAlgebra,
    TorusEmbedding,
    second_torus_embeddings,
    norm_is_solvable,
    solve_norm,
)

TOLERANCE = 1e-9


# -- characters of E matching a central character ----------------------------------------

def matching_character(E: QuadAlgebra, omega, b=0, real=0, choice: int = 0,
                       first: tuple[int, int] = (0, 0)) -> MultCharSpec:
    """A character of E^x with wild parameter real + b sqrt(D_E) and restriction ``omega`` to F^x.

    ``omega`` maps elements of F^x to phases.  ``choice`` selects among the
    admissible tame and uniformizer data.  For split E, ``first`` fixes the
    first coordinate as (tame exponent, uniformizer phase in halves).
    """
    ctx = E.ctx
    alpha = E.elem(real, b)
    base = MultCharSpec(E, alpha)
    zeta_F = teichmuller(ctx, _primitive_root(ctx.p))
    p = ctx.uniformizer
    if E.kind == SPLIT:
        t1, u1 = first
        probe = MultCharSpec(E, alpha, (t1, 0), (Phase(Fraction(u1, 2)), 0))
        need_z = omega(zeta_F) - probe(E.scalar(zeta_F))
        need_p = omega(p) - probe(E.scalar(p))
        # second coordinate: zeta_F has index 1 in the residue table of F
        idx = E.decompose(E.from_pair(1, zeta_F))[1][1]
        order = E.q - 1
        sols = [t for t in range(order) if Phase(Fraction(t * idx, order)) == need_z]
        if not sols:
            raise CentralMismatch("no tame datum matches the central character")
        t2 = sols[choice % len(sols)]
        return MultCharSpec(E, alpha, (t1, t2), (Phase(Fraction(u1, 2)), need_p))
    m, idx, _ = E.decompose(E.scalar(zeta_F))
    need_z = omega(zeta_F) - base(E.scalar(zeta_F))
    order = E.residue_size - 1
    tames = [t for t in range(order) if Phase(Fraction(t * idx, order)) == need_z]
    if not tames:
        raise CentralMismatch("no tame datum matches the central character")
    tame = tames[choice % len(tames)]
    rest = choice // len(tames)
    with_tame = MultCharSpec(E, alpha, tame, 0)
    mp, _, _ = E.decompose(E.scalar(p))
    need_p = omega(p) - with_tame(E.scalar(p))
    unifs = [Phase((need_p.t + r) / mp) for r in range(mp)]
    return MultCharSpec(E, alpha, tame, unifs[rest % len(unifs)])


def _primitive_root(p: int) -> int:
    from sympy.ntheory import primitive_root

    return int(primitive_root(p))


def central_samples(ctx) -> list[PadicNumber]:
    return [teichmuller(ctx, _primitive_root(ctx.p)), ctx.uniformizer, ctx.one + ctx.uniformizer,
            ctx.element(-1)]


# -- the problem --------------------------------------------------------------------------

def imaginary_coefficient(alpha: QuadElem | None, ctx) -> PadicNumber:
    """b in alpha = a + b sqrt(D); zero for a missing parameter."""
    return ctx.zero if alpha is None else alpha.b


@dataclass
class PeriodProblem:
    datum: CuspidalDatum
    E: QuadAlgebra
    chi: MultCharSpec
    embedding: TorusEmbedding | None = None
    theta_n: MultCharSpec = field(init=False, repr=False)
    chi_n: MultCharSpec = field(init=False, repr=False)
    same_field: bool = field(init=False)
    star: bool | None = field(init=False)
    twisted_conductors: tuple[int, int] | None = field(init=False)

    def __post_init__(self):
        d = self.datum
        if self.chi.algebra is not self.E:
            raise ValueError("chi must be a character of E")
        for x in central_samples(d.ctx):
            if self.chi.central_phase(x) != theta_B(d, d.L.scalar(x)):
                raise CentralMismatch("chi|F^x differs from the central character of pi")
        theta, chi = d.theta, self.chi
        if d.alpha.a.is_zero():
            self.theta_n, self.chi_n = theta, chi
        else:
            mu = BaseChar(d.ctx, alpha=-d.alpha.a)
            self.theta_n, self.chi_n = theta.twist_by_base(mu), chi.twist_by_base(mu)
        self.same_field = self.E.is_field and self.E.isomorphic(d.L)
        if self.same_field:
            chi_L = self.chi_n.transport(d.L)
            c1 = (self.theta_n / chi_L).conductor()
            c2 = (self.theta_n.conjugate() / chi_L).conductor()
            self.twisted_conductors = (c1, c2)
            self.star = min(c1, c2) >= 2
        else:
            self.twisted_conductors = None
            self.star = None

    @property
    def ctx(self):
        return self.datum.ctx

    @property
    def in_star_regime(self) -> bool:
        return self.star is not False

    def require_star(self):
        if self.star is False:
            raise StarViolated("(*) violated: c(theta chi^-1) or c(theta chibar^-1) <= 1")

    @property
    def b_theta(self) -> PadicNumber:
        return self.theta_n.alpha.b

    @property
    def b_chi(self) -> PadicNumber:
        if self.chi_n.conductor() <= 1:
            return self.ctx.zero
        return imaginary_coefficient(self.chi_n.alpha, self.ctx)

    def norm_alpha_theta(self) -> PadicNumber:
        return -(self.b_theta * self.b_theta * self.datum.L.D)

    def norm_alpha_chi(self) -> PadicNumber:
        b = self.b_chi
        return -(b * b * self.E.D)


# -- conductors ------------------------------------------------------------------------------

def conductor_pi(d: CuspidalDatum) -> int:
    """c(pi) = -v(Nm alpha_theta), using the imaginary part."""
    im = d.alpha.imaginary_part()
    value = -im.norm().valuation
    if value != conductor_pi_table(d):
        raise AssertionError("conductor table and norm formula disagree")
    return value


def conductor_pi_chi(E: QuadAlgebra, chi: MultCharSpec) -> int:
    """Conductor of the dihedral representation attached to (E, chi)."""
    if E.kind == SPLIT:
        c1, c2 = chi.coordinate_conductors()
        return c1 + c2
    c = chi.conductor()
    return 2 * c if E.kind == INERT else c + 1


def _dihedral_conductor(K: QuadAlgebra, c: int) -> int:
    return 2 * c if K.kind == INERT else c + 1


@dataclass
class ConductorReport:
    c_pi: int
    c_pi_chi: int
    c_rs: int
    l: int
    norm_route: int
    case_route: int


def conductor_rs(problem: PeriodProblem) -> ConductorReport:
    """Rankin-Selberg conductor exponent by the norm formula and by the case formula."""
    problem.require_star()
    d = problem.datum
    c_pi = conductor_pi(d)
    c_chi = conductor_pi_chi(problem.E, problem.chi_n)
    diff = problem.norm_alpha_theta() - problem.norm_alpha_chi()
    norm_route = -2 * diff.valuation
    if problem.same_field:
        c1, c2 = problem.twisted_conductors
        case_route = _dihedral_conductor(d.L, c1) + _dihedral_conductor(d.L, c2)
    else:
        case_route = 2 * max(c_pi, c_chi)
    return ConductorReport(c_pi, c_chi, norm_route, norm_route - c_pi, norm_route, case_route)


# -- existence -----------------------------------------------------------------------------

def _side_sign(side: str) -> int:
    if side not in (MATRIX, DIVISION):
        raise ValueError(f"unknown side {side!r}")
    return 1 if side == MATRIX else -1


def existence_routes(problem: PeriodProblem, side: str) -> tuple[bool, bool]:
    """(L-side route, E-side route) for Nm(alpha_theta) - Nm(alpha_chi) in Nm(E^perp)."""
    problem.require_star()
    d, E = problem.datum, problem.E
    L = d.L
    sign = _side_sign(side)
    diff = problem.norm_alpha_chi() - problem.norm_alpha_theta()
    # route through L: solve gamma Nm(y) = D_E - beta_L^2
    gamma = QuatAlgebra.standard(L, side).gamma
    b = problem.b_theta
    alpha0_sq = b * b * L.D
    target = E.D * diff / (gamma * alpha0_sq)
    via_L = norm_is_solvable(L, target)
    # route through E: diff in -gamma_E Nm(E^x), gamma_E of Hilbert class eps(B)
    via_E = hilbert_symbol(diff, E.D) == sign
    return via_L, via_E


def geometric_existence(problem: PeriodProblem, side: str) -> bool:
    via_L, via_E = existence_routes(problem, side)
    if via_L != via_E:
        raise AssertionError("existence routes disagree")
    return via_L


# -- epsilon test ----------------------------------------------------------------------------

def gauss_lambda(K: QuadAlgebra) -> Phase:
    """lambda_{K/F}(psi) for unramified psi, as an exact quarter phase."""
    ctx = K.ctx
    p = ctx.p
    if K.kind == SPLIT:
        return ZERO_PHASE
    if K.kind == INERT:
        return ZERO_PHASE
    total = sum(legendre(t, p) * cmath.exp(2j * math.pi * t / p) for t in range(1, p))
    g = total / math.sqrt(p)
    snapped = None
    for k in range(4):
        if abs(g - cmath.exp(2j * math.pi * k / 4)) < 1e-9:
            snapped = Phase(Fraction(k, 4))
    if snapped is None:  # pragma: no cover
        raise PrecisionExhausted("Gauss sum did not land on a fourth root of unity")
    eta_p = hilbert_symbol(ctx.uniformizer, K.D)
    lam = snapped + (Phase(Fraction(1, 2)) if eta_p == -1 else ZERO_PHASE)
    eta_minus_one = hilbert_symbol(ctx.element(-1), K.D)
    if (lam * 2) != (ZERO_PHASE if eta_minus_one == 1 else Phase(Fraction(1, 2))):
        raise AssertionError("lambda^2 != eta(-1)")
    return lam


def quadratic_extension_char(K: QuadAlgebra) -> MultCharSpec:
    """eta on K^x extending eta_{K/F}, with eta(sqrt D_K) = lambda_{K/F}(psi) for ramified K."""
    half = (K.q - 1) // 2
    if K.kind == RAMIFIED:
        return MultCharSpec(K, None, half, gauss_lambda(K))
    if K.kind == INERT:
        return MultCharSpec(K, None, 0, Phase(Fraction(1, 2)))
    raise ValueError("split algebras have trivial eta")


def delta_character(d: CuspidalDatum, theta: MultCharSpec) -> MultCharSpec:
    """Delta_theta: unramified of order two (inert), or the level-one character (ramified)."""
    L = d.L
    if L.kind == INERT:
        return MultCharSpec(L, None, 0, Phase(Fraction(1, 2)))
    c = theta.conductor()
    b = theta.alpha.b
    # varpi_L^{c-1} alpha_theta = D^{c/2} b lies in F
    value = L.D ** (c // 2) * b
    eta = hilbert_symbol(value, L.D)
    lam = gauss_lambda(L)
    phase = lam * (c - 1) + (Phase(Fraction(1, 2)) if eta == -1 else ZERO_PHASE)
    return MultCharSpec(L, None, (L.q - 1) // 2, phase)


def _solve_delta(target: Phase, probe, p: int) -> int:
    """delta in F_p with probe(delta) = target."""
    for delta in range(p):
        if probe(delta) == target:
            return delta
    raise OutOfTableRange("no delta matches the character values")


def _nonsquare_mod_p(x: int, p: int) -> bool:
    return x % p != 0 and legendre(x % p, p) == -1


def _square_mod_p(x: int, p: int) -> bool:
    return x % p == 0 or legendre(x % p, p) == 1


def tunnell_epsilon(problem: PeriodProblem) -> int:
    """epsilon(pi_E x chi^-1) in the table regime c(pi) >= c(pi_chi)."""
    d, E = problem.datum, problem.E
    L = d.L
    ctx = d.ctx
    p = ctx.p
    theta, chi = problem.theta_n, problem.chi_n
    c_pi = conductor_pi(d)
    if conductor_pi_chi(E, chi) > c_pi:
        raise OutOfTableRange("c(pi_chi) > c(pi): the period lives on the matrix side")
    if E.kind == SPLIT:
        return 1
    if L.kind != E.kind:
        return -1
    if L.kind == INERT:
        c1, c2 = problem.twisted_conductors
        return (-1) ** (c1 + c2)
    c = theta.conductor()
    if not problem.same_field:
        j = c // 2 - 1
        xi = E.D / L.D
        lhs = chi(E.one + E.elem(0, L.D ** j))
        step = L.elem(0, L.D ** j)
        delta = _solve_delta(lhs, lambda t: theta(L.one + step * t), p)
        val = (ctx.element(delta * delta) / xi - 1)
        r = val.lift(1) if val.valuation >= 0 else None
        return -1 if _square_mod_p(r, p) else 1
    # same ramified field, uniformizer sqrt(D_L)
    chi_L = chi.transport(L)
    eta = quadratic_extension_char(L)
    Delta = delta_character(d, theta)
    Theta = theta / Delta
    mu1 = Theta / chi_L * eta
    mu2 = Theta.conjugate() / chi_L * eta
    c1, c2 = mu1.conductor(), mu2.conductor()
    top = L.uniformizer_power(c - 1)
    if c1 == c2 == c:
        lhs = chi_L(L.one + top)
        delta = _solve_delta(lhs, lambda t: theta(L.one + top * t), p)
        return -1 if _nonsquare_mod_p(delta * delta - 1, p) else 1
    for mu, sign in ((mu1, -2), (mu2, 2)):
        cm = mu.conductor()
        if cm == 1:
            raise OutOfTableRange("c(mu) = 1 cannot occur with mu trivial on F^x")
        if 0 < cm < c:
            lhs = mu(L.one + L.uniformizer_power(cm - 1))
            delta = _solve_delta(lhs, lambda t: theta(L.one + top * t), p)
            value = sign * delta * (-1) ** ((cm + c) // 2)
            return -1 if _nonsquare_mod_p(value, p) else 1
    for mu in (mu1, mu2):
        if mu.conductor() == 0 and mu(L.uniformizer()) == Phase(Fraction(1, 2)):
            return -1
    return 1


# -- alignment ------------------------------------------------------------------------------

@dataclass
class Alignment:
    embedding: TorusEmbedding
    beta_L: QuadElem
    y: QuadElem
    aligned: bool
    v_norm_alpha_perp: int
    v_norm_beta_perp_shift: int


def _on_polarization_line(d: CuspidalDatum, y: QuadElem) -> bool:
    """Is the residue direction of y on the F_p-line of the polarization vector?"""
    if y.is_zero():
        return True
    k = d.L.valuation(y) if d.L.kind == INERT else min(y.a.valuation, y.b.valuation)
    scaled = y / d.ctx.power_of_p(k)
    a_res = scaled.a.lift(1) if scaled.a.valuation >= 0 else 0
    b_res = scaled.b.lift(1) if scaled.b.valuation >= 0 else 0
    if d.polarization_vector.b.is_zero():
        return b_res == 0
    return a_res == 0


def align_torus(problem: PeriodProblem, prefer_aligned: bool | None = None) -> Alignment:
    """An embedding of E whose image makes Im(alpha_chi) the E-component of alpha_theta.

    ``prefer_aligned`` (dim Lambda = q only) asks for beta^perp on the
    polarization line (True), off it (False), or takes the first solution.
    """
    problem.require_star()
    d, E = problem.datum, problem.E
    L, B = d.L, d.B
    if not geometric_existence(problem, d.side):
        raise NoSolution("Hilbert obstruction: no embedding on this side")
    alpha0 = d.alpha.imaginary_part()
    beta_L = alpha0.inverse() * (problem.b_chi * E.D)
    beta_L_sq = (beta_L * beta_L).a
    target = (E.D - beta_L_sq) / B.gamma
    y = None
    if prefer_aligned is not None and d.dim_lambda != 1:
        y = _solve_norm_on_line(d, target, prefer_aligned)
    if y is None:
        y = solve_norm(L, target)
    beta = B.from_L(beta_L) + B.perp(y)
    emb = TorusEmbedding(E, B, beta)
    alpha_perp = d.alpha_quat() - beta * problem.b_chi
    beta_perp = B.perp(y)
    info = Alignment(
        embedding=emb, beta_L=beta_L, y=y, aligned=_on_polarization_line(d, y),
        v_norm_alpha_perp=alpha_perp.norm().valuation,
        v_norm_beta_perp_shift=beta_perp.norm().valuation - beta.norm().valuation,
    )
    problem.embedding = emb
    return info


def _solve_norm_on_line(d: CuspidalDatum, target: PadicNumber, on_line: bool):
    """y with Nm(y) = target, on (or off) the polarization line."""
    L, ctx = d.L, d.ctx
    lam = d.polarization_vector
    if on_line:
        base = lam.norm()
        ratio = target / base
        if is_square(ratio):
            return lam * ratio.sqrt()
        return None
    for s in range(1, ctx.p):
        for r in range(1, ctx.p):
            # y = s*lam + r*mu with mu the other basis vector, scaled to the target
            mu = L.sqrt_D if lam.b.is_zero() else L.one
            cand = lam * s + mu * r
            ratio = target / cand.norm()
            if ratio.valuation % 2 == 0 and is_square(ratio):
                return cand * ratio.sqrt()
    return None


# -- predictions ----------------------------------------------------------------------------

_TABLE_SHIFT = {1: Fraction(0), 2: Fraction(-1, 2), 3: Fraction(-1, 4),
                4: Fraction(-1, 2), 5: Fraction(0), 6: Fraction(-1, 4)}


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def size_exponent(d: CuspidalDatum, E: QuadAlgebra, l: int, level: Fraction) -> int:
    """m with I = L(eta_E, 1) q^-m, for the lattice level i or i'."""
    e_E = 2 if E.kind == RAMIFIED else 1
    return _ceil(level / d.L.e - (Fraction(e_E - 1) + Fraction(d.c_pi - l, 2)) / 2)


def table_exponent(d: CuspidalDatum, E: QuadAlgebra, l: int) -> int:
    e_E = 2 if E.kind == RAMIFIED else 1
    return _ceil(Fraction(l, 4) + _TABLE_SHIFT[d.case] + Fraction(1 - e_E, 2))


@dataclass(frozen=True)
class Prediction:
    values: tuple[Fraction, ...]
    l: int
    exponents: tuple[int, ...]

    def __contains__(self, x) -> bool:
        return Fraction(x) in self.values

    @property
    def maximal(self) -> Fraction:
        return max(self.values)


def predicted_integral(problem: PeriodProblem) -> Prediction:
    """Exact size of the period for a test vector: one value, or two when i' = i + 1."""
    d, E = problem.datum, problem.E
    problem.require_star()
    if not geometric_existence(problem, d.side):
        raise ExistenceFails("no test vector on this side")
    l = conductor_rs(problem).l
    e_E = 2 if E.kind == RAMIFIED else 1
    m_generic = size_exponent(d, E, l, d.i_prime)
    m_aligned = size_exponent(d, E, l, d.i)
    m_table = table_exponent(d, E, l)
    if m_table != m_aligned:
        raise AssertionError("per-case list and size formula disagree")
    exps = (m_generic,) if m_generic == m_aligned else (m_generic, m_aligned)
    for m in exps:
        if m < 2 - e_E:
            raise OutOfTableRange(f"support level {m} below the Lie range")
    values = tuple(E.filtration_volume(m) for m in exps)
    return Prediction(values=values, l=l, exponents=exps)


# -- brute force ----------------------------------------------------------------------------

@dataclass
class IntegralReport:
    predicted: tuple[Fraction, ...]
    brute_value: complex
    depth: int
    all_phases_zero: bool
    support_measure: Fraction
    match: bool
    cells: int = 0
    support_in_unit_filtration: bool = True
    notes: dict = field(default_factory=dict)

    @property
    def exact_value(self) -> Fraction | None:
        return self.support_measure if self.all_phases_zero else None


def _effective_level(E: QuadAlgebra, M: int) -> int:
    return 2 * M - 1 if E.kind == RAMIFIED else M


def required_depth(problem: PeriodProblem, emb: TorusEmbedding) -> int:
    """Smallest M with chi and Phi o iota constant on every coset cell of depth M."""
    d, E = problem.datum, problem.E
    B = d.B
    e_E = 2 if E.kind == RAMIFIED else 1
    nu_beta = B.nu(emb.beta)
    c_chi = problem.chi.conductor() if E.kind != SPLIT else max(problem.chi.coordinate_conductors())
    c_theta = d.c_theta
    if d.real_twist is not None:
        c_theta = max(c_theta, d.real_twist.conductor() * d.L.e)
    M = 1
    while True:
        lev = _effective_level(E, M)
        va = math.ceil(Fraction(lev, e_E))
        vb = math.ceil(Fraction(lev - (e_E - 1), e_E))
        if (lev >= c_chi and d.L.e * va >= c_theta
                and d.L.e * vb + nu_beta >= c_theta):
            return M
        M += 1


def _coset_sum(problem: PeriodProblem, emb: TorusEmbedding, M: int):
    d, E, chi = problem.datum, problem.E, problem.chi
    total = 0j
    support = Fraction(0)
    all_zero = True
    in_unit = True
    cells = 0
    for cell in E.coset_reps(M):
        cells += 1
        g = emb(cell.elem)
        ph = matrix_coefficient(d, g)
        if ph is None:
            continue
        phase = ph - chi(cell.elem)
        total += float(cell.weight) * phase.to_complex()
        support += cell.weight
        if not phase.is_zero():
            all_zero = False
        t = cell.elem
        if t.a.is_zero() or not E.in_unit_filtration(t / t.a, 1):
            in_unit = False
    return total, support, all_zero, in_unit, cells


def brute_force_integral(problem: PeriodProblem, depth: int | None = None,
                         check_stability: bool = False,
                         predicted: tuple[Fraction, ...] | None = None) -> IntegralReport:
    """Sum of weight * Phi(iota(t)) * chi^-1(t) over the coset cells of F^x \\ E^x."""
    emb = problem.embedding
    if emb is None:
        raise ValueError("problem has no embedding; call align_torus or set one")
    M = required_depth(problem, emb) if depth is None else depth
    if M > problem.ctx.N - 2:
        raise PrecisionExhausted(f"depth {M} needs precision >= {M + 2}")
    total, support, all_zero, in_unit, cells = _coset_sum(problem, emb, M)
    if check_stability:
        finer = _coset_sum(problem, emb, M + 1)[0]
        if abs(finer - total) > 1e-10:
            raise DepthUnstable(f"integral changes between depth {M} and {M + 1}")
    if predicted is None:
        predicted = ()
    if all_zero:
        ok = (not predicted and abs(total) < TOLERANCE and support == 0) or (
            support in predicted and abs(total - float(support)) < TOLERANCE)
        if not predicted and support == 0:
            ok = True
    else:
        ok = abs(total) < TOLERANCE and (not predicted or predicted == (Fraction(0),))
    return IntegralReport(
        predicted=tuple(predicted), brute_value=total, depth=M, all_phases_zero=all_zero,
        support_measure=support, match=ok, cells=cells, support_in_unit_filtration=in_unit,
    )


def period_integral(problem: PeriodProblem, prefer_aligned: bool | None = None,
                    depth: int | None = None, check_stability: bool = False) -> IntegralReport:
    """Lie-range pipeline: predict, embed (aligned when a test vector exists) and sum."""
    d = problem.datum
    exists = geometric_existence(problem, d.side)
    if exists:
        pred = predicted_integral(problem)
        info = align_torus(problem, prefer_aligned=prefer_aligned)
        report = brute_force_integral(problem, depth, check_stability, pred.values)
        report.notes.update(l=pred.l, aligned=info.aligned, exponents=pred.exponents)
        return report
    return vanishing_check(problem, depth, check_stability)


def vanishing_check(problem: PeriodProblem, depth: int | None = None,
                    check_stability: bool = False, attempts: int = 12) -> IntegralReport:
    """The period on a side without test vectors, through some embedding of E.

    For dim Lambda = q only embeddings whose image meets J inside Z J^1 can
    be summed; embeddings are tried until one qualifies.
    """
    d = problem.datum
    l = conductor_rs(problem).l
    try:
        candidates = second_torus_embeddings(problem.E, d.B)
        first = next(candidates)
    except NoEmbedding:
        report = IntegralReport(predicted=(Fraction(0),), brute_value=0j, depth=0,
                                all_phases_zero=True, support_measure=Fraction(0), match=True)
        report.notes.update(l=l, aligned=None, embedding=None)
        return report
    tried = 0
    for emb in itertools.chain([first], candidates):
        tried += 1
        problem.embedding = emb
        try:
            report = brute_force_integral(problem, depth, check_stability, (Fraction(0),))
        except OutsideDomain:
            if tried >= attempts:
                break
            continue
        report.match = abs(report.brute_value) < TOLERANCE
        report.notes.update(l=l, aligned=None, embedding_attempts=tried)
        return report
    raise NotApplicable("every tried embedding meets J outside Z J^1, where Phi is not modelled")


# -- whole torus ----------------------------------------------------------------------------

def _whole_embedding(problem: PeriodProblem, conjugate: bool) -> TorusEmbedding:
    d, E = problem.datum, problem.E
    s = (E.D / d.L.D).sqrt()
    if conjugate:
        s = -s
    return TorusEmbedding(E, d.B, d.B.from_L(d.L.sqrt_D * s))


def _chars_agree_on_generators(problem: PeriodProblem, emb: TorusEmbedding) -> bool:
    d, E, chi = problem.datum, problem.E, problem.chi
    gens = [E.teichmuller_generator(), E.uniformizer()]
    top = max(chi.conductor(), d.c_theta) + 1
    for k in range(1, top + 1):
        step = E.uniformizer_power(k)
        gens.append(E.one + step)
        if E.kind == INERT:
            gens.append(E.one + step * E.sqrt_D)
    for t in gens:
        g = emb(t)
        if theta_B(d, g.x) != chi(t):
            return False
    return True


def whole_torus_case(problem: PeriodProblem, conjugate: bool = False) -> IntegralReport:
    """E = L with c(theta chi^-1) or c(theta chibar^-1) at most 1: Phi is a character on all of E^x."""
    d, E = problem.datum, problem.E
    if not problem.same_field or problem.star:
        raise NotApplicable("whole-torus case needs E = L and a twisted conductor <= 1")
    if d.dim_lambda != 1:
        raise NotApplicable("whole-torus values for dim Lambda = q need the full Heisenberg model")
    emb = _whole_embedding(problem, conjugate)
    problem.embedding = emb
    predicted = E.total_volume() if _chars_agree_on_generators(problem, emb) else Fraction(0)
    M = max(required_depth(problem, emb), 1)
    total, support, all_zero, in_unit, cells = _coset_sum(problem, emb, M)
    if all_zero:
        ok = support == predicted and abs(total - float(predicted)) < TOLERANCE
    else:
        ok = predicted == 0 and abs(total) < TOLERANCE
    return IntegralReport(
        predicted=(predicted,), brute_value=total, depth=M, all_phases_zero=all_zero,
        support_measure=support, match=ok, cells=cells, support_in_unit_filtration=in_unit,
    )
