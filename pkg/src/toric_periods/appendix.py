"""The 2x2 matrix model: test vectors pi(k) phi_0 from a quadratic congruence, and Kirillov support."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .characters import MultCharSpec, psi_eval
from .cuspidal import APPENDIX, CuspidalDatum, build_datum, matrix_coefficient
from .errors import DepthUnstable, NoSolution, NotApplicable
from .padic import vp_int
from .periods import TOLERANCE, PeriodProblem
from .quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra
from .quaternion import MATRIX, matrix_inv, matrix_mul


def appendix_model(d: CuspidalDatum) -> CuspidalDatum:
    """The same representation realized on L' = F(sqrt D') with alpha = p^{-c/e} sqrt(D')/D'.

    D' = 1 / (alpha_theta^2 p^{2c/e}); theta is carried over by an isomorphism
    L -> L', and replaced by its conjugate when the sign of alpha comes out
    opposite.
    """
    if d.side != MATRIX:
        raise NotApplicable("the 2x2 model lives on the matrix side")
    L, ctx = d.L, d.ctx
    b = d.alpha.b
    shift = ctx.power_of_p(2 * d.c_theta // L.e)
    D_prime = (b * b * L.D * shift).inverse()
    L2 = QuadAlgebra(ctx, L.kind, D_prime)
    theta2 = d.theta.transport(L2)
    wanted = (D_prime * ctx.power_of_p(d.c_theta // L.e)).inverse()
    if not (theta2.alpha.b - wanted).is_zero():
        theta2 = theta2.conjugate()
    if not (theta2.alpha.b - wanted).is_zero():
        raise AssertionError("transported alpha is not +-p^{-c/e} sqrt(D')/D'")
    return build_datum(L2, theta2, MATRIX, polarization=APPENDIX)


def support_levels(d: CuspidalDatum) -> tuple[int, int]:
    """(i, j) in the congruences b D u = 0 mod p^i, b (v^2 - D'/D) = 0 mod p^j."""
    n = d.n
    if d.case == 1:
        return n, n
    if d.case == 2:
        return n + 1, n
    if d.case == 3:
        return -(-n // 2), n // 2
    raise NotApplicable("the congruence search covers the matrix-side cases 1-3")


def _vcap(x: int, p: int, cap: int) -> int:
    return cap if x == 0 else min(vp_int(x, p), cap)


@dataclass
class Solution:
    u: int
    v: int
    level: int
    value: Fraction


@dataclass
class SearchResult:
    solutions: list[Solution]
    modulus_exponent: int
    parity_obstruction: bool
    orientation_counts: dict = field(default_factory=dict)
    verified: list = field(default_factory=list)
    reason: str = ""

    @property
    def found(self) -> bool:
        return bool(self.solutions)

    def solutions_per_u(self, k: int) -> dict[int, int]:
        """Number of distinct v mod p^k for each u."""
        p = self._p
        out: dict[int, set] = {}
        for s in self.solutions:
            out.setdefault(s.u, set()).add(s.v % p ** k)
        return {u: len(vs) for u, vs in out.items()}


def _congruence_solutions(problem: PeriodProblem, d2: CuspidalDatum, chi: MultCharSpec,
                          limit: int | None) -> list[Solution]:
    E = problem.E
    ctx = d2.ctx
    p = ctx.p
    R = d2.c_theta // d2.L.e
    mod = p ** R
    base = 1 if E.kind == INERT else 0
    i_B, j_B = support_levels(d2)
    D = E.D.lift(R + 2)
    ratio = (E.D / d2.L.D).lift(R)
    inv_ratio = (d2.L.D / E.D).lift(R)
    b_chi = problem.b_chi if chi is problem.chi_n else problem.b_chi * -1
    lin = (b_chi * E.D * ctx.power_of_p(R)).lift(R)
    vD = vp_int(D, p)
    units = [v for v in range(mod) if v % p]
    out: list[Solution] = []
    for u in range(mod):
        du2 = (D * u * u) % mod
        vu = R if u == 0 else min(vp_int(u, p), R)
        lev_u = i_B - (vu + vD)
        for v in units:
            m = max(base, lev_u, j_B - _vcap((v * v - inv_ratio) % mod, p, R))
            need = R - m
            if need <= 0:
                ok = True
            else:
                Q = (ratio * v * v - 2 * lin * v + 1 - du2) % p ** need
                ok = Q == 0
            if ok:
                out.append(Solution(u, v, m, E.filtration_volume(m)))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def appendix_test_vector_search(problem: PeriodProblem, limit: int | None = None,
                                verify: int = 1) -> SearchResult:
    """Parameters (u, v) with v a unit, for which pi(k) phi_0 detects chi through the congruence test.

    Both orientations chi and chibar are searched; ``verify`` solutions of the
    chi orientation are re-summed by brute force in the 2x2 model.
    """
    d, E = problem.datum, problem.E
    if d.side != MATRIX:
        raise NotApplicable("the congruence search runs on the matrix side")
    if not E.is_field:
        raise NotApplicable("the congruence search assumes E is a field")
    problem.require_star()
    d2 = appendix_model(d)
    R = d2.c_theta // d2.L.e
    parity = bool(problem.same_field and d.case == 1
                  and problem.twisted_conductors[0] % 2 == 1)
    result = SearchResult([], R, parity)
    result._p = d.ctx.p
    if E.e != d.L.e:
        result.reason = "e_E != e_L: the discriminant is never a square"
        result.orientation_counts = {"chi": 0, "chibar": 0}
        return result
    sols = _congruence_solutions(problem, d2, problem.chi_n, limit)
    bar = _congruence_solutions(problem, d2, problem.chi_n.conjugate(), limit)
    result.solutions = sols
    result.orientation_counts = {"chi": len(sols), "chibar": len(bar)}
    if bool(sols) != bool(bar):
        raise AssertionError("chi and chibar orientations disagree")
    for s in sols[:verify]:
        report = verify_solution(problem, d2, s)
        result.verified.append((s, report))
    return result


def _standard_torus_matrix(E: QuadAlgebra, t):
    return ((t.a, t.b), (t.b * E.D, t.a))


def verify_solution(problem: PeriodProblem, d2: CuspidalDatum, sol: Solution,
                    check_stability: bool = False) -> dict:
    """Brute-force sum of Phi_0(k^-1 t k) chi^-1(t) with t = [[a, b], [bD, a]]."""
    value = matrix_model_integral(problem, d2, sol.u, sol.v)
    if check_stability:
        finer = matrix_model_integral(problem, d2, sol.u, sol.v, extra=1)
        if abs(finer["brute_value"] - value["brute_value"]) > 1e-10:
            raise DepthUnstable("2x2 model sum changes with depth")
    value["expected"] = sol.value
    value["match"] = (value["all_phases_zero"] and value["support_measure"] == sol.value
                      and abs(value["brute_value"] - float(sol.value)) < TOLERANCE)
    return value


def matrix_model_integral(problem: PeriodProblem, d2: CuspidalDatum, u: int, v: int,
                          extra: int = 0) -> dict:
    E, chi = problem.E, problem.chi
    ctx = d2.ctx
    e_E = E.e
    top = -(-d2.c_theta // d2.L.e) + 1
    lev = e_E * top + (e_E - 1)
    lev = max(lev, chi.conductor())
    M = (lev + 1) // 2 + 1 if E.kind == RAMIFIED else lev
    M += extra
    k = ((ctx.element(v), ctx.element(u)), (ctx.zero, ctx.one))
    k_inv = matrix_inv(k)
    total = 0j
    support = Fraction(0)
    all_zero = True
    for cell in E.coset_reps(M):
        m = matrix_mul(matrix_mul(k_inv, _standard_torus_matrix(E, cell.elem)), k)
        ph = matrix_coefficient(d2, d2.B.from_matrix(m))
        if ph is None:
            continue
        phase = ph - chi(cell.elem)
        total += float(cell.weight) * phase.to_complex()
        support += cell.weight
        if not phase.is_zero():
            all_zero = False
    return {"brute_value": total, "support_measure": support, "all_phases_zero": all_zero,
            "depth": M}


# -- Kirillov model -------------------------------------------------------------------------

@dataclass
class WhittakerReport:
    support: dict
    moduli: list[float]
    expected_valuation: int
    expected_unit_level: int
    matches: bool
    off_support_max: float


def _whittaker_value(d2: CuspidalDatum, a, shift: int, K: int, R: int) -> complex:
    ctx = d2.ctx
    p = ctx.p
    top = ctx.power_of_p(shift)
    total = 0j
    scale = p ** (K + R)
    for r in range(scale):
        x = ctx.element(Fraction(r, p ** K))
        m = ((top * a, top * x), (ctx.zero, ctx.one))
        ph = matrix_coefficient(d2, d2.B.from_matrix(m))
        if ph is None:
            continue
        total += (ph + psi_eval(-x)).to_complex()
    return total / p ** R


def _cell_depth(d2: CuspidalDatum, shift: int) -> int:
    ctx = d2.ctx
    R = 0
    while True:
        m = ((ctx.zero, ctx.power_of_p(shift + R)), (ctx.zero, ctx.zero))
        if d2.B.nu(d2.B.from_matrix(m)) >= d2.c_theta:
            return R
        R += 1


def whittaker_check(d: CuspidalDatum, valuation_window: int = 2) -> WhittakerReport:
    """Support of W(diag(a, 1)) for the type 1 minimal vector in the Kirillov model."""
    if d.case not in (1, 3):
        raise NotApplicable("Kirillov support is checked for cases 1 and 3")
    d2 = appendix_model(d)
    ctx = d.ctx
    p = ctx.p
    n = d.n
    shift = d.c_pi // 2
    if d.case == 1:
        exp_val, exp_level = -2 * n, n
    else:
        exp_val, exp_level = -n, -(-n // 2)
    R = _cell_depth(d2, shift)
    K = shift + 1
    residues = p ** (exp_level + 1)
    support: dict[int, list[int]] = {}
    moduli: list[float] = []
    off_max = 0.0
    ok = True
    for j in range(exp_val - valuation_window, exp_val + valuation_window + 1):
        for r in range(1, residues):
            if r % p == 0:
                continue
            a = ctx.element(r) * (ctx.power_of_p(j) if j >= 0 else ctx.power_of_p(-j).inverse())
            w = _whittaker_value(d2, a, shift, K, R)
            expected_in = j == exp_val and (r - 1) % p ** exp_level == 0
            if abs(w) > TOLERANCE:
                support.setdefault(j, []).append(r)
                moduli.append(abs(w))
                if not expected_in:
                    ok = False
            else:
                off_max = max(off_max, abs(w))
                if expected_in:
                    ok = False
    if moduli and (max(moduli) - min(moduli)) > TOLERANCE * max(moduli):
        ok = False
    return WhittakerReport(support, moduli, exp_val, exp_level, ok, off_max)
