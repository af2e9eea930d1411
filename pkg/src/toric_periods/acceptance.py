"""The acceptance criteria as runnable checks.

Each criterion returns a :class:`CriterionResult` with a JSON-friendly
``detail`` dict; :func:`run_suite` runs them in order.  The ``quick`` suite
shrinks every sweep so that the whole run takes seconds.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .appendix import appendix_test_vector_search, whittaker_check
from .cuspidal import (formal_degree_closed_form, formal_degree_volume, in_g_plus, in_j0,
                       in_log_H1, orbit_trace, quat_exp, simple_char_eval, simple_char_linear)
from .errors import NoSolution, NotApplicable, OutOfTableRange, StarViolated
from .instances import (case_datum, central_omega, character_family, reference_problem,
                        torus_family)
from .orbital import (TestFunction, archimedean_orbital_constant_term, archimedean_orbital_exact,
                      orbital_xi, orbital_zero, x_for_xi)
from .padic import Context
from .periods import (PeriodProblem, conductor_pi_chi, conductor_rs, existence_routes,
                      matching_character, period_integral, tunnell_epsilon)
from .quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra
from .quaternion import DIVISION, MATRIX

SUITES = ("acceptance", "quick")
ENVELOPE_SLACK = 3


@dataclass
class CriterionResult:
    ident: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.ident}: {self.name}"


def _frac(x) -> str:
    return str(Fraction(x))


# -- 1: closed form against brute force ---------------------------------------------------------

def criterion_1(quick: bool = False) -> CriterionResult:
    primes = (5,) if quick else (5, 7)
    runs = [(case, 1) for case in range(1, 7)] + ([] if quick else [(1, 2), (3, 2)])
    counts = Counter()
    failures = []
    for p in primes:
        for case, n in runs:
            d = case_datum(p, case, n)
            for E in torus_family(d):
                for problem in character_family(d, E):
                    label = (p, case, n, E.kind, problem.chi.conductor())
                    try:
                        report = period_integral(problem)
                    except (NotApplicable, OutOfTableRange):
                        counts["out_of_range"] += 1
                        continue
                    counts["integrals"] += 1
                    nonzero = abs(report.brute_value) >= 1e-8
                    counts["nonzero" if nonzero else "zero"] += 1
                    ok = report.match
                    if nonzero:
                        value = report.support_measure
                        ok = ok and (report.all_phases_zero and value in report.predicted
                                     and abs(report.brute_value - float(value)) < 1e-8)
                    if not ok:
                        failures.append(label)
    ref = period_integral(reference_problem(5))
    ref_ok = (ref.all_phases_zero and ref.support_measure == Fraction(1, 6)
              and abs(ref.brute_value - 1 / 6) < 1e-9)
    detail = dict(counts, failures=[list(map(str, f)) for f in failures[:10]],
                  reference=_frac(ref.support_measure), reference_ok=ref_ok)
    return CriterionResult(1, "closed form matches brute-force period",
                           not failures and ref_ok and counts["nonzero"] > 0, detail)


# -- 2: dichotomy and epsilon ----------------------------------------------------------------

def criterion_2(quick: bool = False) -> CriterionResult:
    primes = (5,) if quick else (5, 7)
    runs = [(case, 1) for case in range(1, 7)] + ([] if quick else [(1, 2), (3, 2)])
    sampled = with_epsilon = 0
    bad = []
    for p in primes:
        for case, n in runs:
            d = case_datum(p, case, n)
            for E in torus_family(d):
                for problem in character_family(d, E):
                    sampled += 1
                    m_routes = existence_routes(problem, MATRIX)
                    d_routes = existence_routes(problem, DIVISION)
                    ok = (m_routes[0] == m_routes[1] and d_routes[0] == d_routes[1]
                          and m_routes[0] != d_routes[0])
                    try:
                        eps = tunnell_epsilon(problem)
                    except OutOfTableRange:
                        eps = None
                    if eps is not None:
                        with_epsilon += 1
                        ok = ok and (eps == 1) == m_routes[0]
                    if not ok:
                        bad.append((p, case, n, E.kind, problem.chi.conductor()))
    need = 20 if quick else 100
    detail = {"sampled": sampled, "with_epsilon": with_epsilon,
              "exceptions": [list(map(str, b)) for b in bad[:10]]}
    return CriterionResult(2, "exactly one side carries the period, matching epsilon",
                           not bad and with_epsilon >= need, detail)


# -- 3: conductor identities ------------------------------------------------------------------

def _datum_for(p: int, kind: str, c: int):
    if kind == INERT:
        return case_datum(p, 1 if c % 2 == 0 else 2, c // 2)
    return case_datum(p, 3, c // 2)


def criterion_3(quick: bool = False) -> CriterionResult:
    p = 5
    top = 4 if quick else 6
    params = [(INERT, c) for c in range(2, top + 1)] + [(RAMIFIED, c) for c in range(2, top + 1, 2)]
    checked = 0
    bad = []
    for kind, c in params:
        d = _datum_for(p, kind, c)
        for E in torus_family(d):
            for problem in character_family(d, E, c_max=top):
                try:
                    cr = conductor_rs(problem)
                except StarViolated:
                    continue
                checked += 1
                if cr.norm_route != cr.case_route:
                    bad.append((kind, c, E.kind, problem.chi.conductor(), cr.norm_route, cr.case_route))
    detail = {"checked": checked, "exceptions": [list(map(str, b)) for b in bad[:10]]}
    return CriterionResult(3, "conductor norm formula equals case formula", not bad and checked > 0, detail)


# -- 4: orbit formula -------------------------------------------------------------------------

def _nilpotent_sample(d, rng):
    """A random x in g_+ outside j_0: a conjugate of a nilpotent residue plus p M_2(Z_p)."""
    p, B = d.ctx.p, d.B
    while True:
        a, c = rng.randrange(p), rng.randrange(p)
        det = rng.randrange(1, p)
        inv = pow(det, -1, p)
        rows = [[-a * c * inv, a * a * inv], [-c * c * inv, a * c * inv]]
        m = tuple(tuple(v + p * rng.randrange(p * p) for v in row) for row in rows)
        x = B.from_matrix(m)
        if in_g_plus(x) and not in_j0(d, x):
            return x


def _log_h1_sample(d, rng):
    L, B, p = d.L, d.B, d.ctx.p
    while True:
        xl = L.elem(p * rng.randrange(p * p), p * rng.randrange(p * p))
        w = L.elem(rng.randrange(p * p), rng.randrange(p * p)) * p
        x = B.from_L(xl) + B.perp(w)
        if in_log_H1(d, x):
            return x


def criterion_4(quick: bool = False) -> CriterionResult:
    d = case_datum(5, 1, 1)
    B, L = d.B, d.L
    rng = random.Random(4)
    samples = 10 if quick else 50
    at_zero = orbit_trace(d, B.from_L(L.zero))
    zero_ok = abs(at_zero - d.dim_lambda) < 1e-12
    off_max = 0.0
    b1_max = 0.0
    for _ in range(samples):
        x = _nilpotent_sample(d, rng)
        off_max = max(off_max, abs(orbit_trace(d, x)))
        b1_max = max(b1_max, abs(orbit_trace(d, x, group="B1")))
    phase_max = 0.0
    for _ in range(samples):
        x = _log_h1_sample(d, rng)
        value = orbit_trace(d, x)
        t = quat_exp(x) - B.one
        expected = d.dim_lambda * simple_char_eval(d, L.one, t).to_complex()
        linear = simple_char_linear(d, L.one, x).to_complex()
        b1 = orbit_trace(d, x, group="B1")
        phase_max = max(phase_max, abs(value - expected), abs(b1 - linear), abs(expected - linear * d.dim_lambda))
    passed = zero_ok and off_max < 1e-9 and phase_max < 1e-9 and b1_max < 1e-9
    detail = {"at_zero": [at_zero.real, at_zero.imag], "off_j0_max": off_max,
              "log_H1_max_error": phase_max, "b1_off_support_max": b1_max, "samples": samples}
    return CriterionResult(4, "orbit integrals reproduce the character formula", passed, detail)


# -- 5: congruence search against epsilon ---------------------------------------------------

def criterion_5(quick: bool = False) -> CriterionResult:
    p = 5
    params = [(INERT, 2, None), (RAMIFIED, 2, None), (RAMIFIED, 2, 2 * p)]
    if not quick:
        params += [(INERT, 3, None), (INERT, 4, None), (RAMIFIED, 4, None)]
    checked = found = verified = 0
    bad = []
    for kind, c, D_L in params:
        case = 3 if kind == RAMIFIED else (1 if c % 2 == 0 else 2)
        d = case_datum(p, case, c // 2, D_L=D_L)
        for E in torus_family(d, split=False):
            for problem in character_family(d, E):
                try:
                    eps = tunnell_epsilon(problem)
                except OutOfTableRange:
                    continue
                checked += 1
                res = appendix_test_vector_search(problem, verify=1)
                found += res.found
                ok = res.found == (eps == 1)
                for _, report in res.verified:
                    verified += 1
                    ok = ok and bool(report["match"])
                if not ok:
                    bad.append((kind, c, D_L, E.kind, problem.chi.conductor(), eps))
    detail = {"checked": checked, "with_solutions": found, "verified": verified,
              "exceptions": [list(map(str, b)) for b in bad[:10]]}
    return CriterionResult(5, "congruence search finds solutions iff epsilon allows",
                           not bad and checked > 0 and verified == found, detail)


# -- 6: measures ------------------------------------------------------------------------------

def _in_cell(K, ratio, level: int) -> bool:
    return not ratio.a.is_zero() and K.in_unit_filtration(ratio / ratio.a, level)


def criterion_6(quick: bool = False) -> CriterionResult:
    ctx = Context(5, 8)
    top = 3 if quick else 4
    algebras = [QuadAlgebra(ctx, INERT), QuadAlgebra(ctx, RAMIFIED),
                QuadAlgebra(ctx, RAMIFIED, ctx.nonsquare_unit() * ctx.p), QuadAlgebra(ctx, SPLIT)]
    compared = 0
    bad = []
    for K in algebras:
        for M in range(1, top + 1):
            cells = K.coset_reps(M)
            if sum(c.weight for c in cells) != K.total_volume():
                bad.append((K.kind, M, "total"))
            finest = min(c.level for c in cells)
            for m in range(0, M + 1):
                level = K.e * m + K.e - 1
                if level < 1:
                    continue
                if level > finest:
                    break
                counted = sum(c.weight for c in cells if _in_cell(K, c.elem, level))
                compared += 1
                if counted != K.filtration_volume(m):
                    bad.append((K.kind, M, m))
            if M < top:
                bad.extend(_refinement_errors(K, cells, K.coset_reps(M + 1), M))
    detail = {"compared": compared, "exceptions": [list(map(str, b)) for b in bad[:10]]}
    return CriterionResult(6, "filtration volumes equal coset counts", not bad and compared > 0, detail)


def _refinement_errors(K, coarse, fine, M):
    """Every fine cell sits in the coarse cell with the same key mod p^M; weights add up."""
    mod = K.ctx.p ** M
    by_key = {c.key: c for c in coarse}
    sums = Counter()
    errors = []
    for f in fine:
        tag, c = f.key[0], f.key[-1]
        parent = by_key.get((tag, c % mod))
        if parent is None or not _in_cell(K, f.elem * parent.elem.inverse(), parent.level):
            errors.append((K.kind, M, "cell", f.key))
            continue
        sums[parent.key] += f.weight
    for key, parent in by_key.items():
        if sums[key] != parent.weight:
            errors.append((K.kind, M, "weight", key))
    return errors


# -- 7: formal degree -------------------------------------------------------------------------

def criterion_7(quick: bool = False) -> CriterionResult:
    d = case_datum(5, 1, 1)
    counted = formal_degree_volume(d)
    closed = formal_degree_closed_form(d)
    passed = counted == closed == Fraction(1, 20)
    return CriterionResult(7, "formal degree by counting equals closed form", passed,
                           {"counted": _frac(counted), "closed_form": _frac(closed)})


# -- 8: Kirillov support ----------------------------------------------------------------------

def criterion_8(quick: bool = False) -> CriterionResult:
    report = whittaker_check(case_datum(5, 1, 1))
    detail = {"support": {str(k): v for k, v in report.support.items()},
              "expected_valuation": report.expected_valuation,
              "expected_unit_level": report.expected_unit_level,
              "modulus": report.moduli[0] if report.moduli else None,
              "off_support_max": report.off_support_max}
    passed = report.matches and report.off_support_max < 1e-9 and bool(report.moduli)
    return CriterionResult(8, "Whittaker support is the predicted unit coset", passed, detail)


# -- 9: orbital integrals ---------------------------------------------------------------------

def _orbital_instance(d, b):
    L = d.L
    problem = PeriodProblem(d, L, matching_character(L, central_omega(d), b=b))
    period_integral(problem)
    return problem


def _xi_samples(problem, xis):
    """(xi, x) for the xi attained by the problem's embedding."""
    emb = problem.embedding
    for xi in xis:
        if xi in (0, 1):
            continue
        try:
            yield xi, x_for_xi(emb, xi)
        except NoSolution:
            continue


def _near(p: int, valuations, units, shift: int = 0):
    """xi = shift + u p^k."""
    return [shift + Fraction(u) * Fraction(p) ** k for k in valuations for u in units]


def criterion_9(quick: bool = False) -> CriterionResult:
    p = 5
    units = (1, 2, 3) if quick else (1, 2, 3, 4, 6, 7, 8, 9, 11, 12)
    # disjoint setting: c(chi) = 0
    d = case_datum(p, 1, 1, precision=16)
    disjoint = _orbital_instance(d, 0)
    tf = TestFunction(d)
    disjoint_max = 0.0
    disjoint_n = 0
    for _, x in _xi_samples(disjoint, _near(p, (0, -1, -2), units)):
        disjoint_n += 1
        disjoint_max = max(disjoint_max, abs(orbital_xi(tf, disjoint, x).value))
    i0_disjoint = orbital_zero(tf, disjoint)
    # joint setting: c(chi) = 3, so c(pi_chi) = 6 > c(pi) = 4; xi = 1 - u p^d
    joint = _orbital_instance(d, Fraction(1, p ** 3))
    i0_joint = orbital_zero(tf, joint)
    m = conductor_pi_chi(joint.E, joint.chi_n) - d.c_pi
    constants = []
    envelope_ok = True
    near = (0, 1, 2) if quick else tuple(range(0, m + 4))
    for _, x in _xi_samples(joint, _near(p, near, units, shift=1)):
        r = orbital_xi(tf, joint, x)
        if r.measured_constant is not None:
            constants.append(round(r.measured_constant, 4))
            envelope_ok = envelope_ok and abs(r.measured_constant) <= ENVELOPE_SLACK
    far_max = 0.0
    far_n = 0
    for _, x in _xi_samples(joint, _near(p, (m + 4, m + 5), units, shift=1)):
        far_n += 1
        far_max = max(far_max, abs(orbital_xi(tf, joint, x).value))
    # I(0, f) against q^(c(pi)/4) (disjoint) and q^(3c(pi)/4 - c(pi_chi)/2) (joint)
    c_pi = d.c_pi
    i0_constants = [math.log(abs(i0_disjoint), p) - c_pi / 4,
                    math.log(abs(i0_joint), p) - (3 * c_pi / 4 - (c_pi + m) / 2)]
    i0_ok = all(abs(c) <= ENVELOPE_SLACK for c in i0_constants)
    # archimedean closed form against the constant-term evaluation
    arch_n = 0
    arch_ok = True
    for k in range(2, 5 if quick else 7):
        for mm in range(-(k - 1), k):
            if mm == 0:
                continue
            for xi in (Fraction(-1), Fraction(-1, 3), Fraction(-7, 2), Fraction(-5)):
                arch_n += 1
                arch_ok = arch_ok and (archimedean_orbital_exact(k, mm, xi)
                                       == archimedean_orbital_constant_term(k, mm, xi))
    passed = (disjoint_max < 1e-9 and disjoint_n > 0 and far_max < 1e-9 and far_n > 0
              and envelope_ok and bool(constants) and arch_ok and i0_ok)
    detail = {"disjoint_samples": disjoint_n, "disjoint_max": disjoint_max,
              "I0_disjoint": [i0_disjoint.real, i0_disjoint.imag],
              "I0_joint": [i0_joint.real, i0_joint.imag], "m": m,
              "I0_constants": [round(c, 4) for c in i0_constants],
              "far_samples": far_n, "far_max": far_max,
              "envelope_constants": constants, "archimedean_checked": arch_n}
    return CriterionResult(9, "orbital integrals vanish and obey the envelope", passed, detail)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_suite(name: str = "acceptance") -> list[CriterionResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    quick = name == "quick"
    return [criterion(quick) for criterion in CRITERIA]
