from fractions import Fraction

from toric_periods.appendix import appendix_test_vector_search, whittaker_check
from toric_periods.errors import OutOfTableRange
from toric_periods.instances import case_datum, character_family
from toric_periods.padic import Context
from toric_periods.periods import tunnell_epsilon
from toric_periods.quadratic import RAMIFIED, QuadAlgebra


def test_reference_solutions(reference):
    res = appendix_test_vector_search(reference, verify=2)
    assert res.found
    n = reference.datum.n
    assert set(res.solutions_per_u(n).values()) <= {1, 2}
    assert 2 in res.solutions_per_u(n).values()
    for sol, report in res.verified:
        assert sol.value == Fraction(1, 6)
        assert report["match"] and abs(report["brute_value"] - 1 / 6) < 1e-9


def test_distinct_ramified_obstruction():
    d = case_datum(5, 3, 1)
    E = QuadAlgebra(d.ctx, RAMIFIED, d.ctx.nonsquare_unit() * 5)
    assert not E.isomorphic(d.L)
    checked = 0
    for pr in character_family(d, E):
        try:
            eps = tunnell_epsilon(pr)
        except OutOfTableRange:
            continue
        res = appendix_test_vector_search(pr)
        assert res.found == (eps == 1)
        checked += eps == -1
    assert checked


def test_whittaker_support():
    report = whittaker_check(case_datum(5, 1, 1))
    assert report.matches
    assert list(report.support) == [-2]
    assert report.off_support_max < 1e-9
    assert max(report.moduli) - min(report.moduli) < 1e-9 * max(report.moduli)
