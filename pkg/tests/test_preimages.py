from fractions import Fraction

import mpmath
import numpy as np
import pytest

from wronski.combinatorics import enumerate_ballot, real_degree, schubert_degree
from wronski.degree_lab import (
    DegreeInconsistencyError,
    NonGenericTargetError,
    bk_rows,
    degree_signed_sum,
    eliminate_big_cell,
    preimage_solve,
    random_planted_target,
    random_real_rooted_target,
    random_target,
    sharpness_check,
)
from wronski.grassmann import big_cell_polys
from wronski.polynomials import RationalPoly, wronskian

z = RationalPoly([0, 1])


def _close(kc, sol, tol=1e-20):
    with mpmath.workdps(40):
        return all(abs(mpmath.mpf(a.numerator) / a.denominator - b) < tol
                   for ra, rb in zip(kc, sol.kcoef) for a, b in zip(ra, rb))


def _generic_reports(m, p, rng, count, make):
    out = []
    while len(out) < count:
        try:
            out.append(preimage_solve(make(m, p, rng), m, p, seed=len(out)))
        except NonGenericTargetError:
            continue
    return out


def test_planted_solution_recovered(backend):
    rng = np.random.default_rng(3)
    for _ in range(3):
        w, kc = random_planted_target(2, 2, rng)
        try:
            r = preimage_solve(w, 2, 2, backend=backend)
        except NonGenericTargetError:
            continue
        assert any(_close(kc, s) for s in r.solutions)
        assert r.complete


def test_shapiro_case_2_2():
    r = preimage_solve(RationalPoly.from_roots([-2, -1, 1, 3]), 2, 2)
    assert r.count == 2 and r.signed_sum == 0 and r.complete


def test_shapiro_case_3_2():
    r = preimage_solve(RationalPoly.from_roots([-3, -2, -1, 1, 2, 3]), 3, 2)
    assert r.count == 5 and abs(r.signed_sum) == 1 and r.complete


@pytest.mark.parametrize("m,p", [(2, 2), (3, 2)])
def test_real_rooted_targets_are_totally_real(m, p, rng):
    for r in _generic_reports(m, p, rng, 3, random_real_rooted_target):
        assert r.count == schubert_degree(m, p)


@pytest.mark.parametrize("m,p", [(2, 2), (3, 2), (2, 3)])
def test_signed_sum_is_constant(m, p, rng):
    reports = _generic_reports(m, p, rng, 5, random_target)
    sums = {r.signed_sum for r in reports}
    assert len(sums) == 1 and abs(sums.pop()) == real_degree(m, p)
    for r in reports:
        assert abs(r.signed_sum) <= r.count <= r.budget == schubert_degree(m, p)
        assert r.complete
        assert r.complex_count == schubert_degree(m, p)


def test_degree_signed_sum_examples(rng):
    targets = [RationalPoly.from_roots([-2, -1, 1, 3]), z**4 + 1, z**4 - z + Fraction(1, 3)]
    assert degree_signed_sum(2, 2, targets) == 0
    with pytest.raises(DegreeInconsistencyError):
        # no Newton starts: nothing is found, so |sum| = 0 != I(3,2)
        degree_signed_sum(3, 2, [RationalPoly.from_roots([-3, -2, -1, 1, 2, 3])], starts=0, oracle=False)


def test_empty_preimage_exists_for_2_2():
    rng = np.random.default_rng(0)
    for _ in range(200):
        w = random_target(2, 2, rng)
        try:
            ex = eliminate_big_cell(w, 2, 2)
        except ArithmeticError:
            continue
        if ex.real_count == 0:
            r = preimage_solve(w, 2, 2)
            assert r.count == 0 and r.signed_sum == 0 and r.complete
            return
    pytest.fail("no target without real preimages found")


def test_critical_value_is_rejected():
    # z^4 is the Wronskian of kcoef = 0, where both preimages collide
    with pytest.raises(NonGenericTargetError):
        preimage_solve(z**4, 2, 2)


def test_degree_must_be_mp():
    with pytest.raises(ValueError):
        preimage_solve(z**3 + 1, 2, 2)


@pytest.mark.parametrize("m,p", [(2, 2), (3, 2), (2, 3)])
def test_elimination_matches_planted(m, p, rng):
    w, kc = random_planted_target(m, p, rng, den=3)
    ex = eliminate_big_cell(w, m, p)
    assert ex.complex_count == schubert_degree(m, p)
    with mpmath.workdps(40):
        assert any(
            all(abs(mpmath.mpf(a.numerator) / a.denominator - b) < 1e-30 for ra, rb in zip(kc, sol) for a, b in zip(ra, rb))
            for sol in ex.real_solutions
        )
        for sol in ex.real_solutions:
            W = wronskian(big_cell_polys([[Fraction(mpmath.nstr(v, 35)) for v in row] for row in sol])).monic()
            assert all(abs(float(W.coeff(d) - w.monic().coeff(d))) < 1e-25 for d in range(m * p))


def test_backends_give_the_same_report(rng):
    w = random_real_rooted_target(3, 2, rng)
    a = preimage_solve(w, 3, 2, backend="numpy", oracle=False)
    b = preimage_solve(w, 3, 2, backend="numba", oracle=False) if "numba" in _backends() else a
    assert [s.sign for s in a.solutions] == [s.sign for s in b.solutions]
    assert all(_same_point(s, t) for s, t in zip(a.solutions, b.solutions))


def _backends():
    from conftest import BACKENDS

    return BACKENDS


def _same_point(s, t):
    return all(abs(x - y) <= 1e-25 * (1 + abs(x)) for rx, ry in zip(s.kcoef, t.kcoef) for x, y in zip(rx, ry))


def test_report_json():
    r = preimage_solve(RationalPoly.from_roots([-2, -1, 1, 3]), 2, 2, seed=5)
    js = r.to_json()
    assert set(js) >= {"target", "solutions", "signed_sum", "budget", "seed"}
    assert js["seed"] == 5 and js["budget"] == 2 and js["signed_sum"] == 0
    assert all(set(s) >= {"kcoef", "sign", "residual"} for s in js["solutions"])


def test_bk_rows_inverts_to_kcoef():
    from wronski.degree_lab import adaptive_seed_chain

    q, _ = adaptive_seed_chain((1, 2, 1, 2, 1, 2))
    rows = bk_rows(q.to_kcoef())
    assert [[Fraction(a) if isinstance(a, int) else a for a in row] for row in rows] == [list(r) for r in q.rows]


@pytest.mark.parametrize("m,p", [(2, 2), (3, 2), (2, 3)])
def test_sharpness(m, p, backend):
    r = sharpness_check(m, p, backend=backend)
    assert r.count == schubert_degree(m, p)
    assert r.extra["sharp"] and r.extra["rankings_biject"]
    assert sorted(s.ranking for s in r.solutions) == sorted(enumerate_ballot(m, p))
