from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wronski.combinatorics import enumerate_ballot, inversions
from wronski.degree_lab import (
    BKValidationError,
    BKVector,
    FStepError,
    MultiIndexK,
    ThornTarget,
    adaptive_seed_chain,
    adaptive_walk,
    apply_F,
    base_cell,
    chi,
    coefficient_ranking,
    jacobi_delta,
    kcond,
    new_root_slope,
    perturb_point,
    seed_chain,
    thorn_chain,
    thorn_roots,
    validate_bk,
    wronskian_roots_coords,
)
from wronski.grassmann import big_cell_polys
from wronski.polynomials import RationalPoly, wronskian

from fd import fd_jacobian

z = RationalPoly([0, 1])
CASES = [(2, 2), (3, 2), (2, 3)]
Q = Fraction(1, 4)


def test_validate_example():
    q = [z**2 + z * Q, z**3]
    k = validate_bk(q)
    assert k == MultiIndexK(2, (1, 3))
    # z^3 (z + 1/2): the root at 0 has multiplicity 3
    assert k.defect == 3
    W = wronskian(q)
    assert W == z**4 + z**3 * Fraction(1, 2)
    assert [float(x) for x in wronskian_roots_coords(BKVector.from_polys(q))] == [0.5]
    with pytest.raises(BKValidationError):
        validate_bk([z**2 + z, z**3])
    with pytest.raises(BKValidationError):
        validate_bk([z**2 - z * Q, z**3])


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_base_cell_range(p):
    m = 2
    # the new root of the base cell is -p a, so the cell condition is a < 1/p
    assert validate_bk(base_cell(m, p, Fraction(1, p) - Fraction(1, 1000))).defect == m * p - 1
    with pytest.raises(BKValidationError):
        validate_bk(base_cell(m, p, Fraction(1, p)))
    a = Fraction(1, 7 * p)
    (x,) = wronskian_roots_coords(base_cell(m, p, a))
    with mpmath.workdps(50):
        assert abs(x - mpmath.mpf(p * a.numerator) / a.denominator) < mpmath.mpf(10) ** -45


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_base_cell_jacobian_is_p(p):
    d = jacobi_delta(base_cell(3, p, Fraction(1, 10 * p)))
    assert d.exact and d.det == p


def test_defect_zero_has_mp_coordinates():
    q, _ = adaptive_seed_chain((1, 2, 1, 2, 1, 2))
    assert q.defect == 0
    assert len(wronskian_roots_coords(q)) == 6


def test_chi_examples():
    m, p = 3, 3
    base = base_cell(m, p, Q).index
    assert chi(base, 1) == 0
    assert chi(base, 2) == 1
    full = MultiIndexK(m, tuple(range(p)))
    assert chi(full, p) == (p - 1) * m
    with pytest.raises(IndexError):
        chi(full, p + 1)


def test_apply_F_reduces_defect():
    q = base_cell(2, 2, Q)
    r = apply_F(q, 1, Fraction(1, 100))
    assert r.k == (0, 3) and r.defect == q.defect - 1
    assert r.wronskian().order() == q.wronskian().order() - 1
    with pytest.raises(FStepError):
        apply_F(r, 1, Fraction(1, 1000))  # k_1 = 0
    with pytest.raises(FStepError):
        apply_F(q, 1, Fraction(1, 2))  # leaves the cell
    assert not kcond((0, 1), 2) and kcond((0, 2), 2) and kcond((1, 3), 1)


def test_new_root_asymptotics():
    q = base_cell(2, 2, Q)
    for i in (1, 2):
        slope = new_root_slope(q, i)
        r = []
        for a in [Fraction(1, 10**3), Fraction(1, 10**4), Fraction(1, 10**5)]:
            x = wronskian_roots_coords(apply_F(q, i, a))[0]
            r.append(x / (mpmath.mpf(a.numerator) / a.denominator))
        errs = [abs(v - slope) for v in r]
        assert errs[0] > errs[1] > errs[2]
        # first-order error: one Richardson step removes it
        rich = (10 * r[2] - r[1]) / 9
        assert abs(rich - slope) < errs[2] / 10


def test_fixed_schedule_is_too_coarse():
    sched = [Q, Fraction(1, 16), Fraction(1, 64), Fraction(1, 256)]
    with pytest.raises(FStepError, match="step 2"):
        seed_chain((1, 1, 2, 2), sched)
    with pytest.raises(FStepError, match="step 4"):
        seed_chain((1, 2, 1, 2), sched)


def test_seed_chain_with_a_fine_schedule():
    for s in enumerate_ballot(2, 2):
        _, sched = adaptive_seed_chain(s)
        q = seed_chain(s, sched)
        assert coefficient_ranking(q) == s


@pytest.mark.parametrize("m,p", CASES)
def test_walk_recovers_sigma_and_sign(m, p):
    mus = set()
    for s in enumerate_ballot(m, p):
        q, sched = adaptive_seed_chain(s)
        assert q.k == tuple(range(p))
        assert all(b < a for a, b in zip(sched, sched[1:]))
        assert coefficient_ranking(q) == s
        mus.add(jacobi_delta(q).sign * (-1) ** inversions(s))
    assert len(mus) == 1


@settings(max_examples=20)
@given(st.sampled_from(CASES), st.integers(0, 10**6))
def test_sign_law(case, seed):
    rng = np.random.default_rng(seed)
    m, p = case
    sigmas = list(enumerate_ballot(m, p))
    s = sigmas[rng.integers(len(sigmas))]
    steps = list(adaptive_walk(s))
    q = perturb_point(steps[rng.integers(len(steps) - 1)][0], rng)
    before = jacobi_delta(q).sign
    rows = [i for i in range(1, p + 1) if kcond(q.k, i)]
    i = rows[rng.integers(len(rows))]
    # small: the new root (about slope * a) sits 100 times below the others
    xs = wronskian_roots_coords(q)
    x1 = Fraction(mpmath.nstr(xs[0], 15)) if xs else Fraction(1)
    a = x1 / (100 * new_root_slope(q, i))
    for _ in range(200):
        try:
            r1, r2 = apply_F(q, i, a), apply_F(q, i, a / 2)
            break
        except FStepError:
            a /= 2
    want = before * (-1) ** chi(q.index, i)
    assert jacobi_delta(r1).sign == want == jacobi_delta(r2).sign


@settings(max_examples=10)
@given(st.sampled_from(CASES), st.integers(0, 10**6))
def test_jacobian_matches_finite_differences(case, seed):
    rng = np.random.default_rng(seed)
    m, p = case
    sigmas = list(enumerate_ballot(m, p))
    q = perturb_point(adaptive_seed_chain(sigmas[rng.integers(len(sigmas))])[0], rng)
    J = jacobi_delta(q).entries
    FD = fd_jacobian(q)
    for row, frow in zip(J, FD):
        scale = max(abs(v) for v in row)
        for v, w in zip(row, frow):
            assert abs(v - w) <= 1e-4 * max(abs(v), 1e-12 * scale)


@pytest.mark.parametrize("spacing", ["geometric", "steep"])
def test_thorn_target(spacing):
    T = ThornTarget(6, Fraction(1, 100), spacing)
    xs = T.roots()
    assert 0 < xs[0] and xs[-1] < 1
    assert all(a < T.delta * b or a == T.delta * b for a, b in zip(xs, xs[1:]))
    assert T.poly() == RationalPoly.from_roots([-x for x in xs])
    assert thorn_roots(6, Fraction(1, 100), spacing) == xs
    with pytest.raises(ValueError):
        ThornTarget(6, Fraction(3, 2))


def test_steep_thorn_exponents():
    T = ThornTarget(4, Fraction(1, 10))
    assert [T.exponent(s) for s in range(1, 5)] == [1, 3, 7, 15]
    assert T.roots()[0] == Fraction(1, 10**15)


@pytest.mark.parametrize("m,p", CASES)
def test_thorn_chain_lands_on_target(m, p):
    T = ThornTarget(m * p, Fraction(1, 100))
    for s in enumerate_ballot(m, p):
        q = thorn_chain(s, T, m)
        assert q.k == tuple(range(p))
        assert coefficient_ranking(q) == s
        xs = wronskian_roots_coords(q, dps=40)
        with mpmath.workdps(40):
            for x, t in zip(xs, T.roots()):
                assert abs(x / (mpmath.mpf(t.numerator) / t.denominator) - 1) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize("m,p", CASES)
def test_to_kcoef_spans_the_same_space(m, p):
    q, _ = adaptive_seed_chain(next(iter(enumerate_ballot(m, p))))
    W = wronskian(big_cell_polys(q.to_kcoef()))
    assert W == q.wronskian() * (-1) ** (p * (p - 1) // 2)
