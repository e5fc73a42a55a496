from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from wronski import linalg
from wronski.grassmann import big_cell_polys
from wronski.polynomials import (
    RationalPoly,
    count_roots,
    critical_points,
    poly_gcd,
    real_roots,
    refine_root,
    root_to_mpf,
    square_free_decomposition,
    wronskian,
    wronskian_partial,
)

from strategies import fractions, kcoefs, matrices, nonzero_fractions, polys

z = RationalPoly([0, 1])


def P(*cs):
    return RationalPoly(list(cs))


def test_wronskian_examples():
    assert wronskian([z**2 + z, z**3]) == z**4 + 2 * z**3
    assert wronskian([P(1), z]) == P(1)
    f = z**2 + 1
    assert wronskian([f, f * 2]).is_zero
    with pytest.raises(ValueError):
        wronskian([])


def test_wronskian_partial_examples():
    f = P(3, 1, 4)
    for l in range(4):
        assert wronskian_partial([f], 1, l) == RationalPoly.monomial(l)
    assert wronskian_partial([z**2 + z * Fraction(5), z**3], 1, 1) == z**3 * 2
    with pytest.raises(IndexError):
        wronskian_partial([f], 2, 0)


def test_wronskian_partial_finite_difference():
    # exact central difference: W is linear in each slot, so it is exact
    fs = [P(1, 2, 0, 1), P(-1, 0, 3, 0, 1), P(2, 1)]
    h = Fraction(1, 10**6)
    for i in (1, 2, 3):
        for l in range(4):
            up = list(fs)
            dn = list(fs)
            up[i - 1] = fs[i - 1] + RationalPoly.monomial(l, h)
            dn[i - 1] = fs[i - 1] - RationalPoly.monomial(l, h)
            fd = (wronskian(up) - wronskian(dn)) * (1 / (2 * h))
            assert fd == wronskian_partial(fs, i, l)


def test_real_roots_examples():
    rs = real_roots(z**2 - 1)
    assert [(r.lo, r.multiplicity) for r in rs] == [(-1, 1), (1, 1)]
    rs = real_roots(z**3 * (z + 2))
    assert [(r.lo, r.hi, r.multiplicity) for r in rs] == [(-2, -2, 1), (0, 0, 3)]
    assert real_roots(z**2 + 1) == []
    with pytest.raises(ValueError):
        real_roots(RationalPoly())


def test_real_roots_interval_and_refinement():
    f = z**2 - 2
    (r,) = real_roots(f, lo=0, hi=2, width=Fraction(1, 10**12))
    assert r.hi - r.lo <= Fraction(1, 10**12)
    assert abs(float(r) - 2**0.5) < 1e-11
    assert abs(root_to_mpf(f, real_roots(f, 0, 2)[0], 30) ** 2 - 2) < 1e-28
    r2 = refine_root(f, real_roots(f, 0, 2)[0], Fraction(1, 1000))
    assert r2.hi - r2.lo <= Fraction(1, 1000)


def test_critical_points_examples():
    assert [r.lo for r in critical_points(P(1), z**2)] == [0]
    assert critical_points(z, z**2 - 1) == []
    with pytest.raises(ValueError):
        critical_points(z, z**2)


@given(polys(3), polys(3))
def test_quotient_rule(f1, f2):
    assume(not f1.is_zero)
    # (f2/f1)' f1^2 = f2' f1 - f2 f1' = W(f1, f2)
    assert f2.derivative() * f1 - f2 * f1.derivative() == wronskian([f1, f2])


@given(st.lists(polys(5), min_size=3, max_size=3), polys(5), polys(5), fractions, fractions, st.integers(0, 2))
def test_multilinearity(fs, g, h, alpha, beta, slot):
    def w(x):
        gs = list(fs)
        gs[slot] = x
        return wronskian(gs)

    assert w(g * alpha + h * beta) == w(g) * alpha + w(h) * beta


@given(st.data())
def test_matrix_action(data):
    p = data.draw(st.sampled_from([2, 3]))
    fs = data.draw(st.lists(polys(5), min_size=p, max_size=p))
    A = data.draw(matrices(p, p))
    gs = [sum((f * A[i][j] for j, f in enumerate(fs)), RationalPoly()) for i in range(p)]
    assert wronskian(gs) == wronskian(fs) * linalg.det(A)


@given(st.data())
def test_degree_bound_and_big_cell_equality(data):
    m = data.draw(st.integers(1, 3))
    p = data.draw(st.integers(1, 3))
    fs = data.draw(st.lists(polys(m + p - 1), min_size=p, max_size=p))
    W = wronskian(fs)
    assert W.is_zero or W.degree <= m * p
    kc = data.draw(kcoefs(m, p))
    assert wronskian(big_cell_polys(kc)).degree == m * p


@given(st.lists(st.tuples(st.integers(-8, 8), st.integers(1, 3)), min_size=1, max_size=4, unique_by=lambda t: t[0]),
       st.integers(0, 2))
def test_sturm_count_matches_factored(roots, quad):
    f = RationalPoly([1])
    for r, mult in roots:
        f = f * (z - Fraction(r, 2)) ** mult
    f = f * (z**2 + 1) ** quad
    assert count_roots(f) == len(roots)
    got = real_roots(f)
    assert [(r.lo, r.multiplicity) for r in got] == sorted((Fraction(r, 2), mult) for r, mult in roots)
    assert all(r.exact for r in got)
    assert count_roots(f, Fraction(-1, 1), Fraction(1, 1)) == sum(1 for r, _ in roots if -2 < r <= 2)


@given(polys(6))
def test_square_free_decomposition_reconstructs(f):
    assume(not f.is_zero and f.degree > 0)
    g = RationalPoly([f.lc])
    for a, i in square_free_decomposition(f):
        assert poly_gcd(a, a.derivative()).degree == 0
        g = g * a**i
    assert g == f


@given(polys(6))
def test_isolating_intervals_are_disjoint(f):
    assume(not f.is_zero and f.degree > 0)
    rs = real_roots(f)
    assert sum(r.multiplicity for r in rs) <= f.degree
    for a, b in zip(rs, rs[1:]):
        assert a.hi <= b.lo or (a.exact and a.lo < b.lo)


def test_json_round_trip():
    f = P(Fraction(1, 3), 0, -2)
    assert RationalPoly.from_json(f.to_json()) == f
    assert RationalPoly.from_json({"coeffs": ["0.25", "1"]}) == P(Fraction(1, 4), 1)
