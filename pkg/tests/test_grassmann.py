from fractions import Fraction
from math import comb as binom

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from wronski import linalg
from wronski.grassmann import (
    RankError,
    big_cell_matrix,
    big_cell_polys,
    column_subsets,
    in_big_cell,
    matrix_from_json,
    matrix_to_json,
    osculating_E,
    plucker,
    plucker_to_json,
    projection_matrix,
    wronski_map,
)
from wronski.polynomials import RationalPoly, wronskian

from strategies import kcoefs, matrices

CASES = [(2, 2), (3, 2), (2, 3), (3, 3)]
z = RationalPoly([0, 1])


def test_plucker_examples():
    K = big_cell_matrix([[0, 0], [0, 0]])
    coords = plucker(K)
    assert len(coords) == binom(4, 2)
    assert sum(1 for c in coords if c) == 1
    assert plucker([[3, -1, 2]]) == [3, -1, 2]
    with pytest.raises(RankError):
        plucker([[1, 2, 3], [2, 4, 6]])


def test_osculating_examples():
    E = osculating_E(0, 2, 2)
    assert E == [[0, 0, 0, 1], [0, 0, 1, 0]]
    E = osculating_E(0, 3, 3)
    assert E[2] == [0, 0, 0, 2, 0, 0]
    assert osculating_E(2, 2, 2)[0] == [8, 4, 2, 1]


@given(st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5)))
def test_osculating_rows_are_derivatives(z0):
    m, p = 2, 3
    E = osculating_E(z0, m, p)
    n = m + p
    F = [RationalPoly.monomial(n - 1 - c) for c in range(n)]
    for j in range(p):
        assert E[j] == [f.derivative(j)(z0) for f in F]


def test_wronski_map_symbolic_example():
    # phi(K) for m = p = 2, checked on a grid of integer coefficients
    for k11, k12, k21, k22 in [(1, 2, 3, 4), (0, -1, 2, 5), (3, 0, 0, -2)]:
        K = big_cell_matrix([[k11, k12], [k21, k22]])
        expected = RationalPoly([k12 * k21 - k11 * k22, -2 * k21, 3 * k22 - k11, 2 * k12, -1])
        assert wronski_map(K).is_proportional(expected)
        f1, f2 = z**3 - z * k11 - k21, z**2 - z * k12 - k22
        assert wronskian([f1, f2]).is_proportional(expected)


def test_kcoef_zero_gives_monomial():
    for m, p in CASES:
        w = wronski_map(big_cell_matrix([[0] * p for _ in range(m)]))
        assert w.is_proportional(RationalPoly.monomial(m * p))
    assert wronskian([z**3, z**2]) == -(z**4)


def test_big_cell_polys_examples():
    assert big_cell_polys([[0, 0], [0, 0]]) == [z**3, z**2]
    assert big_cell_polys([[1, 2], [3, 4]]) == [z**3 - z - 3, z**2 - z * 2 - 4]


@pytest.mark.parametrize("m,p", CASES)
@given(data=st.data())
def test_big_cell_consistency(m, p, data):
    kc = data.draw(kcoefs(m, p))
    w = wronski_map(big_cell_matrix(kc))
    assert w.degree == m * p
    assert w.is_proportional(wronskian(big_cell_polys(kc)))


@pytest.mark.parametrize("m,p", [(2, 2), (2, 3)])
@given(data=st.data())
def test_left_action_scales_by_det(m, p, data):
    K = data.draw(matrices(m, m + p))
    U = data.draw(matrices(m, m))
    assume(linalg.rank(K) == m and linalg.det(U) != 0)
    UK = linalg.matmul(U, K)
    d = linalg.det(U)
    assert plucker(UK) == [d * c for c in plucker(K)]
    assert wronski_map(UK, normalize=False) == wronski_map(K, normalize=False) * d


@pytest.mark.parametrize("m,p", [(2, 2), (3, 2), (2, 3)])
@given(data=st.data())
def test_boundary_drops_degree(m, p, data):
    K = data.draw(matrices(m, m + p))
    # force the rightmost m x m block to be singular
    for r in K:
        r[-1] = r[-2]
    assume(linalg.rank(K) == m)
    assert not in_big_cell(K)
    assert wronski_map(K).degree < m * p


@pytest.mark.parametrize("m,p", [(2, 2), (3, 2), (2, 3)])
def test_linear_in_plucker_coordinates(m, p, rng):
    # fit the linear map from Pluecker coordinates to coefficients on random
    # points, then test it on fresh ones; compare with the Laplace expansion
    N = binom(m + p, m)
    pts = []
    while len(pts) < N:
        K = linalg.random_matrix(rng, m, m + p, -4, 4)
        if linalg.rank(K) == m:
            pts.append(K)
    X = [plucker(K) for K in pts]
    if linalg.rank(X) < N:
        pytest.skip("degenerate sample")
    Y = [[wronski_map(K, normalize=False).coeff(d) for d in range(m * p + 1)] for K in pts]
    fit = linalg.solve(X, Y)  # N x (mp+1)
    M = projection_matrix(m, p)
    assert [[fit[t][d] for t in range(N)] for d in range(m * p + 1)] == M
    for _ in range(5):
        K = linalg.random_matrix(rng, m, m + p, -4, 4)
        if linalg.rank(K) < m:
            continue
        pl = plucker(K)
        w = wronski_map(K, normalize=False)
        assert [sum(M[d][t] * pl[t] for t in range(N)) for d in range(m * p + 1)] == [
            w.coeff(d) for d in range(m * p + 1)
        ]


def test_json_round_trip():
    K = [[Fraction(1, 2), 0, 1, 0], [3, -1, 0, 1]]
    obj = matrix_to_json(K)
    assert obj["m"] == 2 and obj["p"] == 2
    assert matrix_from_json(obj) == linalg.as_matrix(K)
    assert matrix_from_json([["1/2", 0, 1, 0], [3, -1, 0, 1]]) == linalg.as_matrix(K)
    with pytest.raises(ValueError):
        matrix_from_json({"m": 3, "p": 2, "entries": obj["entries"]})
    pj = plucker_to_json(K)
    assert pj["order"] == "colex"
    assert [c["subset"] for c in pj["coordinates"]] == [list(S) for S in column_subsets(4, 2)]
