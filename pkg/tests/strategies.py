"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from wronski.polynomials import RationalPoly

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_fractions = fractions.filter(lambda x: x != 0)


def polys(max_degree=4):
    return st.lists(fractions, min_size=1, max_size=max_degree + 1).map(RationalPoly)


def matrices(rows, cols, elements=fractions):
    return st.lists(st.lists(elements, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def kcoefs(m, p):
    return matrices(m, p)
