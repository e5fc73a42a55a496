"""Exact elimination oracle for small big-cell preimage problems.

The coefficient equations coeffs(W(f_1..f_p)) = lc * w are put into a lex
Groebner basis (sympy).  For a generic target the basis has shape form

    x_1 - h_1(x_n), ..., x_{n-1} - h_{n-1}(x_n), g(x_n)

so the real solutions are exactly the real roots of g, which are isolated
with Sturm sequences and back-substituted at high precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy as sp

from ..polynomials import RationalPoly, real_roots, root_to_mpf

__all__ = ["EliminationError", "RepeatedSolutionError", "EliminationResult", "eliminate_big_cell"]


class EliminationError(ArithmeticError):
    """The basis is not in shape form (non-generic target)."""


class RepeatedSolutionError(EliminationError):
    """Some solution has multiplicity > 1: the target is a critical value."""


@dataclass
class EliminationResult:
    univariate: RationalPoly  # g(x_n)
    complex_count: int
    real_solutions: list  # list of m x p kcoef matrices of mpf

    @property
    def real_count(self) -> int:
        return len(self.real_solutions)


def _symbols(m, p):
    return [[sp.Symbol(f"k{i + 1}_{j + 1}") for j in range(p)] for i in range(m)]


def _to_rpoly(expr, x) -> RationalPoly:
    coeffs = sp.Poly(expr, x).all_coeffs()[::-1]
    return RationalPoly([Fraction(int(c.p), int(c.q)) for c in coeffs])


def eliminate_big_cell(target: RationalPoly, m: int, p: int, dps: int = 50) -> EliminationResult:
    """All real big-cell K with W(f_{1,K}, ..., f_{p,K}) proportional to target."""
    n = m * p
    if target.degree != n:
        raise ValueError(f"target must have degree {n}")
    z = sp.Symbol("z")
    K = _symbols(m, p)
    fs = [z ** (m + p - 1 - j) - sum(K[i][j] * z ** (m - 1 - i) for i in range(m)) for j in range(p)]
    W = sp.Matrix([[sp.diff(f, z, r) for f in fs] for r in range(p)]).det(method="berkowitz")
    P = sp.Poly(sp.expand(W), z)
    lc = P.coeff_monomial(z**n)
    w = target.monic()
    eqs = [P.coeff_monomial(z**d) - lc * sp.Rational(w.coeff(d).numerator, w.coeff(d).denominator)
           for d in range(n)]
    xs = [K[i][j] for i in range(m) for j in range(p)]
    # a repeated root in every eliminant means a multiple solution; a single
    # non-separating form can also produce one, so only unanimity counts
    outcomes = []
    try:
        return _solve_shape(eqs, xs, xs, K, dps)
    except EliminationError as exc:
        outcomes.append(isinstance(exc, RepeatedSolutionError))
    # the last coordinate does not separate the solutions: eliminate onto a
    # generic linear form t instead
    t = sp.Symbol("t")
    for attempt in range(1, 6):
        form = sum((attempt * i + 1) * x for i, x in enumerate(xs))
        try:
            return _solve_shape(eqs + [t - form], xs + [t], xs, K, dps)
        except EliminationError as exc:
            outcomes.append(isinstance(exc, RepeatedSolutionError))
    if all(outcomes):
        raise RepeatedSolutionError("every eliminant has a repeated real root")
    raise EliminationError("no separating linear form found")


def _solve_shape(eqs, variables, xs, K, dps) -> EliminationResult:
    G = sp.groebner(eqs, *variables, order="lex")
    last = variables[-1]
    polys = list(G.exprs)
    if len(polys) != len(variables):
        raise EliminationError("Groebner basis is not in shape form")
    g = polys[-1]
    if g.free_symbols - {last}:
        raise EliminationError("last basis element is not univariate")
    subs = {}
    for x, h in zip(variables[:-1], polys[:-1]):
        if h.free_symbols - {x, last} or sp.degree(h, x) != 1:
            raise EliminationError(f"basis element for {x} is not of the form x - h(last)")
        (sol,) = sp.solve(h, x)
        subs[x] = sp.lambdify(last, sol, modules="mpmath")
    gu = _to_rpoly(g, last)
    roots = real_roots(gu)
    if any(r.multiplicity > 1 for r in roots):
        raise RepeatedSolutionError("eliminant has a repeated real root")
    m, p = len(K), len(K[0])
    out = []
    with mpmath.workdps(dps):
        for r in roots:
            val = root_to_mpf(gu, r, dps)
            vals = {x: subs[x](val) for x in variables[:-1]}
            vals[last] = val
            out.append([[vals[K[i][j]] for j in range(p)] for i in range(m)])
    return EliminationResult(univariate=gu, complex_count=gu.degree, real_solutions=out)
