"""Multilinear term tables for Wronskians with free coefficients.

Each slot (polynomial) is a list of ``(exponent, var, coeff)`` triples where
``var`` is -1 for a fixed monomial.  Expanding W by multilinearity gives
terms ``const * prod(x[var]) * z**deg`` with ``const`` the Vandermonde
product of the chosen exponents times the slot coefficients.  The same
table drives the float kernels and the mpmath evaluation below.
"""

from __future__ import annotations

from itertools import product

import mpmath
import numpy as np

from ..grassmann import monomial_wronskian
from ..kernels import TermTable

__all__ = [
    "build_table",
    "big_cell_slots",
    "bk_slots",
    "leading_constant",
    "eval_mp",
    "newton_mp",
]


def build_table(slots, nvars, eq_degrees) -> TermTable:
    const, deg, vidx = [], [], []
    for choice in product(*slots):
        c, d = monomial_wronskian([e for e, _, _ in choice])
        if c == 0:
            continue
        for _, _, a in choice:
            c *= a
        const.append(c)
        deg.append(d)
        vidx.append([v for _, v, _ in choice])
    return TermTable(const, deg, vidx, nvars, eq_degrees)


def big_cell_slots(m, p):
    """Slots of f_j = z^{m+p-j} - sum_i k_ij z^{m-i}; var index i*p + j (0-based)."""
    slots = []
    for j in range(p):
        s = [(m + p - 1 - j, -1, 1)]
        s += [(m - 1 - i, i * p + j, -1) for i in range(m)]
        slots.append(s)
    return slots


def bk_slots(m, p, k):
    """Slots of q_i = z^{m+i-1} + sum_l a_{i,l} z^l, vars in coefficient order."""
    slots, v = [], 0
    for i in range(p):
        s = [(m + i, -1, 1)]
        for l in range(k[i], m + i):
            s.append((l, v, 1))
            v += 1
        slots.append(s)
    return slots, v


def leading_constant(table: TermTable) -> int:
    """Coefficient of the all-fixed term of top degree."""
    fixed = np.all(table.vidx < 0, axis=1)
    top = table.deg[fixed].max()
    return int(round(table.const[fixed & (table.deg == top)].sum()))


def eval_mp(table: TermTable, x, rhs, want_jac=True):
    """Residual (and Jacobian) of ``coeffs(W)[eq] - rhs`` in mpmath."""
    E = len(rhs)
    r = [-mpmath.mpf(v) for v in rhs]
    J = mpmath.zeros(E, table.nvars) if want_jac else None
    for t in range(len(table.const)):
        e = int(table.eq_of_term[t])
        if e < 0:
            continue
        idx = [int(v) for v in table.vidx[t]]
        c = mpmath.mpf(int(table.const[t]))
        vals = [x[v] if v >= 0 else 1 for v in idx]
        prod_all = c
        for val in vals:
            prod_all *= val
        r[e] += prod_all
        if want_jac:
            for j, v in enumerate(idx):
                if v < 0:
                    continue
                d = c
                for jj, val in enumerate(vals):
                    if jj != j:
                        d *= val
                J[e, v] += d
    return r, J


def newton_mp(table: TermTable, x0, rhs, dps=50, maxiter=100, scale=None, rtol_digits=None):
    """Undamped Newton polish in mpmath; returns (x, residual_max, converged).

    Converged means every step component is below 10^-rtol_digits (default
    ``dps``) relative to its coordinate (or to ``scale`` when given), or
    below 10^-dps in absolute terms, which covers coordinates equal to 0.
    """
    with mpmath.workdps(dps + 10):
        x = [mpmath.mpf(v) for v in x0]
        rhs = [mpmath.mpf(v) for v in rhs]
        tol = mpmath.mpf(10) ** (-(dps if rtol_digits is None else rtol_digits))
        atol = mpmath.mpf(10) ** (-dps)
        conv = False
        for _ in range(maxiter):
            r, J = eval_mp(table, x, rhs)
            try:
                dx = mpmath.lu_solve(J, mpmath.matrix([-v for v in r]))
            except ZeroDivisionError:
                break
            x = [xi + dxi for xi, dxi in zip(x, dx)]
            # componentwise relative test: thorn solutions span many decades
            if all(abs(d) <= tol * (abs(xi) if scale is None else scale) or abs(d) <= atol
                   for d, xi in zip(dx, x)):
                conv = True
                break
        r, _ = eval_mp(table, x, rhs, want_jac=False)
        return x, max(abs(v) for v in r), conv
