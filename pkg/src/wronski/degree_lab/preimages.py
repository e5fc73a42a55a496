"""Real preimages of a target polynomial under the big-cell Wronski map.

The unknowns are the mp big-cell coordinates k_ij (index i*p + j).  A
target w of degree mp is matched after monic normalisation:
coeffs(W(f_1..f_p))[d] = lc * w_d / w_mp for d < mp, where lc is the
(constant) leading coefficient of the Wronskian on the big cell.

Solutions come from batched damped Newton in double precision (numba or
numpy kernel) followed by mpmath polishing; thorn-chain endpoints can be
fed in as extra seeds.  Each solution carries the sign of the Jacobian
determinant d coeffs / d k, certified by agreement at two precisions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .. import linalg
from ..combinatorics import enumerate_ballot, real_degree, schubert_degree
from ..grassmann import big_cell_polys
from ..kernels import newton_batch
from ..polynomials import RationalPoly, as_fraction, wronskian
from . import numeric
from .cells import ThornTarget, _digit_span, ranking_from_rows, thorn_chain
from .elimination import RepeatedSolutionError, eliminate_big_cell

# cases where the exact elimination runs by default (well under a second)
ORACLE_CASES = {(2, 2), (3, 2), (2, 3)}

__all__ = [
    "NonGenericTargetError",
    "DegreeInconsistencyError",
    "Solution",
    "PreimageReport",
    "big_cell_table",
    "preimage_solve",
    "solution_sign",
    "random_planted_target",
    "random_target",
    "random_real_rooted_target",
    "signed_sum_reports",
    "degree_signed_sum",
    "bk_rows",
    "sharpness_check",
]

log = logging.getLogger(__name__)

DEDUPE_RTOL = 1e-8
STARTS_PER_DEGREE = 200
START_BOX = 3.0


class NonGenericTargetError(ArithmeticError):
    """A solution has a singular (or numerically unsigned) Jacobian."""


class DegreeInconsistencyError(AssertionError):
    """Signed sums differ between targets or disagree with I(m, p)."""


@dataclass
class Solution:
    kcoef: list  # m x p of mpf
    sign: int
    residual: float
    ranking: tuple | None = None

    def to_json(self, digits: int = 25) -> dict:
        out = {
            "kcoef": [[mpmath.nstr(v, digits) for v in row] for row in self.kcoef],
            "sign": self.sign,
            "residual": self.residual,
        }
        if self.ranking is not None:
            out["ranking"] = list(self.ranking)
        return out


@dataclass
class PreimageReport:
    m: int
    p: int
    target: RationalPoly
    solutions: list[Solution]
    budget: int
    seed: int
    starts: int = 0
    converged: int = 0
    complete: bool | None = None  # certified by exact elimination when available
    complex_count: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def signed_sum(self) -> int:
        return sum(s.sign for s in self.solutions)

    @property
    def count(self) -> int:
        return len(self.solutions)

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "p": self.p,
            "target": self.target.to_json(),
            "solutions": [s.to_json() for s in self.solutions],
            "signed_sum": self.signed_sum,
            "budget": self.budget,
            "seed": self.seed,
            "starts": self.starts,
            "converged": self.converged,
            "complete": self.complete,
        }
        out.update(self.extra)
        return out


@lru_cache(maxsize=None)
def big_cell_table(m: int, p: int):
    """(table, lc): equations for the coefficients of z^0..z^{mp-1}."""
    table = numeric.build_table(numeric.big_cell_slots(m, p), m * p, list(range(m * p)))
    return table, numeric.leading_constant(table)


def _rhs(target: RationalPoly, m, p):
    _, lc = big_cell_table(m, p)
    w = target.monic()
    return [lc * w.coeff(d) for d in range(m * p)]


def _mp_vec(x):
    return [mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else mpmath.mpf(v) for v in x]


def solution_sign(x, target: RationalPoly, m: int, p: int, dps: int = 40) -> int:
    """Sign of det d coeffs / d k at a solution, agreed between two precisions.

    The working precision grows with the decimal span of the target's
    coefficients (thorn targets span hundreds of decades).
    """
    table, _ = big_cell_table(m, p)
    rhs = _rhs(target, m, p)
    work = dps + _digit_span(target)
    signs = []
    for extra in (0, 25):
        with mpmath.workdps(work + extra):
            _, J = numeric.eval_mp(table, _mp_vec(x), _mp_vec(rhs))
            d = mpmath.det(J)
            # Hadamard: |det| <= product of row norms
            scale = mpmath.mpf(1)
            for r in range(J.rows):
                scale *= mpmath.norm(J[r, :])
            if scale == 0 or abs(d) <= scale * mpmath.mpf(10) ** (10 - work):
                raise NonGenericTargetError("singular Jacobian at a solution")
            signs.append(1 if d > 0 else -1)
    if signs[0] != signs[1]:
        raise NonGenericTargetError("Jacobian sign is not stable under a precision increase")
    return signs[0]


def _same(a, b, rtol, atol=0.0) -> bool:
    return all(abs(u - v) <= rtol * max(abs(u), abs(v)) + atol for u, v in zip(a, b))


def _dedupe(points, rtol, atol=0.0):
    out = []
    for x in points:
        if not any(_same(x, y, rtol, atol) for y in out):
            out.append(x)
    return out


def _polish(xs, target, m, p, dps):
    table, _ = big_cell_table(m, p)
    rhs = _rhs(target, m, p)
    work = dps + _digit_span(target)
    out = []
    for x0 in xs:
        with mpmath.workdps(work):
            x, res, ok = numeric.newton_mp(
                table, _mp_vec(x0), _mp_vec(rhs), dps=work, maxiter=60, rtol_digits=work // 2
            )
        if not ok or not all(mpmath.isfinite(v) for v in x):
            continue
        # the step test alone also passes on runs drifting to infinity
        if res > mpmath.mpf(10) ** (-(work // 2)) * (1 + max(abs(v) for v in _mp_vec(rhs))):
            continue
        out.append((x, float(res)))
    return out


def preimage_solve(
    target: RationalPoly,
    m: int,
    p: int,
    seed: int = 0,
    starts: int | None = None,
    seeds=(),
    backend=None,
    dps: int = 40,
    oracle: bool | None = None,
) -> PreimageReport:
    """Find the real big-cell preimages of ``target``.

    ``seeds`` are extra starting points (m x p rational matrices or flat
    vectors), e.g. thorn-chain endpoints.  For the small cases in
    ``ORACLE_CASES`` the exact elimination oracle runs by default and sets
    ``complete``.
    """
    target = RationalPoly(target) if not isinstance(target, RationalPoly) else target
    n = m * p
    if target.degree != n:
        raise ValueError(f"target must have degree exactly {n}, got {target.degree}")
    budget = schubert_degree(m, p)
    if starts is None:
        starts = STARTS_PER_DEGREE * budget
    rng = np.random.default_rng(seed)
    X0 = rng.uniform(-START_BOX, START_BOX, size=(starts, n))
    table, _ = big_cell_table(m, p)
    rhs = np.array([float(c) for c in _rhs(target, m, p)])
    X, conv, _ = newton_batch(X0, table, rhs, backend=backend)
    cand = [list(x) for x in X[conv]]
    # coarse merge before the expensive polish; sorting makes the result
    # independent of start order
    cand.sort()
    cand = _dedupe(cand, 1e-6, 1e-9)
    for s in seeds:
        flat = [v for row in s for v in row] if isinstance(s[0], (list, tuple)) else list(s)
        cand.append([as_fraction(v) for v in flat])
    polished = _polish(cand, target, m, p, dps)
    # polished coordinates are good to about `work` digits; anything below
    # that floor is noise (an exact zero against 1e-50, say)
    floor = mpmath.mpf(10) ** (15 - dps - _digit_span(target))
    uniq = []
    for x, res in polished:
        if not any(_same(x, y, DEDUPE_RTOL, floor) for y, _ in uniq):
            uniq.append((x, res))
    uniq.sort(key=lambda t: [float(v) for v in t[0]])
    sols = []
    for x, res in uniq:
        sign = solution_sign(x, target, m, p, dps)
        x = [v if abs(v) > floor else mpmath.mpf(0) for v in x]
        kc = [[x[i * p + j] for j in range(p)] for i in range(m)]
        sols.append(Solution(kcoef=kc, sign=sign, residual=res))
    if len(sols) > budget:
        raise AssertionError(f"{len(sols)} distinct solutions exceed the complex count {budget}")
    report = PreimageReport(m, p, target, sols, budget, seed, starts=starts, converged=int(conv.sum()))
    if oracle is None:
        oracle = (m, p) in ORACLE_CASES
    if oracle:
        _certify(report, dps)
    return report


def _certify(report: PreimageReport, dps: int) -> None:
    """Compare against the exact elimination oracle; sets ``complete``."""
    try:
        ex = eliminate_big_cell(report.target, report.m, report.p, dps=dps)
    except RepeatedSolutionError as exc:
        raise NonGenericTargetError(str(exc)) from exc
    report.complex_count = ex.complex_count
    flat = [[v for row in kc for v in row] for kc in ex.real_solutions]
    found = [[v for row in s.kcoef for v in row] for s in report.solutions]
    floor = mpmath.mpf(10) ** (15 - dps)
    matched = all(any(_same(a, b, 1e-12, floor) for b in flat) for a in found)
    report.complete = matched and len(flat) == len(found)
    if not report.complete:
        log.warning("Newton found %d real solutions, elimination %d", len(found), len(flat))


def random_planted_target(m, p, rng, lo=-2, hi=2, den=2):
    """W of a random big-cell point; returns (target, planted kcoef)."""
    kc = linalg.random_matrix(rng, m, p, lo, hi, den)
    return wronskian(big_cell_polys(kc)).monic(), kc


def random_target(m, p, rng, lo=-3, hi=3, den=4) -> RationalPoly:
    """Monic degree-mp polynomial with random small rational coefficients."""
    n = m * p
    cs = [Fraction(int(rng.integers(lo * den, hi * den + 1)), den) for _ in range(n)]
    return RationalPoly(cs + [Fraction(1)])


def random_real_rooted_target(m, p, rng, lo=-3, hi=3, den=4) -> RationalPoly:
    """Monic polynomial with mp distinct random rational roots."""
    n = m * p
    pool = rng.choice(np.arange(lo * den, hi * den + 1), size=n, replace=False)
    return RationalPoly.from_roots([Fraction(int(v), den) for v in pool])


def signed_sum_reports(m, p, targets, seed=0, **opts) -> list[PreimageReport]:
    return [preimage_solve(w, m, p, seed=seed + t, **opts) for t, w in enumerate(targets)]


def degree_signed_sum(m, p, targets, seed=0, **opts) -> int:
    """Common signed preimage count over ``targets``; checks it equals +-I(m, p)."""
    reports = signed_sum_reports(m, p, targets, seed=seed, **opts)
    sums = {r.signed_sum for r in reports}
    if len(sums) != 1:
        raise DegreeInconsistencyError(f"signed sums differ across targets: {sorted(sums)}")
    (value,) = sums
    if abs(value) != real_degree(m, p):
        raise DegreeInconsistencyError(f"|signed sum| = {abs(value)} but I({m},{p}) = {real_degree(m, p)}")
    return value


def bk_rows(kcoef) -> list[list]:
    """Coefficient rows of the basis q_1, ..., q_p of span(f_1, ..., f_p) with
    q_i monic of degree m+i-1 and lowest term z^{i-1}.

    Row i lists the coefficients of z^{i-1}, ..., z^{m+i-2}, the layout of
    the cell b(0, 1, ..., p-1).  Works on mpf or Fraction entries.
    """
    m, p = len(kcoef), len(kcoef[0])
    n = m + p
    # f_j with j = 0..p-1 has degree n-1-j
    fs = []
    for j in range(p):
        cs = [0] * n
        cs[n - 1 - j] = 1
        for i in range(m):
            cs[m - 1 - i] = -kcoef[i][j]
        fs.append(cs)
    rows = []
    for i in range(1, p + 1):
        basis = [fs[p - 1 - t] for t in range(i)]  # degrees m .. m+i-1
        top = basis[-1]
        if i == 1:
            q = top
        else:
            A = mpmath.matrix([[basis[t][l] for t in range(i - 1)] for l in range(i - 1)])
            b = mpmath.matrix([-top[l] for l in range(i - 1)])
            c = mpmath.lu_solve(A, b)
            q = [top[l] + sum(c[t] * basis[t][l] for t in range(i - 1)) for l in range(n)]
        rows.append([q[l] for l in range(i - 1, m + i - 1)])
    return rows


def sharpness_check(
    m: int, p: int, delta=Fraction(1, 100), spacing: str = "steep", seed: int = 0, backend=None, starts=None
) -> PreimageReport:
    """Solve for a thorn target seeded by every thorn chain.

    The report's ``extra`` records whether all d(m, p) preimages were found,
    and whether their coefficient rankings are exactly the ballot sequences.
    """
    T = ThornTarget(m * p, delta, spacing)
    target = T.poly()
    sigmas = list(enumerate_ballot(m, p))
    ends = [thorn_chain(s, T, m) for s in sigmas]
    seeds = [q.to_kcoef() for q in ends]
    report = preimage_solve(target, m, p, seed=seed, starts=starts, seeds=seeds, backend=backend, oracle=False)
    for sol in report.solutions:
        with mpmath.workdps(40 + _digit_span(target)):
            rows = bk_rows(sol.kcoef)
        if all(a > 0 for row in rows for a in row):
            sol.ranking = ranking_from_rows(rows)
    rankings = [s.ranking for s in report.solutions]
    report.extra = {
        "delta": str(T.delta),
        "spacing": spacing,
        "sharp": report.count == report.budget,
        "rankings_biject": None not in rankings and sorted(rankings) == sorted(sigmas),
    }
    return report
