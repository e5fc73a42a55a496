"""Ballot sequences, rectangular standard Young tableaux and the two degrees.

``schubert_degree(m, p)`` is the number of p x m standard Young tableaux
(the complex degree of the Wronski map).  ``I(m, p)`` is the absolute value
of the signed inversion sum over ballot sequences; it is computed here by
explicit enumeration, by a dynamic program over prefix count vectors, and
(for odd m + p) by the shifted-tableaux product formula.

Everything is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterator, Sequence

import numpy as np

from . import kernels

__all__ = [
    "CapExceededError",
    "SignedCount",
    "schubert_degree",
    "catalan",
    "is_ballot",
    "enumerate_ballot",
    "inversions",
    "ballot_to_syt",
    "syt_to_ballot",
    "tableau_inversions",
    "transpose_tableau",
    "signed_sum_enumerative",
    "signed_sum_dp",
    "signed_sum_corners",
    "ssyt_closed_form",
    "real_degree",
]

DEFAULT_ENUM_CAP = 10**7
DEFAULT_STATE_CAP = 5 * 10**6


class CapExceededError(RuntimeError):
    """Requested computation is larger than the configured cap."""


@dataclass(frozen=True)
class SignedCount:
    value: int
    count: int  # number of ballot sequences summed over
    method: str = ""

    @property
    def magnitude(self) -> int:
        return abs(self.value)


def _check_mp(m, p):
    if int(m) != m or int(p) != p or m < 1 or p < 1:
        raise ValueError(f"m and p must be positive integers, got ({m}, {p})")


def schubert_degree(m: int, p: int) -> int:
    """d(m,p) = 1!2!...(p-1)! (mp)! / (m!(m+1)!...(m+p-1)!), exactly."""
    _check_mp(m, p)
    num = prod(factorial(i) for i in range(1, p)) * factorial(m * p)
    den = prod(factorial(m + i) for i in range(p))
    q, r = divmod(num, den)
    assert r == 0
    return q


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def is_ballot(seq: Sequence[int], m: int, p: int) -> bool:
    """Symbols 1..p, each m times, every prefix has count(i) >= count(k) for i < k."""
    if len(seq) != m * p:
        return False
    counts = [0] * (p + 1)
    for s in seq:
        if not (isinstance(s, (int, np.integer)) and 1 <= s <= p):
            return False
        counts[s] += 1
        if s > 1 and counts[s] > counts[s - 1]:
            return False
    return all(c == m for c in counts[1:])


def enumerate_ballot(m: int, p: int) -> Iterator[tuple[int, ...]]:
    """Yield every ballot sequence (symbols 1..p) in lexicographic order."""
    _check_mp(m, p)
    n = m * p
    seq = [0] * n
    counts = [0] * (p + 1)
    counts[0] = m + 1  # sentinel so symbol 1 is limited only by m

    def legal(i):
        return counts[i] < m and counts[i - 1] > counts[i]

    def rec(pos):
        if pos == n:
            yield tuple(seq)
            return
        for i in range(1, p + 1):
            if legal(i):
                seq[pos] = i
                counts[i] += 1
                yield from rec(pos + 1)
                counts[i] -= 1

    yield from rec(0)


def inversions(s: Sequence[int]) -> int:
    """#{(j, k): j < k, s_j > s_k}."""
    n = len(s)
    return sum(1 for j in range(n) for k in range(j + 1, n) if s[j] > s[k])


def _shape_of(s: Sequence[int]) -> tuple[int, int]:
    p = max(s)
    m, r = divmod(len(s), p)
    if r or not is_ballot(s, m, p):
        raise ValueError(f"not a ballot sequence: {tuple(s)}")
    return m, p


def ballot_to_syt(s: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Put j into the leftmost free cell of row s_j."""
    m, p = _shape_of(s)
    rows: list[list[int]] = [[] for _ in range(p)]
    for j, i in enumerate(s, start=1):
        rows[i - 1].append(j)
    return tuple(tuple(r) for r in rows)


def _check_syt(rows) -> tuple[int, int]:
    p = len(rows)
    if p == 0:
        raise ValueError("empty tableau")
    m = len(rows[0])
    if m == 0 or any(len(r) != m for r in rows):
        raise ValueError("tableau is not rectangular")
    flat = sorted(x for r in rows for x in r)
    if flat != list(range(1, m * p + 1)):
        raise ValueError("entries are not a permutation of 1..mp")
    for r in rows:
        if any(a >= b for a, b in zip(r, r[1:])):
            raise ValueError("row not increasing")
    for upper, lower in zip(rows, rows[1:]):
        if any(a >= b for a, b in zip(upper, lower)):
            raise ValueError("column not increasing")
    return m, p


def syt_to_ballot(rows) -> tuple[int, ...]:
    m, p = _check_syt(rows)
    seq = [0] * (m * p)
    for i, r in enumerate(rows, start=1):
        for x in r:
            seq[x - 1] = i
    return tuple(seq)


def tableau_inversions(rows) -> int:
    """Pairs a < b where b sits in a higher row (smaller row index) than a."""
    _check_syt(rows)
    row_of = {x: i for i, r in enumerate(rows) for x in r}
    n = len(row_of)
    return sum(1 for a in range(1, n + 1) for b in range(a + 1, n + 1) if row_of[b] < row_of[a])


def transpose_tableau(rows):
    _check_syt(rows)
    return tuple(zip(*rows))


def signed_sum_enumerative(m: int, p: int, cap: int = DEFAULT_ENUM_CAP, backend=None) -> SignedCount:
    """Sum of (-1)^inv over all ballot sequences, by explicit enumeration."""
    _check_mp(m, p)
    total = schubert_degree(m, p)
    if total > cap:
        raise CapExceededError(
            f"d({m},{p}) = {total} exceeds the enumeration cap {cap}; use signed_sum_dp"
        )
    arr = kernels.ballot_array(m, p, total, backend=backend)
    inv = kernels.inversion_counts(arr, backend=backend)
    odd = int(np.count_nonzero(inv & 1))
    return SignedCount(value=total - 2 * odd, count=total, method="enumeration")


def signed_sum_dp(m: int, p: int, state_cap: int = DEFAULT_STATE_CAP) -> SignedCount:
    """Signed inversion sum by a DP over prefix count vectors.

    Appending symbol i to a prefix with counts c creates sum_{k>i} c_k new
    inversions, so the sign of a continuation depends only on c.  States are
    the weakly decreasing vectors c_1 >= ... >= c_p with c_1 <= m.
    """
    _check_mp(m, p)
    n_states = comb(m + p, p)
    if n_states > state_cap:
        raise CapExceededError(f"{n_states} DP states exceed the cap {state_cap}")
    layer: dict[tuple[int, ...], tuple[int, int]] = {(0,) * p: (1, 1)}
    for _ in range(m * p):
        nxt: dict[tuple[int, ...], tuple[int, int]] = {}
        for c, (val, cnt) in layer.items():
            above = 0  # sum of counts of symbols > i
            for i in range(p - 1, -1, -1):
                if c[i] < m and (i == 0 or c[i - 1] > c[i]):
                    key = c[:i] + (c[i] + 1,) + c[i + 1 :]
                    v = -val if above & 1 else val
                    pv, pc = nxt.get(key, (0, 0))
                    nxt[key] = (pv + v, pc + cnt)
                above += c[i]
        layer = nxt
    (val, cnt), = layer.values()
    return SignedCount(value=val, count=cnt, method="dp")


def signed_sum_corners(m: int, p: int) -> SignedCount:
    """Signed inversion sum by removing the largest entry, shape by shape.

    The largest entry of a SYT of shape lam sits in a removable corner of
    some row i; as the last letter of the ballot word it creates one
    inversion per earlier letter in rows i+1, ..., i.e. sum_{k>i} lam_k.
    This top-down recursion over partitions is independent of the forward
    prefix DP in :func:`signed_sum_dp`.
    """
    _check_mp(m, p)
    if comb(m + p, p) > DEFAULT_STATE_CAP:
        raise CapExceededError("too many shapes for the corner recursion")

    @lru_cache(maxsize=None)
    def rec(lam: tuple[int, ...]) -> tuple[int, int]:
        if not any(lam):
            return 1, 1
        val = cnt = 0
        below = 0
        for i in range(len(lam) - 1, -1, -1):
            nxt = lam[i + 1] if i + 1 < len(lam) else 0
            if lam[i] > nxt:
                v, c = rec(lam[:i] + (lam[i] - 1,) + lam[i + 1 :])
                val += -v if below & 1 else v
                cnt += c
            below += lam[i]
        return val, cnt

    val, cnt = rec((m,) * p)
    return SignedCount(value=val, count=cnt, method="corners")


def ssyt_closed_form(m: int, p: int) -> int:
    """Number of shifted SYT of the staircase-like shape; equals I(m,p) for odd m+p."""
    _check_mp(m, p)
    if (m + p) % 2 == 0:
        raise ValueError("closed form applies only when m + p is odd")
    if m < p:
        m, p = p, m
    num = (
        prod(factorial(i) for i in range(1, p))
        * prod(factorial(m - i) for i in range(1, p))
        * factorial(m * p // 2)
    )
    den = prod(factorial(m - p + 2 * i) for i in range(1, p)) * prod(
        factorial((m - p + 1) // 2 + i) for i in range(p)
    )
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"closed form not integral at ({m},{p})")
    return q


def real_degree(m: int, p: int) -> int:
    """I(m,p) through the fastest exact route (DP)."""
    return signed_sum_dp(m, p).magnitude
