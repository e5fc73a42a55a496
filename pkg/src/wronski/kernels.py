"""Numeric inner loops, each with a numba kernel and a numpy twin.

Public entry points take ``backend=None`` (resolved from the environment,
see :mod:`wronski._accel`) or an explicit ``"numba"`` / ``"numpy"``.
Both paths must produce identical results; the test-suite runs both.
"""

import numpy as np

from ._accel import njit, resolve_backend

__all__ = ["ballot_array", "inversion_counts", "newton_batch", "TermTable"]


# ---------------------------------------------------------------------------
# ballot sequences
# ---------------------------------------------------------------------------


@njit
def _ballot_array_nb(m, p, total):
    n = m * p
    out = np.empty((total, n), dtype=np.int8)
    seq = np.zeros(n, dtype=np.int8)
    counts = np.zeros(p, dtype=np.int64)
    # choice[pos] = next symbol (0-based) to try at position pos
    choice = np.zeros(n + 1, dtype=np.int64)
    row = 0
    pos = 0
    while pos >= 0:
        if pos == n:
            out[row, :] = seq
            row += 1
            pos -= 1
            counts[seq[pos]] -= 1
            choice[pos] = seq[pos] + 1
            continue
        i = choice[pos]
        placed = False
        while i < p:
            if counts[i] < m and (i == 0 or counts[i - 1] > counts[i]):
                seq[pos] = i
                counts[i] += 1
                choice[pos + 1] = 0
                pos += 1
                placed = True
                break
            i += 1
        if not placed:
            pos -= 1
            if pos >= 0:
                counts[seq[pos]] -= 1
                choice[pos] = seq[pos] + 1
    return out


def _ballot_array_np(m, p, total):
    n = m * p
    prefixes = np.zeros((1, 0), dtype=np.int8)
    counts = np.zeros((1, p), dtype=np.int64)
    for _ in range(n):
        parts, cnts, keys = [], [], []
        parent = np.arange(len(prefixes))
        for i in range(p):
            ok = counts[:, i] < m
            if i > 0:
                ok &= counts[:, i - 1] > counts[:, i]
            idx = np.nonzero(ok)[0]
            if idx.size == 0:
                continue
            new = np.empty((idx.size, prefixes.shape[1] + 1), dtype=np.int8)
            new[:, :-1] = prefixes[idx]
            new[:, -1] = i
            c = counts[idx].copy()
            c[:, i] += 1
            parts.append(new)
            cnts.append(c)
            keys.append(parent[idx] * p + i)
        keys = np.concatenate(keys)
        order = np.argsort(keys, kind="stable")
        prefixes = np.concatenate(parts)[order]
        counts = np.concatenate(cnts)[order]
    if len(prefixes) != total:
        raise AssertionError("ballot enumeration count mismatch")
    return prefixes


def ballot_array(m, p, total, backend=None):
    """All ballot sequences as a (total, m*p) int8 array, 0-based symbols,
    rows in lexicographic order.  `total` must equal the exact count."""
    if resolve_backend(backend) == "numba":
        return _ballot_array_nb(m, p, total)
    return _ballot_array_np(m, p, total)


# ---------------------------------------------------------------------------
# inversion counts
# ---------------------------------------------------------------------------


@njit
def _inversions_nb(arr):
    rows, n = arr.shape
    out = np.zeros(rows, dtype=np.int64)
    for r in range(rows):
        c = 0
        for j in range(n):
            a = arr[r, j]
            for k in range(j + 1, n):
                if a > arr[r, k]:
                    c += 1
        out[r] = c
    return out


def _inversions_np(arr):
    rows, n = arr.shape
    out = np.zeros(rows, dtype=np.int64)
    for j in range(n - 1):
        out += (arr[:, j : j + 1] > arr[:, j + 1 :]).sum(axis=1)
    return out


def inversion_counts(arr, backend=None):
    """Number of inversions of each row of a 2-d integer array."""
    arr = np.ascontiguousarray(arr)
    if resolve_backend(backend) == "numba":
        return _inversions_nb(arr)
    return _inversions_np(arr)


# ---------------------------------------------------------------------------
# batched damped Newton on polynomial coefficient equations
# ---------------------------------------------------------------------------


class TermTable:
    """Multilinear expansion of a Wronskian in its free coefficients.

    The Wronskian of p slots, each a sum of monomials with either a fixed or
    a variable coefficient, is a sum of terms ``const * prod(x[vidx])`` times
    ``z**deg``.  ``vidx`` holds -1 where the slot contributes a fixed
    monomial.  Equations pick the coefficients at ``eq_degrees``.
    """

    def __init__(self, const, deg, vidx, nvars, eq_degrees):
        self.const = np.ascontiguousarray(const, dtype=np.float64)
        self.deg = np.ascontiguousarray(deg, dtype=np.int64)
        self.vidx = np.ascontiguousarray(vidx, dtype=np.int64)
        self.nvars = int(nvars)
        self.eq_degrees = np.ascontiguousarray(eq_degrees, dtype=np.int64)
        # equation row for each term, -1 if its degree is not an equation
        pos = {int(d): e for e, d in enumerate(self.eq_degrees)}
        self.eq_of_term = np.array([pos.get(int(d), -1) for d in self.deg], dtype=np.int64)


@njit
def _residual_jac_nb(x, const, vidx, eq_of_term, rhs, r, J):
    T, p = vidx.shape
    E = rhs.shape[0]
    for e in range(E):
        r[e] = -rhs[e]
        for v in range(x.shape[0]):
            J[e, v] = 0.0
    for t in range(T):
        e = eq_of_term[t]
        if e < 0:
            continue
        prod = const[t]
        for j in range(p):
            v = vidx[t, j]
            if v >= 0:
                prod *= x[v]
        r[e] += prod
        for j in range(p):
            v = vidx[t, j]
            if v < 0:
                continue
            d = const[t]
            for jj in range(p):
                if jj != j:
                    w = vidx[t, jj]
                    if w >= 0:
                        d *= x[w]
            J[e, v] += d


@njit
def _residual_nb(x, const, vidx, eq_of_term, rhs, r):
    T, p = vidx.shape
    for e in range(rhs.shape[0]):
        r[e] = -rhs[e]
    for t in range(T):
        e = eq_of_term[t]
        if e < 0:
            continue
        prod = const[t]
        for j in range(p):
            v = vidx[t, j]
            if v >= 0:
                prod *= x[v]
        r[e] += prod


@njit
def _newton_nb(X0, const, vidx, eq_of_term, rhs, maxiter, tol, blowup):
    S, nv = X0.shape
    X = X0.copy()
    conv = np.zeros(S, dtype=np.bool_)
    iters = np.zeros(S, dtype=np.int64)
    E = rhs.shape[0]
    r = np.empty(E)
    rt = np.empty(E)
    J = np.empty((E, nv))
    xt = np.empty(nv)
    for s in range(S):
        x = X[s]
        for it in range(maxiter):
            _residual_jac_nb(x, const, vidx, eq_of_term, rhs, r, J)
            if not np.all(np.isfinite(J)):
                break
            if abs(np.linalg.det(J)) == 0.0:
                break
            dx = np.linalg.solve(J, -r)
            # at the rounding floor no step decreases the residual, so a
            # tiny full step counts as converged before any damping
            small = 0.0
            xn = 0.0
            for v in range(nv):
                small = max(small, abs(dx[v]))
                xn = max(xn, abs(x[v]))
            if small < tol * (1.0 + xn):
                for v in range(nv):
                    x[v] += dx[v]
                iters[s] = it + 1
                conv[s] = True
                break
            r0 = np.sqrt(np.sum(r * r))
            t = 1.0
            for _ in range(30):
                for v in range(nv):
                    xt[v] = x[v] + t * dx[v]
                _residual_nb(xt, const, vidx, eq_of_term, rhs, rt)
                if np.sqrt(np.sum(rt * rt)) < r0 or r0 == 0.0:
                    break
                t *= 0.5
            step = 0.0
            xn = 0.0
            for v in range(nv):
                step = max(step, abs(t * dx[v]))
                x[v] = xt[v]
                xn = max(xn, abs(x[v]))
            iters[s] = it + 1
            if not np.isfinite(xn) or xn > blowup:
                break
            if step < tol * (1.0 + xn) and t == 1.0:
                conv[s] = True
                break
    return X, conv, iters


def _eval_np(X, table, rhs, want_jac):
    S, nv = X.shape
    X1 = np.concatenate([X, np.ones((S, 1))], axis=1)
    vidx = np.where(table.vidx < 0, nv, table.vidx)
    mask = table.eq_of_term >= 0
    vidx = vidx[mask]
    const = table.const[mask]
    eqs = table.eq_of_term[mask]
    E = len(rhs)
    vals = X1[:, vidx]  # (S, T, p)
    prod = const * vals.prod(axis=2)
    onehot = np.zeros((len(eqs), E))
    onehot[np.arange(len(eqs)), eqs] = 1.0
    R = prod @ onehot - rhs
    if not want_jac:
        return R, None
    J = np.zeros((S, E, nv + 1))
    p = vidx.shape[1]
    for j in range(p):
        others = np.delete(vals, j, axis=2).prod(axis=2) * const  # (S, T)
        inc = np.zeros((len(eqs), E, nv + 1))
        inc[np.arange(len(eqs)), eqs, vidx[:, j]] = 1.0
        J += np.einsum("st,tev->sev", others, inc)
    return R, J[:, :, :nv]


def _newton_np(X0, table, rhs, maxiter, tol, blowup):
    X = X0.copy()
    S, nv = X.shape
    conv = np.zeros(S, dtype=bool)
    iters = np.zeros(S, dtype=np.int64)
    active = np.ones(S, dtype=bool)
    for it in range(maxiter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        R, J = _eval_np(X[idx], table, rhs, True)
        good = np.all(np.isfinite(J), axis=(1, 2))
        det = np.zeros(idx.size)
        det[good] = np.linalg.det(J[good])
        good &= det != 0.0
        active[idx[~good]] = False
        idx, R, J = idx[good], R[good], J[good]
        if idx.size == 0:
            break
        dX = np.linalg.solve(J, -R[:, :, None])[:, :, 0]
        # tiny full steps converge without damping (see the numba kernel)
        small = np.abs(dX).max(axis=1) < tol * (1.0 + np.abs(X[idx]).max(axis=1))
        if small.any():
            fin = idx[small]
            X[fin] += dX[small]
            iters[fin] = it + 1
            conv[fin] = True
            active[fin] = False
            keep = ~small
            idx, R, J, dX = idx[keep], R[keep], J[keep], dX[keep]
            if idx.size == 0:
                continue
        r0 = np.sqrt((R * R).sum(axis=1))
        t = np.ones(idx.size)
        pending = np.ones(idx.size, dtype=bool)
        Xt = X[idx] + dX
        for _ in range(30):
            Rt, _ = _eval_np(Xt, table, rhs, False)
            ok = (np.sqrt((Rt * Rt).sum(axis=1)) < r0) | (r0 == 0.0)
            pending &= ~ok
            if not pending.any():
                break
            t[pending] *= 0.5
            Xt[pending] = X[idx[pending]] + t[pending, None] * dX[pending]
        step = np.abs(t[:, None] * dX).max(axis=1)
        X[idx] = Xt
        iters[idx] = it + 1
        xn = np.abs(Xt).max(axis=1)
        bad = ~np.isfinite(xn) | (xn > blowup)
        done = (step < tol * (1.0 + xn)) & (t == 1.0) & ~bad
        conv[idx[done]] = True
        active[idx[done | bad]] = False
    return X, conv, iters


def newton_batch(X0, table, rhs, maxiter=200, tol=1e-12, blowup=1e8, backend=None):
    """Damped Newton from every row of ``X0`` on ``coeffs(W)[eq] == rhs``.

    Returns ``(X, converged, iterations)``.  A run stops as converged when the
    full Newton step has max-norm below ``tol * (1 + |x|)``.
    """
    X0 = np.ascontiguousarray(X0, dtype=np.float64)
    rhs = np.ascontiguousarray(rhs, dtype=np.float64)
    if resolve_backend(backend) == "numba":
        return _newton_nb(X0, table.const, table.vidx, table.eq_of_term, rhs, maxiter, tol, blowup)
    return _newton_np(X0, table, rhs, maxiter, tol, blowup)
