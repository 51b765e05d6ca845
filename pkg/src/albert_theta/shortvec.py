"""Lattice vectors of a prescribed norm for a positive-definite integer Gram matrix.

The Gram matrix is LLL-reduced first (exact integer arithmetic on the Gram
matrix itself), then a Fincke-Pohst sweep runs on the reduced form inside a
numba kernel.  Every reported vector is re-checked with integer arithmetic, so
floating point only decides which subtrees are visited.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numba
import numpy as np

_EPS = 1e-7


class NotPositiveDefiniteError(ValueError):
    pass


def _as_int_matrix(gram) -> np.ndarray:
    g = np.asarray(gram)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("Gram matrix must be square")
    gi = g.astype(np.int64)
    if not np.array_equal(gi, g):
        raise ValueError("Gram matrix must have integer entries")
    if not np.array_equal(gi, gi.T):
        raise ValueError("Gram matrix must be symmetric")
    return gi


def check_positive_definite(gram) -> None:
    """Exact test via the pivots of symmetric Gaussian elimination."""
    g = [[Fraction(int(v)) for v in row] for row in _as_int_matrix(gram)]
    n = len(g)
    for i in range(n):
        piv = g[i][i]
        if piv <= 0:
            raise NotPositiveDefiniteError(f"Gram matrix is not positive definite (pivot {i} = {piv})")
        for j in range(i + 1, n):
            f = g[j][i] / piv
            if f:
                for k in range(i, n):
                    g[j][k] -= f * g[i][k]


def lll_reduce_gram(gram, delta: Fraction = Fraction(99, 100)) -> tuple[np.ndarray, np.ndarray]:
    """LLL on a Gram matrix.  Returns ``(R, U)`` with ``R == U @ G @ U.T`` and ``det U = +-1``."""
    G = [[int(v) for v in row] for row in _as_int_matrix(gram)]
    n = len(G)
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bn = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = Fraction(G[i][j])
                for k in range(j):
                    s -= mu[j][k] * mu[i][k] * bn[k]
                mu[i][j] = s / bn[j]
            s = Fraction(G[i][i])
            for k in range(i):
                s -= mu[i][k] * mu[i][k] * bn[k]
            bn[i] = s
        return mu, bn

    mu, bn = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                gkk = G[k][k] - 2 * r * G[k][j] + r * r * G[j][j]
                row = [G[k][t] - r * G[j][t] for t in range(n)]
                row[k] = gkk
                G[k] = row
                for t in range(n):
                    G[t][k] = row[t]
                U[k] = [U[k][t] - r * U[j][t] for t in range(n)]
                for t in range(j):
                    mu[k][t] -= r * mu[j][t]
                mu[k][j] -= r
        if bn[k] >= (delta - mu[k][k - 1] ** 2) * bn[k - 1]:
            k += 1
        else:
            G[k], G[k - 1] = G[k - 1], G[k]
            for row in G:
                row[k], row[k - 1] = row[k - 1], row[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, bn = gso()
            k = max(k - 1, 1)
    return np.array(G, dtype=np.int64), np.array(U, dtype=np.int64)


@numba.njit(cache=True)
def _fincke_pohst(q, bound, half, W, h, lower, out, x, hi, T, c, zero_above, st):
    """Resumable sweep.  ``st = [phase, level]``: phase 0 = fresh, 1 = paused, 2 = done.

    Fills ``out`` and returns the number of rows written; when ``out`` is full
    the state is saved and phase 1 is reported so the caller can resume.
    """
    n = q.shape[0]
    npr = lower.shape[0]
    count = 0
    if st[0] == 2:
        return 0
    if st[0] == 0:
        zero_above[n] = True
        i = n - 1
        T[n] = bound
        r = np.sqrt(bound / q[i, i]) + _EPS
        hi[i] = int(np.floor(r))
        lo = int(np.ceil(-r))
        if half and lo < 0:
            lo = 0
        x[i] = lo - 1
    else:
        i = st[1]
    while True:
        x[i] += 1
        if x[i] > hi[i]:
            i += 1
            if i == n:
                break
            continue
        d = x[i] + c[i]
        t = T[i + 1] - q[i, i] * d * d
        if t < -_EPS:
            continue
        T[i] = t
        zero_above[i] = zero_above[i + 1] and x[i] == 0
        pruned = False
        for p in range(npr):
            s = 0.0
            for j in range(i, n):
                s += W[p, i, j] * x[j]
            if s + np.sqrt(max(t, 0.0) * h[p, i]) < lower[p] - 1e-6:
                pruned = True
                break
        if pruned:
            continue
        if i == 0:
            if half and zero_above[0] and bound > _EPS:
                continue
            out[count, :] = x
            count += 1
            if count == out.shape[0]:
                st[0] = 1
                st[1] = 0
                return count
            continue
        i -= 1
        s = 0.0
        for j in range(i + 1, n):
            s += q[i, j] * x[j]
        c[i] = s
        r = np.sqrt(max(T[i + 1], 0.0) / q[i, i]) + _EPS
        hi[i] = int(np.floor(r - c[i]))
        lo = int(np.ceil(-r - c[i]))
        if half and zero_above[i + 1] and lo < 0:
            lo = 0
        x[i] = lo - 1
    st[0] = 2
    return count


def _decompose(G: np.ndarray) -> np.ndarray:
    """Coefficients q with Q(y) = sum_i q_ii (y_i + sum_{j>i} q_ij y_j)^2."""
    n = len(G)
    A = G.astype(np.float64).copy()
    q = np.zeros((n, n))
    for i in range(n):
        q[i, i] = A[i, i]
        q[i, i + 1:] = A[i, i + 1:] / A[i, i]
        A[i + 1:, i + 1:] -= q[i, i] * np.outer(q[i, i + 1:], q[i, i + 1:])
    return q


def _pruning_tables(G: np.ndarray, funcs: np.ndarray):
    """Per-level linear bounds for constraints ``f . y >= b`` (see module doc)."""
    n = len(G)
    Gf = G.astype(np.float64)
    k = len(funcs)
    W = np.zeros((k, n, n))
    h = np.zeros((k, n))
    for p, f in enumerate(funcs):
        for i in range(n):
            W[p, i, i:] = f[i:]
            if i == 0:
                continue
            Ginv = np.linalg.inv(Gf[:i, :i])
            g = f[:i]
            h[p, i] = g @ Ginv @ g
            W[p, i, i:] -= g @ Ginv @ Gf[:i, i:]
    return W, h


@lru_cache(maxsize=8)
def _reduced(gram_bytes: bytes, n: int):
    G = np.frombuffer(gram_bytes, dtype=np.int64).reshape(n, n)
    check_positive_definite(G)
    R, U = lll_reduce_gram(G)
    return R, U


def iter_short_vectors(gram, m: int, pruning=None, chunk: int = 1 << 18):
    """Yield chunks of the vectors of :func:`short_vectors` (unsorted across chunks).

    Memory stays bounded by ``chunk`` rows, so callers can filter huge shells
    on the fly.
    """
    G = _as_int_matrix(gram)
    n = len(G)
    if m < 0:
        return
    R, U = _reduced(np.ascontiguousarray(G).tobytes(), n)
    if m == 0:
        yield np.zeros((1, n), dtype=np.int64)
        return

    if pruning:
        funcs = np.array([np.asarray([float(Fraction(t)) for t in f]) for f, _ in pruning])
        lower = np.array([float(Fraction(b)) for _, b in pruning])
        W, h = _pruning_tables(R, funcs @ U.T.astype(np.float64))
        half = False
        exact = [_integral_functional(f) + (Fraction(b),) for f, b in pruning]
    else:
        W, h, lower = np.zeros((0, n, n)), np.zeros((0, n)), np.zeros(0)
        half = True
        exact = []

    q = _decompose(R)
    out = np.zeros((chunk, n), dtype=np.int64)
    x = np.zeros(n, np.int64)
    hi = np.zeros(n, np.int64)
    T = np.zeros(n + 1)
    c = np.zeros(n)
    zero_above = np.zeros(n + 1, np.bool_)
    st = np.zeros(2, np.int64)
    while st[0] != 2:
        count = _fincke_pohst(q, float(m), half, W, h, lower, out, x, hi, T, c, zero_above, st)
        y = out[:count]
        y = y[np.einsum("ij,jk,ik->i", y, R, y) == m]
        v = y @ U
        if half:
            v = np.concatenate([v, -v])
        for fi, scale, b in exact:
            v = v[v @ fi >= b * scale]
        if len(v):
            yield v


def short_vectors(gram, m: int, pruning=None) -> np.ndarray:
    """All integer vectors ``v`` with ``v @ gram @ v == m``, sorted lexicographically.

    ``pruning`` is an optional sequence of ``(f, b)`` pairs; vectors (and whole
    subtrees) with ``f . v < b`` are discarded.  Without pruning one vector of
    each +-pair is enumerated and the other sign is added afterwards.
    """
    n = len(_as_int_matrix(gram))
    parts = list(iter_short_vectors(gram, m, pruning))
    if not parts:
        return np.zeros((0, n), dtype=np.int64)
    return sort_rows(np.concatenate(parts))


def _integral_functional(f) -> tuple[np.ndarray, int]:
    fr = [Fraction(x) for x in f]
    scale = 1
    for x in fr:
        scale = scale * x.denominator // np.gcd(scale, x.denominator)
    return np.array([int(x * scale) for x in fr], dtype=np.int64), scale


def sort_rows(v: np.ndarray) -> np.ndarray:
    if len(v) == 0:
        return v
    order = np.lexsort(v.T[::-1])
    return v[order]
