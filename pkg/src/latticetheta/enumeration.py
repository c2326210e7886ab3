"""Exact short-vector enumeration.

Fincke–Pohst on integer-scaled Cholesky data.  With ``g = L·diag(d)·Lᵀ``
the norm of a coordinate row ``x`` is ``Σ_i d_i (x_i + Σ_{j>i} L_ji x_j)²``.
Clearing denominators level by level turns every pruning test into an
integer comparison, so no floating point enters the search.  Gram matrices
are LLL-reduced first and results mapped back to the caller's basis.
"""
from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from math import isqrt, lcm
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import NotPositiveDefinite
from .exact_linalg import (
    as_matrix,
    gram_of,
    hnf,
    integer_kernel,
    lll_reduce,
    mat_mul,
    rational_cholesky,
    rational_inverse,
    solve_in_lattice,
    transpose,
    vec_mat,
)


class ShortVector(NamedTuple):
    coords: tuple[int, ...]
    norm: int


class _ScaledCholesky:
    """Per-level integer data: ``W·norm(z) = Σ_i w_i (s_i z_i + Σ_{j>i} a_ji z_j)²``."""

    def __init__(self, gram: Sequence[Sequence[int]]):
        d, low = rational_cholesky(gram)
        n = len(gram)
        self.n = n
        self.s = []
        for i in range(n):
            self.s.append(lcm(1, *(low[j][i].denominator for j in range(i + 1, n))))
        # rows[k] = [a_{k,0}, ..., a_{k,k-1}]: contribution of z_k to lower centers
        self.rows = [[int(low[k][i] * self.s[i]) for i in range(k)] for k in range(n)]
        ratios = [d[i] / (self.s[i] ** 2) for i in range(n)]
        self.W = lcm(1, *(r.denominator for r in ratios))
        self.w = [int(r * self.W) for r in ratios]


class _Reduced(NamedTuple):
    gram: list[list[int]]
    u: list[list[int]]
    chol: _ScaledCholesky
    low: np.ndarray
    d: np.ndarray
    coord_bound: int


@lru_cache(maxsize=64)
def _reduced(gram: tuple[tuple[int, ...], ...]) -> _Reduced:
    g = [list(r) for r in gram]
    if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(i)):
        raise NotPositiveDefinite("Gram matrix is not symmetric")
    red, u = lll_reduce(g)
    d, low = rational_cholesky(red)
    inv = rational_inverse(red)
    # |x_i| <= sqrt(bound·(G⁻¹)_ii): the per-unit-bound coordinate box
    coord_bound = max(isqrt(int(inv[i][i]) + 1) + 1 for i in range(len(red)))
    return _Reduced(red, u, _ScaledCholesky(red),
                    np.array([[float(v) for v in row] for row in low]),
                    np.array([float(v) for v in d]), coord_bound)


# below this rank the pure-Python walk is fast enough and avoids JIT warm-up
FAST_MIN_RANK = 9


def _backend() -> str:
    return os.environ.get("LATTICETHETA_BACKEND", "auto").lower()


def _use_kernel(r: _Reduced, bound: int) -> bool:
    mode = _backend()
    n = len(r.gram)
    if mode == "python" or not _kernels.available() or n < 2:
        return False
    if mode == "auto" and n < FAST_MIN_RANK:
        return False
    # int64 headroom: coordinates, partial products and the final discriminant
    xmax = r.coord_bound * (isqrt(bound) + 1)
    gmax = max(abs(v) for row in r.gram for v in row)
    partial = n * gmax * xmax
    return partial * partial + gmax * (n * partial + bound) < 2 ** 62


def _key(g: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in g)


def _search(chol: _ScaledCholesky, budget: int, *, exact: bool, collect: bool,
            mult: int = 1, offsets: Sequence[int] | None = None, half: bool = True):
    """Walk the enumeration tree.

    ``budget`` is the scaled norm bound ``W·t``.  The variable at level ``i``
    enters as ``z_i = mult·x_i + offsets[i]``.  With ``half`` only one of
    ``±x`` is visited (requires ``mult == 1`` and zero offsets) and the zero
    vector is skipped.  Returns the list of ``x`` rows when ``collect``,
    otherwise the number of leaves.
    """
    n = chol.n
    s, w, rows = chol.s, chol.w, chol.rows
    off = list(offsets) if offsets is not None else [0] * n
    x = [0] * n
    out: list[tuple[int, ...]] = []
    count = 0

    def level_range(i, c, rem):
        r = isqrt(rem // w[i])
        m = mult * s[i]
        base = c + s[i] * off[i]
        return -((r + base) // m), (r - base) // m

    def leaf_count(c, rem, flagged):
        # level 0, counting only
        if exact:
            if rem % w[0]:
                return 0
            y = isqrt(rem // w[0])
            if y * y * w[0] != rem:
                return 0
            m = mult * s[0]
            base = c + s[0] * off[0]
            total = 0
            for yy in ((y, -y) if y else (0,)):
                q, r = divmod(yy - base, m)
                if not r and not (flagged and q <= 0):
                    total += 1
            return total
        lo, hi = level_range(0, c, rem)
        if flagged:
            lo = max(lo, 1)
        return max(0, hi - lo + 1)

    def rec(i, acc, rem, flagged):
        nonlocal count
        c = acc[i]
        lo, hi = level_range(i, c, rem)
        if flagged and lo < 0:
            lo = 0
        if lo > hi:
            return
        si, wi, m, oi = s[i], w[i], mult, off[i]
        if i == 0:
            for xi in range(lo, hi + 1):
                if flagged and xi == 0:
                    continue
                y = si * (m * xi + oi) + c
                left = rem - wi * y * y
                if exact and left:
                    continue
                x[0] = xi
                out.append(tuple(x))
            return
        row = rows[i]
        for xi in range(lo, hi + 1):
            zi = m * xi + oi
            y = si * zi + c
            left = rem - wi * y * y
            x[i] = xi
            nacc = [p + a * zi for p, a in zip(acc, row)]
            f = flagged and xi == 0
            if i == 1 and not collect:
                count += leaf_count(nacc[0], left, f)
            else:
                rec(i - 1, nacc, left, f)
        x[i] = 0

    if n == 0:
        return [] if collect else 0
    rec(n - 1, [0] * n, budget, half)
    if collect:
        return out
    if n == 1 and not collect:
        # rec never reached the counting shortcut
        return len(out)
    return count


def _check_gram(g) -> tuple:
    key = _key(g)
    n = len(key)
    if any(len(r) != n for r in key):
        raise NotPositiveDefinite("Gram matrix must be square")
    return key


def _norm(x, g) -> int:
    return sum(xi * sum(gij * xj for gij, xj in zip(gi, x)) for xi, gi in zip(x, g) if xi)


def short_vectors(g: Sequence[Sequence[int]], bound: int) -> list[ShortVector]:
    """All ``x ≠ 0`` with ``x·g·xᵀ <= bound``, both signs, lexicographically sorted."""
    return _enumerate(g, bound, exact=False)


def vectors_with_norm(g: Sequence[Sequence[int]], t: int) -> list[ShortVector]:
    """All ``x`` with ``x·g·xᵀ = t`` (``t > 0``)."""
    if t <= 0:
        return []
    return _enumerate(g, t, exact=True)


def _enumerate(g, bound: int, exact: bool) -> list[ShortVector]:
    key = _check_gram(g)
    if bound <= 0 or not key:
        return []
    arr, norms = vector_array(key, bound, exact)
    return [ShortVector(tuple(map(int, row)), int(nm)) for row, nm in zip(arr, norms)]


def vector_array(g: Sequence[Sequence[int]], bound: int, exact: bool = False,
                 reduced: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Array form of :func:`short_vectors` / :func:`vectors_with_norm`.

    Returns ``(coords, norms)`` sorted lexicographically.  With ``reduced``
    the coordinates refer to the internal LLL-reduced basis (whose Gram
    matrix is ``reduced_gram(g)``), which keeps entries small.
    Object dtype is used when int64 could overflow.
    """
    key = _check_gram(g)
    n = len(key)
    if bound <= 0 or not key:
        return np.zeros((0, n), np.int64), np.zeros(0, np.int64)
    r = _reduced(key)
    if _use_kernel(r, bound):
        half = _kernels.fp_search(r.low, r.d, np.array(r.gram, dtype=np.int64), bound, exact, True)
    else:
        rows = _search(r.chol, r.chol.W * bound, exact=exact, collect=True)
        half = np.array(rows, dtype=object).reshape(len(rows), n)
    if reduced:
        gram = r.gram
    else:
        umax = max(abs(v) for row in r.u for v in row)
        xmax = int(np.abs(half).max()) if len(half) else 0
        dtype = np.int64 if n * umax * xmax < 2 ** 62 else object
        half = half.astype(dtype) @ np.array(r.u, dtype=dtype)
        gram = key
    coords = np.concatenate([half, -half]) if len(half) else half
    if len(coords) and coords.dtype != object:
        order = np.lexsort(coords.T[::-1])
        coords = coords[order]
    elif len(coords):
        coords = np.array(sorted(map(tuple, coords)), dtype=object).reshape(len(coords), n)
    if exact:
        norms = np.full(len(coords), bound, dtype=np.int64)
    else:
        gm = np.array(gram, dtype=coords.dtype)
        norms = np.einsum("ij,ij->i", coords @ gm, coords)
    return coords, norms


def reduced_gram(g: Sequence[Sequence[int]]) -> list[list[int]]:
    """The LLL-reduced Gram matrix used internally for ``g``."""
    return _reduced(_check_gram(g)).gram


def count_vectors(g: Sequence[Sequence[int]], bound: int) -> int:
    """Number of nonzero ``x`` with norm at most ``bound`` (no list is built)."""
    key = _check_gram(g)
    if bound <= 0 or not key:
        return 0
    return 2 * _half_count(_reduced(key), bound, exact=False)


def count_vectors_with_norm(g: Sequence[Sequence[int]], t: int) -> int:
    """Number of ``x`` with norm exactly ``t`` (1 for ``t = 0``)."""
    key = _check_gram(g)
    if t < 0:
        return 0
    if t == 0:
        return 1
    if not key:
        return 0
    return 2 * _half_count(_reduced(key), t, exact=True)


def _half_count(r: _Reduced, bound: int, exact: bool) -> int:
    if _use_kernel(r, bound):
        return _kernels.fp_search(r.low, r.d, np.array(r.gram, dtype=np.int64), bound, exact, False)
    return _search(r.chol, r.chol.W * bound, exact=exact, collect=False)


def constrained_vectors(g: Sequence[Sequence[int]], t: int,
                        constraints: Sequence[tuple[Sequence[int], int]]) -> list[ShortVector]:
    """All ``x`` with ``b(x,x) = t`` and ``b(x, v_j) = c_j`` for each constraint.

    The linear conditions cut out an affine sublattice ``x0 + K``; the norm
    condition becomes a shifted enumeration inside ``K``, which has lower
    rank than the lattice.
    """
    key = _check_gram(g)
    if not constraints:
        return vectors_with_norm(key, t) if t > 0 else []
    gram = [list(r) for r in key]
    n = len(gram)
    rational_cholesky(gram)
    cols = [vec_mat(v, gram) for v, _ in constraints]   # b(x, v) = x · (G vᵀ)
    rhs = [int(c) for _, c in constraints]
    wmat = transpose(cols)                               # n × k, x·wmat = rhs
    h, umat = hnf(wmat)
    nonzero = [i for i in range(n) if any(h[i])]
    z = solve_in_lattice([h[i] for i in nonzero], rhs)
    if z is None:
        return []
    x0 = [0] * n
    for coef, i in zip(z, nonzero):
        if coef:
            x0 = [a + coef * b for a, b in zip(x0, umat[i])]
    kern = integer_kernel(wmat)
    if not kern:
        return [ShortVector(tuple(x0), t)] if _norm(x0, gram) == t and t > 0 else []
    gk = gram_of(kern, gram)
    hvec = [sum(a * b for a, b in zip(krow, vec_mat(x0, gram))) for krow in kern]
    inv = rational_inverse(gk)
    ystar = [-sum(Fraction(hvec[a]) * inv[a][b] for a in range(len(kern))) for b in range(len(kern))]
    qmin = _norm(x0, gram) - sum(-ystar[b] * hvec[b] for b in range(len(kern)))
    gap = t - qmin
    if gap < 0:
        return []
    den = lcm(1, *(v.denominator for v in ystar))
    scaled_gap = gap * den * den
    if scaled_gap.denominator != 1:
        return []
    # enumerate z = den·y - den·y* in the LLL-reduced kernel basis
    red, uk = lll_reduce(gk)
    chol = _ScaledCholesky(red)
    ukinv = rational_inverse(uk)
    # y = y' · uk, so the shift in reduced coordinates is y* · uk⁻¹
    shift = [sum(ystar[a] * ukinv[a][b] for a in range(len(kern))) for b in range(len(kern))]
    offsets = [int(-v * den) for v in shift]
    leaves = _search(chol, chol.W * int(scaled_gap), exact=True, collect=True,
                     mult=den, offsets=offsets, half=False)
    out = []
    for yred in leaves:
        y = vec_mat(yred, uk)
        x = [a + sum(y[r] * kern[r][c] for r in range(len(kern))) for c, a in enumerate(x0)]
        if any(x):
            out.append(tuple(x))
    out.sort()
    return [ShortVector(c, t) for c in out]


def min_norm_and_kissing(g: Sequence[Sequence[int]]) -> tuple[int, int]:
    """Minimal nonzero norm and the number of vectors attaining it."""
    key = _check_gram(g)
    red = _reduced(key).gram
    top = min(red[i][i] for i in range(len(red)))
    for b in range(1, top + 1):
        c = count_vectors_with_norm(key, b)
        if c:
            return b, c
    raise AssertionError("minimum exceeds the smallest reduced diagonal entry")
