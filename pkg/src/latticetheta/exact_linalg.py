"""Exact integer and rational matrix routines.

Matrices are plain lists of rows.  Entries are Python ints (or
``fractions.Fraction`` for the rational helpers), so nothing overflows.
Lattice elements are coordinate *rows* and a basis is a matrix of rows.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import NonSquare, NotFullRank, NotPositiveDefinite

Matrix = list[list[int]]


def as_matrix(m: Sequence[Sequence[int]]) -> Matrix:
    return [[int(v) for v in row] for row in m]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> list:
    return [sum(x * y for x, y in zip(v, col)) for col in zip(*m)]


def mat_pow(m: Sequence[Sequence[int]], k: int) -> Matrix:
    result = identity(len(m))
    base = as_matrix(m)
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def gram_of(coords: Sequence[Sequence[int]], gram: Sequence[Sequence[int]]) -> Matrix:
    """Gram matrix ``coords · gram · coordsᵀ`` of a family of rows."""
    if not coords:
        return []
    return mat_mul(mat_mul(coords, gram), transpose(coords))


def det_bareiss(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Gaussian elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise NonSquare(f"expected a square matrix, got {n} rows of lengths {[len(r) for r in m]}")
    if n == 0:
        return 1
    a = as_matrix(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _row_sub(rows: Matrix | None, i: int, r: int, q: int) -> None:
    if rows is not None and q:
        ri, rr = rows[i], rows[r]
        for c in range(len(ri)):
            ri[c] -= q * rr[c]


def _hnf_in_place(h: Matrix, u: Matrix | None) -> None:
    rows = len(h)
    cols = len(h[0]) if rows else 0
    r = 0
    for j in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if h[i][j] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(h[i][j]))
            if best != r:
                h[r], h[best] = h[best], h[r]
                if u is not None:
                    u[r], u[best] = u[best], u[r]
            if len(nz) == 1:
                break
            piv = h[r][j]
            for i in range(r + 1, rows):
                if h[i][j]:
                    q = h[i][j] // piv
                    _row_sub(h, i, r, q)
                    _row_sub(u, i, r, q)
        if r >= rows or h[r][j] == 0:
            continue
        if h[r][j] < 0:
            h[r] = [-x for x in h[r]]
            if u is not None:
                u[r] = [-x for x in u[r]]
        piv = h[r][j]
        for i in range(r):
            q = h[i][j] // piv
            _row_sub(h, i, r, q)
            _row_sub(u, i, r, q)
        r += 1


def hnf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u·m = h``, ``u`` unimodular, ``h`` upper echelon
    with positive pivots, entries above each pivot in ``[0, pivot)`` and zero
    rows at the bottom.
    """
    h = as_matrix(m)
    u = identity(len(h))
    if h and h[0]:
        _hnf_in_place(h, u)
    return h, u


def hnf_basis(rows: Sequence[Sequence[int]]) -> Matrix:
    """Nonzero rows of the HNF: the canonical basis of the row lattice."""
    h = as_matrix(rows)
    if not h:
        return []
    _hnf_in_place(h, None)
    return [row for row in h if any(row)]


def integer_kernel(m: Sequence[Sequence[int]]) -> Matrix:
    """Basis (in HNF) of the saturated left kernel ``{x : x·m = 0}``."""
    h, u = hnf(m)
    kernel = [u[i] for i in range(len(h)) if not any(h[i])]
    return hnf_basis(kernel)


def solve_in_lattice(basis: Sequence[Sequence[int]], x: Sequence[int]) -> list[int] | None:
    """Integer coefficients ``c`` with ``c·basis = x``; ``None`` if x is not in the lattice.

    ``basis`` must be in echelon form, e.g. the output of :func:`hnf_basis`.
    """
    rest = list(x)
    coeffs = []
    for row in basis:
        j = next(k for k, v in enumerate(row) if v)
        q, r = divmod(rest[j], row[j])
        if r:
            return None
        coeffs.append(q)
        if q:
            rest = [a - q * b for a, b in zip(rest, row)]
    if any(rest):
        return None
    return coeffs


def contains(basis: Sequence[Sequence[int]], rows: Sequence[Sequence[int]]) -> bool:
    """True iff every row lies in the lattice spanned by the echelon ``basis``."""
    return all(solve_in_lattice(basis, r) is not None for r in rows)


def rank(m: Sequence[Sequence[int]]) -> int:
    return len(hnf_basis(m))


def index_of_sublattice(coords: Sequence[Sequence[int]]) -> int:
    """Index of the sublattice spanned by ``coords`` in the parent ``ℤ^k``."""
    k = len(coords[0]) if coords else 0
    basis = hnf_basis(coords)
    if len(basis) < k or k == 0:
        raise NotFullRank(f"sublattice has rank {len(basis)}, parent rank {k}")
    index = 1
    for i, row in enumerate(basis):
        index *= row[i]
    return index


def rational_inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise NotFullRank("matrix is singular")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def rational_cholesky(g: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact ``g = L·diag(d)·Lᵀ`` with ``L`` unit lower triangular.

    Raises :class:`NotPositiveDefinite` as soon as a pivot ``d_i <= 0`` shows up.
    """
    n = len(g)
    if any(len(row) != n for row in g):
        raise NonSquare("Gram matrix must be square")
    a = [[Fraction(v) for v in row] for row in g]
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise NotPositiveDefinite("Gram matrix is not symmetric")
    d: list[Fraction] = []
    low = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        dk = a[k][k] - sum(low[k][j] ** 2 * d[j] for j in range(k))
        if dk <= 0:
            raise NotPositiveDefinite(f"pivot {k} is {dk}")
        d.append(dk)
        for i in range(k + 1, n):
            s = a[i][k] - sum(low[i][j] * low[k][j] * d[j] for j in range(k))
            low[i][k] = s / dk
    return d, low


def is_positive_definite(g: Sequence[Sequence[int]]) -> bool:
    try:
        rational_cholesky(g)
    except NotPositiveDefinite:
        return False
    return True


def lll_reduce(g: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> tuple[Matrix, Matrix]:
    """LLL reduction of a positive definite integral Gram matrix (default δ = 3/4).

    Integral variant working only with Gram data and the integers
    ``d_i`` (leading minors) and ``λ_ij = d_j μ_ij``.  Returns ``(g', u)``
    with ``g' = u·g·uᵀ``.
    """
    g = as_matrix(g)
    n = len(g)
    if n == 0:
        return [], []
    delta = Fraction(delta)
    dn, dd = delta.numerator, delta.denominator
    if any(len(row) != n for row in g):
        raise NonSquare("Gram matrix must be square")
    if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
        raise NotPositiveDefinite("Gram matrix is not symmetric")
    h = identity(n)
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]

    def inner(k: int, j: int) -> int:
        # b_k is still the original basis vector whenever this is called
        row = g[k]
        hj = h[j]
        return sum(row[t] * hj[t] for t in range(n) if hj[t])

    def redi(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            hk, hl = h[k], h[l]
            for t in range(n):
                hk[t] -= q * hl[t]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swapi(k: int, kmax: int) -> None:
        h[k], h[k - 1] = h[k - 1], h[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        b = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (b * t + lm * lam[i][k]) // d[k + 1]
        d[k] = b

    d[1] = g[0][0]
    if d[1] <= 0:
        raise NotPositiveDefinite("nonpositive diagonal entry")
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = inner(k, j)
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise NotPositiveDefinite("Gram matrix is not positive definite")
                    d[k + 1] = u
        while True:
            redi(k, k - 1)
            if dd * d[k + 1] * d[k - 1] < dn * d[k] ** 2 - dd * lam[k][k - 1] ** 2:
                swapi(k, kmax)
                k = max(1, k - 1)
            else:
                for l in range(k - 2, -1, -1):
                    redi(k, l)
                k += 1
                break
    reduced = gram_of(h, g)
    return reduced, h
