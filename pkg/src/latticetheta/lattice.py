"""Lattice values and structural operations.

A lattice is its Gram matrix with respect to the bilinear form ``b``; an
even lattice has an even diagonal (so ``q = b/2`` is integral on it).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .enumeration import ShortVector, min_norm_and_kissing, short_vectors, vectors_with_norm
from .errors import NotPositiveDefinite, RankTooLarge
from .exact_linalg import (
    Matrix,
    det_bareiss,
    gram_of,
    hnf_basis,
    identity,
    is_positive_definite,
    lll_reduce,
)

Gram = tuple[tuple[int, ...], ...]


def freeze(m: Sequence[Sequence[int]]) -> Gram:
    return tuple(tuple(int(v) for v in row) for row in m)


@dataclass(frozen=True)
class Lattice:
    gram: Gram
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "gram", freeze(self.gram))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return det_bareiss(self.gram)

    def b(self, x: Sequence[int], y: Sequence[int]) -> int:
        g = self.gram
        return sum(xi * sum(gij * yj for gij, yj in zip(g[i], y)) for i, xi in enumerate(x) if xi)


@dataclass(frozen=True)
class SublatticeHandle:
    """Sublattice given by basis rows ``coords`` in the parent's coordinates."""

    parent: Lattice
    coords: Gram
    gram: Gram = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", freeze(self.coords))
        object.__setattr__(self, "gram", freeze(gram_of(self.coords, self.parent.gram)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def det(self) -> int:
        return det_bareiss(self.gram)

    def as_lattice(self, label: str | None = None) -> Lattice:
        return Lattice(self.gram, label)


@dataclass(frozen=True)
class ValidationReport:
    symmetric: bool
    even_diagonal: bool
    positive_definite: bool
    determinant: int | None
    unimodular: bool

    @property
    def ok(self) -> bool:
        return self.symmetric and self.even_diagonal and self.positive_definite

    def as_dict(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "even_diagonal": self.even_diagonal,
            "positive_definite": self.positive_definite,
            "determinant": self.determinant,
            "unimodular": self.unimodular,
        }


def validate_even_lattice(lat: Lattice) -> ValidationReport:
    g = lat.gram
    n = len(g)
    square = all(len(r) == n for r in g)
    symmetric = square and all(g[i][j] == g[j][i] for i in range(n) for j in range(i))
    even = square and all(g[i][i] % 2 == 0 for i in range(n))
    pd = symmetric and n > 0 and is_positive_definite(g)
    det = det_bareiss(g) if square else None
    return ValidationReport(symmetric, even, pd, det, det == 1)


def direct_sum(l1: Lattice, l2: Lattice, label: str | None = None) -> Lattice:
    n1, n2 = l1.rank, l2.rank
    rows = [list(r) + [0] * n2 for r in l1.gram] + [[0] * n1 + list(r) for r in l2.gram]
    if label is None and l1.label and l2.label:
        label = f"{l1.label}+{l2.label}"
    return Lattice(rows, label)


def _span_rank(basis: list[list], v: Sequence[int]) -> list[list] | None:
    """Gaussian step: returns the enlarged echelon basis if ``v`` is independent."""
    w = [Fraction(x) for x in v]
    for row in basis:
        j = next(k for k, a in enumerate(row) if a)
        if w[j]:
            f = w[j] / row[j]
            w = [a - f * b for a, b in zip(w, row)]
    if any(w):
        return basis + [w]
    return None


def _indecomposable(vecs: list[ShortVector], g) -> list[tuple[int, ...]]:
    """Drop ``x`` that split as ``y + z`` with ``b(y, z) = 0`` and ``y, z ≠ 0``.

    Such a ``y`` is a shorter vector with ``b(x, y) = b(y, y)``.  Vectors
    shorter than twice the minimum can never split.
    """
    if not vecs:
        return []
    lo = min(v.norm for v in vecs)
    small = [v.coords for v in vecs if v.norm < 2 * lo]
    big = [v for v in vecs if v.norm >= 2 * lo]
    if not big:
        return small
    coords = np.array([v.coords for v in vecs], dtype=object)
    norms = np.array([v.norm for v in vecs], dtype=object)
    gv = coords @ np.array(g, dtype=object)
    keep = list(small)
    for v in big:
        ip = gv @ np.array(v.coords, dtype=object)
        shorter = norms < v.norm
        if not np.any(shorter & (ip == norms) & (norms > 0)):
            keep.append(v.coords)
    return keep


def decompose(lat: Lattice) -> list[SublatticeHandle]:
    """Indecomposable orthogonal summands (Kneser).

    Short vectors up to the largest diagonal entry of an LLL-reduced Gram
    matrix are collected and the decomposable ones discarded; the bound
    grows by 2 until the rest generate the lattice.  Components of the
    non-orthogonality graph on them span the summands.
    """
    g = [list(r) for r in lat.gram]
    n = len(g)
    if not is_positive_definite(g):
        raise NotPositiveDefinite("decompose needs a positive definite lattice")
    red, _ = lll_reduce(g)
    start = max(red[i][i] for i in range(n))
    bound = start
    while True:
        vecs = _indecomposable(short_vectors(g, bound), g)
        basis = hnf_basis(vecs) if vecs else []
        if len(basis) == n and all(basis[i][i] == 1 for i in range(n)):
            break
        bound += 2
        if bound > 2 * start:
            raise AssertionError("short vectors failed to generate the lattice")

    # each component: (member vectors, echelon basis of its rational span)
    comps: list[tuple[list, list]] = []
    gcols = list(zip(*g))
    for v in vecs:
        if comps and len(comps[0][1]) == n:
            comps[0][0].append(v)
            continue
        gv = [sum(a * b for a, b in zip(v, col)) for col in gcols]
        touching = [k for k, (_, span) in enumerate(comps)
                    if any(sum(a * b for a, b in zip(gv, s)) for s in span)]
        if not touching:
            comps.append(([v], _span_rank([], v)))
            continue
        members: list = [v]
        span: list = []
        for k in touching:
            members += comps[k][0]
            for s in comps[k][1]:
                span = _span_rank(span, s) or span
        span = _span_rank(span, v) or span
        comps = [c for k, c in enumerate(comps) if k not in touching]
        comps.append((members, span))
        comps.sort(key=lambda c: -len(c[1]))
    handles = []
    for members, _ in comps:
        handles.append(SublatticeHandle(lat, hnf_basis(members)))
    handles.sort(key=lambda h: (h.rank, h.coords))
    return handles


@dataclass(frozen=True)
class BinaryForm:
    """Form ``a x² + 2b xy + c y²``, i.e. Gram ``[[a, b], [b, c]]``."""

    a: int
    b: int
    c: int

    @property
    def gram(self) -> Gram:
        return ((self.a, self.b), (self.b, self.c))

    @property
    def det(self) -> int:
        return self.a * self.c - self.b * self.b


def reduce_binary_with_transform(f: BinaryForm) -> tuple[BinaryForm, Matrix]:
    """Gauss reduction; returns the reduced form and ``t`` with ``t·G·tᵀ = G'``."""
    a, b, c = f.a, f.b, f.c
    if a <= 0 or a * c - b * b <= 0:
        raise NotPositiveDefinite(f"binary form {f} is not positive definite")
    t = identity(2)
    while True:
        if a > c:
            a, c = c, a
            t = [t[1], t[0]]
        if 2 * abs(b) > a:
            k = (2 * b + a) // (2 * a)
            c = c - 2 * k * b + k * k * a
            b = b - k * a
            t = [t[0], [t[1][0] - k * t[0][0], t[1][1] - k * t[0][1]]]
            continue
        if a > c:
            continue
        break
    if b < 0:
        b = -b
        t = [t[0], [-t[1][0], -t[1][1]]]
    return BinaryForm(a, b, c), t


def reduce_binary(f: BinaryForm) -> BinaryForm:
    return reduce_binary_with_transform(f)[0]


def find_isometry(l1: Lattice, l2: Lattice) -> Matrix | None:
    """Rows = images of ``l1``'s basis in ``l2`` coordinates, or ``None``."""
    n = l1.rank
    if n > 8:
        raise RankTooLarge(f"isometry testing is limited to rank 8, got {n}")
    if l2.rank != n or l1.det != l2.det:
        return None
    g1 = l1.gram
    pools: dict[int, list] = {}
    for i in range(n):
        if g1[i][i] not in pools:
            pools[g1[i][i]] = [v.coords for v in vectors_with_norm(l2.gram, g1[i][i])]
    images: list = []

    def extend(k: int) -> bool:
        if k == n:
            return True
        for v in pools[g1[k][k]]:
            if all(l2.b(images[j], v) == g1[j][k] for j in range(k)):
                images.append(v)
                if extend(k + 1):
                    return True
                images.pop()
        return False

    if extend(0):
        return [list(v) for v in images]
    return None


def is_isometric_small(l1: Lattice, l2: Lattice) -> bool:
    return find_isometry(l1, l2) is not None


def minimum(lat: Lattice) -> tuple[int, int]:
    return min_norm_and_kissing(lat.gram)
