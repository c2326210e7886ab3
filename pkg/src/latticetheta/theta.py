"""Representation numbers, theta coefficient tables and the congruences they satisfy.

A form is stored as its even matrix ``2T``; ``A(M, T)`` counts ordered
tuples ``(x_1, …, x_n)`` of lattice vectors with ``b(x_i, x_j) = (2T)_ij``.

Counting works on pools: the vectors of norm ``(2T)_kk`` (in LLL-reduced
coordinates) for each column.  Degree 1 is a plain norm count.  Degree 2
reads a cached histogram of inner products between two pools.  From degree
3 on, bitset masks record which pairs have the right inner product and a
compiled depth-first search counts compatible tuples.  The textbook route
(each column drawn from :func:`constrained_vectors`) is kept as
:func:`representation_number_slow` and serves as the test oracle.
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels
from .enumeration import (
    _check_gram,
    constrained_vectors,
    count_vectors_with_norm,
    min_norm_and_kissing,
    reduced_gram,
    vector_array,
)
from .errors import NotPsd
from .exact_linalg import det_bareiss, rank
from .fixpoint import Automorphism, fixed_sublattice
from .lattice import Gram, Lattice, direct_sum, freeze

# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class SemiIntegralForm:
    """A half-integral symmetric ``T`` held as the even matrix ``2T``."""

    twoT: Gram

    def __post_init__(self):
        m = freeze(self.twoT)
        object.__setattr__(self, "twoT", m)
        n = len(m)
        if any(len(r) != n for r in m):
            raise NotPsd("2T must be square")
        if any(m[i][j] != m[j][i] for i in range(n) for j in range(i)):
            raise NotPsd("2T must be symmetric")
        if any(m[i][i] % 2 for i in range(n)):
            raise NotPsd("2T must have an even diagonal")
        if not is_psd(m):
            raise NotPsd(f"2T = {m} is not positive semi-definite")

    @classmethod
    def from_T_diag(cls, diag: Sequence[int], off: dict[tuple[int, int], int] | None = None):
        """Build from the diagonal of ``T`` and the off-diagonal entries of ``2T``."""
        n = len(diag)
        m = [[0] * n for _ in range(n)]
        for i, t in enumerate(diag):
            m[i][i] = 2 * t
        for (i, j), v in (off or {}).items():
            m[i][j] = m[j][i] = v
        return cls(m)

    @property
    def degree(self) -> int:
        return len(self.twoT)

    @property
    def diagonal(self) -> tuple[int, ...]:
        """Diagonal of ``T`` (the ``q``-values)."""
        return tuple(self.twoT[i][i] // 2 for i in range(self.degree))

    @property
    def det2T(self) -> int:
        return det_bareiss(self.twoT) if self.degree else 1

    @property
    def positive_definite(self) -> bool:
        return self.det2T > 0

    def key(self) -> tuple[int, ...]:
        n = self.degree
        return tuple(self.twoT[i][j] for i in range(n) for j in range(i, n))

    def __lt__(self, other):  # canonical order: upper triangle, lexicographic
        return (self.degree, self.key()) < (other.degree, other.key())


def is_psd(m: Sequence[Sequence[int]]) -> bool:
    """All principal minors are non-negative."""
    n = len(m)
    for k in range(1, n + 1):
        for idx in itertools.combinations(range(n), k):
            if det_bareiss([[m[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def is_pd(m: Sequence[Sequence[int]]) -> bool:
    """Leading principal minors are positive."""
    return all(det_bareiss([row[:k] for row in m[:k]]) > 0 for k in range(1, len(m) + 1))


def iter_forms(n: int, diag_bound: int, *, definite_only: bool = False) -> Iterator[SemiIntegralForm]:
    """All psd ``T`` of degree ``n`` with ``t_ii <= diag_bound``, in canonical order."""
    if n < 0 or diag_bound < 0:
        return
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for diag in itertools.product(range(diag_bound + 1), repeat=n):
        ranges = []
        for i, j in pairs:
            # Cauchy–Schwarz: (2t_ij)² ≤ 4·t_ii·t_jj
            r = isqrt(4 * diag[i] * diag[j])
            ranges.append(range(-r, r + 1))
        for offs in itertools.product(*ranges):
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                m[i][i] = 2 * diag[i]
            for (i, j), v in zip(pairs, offs):
                m[i][j] = m[j][i] = v
            if not (is_pd(m) if definite_only else is_psd(m)):
                continue
            yield SemiIntegralForm(m)


def _as_form(t) -> SemiIntegralForm:
    return t if isinstance(t, SemiIntegralForm) else SemiIntegralForm(t)


def _as_gram(lat) -> tuple:
    return lat.gram if isinstance(lat, Lattice) else freeze(lat)


# ---------------------------------------------------------------------------
# representation numbers


def _threads() -> int:
    raw = os.environ.get("THETA_THREADS", "1").strip()
    try:
        v = int(raw)
    except ValueError:
        return 1
    return v if v > 0 else (os.cpu_count() or 1)


@lru_cache(maxsize=32)
def _pool(gram: tuple, t: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectors of norm ``t`` in reduced coordinates and their images ``x·G_red``."""
    coords, _ = vector_array(gram, t, exact=True, reduced=True)
    g = np.array(reduced_gram(gram), dtype=object if coords.dtype == object else np.int64)
    return coords, coords @ g


def _ip_blocks(gram: tuple, a: int, b: int, rows: int) -> Iterator[tuple[int, np.ndarray]]:
    """Inner products between pool ``a`` and pool ``b`` in row blocks (exact)."""
    xa, _ = _pool(gram, a)
    _, yb = _pool(gram, b)
    if len(xa) == 0 or len(yb) == 0:
        return
    if xa.dtype == object or yb.dtype == object:
        for s in range(0, len(xa), rows):
            yield s, (xa[s:s + rows] @ yb.T).astype(np.int64)
        return
    bound = int(np.abs(xa).max()) * int(np.abs(yb).max()) * xa.shape[1]
    # float arithmetic is exact while every partial sum stays below 2^24 / 2^53
    ftype = np.float32 if bound < 2 ** 24 else np.float64 if bound < 2 ** 53 else None
    if ftype is None:
        for s in range(0, len(xa), rows):
            yield s, xa[s:s + rows] @ yb.T
        return
    fa = xa.astype(ftype)
    fbT = np.ascontiguousarray(yb.T.astype(ftype))
    for s in range(0, len(xa), rows):
        yield s, np.rint(fa[s:s + rows] @ fbT).astype(np.int64)


@lru_cache(maxsize=64)
def _pair_histogram(gram: tuple, a: int, b: int) -> dict[int, int]:
    """``c ↦ #{(x, y) : b(x,x)=a, b(y,y)=b, b(x,y)=c}``."""
    off = isqrt(a * b) + 1
    hist = np.zeros(2 * off + 1, dtype=np.int64)
    n_b = len(_pool(gram, b)[0])
    rows = max(1, min(4096, (1 << 24) // max(n_b, 1)))
    for _, ip in _ip_blocks(gram, a, b, rows):
        hist += np.bincount((ip + off).ravel(), minlength=2 * off + 1)
    return {c - off: int(v) for c, v in enumerate(hist) if v}


@lru_cache(maxsize=256)
def _pair_mask(gram: tuple, a: int, b: int, c: int) -> np.ndarray:
    """Packed bitset rows: bit ``k`` of row ``i`` is set iff ``b(x_i, y_k) = c``."""
    n_b = len(_pool(gram, b)[0])
    nw = max(1, (n_b + 63) // 64)
    out = np.zeros((len(_pool(gram, a)[0]), nw), dtype=np.uint64)
    rows = max(1, min(4096, (1 << 24) // max(n_b, 1)))
    for s, ip in _ip_blocks(gram, a, b, rows):
        out[s:s + len(ip)] = _pack(ip == c, nw)
    return out


def _pack(bits: np.ndarray, nw: int) -> np.ndarray:
    packed = np.packbits(bits, axis=1, bitorder="little")
    buf = np.zeros((bits.shape[0], nw * 8), dtype=np.uint8)
    buf[:, :packed.shape[1]] = packed
    return buf.view("<u8").astype(np.uint64)


# masks above this many bytes fall back to the constrained backtracking route
MASK_BYTE_LIMIT = 1 << 30


def representation_number(lat, t) -> int:
    """``A(M, T)``: ordered tuples with ``b(x_i, x_j) = (2T)_ij``."""
    gram = _check_gram(_as_gram(lat))
    form = _as_form(t)
    m = form.twoT
    keep = [i for i in range(form.degree) if m[i][i]]
    # t_kk = 0 forces x_k = 0, so every entry in that row must vanish
    for i in range(form.degree):
        if not m[i][i] and any(m[i]):
            return 0
    m = [[m[i][j] for j in keep] for i in keep]
    n = len(m)
    if n == 0:
        return 1
    if rank(m) > len(gram):
        return 0
    if n == 1:
        return count_vectors_with_norm(gram, m[0][0])
    if n == 2:
        return _pair_histogram(gram, m[0][0], m[1][1]).get(m[0][1], 0)
    sizes = [len(_pool(gram, m[k][k])[0]) for k in range(n)]
    if min(sizes) == 0:
        return 0
    pmax = max(sizes)
    nw = (pmax + 63) // 64
    if n * n * pmax * nw * 8 > MASK_BYTE_LIMIT:
        return representation_number_slow(gram, form)
    full = np.zeros((n, nw), dtype=np.uint64)
    for k, s in enumerate(sizes):
        full[k] = _pack(np.arange(nw * 64)[None, :] < s, nw)[0]
    masks = np.zeros((n, n, pmax, nw), dtype=np.uint64)
    for j in range(n):
        for k in range(j + 1, n):
            pm = _pair_mask(gram, m[j][j], m[k][k], m[j][k])
            masks[j, k, :pm.shape[0], :pm.shape[1]] = pm
    if _kernels.available():
        total = _kernels.tuple_count(full, masks, _threads())
        if total is not None:
            return total
    return _tuple_count_py(full, masks)


def _tuple_count_py(full: np.ndarray, masks: np.ndarray) -> int:
    """Big-integer bitset walk, used without numba or when int64 could overflow."""
    n = full.shape[0]

    def as_int(words) -> int:
        return int.from_bytes(np.ascontiguousarray(words, dtype="<u8").tobytes(), "little")

    fulls = [as_int(full[k]) for k in range(n)]
    mask_cache: dict = {}

    def mask(j, k, i):
        key = (j, k, i)
        if key not in mask_cache:
            mask_cache[key] = as_int(masks[j, k, i])
        return mask_cache[key]

    def walk(level: int, cand: list[int]) -> int:
        if level == n - 1:
            return bin(cand[level]).count("1")
        total = 0
        c = cand[level]
        while c:
            low = c & -c
            idx = low.bit_length() - 1
            c ^= low
            nxt = list(cand)
            ok = True
            for k in range(level + 1, n):
                nxt[k] = cand[k] & mask(level, k, idx)
                if not nxt[k]:
                    ok = False
                    break
            if ok:
                total += walk(level + 1, nxt)
        return total

    return walk(0, fulls)


def representation_number_slow(lat, t) -> int:
    """Reference count: column ``k`` drawn from constrained enumeration given ``x_1..x_{k-1}``."""
    gram = _check_gram(_as_gram(lat))
    m = _as_form(t).twoT
    n = len(m)

    def extend(prefix: list) -> int:
        k = len(prefix)
        if k == n:
            return 1
        if m[k][k] == 0:
            return extend(prefix + [None]) if all(m[k][j] == 0 for j in range(k)) else 0
        cons = [(prefix[j], m[j][k]) for j in range(k) if prefix[j] is not None]
        if any(prefix[j] is None and m[j][k] for j in range(k)):
            return 0
        total = 0
        for v in constrained_vectors(gram, m[k][k], cons):
            total += extend(prefix + [v.coords])
        return total

    return extend([])


def brute_force_representation_number(lat, t) -> int:
    """Exhaustive scan over all tuples of short vectors (tiny cases only)."""
    gram = _check_gram(_as_gram(lat))
    m = _as_form(t).twoT
    n = len(m)
    pools = []
    for k in range(n):
        if m[k][k] == 0:
            pools.append([(0,) * len(gram)])
        else:
            coords, _ = vector_array(gram, m[k][k], exact=True)
            pools.append([tuple(int(v) for v in row) for row in coords])
    g = np.array(gram, dtype=object)

    def b(x, y):
        return int(np.array(x, dtype=object) @ g @ np.array(y, dtype=object))

    return sum(1 for tup in itertools.product(*pools)
               if all(b(tup[i], tup[j]) == m[i][j] for i in range(n) for j in range(i + 1, n)))


# ---------------------------------------------------------------------------
# tables


@dataclass
class ThetaTable:
    label: str | None
    degree: int
    diag_bound: int
    entries: dict[SemiIntegralForm, int]

    def __getitem__(self, t) -> int:
        return self.entries[_as_form(t)]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "degree": self.degree,
            "diag_bound": self.diag_bound,
            "entries": [{"twoT": [list(r) for r in f.twoT], "count": str(c)}
                        for f, c in self.entries.items()],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ThetaTable":
        entries = {SemiIntegralForm(e["twoT"]): int(e["count"]) for e in doc["entries"]}
        return cls(doc.get("label"), int(doc["degree"]), int(doc["diag_bound"]), entries)


def theta_table(lat, n: int, diag_bound: int, *, definite_only: bool = False) -> ThetaTable:
    """Every psd ``T`` of degree ``n`` with diagonal ``<= diag_bound`` and its count."""
    label = lat.label if isinstance(lat, Lattice) else None
    entries = {f: representation_number(lat, f)
               for f in iter_forms(n, diag_bound, definite_only=definite_only)}
    return ThetaTable(label, n, diag_bound, entries)


def theta_operator(table: ThetaTable) -> dict[SemiIntegralForm, tuple[int, int]]:
    """``T ↦ (det(2T), A(M, T))``; the weighted coefficient is their product."""
    return {f: (f.det2T, c) for f, c in table.entries.items()}


# ---------------------------------------------------------------------------
# congruence reports


@dataclass
class Witness:
    twoT: Gram
    count: int
    det2T: int

    def to_json(self) -> dict:
        return {"twoT": [list(r) for r in self.twoT], "count": str(self.count), "det2T": self.det2T}


@dataclass
class CongruenceReport:
    claim: str
    p: int | None
    degree: int
    diag_bound: int | None
    witnesses: list[Witness] = field(default_factory=list)
    checked: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.witnesses

    def to_json(self) -> dict:
        doc = {
            "claim": self.claim,
            "p": self.p,
            "degree": self.degree,
            "diag_bound": self.diag_bound,
            "holds": self.holds,
            "checked": self.checked,
            "witnesses": [w.to_json() for w in self.witnesses],
        }
        doc.update(self.extra)
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _todo(n: int, diag_bound: int | None, forms: Iterable | None, definite_only: bool = False):
    if forms is not None:
        return map(_as_form, forms)
    if diag_bound is None:
        raise ValueError("give either diag_bound or forms")
    return iter_forms(n, diag_bound, definite_only=definite_only)


def congruence_check_theta_op(lat, p: int, n: int, diag_bound: int | None = None,
                              forms: Iterable | None = None) -> CongruenceReport:
    """``p | det(2T)·A(M, T)`` for every positive definite ``T`` in range."""
    rep = CongruenceReport("theta_operator_vanishes_mod_p", p, n, diag_bound)
    todo = _todo(n, diag_bound, forms, definite_only=True)
    for f in todo:
        d = f.det2T
        if d <= 0:
            continue
        a = representation_number(lat, f)
        rep.checked += 1
        if (d * a) % p:
            rep.witnesses.append(Witness(f.twoT, a, d))
    return rep


def singularity_check(lat, p: int, n: int, diag_bound: int | None = None,
                      forms: Iterable | None = None) -> CongruenceReport:
    """``p | A(M, T)`` for every positive definite ``T`` in range."""
    rep = CongruenceReport("singular_mod_p", p, n, diag_bound)
    todo = _todo(n, diag_bound, forms, definite_only=True)
    for f in todo:
        d = f.det2T
        if d <= 0:
            continue
        a = representation_number(lat, f)
        rep.checked += 1
        if a % p:
            rep.witnesses.append(Witness(f.twoT, a, d))
    return rep


def fixed_congruence_check(lat: Lattice, sigma: Automorphism, n: int, diag_bound: int | None = None,
                           forms: Iterable | None = None) -> CongruenceReport:
    """``A(M, T) ≡ A(M₀, T) (mod p)`` with ``M₀`` the fixed sublattice."""
    p = sigma.order
    m0 = fixed_sublattice(lat, sigma)
    rep = CongruenceReport("orbit_congruence_fixed_lattice", p, n, diag_bound,
                           extra={"m0": m0.rank})
    todo = _todo(n, diag_bound, forms)
    for f in todo:
        a = representation_number(lat, f)
        if m0.rank:
            a0 = representation_number(m0.gram, f)
        else:
            a0 = int(not any(v for row in f.twoT for v in row))
        rep.checked += 1
        if (a - a0) % p:
            rep.witnesses.append(Witness(f.twoT, a, f.det2T))
            rep.extra.setdefault("fixed_counts", []).append(str(a0))
    return rep


def _min_q(gram) -> int:
    return min_norm_and_kissing(gram)[0] // 2


def form_splittings(t: SemiIntegralForm, min_q1: int, min_q2: int) -> Iterator[tuple[SemiIntegralForm, SemiIntegralForm]]:
    """Pairs of psd forms ``T₁ + T₂ = T``; diagonals of ``Tₖ`` are 0 or at least ``min_qk``."""
    m = t.twoT
    n = len(m)

    def allowed(v, lo):
        return v == 0 or v >= lo

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for d2 in itertools.product(*(range(m[i][i] // 2 + 1) for i in range(n))):
        d1 = [m[i][i] // 2 - d2[i] for i in range(n)]
        if not all(allowed(v, min_q1) for v in d1) or not all(allowed(v, min_q2) for v in d2):
            continue
        ranges = []
        for i, j in pairs:
            r2 = isqrt(4 * d2[i] * d2[j])
            r1 = isqrt(4 * d1[i] * d1[j])
            # 2T₂_ij within its own bound and 2T_ij − 2T₂_ij within T₁'s
            ranges.append(range(max(-r2, m[i][j] - r1), min(r2, m[i][j] + r1) + 1))
        for offs in itertools.product(*ranges):
            m2 = [[0] * n for _ in range(n)]
            for i in range(n):
                m2[i][i] = 2 * d2[i]
            for (i, j), v in zip(pairs, offs):
                m2[i][j] = m2[j][i] = v
            m1 = [[m[i][j] - m2[i][j] for j in range(n)] for i in range(n)]
            if is_psd(m1) and is_psd(m2):
                yield SemiIntegralForm(m1), SemiIntegralForm(m2)


def convolution_check(l1: Lattice, l2: Lattice, n: int, diag_bound: int | None = None,
                      forms: Iterable | None = None) -> CongruenceReport:
    """``A(L₁⊥L₂, T) = Σ_{T₁+T₂=T} A(L₁,T₁)·A(L₂,T₂)`` on every ``T`` checked.

    Splittings are pruned by the lattices' minima: a nonzero diagonal entry
    of ``Tₖ`` must be at least the smallest ``q``-value of ``Lₖ``.
    """
    todo = _todo(n, diag_bound, forms)
    total = direct_sum(l1, l2)
    q1, q2 = _min_q(l1.gram), _min_q(l2.gram)
    rep = CongruenceReport("convolution_identity", None, n, diag_bound,
                           extra={"min_q": [q1, q2], "values": []})
    for f in todo:
        rhs = 0
        terms = 0
        for t1, t2 in form_splittings(f, q1, q2):
            a2 = representation_number(l2, t2)
            if a2:
                rhs += representation_number(l1, t1) * a2
            terms += 1
        lhs = representation_number(total, f)
        rep.checked += 1
        rep.extra["values"].append({"twoT": [list(r) for r in f.twoT], "direct": str(lhs),
                                    "convolution": str(rhs), "splittings": terms})
        if lhs != rhs:
            rep.witnesses.append(Witness(f.twoT, lhs, f.det2T))
    return rep
