"""Automorphisms of prime order and their fixed-space decomposition.

An automorphism is an integer matrix ``U`` acting on coordinate rows by
``x ↦ x·U``; it preserves the Gram matrix when ``U·G·Uᵀ = G``.  For such a
``σ`` of odd prime order ``p`` the space splits into the fixed space ``V₀``
and its complement ``V₁`` on which ``1 + σ + … + σ^{p-1}`` vanishes.  This
module computes ``M₀ = M ∩ V₀``, ``M₁ = M ∩ V₁`` and the projections
``M̃ᵢ = πᵢ(M)`` (kept as the integral lattice ``p·M̃ᵢ`` plus a rational
Gram matrix) and checks the inclusions and determinant statements that
relate them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .errors import NotInImage, NotIsometry, NotOddPrime, WrongOrder
from .exact_linalg import (
    Matrix,
    as_matrix,
    contains,
    det_bareiss,
    gram_of,
    hnf_basis,
    identity,
    integer_kernel,
    mat_mul,
    mat_pow,
    transpose,
)
from .lattice import Lattice, SublatticeHandle, decompose


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, isqrt(p) + 1))


@dataclass(frozen=True)
class Automorphism:
    matrix: tuple[tuple[int, ...], ...]
    order: int

    def power(self, k: int) -> Matrix:
        return mat_pow(self.matrix, k % self.order)

    def powers(self) -> list[Matrix]:
        out = [identity(len(self.matrix))]
        for _ in range(self.order - 1):
            out.append(mat_mul(out[-1], self.matrix))
        return out


def validate_automorphism(lat: Lattice, u: Sequence[Sequence[int]], p: int) -> Automorphism:
    """Check ``u`` is an isometry of ``lat`` of odd prime order ``p``."""
    if p == 2 or not is_prime(p):
        raise NotOddPrime(f"order {p} is not an odd prime")
    um = as_matrix(u)
    n = lat.rank
    if len(um) != n or any(len(r) != n for r in um):
        raise NotIsometry(f"matrix shape does not match rank {n}")
    g = [list(r) for r in lat.gram]
    if mat_mul(mat_mul(um, g), transpose(um)) != g:
        raise NotIsometry("U·G·Uᵀ != G")
    if um == identity(n):
        raise WrongOrder("identity matrix has order 1")
    if mat_pow(um, p) != identity(n):
        raise WrongOrder(f"U^{p} != I")
    return Automorphism(tuple(map(tuple, um)), p)


# -- group ring ℤ[⟨σ⟩] and its image in ℤ ⊕ ℤ[ζ_p] ---------------------------

@dataclass(frozen=True)
class GroupRingElement:
    """``Σ α_i σ^i`` stored as the coefficient tuple ``(α_0, …, α_{p-1})``."""

    coeffs: tuple[int, ...]

    @property
    def p(self) -> int:
        return len(self.coeffs)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[(i + j) % p] += a * b
        return GroupRingElement(tuple(out))

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))


def iota_embed(e: GroupRingElement, p: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Image ``(a, β)`` of ``e``; ``β`` are coordinates in the basis ``ζ, …, ζ^{p-1}``."""
    alpha = e.coeffs
    if p is not None and len(alpha) != p:
        raise ValueError(f"expected {p} coefficients, got {len(alpha)}")
    a = sum(alpha)
    beta = tuple(ai - alpha[0] for ai in alpha[1:])
    return a, beta


def iota_preimage(a: int, beta: Sequence[int], p: int) -> GroupRingElement:
    """Inverse of :func:`iota_embed`; raises :class:`NotInImage` off the image."""
    if len(beta) != p - 1:
        raise ValueError(f"expected {p - 1} cyclotomic coordinates, got {len(beta)}")
    # the trace of ζ^i is -1, so p·α₀ = a - Σβ_i
    num = a - sum(beta)
    if num % p:
        raise NotInImage(f"a - Σβ = {num} is not divisible by {p}")
    a0 = num // p
    return GroupRingElement((a0,) + tuple(b + a0 for b in beta))


def cyclotomic_mul(x: Sequence[int], y: Sequence[int], p: int) -> tuple[int, ...]:
    """Product in ``ℤ[ζ_p]`` with elements written in the basis ``ζ, …, ζ^{p-1}``."""
    # exponents run 2..2p-2; reduce ζ^p = 1, then 1 = -(ζ + … + ζ^{p-1})
    full = [0] * p
    for i, a in enumerate(x, start=1):
        if a:
            for j, b in enumerate(y, start=1):
                full[(i + j) % p] += a * b
    c0 = full[0]
    return tuple(full[k] - c0 for k in range(1, p))


def gamma_mul(u: tuple[int, tuple[int, ...]], v: tuple[int, tuple[int, ...]], p: int):
    return u[0] * v[0], cyclotomic_mul(u[1], v[1], p)


def gamma_add(u, v):
    return u[0] + v[0], tuple(a + b for a, b in zip(u[1], v[1]))


# -- fixed and complementary sublattices ---------------------------------------

def _handle(lat: Lattice, rows) -> SublatticeHandle:
    return SublatticeHandle(lat, rows)


def fixed_sublattice(lat: Lattice, sigma: Automorphism) -> SublatticeHandle:
    """``M₀ = M ∩ V₀`` as the saturated kernel of ``U − I``."""
    n = lat.rank
    u = sigma.matrix
    diff = [[u[i][j] - (i == j) for j in range(n)] for i in range(n)]
    return _handle(lat, integer_kernel(diff))


def norm_element(sigma: Automorphism) -> Matrix:
    """``Σ_{i<p} U^i``."""
    n = len(sigma.matrix)
    total = [[0] * n for _ in range(n)]
    for m in sigma.powers():
        total = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(total, m)]
    return total


def sigma_complement(lat: Lattice, sigma: Automorphism) -> SublatticeHandle:
    """``M₁ = M ∩ V₁``: kernel of the norm element."""
    return _handle(lat, integer_kernel(norm_element(sigma)))


def is_fixed_point_free(lat: Lattice, sigma: Automorphism) -> bool:
    return fixed_sublattice(lat, sigma).rank == 0


@dataclass(frozen=True)
class ProjectedLattice:
    """``M̃ᵢ`` through its integral scaling ``p·M̃ᵢ`` and the exact rational Gram."""

    scaled: SublatticeHandle
    rational_gram: tuple[tuple[Fraction, ...], ...]
    p: int


def projection_matrices(sigma: Automorphism) -> tuple[Matrix, Matrix]:
    """``p·π₀`` and ``p·π₁`` as integer matrices (row action)."""
    p = sigma.order
    pi0 = norm_element(sigma)
    n = len(pi0)
    pi1 = [[p * (i == j) - pi0[i][j] for j in range(n)] for i in range(n)]
    return pi0, pi1


def projected_lattice(lat: Lattice, sigma: Automorphism, i: int) -> ProjectedLattice:
    if i not in (0, 1):
        raise ValueError("projection index must be 0 or 1")
    p = sigma.order
    proj = projection_matrices(sigma)[i]
    scaled = _handle(lat, hnf_basis(proj))
    rg = tuple(tuple(Fraction(v, p * p) for v in row) for row in scaled.gram)
    return ProjectedLattice(scaled, rg, p)


@dataclass
class ChainReport:
    """Verdicts for ``p·M̃ᵢ ⊆ Mᵢ ⊆ M̃ᵢ ⊆ Mᵢ^#`` at ``i = 0, 1``."""

    inclusions: dict[str, bool] = field(default_factory=dict)
    ranks: dict[str, int] = field(default_factory=dict)
    split_index: int = 0
    projections_orthogonal: bool = False
    bookkeeping_ok: bool = False

    @property
    def ok(self) -> bool:
        return all(self.inclusions.values()) and self.projections_orthogonal and self.bookkeeping_ok


def lemma_chain_check(lat: Lattice, sigma: Automorphism) -> ChainReport:
    p = sigma.order
    n = lat.rank
    g = [list(r) for r in lat.gram]
    report = ChainReport()
    subs = {0: fixed_sublattice(lat, sigma), 1: sigma_complement(lat, sigma)}
    projs = {i: projected_lattice(lat, sigma, i) for i in (0, 1)}
    for i in (0, 1):
        mi = [list(r) for r in subs[i].coords]
        pm = [list(r) for r in projs[i].scaled.coords]
        report.ranks[f"M{i}"] = len(mi)
        report.ranks[f"pM~{i}"] = len(pm)
        # pM̃ᵢ ⊆ Mᵢ
        report.inclusions[f"pM~{i} <= M{i}"] = contains(hnf_basis(mi), pm) if pm else True
        # Mᵢ ⊆ M̃ᵢ  ⟺  p·Mᵢ ⊆ p·M̃ᵢ
        report.inclusions[f"M{i} <= M~{i}"] = contains(pm, [[p * v for v in r] for r in mi]) if mi else True
        # M̃ᵢ ⊆ Mᵢ^#  ⟺  b(p·M̃ᵢ, Mᵢ) ⊆ pℤ, plus M̃ᵢ ⊆ Vᵢ (same rank as Mᵢ)
        pairing = gram_of_pair(pm, mi, g)
        report.inclusions[f"M~{i} <= M{i}#"] = (len(pm) == len(mi)
                                               and all(v % p == 0 for row in pairing for v in row))
    pm0 = [list(r) for r in projs[0].scaled.coords]
    pm1 = [list(r) for r in projs[1].scaled.coords]
    cross = gram_of_pair(pm0, pm1, g)
    report.projections_orthogonal = all(v == 0 for row in cross for v in row)
    stacked = pm0 + pm1
    if len(stacked) == n:
        # [M : p·ΓM]·[ΓM : M] = [ΓM : p·ΓM] = p^n, with [ΓM : M]² = det(M)·p^{2n}/det(p·ΓM)
        idx = abs(det_bareiss(stacked))
        report.split_index = idx
        gamma_det = det_bareiss(gram_of(stacked, g))
        num = det_bareiss(g) * p ** (2 * n)
        ok = num % gamma_det == 0
        if ok:
            sq = num // gamma_det
            root = _isqrt_exact(sq)
            ok = root is not None and root * idx == p ** n and _is_power_of(root, p)
        report.bookkeeping_ok = ok
    return report


def gram_of_pair(a, b, g) -> Matrix:
    if not a or not b:
        return []
    return mat_mul(mat_mul(a, g), transpose(b))


def _isqrt_exact(v: int) -> int | None:
    if v < 0:
        return None
    r = isqrt(v)
    return r if r * r == v else None


def _is_power_of(v: int, p: int) -> bool:
    while v > 1 and v % p == 0:
        v //= p
    return v == 1


@dataclass
class FixedSplitReport:
    p: int
    m0: int
    m1: int
    det_M0: int
    det_M1: int
    det_M: int
    split_index: int
    is_orthogonal_split: bool
    det_M0_divisible_by_p: bool
    disjunction_holds: bool
    chain: ChainReport
    m1_divisible_by_p_minus_1: bool
    # None when p | det(M₀) already settled the theorem without a decomposition
    exceptional_summand: bool | None
    theorem_holds: bool
    notes: list[str] = field(default_factory=list)

    @property
    def chain_ok(self) -> dict[str, bool]:
        return dict(self.chain.inclusions)

    @property
    def ok(self) -> bool:
        return (self.chain.ok and self.disjunction_holds and self.theorem_holds
                and self.m1_divisible_by_p_minus_1 and self.m0 + self.m1 == self.chain.ranks["M0"] + self.chain.ranks["M1"])

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "m0": self.m0,
            "m1": self.m1,
            "det_M0": self.det_M0,
            "det_M1": self.det_M1,
            "det_M": self.det_M,
            "split_index": self.split_index,
            "is_orthogonal_split": self.is_orthogonal_split,
            "det_M0_divisible_by_p": self.det_M0_divisible_by_p,
            "disjunction_holds": self.disjunction_holds,
            "m1_divisible_by_p_minus_1": self.m1_divisible_by_p_minus_1,
            "chain": dict(self.chain.inclusions),
            "projections_orthogonal": self.chain.projections_orthogonal,
            "gamma_split_index": self.chain.split_index,
            "gamma_bookkeeping_ok": self.chain.bookkeeping_ok,
            "exceptional_summand": self.exceptional_summand,
            "theorem_holds": self.theorem_holds,
            "notes": list(self.notes),
            "ok": self.ok,
        }


def splitting_check(lat: Lattice, sigma: Automorphism) -> FixedSplitReport:
    """Orthogonal-split index, the determinant disjunction and the fixed-lattice theorem."""
    p = sigma.order
    n = lat.rank
    m0h = fixed_sublattice(lat, sigma)
    m1h = sigma_complement(lat, sigma)
    d0, d1, dm = m0h.det, m1h.det, lat.det
    # index² = det(M₀)·det(M₁)/det(M)
    sq, r = divmod(d0 * d1, dm)
    index = _isqrt_exact(sq) if r == 0 else None
    if index is None:
        raise AssertionError("M0 + M1 has non-integral index in M")
    split = index == 1
    divisible = d0 % p == 0
    notes: list[str] = []
    exceptional = None
    theorem = True
    if dm != 1:
        notes.append("lattice not unimodular; fixed-lattice theorem not applicable")
    elif divisible:
        notes.append(f"{p} divides det(M0); no decomposition needed")
    elif m0h.rank == 0:
        exceptional = True
        notes.append("fixed-point free: M0 = 0 is a trivial summand")
    else:
        # only a rank-m₀ summand with determinant prime to p can excuse this
        comps = decompose(lat)
        exceptional = len(comps) > 1 and any(c.rank == m0h.rank and c.det % p for c in comps)
        theorem = exceptional
        notes.append(f"{p} does not divide det(M0); summand ranks {[c.rank for c in comps]}")
    return FixedSplitReport(
        p=p, m0=m0h.rank, m1=m1h.rank, det_M0=d0, det_M1=d1, det_M=dm,
        split_index=index, is_orthogonal_split=split, det_M0_divisible_by_p=divisible,
        disjunction_holds=split or divisible, chain=lemma_chain_check(lat, sigma),
        m1_divisible_by_p_minus_1=m1h.rank % (p - 1) == 0,
        exceptional_summand=exceptional, theorem_holds=theorem, notes=notes,
    )


def orbit(x: Sequence[int], sigma: Automorphism) -> list[tuple[int, ...]]:
    """Distinct images ``x·U^i``."""
    seen = []
    cur = list(x)
    for _ in range(sigma.order):
        t = tuple(cur)
        if t not in seen:
            seen.append(t)
        cur = [sum(a * b for a, b in zip(cur, col)) for col in zip(*sigma.matrix)]
    return seen
