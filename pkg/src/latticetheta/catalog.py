"""Named lattices with named automorphisms: A_n, E8, E8+E8 and the Leech lattice.

The Leech lattice is built from the extended quadratic-residue code of
length 24, with coordinates indexed by the projective line over F_23
(positions 0..22 for the field elements, 23 for ∞).  Translation
``x ↦ x + 1`` and doubling ``x ↦ 2x`` preserve the code and hence the
lattice; in the lattice basis they give automorphisms of order 23 and 11.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .enumeration import min_norm_and_kissing, vectors_with_norm
from .errors import ConstructionSelfCheckFailed, UnknownName
from .exact_linalg import (
    Matrix,
    det_bareiss,
    hnf_basis,
    identity,
    mat_mul,
    mat_pow,
    rational_inverse,
    transpose,
)
from .lattice import Lattice, direct_sum

INF = 23
QR23 = frozenset((i * i) % 23 for i in range(1, 23))

E8_GRAM = (
    (2, 0, -1, 0, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, 0, -1, 2),
)

NAMES = ("A1", "A2", "A6", "E8", "E8+E8", "Leech")


class NamedAutomorphism(NamedTuple):
    matrix: Matrix
    order: int


class CatalogEntry(NamedTuple):
    lattice: Lattice
    automorphisms: dict[str, NamedAutomorphism]


def a_n_gram(n: int) -> list[list[int]]:
    return [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(n)] for i in range(n)]


def reflection(gram, r) -> Matrix:
    """Row-action matrix of ``x ↦ x - b(x, r)·r`` for a norm-2 root ``r``."""
    n = len(gram)
    gr = [sum(gram[i][k] * r[k] for k in range(n)) for i in range(n)]
    return [[int(i == j) - gr[i] * r[j] for j in range(n)] for i in range(n)]


def coxeter_element(gram, roots) -> Matrix:
    u = identity(len(gram))
    for r in roots:
        u = mat_mul(u, reflection(gram, r))
    return u


def root_chain(gram, length: int) -> list[tuple[int, ...]]:
    """First (lexicographic, depth-first) chain of roots forming an A_length diagram."""
    roots = [v.coords for v in vectors_with_norm(gram, 2)]
    lat = Lattice(gram)
    chain: list = []

    def grow() -> bool:
        if len(chain) == length:
            return True
        for r in roots:
            if chain and lat.b(chain[-1], r) != -1:
                continue
            if any(lat.b(c, r) != 0 for c in chain[:-1]):
                continue
            if r in chain:
                continue
            chain.append(r)
            if grow():
                return True
            chain.pop()
        return False

    if not grow():
        raise ConstructionSelfCheckFailed(f"no A{length} root chain found")
    return chain


def _rref_gf2(words: list[int], width: int) -> list[int]:
    basis: list[int] = []
    for col in range(width - 1, -1, -1):
        bit = 1 << col
        piv = next((w for w in words if w & bit and w not in basis), None)
        if piv is None:
            continue
        words = [w ^ piv if (w & bit and w != piv) else w for w in words]
        basis = [b ^ piv if b & bit else b for b in basis]
        basis.append(piv)
        words = [w for w in words if w != piv]
    return basis


def build_golay_qr23() -> list[list[int]]:
    """Reduced 12×24 generator matrix of the extended QR code of length 24."""
    words = []
    for u in range(23):
        w = 0
        for r in QR23:
            w |= 1 << ((u + r) % 23)
        if bin(w).count("1") % 2:
            w |= 1 << INF
        words.append(w)
    words.append((1 << 24) - 1)
    basis = _rref_gf2(words, 24)
    rows = [[(w >> i) & 1 for i in range(24)] for w in basis]
    rows.sort(reverse=True)
    if len(rows) != 12:
        raise ConstructionSelfCheckFailed(f"code dimension {len(rows)} != 12")
    return rows


def codewords(gen: list[list[int]]) -> list[tuple[int, ...]]:
    words = [0]
    for row in gen:
        w = sum(bit << i for i, bit in enumerate(row))
        words += [x ^ w for x in words]
    n = len(gen[0])
    return [tuple((w >> i) & 1 for i in range(n)) for w in words]


def weight_enumerator(gen: list[list[int]]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for c in codewords(gen):
        k = sum(c)
        counts[k] = counts.get(k, 0) + 1
    return dict(sorted(counts.items()))


def p1_permutation(f) -> list[int]:
    """Permutation of the 24 positions induced by a map on P¹(F_23) fixing ∞."""
    return [f(i) % 23 for i in range(23)] + [INF]


def permute_word(word, perm) -> tuple[int, ...]:
    out = [0] * len(word)
    for i, v in enumerate(word):
        out[perm[i]] = v
    return tuple(out)


def _permutation_in_basis(basis, perm) -> Matrix:
    # (y·B)·P = y·U·B  ⇒  U = B·P·B⁻¹
    bp = [permute_word(row, perm) for row in basis]
    u = mat_mul(bp, rational_inverse(basis))
    if any(Fraction(v).denominator != 1 for row in u for v in row):
        raise ConstructionSelfCheckFailed("permutation does not preserve the lattice")
    return [[int(v) for v in row] for row in u]


def _check_automorphism(gram, u, order) -> None:
    if mat_mul(mat_mul(u, gram), transpose(u)) != [list(r) for r in gram]:
        raise ConstructionSelfCheckFailed("matrix does not preserve the Gram matrix")
    if mat_pow(u, order) != identity(len(gram)) or u == identity(len(gram)):
        raise ConstructionSelfCheckFailed(f"matrix does not have order {order}")


@lru_cache(maxsize=1)
def build_leech_from_golay() -> CatalogEntry:
    """Leech lattice as ``{x/√8}`` with ``x ≡ m (mod 2)``, ``Σx ≡ 4m (mod 8)``
    and the residues mod 4 arranged along Golay codewords.

    Generators: ``2c`` for the code basis, ``4(e_0 + e_i)``, ``8e_0`` and
    ``(1, …, 1, -3)``.  The basis is the HNF of these, so the Gram matrix
    is reproducible.
    """
    basis = leech_ambient_basis()
    raw = mat_mul(basis, transpose(basis))
    if any(v % 8 for row in raw for v in row):
        raise ConstructionSelfCheckFailed("Leech Gram matrix is not integral")
    gram = [[v // 8 for v in row] for row in raw]
    lat = Lattice(gram, "Leech")
    if det_bareiss(gram) != 1:
        raise ConstructionSelfCheckFailed("Leech determinant is not 1")
    if any(gram[i][i] % 2 for i in range(24)):
        raise ConstructionSelfCheckFailed("Leech lattice is not even")
    if vectors_with_norm(gram, 2):
        raise ConstructionSelfCheckFailed("Leech lattice has roots")
    autos = {}
    for name, f, order in (("order23", lambda x: x + 1, 23), ("order11", lambda x: 2 * x, 11)):
        u = _permutation_in_basis(basis, p1_permutation(f))
        _check_automorphism(gram, u, order)
        autos[name] = NamedAutomorphism(u, order)
    return CatalogEntry(lat, autos)


@lru_cache(maxsize=1)
def leech_ambient_basis() -> list[list[int]]:
    """Rows of the Leech basis in ``√8·ℤ^24`` coordinates (same basis as the catalog Gram)."""
    gen = build_golay_qr23()
    rows = [[2 * v for v in c] for c in gen]
    for i in range(1, 24):
        rows.append([4 if k in (0, i) else 0 for k in range(24)])
    rows.append([8] + [0] * 23)
    rows.append([1] * 23 + [-3])
    return hnf_basis(rows)


@lru_cache(maxsize=None)
def catalog(name: str) -> CatalogEntry:
    if name == "A1":
        return CatalogEntry(Lattice([[2]], "A1"), {})
    if name == "A2":
        lat = Lattice(a_n_gram(2), "A2")
        rot = [[0, 1], [-1, -1]]
        _check_automorphism(lat.gram, rot, 3)
        return CatalogEntry(lat, {"order3": NamedAutomorphism(rot, 3)})
    if name == "A6":
        g = a_n_gram(6)
        simple = [tuple(int(i == k) for i in range(6)) for k in range(6)]
        u = coxeter_element(g, simple)
        _check_automorphism(g, u, 7)
        return CatalogEntry(Lattice(g, "A6"), {"order7": NamedAutomorphism(u, 7)})
    if name == "E8":
        chain = root_chain(E8_GRAM, 6)
        u = coxeter_element(E8_GRAM, chain)
        _check_automorphism(E8_GRAM, u, 7)
        return CatalogEntry(Lattice(E8_GRAM, "E8"), {"order7": NamedAutomorphism(u, 7)})
    if name == "E8+E8":
        e8 = catalog("E8")
        lat = direct_sum(e8.lattice, e8.lattice, "E8+E8")
        u7 = e8.automorphisms["order7"].matrix
        u = [list(r) + [0] * 8 for r in identity(8)] + [[0] * 8 + list(r) for r in u7]
        _check_automorphism(lat.gram, u, 7)
        return CatalogEntry(lat, {"id+order7": NamedAutomorphism(u, 7)})
    if name == "Leech":
        return build_leech_from_golay()
    raise UnknownName(f"unknown lattice {name!r}; known: {', '.join(NAMES)}")


def catalog_pairs() -> list[tuple[str, str]]:
    """All (lattice, automorphism) name pairs shipped with the catalog."""
    return [(n, a) for n in NAMES for a in catalog(n).automorphisms]


def kissing(name: str) -> tuple[int, int]:
    return min_norm_and_kissing(catalog(name).lattice.gram)
