import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticetheta.catalog import E8_GRAM, a_n_gram, catalog
from latticetheta.errors import NotPositiveDefinite, RankTooLarge
from latticetheta.exact_linalg import det_bareiss, index_of_sublattice, mat_mul, transpose
from latticetheta.lattice import (
    BinaryForm,
    Lattice,
    decompose,
    direct_sum,
    find_isometry,
    is_isometric_small,
    reduce_binary,
    reduce_binary_with_transform,
    validate_even_lattice,
)

A1 = Lattice([[2]], "A1")
E8 = Lattice(E8_GRAM, "E8")


def test_validate_examples():
    rep = validate_even_lattice(E8)
    assert rep.ok and rep.determinant == 1 and rep.unimodular
    odd = validate_even_lattice(Lattice([[1, 0], [0, 1]]))
    assert not odd.even_diagonal and not odd.ok
    indefinite = validate_even_lattice(Lattice([[2, 3], [3, 2]]))
    assert not indefinite.positive_definite and indefinite.determinant == -5


def test_validate_nonsymmetric():
    rep = validate_even_lattice(Lattice([[2, 1], [0, 2]]))
    assert not rep.symmetric and not rep.ok


def test_direct_sum_examples():
    assert direct_sum(A1, A1).gram == ((2, 0), (0, 2))
    leech = catalog("Leech").lattice
    s = direct_sum(E8, leech)
    assert s.rank == 32 and s.det == 1


def check_decomposition(lat, comps):
    g = [list(r) for r in lat.gram]
    for i, a in enumerate(comps):
        for b in comps[i + 1:]:
            cross = mat_mul(mat_mul([list(r) for r in a.coords], g), transpose([list(r) for r in b.coords]))
            assert all(v == 0 for row in cross for v in row)
    stacked = [list(r) for c in comps for r in c.coords]
    assert len(stacked) == lat.rank
    assert index_of_sublattice(stacked) == 1
    prod = 1
    for c in comps:
        prod *= c.det
    assert prod == lat.det


def test_decompose_examples():
    comps = decompose(direct_sum(A1, A1))
    assert [c.gram for c in comps] == [((2,),), ((2,),)]
    assert len(decompose(E8)) == 1
    ee = catalog("E8+E8").lattice
    comps = decompose(ee)
    assert [(c.rank, c.det) for c in comps] == [(8, 1), (8, 1)]
    check_decomposition(ee, comps)


def test_decompose_refines_direct_sums():
    pieces = [Lattice(a_n_gram(2)), Lattice([[2]]), Lattice([[4, 1], [1, 6]]), Lattice(a_n_gram(3))]
    rng = random.Random(31)
    for _ in range(12):
        a, b = rng.sample(pieces, 2)
        s = direct_sum(a, b)
        comps = decompose(s)
        check_decomposition(s, comps)
        assert sorted(c.rank for c in comps) == sorted(c.rank for c in decompose(a) + decompose(b))


def test_decompose_hidden_sum():
    # A2 ⊥ A1 written in a scrambled basis
    g = [list(r) for r in direct_sum(Lattice(a_n_gram(2)), A1).gram]
    u = [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
    assert abs(det_bareiss(u)) == 1
    h = mat_mul(mat_mul(u, g), transpose(u))
    lat = Lattice(h)
    comps = decompose(lat)
    assert sorted(c.det for c in comps) == [2, 3]
    check_decomposition(lat, comps)


def test_decompose_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        decompose(Lattice([[2, 3], [3, 2]]))


def test_reduce_binary_examples():
    assert reduce_binary(BinaryForm(6, 1, 4)) == BinaryForm(4, 1, 6)
    assert reduce_binary(BinaryForm(4, 1, 6)) == BinaryForm(4, 1, 6)
    assert reduce_binary(BinaryForm(2, 1, 2)) == BinaryForm(2, 1, 2)
    with pytest.raises(NotPositiveDefinite):
        reduce_binary(BinaryForm(1, 2, 1))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 40), st.integers(-40, 40), st.integers(1, 40))
def test_reduce_binary_properties(a, b, c):
    if a * c - b * b <= 0:
        return
    f = BinaryForm(a, b, c)
    r, t = reduce_binary_with_transform(f)
    assert 0 <= 2 * r.b <= r.a <= r.c
    assert mat_mul(mat_mul(t, [list(x) for x in f.gram]), transpose(t)) == [list(x) for x in r.gram]
    assert abs(det_bareiss(t)) == 1
    assert reduce_binary(r) == r
    assert r.det == f.det


def test_isometry_examples():
    assert is_isometric_small(E8, E8)
    assert is_isometric_small(Lattice([[2, 1], [1, 2]]), Lattice([[2, -1], [-1, 2]]))
    assert not is_isometric_small(Lattice([[2, 0], [0, 2]]), Lattice([[2, 1], [1, 2]]))
    with pytest.raises(RankTooLarge):
        is_isometric_small(catalog("Leech").lattice, catalog("Leech").lattice)


def random_equivalent(rng, g):
    n = len(g)
    while True:
        u = [[rng.randint(-1, 1) for _ in range(n)] for _ in range(n)]
        if abs(det_bareiss(u)) == 1:
            return mat_mul(mat_mul(u, g), transpose(u))


def test_isometry_equivalence_relation():
    rng = random.Random(32)
    base = [[[2, 1], [1, 4]], [[4, 1], [1, 6]], [[2, 0], [0, 6]], a_n_gram(3), [[4, 2, 1], [2, 4, 1], [1, 1, 4]]]
    pool = []
    for g in base:
        pool.append((g, Lattice(g)))
        for _ in range(2):
            pool.append((g, Lattice(random_equivalent(rng, g))))
    for (g1, l1), (g2, l2) in product(pool, repeat=2):
        w = find_isometry(l1, l2)
        assert (w is not None) == (g1 == g2)
        if w is not None:
            assert mat_mul(mat_mul(w, [list(r) for r in l2.gram]), transpose(w)) == [list(r) for r in l1.gram]
            assert abs(det_bareiss(w)) == 1
