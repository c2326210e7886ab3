# Fixed lattices of two permutation automorphisms of the Leech lattice.
import numpy as np

from latticetheta import catalog, fixed_sublattice, splitting_check, validate_automorphism
from latticetheta.exact_linalg import lll_reduce
from latticetheta.lattice import BinaryForm, Lattice, is_isometric_small, reduce_binary

leech = catalog("Leech")
L = leech.lattice
print("rank", L.rank, "det", L.det)

# x -> x+1 on the projective line over F_23
a = leech.automorphisms["order23"]
s = validate_automorphism(L, a.matrix, a.order)
M0 = fixed_sublattice(L, s)
g = M0.gram
print("order 23: M0 rank", M0.rank, "det", M0.det)
print("reduced Gram", reduce_binary(BinaryForm(g[0][0], g[0][1], g[1][1])).gram)

rep = splitting_check(L, s)
print("orthogonal split?", rep.is_orthogonal_split, "| p divides det M0?", rep.det_M0_divisible_by_p)

# x -> 2x has order 11 and fixes a quaternary lattice
a = leech.automorphisms["order11"]
s = validate_automorphism(L, a.matrix, a.order)
M0 = fixed_sublattice(L, s)
print("order 11: M0 rank", M0.rank, "det", M0.det)
print(np.array(lll_reduce([list(r) for r in M0.gram])[0]))

quaternary = Lattice([[4, 2, 1, 0], [2, 4, 1, 1], [1, 1, 4, 2], [0, 1, 2, 4]])
print("isometric to the det-121 quaternary form:", is_isometric_small(M0.as_lattice(), quaternary))
