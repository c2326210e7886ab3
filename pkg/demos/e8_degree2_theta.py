# Degree-2 theta coefficients of E8 modulo 7.
import time

import numpy as np

from latticetheta import catalog
from latticetheta.theta import congruence_check_theta_op, theta_table, theta_operator

E8 = catalog("E8").lattice

t = time.time()
table = theta_table(E8, 2, 2, definite_only=True)
print("computed", len(table.entries), "positive definite coefficients in", round(time.time() - t, 1), "s")

for f, (d, a) in sorted(theta_operator(table).items()):
    print(np.array(f.twoT).tolist(), "A =", table.entries[f], " A mod 7 =", table.entries[f] % 7,
          " det(2T)*A mod 7 =", d * a % 7)

# the fixed lattice of the order-7 map has rank 2, so the theta operator
# kills the degree-2 series mod 7 even where A itself is not divisible
rep = congruence_check_theta_op(E8, 7, 2, 2)
print("theta-operator congruence holds:", rep.holds, "on", rep.checked, "forms")
