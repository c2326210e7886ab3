# |O(E8)| as a Fourier coefficient of E8 and of E8 + Leech.
import time

from latticetheta import catalog
from latticetheta.catalog import E8_GRAM
from latticetheta.theta import convolution_check, representation_number

E8 = catalog("E8").lattice
leech = catalog("Leech").lattice

t = time.time()
a = representation_number(E8, E8_GRAM)
print("A(E8, E8) =", a, "=", "2^14 3^5 5^2 7" if a == 2**14 * 3**5 * 5**2 * 7 else "?",
      f"({time.time() - t:.1f}s)")
print("divisible by 13?", a % 13 == 0)

# Leech has no vectors of norm 2, so the only splitting of the E8 form
# gives everything to the E8 summand
t = time.time()
rep = convolution_check(E8, leech, 8, forms=[E8_GRAM])
print(rep.extra["values"][0], f"({time.time() - t:.1f}s)")
