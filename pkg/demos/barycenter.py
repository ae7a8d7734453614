"""
When 0 is a barycentre
======================

With a_1 = -a_2 the alternating product is no longer 1.  It is a single
G function of lower order (an exponential when n = 2), and some sign
region carries a nonzero f.
"""

import random
from fractions import Fraction

from gcl.cone_checker import counterexample_when_barycenter
from gcl.fuzz import barycenter_family
from gcl.gamma_numeric import InadmissibleX, admissible_x, barycenter_residual

w = 0.1 + 0.05j
for n, v, x in [(2, [Fraction(1, 3), 0], [1 + 0.2j, 0.3 + 1.1j]),
                (3, [Fraction(1, 4), 0, Fraction(1, 2)], [1 + 0.1j, -0.2 + 0.9j, 0.4 + 1.3j]),
                (4, [0, 0, Fraction(1, 3), 0], [1, 0.2 + 1.2j, -0.3 + 0.8j, 0.1 + 1.5j])]:
    alt, pred = barycenter_residual(n, v, w, x)
    print(f"n={n}  product {alt:.6f}  closed form {pred:.6f}  |diff| {abs(alt - pred):.1e}")

rng = random.Random(3)
for _ in range(4):
    fam = barycenter_family(rng, 3)
    try:
        x = admissible_x([fam.omit(j) for j in range(3)], rng, gaussian_rational=True)
    except InadmissibleX:
        continue
    wit = counterexample_when_barycenter(fam, x, numeric=True)
    print([list(a) for a in fam.forms], "pattern", wit.pattern, "f =", (wit.f1, wit.f2),
          f"|product - 1| = {wit.residual:.3f}")
