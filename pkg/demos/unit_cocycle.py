"""
Unit matrices and the cocycle
=============================

Multiplication by a root of x^3 - x - 1 on Z[t]/(t^3 - t - 1) is a matrix
in SL_3(Z).  Its seventh power fixes L' = [2 e_1, e_2, e_3], so level 2
smoothing applies to tuples of its powers.
"""

import random
from fractions import Fraction

from gcl.cohomology import (
    char_poly,
    check_cocycle_phi,
    coboundary_psi,
    companion_unit_matrix,
    condition_26_check,
    congruence_power,
    goodness_report,
    resolve,
)
from gcl.gamma_numeric import admissible_x, smoothing_families

M = companion_unit_matrix([-1, -1, 0])
print("M =", M.g, " char poly coefficients", char_poly(M))
k = congruence_power(M, 2)
P = M ** k
print("first power in the level-2 subgroup:", k)

a = [1, 1, 0]
v = [Fraction(1, 3), 0, Fraction(1, 2)]
x_rat = [1, Fraction(2, 7), Fraction(-3, 5)]
# most power tuples resolve to non-generic families and are reported out of scope
for exps in [(1, 1, 2), (2, 2, 2), (-1, 2, 2), (1, 1, -3)]:
    rep = check_cocycle_phi(a, [M ** e for e in exps], v, Fraction(1, 3), x_rat)
    print("powers", exps, "->", rep.status, rep.value)

print("orbit a, Ma, .., M^5 a in an open half-space:",
      condition_26_check(a, [M ** j for j in range(6)]))

rng = random.Random(0)
gs = [P, P.inv()]
x = admissible_x(smoothing_families(resolve(a, gs), 2), rng, 0.05)
rep = coboundary_psi(a, gs, v, 0.1 + 0.05j, x, N=2)
print("smoothed coboundary residual", rep.residual, " well placed", rep.well_placed)
print(goodness_report(a, [[P, P], [P, P.inv()]], 2))
