"""
The smallest smoothed Bernoulli value
=====================================

Two forms on Z^2, a_1 = [2, -1] and a_2 = [-1, 1], smoothed at level N = 2.
The exact value is 1/4, it comes out the same three ways, and the product
of smoothed G functions lands on exp(2 i pi / 4) = i.
"""

import random
from fractions import Fraction

import numpy as np

from gcl import FormFamily, smoothed_bn_dedekind, smoothed_bn_direct, smoothed_bn_trace
from gcl.forms_geometry import dual_basis_full
from gcl.gamma_numeric import admissible_x, smoothing_families, verify_main

fam = FormFamily([[2, -1], [-1, 1]])
N = 2
v = [0, 0]

# dual basis: a_k(alpha_j) = s_j delta_jk
dual = dual_basis_full(fam)
print("alphas", dual.alphas, "s", dual.s)

# Dedekind-sum form, with the denominator bound D(N, n)
sv = smoothed_bn_dedekind(fam, v, N)
print("value", sv.value, " b =", sv.b, " D =", sv.D)

# the definition N B(L') - B(L) does not see (w, x)
for w, x in [(0, [1, 2]), (Fraction(3, 7), [Fraction(-1, 3), 5])]:
    print("direct at", w, x, "->", smoothed_bn_direct(fam, v, w, x, N))

# cyclotomic traces, one term per divisor d > 1 of N
print("trace", smoothed_bn_trace(fam, v, N).value)

rng = random.Random(0)
fams = smoothing_families(fam, N)
samples = [(complex(rng.gauss(0, 0.3), rng.gauss(0, 0.3)), admissible_x(fams, rng)) for _ in range(3)]
rep = verify_main(fam, v, N, samples)
print("products", np.round(rep.samples, 12))
print("residual vs exp(2 i pi b/D):", rep.residual)
