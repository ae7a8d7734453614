"""
Back to n = 2: Dedekind sums and theta^(N)
==========================================

For g in Gamma_0(N), theta^(N) = theta^N / theta(N z, N tau) picks up the
factor exp(2 i pi P), with P a combination of Dedekind sums.  The same P is
-b/D for the two-form family ([c/N, d], [0, 1]).
"""

import random

from gcl.classical_dedekind import (
    SL2,
    bridge_to_general,
    dedekind_sum,
    p2_N,
    phi_DR,
    random_sl2,
)

print("s(3,1) =", dedekind_sum(3, 1), " s(5,2) =", dedekind_sum(5, 2))
print("phi(S) =", phi_DR(SL2(0, -1, 1, 0)), " phi(T) =", phi_DR(SL2(1, 1, 0, 1)))

rng = random.Random(1)
for N in (2, 3, 5):
    for _ in range(3):
        g = random_sl2(rng, N)
        rep = bridge_to_general(g, N, rng=rng)
        print(f"N={N} g=({g.a},{g.b};{g.c},{g.d})  P={p2_N(g, N)}  b={rep.b} D={rep.D}  "
              f"exact={rep.exact_ok}  residual={rep.residual:.1e}")
