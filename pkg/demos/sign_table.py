"""
A sign table for four forms of rank three
=========================================

a_1 = f_1, a_2 = f_2, a_3 = -f_3, a_4 = f_2 + f_3 in Z^4.  The relation is
-a_2 + a_3 + a_4 = 0, so 0 is not a barycentre and the alternating product
of G functions is 1.
"""

from gcl import FormFamily
from gcl.cone_checker import (
                              build_sign_table,
                              check_sign_lemma,
                              check_triple_and_coverage,
                              cone_is_disjoint_union,
                              verify_f_vanishing,
)
from gcl.forms_geometry import standard_relation
from gcl.gamma_numeric import verify_rank_deficient

fam = FormFamily([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 1, 1, 0]])
x = [2j, 3j, 5j, -1]

rel = standard_relation(fam)
print("lambda", [str(t) for t in rel.lambdas], " k- =", rel.k_minus, " k+ =", rel.k_plus)

tab = build_sign_table(fam, x)
print(tab.render())
print(check_sign_lemma(tab))

cones = check_triple_and_coverage(tab)
print("cones ok:", cones.ok)
print("C1_2 = C1_3 u C1_4:", cone_is_disjoint_union(tab, 2, [3, 4]))

# f^1 and f^2 vanish on every realizable sign region
print("f vanishes:", verify_f_vanishing(fam, x, tab).ok)

rep = verify_rank_deficient(fam, [0, 0, 0, 0], 0.3 + 0.1j, x)
print("alternating product", rep.lhs, " residual", rep.residual)
