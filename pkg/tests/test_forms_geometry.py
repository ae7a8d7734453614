import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gcl.exact_core import det, dot, int_det, inverse, is_primitive, primitive_part
from gcl.forms_geometry import (
    FormFamily,
    RankError,
    check_dual,
    dual_basis_full,
    dual_family_deficient,
    enumerate_F,
    gamma_vector,
    is_well_placed,
    representatives_L_mod_M,
    standard_relation,
    unimodular_matrices,
)
from gcl.fuzz import rank_deficient


def prim_forms(n, m):
    form = st.lists(st.integers(-3, 3), min_size=n, max_size=n).filter(any)
    return st.lists(form.map(lambda a: primitive_part(a)[0]), min_size=m, max_size=m)


def test_family_rejects_bad_input():
    with pytest.raises(ValueError):
        FormFamily([[2, 4]])
    with pytest.raises(ValueError):
        FormFamily([[1]])
    with pytest.raises(ValueError):
        FormFamily([[1, 0], [1, 0, 0]])


def test_family_json_roundtrip():
    fam = FormFamily([[1, 2, 0], [0, 1, -1]])
    back, v = FormFamily.from_json(fam.to_json([Fraction(1, 3), 0, Fraction(-2, 5)]))
    assert back == fam and v == [Fraction(1, 3), 0, Fraction(-2, 5)]


@pytest.mark.parametrize("forms,alphas,s", [
    ([[1, 0], [0, 1]], ((1, 0), (0, 1)), (1, 1)),
    ([[2, -1], [-1, 1]], ((1, 1), (1, 2)), (1, 1)),
    ([[1, 1], [1, -1]], ((1, 1), (1, -1)), (2, 2)),
])
def test_dual_basis_full_examples(forms, alphas, s):
    d = dual_basis_full(FormFamily(forms))
    assert d.alphas == alphas and d.s == s


def test_dual_basis_full_needs_rank():
    with pytest.raises(RankError):
        dual_basis_full(FormFamily([[1, 0], [-1, 0]]))


@given(st.integers(2, 4).flatmap(lambda n: prim_forms(n, n)))
def test_dual_basis_full_properties(forms):
    fam = FormFamily(forms)
    assume(fam.rank == fam.n)
    assert check_dual(fam, dual_basis_full(fam))


def test_gamma_examples(example_family):
    assert gamma_vector(FormFamily([[1, 0]])).gamma == (0, 1)
    assert gamma_vector(FormFamily([[1, 0]])).s == 1
    assert gamma_vector(example_family.omit(3)).gamma == (0, 0, 0, -1)


@given(st.integers(2, 4).flatmap(lambda n: prim_forms(n, n - 1)))
def test_gamma_and_deficient_dual(forms):
    fam = FormFamily(forms, len(forms[0]))
    assume(fam.rank == fam.n - 1)
    g = gamma_vector(fam)
    assert is_primitive(g.gamma) and g.s > 0
    assert all(dot(a, g.gamma) == 0 for a in fam)
    # det(a_1, .., a_{n-1}, f_k) = s gamma_k
    for k in range(fam.n):
        fk = [int(i == k) for i in range(fam.n)]
        assert int_det(list(fam.forms) + [fk]) == g.s * g.gamma[k]
    assert check_dual(fam, dual_family_deficient(fam))


def test_deficient_dual_example(example_family):
    d = dual_family_deficient(example_family.omit(2))
    assert d.alphas[1] == (0, 1, -1, 0)
    assert check_dual(example_family.omit(2), d)
    assert dual_family_deficient(FormFamily([[1, 0]])).alphas == ((1, 0),)


def test_standard_relation_examples(example_family):
    r = standard_relation(example_family)
    assert r.lambdas == (0, -1, 1, 1)
    assert (r.l, r.k_minus, r.k_plus) == (1, 1, 2)
    r = standard_relation(FormFamily([[1, 2], [-1, -2], [0, 1]]))
    assert r.lambdas == (1, 1, 0) and (r.k_minus, r.k_plus) == (0, 2)
    with pytest.raises(RankError):
        standard_relation(FormFamily([[1, 0], [0, 1]]))


def test_standard_relation_tie_breaks_negative():
    # a + b + c = 0 would tie nothing; a - b - c + d = 0 ties 2 vs 2
    fam = FormFamily([[1, 0, 0], [1, 1, 0], [0, 1, 1], [0, 0, 1]])
    r = standard_relation(fam)
    assert r.k_plus == r.k_minus == 2 and r.lambdas[r.l] == -1
    assert all(sum(lam * a[i] for lam, a in zip(r.lambdas, fam)) == 0 for i in range(3))


@given(st.integers(2, 4), st.booleans(), st.integers(0, 10**6))
def test_standard_relation_normalization(n, wp, seed):
    fam = rank_deficient(random.Random(seed), n, well_placed=wp or n == 2)
    r = standard_relation(fam)
    for i in range(fam.n):
        assert sum(lam * a[i] for lam, a in zip(r.lambdas, fam)) == 0
    assert all(x == 0 for x in r.lambdas[:r.l]) and abs(r.lambdas[r.l]) == 1
    assert r.k_minus <= r.k_plus
    if r.k_minus == r.k_plus:
        assert r.lambdas[r.l] == -1
    # the other candidate (-lambda) violates a rule
    neg = [-x for x in r.lambdas]
    km = sum(1 for x in neg if x < 0)
    kp = sum(1 for x in neg if x > 0)
    assert km > kp or (km == kp and neg[r.l] == 1)


def test_well_placed_examples(example_family):
    assert is_well_placed(FormFamily([[1, 0], [0, 1]]))
    assert is_well_placed(example_family)
    assert not is_well_placed(FormFamily([[1, 0, 0], [-1, 0, 0], [0, 1, 0]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: prim_forms(n, n)), st.integers(0, 10**6))
def test_well_placed_invariance(forms, seed):
    fam = FormFamily(forms)
    rng = random.Random(seed)
    base = is_well_placed(fam)
    perm = list(range(len(fam)))
    rng.shuffle(perm)
    assert is_well_placed(fam.permute(perm)) == base
    g = unimodular_matrices(fam.n, rng)
    g_inv = [[int(t) for t in row] for row in inverse(g)]
    assert is_well_placed(fam.act(g_inv)) == base


def test_enumerate_F_examples():
    fam = FormFamily([[1, 0]])
    d = dual_family_deficient(fam)
    assert enumerate_F(fam, d, [0, 0]) == [[0, 0]]


def _classes(F, gamma):
    # canonical representative modulo Z gamma: zero out the first nonzero gamma slot
    p = next(i for i, t in enumerate(gamma) if t)
    return sorted(tuple(x - (d[p] / gamma[p]) * y for x, y in zip(d, gamma)) for d in F)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: prim_forms(n, n - 1)),
       st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=6), min_size=4, max_size=4),
       st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_enumerate_F_invariance(forms, v, shift):
    fam = FormFamily(forms, len(forms[0]))
    assume(fam.rank == fam.n - 1)
    n = fam.n
    v = v[:n]
    d = dual_family_deficient(fam)
    gam = gamma_vector(fam).gamma
    F = enumerate_F(fam, d, v)
    for delta in F:
        assert all(0 <= dot(a, delta) < s for a, s in zip(fam, d.s))
    assert _classes(enumerate_F(fam, d, [x + y for x, y in zip(v, gam)]), gam) == _classes(F, gam)
    assert _classes(enumerate_F(fam, d, [x + y for x, y in zip(v, shift)]), gam) == _classes(F, gam)
    # another positive dual family: translate alpha_1 along gamma and scale it
    alt = type(d)((tuple(x + 3 * y for x, y in zip(d.alphas[0], gam)),) + d.alphas[1:], d.s)
    assert len(enumerate_F(fam, alt, v)) == len(F)


def test_representatives_examples():
    fam = FormFamily([[2, -1], [-1, 1]])
    assert len(representatives_L_mod_M(fam, dual_basis_full(fam), [0, 0])) == 1
    fam = FormFamily([[1, 0], [0, 1]])
    assert representatives_L_mod_M(fam, dual_basis_full(fam), [Fraction(5, 2), -1]) == [[-2, 1]]


@given(prim_forms(2, 2), st.fractions(-2, 2, max_denominator=5), st.fractions(-2, 2, max_denominator=5))
def test_representatives_cardinality(forms, v1, v2):
    fam = FormFamily(forms)
    assume(fam.rank == 2)
    d = dual_basis_full(fam)
    F = representatives_L_mod_M(fam, d, [v1, v2])
    assert len(F) == abs(det(d.alpha_matrix()))
    # brute-force coset count: distinct classes of L/M, and v + delta in P
    inv = inverse(d.alpha_matrix())
    classes = {tuple((sum(r[k] * delta[k] for k in range(2))) % 1 for r in inv) for delta in F}
    assert len(classes) == len(F)
    for delta in F:
        assert all(0 <= dot(a, [v1 + delta[0], v2 + delta[1]]) < s for a, s in zip(fam, d.s))
