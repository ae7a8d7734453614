import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcl.cyclotomic import (
    CycloElem,
    cd_lemma_check,
    cd_lemma_sides,
    chi,
    cyclotomic_poly,
    denominator_valuation_check,
    euler_phi,
    floor_ceiling_identity,
    smoothed_bn_trace,
    trace_power_sums,
    trace_to_Q,
)
from gcl.forms_geometry import (
    FormFamily,
    RankError,
    dual_basis_full,
    representatives_L_mod_M,
)
from gcl.fuzz import full_rank_good
from gcl.smoothing import compute_Q, smoothed_bn_dedekind

qs = st.fractions(min_value=-4, max_value=4, max_denominator=7)


def elem(d, cs):
    return CycloElem.make(d, cs)


def test_cyclotomic_polys():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert all(len(cyclotomic_poly(d)) - 1 == euler_phi(d) for d in range(1, 30))


def test_inverse_examples():
    z2 = CycloElem.zeta_power(2, 1)
    assert (z2 - 1).inverse() == CycloElem.const(2, Fraction(-1, 2))
    z4 = CycloElem.zeta_power(4, 1)
    assert (z4 - 1) * (z4 - 1).inverse() == CycloElem.const(4, 1)
    with pytest.raises(ZeroDivisionError):
        CycloElem.const(5, 0).inverse()


@given(st.integers(2, 12), st.lists(qs, min_size=1, max_size=12))
def test_inverse_roundtrip(d, cs):
    e = elem(d, cs)
    if e.is_zero():
        return
    assert e * e.inverse() == CycloElem.const(d, 1)


def test_trace_examples():
    assert all(trace_to_Q(CycloElem.const(d, 1)) == euler_phi(d) for d in range(1, 20))
    assert trace_to_Q(CycloElem.const(2, Fraction(-1, 2))) == Fraction(-1, 2)


@given(st.integers(2, 12), st.lists(qs, min_size=1, max_size=12),
       st.lists(qs, min_size=1, max_size=12), qs)
def test_trace_linear_and_two_routes(d, a, b, c):
    x, y = elem(d, a), elem(d, b)
    assert trace_to_Q(x + y * CycloElem.const(d, c)) == trace_to_Q(x) + c * trace_to_Q(y)
    assert trace_to_Q(x) == trace_power_sums(x)


def test_trace_of_conjugates_agrees_numerically():
    rng = random.Random(0)
    for d in range(3, 13):
        e = elem(d, [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(d)])
        conj = sum(e.galois(k).to_complex() for k in range(1, d) if math.gcd(k, d) == 1)
        assert abs(conj - float(trace_to_Q(e))) < 1e-9


def test_cd_examples():
    lhs, rhs = cd_lemma_sides(2, 0, 1)
    assert lhs == rhs == CycloElem.const(2, Fraction(-1, 2))
    with pytest.raises(ValueError):
        cd_lemma_check(3, 0, 3)


@given(st.integers(2, 12), qs, st.integers(1, 11))
def test_cd_identity(N, x, y):
    if y % N == 0:
        return
    assert cd_lemma_check(N, x, y)
    assert cd_lemma_sides(N, x + N, y) == cd_lemma_sides(N, x, y)


def test_floor_ceiling():
    assert all(floor_ceiling_identity(p, n) for p in (2, 3, 5, 7, 11, 13) for n in range(2, 11))


def test_valuation_bounds():
    rng = random.Random(3)
    for d in (2, 3, 4, 5, 8, 9, 6, 10, 12):
        for n in (2, 3):
            assert denominator_valuation_check(d, n, rng, samples=10)


def test_chi_dichotomy(reference_family):
    rng = random.Random(8)
    for _ in range(15):
        N = rng.choice([2, 3, 4, 5, 6])
        fam = full_rank_good(rng, rng.choice([2, 3]), N)
        row = dual_basis_full(fam).first_row()
        Qg = compute_Q(dual_basis_full(fam), N)
        for _ in range(10):
            qv = [rng.randrange(N) for _ in row]
            assert chi(qv, row, N) == (N if tuple(qv) in Qg else 0)


def test_reference_trace(reference_family):
    assert smoothed_bn_trace(reference_family, [0, 0], 2).value == Fraction(1, 4)


def test_trace_rejects_dependent_forms():
    with pytest.raises(RankError):
        smoothed_bn_trace(FormFamily([[2, 1], [-2, -1]]), [0, 0], 2)


def test_trace_matches_dedekind_and_ignores_representatives():
    rng = random.Random(17)
    for _ in range(30):
        n, N = rng.choice([2, 3]), rng.choice([2, 3, 4, 5, 6])
        fam = full_rank_good(rng, n, N)
        v = [Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])) for _ in range(n)]
        target = smoothed_bn_dedekind(fam, v, N).value
        assert smoothed_bn_trace(fam, v, N).value == target
        dual = dual_basis_full(fam)
        F = representatives_L_mod_M(fam, dual, v)
        moved = []
        for d in F:
            cs = [rng.randint(-2, 2) for _ in dual.alphas]
            moved.append([t + sum(c * al[i] for c, al in zip(cs, dual.alphas))
                          for i, t in enumerate(d)])
        # each delta moved by its own element of M: still a set of representatives of L/M
        assert smoothed_bn_trace(fam, v, N, reps=moved).value == target


def test_floor_without_lift_depends_on_representatives():
    rng = random.Random(5)
    changed = 0
    for _ in range(20):
        N = rng.choice([3, 4, 5])
        fam = full_rank_good(rng, 2, N)
        v = [Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])) for _ in range(2)]
        dual = dual_basis_full(fam)
        F = representatives_L_mod_M(fam, dual, v)
        moved = [[t + dual.alphas[0][i] for i, t in enumerate(d)] for d in F]
        a = smoothed_bn_trace(fam, v, N, include_lift=False).value
        b = smoothed_bn_trace(fam, v, N, reps=moved, include_lift=False).value
        changed += a != b
    assert changed > 0
