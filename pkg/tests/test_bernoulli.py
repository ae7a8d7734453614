import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcl.bernoulli import (
    bernoulli_polynomial,
    bn_coefficients,
    bn_series_oracle,
    bn_value,
    cocycle_bad_position,
    cocycle_sum,
    distribution_check,
    periodic_b,
)
from gcl.exact_core import inverse
from gcl.forms_geometry import (
    FormFamily,
    dual_basis_full,
    representatives_L_mod_M,
    unimodular_matrices,
)
from gcl.fuzz import cocycle_generic, full_rank_good, rational_points

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def test_bernoulli_polynomials():
    assert bernoulli_polynomial(0) == (1,)
    assert bernoulli_polynomial(1) == (Fraction(-1, 2), 1)
    assert bernoulli_polynomial(2) == (Fraction(1, 6), -1, 1)
    with pytest.raises(ValueError):
        bernoulli_polynomial(-1)


def test_periodic_values():
    assert periodic_b(1, Fraction(7, 3)) == Fraction(-1, 6)
    assert periodic_b(1, Fraction(1, 2)) == 0
    assert periodic_b(1, 0) == Fraction(-1, 2)


@given(st.integers(0, 6), rationals, st.integers(-3, 3))
def test_periodicity(k, x, t):
    assert periodic_b(k, x + t) == periodic_b(k, x)


@given(st.integers(1, 5), st.integers(1, 8), rationals)
def test_distribution_relation(m, N, x):
    assert distribution_check(m, N, x)


def test_grid_examples():
    c = bn_coefficients(FormFamily([[2, -1], [-1, 1]]), [0, 0])
    assert c.grid[(0, (1, 1))] == Fraction(1, 4)
    fam = FormFamily([[1, 1], [1, -1]])
    c = bn_coefficients(fam, [0, 0])
    F = representatives_L_mod_M(fam, dual_basis_full(fam), [0, 0])
    assert c.grid[(2, (0, 0))] == len(F) == 2


def test_dependent_forms_vanish():
    fam = FormFamily([[1, 0], [-1, 0]])
    assert bn_coefficients(fam, [0, 0]).is_zero()
    assert bn_value(fam, [Fraction(1, 3), 0], 2, [1, 5]) == 0


def test_identity_series_by_hand():
    # constant term of 1/(1-e^t)^2 = (-1/t + 1/2 - t/12 + ..)^2 is 1/4 + 1/6
    fam = FormFamily([[1, 0], [0, 1]])
    assert bn_series_oracle(fam, [0, 0], 0, [1, 1]) == Fraction(5, 12)
    assert bn_value(fam, [0, 0], 0, [1, 1]) == Fraction(5, 12)


def test_pole():
    fam = FormFamily([[1, 0], [0, 1]])
    with pytest.raises(ZeroDivisionError):
        bn_value(fam, [0, 0], 1, [0, 1])


def test_oracle_order_guard():
    with pytest.raises(ValueError):
        bn_series_oracle(FormFamily([[1, 0], [0, 1]]), [0, 0], 0, [1, 1], order=2)


def _instances(count, seed=7):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.choice([2, 3])
        fam = full_rank_good(rng, n, 2, bound=5, max_det=60)
        v = [Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3, 5])) for _ in range(n)]
        w, x = rational_points(fam, rng, 1)[0]
        yield fam, v, w, x, rng


def test_agrees_with_series_oracle():
    count = 0
    for fam, v, w, x, _ in _instances(100):
        assert bn_value(fam, v, w, x) == bn_series_oracle(fam, v, w, x)
        count += 1
    assert count == 100


def test_swap_negates():
    for fam, v, w, x, _ in _instances(20, seed=11):
        sw = fam.permute([1, 0] + list(range(2, fam.n)))
        assert bn_value(sw, v, w, x) == -bn_value(fam, v, w, x)


def test_equivariance():
    for fam, v, w, x, rng in _instances(20, seed=3):
        g = unimodular_matrices(fam.n, rng)
        g_inv = [[int(t) for t in row] for row in inverse(g)]
        gv = [sum(g[i][k] * v[k] for k in range(fam.n)) for i in range(fam.n)]
        # (g.x)(alpha) = x(g^-1 alpha)
        gx = [sum(x[i] * g_inv[i][k] for i in range(fam.n)) for k in range(fam.n)]
        assert bn_value(fam.act(g_inv), gv, w, gx) == bn_value(fam, v, w, x)


def test_value_depends_on_v_mod_lattice():
    for fam, v, w, x, rng in _instances(10, seed=5):
        shift = [rng.randint(-3, 3) for _ in range(fam.n)]
        assert bn_value(fam, [a + b for a, b in zip(v, shift)], w, x) == bn_value(fam, v, w, x)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(0, 10**6))
def test_cocycle_sum_generic(n, seed):
    rng = random.Random(seed)
    fam = cocycle_generic(rng, n)
    v = [Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3, 4])) for _ in range(n)]
    w = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    x = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]
    try:
        total = cocycle_sum(fam.forms, v, w, x)
    except ZeroDivisionError:
        return
    if cocycle_bad_position(fam.forms, v):
        assert total.denominator == 1
    else:
        assert total == 0


def test_cocycle_bad_position_example():
    # a + b + c = 0 makes 0 a barycentre; at v = 0 the sum is a nonzero integer
    forms = [[1, 0], [0, 1], [-1, -1]]
    assert cocycle_bad_position(forms, [0, 0])
    assert not cocycle_bad_position(forms, [Fraction(1, 3), 0])
    total = cocycle_sum(forms, [0, 0], Fraction(1, 2), [1, Fraction(3, 7)])
    assert total != 0 and total.denominator == 1
    assert cocycle_sum(forms, [Fraction(1, 3), 0], Fraction(1, 2), [1, Fraction(3, 7)]) == 0
