import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcl.classical_dedekind import (
    IDENTITY,
    SL2,
    S,
    bridge_family,
    bridge_to_general,
    dedekind_sum,
    p2,
    p2_N,
    p2_N_from_phi,
    phi_DR,
    psi_N,
    random_sl2,
    theta_N,
)
from gcl.gamma_numeric import theta
from gcl.smoothing import dim_bound, in_lambda_N


def e(t):
    return cmath.exp(2j * math.pi * t)


def test_sl2_basics():
    with pytest.raises(ValueError):
        SL2(1, 1, 1, 1)
    assert S @ S == SL2(-1, 0, 0, -1)
    assert IDENTITY @ S == S


def test_dedekind_examples():
    assert all(dedekind_sum(1, d) == 0 for d in range(-5, 6))
    assert dedekind_sum(3, 1) == Fraction(1, 18)
    assert dedekind_sum(5, 2) == 0
    with pytest.raises(ValueError):
        dedekind_sum(0, 1)


@given(st.integers(1, 40), st.integers(-60, 60))
def test_dedekind_periodic_and_odd(c, d):
    if math.gcd(c, d) != 1:
        return
    assert dedekind_sum(c, d + c) == dedekind_sum(c, d)
    assert dedekind_sum(c, -d) == -dedekind_sum(c, d)


@given(st.integers(1, 30), st.integers(1, 30))
def test_dedekind_reciprocity(c, d):
    if math.gcd(c, d) != 1:
        return
    lhs = dedekind_sum(c, d) + dedekind_sum(d, c)
    assert lhs == Fraction(-1, 4) + Fraction(c * c + d * d + 1, 12 * c * d)


def test_phi_examples():
    assert phi_DR(IDENTITY) == 0
    # (a + d)/c with a = d = 0 and s(1, 0) = 0
    assert phi_DR(S) == 0


def test_phi_integral():
    rng = random.Random(0)
    for _ in range(2000):
        phi_DR(random_sl2(rng, bound=20))


def test_phi_near_morphism():
    rng = random.Random(1)
    checked = 0
    while checked < 100:
        g, h = random_sl2(rng), random_sl2(rng)
        gh = g @ h
        if g.c * h.c * gh.c == 0:
            continue
        sgn = 1 if g.c * h.c * gh.c > 0 else -1
        assert phi_DR(gh) == phi_DR(g) + phi_DR(h) - 3 * sgn
        checked += 1


def test_psi_is_a_homomorphism():
    rng = random.Random(2)
    for N in (2, 3, 4, 5, 6):
        assert psi_N(IDENTITY, N) == 0
        for _ in range(40):
            g, h = random_sl2(rng, N), random_sl2(rng, N)
            assert psi_N(g @ h, N) == psi_N(g, N) + psi_N(h, N)


def test_p2_N_branches():
    for N in (2, 3, 7):
        assert p2_N(IDENTITY, N) == 0
        assert p2_N(SL2(-1, 0, 0, -1), N) == Fraction(1 - N, 2)
        assert p2_N(SL2(-1, 4, 0, -1), N) == Fraction(1 - N, 2)
    with pytest.raises(ValueError):
        p2_N(S, 2)


def test_p2_N_through_phi():
    rng = random.Random(3)
    for N in (2, 3, 4, 5, 6, 7):
        for _ in range(30):
            g = random_sl2(rng, N)
            P = p2_N(g, N)
            assert P == p2_N_from_phi(g, N)
            assert (dim_bound(2) * P).denominator == 1


def test_p2_against_theta():
    rng = random.Random(4)
    done = 0
    while done < 30:
        g = random_sl2(rng, bound=4)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5))
        z = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.05, 0.3) * tau.imag)
        if abs(g.c * tau + g.d) < 0.3:
            continue
        lhs = theta(*g.act(z, tau))
        rhs = theta(z, tau) * e(p2(g, z, tau))
        assert abs(lhs - rhs) < 1e-8 * max(1, abs(rhs))
        done += 1


def test_p2_minus_identity_branch():
    z, tau = 0.2 + 0.1j, 0.1 + 1.2j
    g = SL2(-1, 0, 0, -1)
    assert abs(theta(*g.act(z, tau)) - theta(z, tau) * e(p2(g, z, tau))) < 1e-10


def test_theta_N_defect():
    rng = random.Random(5)
    for N in (2, 3):
        for _ in range(5):
            g = random_sl2(rng, N, bound=3)
            tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 1.4))
            z = complex(rng.uniform(-0.2, 0.2), 0.15 * tau.imag)
            if abs(g.c * tau + g.d) < 0.3:
                continue
            lhs = theta_N(*g.act(z, tau), N)
            rhs = theta_N(z, tau, N) * e(float(p2_N(g, N)))
            assert abs(lhs - rhs) < 1e-8 * max(1, abs(rhs))


def test_bridge_family_in_lambda():
    rng = random.Random(6)
    for N in (2, 3, 5):
        for _ in range(10):
            g = random_sl2(rng, N)
            if g.c:
                assert all(in_lambda_N(a, N) for a in bridge_family(g, N))


def test_bridge():
    rng = random.Random(7)
    exact = 0
    for N in (2, 3, 5):
        for _ in range(12):
            rep = bridge_to_general(random_sl2(rng, N), N, rng=rng)
            assert rep.ok, rep
            exact += rep.exact_ok is True
    assert exact > 20


def test_bridge_constant_across_points():
    g = SL2(1, 0, 2, 1)
    a = bridge_to_general(g, 2, samples=[(0.1 + 0.2j, 0.2 + 1.1j)])
    b = bridge_to_general(g, 2, samples=[(-0.15 + 0.1j, -0.3 + 0.9j), (0.05 + 0.3j, 1.2j)])
    assert a.ok and b.ok and a.b == b.b and a.p2n == b.p2n
