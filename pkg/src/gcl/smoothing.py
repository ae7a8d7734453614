"""Level-N smoothing with respect to L' = [N e_1, e_2, ..., e_n].

The smoothed Bernoulli value N B(L') - B(L) is computed by brute force (as a
difference of two Bernoulli functions) and by the periodic-Bernoulli
Dedekind-sum formula over the group Q and the lifts r_j.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd

from .bernoulli import bn_coefficients, bn_evaluate, compositions, periodic_b, x_of
from .exact_core import dot, q
from .forms_geometry import (
    DualData,
    FormFamily,
    RankError,
    dual_basis_full,
    epsilon,
    representatives_L_mod_M,
)


class NotGood(ValueError):
    pass


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def primes_up_to(m: int) -> list[int]:
    return [p for p in range(2, m + 1) if prime_factors(p) == [p]]


def denominator_bound(N: int, n: int) -> int:
    """D(N, n) = prod_{p | N} p^{floor(n/(p-1))}."""
    out = 1
    for p in prime_factors(N):
        out *= p ** (n // (p - 1))
    return out


def dim_bound(n: int) -> int:
    """The N-uniform envelope prod_{p <= n+1} p^{floor(n/(p-1))}."""
    out = 1
    for p in primes_up_to(n + 1):
        out *= p ** (n // (p - 1))
    return out


def in_lambda_N(a: Sequence[int], N: int) -> bool:
    g = N * a[0]
    for t in a[1:]:
        g = gcd(g, t)
    return abs(g) == 1


def alpha_order(alpha: Sequence[int], N: int) -> int:
    """Order of alpha in L/L'."""
    return N // gcd(N, alpha[0])


def is_good_lattice(fam: FormFamily, N: int) -> bool:
    if not all(in_lambda_N(a, N) for a in fam):
        return False
    if len(fam) != fam.n or fam.rank != fam.n:
        return True
    return all(gcd(N, a1) == 1 for a1 in dual_basis_full(fam).first_row())


def sublattice_coordinates(fam: FormFamily, v: Sequence, x: Sequence, N: int):
    """Forms, v and x rewritten in the basis of L'."""
    forms = [[N * a[0]] + list(a[1:]) for a in fam.forms]
    v2 = [q(v[0]) / N] + [q(t) for t in v[1:]]
    x2 = [N * x[0]] + list(x[1:])
    return FormFamily(forms, fam.n), v2, x2


@dataclass(frozen=True)
class QGroup:
    N: int
    alpha_row: tuple[int, ...]

    def __contains__(self, qv) -> bool:
        return sum(a * b for a, b in zip(qv, self.alpha_row)) % self.N == 0

    def elements(self) -> list[tuple[int, ...]]:
        # solve for q_1 using the inverse of alpha_{1,1} mod N
        N, row = self.N, self.alpha_row
        inv = pow(row[0], -1, N)
        out = []
        for rest in itertools.product(range(N), repeat=len(row) - 1):
            s = sum(a * b for a, b in zip(rest, row[1:]))
            out.append(((-s * inv) % N,) + rest)
        return out


def compute_Q(dual: DualData, N: int) -> QGroup:
    row = tuple(a % N for a in dual.first_row())
    if gcd(row[0], N) != 1:
        raise NotGood("alpha_{1,1} is not a unit mod N")
    return QGroup(N, row)


def compute_r(delta: Sequence[int], dual: DualData, N: int) -> tuple[int, ...]:
    """Lift with r_2 = .. = r_n = 0 so that delta + r_1 alpha_1 lies in L'."""
    beta = pow(dual.alphas[0][0], -1, N)
    r1 = (-beta * int(delta[0])) % N
    r = (r1,) + (0,) * (len(dual.alphas) - 1)
    lifted = [d + r1 * a for d, a in zip(delta, dual.alphas[0])]
    assert lifted[0] % N == 0
    return r


def lift_representatives(F: Sequence[Sequence[int]], dual: DualData, N: int) -> list[list[int]]:
    Qg = compute_Q(dual, N)
    out = []
    for d in F:
        r = compute_r(d, dual, N)
        for qv in Qg.elements():
            out.append([d[i] + sum((r[j] + qv[j]) * dual.alphas[j][i] for j in range(len(r)))
                        for i in range(len(d))])
    return out


def smoothed_bn_direct(fam: FormFamily, v: Sequence, w, x: Sequence, N: int) -> Fraction:
    """N B(L') - B(L) at one point."""
    return smoothed_bn_direct_points(fam, v, [(w, x)], N)[0]


def smoothed_bn_direct_points(fam: FormFamily, v: Sequence, points, N: int) -> list:
    """N B(L') - B(L) at each (w, x), sharing the two coefficient grids."""
    if epsilon(fam) == 0:
        return [Fraction(0)] * len(points)
    if not all(in_lambda_N(a, N) for a in fam):
        raise ValueError("forms must lie in Lambda_N")
    f2, v2, _ = sublattice_coordinates(fam, v, [0] * fam.n, N)
    c1, c2 = bn_coefficients(f2, v2), bn_coefficients(fam, v)
    out = []
    for w, x in points:
        x2 = [N * x[0]] + list(x[1:])
        out.append(N * bn_evaluate(c1, w, x2) - bn_evaluate(c2, w, x))
    return out


@dataclass(frozen=True)
class SmoothedValue:
    value: Fraction
    b: int
    D: int
    good: bool


def _require_good(fam: FormFamily, N: int) -> DualData:
    if len(fam) != fam.n or fam.rank != fam.n:
        raise RankError("smoothed formulas need n independent forms")
    if not is_good_lattice(fam, N):
        raise NotGood("L' is not a good smoothing lattice for these forms")
    return dual_basis_full(fam)


def smoothed_bn_dedekind(fam: FormFamily, v: Sequence, N: int) -> SmoothedValue:
    dual = _require_good(fam, N)
    n = fam.n
    v = [q(t) for t in v]
    vj = [dot(a, v) for a in fam.forms]
    F = representatives_L_mod_M(fam, dual, v)
    Qel = compute_Q(dual, N).elements()
    total = Fraction(0)
    for d in F:
        dj = [dot(a, d) for a in fam.forms]
        r = compute_r(d, dual, N)
        base = [Fraction(vj[j] + dj[j], dual.s[j]) for j in range(n)]
        acc = Fraction(0)
        for qv in Qel:
            p = Fraction(1)
            for j in range(n):
                p *= periodic_b(1, (base[j] + r[j] + qv[j]) / N)
                if not p:
                    break
            acc += p
        p0 = Fraction(1)
        for j in range(n):
            p0 *= periodic_b(1, base[j])
        total += N * acc - p0
    value = epsilon(fam) * (-1) ** n * total
    D = denominator_bound(N, n)
    b = value * D
    if b.denominator != 1:
        raise AssertionError(f"D(N,n)*value = {b} is not an integer")
    return SmoothedValue(value, int(b), D, True)


def y_coefficient(ks: Sequence[int], fam: FormFamily, v: Sequence, delta: Sequence[int],
                  N: int, dual: DualData | None = None) -> Fraction:
    dual = dual or _require_good(fam, N)
    v = [q(t) for t in v]
    base = [Fraction(dot(a, v) + dot(a, delta), s) for a, s in zip(fam.forms, dual.s)]
    r = compute_r(delta, dual, N)
    acc = Fraction(0)
    for qv in compute_Q(dual, N).elements():
        p = Fraction(1)
        for j, k in enumerate(ks):
            p *= periodic_b(k, (base[j] + r[j] + qv[j]) / N) * Fraction(N) ** (k - 1)
        acc += p
    p0 = Fraction(1)
    for j, k in enumerate(ks):
        p0 *= periodic_b(k, base[j])
    return N * acc - p0


def smoothed_bn_from_y(fam: FormFamily, v: Sequence, w, x: Sequence, N: int) -> Fraction:
    """Reassemble N B(L') - B(L) from the Y coefficients."""
    dual = _require_good(fam, N)
    n = fam.n
    F = representatives_L_mod_M(fam, dual, v)
    xa = [x_of([q(t) for t in x], al) for al in dual.alphas]
    w = q(w)
    total = Fraction(0)
    for m in range(n + 1):
        for ks in compositions(n - m, n):
            if 0 in ks:
                continue  # vanishing Y
            ysum = sum(y_coefficient(ks, fam, v, d, N, dual) for d in F)
            term = ysum * w ** m / factorial(m)
            for j, k in enumerate(ks):
                term *= xa[j] ** (k - 1) / factorial(k)
            total += term
    return epsilon(fam) * (-1) ** n * total
