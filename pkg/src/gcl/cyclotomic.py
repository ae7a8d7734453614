"""Exact arithmetic in Q(zeta_d) and the cyclotomic trace formula for the
smoothed Bernoulli value."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import gcd

from .exact_core import dot, floor_q, q
from .forms_geometry import FormFamily, epsilon, representatives_L_mod_M
from .smoothing import _require_good, compute_r, periodic_b, prime_factors


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _polydivmod(a: list, b: list) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        quo[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        _trim(a)
    return quo, a


def _polymul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _polysub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    out = n
    for p in prime_factors(n):
        out = out // p * (p - 1)
    return out


@cache
def cyclotomic_poly(d: int) -> tuple[int, ...]:
    """Phi_d, ascending coefficients, by dividing x^d - 1 by the Phi_e, e | d, e < d."""
    p = [Fraction(-1)] + [Fraction(0)] * (d - 1) + [Fraction(1)]
    for e in divisors(d)[:-1]:
        p, rem = _polydivmod(p, list(cyclotomic_poly(e)))
        assert not rem
    return tuple(int(c) for c in _trim(p))


@dataclass(frozen=True)
class CycloElem:
    d: int
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def make(d: int, coeffs: Sequence) -> CycloElem:
        _, rem = _polydivmod(list(coeffs), list(cyclotomic_poly(d)))
        rem = rem + [Fraction(0)] * (euler_phi(d) - len(rem))
        return CycloElem(d, tuple(rem))

    @staticmethod
    def zeta_power(d: int, k: int) -> CycloElem:
        k %= d
        return CycloElem.make(d, [0] * k + [1])

    @staticmethod
    def const(d: int, c) -> CycloElem:
        return CycloElem.make(d, [q(c)])

    def __add__(self, o):
        o = self._coerce(o)
        return CycloElem(self.d, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.d, tuple(-a for a in self.coeffs))

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        return CycloElem.make(self.d, _polymul(list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __eq__(self, o):
        if not isinstance(o, CycloElem):
            o = self._coerce(o)
        return self.d == o.d and self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.d, self.coeffs))

    def _coerce(self, o) -> CycloElem:
        if isinstance(o, CycloElem):
            if o.d != self.d:
                raise ValueError("mixed cyclotomic fields")
            return o
        return CycloElem.const(self.d, o)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> CycloElem:
        """Extended Euclid against Phi_d."""
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        r0, r1 = [Fraction(c) for c in cyclotomic_poly(self.d)], _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            quo, rem = _polydivmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _polysub(s0, _polymul(quo, s1))
            if not r1:
                raise ZeroDivisionError("not invertible")
        # r1 is a nonzero constant
        c = r1[0]
        return CycloElem.make(self.d, [x / c for x in s1])

    def galois(self, k: int) -> CycloElem:
        """zeta -> zeta^k."""
        out = [Fraction(0)] * self.d
        for i, c in enumerate(self.coeffs):
            out[(i * k) % self.d] += c
        return CycloElem.make(self.d, out)

    def rational(self) -> Fraction:
        if any(self.coeffs[1:]):
            raise ValueError("element is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / self.d), math.sin(2 * math.pi / self.d))
        return sum(float(c) * z ** i for i, c in enumerate(self.coeffs))


def units_mod(d: int) -> list[int]:
    return [k for k in range(1, d + 1) if gcd(k, d) == 1]


def trace_to_Q(e: CycloElem) -> Fraction:
    """Sum of the Galois conjugates."""
    acc = CycloElem.const(e.d, 0)
    for k in units_mod(e.d):
        acc = acc + e.galois(k)
    return acc.rational()


def norm_to_Q(e: CycloElem) -> Fraction:
    acc = CycloElem.const(e.d, 1)
    for k in units_mod(e.d):
        acc = acc * e.galois(k)
    return acc.rational()


@cache
def _power_sums(d: int, upto: int) -> tuple[Fraction, ...]:
    # Newton's identities for the roots of Phi_d
    c = cyclotomic_poly(d)
    deg = len(c) - 1
    # monic x^deg + e1' x^{deg-1} + ...; coefficient of x^{deg-i} is c[deg-i]
    a = [Fraction(c[deg - i]) for i in range(deg + 1)]
    p = [Fraction(deg)]
    for k in range(1, upto + 1):
        s = -k * a[k] if k <= deg else Fraction(0)
        for i in range(1, min(k, deg + 1)):
            s -= a[i] * p[k - i]
        p.append(s)
    return tuple(p)


def trace_power_sums(e: CycloElem) -> Fraction:
    """Trace from power sums of the roots of Phi_d (independent of the Galois route)."""
    ps = _power_sums(e.d, len(e.coeffs))
    return sum(c * ps[i] for i, c in enumerate(e.coeffs))


# ---------------------------------------------------------------------------


def cd_lemma_sides(N: int, x, y: int) -> tuple[CycloElem, CycloElem]:
    """sum_q zeta^{yq} b_1((x+q)/N) and zeta^{-y floor x} / (zeta^y - 1) in Q(zeta_N)."""
    if y % N == 0:
        raise ValueError("y must be nonzero mod N")
    x = q(x)
    lhs = CycloElem.const(N, 0)
    for qq in range(N):
        lhs = lhs + CycloElem.zeta_power(N, y * qq) * periodic_b(1, (x + qq) / N)
    rhs = CycloElem.zeta_power(N, -y * floor_q(x)) / (CycloElem.zeta_power(N, y) - 1)
    return lhs, rhs


def cd_lemma_check(N: int, x, y: int) -> bool:
    lhs, rhs = cd_lemma_sides(N, x, y)
    return lhs == rhs


def chi(qv: Sequence[int], alpha_row: Sequence[int], N: int) -> Fraction:
    """sum_{k mod N} zeta_N^{(sum_j q_j alpha_{1,j}) k}."""
    e = sum(a * b for a, b in zip(qv, alpha_row))
    acc = CycloElem.const(N, 0)
    for k in range(N):
        acc = acc + CycloElem.zeta_power(N, e * k)
    return acc.rational()


@dataclass(frozen=True)
class TraceResult:
    value: Fraction
    per_divisor: dict


def smoothed_bn_trace(fam: FormFamily, v: Sequence, N: int, reps=None,
                      include_lift: bool = True) -> TraceResult:
    """Smoothed Bernoulli value as a sum of traces over Q(zeta_d), d | N, d > 1.

    The floor in each exponent is taken of (v_j + delta_j)/s_j + r_j(delta), the
    argument fed to the Fourier lemma; dropping the lift r_j makes the sum
    depend on the chosen representatives (``include_lift=False`` reproduces
    that variant for comparison).
    """
    dual = _require_good(fam, N)
    n = fam.n
    v = [q(t) for t in v]
    F = reps if reps is not None else representatives_L_mod_M(fam, dual, v)
    row = dual.first_row()
    per = {}
    for d in divisors(N)[1:]:
        dens = [(CycloElem.zeta_power(d, a) - 1).inverse() for a in row]
        tot = Fraction(0)
        for delta in F:
            r = compute_r(delta, dual, N) if include_lift else (0,) * n
            u = CycloElem.const(d, 1)
            for j in range(n):
                fl = floor_q(Fraction(dot(fam.forms[j], v) + dot(fam.forms[j], delta), dual.s[j])) + r[j]
                u = u * CycloElem.zeta_power(d, -row[j] * fl) * dens[j]
            tot += trace_to_Q(u)
        per[d] = epsilon(fam) * (-1) ** n * tot
    return TraceResult(sum(per.values(), Fraction(0)), per)


# ---------------------------------------------------------------------------
# Denominators


def different_exponent(p: int, nu: int) -> int:
    return p ** (nu - 1) * (p * nu - nu - 1)


def padic_val(x: Fraction, p: int) -> int:
    x = q(x)
    if x == 0:
        raise ValueError("valuation of 0")
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def valuation_exponent(p: int, nu: int, n: int) -> int:
    """k = ceil(n/phi(p^nu) - 1 + 1/(p-1))."""
    phi = euler_phi(p ** nu)
    val = Fraction(n, phi) - 1 + Fraction(1, p - 1)
    return -((-val.numerator) // val.denominator)


def floor_ceiling_identity(p: int, n: int) -> bool:
    lhs = Fraction(n + 1, p - 1) - 1
    return -((-lhs.numerator) // lhs.denominator) == n // (p - 1)


def unit_u(d: int, shifts: Sequence[int], exps: Sequence[int]) -> CycloElem:
    """prod_j zeta^{shift_j} / (zeta^{exp_j} - 1)."""
    u = CycloElem.const(d, 1)
    for a, c in zip(shifts, exps):
        u = u * CycloElem.zeta_power(d, a) / (CycloElem.zeta_power(d, c) - 1)
    return u


def denominator_valuation_check(d: int, n: int, rng, samples: int = 20) -> bool:
    """p^k Tr(u_d) is integral for prime powers d; Tr(u_d) integral otherwise."""
    ps = prime_factors(d)
    units = units_mod(d)
    for _ in range(samples):
        u = unit_u(d, [rng.randrange(d) for _ in range(n)], [rng.choice(units) for _ in range(n)])
        t = trace_to_Q(u)
        if len(ps) == 1:
            p = ps[0]
            nu = padic_val(Fraction(d), p)
            if (t * p ** valuation_exponent(p, nu, n)).denominator != 1:
                return False
        elif t.denominator != 1:
            return False
    return True
