"""Bernoulli polynomials and the Bernoulli rational function of a form family.

For n independent forms with dual basis alpha_j, s_j = a_j(alpha_j) and
representatives F of L/M (M spanned by the alpha_j, v + F inside the half-open
parallelepiped), the function is

    B(v)(w, x) = eps * (-1)^n * sum_m w^m/m! sum_{k_1+..+k_n = n-m}
                     sum_{delta in F} prod_j b_{k_j}((v_j+delta_j)/s_j)
                                        x(alpha_j)^{k_j-1} / k_j!

the t^0 coefficient of eps * sum_delta e^{wt} e^{x(delta)t} / prod_j (1 - e^{x(alpha_j)t}),
with eps = sign det(a_1..a_n).  The factor (-1)^n comes from
1/(1 - e^u) = -1/(e^u - 1); it is what makes exp(2 i pi B) match the
alternating product of G functions.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from math import comb, factorial, lcm

from .exact_core import dot, floor_q, q
from .forms_geometry import (
    DualData,
    FormFamily,
    dual_basis_full,
    epsilon,
    representatives_L_mod_M,
)


@cache
def bernoulli_numbers(k: int) -> tuple[Fraction, ...]:
    """B_0..B_k with B_1 = -1/2."""
    b = [Fraction(1)]
    for m in range(1, k + 1):
        b.append(-sum(comb(m + 1, i) * b[i] for i in range(m)) / (m + 1))
    return tuple(b)


@cache
def bernoulli_polynomial(k: int) -> tuple[Fraction, ...]:
    """Coefficients of B_k(X) in ascending powers of X."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    bn = bernoulli_numbers(k)
    return tuple(comb(k, i) * bn[k - i] for i in range(k + 1))


def poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def frac_part(x) -> Fraction:
    x = q(x)
    return x - floor_q(x)


def periodic_b(k: int, x) -> Fraction:
    return poly_eval(bernoulli_polynomial(k), frac_part(x))


def compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative ints summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for c in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for x in c:
            out.append(x - prev - 1)
            prev = x
        out.append(total + parts - 2 - prev)
        yield tuple(out)


@dataclass
class BnCoefficients:
    epsilon: int
    n: int
    grid: dict = field(default_factory=dict)
    dual: DualData | None = None

    def is_zero(self) -> bool:
        return self.epsilon == 0

    @property
    def prefactor(self) -> int:
        return self.epsilon * (-1) ** self.n


def bn_coefficients(fam: FormFamily, v: Sequence) -> BnCoefficients:
    n = fam.n
    eps = epsilon(fam)
    if eps == 0:
        return BnCoefficients(0, n)
    dual = dual_basis_full(fam)
    v = [q(x) for x in v]
    F = representatives_L_mod_M(fam, dual, v)
    vj = [dot(a, v) for a in fam.forms]
    # b_k(theta)/k! only depends on theta mod 1; memoise per form and bring
    # each (j, k) column to a common denominator so the big sum runs on ints
    memo = [{} for _ in range(n)]
    rows = []
    for d in F:
        row = []
        for j, (a, s) in enumerate(zip(fam.forms, dual.s)):
            t = frac_part(Fraction(vj[j] + dot(a, d), s))
            if t not in memo[j]:
                memo[j][t] = [periodic_b(k, t) / factorial(k) for k in range(n + 1)]
            row.append(t)
        rows.append(row)
    dens = [[1] * (n + 1) for _ in range(n)]
    for j in range(n):
        for vals in memo[j].values():
            for k, c in enumerate(vals):
                dens[j][k] = lcm(dens[j][k], c.denominator)
    nums = [{t: [int(c * dens[j][k]) for k, c in enumerate(vals)]
             for t, vals in memo[j].items()} for j in range(n)]
    int_rows = [[nums[j][t] for j, t in enumerate(row)] for row in rows]
    grid = {}
    for m in range(n + 1):
        for ks in compositions(n - m, n):
            tot = 0
            for ir in int_rows:
                p = 1
                for j, k in enumerate(ks):
                    p *= ir[j][k]
                tot += p
            den = 1
            for j, k in enumerate(ks):
                den *= dens[j][k]
            grid[(m, ks)] = Fraction(tot, den)
    return BnCoefficients(eps, n, grid, dual)


def x_of(x: Sequence, vec: Sequence):
    return sum(xi * vi for xi, vi in zip(x, vec))


def bn_evaluate(coeffs: BnCoefficients, w, x: Sequence):
    """Value at (w, x); exact for rational inputs, complex otherwise."""
    if coeffs.is_zero():
        return Fraction(0)
    w = Fraction(w) if isinstance(w, int) else w
    x = [Fraction(t) if isinstance(t, int) else t for t in x]
    xa = [x_of(x, al) for al in coeffs.dual.alphas]
    if any(c == 0 for c in xa):
        raise ZeroDivisionError("x(alpha_j) = 0: pole of the Bernoulli function")
    n = coeffs.n
    wp = [w ** m / factorial(m) for m in range(n + 1)]
    pw = [{k: (c ** (k - 1) if k >= 1 else 1 / c) for k in range(n + 1)} for c in xa]
    total = 0
    for (m, ks), val in coeffs.grid.items():
        if not val:
            continue
        term = val * wp[m]
        for j, k in enumerate(ks):
            term = term * pw[j][k]
        total = total + term
    return coeffs.prefactor * total


def bn_value(fam: FormFamily, v: Sequence, w, x: Sequence):
    return bn_evaluate(bn_coefficients(fam, v), w, x)


def distribution_check(m: int, N: int, x) -> bool:
    """N^{m-1} sum_{k mod N} b_m((x+k)/N) = b_m(x)."""
    x = q(x)
    lhs = N ** (m - 1) * sum((periodic_b(m, (x + k) / N) for k in range(N)), Fraction(0))
    return lhs == periodic_b(m, x)


def cocycle_bad_position(forms: Sequence[Sequence[int]], v: Sequence) -> bool:
    """0 is a barycentre of the n+1 forms and every a_j(v) is an integer.

    On generic families the cocycle sum vanishes except in this case, where
    it is a nonzero integer.
    """
    from .forms_geometry import standard_relation
    fam = FormFamily(forms, len(forms[0]))
    if fam.rank != len(forms) - 1:
        return False
    v = [q(t) for t in v]
    return (standard_relation(fam).k_minus == 0
            and all(dot(a, v).denominator == 1 for a in fam.forms))


def cocycle_sum(forms: Sequence[Sequence[int]], v: Sequence, w, x: Sequence):
    """sum_{j=0}^{n} (-1)^j B(a_0, .., omit a_j, .., a_n)(v)(w, x) for n+1 forms.

    Zero when every n-subfamily is independent and the family is not in bad
    position at v (see cocycle_bad_position); other strata are not covered.
    """
    n = len(forms) - 1
    total = 0
    for j in range(n + 1):
        sub = FormFamily([list(a) for i, a in enumerate(forms) if i != j], n)
        total = total + (-1) ** j * bn_value(sub, v, w, x)
    return total


# ---------------------------------------------------------------------------
# Independent route: truncated power series in t


def _series_exp(c, order):
    return [c ** i / factorial(i) for i in range(order + 1)]


def _series_mul(a, b, order):
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[:order + 1]):
        if x:
            for j, y in enumerate(b[:order + 1 - i]):
                out[i + j] += x * y
    return out


def _series_inv(a, order):
    inv = [Fraction(0)] * (order + 1)
    inv[0] = 1 / a[0]
    for i in range(1, order + 1):
        inv[i] = -sum(a[j] * inv[i - j] for j in range(1, min(i, len(a) - 1) + 1)) / a[0]
    return inv


def bn_series_oracle(fam: FormFamily, v: Sequence, w, x: Sequence, order: int | None = None) -> Fraction:
    """t^0 coefficient of eps * sum_delta e^{(w + x(delta))t} / prod_j (1 - e^{x(alpha_j)t})."""
    n = fam.n
    order = n + 4 if order is None else order
    if order < n + 2:
        raise ValueError("order must be at least n+2")
    eps = epsilon(fam)
    if eps == 0:
        return Fraction(0)
    dual = dual_basis_full(fam)
    v = [q(x_) for x_ in v]
    w = q(w)
    x = [q(t) for t in x]
    cs = [x_of(x, al) for al in dual.alphas]
    if any(c == 0 for c in cs):
        raise ZeroDivisionError("x(alpha_j) = 0")
    # 1 - e^{ct} = t * E_c(t); invert E_c, the t^{-n} shift is applied at the end
    den = [Fraction(1)]
    for c in cs:
        e = [-c ** (i + 1) / factorial(i + 1) for i in range(order + 1)]
        den = _series_mul(den, _series_inv(e, order), order)
    F = representatives_L_mod_M(fam, dual, v)
    num = [Fraction(0)] * (order + 1)
    for d in F:
        pt = [a + b for a, b in zip(v, d)]
        for i, t in enumerate(_series_exp(w + x_of(x, pt), order)):
            num[i] += t
    prod = _series_mul(num, den, order)
    return eps * prod[n]
