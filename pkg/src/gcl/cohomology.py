"""psi_{n,a} and phi_{n,a} as functions of group tuples, their coboundaries,
the positivity condition on orbits and multiplication-by-unit matrices.

Group elements act on forms by g.a = a g^-1 and on functions of (v, w, x) by
(g.f)(v, w, x) = f(g^-1 v, w, x g), so that the coboundaries below are the
usual inhomogeneous ones.  Through equivariance they collapse to alternating
sums over the resolved family a, g_1.a, (g_1 g_2).a, ...
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .bernoulli import bn_value, cocycle_bad_position
from .exact_core import REL_GT, IneqSystem, fm_solve, int_det, inverse, mat_mul, q, rank
from .forms_geometry import FormFamily
from .gamma_numeric import geometric_G_cone, smoothed_G
from .smoothing import in_lambda_N, is_good_lattice, smoothed_bn_direct


@dataclass(frozen=True)
class GroupElem:
    g: tuple[tuple[int, ...], ...]

    def __init__(self, g: Sequence[Sequence[int]]):
        g = tuple(tuple(int(t) for t in row) for row in g)
        if any(len(row) != len(g) for row in g):
            raise ValueError("matrix must be square")
        if abs(int_det(g)) != 1:
            raise ValueError("matrix is not unimodular")
        object.__setattr__(self, "g", g)

    @property
    def n(self) -> int:
        return len(self.g)

    @property
    def det(self) -> int:
        return int_det(self.g)

    def __matmul__(self, o: GroupElem) -> GroupElem:
        return GroupElem(mat_mul(self.g, o.g))

    def inv(self) -> GroupElem:
        return GroupElem([[int(t) for t in row] for row in inverse(self.g)])

    def __pow__(self, k: int) -> GroupElem:
        base = self if k >= 0 else self.inv()
        out = identity_elem(self.n)
        for _ in range(abs(k)):
            out = out @ base
        return out

    def in_congruence(self, N: int) -> bool:
        """Stabilises L' = [N e_1, e_2, ..]: first row = (*, 0, .., 0) mod N."""
        return all(t % N == 0 for t in self.g[0][1:])

    def act_form(self, a: Sequence[int]) -> list[int]:
        g_inv = inverse(self.g)
        return [int(sum(a[i] * g_inv[i][k] for i in range(self.n))) for k in range(self.n)]

    def act_vector(self, v: Sequence) -> list:
        return [sum(self.g[i][k] * v[k] for k in range(self.n)) for i in range(self.n)]

    def pull_x(self, x: Sequence) -> list:
        """x -> x g (values x(g e_k))."""
        return [sum(x[i] * self.g[i][k] for i in range(self.n)) for k in range(self.n)]


def identity_elem(n: int) -> GroupElem:
    return GroupElem([[int(i == j) for j in range(n)] for i in range(n)])


def resolve(a: Sequence[int], gs: Sequence[GroupElem]) -> FormFamily:
    """a, g_1.a, (g_1 g_2).a, ..."""
    n = len(a)
    forms = [list(a)]
    acc = identity_elem(n)
    for g in gs:
        acc = acc @ g
        forms.append(acc.act_form(a))
    return FormFamily(forms, n)


def _check_level(a, gs, N):
    if N is None:
        return
    if not in_lambda_N(a, N):
        raise ValueError(f"{list(a)} is not in Lambda_{N}")
    for g in gs:
        if not g.in_congruence(N):
            raise ValueError(f"{g.g} does not stabilise L' for N = {N}")


def phi_eval(a, gs: Sequence[GroupElem], v, w, x, N: int | None = None):
    """B (or its smoothing N B(L') - B(L)) of the resolved n-family."""
    _check_level(a, gs, N)
    fam = resolve(a, gs)
    if len(fam) != fam.n:
        raise ValueError("phi needs n-1 group elements")
    if N is None:
        return bn_value(fam, v, w, x)
    return smoothed_bn_direct(fam, v, w, x, N)


def psi_eval(a, gs: Sequence[GroupElem], v, w, x, N: int | None = None) -> complex:
    """G (or G(L')^N / G(L)) of the resolved (n-1)-family."""
    _check_level(a, gs, N)
    fam = resolve(a, gs)
    if len(fam) != fam.n - 1:
        raise ValueError("psi needs n-2 group elements")
    if N is None:
        return geometric_G_cone(fam, v, w, x)
    return smoothed_G(fam, v, w, x, N)


def _faces(gs: Sequence[GroupElem]):
    """(sign, transport, tuple) for each face of the inhomogeneous coboundary."""
    k = len(gs)
    yield 1, gs[0], list(gs[1:])
    for i in range(1, k):
        yield (-1) ** i, None, list(gs[:i - 1]) + [gs[i - 1] @ gs[i]] + list(gs[i + 1:])
    yield (-1) ** k, None, list(gs[:-1])


@dataclass
class CoboundaryReport:
    lhs: complex
    rhs: complex
    residual: float
    well_placed: bool
    ok: bool


def coboundary_psi(a, gs: Sequence[GroupElem], v, w, x, N: int | None = None,
                   tol: float = 1e-8) -> CoboundaryReport:
    """del^x psi(g_1..g_{n-1}) against exp(2 i pi phi(g_1..g_{n-1}))."""
    from .forms_geometry import is_well_placed
    v = [q(t) for t in v]
    lhs = 1 + 0j
    for sgn, g, tup in _faces(gs):
        if g is not None:
            val = psi_eval(a, tup, g.inv().act_vector(v), w, g.pull_x(x), N)
        else:
            val = psi_eval(a, tup, v, w, x, N)
        lhs *= val if sgn > 0 else 1 / val
    rhs = cmath.exp(2j * math.pi * complex(phi_eval(a, gs, v, w, x, N)))
    res = abs(lhs - rhs) / max(1.0, abs(rhs))
    return CoboundaryReport(lhs, rhs, res, is_well_placed(resolve(a, gs)), res < tol)


@dataclass
class CocycleReport:
    value: Fraction | None
    generic: bool
    status: str

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def is_generic(fam: FormFamily) -> bool:
    return all(rank(fam.forms[:j] + fam.forms[j + 1:]) == fam.n for j in range(len(fam)))


def check_cocycle_phi(a, gs: Sequence[GroupElem], v, w, x, N: int | None = None) -> CocycleReport:
    """del phi(g_1..g_n), exact; asserted only on generic families that are not
    in bad position at v."""
    v = [q(t) for t in v]
    fam = resolve(a, gs)
    if len(fam) != fam.n + 1:
        raise ValueError("the cocycle check needs n group elements")
    if not is_generic(fam) or cocycle_bad_position(fam.forms, v):
        return CocycleReport(None, False, "out of tested scope")
    total = 0
    for sgn, g, tup in _faces(gs):
        if g is not None:
            val = phi_eval(a, tup, g.inv().act_vector(v), w, g.pull_x(x), N)
        else:
            val = phi_eval(a, tup, v, w, x, N)
        total = total + sgn * val
    return CocycleReport(total, True, "pass" if total == 0 else "fail")


def condition_26_witness(a: Sequence[int], elements: Sequence[GroupElem]) -> list | None:
    """A vector y with (g_j.a)(y) > 0 for every j, or None.

    By Gordan's alternative such a y exists iff no nonzero mu >= 0 has
    sum mu_j (g_j.a) = 0, so the search runs in n variables, not m.
    """
    n = len(a)
    sys = IneqSystem(n)
    for g in elements:
        sys.add(g.act_form(a), REL_GT)
    return fm_solve(sys)


def condition_26_check(a: Sequence[int], elements: Sequence[GroupElem]) -> bool:
    """No nonzero nonnegative integer combination of the g_j.a vanishes."""
    return condition_26_witness(a, elements) is not None


def companion_unit_matrix(coeffs: Sequence[int]) -> GroupElem:
    """Multiplication by a root of x^n + c_{n-1} x^{n-1} + .. + c_0 on 1, t, .., t^{n-1}.

    `coeffs` lists c_0, .., c_{n-1} (the monic leading 1 omitted); c_0 must be +-1.
    """
    n = len(coeffs)
    if n < 1 or abs(coeffs[0]) != 1:
        raise ValueError("constant term must be +-1 for a unit")
    m = [[0] * n for _ in range(n)]
    for k in range(n - 1):
        m[k + 1][k] = 1
    for i in range(n):
        m[i][n - 1] = -coeffs[i]
    return GroupElem(m)


def char_poly(g: GroupElem) -> list[int]:
    """c_0, .., c_{n-1} of det(X - g), by Faddeev-LeVerrier."""
    n = g.n
    A = [list(map(Fraction, row)) for row in g.g]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    c = [Fraction(1)]
    for k in range(1, n + 1):
        Mk = mat_mul(A, Mk)
        for i in range(n):
            Mk[i][i] += c[-1]
        AM = mat_mul(A, Mk)
        c.append(-sum(AM[i][i] for i in range(n)) / k)
    # c[k] is the coefficient of X^{n-k}
    return [int(c[n - i]) for i in range(n)]


def congruence_power(g: GroupElem, N: int, limit: int = 10_000) -> int:
    """Smallest k >= 1 with g^k in the stabiliser of L'."""
    acc = g
    for k in range(1, limit + 1):
        if acc.in_congruence(N):
            return k
        acc = acc @ g
    raise ValueError("no power of g stabilises L' within the limit")


@dataclass
class GoodnessReport:
    tested: int = 0
    good: int = 0
    bad_tuples: list = field(default_factory=list)


def goodness_report(a, tuples: Sequence[Sequence[GroupElem]], N: int) -> GoodnessReport:
    """How often L' is good for the resolved families; reported, never assumed."""
    rep = GoodnessReport()
    for gs in tuples:
        fam = resolve(a, gs)
        rep.tested += 1
        if fam.rank == fam.n and is_good_lattice(fam, N):
            rep.good += 1
        else:
            rep.bad_tuples.append([g.g for g in gs])
    return rep
