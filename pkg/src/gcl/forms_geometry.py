"""Derived geometry of a family of integral linear forms on L = Z^n.

Forms are row covectors, ``a(e_k) = a[k]``.  The group acts by
``g.a = a g^{-1}`` on forms and ``g.alpha = g alpha`` on vectors.
"""

from __future__ import annotations

import itertools
import json
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .exact_core import (
    adjugate,
    ceil_q,
    column_hnf,
    det,
    dot,
    floor_q,
    fmt_q,
    hnf_solve,
    int_det,
    is_primitive,
    nullspace,
    primitive_part,
    q,
    rank,
    sign,
    xgcd,
)


class RankError(ValueError):
    pass


@dataclass(frozen=True)
class FormFamily:
    n: int
    forms: tuple[tuple[int, ...], ...]

    def __init__(self, forms: Sequence[Sequence[int]], n: int | None = None):
        forms = tuple(tuple(int(x) for x in a) for a in forms)
        if n is None:
            n = len(forms[0])
        if n < 2:
            raise ValueError("ambient dimension must be at least 2")
        for a in forms:
            if len(a) != n:
                raise ValueError("form length differs from the ambient dimension")
            if not is_primitive(a):
                raise ValueError(f"form {list(a)} is not primitive")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "forms", forms)

    def __len__(self):
        return len(self.forms)

    def __getitem__(self, j):
        return self.forms[j]

    def __iter__(self):
        return iter(self.forms)

    @property
    def rank(self) -> int:
        return rank(self.forms)

    def omit(self, j: int) -> FormFamily:
        return FormFamily(self.forms[:j] + self.forms[j + 1:], self.n)

    def permute(self, perm: Sequence[int]) -> FormFamily:
        return FormFamily([self.forms[p] for p in perm], self.n)

    def act(self, g_inv: Sequence[Sequence[int]]) -> FormFamily:
        """g.a = a g^{-1}, given g^{-1}."""
        return FormFamily([[dot(a, [row[k] for row in g_inv]) for k in range(self.n)]
                           for a in self.forms], self.n)

    def to_json(self, v: Sequence | None = None) -> dict:
        d = {"n": self.n, "forms": [list(a) for a in self.forms]}
        if v is not None:
            d["v"] = [fmt_q(x) for x in v]
        return d

    @staticmethod
    def from_json(d) -> tuple[FormFamily, list[Fraction]]:
        if isinstance(d, str):
            d = json.loads(d)
        fam = FormFamily(d["forms"], d.get("n"))
        v = [q(x) for x in d.get("v", [0] * fam.n)]
        return fam, v


def evaluate(a: Sequence, v: Sequence):
    return dot(a, v)


def apply(g: Sequence[Sequence], v: Sequence) -> list:
    return [dot(row, v) for row in g]


# ---------------------------------------------------------------------------
# Dual families


@dataclass(frozen=True)
class DualData:
    alphas: tuple[tuple[int, ...], ...]
    s: tuple[int, ...]

    def alpha_matrix(self) -> list[list[int]]:
        """Matrix whose columns are the alpha_j."""
        n = len(self.alphas[0])
        return [[al[i] for al in self.alphas] for i in range(n)]

    def first_row(self) -> tuple[int, ...]:
        return tuple(al[0] for al in self.alphas)


def dual_basis_full(fam: FormFamily) -> DualData:
    n = fam.n
    if len(fam) != n or fam.rank != n:
        raise RankError("full-rank dual basis needs n independent forms")
    adj = adjugate(fam.forms)
    alphas, s = [], []
    for j in range(n):
        col = [int(adj[i][j]) for i in range(n)]
        al, _ = primitive_part(col)
        sj = dot(fam.forms[j], al)
        if sj < 0:
            al, sj = [-x for x in al], -sj
        alphas.append(tuple(al))
        s.append(sj)
    return DualData(tuple(alphas), tuple(s))


def epsilon(fam: FormFamily) -> int:
    if len(fam) != fam.n:
        return 0
    return sign(det(fam.forms))


@dataclass(frozen=True)
class GammaData:
    gamma: tuple[int, ...]
    s: int


def gamma_vector(fam: FormFamily) -> GammaData:
    n = fam.n
    if len(fam) != n - 1 or fam.rank != n - 1:
        raise RankError("gamma needs n-1 independent forms")
    raw = []
    for k in range(n):
        fk = [int(i == k) for i in range(n)]
        raw.append(int_det(list(fam.forms) + [fk]))
    g, s = primitive_part(raw)
    return GammaData(tuple(g), s)


def _normalize_mod_gamma(v: list[int], gamma: Sequence[int]) -> list[int]:
    # representative with 0 <= v[p] < |gamma[p]| at the first nonzero slot of gamma
    p = next(i for i, x in enumerate(gamma) if x)
    t = v[p] // gamma[p] if gamma[p] > 0 else -(v[p] // -gamma[p])
    out = [x - t * y for x, y in zip(v, gamma)]
    assert 0 <= out[p] < abs(gamma[p])
    return out


def dual_family_deficient(fam: FormFamily, gamma: GammaData | None = None) -> DualData:
    """A positive dual family for n-1 independent forms (deterministic choice)."""
    n = fam.n
    if len(fam) != n - 1 or fam.rank != n - 1:
        raise RankError("deficient dual family needs n-1 independent forms")
    gam = (gamma or gamma_vector(fam)).gamma
    alphas, s = [], []
    for j in range(n - 1):
        others = [a for k, a in enumerate(fam.forms) if k != j]
        ker = hnf_solve(others, ncols=n).kernel
        assert len(ker) == 2
        k1, k2 = ker
        c1, c2 = dot(fam.forms[j], k1), dot(fam.forms[j], k2)
        g, x, y = xgcd(c1, c2)
        beta = [x * u + y * w for u, w in zip(k1, k2)]
        beta = _normalize_mod_gamma(beta, gam)
        alphas.append(tuple(beta))
        s.append(g)
    return DualData(tuple(alphas), tuple(s))


def check_dual(fam: FormFamily, dual: DualData) -> bool:
    for j, al in enumerate(dual.alphas):
        if not is_primitive(al):
            return False
        for k, a in enumerate(fam.forms):
            val = dot(a, al)
            if (k == j and (val != dual.s[j] or val <= 0)) or (k != j and val != 0):
                return False
    return True


# ---------------------------------------------------------------------------
# Standard relation and well-placedness


@dataclass(frozen=True)
class StdRelation:
    lambdas: tuple[Fraction, ...]
    l: int
    m_index: int | None
    k_plus: int
    k_minus: int


def standard_relation(fam: FormFamily) -> StdRelation:
    m = len(fam)
    if fam.rank != m - 1:
        raise RankError("standard relation needs rank m-1")
    cols = [[fam.forms[j][i] for j in range(m)] for i in range(fam.n)]
    ker = nullspace(cols, ncols=m)
    assert len(ker) == 1
    lam = ker[0]
    l = next(j for j, x in enumerate(lam) if x)
    lam = [x / abs(lam[l]) for x in lam]
    kp = sum(1 for x in lam if x > 0)
    km = sum(1 for x in lam if x < 0)
    if km > kp or (km == kp and lam[l] > 0):
        lam = [-x for x in lam]
        kp, km = km, kp
    m_index = next((j for j in range(l, m) if lam[j] > 0), None)
    return StdRelation(tuple(lam), l, m_index, kp, km)


def is_well_placed(fam: FormFamily) -> bool:
    if fam.rank != fam.n - 1:
        return True
    return standard_relation(fam).k_minus > 0


# ---------------------------------------------------------------------------
# Lattice enumeration in the frame of the form values


@dataclass(frozen=True)
class Frame:
    """A(U) = [H | 0] with H lower triangular; columns of U beyond r span ker A."""
    forms: tuple[tuple[int, ...], ...]
    H: tuple[tuple[int, ...], ...]
    U: tuple[tuple[int, ...], ...]
    r: int

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(row[i] for row in self.U)


def make_frame(forms: Sequence[Sequence[int]]) -> Frame:
    h, u, piv = column_hnf(forms)
    r = len(piv)
    if piv != list(range(r)) or r != len(forms):
        raise RankError("frame needs independent forms")
    return Frame(tuple(map(tuple, forms)), tuple(tuple(row[:r]) for row in h),
                 tuple(map(tuple, u)), r)


def box_points(frame: Frame, offset: Sequence[Fraction], bounds) -> Iterator[tuple[int, ...]]:
    """Integer c with y = offset + H c inside the given per-row bounds.

    bounds[i] = (lo, lo_strict, hi, hi_strict); None means unbounded (not
    allowed here: every row must be bounded on both sides).
    """
    r = frame.r
    H = frame.H

    def rec(i, prefix):
        if i == r:
            yield tuple(prefix)
            return
        base = q(offset[i]) + sum(H[i][k] * prefix[k] for k in range(i))
        lo, lo_s, hi, hi_s = bounds[i]
        d = H[i][i]
        cl = (lo - base) / d
        ch = (hi - base) / d
        c0 = floor_q(cl) + 1 if lo_s else ceil_q(cl)
        c1 = ceil_q(ch) - 1 if hi_s else floor_q(ch)
        for c in range(c0, c1 + 1):
            prefix.append(c)
            yield from rec(i + 1, prefix)
            prefix.pop()

    yield from rec(0, [])


def frame_vector(frame: Frame, c: Sequence[int]) -> list[int]:
    return [sum(row[i] * c[i] for i in range(frame.r)) for row in frame.U]


def enumerate_F(fam: FormFamily, dual: DualData, v: Sequence) -> list[list[Fraction]]:
    """Representatives delta of F(a, alpha, v)/Z gamma: delta in v+L, 0 <= a_j(delta) < s_j."""
    frame = make_frame(fam.forms)
    v = [q(x) for x in v]
    offset = [dot(a, v) for a in fam.forms]
    bounds = [(Fraction(0), False, Fraction(s), True) for s in dual.s]
    return [[x + y for x, y in zip(v, frame_vector(frame, c))]
            for c in box_points(frame, offset, bounds)]


def representatives_L_mod_M(fam: FormFamily, dual: DualData, v: Sequence) -> list[list[int]]:
    """F = {delta in L : v + delta in P}, P the half-open alpha-parallelepiped."""
    if len(fam) != fam.n:
        raise RankError("full rank needed")
    frame = make_frame(fam.forms)
    v = [q(x) for x in v]
    offset = [dot(a, v) for a in fam.forms]
    bounds = [(Fraction(0), False, Fraction(s), True) for s in dual.s]
    return [frame_vector(frame, c) for c in box_points(frame, offset, bounds)]


def coords(fam: FormFamily, v: Sequence) -> list[Fraction]:
    """v_j = a_j(v), so that v = sum v_j alpha_j / s_j in the full-rank case."""
    return [dot(a, [q(x) for x in v]) for a in fam.forms]


def unimodular_matrices(n: int, rng, steps: int = 8, bound: int = 2,
                        congruence_N: int | None = None) -> list[list[int]]:
    """Random product of elementary matrices, optionally fixing L' = [N e_1, e_2, ...]."""
    g = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        t = rng.randint(-bound, bound)
        if congruence_N and i == 0:
            t *= congruence_N
        # row_i += t row_j
        g[i] = [x + t * y for x, y in zip(g[i], g[j])]
    return g


def all_sign_vectors(n: int):
    return itertools.product((1, -1), repeat=n)
