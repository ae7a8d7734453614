"""Sign tables and cone combinatorics for n forms of rank n-1.

Each check is run on the instance at hand: every cone is an exact rational
polyhedron, and since membership in C^1_j, C^2_j only depends on the signs
(>= 0 or < 0) of a_1(delta), .., a_n(delta), the functions f^1 and f^2 are
evaluated once per realisable sign pattern.  That makes "f^1 = f^2 = 0" an
exact global statement about the instance.

Indices j, k are 1-based throughout to match the usual sign-table layout.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_core import REL_GE, REL_LT, IneqSystem, dot, fm_feasible, fm_solve, sign
from .forms_geometry import (
    FormFamily,
    RankError,
    dual_family_deficient,
    gamma_vector,
    standard_relation,
)


class SignLemmaViolation(AssertionError):
    pass


GaussQ = tuple[Fraction, Fraction]


def gaussian(x: Sequence) -> list[GaussQ]:
    """Exact (re, im) pairs; floats are converted bit-for-bit."""
    out = []
    for z in x:
        if isinstance(z, tuple):
            out.append((Fraction(z[0]), Fraction(z[1])))
        else:
            z = complex(z)
            out.append((Fraction(z.real), Fraction(z.imag)))
    return out


def _xg(x: Sequence[GaussQ], vec: Sequence[int]) -> GaussQ:
    return (sum(a[0] * c for a, c in zip(x, vec)), sum(a[1] * c for a, c in zip(x, vec)))


def _im_ratio_num(a: GaussQ, b: GaussQ) -> Fraction:
    """Im(a/b) * |b|^2."""
    return a[1] * b[0] - a[0] * b[1]


# ---------------------------------------------------------------------------
# Ordering


def canonical_order(fam: FormFamily) -> tuple[FormFamily, tuple[int, ...]]:
    """Reorder so that lambda is zero, then negative, then positive.

    Returns the reordered family and perm with new[i] = old[perm[i]].
    """
    if fam.rank != fam.n - 1 or len(fam) != fam.n:
        raise RankError("sign tables need n forms of rank n-1")
    lam = standard_relation(fam).lambdas
    zeros = [i for i, t in enumerate(lam) if t == 0]
    neg = [i for i, t in enumerate(lam) if t < 0]
    pos = [i for i, t in enumerate(lam) if t > 0]
    perm = tuple(zeros + neg + pos)
    new = fam.permute(perm)
    lam2 = standard_relation(new).lambdas
    assert [sign(t) for t in lam2] == [sign(lam[p]) for p in perm]
    return new, perm


def signature(perm: Sequence[int]) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


# ---------------------------------------------------------------------------
# The table


@dataclass
class SignTable:
    fam: FormFamily
    perm: tuple[int, ...]
    lambdas: tuple[Fraction, ...]
    l: int
    n: int
    gamma: tuple[int, ...]
    eps: dict = field(default_factory=dict)
    d: dict = field(default_factory=dict)
    D: dict = field(default_factory=dict)
    mu: dict = field(default_factory=dict)
    u: dict = field(default_factory=dict)
    alphas: dict = field(default_factory=dict)

    @property
    def columns(self) -> range:
        return range(self.l, self.n + 1)

    def entry(self, j: int, k: int) -> int:
        """eps_j d^(j)_k."""
        return self.eps[j] * self.d[(j, k)]

    def column(self, j: int) -> dict:
        return {k: self.entry(j, k) for k in range(1, self.n + 1) if k != j}

    def to_json(self) -> dict:
        return {
            "n": self.n, "l": self.l,
            "forms": [list(a) for a in self.fam.forms],
            "perm": list(self.perm),
            "lambda": [str(t) for t in self.lambdas],
            "rows": {str(k): {str(j): ("+" if self.entry(j, k) > 0 else "-")
                              for j in self.columns if j != k}
                     for k in range(1, self.n + 1)},
            "eps": {str(j): e for j, e in self.eps.items()},
            "D": {str(j): v for j, v in self.D.items()},
            "mu": {str(j): v for j, v in self.mu.items()},
            "u": {f"{j},{k}": str(v) for (j, k), v in self.u.items()},
        }

    def render(self) -> str:
        cols = list(self.columns)
        lines = ["k\\j " + " ".join(f"{j:>2}" for j in cols)]
        for k in range(1, self.n + 1):
            cells = []
            for j in cols:
                cells.append(" ." if j == k else (" +" if self.entry(j, k) > 0 else " -"))
            lines.append(f"{k:>3} " + " ".join(cells))
        return "\n".join(lines)


def build_sign_table(fam: FormFamily, x: Sequence, reorder: bool = True) -> SignTable:
    """Sign table of a rank n-1 family at x (x(alpha)/x(gamma) must be non-real)."""
    from .gamma_numeric import InadmissibleX
    n = fam.n
    if reorder:
        fam, perm = canonical_order(fam)
    else:
        perm = tuple(range(n))
        if fam.rank != n - 1 or len(fam) != n:
            raise RankError("sign tables need n forms of rank n-1")
    rel = standard_relation(fam)
    lam = rel.lambdas
    l = rel.l + 1
    if reorder:
        assert all(t == 0 for t in lam[:l - 1]) and lam[-1] > 0
    xq = gaussian(x)
    gamma = gamma_vector(fam.omit(n - 1)).gamma
    xgam = _xg(xq, gamma)
    if xgam == (0, 0):
        raise InadmissibleX("x(gamma) = 0")
    tab = SignTable(fam, perm, lam, l, n, gamma)
    for j in range(l, n + 1):
        sub = fam.omit(j - 1)
        gj = gamma_vector(sub)
        e = (-1) ** (j + n) * sign(lam[j - 1])
        if list(gj.gamma) != [e * t for t in gamma]:
            raise SignLemmaViolation(f"gamma^({j}) is not eps_j gamma")
        dual = dual_family_deficient(sub, gj)
        xgj = _xg(xq, gj.gamma)
        tab.eps[j] = e
        ks = [k for k in range(1, n + 1) if k != j]
        for k, al in zip(ks, dual.alphas):
            xa = _xg(xq, al)
            num = _im_ratio_num(xa, xgj)
            if num == 0:
                raise InadmissibleX(f"x(alpha^({j})_{k})/x(gamma^({j})) is real")
            tab.d[(j, k)] = sign(num)
            tab.alphas[(j, k)] = al
            if lam[k - 1] != 0:
                ak = dot(fam.forms[k - 1], al)
                tab.u[(j, k)] = abs(_im_ratio_num(xa, xgam)) / (
                    abs(lam[k - 1] * ak) * (xgam[0] ** 2 + xgam[1] ** 2))
        tab.D[j] = sum((tab.d[(j, k)] - 1) // 2 for k in ks)
        if e == 1:
            tab.mu[j] = (-1) ** (j + 1 + tab.D[j] + n)
        else:
            tab.mu[j] = (-1) ** (j + 1 + tab.D[j])
    return tab


# ---------------------------------------------------------------------------
# Sign relations


@dataclass
class SignLemmaReport:
    rows_constant: bool
    transpose_rule: bool
    u_ordering: bool

    @property
    def ok(self) -> bool:
        return self.rows_constant and self.transpose_rule and self.u_ordering


def check_sign_lemma(tab: SignTable) -> SignLemmaReport:
    _n, l, lam = tab.n, tab.l, tab.lambdas
    cols = list(tab.columns)
    rows_constant = all(len({tab.entry(j, k) for j in cols}) == 1 for k in range(1, l))
    # lower triangle rebuilt from the upper one
    transpose_rule = True
    for j, k in itertools.combinations(cols, 2):
        rebuilt = -sign(lam[j - 1] * lam[k - 1]) * tab.entry(j, k)
        if tab.entry(k, j) != rebuilt:
            transpose_rule = False
    u_ordering = True
    for j, k, k2 in itertools.permutations(cols, 3):
        if tab.u[(j, k)] <= tab.u[(j, k2)] and tab.entry(k, k2) != tab.entry(j, k2):
            u_ordering = False
    return SignLemmaReport(rows_constant, transpose_rule, u_ordering)


# ---------------------------------------------------------------------------
# Cones as sign patterns


def _halfspace(pattern_sign: int) -> str:
    return REL_GE if pattern_sign > 0 else REL_LT


def cone_system(tab: SignTable, j: int, which: int = 1) -> IneqSystem:
    """C^1_j (which=1) or C^2_j (which=2) as an exact inequality system."""
    sys = IneqSystem(tab.n)
    for k, e in tab.column(j).items():
        s = e if which == 1 else -e
        sys.add(tab.fam.forms[k - 1], _halfspace(s))
    return sys


def in_cone(tab: SignTable, j: int, pattern: Sequence[int], which: int = 1) -> bool:
    """Membership from a sign pattern (+1 for a_k >= 0, -1 for a_k < 0)."""
    for k, e in tab.column(j).items():
        if pattern[k - 1] != (e if which == 1 else -e):
            return False
    return True


def pattern_of(fam: FormFamily, delta: Sequence) -> tuple[int, ...]:
    return tuple(1 if dot(a, delta) >= 0 else -1 for a in fam.forms)


def realizable_patterns(fam: FormFamily) -> dict:
    """Sign patterns of (a_1, .., a_n) met by some rational delta, with a witness."""
    out = {}
    for pat in itertools.product((1, -1), repeat=fam.n):
        sys = IneqSystem(fam.n)
        for a, s in zip(fam.forms, pat):
            sys.add(a, _halfspace(s))
        pt = fm_solve(sys)
        if pt is not None:
            out[pat] = pt
    return out


def f_values(tab: SignTable, pattern: Sequence[int]) -> tuple[int, int]:
    f1 = sum(tab.mu[j] for j in tab.columns if in_cone(tab, j, pattern, 1))
    f2 = (-1) ** tab.n * sum(tab.mu[j] for j in tab.columns if in_cone(tab, j, pattern, 2))
    return f1, f2


@dataclass
class FReport:
    values: dict
    witnesses_agree: bool

    @property
    def ok(self) -> bool:
        return self.witnesses_agree and all(v == (0, 0) for v in self.values.values())

    def nonzero(self) -> dict:
        return {p: v for p, v in self.values.items() if v != (0, 0)}


def f_table(tab: SignTable, patterns: dict | None = None) -> FReport:
    patterns = patterns if patterns is not None else realizable_patterns(tab.fam)
    vals = {}
    agree = True
    for pat, pt in patterns.items():
        vals[pat] = f_values(tab, pat)
        # direct evaluation at the witness point
        direct = f_values(tab, pattern_of(tab.fam, pt))
        agree &= direct == vals[pat] and pattern_of(tab.fam, pt) == pat
    return FReport(vals, agree)


def verify_f_vanishing(fam: FormFamily, x: Sequence, tab: SignTable | None = None) -> FReport:
    tab = tab or build_sign_table(fam, x)
    return f_table(tab)


# ---------------------------------------------------------------------------
# Triple intersections, compatibility, coverage


def compatible(tab: SignTable, j: int, j2: int) -> bool:
    return all(tab.entry(j, k) == tab.entry(j2, k)
               for k in range(1, tab.n + 1) if k not in (j, j2))


def compatible_set(tab: SignTable, j: int) -> list[int]:
    """I(j)."""
    return [j2 for j2 in tab.columns if j2 != j and compatible(tab, j, j2)]


@dataclass
class ConeReport:
    triples_empty: bool
    pairs_imply_compatible: bool
    component_rule: bool
    I_nonempty: bool
    coverage: bool
    sufficient_empty: bool
    single_compatible: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.triples_empty and self.pairs_imply_compatible and self.component_rule
                and self.I_nonempty and self.coverage and self.sufficient_empty
                and self.single_compatible)


def check_triple_and_coverage(tab: SignTable, patterns: dict | None = None) -> ConeReport:
    _n, lam = tab.n, tab.lambdas
    cols = list(tab.columns)
    patterns = patterns if patterns is not None else realizable_patterns(tab.fam)
    details = {}

    triples_empty = True
    for which in (1, 2):
        for t in itertools.combinations(cols, 3):
            sys = cone_system(tab, t[0], which) & cone_system(tab, t[1], which) & \
                cone_system(tab, t[2], which)
            if fm_feasible(sys):
                triples_empty = False
                details.setdefault("nonempty_triples", []).append((which, t))

    pairs_ok = True
    component_ok = True
    for j, j2 in itertools.permutations(cols, 2):
        meet = fm_feasible(cone_system(tab, j) & cone_system(tab, j2))
        if meet and not compatible(tab, j, j2):
            pairs_ok = False
        if compatible(tab, j, j2):
            # C1_j meets C1_j2 exactly on the half of C1_j cut out by a_j
            nu = tab.entry(j2, j)
            for pat in patterns:
                lhs = in_cone(tab, j, pat) and in_cone(tab, j2, pat)
                rhs = in_cone(tab, j, pat) and pat[j - 1] == nu
                if lhs != rhs:
                    component_ok = False

    I = {j: compatible_set(tab, j) for j in cols}
    details["I"] = I
    I_nonempty = all(I[j] for j in cols) if len(cols) > 1 else True

    coverage = True
    for pat in patterns:
        members = [j for j in cols if in_cone(tab, j, pat)]
        if len(members) == 1:
            coverage = False
            details.setdefault("uncovered", []).append((pat, members[0]))

    sufficient = True
    for j in cols:
        for nu in (1, -1):
            if all(nu * lam[j - 1] * lam[k - 1] * tab.entry(j, k) > 0 for k in cols if k != j):
                sys = cone_system(tab, j)
                sys.add(tab.fam.forms[j - 1], _halfspace(nu))
                if fm_feasible(sys):
                    sufficient = False

    single = True
    for j in cols:
        if len(I[j]) == 1:
            j2 = I[j][0]
            target = sign(lam[j2 - 1]) * tab.d[(j, j2)]
            if any(sign(lam[k - 1]) * tab.d[(j, k)] != target for k in cols if k != j):
                single = False
            if any(in_cone(tab, j, pat) and not in_cone(tab, j2, pat) for pat in patterns):
                single = False

    return ConeReport(triples_empty, pairs_ok, component_ok, I_nonempty, coverage,
                      sufficient, single, details)


def cone_is_disjoint_union(tab: SignTable, j: int, parts: Sequence[int],
                           patterns: dict | None = None) -> bool:
    """C^1_j is the disjoint union of the C^1_k, k in parts (pattern by pattern)."""
    patterns = patterns if patterns is not None else realizable_patterns(tab.fam)
    for pat in patterns:
        inside = [k for k in parts if in_cone(tab, k, pat)]
        if len(inside) > 1 or in_cone(tab, j, pat) != (len(inside) == 1):
            return False
    return True


# ---------------------------------------------------------------------------
# 0 as a barycentre


@dataclass
class BarycenterWitness:
    pattern: tuple[int, ...] | None
    point: list | None
    f1: int
    f2: int
    residual: float | None = None


def counterexample_when_barycenter(fam: FormFamily, x: Sequence, v=None, w=None,
                                   numeric: bool = False) -> BarycenterWitness:
    """A sign region where f^1 or f^2 is non-zero when k^- = 0.

    With ``numeric`` the distance of the alternating product from 1 is also
    reported (v, w default to 0 and 0.1 + 0.05 i).
    """
    rel = standard_relation(fam)
    if rel.k_minus != 0:
        raise ValueError("family is well placed; no counterexample expected")
    tab = build_sign_table(fam, x)
    rep = f_table(tab)
    bad = rep.nonzero()
    pat = next(iter(bad), None)
    f1, f2 = bad[pat] if pat else (0, 0)
    res = None
    if numeric:
        from .gamma_numeric import alternating_product
        v = v if v is not None else [0] * fam.n
        w = w if w is not None else complex(0.1, 0.05)
        res = abs(alternating_product(fam, v, w, [complex(t) for t in x]) - 1)
    return BarycenterWitness(pat, realizable_patterns(tab.fam).get(pat) if pat else None,
                             f1, f2, res)
