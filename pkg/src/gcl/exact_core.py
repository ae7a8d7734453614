"""Exact rational and integer linear algebra.

Vectors are plain sequences of ``int`` or ``Fraction`` expressed in the fixed
basis ``e_1..e_n``; covectors use the dual basis.  Nothing here touches
floating point.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Rational = Fraction
Matrix = Sequence[Sequence]


def q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fmt_q(x) -> str:
    x = q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def sign(x) -> int:
    return (x > 0) - (x < 0)


def floor_q(x) -> int:
    x = q(x)
    return x.numerator // x.denominator


def ceil_q(x) -> int:
    x = q(x)
    return -((-x.numerator) // x.denominator)


def mat_mul(a: Matrix, b: Matrix) -> list[list]:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(m: Matrix) -> list[list]:
    return [list(r) for r in zip(*m)]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(m: Matrix) -> Fraction:
    """Exact determinant by fraction-free-style Gaussian elimination."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("det needs a square matrix")
    a = [[q(x) for x in r] for r in m]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return d


def int_det(m: Matrix) -> int:
    v = det(m)
    assert v.denominator == 1
    return v.numerator


def rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    a = [[q(x) for x in r] for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    piv = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        a[r] = [x / lead for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return a, piv


def rank(forms: Matrix) -> int:
    if not forms:
        raise ValueError("rank of an empty family")
    return len(rref(forms)[1])


def nullspace(m: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Rational basis of {x : m x = 0}."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    a, piv = rref(m)
    n = len(a[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -a[i][f]
        basis.append(x)
    return basis


def solve(m: Matrix, b: Sequence) -> list[Fraction]:
    """Unique solution of a square nonsingular system."""
    n = len(m)
    aug = [list(r) + [b[i]] for i, r in enumerate(m)]
    a, piv = rref(aug)
    if piv != list(range(n)):
        raise ValueError("singular system")
    return [a[i][n] for i in range(n)]


def inverse(m: Matrix) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m)]
    a, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [r[n:] for r in a[:n]]


def adjugate(m: Matrix) -> list[list[Fraction]]:
    n = len(m)
    if n == 1:
        return [[Fraction(1)]]
    adj = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(map(list, m)) if k != i]
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return adj


def primitive_part(v: Sequence[int]) -> tuple[list[int], int]:
    """Return (v/g, g) with g the gcd of the coordinates."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return [int(x) // g for x in v], g


def clear_denominators(v: Sequence) -> list[int]:
    """Smallest positive integer multiple of a rational vector."""
    den = 1
    for x in v:
        x = q(x)
        den = den * x.denominator // gcd(den, x.denominator)
    return [int(q(x) * den) for x in v]


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Integer systems


def column_hnf(a: Matrix) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Unimodular U with A·U lower echelon.

    Returns (H, U, pivots) where H = A·U, pivots[i] is the row of the pivot in
    column i (pivot entries positive) and the columns after len(pivots) of H
    are zero.
    """
    rows = len(a)
    ncol = len(a[0]) if rows else 0
    h = [[int(x) for x in r] for r in a]
    u = identity(ncol)

    def colop(i, j, ci, cj, di, dj):
        # (col_i, col_j) <- (ci*col_i + cj*col_j, di*col_i + dj*col_j)
        for mat in (h, u):
            for r in mat:
                x, y = r[i], r[j]
                r[i], r[j] = ci * x + cj * y, di * x + dj * y

    pivots = []
    c = 0
    for r in range(rows):
        if c == ncol:
            break
        for j in range(c + 1, ncol):
            if h[r][j] == 0:
                continue
            x, y = h[r][c], h[r][j]
            g, s, t = xgcd(x, y)
            colop(c, j, s, t, -y // g, x // g)
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            colop(c, c, -1, 0, -1, 0)
        # reduce earlier pivot columns' entries in this row
        for j in range(c):
            f = h[r][j] // h[r][c]
            if f:
                for mat in (h, u):
                    for row in mat:
                        row[j] -= f * row[c]
        pivots.append(r)
        c += 1
    return h, u, pivots


@dataclass(frozen=True)
class IntSolution:
    particular: tuple[int, ...] | None
    kernel: tuple[tuple[int, ...], ...]

    @property
    def solvable(self) -> bool:
        return self.particular is not None


def hnf_solve(a: Matrix, b: Sequence[int] | None = None, ncols: int | None = None) -> IntSolution:
    """Integer solutions of A x = b: a particular solution and a kernel basis.

    An inconsistent system gives ``particular=None``.
    """
    if not a:
        n = ncols or 0
        return IntSolution(tuple([0] * n), tuple(tuple(r) for r in identity(n)))
    h, u, piv = column_hnf(a)
    n = len(u)
    r = len(piv)
    kernel = tuple(tuple(u[i][j] for i in range(n)) for j in range(r, n))
    if b is None:
        b = [0] * len(a)
    y = [0] * n
    for row in range(len(a)):
        acc = sum(h[row][j] * y[j] for j in range(r))
        if row in piv:
            j = piv.index(row)
            rem = int(b[row]) - (acc - h[row][j] * y[j])
            if rem % h[row][j]:
                return IntSolution(None, kernel)
            y[j] = rem // h[row][j]
        elif acc != b[row]:
            return IntSolution(None, kernel)
    x = tuple(sum(u[i][j] * y[j] for j in range(n)) for i in range(n))
    return IntSolution(x, kernel)


# ---------------------------------------------------------------------------
# Fourier-Motzkin with strictness

REL_GE, REL_GT, REL_LE, REL_LT, REL_EQ = ">=", ">", "<=", "<", "=="


@dataclass(frozen=True)
class Constraint:
    """coeffs·x + const  REL  0"""
    coeffs: tuple
    rel: str
    const: Fraction = Fraction(0)


class IneqSystem:
    def __init__(self, dim: int, constraints=()):
        self.dim = dim
        self.constraints: list[Constraint] = []
        for c in constraints:
            self.add(*c) if not isinstance(c, Constraint) else self.constraints.append(c)

    def add(self, coeffs, rel, const=0):
        if len(coeffs) != self.dim:
            raise ValueError("covector length mismatch")
        if rel not in (REL_GE, REL_GT, REL_LE, REL_LT, REL_EQ):
            raise ValueError(f"unknown relation {rel!r}")
        self.constraints.append(Constraint(tuple(q(x) for x in coeffs), rel, q(const)))
        return self

    def __and__(self, other: IneqSystem) -> IneqSystem:
        return IneqSystem(self.dim, self.constraints + other.constraints)

    def satisfied_by(self, x: Sequence) -> bool:
        for c in self.constraints:
            val = dot(c.coeffs, x) + c.const
            if not {REL_GE: val >= 0, REL_GT: val > 0, REL_LE: val <= 0,
                    REL_LT: val < 0, REL_EQ: val == 0}[c.rel]:
                return False
        return True


def _normalize(coeffs, const, strict):
    scale = max((abs(x) for x in coeffs), default=0) or abs(const) or 1
    return tuple(x / scale for x in coeffs), const / scale, strict


def _canonical_rows(sys: IneqSystem):
    # every row as (coeffs, const, strict) meaning coeffs·x + const > / >= 0
    out = set()
    for c in sys.constraints:
        if c.rel in (REL_GE, REL_GT):
            out.add(_normalize(c.coeffs, c.const, c.rel == REL_GT))
        elif c.rel in (REL_LE, REL_LT):
            out.add(_normalize(tuple(-x for x in c.coeffs), -c.const, c.rel == REL_LT))
        else:
            out.add(_normalize(c.coeffs, c.const, False))
            out.add(_normalize(tuple(-x for x in c.coeffs), -c.const, False))
    return out


def _eliminate(rows, k):
    pos, neg, rest = [], [], set()
    for r in rows:
        ck = r[0][k]
        if ck > 0:
            pos.append(r)
        elif ck < 0:
            neg.append(r)
        else:
            rest.add(r)
    for pc, p0, ps in pos:
        for nc, n0, ns in neg:
            fp, fn = -nc[k], pc[k]
            coeffs = tuple(fp * a + fn * b for a, b in zip(pc, nc))
            rest.add(_normalize(coeffs, fp * p0 + fn * n0, ps or ns))
    return rest


def _constant_ok(rows) -> bool:
    return all((c0 > 0) if strict else (c0 >= 0) for _, c0, strict in rows)


def fm_solve(sys: IneqSystem) -> list[Fraction] | None:
    """A rational point satisfying every constraint, or None."""
    n = sys.dim
    stages = [_canonical_rows(sys)]
    for k in range(n - 1, -1, -1):
        rows = stages[-1]
        # drop constant rows early, they only need checking
        if not _constant_ok([r for r in rows if not any(r[0])]):
            return None
        stages.append(_eliminate({r for r in rows if any(r[0])}, k) |
                      {r for r in rows if not any(r[0])})
    if not _constant_ok(stages[-1]):
        return None
    x = [Fraction(0)] * n
    # stages[n-k-1] involves variables 0..k
    for k in range(n):
        rows = stages[n - 1 - k]
        lo = hi = None
        lo_s = hi_s = False
        for coeffs, c0, strict in rows:
            ck = coeffs[k]
            if ck == 0:
                continue
            rest = c0 + sum(coeffs[i] * x[i] for i in range(k))
            bound = -rest / ck
            if ck > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_s = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_s = bound, strict
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and (lo_s or hi_s)):
                return None
            x[k] = lo if lo == hi else (lo + hi) / 2
        elif lo is not None:
            x[k] = lo + 1 if lo_s else lo
        elif hi is not None:
            x[k] = hi - 1 if hi_s else hi
    if not sys.satisfied_by(x):
        raise AssertionError("Fourier-Motzkin back substitution failed")
    return x


def fm_feasible(sys: IneqSystem) -> bool:
    return fm_solve(sys) is not None
