"""Numerical evaluation of the multiple elliptic Gamma hierarchy and of the
geometric G functions attached to n-1 forms, plus the identity verifiers.

Products are accumulated as sums of log(1 - q) and exponentiated once; the
identities are then compared as complex numbers, so no branch choice matters.
"""

from __future__ import annotations

import cmath
import math
import os
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bernoulli import bn_value
from .exact_core import dot, inverse, q
from .forms_geometry import (
    DualData,
    FormFamily,
    Frame,
    dual_family_deficient,
    enumerate_F,
    gamma_vector,
    make_frame,
)
from .smoothing import sublattice_coordinates


class SingularParameter(ArithmeticError):
    pass


class InadmissibleX(ValueError):
    pass


class OutOfRegion(ValueError):
    pass


DEFAULT_EPS = 1e-12


@dataclass(frozen=True)
class Truncation:
    T: float
    tail: float


def precision_tier() -> str:
    tier = os.environ.get("GCL_PRECISION", "double").lower()
    if tier not in ("double", "mp"):
        raise ValueError(f"GCL_PRECISION must be 'double' or 'mp', got {tier!r}")
    return tier


def tail_bound(rates: Sequence[float], T: float, offset: float) -> float:
    """Bound on sum |log(1 - q)| over points of height > T.

    A point of height h contributes |q| = exp(-2 pi (h + offset)); the number of
    points of height <= h is at most prod_j (h / rate_j + 1).
    """
    total = 0.0
    for k in range(10_000):
        h = T + k
        cnt = 1.0
        for r in rates:
            cnt *= (h + 1) / r + 1
        term = cnt * math.exp(-2 * math.pi * (h + offset))
        total += term
        if term < 1e-4 * total and k > 2:
            break
    # |log(1-q)| <= 1.4 |q| once |q| <= 1/2
    return 1.4 * total


def choose_cutoff(rates, offset, eps=DEFAULT_EPS) -> Truncation:
    T = max(0.0, 12 * math.log(10) / (2 * math.pi) - offset)
    while True:
        if math.exp(-2 * math.pi * (T + offset)) <= 0.5:
            tb = tail_bound(rates, T, offset)
            if tb < eps:
                return Truncation(T, tb)
        T += 0.25


def _sum_log1m(expo: np.ndarray) -> complex:
    """sum of log(1 - exp(2 i pi expo)), smallest terms first."""
    if expo.size == 0:
        return 0j
    if precision_tier() == "mp":
        import mpmath
        with mpmath.workdps(30):
            terms = [mpmath.log(1 - mpmath.exp(2j * mpmath.pi * mpmath.mpc(complex(e))))
                     for e in expo]
            if any(abs(1 - mpmath.exp(2j * mpmath.pi * mpmath.mpc(complex(e)))) < 1e-25
                   for e in expo):
                raise SingularParameter("a factor of the product vanishes")
            return complex(mpmath.fsum(terms))
    qv = np.exp(2j * np.pi * expo)
    one_minus = 1 - qv
    if np.min(np.abs(one_minus)) < 1e-13:
        raise SingularParameter("a factor of the product vanishes")
    logs = np.log1p(-qv)
    order = np.argsort(-expo.imag)
    return complex(np.sum(logs[order]))


# ---------------------------------------------------------------------------
# The hierarchy G_r


def G_r(z: complex, taus: Sequence[complex], eps: float = DEFAULT_EPS,
        return_tail: bool = False):
    """prod_{m >= 0} (1 - e(-z + sum (m_j+1) tau_j)) (1 - e(z + sum m_j tau_j))^{(-1)^r}."""
    taus = [complex(t) for t in taus]
    z = complex(z)
    r = len(taus) - 1
    ims = [t.imag for t in taus]
    if r < 0 or min(ims) <= 0:
        raise ValueError("G_r needs Im tau_j > 0")
    off_a = sum(ims) - z.imag
    off_b = z.imag
    tr = choose_cutoff(ims, min(off_a, off_b), eps / 2)
    grids = np.meshgrid(*[np.arange(int(tr.T / im) + 1) for im in ims], indexing="ij")
    ms = np.stack([g.ravel() for g in grids], axis=1).astype(float)
    tv = np.array(taus)
    base = ms @ tv
    la = _sum_log1m(-z + base + tv.sum())
    lb = _sum_log1m(z + base)
    val = cmath.exp(la + (-1) ** r * lb)
    return (val, 2 * tr.tail) if return_tail else val


def theta(z: complex, tau: complex, eps: float = DEFAULT_EPS) -> complex:
    return G_r(z, [tau], eps)


# ---------------------------------------------------------------------------
# Geometric G for n-1 forms


def x_of(x: Sequence, vec: Sequence) -> complex:
    return sum(complex(a) * int(b) if isinstance(b, int) else complex(a) * float(b)
               for a, b in zip(x, vec))


def _xq(x, vec) -> complex:
    # x evaluated on a rational vector
    return sum(complex(a) * (b.numerator / b.denominator if isinstance(b, Fraction) else b)
               for a, b in zip(x, vec))


@dataclass
class GeomContext:
    fam: FormFamily
    dual: DualData
    gamma: tuple[int, ...]
    xg: complex
    taus: list[complex]
    d: list[int]
    D: int


def geom_context(fam: FormFamily, x: Sequence, dual: DualData | None = None,
                 min_im: float = 1e-9) -> GeomContext:
    gam = gamma_vector(fam)
    dual = dual or dual_family_deficient(fam, gam)
    xg = x_of(x, gam.gamma)
    if abs(xg) == 0:
        raise InadmissibleX("x(gamma) = 0")
    taus = [x_of(x, al) / xg for al in dual.alphas]
    if any(abs(t.imag) < min_im for t in taus):
        raise InadmissibleX("x(alpha_j)/x(gamma) is real")
    d = [1 if t.imag > 0 else -1 for t in taus]
    D = sum((dj - 1) // 2 for dj in d)
    return GeomContext(fam, dual, gam.gamma, xg, taus, d, D)


def _scaled_box(frame: Frame, offset: Sequence[Fraction], bounds) -> np.ndarray:
    """Vectorised integer points c with offset + H c inside bounds.

    bounds[i] = (lo, lo_strict, hi, hi_strict), with lo/hi Fractions.
    """
    r = frame.r
    den = 1
    for o in offset:
        den = den * o.denominator // math.gcd(den, o.denominator)
    for lo, _, hi, _ in bounds:
        for b in (lo, hi):
            den = den * b.denominator // math.gcd(den, b.denominator)
    H = np.array(frame.H, dtype=np.int64)
    pts = np.zeros((1, 0), dtype=np.int64)
    for i in range(r):
        base = int(offset[i] * den) + den * (pts @ H[i, :i]) if i else \
            np.full(len(pts), int(offset[i] * den), dtype=np.int64)
        lo, lo_s, hi, hi_s = bounds[i]
        lo_n, hi_n = int(lo * den), int(hi * den)
        step = den * int(H[i, i])
        a = lo_n - base
        b = hi_n - base
        cmin = a // step + 1 if lo_s else -((-a) // step)
        cmax = -((-b) // step) - 1 if hi_s else b // step
        cnt = np.maximum(cmax - cmin + 1, 0)
        total = int(cnt.sum())
        rep = np.repeat(np.arange(len(pts)), cnt)
        starts = np.repeat(cmin, cnt)
        within = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        pts = np.concatenate([pts[rep], (starts + within)[:, None]], axis=1)
    return pts


def geometric_G_cone(fam: FormFamily, v: Sequence, w: complex, x: Sequence,
                     eps: float = DEFAULT_EPS, dual: DualData | None = None,
                     return_tail: bool = False):
    """G_{n-2, a}(v)(w, x) via the two cones C+ and C- (valid for any admissible x)."""
    n = fam.n
    if len(fam) != n - 1:
        raise ValueError("geometric G takes n-1 forms")
    if fam.rank < n - 1:
        return (1 + 0j, 0.0) if return_tail else 1 + 0j
    ctx = geom_context(fam, x, dual)
    v = [q(t) for t in v]
    frame = make_frame(fam.forms)
    offset = [Fraction(dot(a, v)) for a in fam.forms]
    s = ctx.dual.s
    ims = [t.imag for t in ctx.taus]
    wq = complex(w) / ctx.xg
    z0 = (complex(w) + _xq(x, v)) / ctx.xg
    xi = np.array([x_of(x, frame.column(i)) / ctx.xg for i in range(frame.r)])
    rates = [abs(im) * frame.H[j][j] / s[j] for j, im in enumerate(ims)]
    logs = 0j
    tail = 0.0
    for cone in (1, -1):
        off = wq.imag if cone == 1 else -wq.imag
        tr = choose_cutoff(rates, off, eps / 2)
        tail += tr.tail
        bounds = []
        for j in range(n - 1):
            ymax = Fraction(math.ceil(tr.T * s[j] / abs(ims[j])) + 1)
            if ctx.d[j] * cone == 1:
                bounds.append((Fraction(0), False, ymax, False))
            else:
                bounds.append((-ymax, False, Fraction(0), True))
        pts = _scaled_box(frame, offset, bounds)
        expo = z0 + pts.astype(float) @ xi if len(pts) else np.zeros(0, complex)
        if cone == 1:
            logs += (-1) ** n * _sum_log1m(expo)
        else:
            logs += _sum_log1m(-expo)
    val = cmath.exp(logs)
    if ctx.D % 2:
        val = 1 / val
    return (val, tail) if return_tail else val


def geometric_G_original(fam: FormFamily, v: Sequence, w: complex, x: Sequence,
                         eps: float = DEFAULT_EPS, dual: DualData | None = None) -> complex:
    """Finite product of G_{n-2} over F(a, alpha, v)/Z gamma; needs every Im tau_j > 0."""
    n = fam.n
    if len(fam) != n - 1:
        raise ValueError("geometric G takes n-1 forms")
    if fam.rank < n - 1:
        return 1 + 0j
    ctx = geom_context(fam, x, dual)
    if any(dj < 0 for dj in ctx.d):
        raise OutOfRegion("some x(alpha_j)/x(gamma) lies in the lower half plane")
    reps = enumerate_F(fam, ctx.dual, v)
    val = 1 + 0j
    for delta in reps:
        z = (complex(w) + _xq(x, delta)) / ctx.xg
        val *= G_r(z, ctx.taus, eps / max(1, len(reps)))
    return val


# ---------------------------------------------------------------------------
# Smoothing lattice L' = [N e_1, e_2, ..., e_n]


def smoothed_G(fam: FormFamily, v, w, x, N: int, eps: float = DEFAULT_EPS) -> complex:
    """G(L')^N / G(L)."""
    if fam.rank < fam.n - 1:
        return 1 + 0j
    f2, v2, x2 = sublattice_coordinates(fam, v, x, N)
    return geometric_G_cone(f2, v2, w, x2, eps) ** N / geometric_G_cone(fam, v, w, x, eps)


def alternating_product(fam: FormFamily, v, w, x, N: int | None = None,
                        eps: float = DEFAULT_EPS) -> complex:
    """prod_j G_{omit j}^{(-1)^{j+1}}, j counted from 1; smoothed when N is given."""
    val = 1 + 0j
    for j in range(len(fam)):
        sub = fam.omit(j)
        g = smoothed_G(sub, v, w, x, N, eps) if N else geometric_G_cone(sub, v, w, x, eps)
        val *= g if j % 2 == 0 else 1 / g
    return val


@dataclass
class ModularReport:
    lhs: complex
    rhs: complex
    residual: float
    ok: bool


def _residual(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(b))


def verify_modular(fam: FormFamily, v, w, x, tol: float = 1e-8) -> ModularReport:
    lhs = alternating_product(fam, v, w, x)
    B = bn_value(fam, v, complex(w), [complex(t) for t in x]) if fam.rank == fam.n else 0
    rhs = cmath.exp(2j * math.pi * complex(B))
    res = _residual(lhs, rhs)
    return ModularReport(lhs, rhs, res, res < tol)


def admissible_x(fams: Sequence[FormFamily], rng, threshold: float = 0.1,
                 gaussian_rational: bool = False, max_tries: int = 10_000):
    """Random x with |Im(x(alpha)/x(gamma))| >= threshold for every listed family."""
    n = fams[0].n
    prepared = []
    for f in fams:
        if f.rank == n - 1:
            gam = gamma_vector(f)
            prepared.append((gam.gamma, dual_family_deficient(f, gam).alphas))
    for _ in range(max_tries):
        if gaussian_rational:
            x = [complex(Fraction(rng.randint(-12, 12), 4), Fraction(rng.randint(-12, 12), 4))
                 for _ in range(n)]
        else:
            x = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]
        ok = True
        for gam, alphas in prepared:
            xg = x_of(x, gam)
            if abs(xg) < 1e-3 or any(abs((x_of(x, al) / xg).imag) < threshold for al in alphas):
                ok = False
                break
        if ok:
            return x
    raise InadmissibleX("no admissible x found")


def verify_rank_deficient(fam: FormFamily, v, w, x, tol: float = 1e-8) -> ModularReport:
    """Rank n-1, well placed: the alternating product is 1."""
    lhs = alternating_product(fam, v, w, x)
    res = _residual(lhs, 1 + 0j)
    return ModularReport(lhs, 1 + 0j, res, res < tol)


@dataclass
class MainReport:
    value: Fraction
    b: int
    D: int
    samples: list
    residual: float
    spread: float
    power_residual: float
    ok: bool


def smoothing_families(fam: FormFamily, N: int) -> list[FormFamily]:
    """Every (n-1)-subfamily, in L and in L' coordinates (for admissible_x)."""
    out = []
    for j in range(len(fam)):
        sub = fam.omit(j)
        out += [sub, sublattice_coordinates(sub, [0] * fam.n, [0] * fam.n, N)[0]]
    return out


def verify_main(fam: FormFamily, v, N: int, samples: Sequence, tol: float = 1e-8,
                power_tol: float = 1e-7) -> MainReport:
    """Smoothed alternating product against exp(2 i pi b / D(N, n))."""
    from .smoothing import denominator_bound, smoothed_bn_dedekind
    D = denominator_bound(N, fam.n)
    if len(fam) == fam.n and fam.rank == fam.n:
        sv = smoothed_bn_dedekind(fam, v, N)
        value, b = sv.value, sv.b
    else:
        value, b = Fraction(0), 0
    target = cmath.exp(2j * math.pi * b / D)
    vals = [alternating_product(fam, v, w, x, N) for w, x in samples]
    residual = max(_residual(z, target) for z in vals)
    spread = max(abs(z - vals[0]) for z in vals)
    power = max(abs(z ** D - 1) for z in vals)
    ok = residual < tol and spread < tol and power < power_tol
    return MainReport(value, b, D, vals, residual, spread, power, ok)


# ---------------------------------------------------------------------------
# The barycentre configuration a_1 = -a_2


def barycenter_closed_form(n: int, v, w, x, eps: float = DEFAULT_EPS) -> complex:
    """G_{n-3}((w+x(v))/x(e_1), x(e_3)/x(e_1), ..), or exp(-2 i pi (z - 1/2)) when n = 2.

    Coordinates are those in which a_2, .., a_n are the coordinate forms
    f_2, .., f_n and a_1 = -f_2.
    """
    x = [complex(t) for t in x]
    z = (complex(w) + _xq(x, [q(t) for t in v])) / x[0]
    if n == 2:
        return cmath.exp(-2j * math.pi * (z - 0.5))
    return G_r(z, [x[k] / x[0] for k in range(2, n)], eps)


def barycenter_residual(n: int, v, w, x, g=None,
                        eps: float = DEFAULT_EPS) -> tuple[complex, complex]:
    """(alternating product, predicted value) for a_1 = -f_2, a_k = f_k.

    Needs a_2(v) = 0 and 0 <= v_k < 1 for k >= 3 (so that the box F is {v}).
    The product equals G_{a_2,..}/G_{-a_2,..}, which is the closed form raised
    to (-1)^n.  With g in SL_n(Z) the family, v and x are first transported
    to a . g^-1, g v, x . g^-1; the prediction is unchanged by equivariance.
    """
    forms = [[0] * n for _ in range(n)]
    forms[0][1] = -1
    for k in range(1, n):
        forms[k][k] = 1
    fam = FormFamily(forms, n)
    if g is None:
        alt = alternating_product(fam, v, w, x, eps=eps)
    else:
        g_inv = [[int(t) for t in row] for row in inverse(g)]
        gv = [sum(g[i][k] * q(v[k]) for k in range(n)) for i in range(n)]
        gx = [sum(complex(x[i]) * g_inv[i][k] for i in range(n)) for k in range(n)]
        alt = alternating_product(fam.act(g_inv), gv, w, gx, eps=eps)
    cf = barycenter_closed_form(n, v, w, x, eps)
    return alt, cf if n % 2 == 0 else 1 / cf
