"""The n = 2 layer: Dedekind sums, the Dedekind-Rademacher function, the level
N cocycles and the modularity defects of theta and its smoothing
theta^(N)(z, tau) = theta(z, tau)^N / theta(Nz, N tau)."""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .bernoulli import periodic_b
from .forms_geometry import FormFamily
from .smoothing import denominator_bound, is_good_lattice, smoothed_bn_dedekind


@dataclass(frozen=True)
class SL2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, o: SL2) -> SL2:
        return SL2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                   self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def in_gamma0(self, N: int) -> bool:
        return self.c % N == 0

    def act(self, z: complex, tau: complex) -> tuple[complex, complex]:
        j = self.c * tau + self.d
        return z / j, (self.a * tau + self.b) / j


IDENTITY = SL2(1, 0, 0, 1)
S = SL2(0, -1, 1, 0)


def _sign(c: int) -> int:
    if c == 0:
        raise ValueError("sign(0) is not used by these formulas")
    return 1 if c > 0 else -1


def dedekind_sum(c: int, d: int) -> Fraction:
    """s(c, d) = sum_{k=1}^{c-1} b_1(k/c) b_1(kd/c)."""
    if c <= 0:
        raise ValueError("s(c, d) needs c > 0")
    return sum((periodic_b(1, Fraction(k, c)) * periodic_b(1, Fraction(k * d, c))
                for k in range(1, c)), Fraction(0))


def phi_DR(g: SL2) -> int:
    """Rademacher's function: b/d if c = 0, else (a + d)/c - 12 sign(c) s(|c|, d)."""
    if g.c == 0:
        val = Fraction(g.b, g.d)
    else:
        val = Fraction(g.a + g.d, g.c) - 12 * _sign(g.c) * dedekind_sum(abs(g.c), g.d)
    if val.denominator != 1:
        raise AssertionError(f"phi_DR({g}) = {val} is not an integer")
    return int(val)


def _lower(g: SL2, N: int) -> SL2:
    """(a, bN; c/N, d)."""
    if g.c % N:
        raise ValueError(f"{g} is not in Gamma_0({N})")
    return SL2(g.a, g.b * N, g.c // N, g.d)


def psi_N(g: SL2, N: int) -> int:
    return phi_DR(_lower(g, N)) - phi_DR(g)


def p2(g: SL2, z: complex, tau: complex) -> complex:
    """Modularity defect of theta: theta(g(z, tau)) = theta(z, tau) e(P_2).

    For c = 0, a = -1 the defect is 1/2 - z, from theta(-z, tau) = -e(-z) theta(z, tau).
    """
    a, c, d = g.a, g.c, g.d
    if c == 0:
        return 0j if a == 1 else 0.5 - complex(z)
    j = c * tau + d
    s = float(dedekind_sum(abs(c), d))
    return ((z * z * c * c + z * c + 1 / 6) / (2 * c * j) - z / 2 + j / (12 * c)
            - _sign(c) * (s + 0.25))


def p2_N(g: SL2, N: int) -> Fraction:
    if g.c % N:
        raise ValueError(f"{g} is not in Gamma_0({N})")
    if g.c == 0:
        return Fraction(0) if g.d == 1 else Fraction(1 - N, 2)
    c = abs(g.c)
    return _sign(g.c) * (dedekind_sum(c // N, g.d) - N * dedekind_sum(c, g.d)
                         + Fraction(1 - N, 4))


def p2_N_from_phi(g: SL2, N: int) -> Fraction:
    """The same value through phi_DR: (N phi(g) - phi(g_N))/12 + branch term."""
    base = Fraction(N * phi_DR(g) - phi_DR(_lower(g, N)), 12)
    if g.c == 0:
        return base + (0 if g.d == 1 else Fraction(1 - N, 2))
    return base + _sign(g.c) * Fraction(1 - N, 4)


def theta_N(z: complex, tau: complex, N: int) -> complex:
    from .gamma_numeric import theta
    return theta(z, tau) ** N / theta(N * z, N * tau)


def random_sl2(rng: random.Random, N: int = 1, bound: int = 6) -> SL2:
    """Random element of Gamma_0(N) (N = 1 gives SL_2(Z))."""
    while True:
        c = N * rng.randint(-bound, bound)
        d = rng.randint(-3 * bound, 3 * bound)
        if math.gcd(c, d) != 1:
            continue
        if c == 0:
            return SL2(d, rng.randint(-bound, bound), 0, d)
        a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
        a += c * rng.randint(-2, 2)
        return SL2(a, (a * d - 1) // c, c, d)


# ---------------------------------------------------------------------------
# Bridge to the general smoothing machinery


@dataclass
class BridgeReport:
    g: SL2
    N: int
    family: tuple | None
    p2n: Fraction
    b: int | None
    D: int
    exact_ok: bool | None
    residual: float | None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.exact_ok is not False and (self.residual is None or self.residual < 1e-8)


def bridge_family(g: SL2, N: int) -> FormFamily:
    """a_1 = [c/N, d], a_2 = [0, 1], both in Lambda_N.

    With x = (-1/N, tau), w = z and v = 0 the smoothed G of a_2 is
    theta^(N)(z, tau) and that of a_1 is theta^(N) at g(z, tau).
    """
    return FormFamily([[g.c // N, g.d], [0, 1]], 2)


def bridge_to_general(g: SL2, N: int, samples=None, rng: random.Random | None = None) -> BridgeReport:
    """P_2^(N)(g) = -b/D(N, 2) for the family ([c/N, d], [0, 1]), plus the
    theta^(N) transformation and the smoothed product exp(2 i pi b/D) at a few (z, tau)."""
    from .gamma_numeric import alternating_product
    if g.c % N:
        raise ValueError(f"{g} is not in Gamma_0({N})")
    D = denominator_bound(N, 2)
    P = p2_N(g, N)
    rng = rng or random.Random(0)
    if samples is None:
        samples = []
        while len(samples) < 3:
            tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5))
            z = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.05, 0.3) * tau.imag)
            if abs(g.c * tau + g.d) > 0.3:
                samples.append((z, tau))
    target = cmath.exp(2j * math.pi * float(P))
    res = 0.0
    for z, tau in samples:
        lhs = theta_N(*g.act(z, tau), N)
        rhs = theta_N(z, tau, N) * target
        res = max(res, abs(lhs - rhs) / max(1.0, abs(rhs)))
    if g.c == 0:
        # a_2 = +-a_1: dependent (d = 1) or not well placed (d = -1)
        return BridgeReport(g, N, None, P, None, D, None, res,
                            "c = 0: branch value checked through theta^(N) only")
    fam = bridge_family(g, N)
    if not is_good_lattice(fam, N):
        return BridgeReport(g, N, fam.forms, P, None, D, None, res, "L' not good: skipped")
    sv = smoothed_bn_dedekind(fam, [0, 0], N)
    for z, tau in samples:
        alt = alternating_product(fam, [0, 0], z, [-1 / N, tau], N)
        res = max(res, abs(alt - cmath.exp(2j * math.pi * sv.b / D)))
    return BridgeReport(g, N, fam.forms, P, sv.b, D, P == -Fraction(sv.b, D), res)
