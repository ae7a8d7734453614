"""Seeded instance generators.

Every instance is checked against its profile's exact predicate before it is
returned, so callers never see a family that does not qualify.
"""

from __future__ import annotations

import random
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .exact_core import fmt_q, int_det, is_primitive, primitive_part, q, rank
from .forms_geometry import (
    FormFamily,
    dual_basis_full,
    is_well_placed,
    standard_relation,
)
from .smoothing import in_lambda_N, is_good_lattice

PROFILES = ("full-rank-good", "rank-deficient-well-placed",
            "barycenter-counterexample", "cocycle-generic")


class GenerationTimeout(RuntimeError):
    pass


@dataclass
class Instance:
    n: int
    forms: list
    v: list
    N: int | None = None
    seed: int | None = None
    tol: float | None = None
    w: list = field(default_factory=list)
    x: list = field(default_factory=list)

    @property
    def family(self) -> FormFamily:
        return FormFamily(self.forms, self.n)

    def to_json(self) -> dict:
        d = {"n": self.n, "forms": [list(a) for a in self.forms],
             "v": [fmt_q(t) for t in self.v]}
        if self.N is not None:
            d["N"] = self.N
        if self.seed is not None:
            d["seed"] = self.seed
        if self.tol is not None:
            d["tolerance"] = self.tol
        if self.w:
            d["w"] = [_cplx_out(t) for t in self.w]
        if self.x:
            d["x"] = [[_cplx_out(t) for t in xs] for xs in self.x]
        return d

    @staticmethod
    def from_json(d: dict) -> Instance:
        forms = [[int(t) for t in a] for a in d["forms"]]
        n = int(d.get("n", len(forms[0])))
        return Instance(n, forms, [q(t) for t in d.get("v", [0] * n)], d.get("N"),
                        d.get("seed"), d.get("tolerance"),
                        [_cplx_in(t) for t in d.get("w", [])],
                        [[_cplx_in(t) for t in xs] for xs in d.get("x", [])])


def _cplx_out(z) -> dict:
    z = complex(z)
    return {"re": repr(z.real), "im": repr(z.imag)}


def _cplx_in(d) -> complex:
    if isinstance(d, dict):
        return complex(float(d["re"]), float(d["im"]))
    return complex(d)


def _random_form(rng: random.Random, n: int, bound: int) -> list[int]:
    while True:
        a = [rng.randint(-bound, bound) for _ in range(n)]
        if any(a):
            return primitive_part(a)[0]


def _random_v(rng: random.Random, n: int) -> list[Fraction]:
    return [Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3, 4, 6])) for _ in range(n)]


def full_rank_good(rng: random.Random, n: int, N: int, bound: int = 2,
                   max_det: int = 40, max_index: int = 200) -> FormFamily:
    """Good family; [L:M] <= max_index keeps the exact sums small."""
    for _ in range(100_000):
        forms = [_random_form(rng, n, bound) for _ in range(n)]
        if not all(in_lambda_N(a, N) for a in forms):
            continue
        fam = FormFamily(forms, n)
        if fam.rank != n:
            continue
        if abs(int_det(forms)) > max_det:
            continue
        if is_good_lattice(fam, N):
            dual = dual_basis_full(fam)
            if prod(dual.s) // abs(int_det(forms)) <= max_index:
                return fam
    raise GenerationTimeout("no good full-rank family found")


def rank_deficient(rng: random.Random, n: int, bound: int = 2, well_placed: bool = True,
                   N: int | None = None) -> FormFamily:
    """n forms of rank n-1; the last is a combination of the first n-1."""
    for _ in range(100_000):
        base = [_random_form(rng, n, bound) for _ in range(n - 1)]
        coeffs = [rng.randint(-2, 2) for _ in range(n - 1)]
        comb = [sum(c * a[i] for c, a in zip(coeffs, base)) for i in range(n)]
        if not any(comb):
            continue
        forms = base + [primitive_part(comb)[0]]
        rng.shuffle(forms)
        if N is not None and not all(in_lambda_N(a, N) for a in forms):
            continue
        fam = FormFamily(forms, n)
        if fam.rank != n - 1:
            continue
        if is_well_placed(fam) == well_placed:
            return fam
    raise GenerationTimeout("no rank n-1 family found")


def barycenter_family(rng: random.Random, n: int, bound: int = 2) -> FormFamily:
    """a_1 = -a_2 with a_2, a_3, .., a_n independent (k^- = 0)."""
    for _ in range(100_000):
        rest = [_random_form(rng, n, bound) for _ in range(n - 1)]
        fam = FormFamily([[-t for t in rest[0]]] + rest, n)
        if fam.rank == n - 1 and not is_well_placed(fam):
            return fam
    raise GenerationTimeout("no barycenter family found")


def cocycle_generic(rng: random.Random, n: int, bound: int = 2) -> FormFamily:
    """n+1 forms, any n of them independent."""
    for _ in range(100_000):
        forms = [_random_form(rng, n, bound) for _ in range(n + 1)]
        if all(rank(forms[:j] + forms[j + 1:]) == n for j in range(n + 1)):
            return FormFamily(forms, n)
    raise GenerationTimeout("no generic family found")


def fuzz_instances(seed: int, count: int, profile: str, ns=(2, 3, 4),
                   Ns=(2, 3, 4, 5, 6)) -> Iterator[Instance]:
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    rng = random.Random(seed)
    for i in range(count):
        n = rng.choice(ns)
        N = None
        if profile == "full-rank-good":
            N = rng.choice(Ns)
            fam = full_rank_good(rng, n, N)
            assert is_good_lattice(fam, N)
        elif profile == "rank-deficient-well-placed":
            n = max(n, 2)
            fam = rank_deficient(rng, n)
            assert fam.rank == n - 1 and standard_relation(fam).k_minus > 0
        elif profile == "barycenter-counterexample":
            fam = barycenter_family(rng, n)
            assert standard_relation(fam).k_minus == 0
        else:
            fam = cocycle_generic(rng, n)
        assert all(is_primitive(a) for a in fam)
        yield Instance(n, [list(a) for a in fam.forms], _random_v(rng, n), N, seed)


def rational_points(fam: FormFamily, rng: random.Random, count: int,
                    N: int | None = None) -> list:
    """Random rational (w, x) away from the poles x(alpha_j) = 0 of L (and L')."""
    from .smoothing import sublattice_coordinates
    fams = [fam]
    if N is not None:
        fams.append(sublattice_coordinates(fam, [0] * fam.n, [0] * fam.n, N)[0])
    alphas = [(f is not fam, al) for f in fams for al in dual_basis_full(f).alphas]
    out = []
    while len(out) < count:
        w = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        x = [Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(fam.n)]
        xs = [N * x[0]] + x[1:] if N is not None else x
        if all(sum(c * a for c, a in zip(xs if sub else x, al)) != 0 for sub, al in alphas):
            out.append((w, x))
    return out
