"""The nine acceptance suites, shared by `gcl verify all` and the test suite.

Each suite returns a SuiteResult whose `line()` is the one-line pass/fail
summary; `details` keeps the worst residuals and any failing instance.
"""

from __future__ import annotations

import math
import random
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

from .bernoulli import (
    bn_value,
    cocycle_bad_position,
    cocycle_sum,
    compositions,
    distribution_check,
)
from .classical_dedekind import bridge_to_general, phi_DR, random_sl2
from .cone_checker import (
    build_sign_table,
    check_sign_lemma,
    check_triple_and_coverage,
    cone_is_disjoint_union,
    counterexample_when_barycenter,
    verify_f_vanishing,
)
from .cyclotomic import cd_lemma_check, smoothed_bn_trace
from .exact_core import inverse, q
from .forms_geometry import (
    FormFamily,
    dual_basis_full,
    representatives_L_mod_M,
    unimodular_matrices,
)
from .fuzz import (
    GenerationTimeout,
    cocycle_generic,
    full_rank_good,
    fuzz_instances,
    rank_deficient,
    rational_points,
)
from .gamma_numeric import (
    InadmissibleX,
    admissible_x,
    barycenter_residual,
    geometric_G_cone,
    smoothed_G,
    smoothing_families,
    verify_main,
    verify_modular,
    verify_rank_deficient,
)
from .smoothing import (
    denominator_bound,
    dim_bound,
    smoothed_bn_dedekind,
    smoothed_bn_direct_points,
    sublattice_coordinates,
    y_coefficient,
)

COMPLEX_TOL = 1e-8
TAIL_TARGET = 1e-12

REFERENCE_FORMS = [[2, -1], [-1, 1]]
# rank 3 family in dimension 4 whose sign table is worked out by hand
EXAMPLE_FORMS = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 1, 1, 0]]
EXAMPLE_X = [2j, 3j, 5j, -1]
# columns j = 2, 3, 4 of the table, rows k = 1..4 (0 on the diagonal)
EXAMPLE_TABLE = {2: (1, 0, -1, 1), 3: (1, -1, 0, 1), 4: (1, 1, -1, 0)}


@dataclass
class SuiteResult:
    number: int
    title: str
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.title} -- {self.summary} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title,
                "status": "pass" if self.passed else "fail",
                "summary": self.summary, "details": self.details,
                "seconds": round(self.seconds, 2)}


def _timed(fn: Callable[..., SuiteResult]):
    def run(*args, **kwargs) -> SuiteResult:
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _small_complex(rng: random.Random) -> complex:
    return complex(rng.gauss(0, 0.3), rng.gauss(0, 0.1))


def _random_v(rng: random.Random, n: int) -> list[Fraction]:
    return [Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3, 4])) for _ in range(n)]


# ---------------------------------------------------------------------------


@_timed
def triple_agreement(seed: int = 0, count: int = 200, points: int = 5) -> SuiteResult:
    """Direct, Dedekind-sum and trace formulas agree; D(N, n) value is an integer."""
    rng = random.Random(seed)
    fam = FormFamily(REFERENCE_FORMS)
    ref = smoothed_bn_dedekind(fam, [0, 0], 2)
    ref_ok = (ref.value, ref.b, ref.D) == (Fraction(1, 4), 1, 4)
    bad = []
    # (N, n) -> denominators seen; only divisibility of D(N, n) is asserted
    seen: dict = {}
    for inst in fuzz_instances(seed, count, "full-rank-good"):
        fam, N, v = inst.family, inst.N, inst.v
        sv = smoothed_bn_dedekind(fam, v, N)
        tr = smoothed_bn_trace(fam, v, N).value
        direct = set(smoothed_bn_direct_points(fam, v, rational_points(fam, rng, points, N), N))
        integral = (sv.value * denominator_bound(N, fam.n)).denominator == 1
        seen.setdefault(f"N={N} n={fam.n} D={sv.D}", set()).add(sv.value.denominator)
        if direct != {sv.value} or tr != sv.value or not integral:
            bad.append({"instance": inst.to_json(), "dedekind": str(sv.value), "trace": str(tr),
                        "direct": sorted(map(str, direct))})
    passed = ref_ok and not bad
    return SuiteResult(1, "triple-formula agreement", passed,
                       f"{count} instances, {len(bad)} disagreements, reference 1/4 b=1 D=4 "
                       f"{'ok' if ref_ok else 'WRONG'}",
                       {"failures": bad[:5],
                        "observed_denominators": {k: sorted(v) for k, v in sorted(seen.items())}})


@_timed
def modular_full_rank(seed: int = 0, count: int = 30) -> SuiteResult:
    """prod G^{(-1)^{j+1}} = exp(2 i pi B) with certified tails."""
    rng = random.Random(seed)
    worst, worst_tail, done, bad = 0.0, 0.0, 0, []
    while done < count:
        n = rng.choice((2, 3))
        forms = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if any(math.gcd(*a) != 1 for a in forms):
            continue
        fam = FormFamily(forms, n)
        if fam.rank != n:
            continue
        subs = [fam.omit(j) for j in range(n)]
        try:
            x = admissible_x(subs, rng)
        except InadmissibleX:
            continue
        v, w = _random_v(rng, n), _small_complex(rng)
        rep = verify_modular(fam, v, w, x)
        tail = max(geometric_G_cone(s, v, w, x, return_tail=True)[1] for s in subs)
        worst, worst_tail = max(worst, rep.residual), max(worst_tail, tail)
        if not rep.ok or tail >= TAIL_TARGET:
            bad.append({"forms": forms, "residual": rep.residual, "tail": tail})
        done += 1
    return SuiteResult(2, "modular identity, full rank", not bad,
                       f"{count} instances, max residual {worst:.2e}, max tail {worst_tail:.2e}",
                       {"failures": bad[:5]})


@_timed
def rank_deficient_identity(seed: int = 0, numeric_count: int = 30,
                            exact_count: int = 100) -> SuiteResult:
    """Alternating product 1 for well-placed rank n-1 families; f^1 = f^2 = 0."""
    rng = random.Random(seed)
    worst, bad = 0.0, []
    fams = [FormFamily(EXAMPLE_FORMS)]
    while len(fams) < numeric_count:
        fams.append(rank_deficient(rng, rng.choice((2, 3, 4))))
    for fam in fams:
        try:
            x = admissible_x([fam.omit(j) for j in range(fam.n)], rng)
        except InadmissibleX:
            x = admissible_x([fam.omit(j) for j in range(fam.n)], rng, threshold=0.02)
        rep = verify_rank_deficient(fam, _random_v(rng, fam.n), _small_complex(rng), x)
        worst = max(worst, rep.residual)
        if not rep.ok:
            bad.append({"forms": [list(a) for a in fam.forms], "residual": rep.residual})
    exact_done, exact_bad, skipped = 0, [], 0
    batch_seed = seed
    while exact_done < exact_count:
        for inst in fuzz_instances(batch_seed, exact_count - exact_done,
                                   "rank-deficient-well-placed", ns=(3, 4, 5)):
            fam = inst.family
            try:
                x = admissible_x([fam.omit(j) for j in range(fam.n)], rng, gaussian_rational=True)
            except InadmissibleX:
                skipped += 1
                continue
            if not verify_f_vanishing(fam, x).ok:
                exact_bad.append(fam.forms)
            exact_done += 1
        batch_seed += 1
    passed = not bad and not exact_bad
    return SuiteResult(3, "rank n-1 well-placed identity", passed,
                       f"{len(fams)} numeric (max residual {worst:.2e}), {exact_done} exact "
                       f"f-vanishing, {len(exact_bad)} failures, {skipped} redrawn",
                       {"failures": bad[:5], "exact_failures": exact_bad[:5]})


@_timed
def barycenter_counterexample(seed: int = 0, count: int = 30, exact_count: int = 30) -> SuiteResult:
    """a_1 = -a_2: the product equals the G_{n-3} / exponential closed form, not 1."""
    rng = random.Random(seed)
    worst, away, bad = 0.0, math.inf, []
    for i in range(count):
        n = (2, 3, 4)[i % 3]
        while True:
            x = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]
            ratios = [x[k] / x[0] for k in range(1, n)]
            if all(abs(r.imag) > 0.1 for r in ratios) and all(r.imag > 0.1 for r in ratios[1:]):
                break
        v = [Fraction(rng.randint(-3, 3), 3), 0] + [Fraction(rng.randint(0, 3), 4) for _ in range(n - 2)]
        g = unimodular_matrices(n, rng, steps=6, bound=1) if i % 2 else None
        alt, pred = barycenter_residual(n, v, _small_complex(rng), x, g)
        res = abs(alt - pred) / max(1.0, abs(pred))
        worst, away = max(worst, res), min(away, abs(alt - 1))
        if res >= COMPLEX_TOL:
            bad.append({"n": n, "v": [str(t) for t in v], "residual": res, "g": g})
    witnesses = 0
    for inst in fuzz_instances(seed, exact_count, "barycenter-counterexample", ns=(2, 3, 4, 5)):
        fam = inst.family
        while True:
            try:
                x = admissible_x([fam.omit(j) for j in range(fam.n)], rng, gaussian_rational=True)
                break
            except InadmissibleX:
                continue
        witnesses += counterexample_when_barycenter(fam, x).pattern is not None
    passed = not bad and witnesses == exact_count
    return SuiteResult(4, "barycenter counterexample", passed,
                       f"{count} closed-form checks (max residual {worst:.2e}, min |product - 1| "
                       f"{away:.2e}), {witnesses}/{exact_count} nonzero-f witnesses",
                       {"failures": bad[:5]})


def _main_samples(fam: FormFamily, N: int, rng: random.Random, k: int = 3) -> list | None:
    fams = smoothing_families(fam, N)
    for threshold in (0.1, 0.03):
        try:
            return [(_small_complex(rng), admissible_x(fams, rng, threshold)) for _ in range(k)]
        except InadmissibleX:
            pass
    return None


@_timed
def main_theorem(seed: int = 0, count: int = 30, samples: int = 3) -> SuiteResult:
    """Smoothed product = exp(2 i pi b/D), constant in (w, x), D-th power 1."""
    rng = random.Random(seed)
    cases = [(FormFamily(REFERENCE_FORMS), [0, 0], 2)]
    worst = [0.0, 0.0, 0.0]
    bad, done, redrawn, batch_seed = [], 0, 0, seed
    while done < count:
        for fam, v, N in cases:
            pts = _main_samples(fam, N, rng, samples)
            if pts is None:
                redrawn += 1
                continue
            rep = verify_main(fam, v, N, pts)
            done += 1
            worst = [max(a, b) for a, b in zip(worst, (rep.residual, rep.spread, rep.power_residual))]
            if not rep.ok:
                bad.append({"forms": [list(a) for a in fam.forms], "N": N,
                            "v": [str(t) for t in v], "b": rep.b, "D": rep.D,
                            "residual": rep.residual})
        cases = [(i.family, i.v, i.N) for i in
                 fuzz_instances(batch_seed, count - done, "full-rank-good", ns=(2, 3))]
        batch_seed += 1
    return SuiteResult(5, "main theorem", not bad,
                       f"{done} instances x {samples} samples, max residual {worst[0]:.2e}, "
                       f"spread {worst[1]:.2e}, D-th power {worst[2]:.2e}, {redrawn} redrawn",
                       {"failures": bad[:5]})


@_timed
def sign_table_suite(seed: int = 0, count: int = 100) -> SuiteResult:
    """Sign lemma, triple emptiness, I(j) nonempty, coverage; the worked table."""
    rng = random.Random(seed)
    fam = FormFamily(EXAMPLE_FORMS)
    tab = build_sign_table(fam, EXAMPLE_X)
    table_ok = all(tuple(0 if k == j else tab.entry(j, k) for k in range(1, 5)) == col
                   for j, col in EXAMPLE_TABLE.items()) and list(tab.columns) == [2, 3, 4]
    union_ok = cone_is_disjoint_union(tab, 2, [3, 4])
    ex_ok = check_sign_lemma(tab).ok and check_triple_and_coverage(tab).ok
    done, bad, skipped, batch_seed = 0, [], 0, seed
    while done < count:
        for inst in fuzz_instances(batch_seed, count - done, "rank-deficient-well-placed",
                                   ns=(3, 4, 5)):
            f = inst.family
            try:
                x = admissible_x([f.omit(j) for j in range(f.n)], rng, gaussian_rational=True)
            except InadmissibleX:
                skipped += 1
                continue
            t = build_sign_table(f, x)
            lem, cov = check_sign_lemma(t), check_triple_and_coverage(t)
            if not (lem.ok and cov.ok):
                bad.append({"forms": [list(a) for a in f.forms], "lemma": str(lem),
                            "cones": {k: v for k, v in vars(cov).items() if k != "details"}})
            done += 1
        batch_seed += 1
    passed = table_ok and union_ok and ex_ok and not bad
    return SuiteResult(6, "sign-table lemma suite", passed,
                       f"worked table {'reproduced' if table_ok else 'DIFFERS'}, "
                       f"C1_2 = C1_3 u C1_4 {'holds' if union_ok else 'FAILS'}, {done} fuzz "
                       f"instances, {len(bad)} failures, {skipped} redrawn",
                       {"table": tab.render(), "failures": bad[:5]})


@_timed
def exact_identities(seed: int = 0, dist_samples: int = 100, cd_samples: int = 50,
                     cocycle_count: int = 100) -> SuiteResult:
    """Distribution relation, CD lemma, Y vanishing, Bernoulli cocycle sum."""
    rng = random.Random(seed)
    xs = [Fraction(rng.randint(-200, 200), rng.randint(1, 60)) for _ in range(dist_samples)]
    dist_bad = [(m, N, str(x)) for m in range(1, 6) for N in range(1, 9) for x in xs
                if not distribution_check(m, N, x)]
    cd_x = [Fraction(rng.randint(-100, 100), rng.randint(1, 30)) for _ in range(cd_samples)]
    cd_x += [Fraction(k, 12) for k in range(-24, 25)]
    cd_bad = [(N, y, str(x)) for N in range(2, 13) for y in range(1, N) for x in cd_x
              if not cd_lemma_check(N, x, y)]
    y_bad, y_checked = [], 0
    for n in (2, 3):
        for N in (2, 3, 4):
            for _ in range(4):
                fam = full_rank_good(rng, n, N, max_index=40)
                v = _random_v(rng, n)
                dual = dual_basis_full(fam)
                for delta in representatives_L_mod_M(fam, dual, v):
                    for m in range(n + 1):
                        for ks in compositions(n - m, n):
                            if 0 in ks:
                                y_checked += 1
                                if y_coefficient(ks, fam, v, delta, N, dual) != 0:
                                    y_bad.append((fam.forms, N, ks))
    co_bad, co_done, bad_pos = [], 0, 0
    while co_done < cocycle_count:
        n = (2, 3)[co_done % 2]
        fam = cocycle_generic(rng, n)
        # half the points on L, where the walls all pass through v
        v = _random_v(rng, n) if rng.random() < 0.5 else [Fraction(rng.randint(-4, 4)) for _ in range(n)]
        w = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        x = [Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(n)]
        try:
            s = cocycle_sum(fam.forms, v, w, x)
        except ZeroDivisionError:
            continue
        if cocycle_bad_position(fam.forms, v):
            bad_pos += 1
            if s.denominator != 1:
                co_bad.append((fam.forms, str(s), "bad position, not an integer"))
            continue
        co_done += 1
        if s != 0:
            co_bad.append((fam.forms, str(s)))
    passed = not (dist_bad or cd_bad or y_bad or co_bad)
    return SuiteResult(7, "exact identity suite", passed,
                       f"distribution {len(dist_bad)} bad / {5 * 8 * len(xs)}, CD {len(cd_bad)} bad, "
                       f"Y {len(y_bad)} bad / {y_checked}, cocycle {len(co_bad)} bad / {co_done} "
                       f"({bad_pos} bad-position draws set aside)",
                       {"distribution": dist_bad[:5], "cd": cd_bad[:5], "y": y_bad[:5],
                        "cocycle": co_bad[:5]})


@_timed
def classical_bridge(seed: int = 0, count: int = 50, phi_count: int = 10_000) -> SuiteResult:
    """P_2^(N) = -b/D(N, 2), theta^(N) transformation, phi_DR integrality, D(2) = 12."""
    rng = random.Random(seed)
    bad, worst, exact, branch = [], 0.0, 0, 0
    for N in (2, 3, 5):
        for _ in range(count):
            g = random_sl2(rng, N)
            rep = bridge_to_general(g, N, rng=rng)
            worst = max(worst, rep.residual)
            integral = (dim_bound(2) * rep.p2n).denominator == 1
            if rep.exact_ok is None:
                branch += 1
            else:
                exact += 1
            if not rep.ok or not integral or rep.exact_ok is False:
                bad.append({"g": [g.a, g.b, g.c, g.d], "N": N, "P": str(rep.p2n), "b": rep.b,
                            "residual": rep.residual})
    for _ in range(phi_count):
        phi_DR(random_sl2(rng, 1, bound=20))  # raises if not an integer
    passed = not bad and dim_bound(2) == 12
    return SuiteResult(8, "classical bridge", passed,
                       f"{3 * count} elements ({exact} exact, {branch} c = 0 branch), max theta^(N) "
                       f"residual {worst:.2e}, phi_DR integral on {phi_count}, D(2) = {dim_bound(2)}",
                       {"failures": bad[:5]})


def _transport(fam: FormFamily, v, x, g):
    g_inv = [[int(t) for t in row] for row in inverse(g)]
    n = fam.n
    gv = [sum(g[i][k] * q(v[k]) for k in range(n)) for i in range(n)]
    gx = [sum(x[i] * g_inv[i][k] for i in range(n)) for k in range(n)]
    return fam.act(g_inv), gv, gx


@_timed
def equivariance(seed: int = 0, count: int = 20, numeric_count: int = 10) -> SuiteResult:
    """B under SL_n(Z) exactly; G and smoothed G under Gamma_0(N, n) numerically."""
    rng = random.Random(seed)
    exact_bad = 0
    done = 0
    while done < count:
        n = rng.choice((2, 3))
        forms = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if any(math.gcd(*a) != 1 for a in forms) or FormFamily(forms, n).rank != n:
            continue
        fam = FormFamily(forms, n)
        v = _random_v(rng, n)
        w = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        x = [Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(n)]
        g = unimodular_matrices(n, rng)
        f2, v2, x2 = _transport(fam, v, x, g)
        try:
            exact_bad += bn_value(fam, v, w, x) != bn_value(f2, v2, w, x2)
        except ZeroDivisionError:
            continue
        done += 1
    worst, num_done = 0.0, 0
    while num_done < numeric_count:
        n = rng.choice((2, 3))
        N = rng.choice((2, 3))
        try:
            sub = full_rank_good(rng, n, N).omit(rng.randrange(n))
        except GenerationTimeout:
            continue
        g = unimodular_matrices(n, rng, steps=4, bound=1, congruence_N=N)
        v = _random_v(rng, n)
        w = _small_complex(rng)
        f0 = FormFamily(sub.forms, n)
        try:
            # admissibility transports with the family, so checking f0 suffices
            x = admissible_x([f0, _sub_L(f0, N)], rng)
        except InadmissibleX:
            continue
        f2, v2, x2 = _transport(f0, v, x, g)
        a = geometric_G_cone(f0, v, w, x)
        b = geometric_G_cone(f2, v2, w, x2)
        c = smoothed_G(f0, v, w, x, N)
        d = smoothed_G(f2, v2, w, x2, N)
        worst = max(worst, abs(a - b) / max(1, abs(a)), abs(c - d) / max(1, abs(c)))
        num_done += 1
    passed = exact_bad == 0 and worst < COMPLEX_TOL
    return SuiteResult(9, "equivariance", passed,
                       f"B exact on {done} (bad {exact_bad}), G / smoothed G on {num_done} "
                       f"Gamma_0(N, n) elements, max residual {worst:.2e}", {})


def _sub_L(fam: FormFamily, N: int) -> FormFamily:
    return sublattice_coordinates(fam, [0] * fam.n, [0] * fam.n, N)[0]


SUITES = {
    1: triple_agreement,
    2: modular_full_rank,
    3: rank_deficient_identity,
    4: barycenter_counterexample,
    5: main_theorem,
    6: sign_table_suite,
    7: exact_identities,
    8: classical_bridge,
    9: equivariance,
}


def run_all(seed: int = 0, only: list[int] | None = None) -> list[SuiteResult]:
    return [SUITES[k](seed) for k in sorted(SUITES) if only is None or k in only]
