"""Command-line front end.

Every subcommand builds a Report: a list of named checks with a status
(pass / fail / skipped / info) and a payload.  `--json` prints it verbatim,
otherwise a table.  The exit status is 0 iff no check failed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import acceptance
from .bernoulli import bn_series_oracle, bn_value
from .classical_dedekind import (
    SL2,
    bridge_to_general,
    dedekind_sum,
    p2_N,
    p2_N_from_phi,
    phi_DR,
)
from .cohomology import (
    GroupElem,
    check_cocycle_phi,
    coboundary_psi,
    condition_26_witness,
    goodness_report,
    resolve,
)
from .cone_checker import (
    build_sign_table,
    check_sign_lemma,
    check_triple_and_coverage,
    counterexample_when_barycenter,
    verify_f_vanishing,
)
from .cyclotomic import smoothed_bn_trace
from .exact_core import fmt_q, q
from .forms_geometry import (
    check_dual,
    dual_basis_full,
    dual_family_deficient,
    gamma_vector,
    is_well_placed,
    standard_relation,
)
from .fuzz import PROFILES, GenerationTimeout, Instance, fuzz_instances, rational_points
from .gamma_numeric import (
    InadmissibleX,
    admissible_x,
    smoothing_families,
    verify_main,
    verify_modular,
    verify_rank_deficient,
)
from .smoothing import (
    NotGood,
    in_lambda_N,
    is_good_lattice,
    smoothed_bn_dedekind,
    smoothed_bn_direct_points,
)

DEFAULT_TOL = 1e-8


@dataclass
class Check:
    name: str
    status: str
    value: Any = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = {"name": self.name, "status": self.status}
        if self.value is not None:
            d["value"] = self.value
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)

    def add(self, name: str, status: str, value: Any = None, **detail) -> Report:
        self.checks.append(Check(name, status, value, detail))
        return self

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_json(self) -> dict:
        return {"command": self.command, "ok": self.ok,
                "checks": [c.to_json() for c in self.checks]}

    def render(self) -> str:
        width = max((len(c.name) for c in self.checks), default=4)
        lines = [f"{self.command}"]
        for c in self.checks:
            val = "" if c.value is None else _short(c.value)
            lines.append(f"  {c.name:<{width}}  {c.status:<7}  {val}")
            for k, v in c.detail.items():
                text = v if isinstance(v, str) else json.dumps(v)
                if "\n" in text:
                    lines.append(f"  {'':<{width}}  {k}:")
                    lines += [f"  {'':<{width}}    {t}" for t in text.splitlines()]
                else:
                    lines.append(f"  {'':<{width}}  {k}: {text}")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)


def _short(v) -> str:
    return v if isinstance(v, str) else json.dumps(v)


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# ---------------------------------------------------------------------------
# Input parsing


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise argparse.ArgumentTypeError(f"not valid JSON: {e}") from None


def _complex(t) -> complex:
    if isinstance(t, dict):
        return complex(float(t["re"]), float(t["im"]))
    if isinstance(t, (int, float)):
        return complex(t)
    return complex(str(t).replace(" ", ""))


def _scalar(t, exact: bool):
    """Rational if possible (and wanted), complex otherwise."""
    if exact and not isinstance(t, dict):
        try:
            return q(str(t))
        except (ValueError, ZeroDivisionError):
            pass
    return _complex(t)


def load_instance(args) -> Instance:
    if getattr(args, "instance", None):
        with open(args.instance) as fh:
            inst = Instance.from_json(json.load(fh))
    elif getattr(args, "forms", None) is not None:
        forms = args.forms
        inst = Instance(len(forms[0]), [[int(t) for t in a] for a in forms], [Fraction(0)] * len(forms[0]))
    else:
        raise ValueError("give --instance FILE or --forms JSON")
    if getattr(args, "v", None) is not None:
        inst.v = [q(str(t)) for t in args.v]
    if getattr(args, "N", None) is not None:
        inst.N = args.N
    return inst


def _point(args, n: int, exact: bool = True):
    w = _scalar(args.w, exact) if args.w is not None else None
    x = [_scalar(t, exact) for t in args.x] if args.x is not None else None
    if x is not None and len(x) != n:
        raise ValueError(f"x needs {n} values")
    return w, x


# ---------------------------------------------------------------------------
# Subcommands


def cmd_dual_basis(args) -> Report:
    inst = load_instance(args)
    fam = inst.family
    rep = Report("dual-basis")
    if len(fam) == fam.n and fam.rank == fam.n:
        dual = dual_basis_full(fam)
        rep.add("dual basis", _status(check_dual(fam, dual)),
                {"alpha": [list(a) for a in dual.alphas], "s": list(dual.s)})
    elif len(fam) == fam.n - 1 and fam.rank == fam.n - 1:
        gam = gamma_vector(fam)
        dual = dual_family_deficient(fam, gam)
        rep.add("gamma", "info", {"gamma": list(gam.gamma), "s": gam.s})
        rep.add("dual family", _status(check_dual(fam, dual)),
                {"alpha": [list(a) for a in dual.alphas], "s": list(dual.s)})
    else:
        rep.add("dual basis", "skipped", reason="needs n independent forms or n-1 independent forms")
    return rep


def cmd_relation(args) -> Report:
    fam = load_instance(args).family
    rep = Report("relation")
    if fam.rank != len(fam) - 1:
        return rep.add("standard relation", "skipped", reason=f"rank {fam.rank} is not m-1")
    rel = standard_relation(fam)
    return rep.add("standard relation", "info",
                   {"lambda": [fmt_q(t) for t in rel.lambdas], "l": rel.l + 1,
                    "m": None if rel.m_index is None else rel.m_index + 1,
                    "k_plus": rel.k_plus, "k_minus": rel.k_minus})


def cmd_well_placed(args) -> Report:
    fam = load_instance(args).family
    info = {"rank": fam.rank, "n": fam.n}
    if fam.rank == fam.n - 1:
        info["k_minus"] = standard_relation(fam).k_minus
    return Report("well-placed").add("well placed", "info", is_well_placed(fam), **info)


def cmd_bernoulli(args) -> Report:
    inst = load_instance(args)
    fam = inst.family
    w, x = _point(args, fam.n)
    rng = random.Random(args.seed)
    if w is None or x is None:
        w, x = rational_points(fam, rng, 1)[0]
    rep = Report("bernoulli")
    val = bn_value(fam, inst.v, w, x)
    if isinstance(val, Fraction) and all(isinstance(t, Fraction) for t in x):
        oracle = bn_series_oracle(fam, inst.v, w, x)
        rep.add("B(v)(w, x)", _status(val == oracle), fmt_q(val), series_oracle=fmt_q(oracle),
                w=fmt_q(w), x=[fmt_q(t) for t in x])
    else:
        rep.add("B(v)(w, x)", "info", [val.real, val.imag])
    return rep


def cmd_smoothed_bernoulli(args) -> Report:
    inst = load_instance(args)
    fam, N = inst.family, inst.N
    if N is None:
        raise ValueError("--N is required")
    rep = Report("smoothed-bernoulli")
    good = is_good_lattice(fam, N)
    rng = random.Random(args.seed)
    pts = rational_points(fam, rng, args.points, N)
    direct = smoothed_bn_direct_points(fam, inst.v, pts, N)
    if not good:
        rep.add("value", "info", {"values": sorted({fmt_q(t) for t in direct}), "good": False})
        return rep.add("constancy", "skipped", reason="L' is not good for these forms")
    sv = smoothed_bn_dedekind(fam, inst.v, N)
    rep.add("value", "info", {"value": fmt_q(sv.value), "b": sv.b, "D": sv.D, "good": True})
    rep.add("direct formula constant", _status(set(direct) == {sv.value}),
            sorted({fmt_q(t) for t in direct}))
    rep.add("D(N, n) value integral", _status((sv.value * sv.D).denominator == 1), sv.b)
    return rep


def cmd_trace_formula(args) -> Report:
    inst = load_instance(args)
    fam, N = inst.family, inst.N
    if N is None:
        raise ValueError("--N is required")
    rep = Report("trace-formula")
    try:
        tr = smoothed_bn_trace(fam, inst.v, N)
        sv = smoothed_bn_dedekind(fam, inst.v, N)
    except NotGood as e:
        return rep.add("trace formula", "skipped", reason=str(e))
    rep.add("trace value", _status(tr.value == sv.value), fmt_q(tr.value),
            per_divisor={str(d): fmt_q(t) for d, t in tr.per_divisor.items()},
            dedekind=fmt_q(sv.value))
    return rep


def cmd_dedekind(args) -> Report:
    s = dedekind_sum(args.c, args.d)
    s2 = dedekind_sum(args.c, args.d + args.c)
    return Report("dedekind").add("s(c, d)", _status(s == s2), fmt_q(s))


def cmd_phi_dr(args) -> Report:
    g = SL2(args.a, args.b, args.c, args.d)
    return Report("phi-dr").add("phi_DR", "pass", phi_DR(g))


def cmd_p2n(args) -> Report:
    g = SL2(args.a, args.b, args.c, args.d)
    rep = Report("p2n")
    P = p2_N(g, args.N)
    rep.add("P2^(N)", _status(P == p2_N_from_phi(g, args.N)), fmt_q(P))
    br = bridge_to_general(g, args.N, rng=random.Random(args.seed))
    detail = {"residual": br.residual, "D": br.D}
    if br.b is not None:
        detail["b"] = br.b
    if br.note:
        detail["note"] = br.note
    rep.add("bridge", _status(br.ok), "P = -b/D" if br.exact_ok else br.note or "numeric only", **detail)
    return rep


def _gauss_x(args, fam, rng):
    if args.x is not None:
        return [_complex(t) for t in args.x]
    return admissible_x([fam.omit(j) for j in range(fam.n)], rng, gaussian_rational=True)


def cmd_sign_table(args) -> Report:
    fam = load_instance(args).family
    rng = random.Random(args.seed)
    rep = Report("sign-table")
    if fam.rank != fam.n - 1 or len(fam) != fam.n:
        return rep.add("sign table", "skipped", reason="needs n forms of rank n-1")
    x = _gauss_x(args, fam, rng)
    if standard_relation(fam).k_minus == 0:
        wt = counterexample_when_barycenter(fam, x)
        return rep.add("barycenter witness", "info",
                       None if wt.pattern is None else list(wt.pattern), f1=wt.f1, f2=wt.f2)
    tab = build_sign_table(fam, x)
    lem = check_sign_lemma(tab)
    cones = check_triple_and_coverage(tab)
    fr = verify_f_vanishing(fam, x, tab)
    rep.add("table", "info", tab.to_json(), render=tab.render())
    rep.add("sign lemma", _status(lem.ok), {"rows_constant": lem.rows_constant,
                                            "transpose_rule": lem.transpose_rule,
                                            "u_ordering": lem.u_ordering})
    rep.add("cones", _status(cones.ok), {k: v for k, v in vars(cones).items() if k != "details"},
            I={str(j): v for j, v in cones.details.get("I", {}).items()})
    rep.add("f vanishing", _status(fr.ok),
            {",".join(map(str, p)): list(v) for p, v in fr.values.items()})
    return rep


def _admissible_samples(fams, rng, count):
    return [(complex(rng.gauss(0, 0.3), rng.gauss(0, 0.1)), admissible_x(fams, rng))
            for _ in range(count)]


def cmd_verify(args) -> Report:
    if args.what == "all":
        only = [int(t) for t in args.only.split(",")] if args.only else None
        rep = Report("verify all")
        for res in acceptance.run_all(args.seed, only):
            rep.add(f"criterion {res.number}", _status(res.passed), res.summary,
                    title=res.title, seconds=round(res.seconds, 1))
            if not res.passed and args.verbose:
                rep.checks[-1].detail["details"] = res.details
        return rep
    if args.what == "rank-deficient" and not (args.instance or args.forms):
        # default to the worked four-form example
        args.forms = acceptance.EXAMPLE_FORMS
    inst = load_instance(args)
    fam = inst.family
    rng = random.Random(args.seed)
    tol = args.tol
    rep = Report(f"verify {args.what}")
    try:
        if args.what == "modular":
            subs = [fam.omit(j) for j in range(len(fam))]
            for i, (w, x) in enumerate(_admissible_samples(subs, rng, args.samples)):
                r = verify_modular(fam, inst.v, w, x, tol)
                rep.add(f"sample {i}", _status(r.ok), r.residual)
        elif args.what == "rank-deficient":
            if fam.rank != fam.n - 1:
                return rep.add("rank", "skipped", reason="family does not have rank n-1")
            subs = [fam.omit(j) for j in range(len(fam))]
            well = is_well_placed(fam)
            for i, (w, x) in enumerate(_admissible_samples(subs, rng, args.samples)):
                r = verify_rank_deficient(fam, inst.v, w, x, tol)
                rep.add(f"sample {i}", _status(r.ok) if well else "info", r.residual,
                        well_placed=well)
            x = _gauss_x(args, fam, rng)
            if well:
                tab = build_sign_table(fam, x)
                rep.add("sign lemma", _status(check_sign_lemma(tab).ok))
                rep.add("cones", _status(check_triple_and_coverage(tab).ok))
                rep.add("f vanishing", _status(verify_f_vanishing(fam, x, tab).ok),
                        table=tab.render())
            else:
                wt = counterexample_when_barycenter(fam, x)
                rep.add("barycenter witness", "info", None if wt.pattern is None else list(wt.pattern))
        elif args.what == "main":
            N = inst.N
            if N is None:
                raise ValueError("--N is required")
            if not all(in_lambda_N(a, N) for a in fam):
                return rep.add("Lambda_N", "skipped", reason=f"forms must lie in Lambda_{N}")
            pts = _admissible_samples(smoothing_families(fam, N), rng, args.samples)
            r = verify_main(fam, inst.v, N, pts, tol)
            rep.add("product = exp(2 i pi b/D)", _status(r.residual < tol), r.residual,
                    smoothed_value=fmt_q(r.value), b=r.b, D=r.D)
            rep.add("constant in (w, x)", _status(r.spread < tol), r.spread)
            rep.add("D-th power is 1", _status(r.power_residual < 1e-7), r.power_residual)
    except InadmissibleX as e:
        rep.add("admissible x", "skipped", reason=str(e))
    except NotGood as e:
        rep.add("good lattice", "skipped", reason=str(e))
    return rep


def _load_matrices(path: str) -> list[GroupElem]:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data["matrices"]
    return [GroupElem(m) for m in data]


def cmd_cocycle(args) -> Report:
    a = [int(t) for t in args.base_form]
    gs = _load_matrices(args.matrices)
    n = len(a)
    N = args.N
    rng = random.Random(args.seed)
    rep = Report("cocycle")
    fam = resolve(a, gs)
    rep.add("resolved family", "info", [list(f) for f in fam.forms])
    elements = [GroupElem([[int(i == j) for j in range(n)] for i in range(n)])]
    for g in gs:
        elements.append(elements[-1] @ g)
    wit = condition_26_witness(a, elements)
    rep.add("positivity condition", "info", wit is not None,
            witness=None if wit is None else [fmt_q(t) for t in wit])
    if N is not None:
        rep.add("congruence", _status(all(g.in_congruence(N) for g in gs)),
                [g.in_congruence(N) for g in gs])
        if not all(g.in_congruence(N) for g in gs):
            return rep
    v = [q(str(t)) for t in args.v] if args.v is not None else [Fraction(0)] * n
    if len(gs) == n:
        w, x = _point(args, n)
        if w is None or x is None:
            w = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            x = [Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(n)]
        try:
            r = check_cocycle_phi(a, gs, v, w, x, N)
        except ZeroDivisionError:
            return rep.add("cocycle", "skipped", reason="x hits a pole")
        rep.add("cocycle", "skipped" if r.status == "out of tested scope" else r.status,
                None if r.value is None else fmt_q(r.value), scope=r.status)
    elif len(gs) == n - 1:
        subs = [fam.omit(j) for j in range(len(fam))]
        if N is not None:
            subs = smoothing_families(fam, N)
        try:
            x = admissible_x(subs, rng)
        except InadmissibleX as e:
            return rep.add("coboundary", "skipped", reason=str(e))
        w = complex(rng.gauss(0, 0.3), rng.gauss(0, 0.1))
        r = coboundary_psi(a, gs, v, w, x, N, args.tol)
        rep.add("coboundary", _status(r.ok) if r.well_placed else "info", r.residual,
                well_placed=r.well_placed)
        if N is not None:
            g = goodness_report(a, [gs], N)
            rep.add("L' good", "info", g.good == g.tested)
    else:
        raise ValueError(f"give n = {n} matrices (cocycle) or n-1 (coboundary)")
    return rep


def cmd_fuzz(args) -> Report:
    rep = Report("fuzz")
    lines = []
    try:
        for inst in fuzz_instances(args.seed, args.count, args.profile):
            lines.append(json.dumps(inst.to_json()))
            rep.add(f"instance {len(rep.checks)}", "info", inst.to_json())
    except GenerationTimeout as e:
        rep.add("generation", "fail", str(e))
    if args.out:
        with open(args.out, "w") as fh:
            fh.writelines(t + "\n" for t in lines)
    return rep


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gcl", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)

    fams = argparse.ArgumentParser(add_help=False)
    fams.add_argument("--instance", help="instance JSON file")
    fams.add_argument("--forms", type=_json_arg, help='forms as JSON, e.g. "[[2,-1],[-1,1]]"')
    fams.add_argument("--v", type=_json_arg, help='v as JSON list of "p/q" strings')
    fams.add_argument("--N", type=int)

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--w", help='w as "p/q" or a complex literal')
    point.add_argument("--x", type=_json_arg, help="x(e_1..e_n) as a JSON list")

    sub = p.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("dual-basis", parents=[common, fams])
    s.set_defaults(fn=cmd_dual_basis)
    s = sub.add_parser("relation", parents=[common, fams])
    s.set_defaults(fn=cmd_relation)
    s = sub.add_parser("well-placed", parents=[common, fams])
    s.set_defaults(fn=cmd_well_placed)
    s = sub.add_parser("bernoulli", parents=[common, fams, point])
    s.set_defaults(fn=cmd_bernoulli)
    s = sub.add_parser("smoothed-bernoulli", parents=[common, fams])
    s.add_argument("--points", type=int, default=5)
    s.set_defaults(fn=cmd_smoothed_bernoulli)
    s = sub.add_parser("trace-formula", parents=[common, fams])
    s.set_defaults(fn=cmd_trace_formula)
    s = sub.add_parser("dedekind", parents=[common])
    s.add_argument("c", type=int)
    s.add_argument("d", type=int)
    s.set_defaults(fn=cmd_dedekind)
    for name, fn in (("phi-dr", cmd_phi_dr), ("p2n", cmd_p2n)):
        s = sub.add_parser(name, parents=[common])
        if name == "p2n":
            s.add_argument("N", type=int)
        for k in "abcd":
            s.add_argument(k, type=int)
        s.set_defaults(fn=fn)
    s = sub.add_parser("sign-table", parents=[common, fams, point])
    s.set_defaults(fn=cmd_sign_table)
    s = sub.add_parser("verify", parents=[common, fams, point])
    s.add_argument("what", choices=["modular", "main", "rank-deficient", "all"])
    s.add_argument("--samples", type=int, default=3)
    s.add_argument("--only", help="comma-separated criterion numbers for `verify all`")
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(fn=cmd_verify)
    s = sub.add_parser("cocycle", parents=[common, point])
    s.add_argument("--base-form", type=_json_arg, required=True)
    s.add_argument("--matrices", required=True, help="JSON file: list of row-major integer matrices")
    s.add_argument("--N", type=int)
    s.add_argument("--v", type=_json_arg)
    s.set_defaults(fn=cmd_cocycle)
    s = sub.add_parser("fuzz", parents=[common])
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--profile", choices=PROFILES, default="full-rank-good")
    s.add_argument("--out", help="also write instances as JSON lines to this file")
    s.set_defaults(fn=cmd_fuzz)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = args.fn(args)
    except (ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(rep.to_json(), indent=2, default=str))
    else:
        print(rep.render())
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
