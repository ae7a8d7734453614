import random
from fractions import Fraction

import pytest

from gcl.acceptance import EXAMPLE_TABLE
from gcl.cone_checker import (
    build_sign_table,
    check_sign_lemma,
    check_triple_and_coverage,
    cone_is_disjoint_union,
    cone_system,
    counterexample_when_barycenter,
    f_values,
    pattern_of,
    realizable_patterns,
    signature,
    verify_f_vanishing,
)
from gcl.exact_core import fm_feasible
from gcl.forms_geometry import FormFamily
from gcl.fuzz import barycenter_family, fuzz_instances
from gcl.gamma_numeric import InadmissibleX, admissible_x, verify_rank_deficient


def _fuzz_tables(count, seed, ns=(3, 4, 5)):
    rng = random.Random(seed)
    for inst in fuzz_instances(seed, count, "rank-deficient-well-placed", ns=ns):
        fam = inst.family
        try:
            x = admissible_x([fam.omit(j) for j in range(fam.n)], rng, gaussian_rational=True)
        except InadmissibleX:
            continue
        yield fam, x, build_sign_table(fam, x), rng


def test_signature():
    assert signature((0, 1, 2)) == 1
    assert signature((1, 0, 2)) == -1
    assert signature((1, 2, 0)) == 1


def test_worked_table(example_family, example_x):
    tab = build_sign_table(example_family, example_x)
    assert list(tab.columns) == [2, 3, 4]
    for j, col in EXAMPLE_TABLE.items():
        assert tuple(0 if k == j else tab.entry(j, k) for k in range(1, 5)) == col
    assert tab.eps[tab.n] == 1
    assert check_sign_lemma(tab).ok
    assert check_triple_and_coverage(tab).ok


def test_worked_cones(example_family, example_x):
    tab = build_sign_table(example_family, example_x)
    assert cone_is_disjoint_union(tab, 2, [3, 4])
    assert not fm_feasible(cone_system(tab, 3) & cone_system(tab, 4))
    rep = verify_f_vanishing(example_family, example_x, tab)
    assert rep.ok


def test_render_and_json(example_family, example_x):
    tab = build_sign_table(example_family, example_x)
    lines = tab.render().splitlines()
    assert len(lines) == 5 and lines[0].split()[1:] == ["2", "3", "4"]
    js = tab.to_json()
    assert js["rows"]["1"] == {"2": "+", "3": "+", "4": "+"}


def test_two_column_case():
    # l = n-1: only two columns, which cancel
    fam = FormFamily([[1, 0, 0], [0, 1, 0], [0, 1, 0]])
    x = admissible_x([fam.omit(j) for j in range(3)], random.Random(0), gaussian_rational=True)
    tab = build_sign_table(fam, x)
    assert len(tab.columns) == 2
    assert verify_f_vanishing(fam, x).ok


def test_fuzz_tables():
    done = 0
    for fam, x, tab, _ in _fuzz_tables(30, 1):
        assert check_sign_lemma(tab).ok
        assert check_triple_and_coverage(tab).ok
        assert verify_f_vanishing(fam, x, tab).ok
        done += 1
    assert done >= 25


def test_f_agrees_with_modular_identity():
    for fam, x, tab, rng in _fuzz_tables(5, 2, ns=(3,)):
        assert verify_f_vanishing(fam, x, tab).ok
        v = [Fraction(rng.randint(-3, 3), 2) for _ in range(fam.n)]
        cx = [complex(t) for t in x]
        assert verify_rank_deficient(fam, v, 0.1 + 0.07j, cx).ok


def test_patterns_cover_random_points(example_family):
    pats = realizable_patterns(example_family)
    rng = random.Random(3)
    for _ in range(200):
        d = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(4)]
        assert pattern_of(example_family, d) in pats


def test_f_values_at_witness(example_family, example_x):
    tab = build_sign_table(example_family, example_x)
    for pat, pt in realizable_patterns(tab.fam).items():
        assert f_values(tab, pattern_of(tab.fam, pt)) == f_values(tab, pat) == (0, 0)


def test_barycenter_witnesses():
    rng = random.Random(4)
    found = 0
    for _ in range(10):
        n = rng.choice([3, 4])
        fam = barycenter_family(rng, n)
        try:
            x = admissible_x([fam.omit(j) for j in range(n)], rng, gaussian_rational=True)
        except InadmissibleX:
            continue
        wit = counterexample_when_barycenter(fam, x)
        assert wit.pattern is not None and (wit.f1, wit.f2) != (0, 0)
        found += 1
    assert found >= 5


def test_well_placed_has_no_witness(example_family, example_x):
    with pytest.raises(ValueError):
        counterexample_when_barycenter(example_family, example_x)
