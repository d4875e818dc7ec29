from __future__ import annotations


import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import W, load_gp
from oracles import preceq_brute
from smgroup.gn import KappaParams, compile_gn
from smgroup.hn import compile_hn, gb_presentation
from smgroup.metrics import (
    Holds,
    NotFoundWithinBounds,
    UnclassifiedLetter,
    WeightScheme,
    compute_constants,
    distortion_trial,
    growth_csv,
    preceq_check,
    read_growth_csv,
    trials_csv,
    weighted_length,
)
from smgroup.presentation import PresentationError
from smgroup.smachine import Hardware, RulePart, SMachine, SRule
from smgroup.wordproblem import GrowthTable
from smgroup.words import Word

H3 = Hardware((("a",), ("b",), ("c",)), (("q1",), ("q2",), ("q3",), ("q4",)))


def _gn(rules):
    m = SMachine("m", H3, tuple(rules))
    return compile_gn(m, m.admissible("q1 q2 q3 q4"), KappaParams(1))


def test_constants_examples():
    three = SRule("t", (RulePart(W("q2"), W("a q2 b b")),))
    c = compute_constants(_gn([three]))
    assert (c.c, c.k, c.N_default, c.degenerate) == (6, 3, 162, False)
    flat = SRule("s", (RulePart(W("q2"), W("q2")),))
    c = compute_constants(_gn([flat]))
    assert c.c == 0 and c.degenerate and c.N_default == 27
    five = SRule("u", (RulePart(W("q2 q3"), W("a q2 b b b q3 c")),))
    assert compute_constants(_gn([three, five])).c == 10


def test_constants_need_tags():
    with pytest.raises(PresentationError):
        compute_constants(load_gp("z2.gp"))


def test_weighted_length_examples():
    s = WeightScheme(3, {"a": "Y", "b": "Y", "t": "theta", "k": "kappa1", "x": "B"})
    assert weighted_length(W("a t b"), s, "y_theta") == 14
    assert weighted_length(W("a t b"), s, "y") == 2
    for v in ("y", "y_theta", "y_b_theta"):
        assert weighted_length(W("k ~k k"), s, v) == 0
    assert weighted_length(W("x x ~x x x"), s, "y_b_theta") == 5
    assert weighted_length(W("x x ~x x x"), s, "y_theta") == 0
    with pytest.raises(UnclassifiedLetter):
        weighted_length(W("z"), s)
    with pytest.raises(ValueError):
        weighted_length(W("a"), s, "bogus")


syms = st.lists(st.sampled_from(["a", "~a", "t", "~t", "x", "k"]), max_size=12).map(lambda t: Word.parse(" ".join(t)))
SCHEME = WeightScheme(2, {"a": "Y", "t": "theta", "x": "B", "k": "kappa1"})


@given(syms, syms)
def test_weighted_length_additive_and_ordered(w1, w2):
    for v in ("y", "y_theta", "y_b_theta"):
        assert weighted_length(w1 + w2, SCHEME, v) == weighted_length(w1, SCHEME, v) + weighted_length(w2, SCHEME, v)
    assert weighted_length(w1, SCHEME, "y") <= weighted_length(w1, SCHEME, "y_theta") <= weighted_length(w1, SCHEME, "y_b_theta")


def table(f, n):
    return GrowthTable.from_function(f, n)


def test_preceq_examples():
    assert preceq_check(table(lambda n: n * n, 10), table(lambda n: n**3, 10), (4, 4, 4, 4)) == Holds(1, 1, 0, 0)
    f = table(lambda n: 3 * n + 1, 10)
    assert preceq_check(f, f) == Holds(1, 1, 0, 0)
    r = preceq_check(table(lambda n: 2**n, 12), table(lambda n: n, 12), (10, 10, 10, 10))
    assert isinstance(r, NotFoundWithinBounds)


def test_preceq_uses_scaling():
    f = table(lambda n: 4 * n * n, 8)
    g = table(lambda n: n * n, 16)
    assert preceq_check(f, g, (1, 2, 0, 0)) == Holds(1, 2, 0, 0)
    with pytest.raises(ValueError):
        preceq_check(table(lambda n: n, 3), GrowthTable({5: (1, True)}))


@given(st.lists(st.integers(0, 30), min_size=1, max_size=8), st.lists(st.integers(0, 30), min_size=1, max_size=8))
def test_preceq_agrees_with_brute_force(fv, gv):
    f = {n: v for n, v in enumerate(fv, 1)}
    g = {n: v for n, v in enumerate(gv, 1)}
    if not set(f) & set(g):
        return
    bounds = (3, 3, 4, 6)
    r = preceq_check(GrowthTable({n: (v, True) for n, v in f.items()}), GrowthTable({n: (v, True) for n, v in g.items()}), bounds)
    brute = preceq_brute(f, g, *bounds)
    assert isinstance(r, Holds) == (brute is not None)
    if isinstance(r, Holds):
        for n in set(f) & set(g):
            assert f[n] <= r.a * g[r.b * n] + r.c * n + r.d


@given(st.lists(st.integers(0, 50), min_size=1, max_size=10))
def test_preceq_reflexive(vals):
    t = GrowthTable({n: (v, True) for n, v in enumerate(vals, 1)})
    assert isinstance(preceq_check(t, t), Holds)


def test_growth_csv_round_trip():
    t = GrowthTable({1: (0, True), 2: (3, False)})
    text = growth_csv(t)
    assert text == "n,value,exact\n1,0,true\n2,3,false\n"
    assert read_growth_csv(text) == t


def test_growth_table_domain_contiguous():
    with pytest.raises(ValueError):
        GrowthTable({1: (0, True), 3: (1, True)})


@pytest.fixture
def toy(parity, parity_profile):
    gn = compile_gn(parity, parity.admissible("f1 f2 f3 f4 f5"), KappaParams(1))
    h = compile_hn(gn, parity_profile)
    gb = gb_presentation(load_gp("g_a2.gp"), parity_profile)
    return gb, h, WeightScheme.from_presentation(h)


def test_distortion_examples(toy):
    gb, h, s = toy
    r = distortion_trial(gb, h, s, W("b b"), 0, seed=1)
    assert r.v == r.u and r.L == 0 and r.R == 2 and r.holds and r.exact
    r = distortion_trial(gb, h, s, Word(), 0)
    assert r.L == 0 and r.R == 0 and r.holds
    for seed in range(20):
        r = distortion_trial(gb, h, s, W("b b b"), 3, seed=seed)
        assert r.L == 1 and r.exact and r.holds


def test_distortion_is_seeded(toy):
    gb, h, s = toy
    a = [distortion_trial(gb, h, s, W("b"), 3, seed=i) for i in range(5)]
    b = [distortion_trial(gb, h, s, W("b"), 3, seed=i) for i in range(5)]
    assert a == b
    assert trials_csv(a).splitlines()[0] == "seed,u,v,L,R,holds"
    assert [r.seed for r in a] == list(range(5))


def test_scheme_from_h(toy):
    _, h, s = toy
    assert s.c == compute_constants(h).c
    assert s.theta_weight == 4 * s.c
