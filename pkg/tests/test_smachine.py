from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import W
from machines import random_machine, random_word_for
from oracles import apply_rule_naive, reachable_closure
from smgroup.search import BudgetHit, SearchBudget
from smgroup.smachine import (
    Exhausted,
    ForeignTapeLetter,
    Found,
    Hardware,
    MachineError,
    MissingComponent,
    NonReducedSegment,
    NotApplicable,
    RulePart,
    SMachine,
    SRule,
    WrongOrder,
    apply_rule,
    format_rule_ref,
    invert_rule,
    is_admissible,
    parse_admissible,
    parse_history,
    run_history,
    search_reachable,
    validate_hardware,
    validate_rule,
)
from smgroup.words import Word

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_admissible_example(example_hardware):
    aw = parse_admissible(example_hardware, "q1 a a q2 b q3 c c q4")
    assert aw.positions == (0, 3, 5, 8)
    assert [str(s) for s in aw.segments] == ["a a", "b", "c c"]


@pytest.mark.parametrize(
    "text, exc",
    [
        ("q1 a q2 b q3", MissingComponent),
        ("q2 q1 q3 q4", WrongOrder),
        ("q1 q2 q2 q3 q4", WrongOrder),
        ("q1 c q2 q3 q4", ForeignTapeLetter),
        ("a q1 q2 q3 q4", ForeignTapeLetter),
        ("q1 a ~a q2 q3 q4", NonReducedSegment),
        ("q1 ~q2 q3 q4", WrongOrder),
    ],
)
def test_not_admissible(example_hardware, text, exc):
    with pytest.raises(exc):
        parse_admissible(example_hardware, text)
    assert not is_admissible(example_hardware, W(text))


def test_hardware_validation():
    assert validate_hardware(Hardware((("a",),), (("q",), ("p",)))).ok
    assert not validate_hardware(Hardware((("a",),), (("q",), ("q",)))).ok
    assert not validate_hardware(Hardware((("q",),), (("q",), ("p",)))).ok
    with pytest.raises(MachineError):
        Hardware((("a",),), (("q",),))


def test_rule1_example(example_machine):
    w = example_machine.admissible("q1 a a q2 b q3 c c q4")
    assert str(apply_rule(example_machine, w, "rule1")) == "p1 p2 b' q3 c c c q4"


def test_rule1_inverse_display(example_machine, rule1):
    inv = invert_rule(rule1, example_machine.hardware)
    assert str(inv) == "[p1 -> q1 a ; p2 b' q3 -> a q2 b q3 ~c]"
    assert invert_rule(inv, example_machine.hardware) == rule1


def test_rule1_not_applicable(example_machine):
    w = example_machine.admissible("q1 a q2 q3 q4")
    with pytest.raises(NotApplicable):
        apply_rule(example_machine, w, "rule1")


def test_validate_rule_bullets(example_hardware):
    assert validate_rule(example_hardware, SRule("t", (RulePart(W("q1"), W("p1 ~a")),))).ok
    overlap = SRule("t", (RulePart(W("q1 a q2"), W("q1 a q2")), RulePart(W("q2"), W("q2"))))
    assert any(m.startswith("bullet 2") for m in validate_rule(example_hardware, overlap).violations)
    bad_u = SRule("t", (RulePart(W("a q2"), W("q2")),))
    assert any(m.startswith("bullet 1") for m in validate_rule(example_hardware, bad_u).violations)
    foreign = SRule("t", (RulePart(W("q2"), W("c q2")),))
    assert any(m.startswith("bullet 3") for m in validate_rule(example_hardware, foreign).violations)
    left = SRule("t", (RulePart(W("q1"), W("a q1")),))
    assert any(m.startswith("bullet 4") for m in validate_rule(example_hardware, left).violations)


def test_machine_rejects_invalid_rule(example_hardware):
    with pytest.raises(MachineError):
        SMachine("bad", example_hardware, (SRule("t", (RulePart(W("q1"), W("a q1")),)),))


def test_machine_is_symmetric(example_machine):
    assert example_machine.moves == (("rule1", 1), ("rule1", -1))
    assert example_machine.rule("~rule1") == invert_rule(example_machine.positive("rule1"), example_machine.hardware)


def test_rule_refs():
    assert parse_history("a ~b, c") == (("a", 1), ("b", -1), ("c", 1))
    assert format_rule_ref(("b", -1)) == "~b"


def test_run_history_area(example_machine):
    comp = run_history(example_machine, example_machine.admissible("q1 a a q2 b q3 c c q4"), ["rule1"])
    assert comp.length == 1
    assert comp.area == 17
    assert comp.is_reduced
    back = run_history(example_machine, comp.start, ["rule1", "~rule1"])
    assert back.end == comp.start
    assert not back.is_reduced


def test_run_history_reports_step(example_machine):
    with pytest.raises(NotApplicable) as info:
        run_history(example_machine, example_machine.admissible("q1 a a q2 b q3 q4"), ["rule1", "rule1"])
    assert info.value.step == 2


def test_parity_search(parity):
    src = parity.admissible("q1 alpha q2 a a q3 delta q4 omega q5")
    r = search_reachable(parity, src, parity.admissible("f1 f2 f3 f4 f5"))
    assert isinstance(r, Found)
    assert [format_rule_ref(h) for h in r.computation.history] == ["sq", "ea", "ed", "eo", "fin"]


def test_parity_rejects_odd(parity):
    src = parity.admissible("q1 alpha q2 a q3 delta q4 omega q5")
    dst = parity.admissible("f1 f2 f3 f4 f5")
    r = search_reachable(parity, src, dst, SearchBudget(12))
    assert isinstance(r, Exhausted)

    rules = [[(tuple(str(l) for l in p.U.letters), tuple(str(l) for l in p.V.letters)) for p in parity.rule(ref).parts] for ref in parity.moves]

    def mover(parts):
        def mv(w):
            x = apply_rule_naive(w, parts) if all(p[0][0] in w for p in parts) else None
            return x if x is not None and is_admissible(parity.hardware, Word.parse(" ".join(x))) else None

        return mv

    closure = reachable_closure(tuple(str(src).split()), [mover(p) for p in rules], 12)
    assert ("f1", "f2", "f3", "f4", "f5") not in closure


def test_search_budget_hit(parity):
    src = parity.admissible("q1 alpha q2 a q3 delta q4 omega q5")
    r = search_reachable(parity, src, parity.admissible("f1 f2 f3 f4 f5"), SearchBudget(40, max_nodes=5))
    assert isinstance(r, BudgetHit)


def test_search_threads_agree(parity):
    src = parity.admissible("q1 alpha alpha q2 a a a a q3 delta delta q4 omega omega q5")
    dst = parity.admissible("f1 f2 f3 f4 f5")
    a = search_reachable(parity, src, dst, threads=1)
    b = search_reachable(parity, src, dst, threads=4)
    assert a == b


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_apply_then_inverse_is_identity(seed):
    rng = random.Random(seed)
    m = random_machine(rng)
    ref = rng.choice(m.moves)
    w = m.admissible(random_word_for(rng, m, m.rule(ref)))
    out = apply_rule(m, w, ref)
    assert is_admissible(m.hardware, out.word)
    assert apply_rule(m, out, (ref[0], -ref[1])) == w


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_apply_matches_naive_rewriting(seed):
    rng = random.Random(seed)
    m = random_machine(rng)
    ref = rng.choice(m.moves)
    rule = m.rule(ref)
    w = m.admissible(random_word_for(rng, m, rule))
    parts = [(tuple(str(l) for l in p.U.letters), tuple(str(l) for l in p.V.letters)) for p in rule.parts]
    expect = apply_rule_naive(tuple(str(l) for l in w.word.letters), parts)
    assert tuple(str(l) for l in apply_rule(m, w, ref).word.letters) == expect


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_reversed_history_returns(seed):
    rng = random.Random(seed)
    m = random_machine(rng)
    ref = rng.choice(m.moves)
    start = m.admissible(random_word_for(rng, m, m.rule(ref)))
    comp = run_history(m, start, [ref])
    back = run_history(m, comp.end, [(r, -s) for r, s in reversed(comp.history)])
    assert back.end == start
    found = search_reachable(m, comp.end, start, SearchBudget(len(start) + len(comp.end) + 8, max_nodes=20000))
    assert isinstance(found, Found)
    assert found.computation.length <= 1
