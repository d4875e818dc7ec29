from __future__ import annotations

import pytest

from conftest import SAMPLES, W
from smgroup.formats import (
    FormatError,
    format_derivation,
    format_machine,
    format_presentation,
    format_profile,
    load,
    parse_derivation,
    parse_machine,
    parse_presentation,
    parse_profile,
    read_text,
)
from smgroup.gn import KappaParams, compile_gn
from smgroup.hn import compile_hn
from smgroup.wordproblem import Derivation, Step


@pytest.mark.parametrize("name", ["rule1.smf", "parity.smf"])
def test_machine_round_trip(name):
    m = parse_machine(read_text(SAMPLES / name))
    assert parse_machine(format_machine(m)) == m


def test_presentation_round_trip(parity, parity_profile):
    gn = compile_gn(parity, parity.admissible("f1 f2 f3 f4 f5"), KappaParams(1))
    h = compile_hn(gn, parity_profile)
    for g in (gn, h):
        back = parse_presentation(format_presentation(g))
        assert back.relators == g.relators
        assert back.classes == g.classes
        assert back.generators == g.generators


def test_profile_round_trip(parity_profile):
    assert parse_profile(format_profile(parity_profile)) == parity_profile


def test_derivation_round_trip():
    d = Derivation(W("a b"), (Step(0, 1, 2, -1), Step(3, 0, 0, 1)), W(""))
    assert parse_derivation(format_derivation(d)) == d


def test_load_dispatch():
    assert load(SAMPLES / "z2.gp").kind == "presentation"
    assert load(SAMPLES / "rule1.smf").kind == "machine"
    assert load(SAMPLES / "parity.emb").kind == "profile"


@pytest.mark.parametrize(
    "text, line",
    [
        ("machine m\nk = 1\nY1: a\nQ1: q\nQ2: p\nrule t: q ~> p\nend\n", 6),
        ("machine m\nk = 1\nY1: a\nQ1: q\nQ1: p\nend\n", 5),
        ("machine m\nk = 1\nY1: 1a\nQ1: q\nQ2: p\nend\n", 3),
        ("machine m\nk = 1\nY1: a\nQ1: q\nQ2: p\nfoo\nend\n", 6),
        ("machine m\n# c\nk = one\nend\n", 3),
    ],
)
def test_machine_errors_have_lines(text, line):
    with pytest.raises(FormatError) as info:
        parse_machine(text, "m.smf")
    assert info.value.line == line
    assert str(info.value).startswith(f"m.smf:{line}:")


def test_machine_structural_errors():
    with pytest.raises(FormatError, match="missing 'end'"):
        parse_machine("machine m\nk = 1\n")
    with pytest.raises(FormatError, match="need Q1..Q2"):
        parse_machine("machine m\nk = 1\nY1: a\nQ1: q\nend\n")
    with pytest.raises(FormatError, match="invalid machine"):
        parse_machine("machine m\nk = 1\nY1: a\nQ1: q\nQ2: p\nrule t: q -> a q\nend\n")


def test_presentation_errors():
    with pytest.raises(FormatError) as info:
        parse_presentation("presentation p\ngens: a\nrel: a b\nend\n")
    assert info.value.line == 3
    with pytest.raises(FormatError) as info:
        parse_presentation("presentation p\nrel: a\nend\n")
    assert info.value.line == 2
    with pytest.raises(FormatError, match="unknown relator kind"):
        parse_presentation("presentation p\ngens: a\nrel[weird]: a\nend\n")


def test_profile_errors():
    with pytest.raises(FormatError, match="missing 'omega:'"):
        parse_profile("profile p\nA: a\nB: b\nalpha: x\ndelta: y\nend\n")
    with pytest.raises(FormatError) as info:
        parse_profile("profile p\nA: a\nB: b\nalpha: x y\ndelta: y\nomega: z\nend\n")
    assert info.value.line == 4


def test_derivation_errors():
    with pytest.raises(FormatError) as info:
        parse_derivation("start: a\nstep: 1 2\nend:\n")
    assert info.value.line == 2
    with pytest.raises(FormatError):
        parse_derivation("step: 0 0 0 1\n")
