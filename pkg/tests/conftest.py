from __future__ import annotations

import warnings
from pathlib import Path

import pytest

from smgroup.formats import parse_machine, parse_presentation, parse_profile, read_text
from smgroup.gn import SmallNWarning
from smgroup.smachine import Hardware, RulePart, SMachine, SRule
from smgroup.words import Word

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

ACCEPTANCE_LINES: list[str] = []


def pytest_configure(config):
    warnings.simplefilter("ignore", SmallNWarning)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def W(text: str) -> Word:
    return Word.parse(text)


@pytest.fixture
def example_hardware() -> Hardware:
    return Hardware((("a",), ("b", "b'"), ("c",)), (("q1", "p1"), ("q2", "p2"), ("q3",), ("q4",)))


@pytest.fixture
def rule1() -> SRule:
    return SRule("rule1", (RulePart(W("q1"), W("p1 ~a")), RulePart(W("q2 b q3"), W("~a p2 b' q3 c"))))


@pytest.fixture
def example_machine(example_hardware, rule1) -> SMachine:
    return SMachine("example", example_hardware, (rule1,))


@pytest.fixture
def samples() -> Path:
    return SAMPLES


@pytest.fixture
def parity():
    return parse_machine(read_text(SAMPLES / "parity.smf"))


@pytest.fixture
def parity_profile():
    return parse_profile(read_text(SAMPLES / "parity.emb"))


def load_gp(name: str):
    return parse_presentation(read_text(SAMPLES / name))
