"""Line-oriented text formats: .smf machines, .gp presentations, .emb profiles, .drv derivations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .hn import EmbeddingProfile
from .presentation import GroupPresentation, PresentationBuilder, PresentationError, RELATOR_KINDS
from .smachine import Hardware, MachineError, RulePart, SMachine, SRule
from .wordproblem import Derivation, Step
from .words import IDENT_RE, Word, WordError


class FormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None, source: str = "<text>"):
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {msg}")
        self.line = line
        self.source = source


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield no, line


def _word(text: str, no: int, source: str) -> Word:
    try:
        return Word.parse(text)
    except WordError as exc:
        raise FormatError(str(exc), no, source) from None


def _symbols(text: str, no: int, source: str) -> tuple[str, ...]:
    toks = tuple(text.split())
    for t in toks:
        if not IDENT_RE.match(t):
            raise FormatError(f"bad symbol {t!r}", no, source)
    return toks


def _header(lines: list[tuple[int, str]], keyword: str, source: str) -> str:
    if not lines:
        raise FormatError("empty file", None, source)
    no, line = lines[0]
    parts = line.split()
    if len(parts) != 2 or parts[0] != keyword:
        raise FormatError(f"expected '{keyword} <name>'", no, source)
    if lines[-1][1] != "end":
        raise FormatError("missing 'end'", lines[-1][0], source)
    return parts[1]


# ---------------------------------------------------------------------------
# machines

_INDEXED = re.compile(r"([YQ])(\d+)\s*:(.*)\Z")
_RULE = re.compile(r"rule\s+(\S+)\s*:(.*)\Z")


@dataclass(frozen=True)
class MachineSource:
    name: str
    hardware: Hardware
    rules: tuple[SRule, ...]
    rule_lines: tuple[int, ...]


def parse_machine(text: str, source: str = "<text>") -> SMachine:
    ms = parse_machine_source(text, source)
    try:
        return SMachine(ms.name, ms.hardware, ms.rules)
    except MachineError as exc:
        raise FormatError(f"invalid machine: {exc}", None, source) from None


def parse_machine_source(text: str, source: str = "<text>") -> MachineSource:
    """Parse the file structure without checking the machine conditions."""
    lines = list(_lines(text))
    name = _header(lines, "machine", source)
    k = None
    Y: dict[int, tuple[str, ...]] = {}
    Q: dict[int, tuple[str, ...]] = {}
    rules: list[tuple[int, str, list[tuple[Word, Word]]]] = []
    for no, line in lines[1:-1]:
        if line.startswith("k"):
            m = re.fullmatch(r"k\s*=\s*(\d+)", line)
            if not m:
                raise FormatError("expected 'k = <int>'", no, source)
            k = int(m.group(1))
            continue
        m = _INDEXED.match(line)
        if m:
            table = Y if m.group(1) == "Y" else Q
            i = int(m.group(2))
            if i in table:
                raise FormatError(f"{m.group(1)}{i} declared twice", no, source)
            table[i] = _symbols(m.group(3), no, source)
            continue
        m = _RULE.match(line)
        if m:
            rname = m.group(1)
            if not IDENT_RE.match(rname):
                raise FormatError(f"bad rule name {rname!r}", no, source)
            parts = []
            for clause in m.group(2).split(";"):
                if "->" not in clause:
                    raise FormatError(f"rule part {clause.strip()!r} lacks '->'", no, source)
                u, v = clause.split("->", 1)
                parts.append((_word(u, no, source), _word(v, no, source)))
            rules.append((no, rname, parts))
            continue
        raise FormatError(f"unrecognized line {line!r}", no, source)
    if k is None:
        raise FormatError("missing 'k = <int>'", None, source)
    if sorted(Y) != list(range(1, k + 1)):
        raise FormatError(f"need Y1..Y{k}, got {sorted(Y)}", None, source)
    if sorted(Q) != list(range(1, k + 2)):
        raise FormatError(f"need Q1..Q{k + 1}, got {sorted(Q)}", None, source)
    h = Hardware(tuple(Y[i] for i in range(1, k + 1)), tuple(Q[i] for i in range(1, k + 2)))
    srules = tuple(SRule(n, tuple(RulePart(u, v) for u, v in parts)) for _, n, parts in rules)
    return MachineSource(name, h, srules, tuple(no for no, _, _ in rules))


def format_machine(m: SMachine) -> str:
    out = [f"machine {m.name}", f"k = {m.k}"]
    for i, Yi in enumerate(m.hardware.Y, 1):
        out.append(f"Y{i}: " + " ".join(Yi))
    for i, Qi in enumerate(m.hardware.Q, 1):
        out.append(f"Q{i}: " + " ".join(Qi))
    for r in m.positive_rules:
        out.append(f"rule {r.name}: " + " ; ".join(f"{p.U} -> {p.V}" for p in r.parts))
    out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# presentations

_REL = re.compile(r"rel(?:\[([^\]]+)\])?\s*:(.*)\Z")
_CLASS = re.compile(r"class\s+(\S+)\s*:(.*)\Z")


def parse_presentation(text: str, source: str = "<text>") -> GroupPresentation:
    lines = list(_lines(text))
    name = _header(lines, "presentation", source)
    builder = None
    for no, line in lines[1:-1]:
        if line.startswith("gens"):
            if builder is not None:
                raise FormatError("gens declared twice", no, source)
            _, _, rest = line.partition(":")
            try:
                builder = PresentationBuilder(name, _symbols(rest, no, source))
            except WordError as exc:
                raise FormatError(str(exc), no, source) from None
            continue
        if builder is None:
            raise FormatError("'gens:' must come first", no, source)
        m = _CLASS.match(line)
        if m:
            try:
                builder.add_class(m.group(1), _symbols(m.group(2), no, source))
            except PresentationError as exc:
                raise FormatError(str(exc), no, source) from None
            continue
        m = _REL.match(line)
        if m:
            kind = m.group(1) or "user"
            if kind not in RELATOR_KINDS:
                raise FormatError(f"unknown relator kind {kind!r}", no, source)
            w = _word(m.group(2), no, source)
            try:
                builder.add(w, kind)
            except PresentationError as exc:
                raise FormatError(str(exc), no, source) from None
            continue
        raise FormatError(f"unrecognized line {line!r}", no, source)
    if builder is None:
        raise FormatError("missing 'gens:'", None, source)
    return builder.build()


def format_presentation(g: GroupPresentation) -> str:
    out = [f"presentation {g.name}", "gens: " + " ".join(g.generators)]
    for tag, syms in g.classes.items():
        out.append(f"class {tag}: " + " ".join(syms))
    for r in g.relators:
        out.append(f"rel[{r.kind}]: {r.word}")
    out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# embedding profiles


def parse_profile(text: str, source: str = "<text>") -> EmbeddingProfile:
    lines = list(_lines(text))
    name = _header(lines, "profile", source)
    fields: dict[str, tuple[int, str]] = {}
    for no, line in lines[1:-1]:
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("A", "B", "alpha", "delta", "omega", "z0", "z1", "z2", "z3", "z4"):
            raise FormatError(f"unrecognized line {line!r}", no, source)
        if key in fields:
            raise FormatError(f"{key} given twice", no, source)
        fields[key] = (no, rest.strip())
    for key in ("A", "B", "alpha", "delta", "omega"):
        if key not in fields:
            raise FormatError(f"missing '{key}:'", None, source)
    A = _symbols(fields["A"][1], fields["A"][0], source)
    B = _symbols(fields["B"][1], fields["B"][0], source)
    specials = []
    for key in ("alpha", "delta", "omega"):
        no, val = fields[key]
        toks = _symbols(val, no, source)
        if len(toks) != 1:
            raise FormatError(f"{key} must be a single letter", no, source)
        specials.append(toks[0])
    z = tuple(_word(fields[f"z{j}"][1], fields[f"z{j}"][0], source) if f"z{j}" in fields else Word() for j in range(5))
    return EmbeddingProfile(name, A, B, *specials, z)


def format_profile(p: EmbeddingProfile) -> str:
    out = [f"profile {p.name}", "A: " + " ".join(p.A), "B: " + " ".join(p.B)]
    out += [f"alpha: {p.alpha}", f"delta: {p.delta}", f"omega: {p.omega}"]
    out += [f"z{j}: {zj}" for j, zj in enumerate(p.z)]
    out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# derivations


def format_derivation(d: Derivation) -> str:
    out = [f"start: {d.start}".rstrip()]
    out += [f"step: {s.pos} {s.orbit} {s.shift} {s.sign}" for s in d.steps]
    out.append(f"end: {d.end}".rstrip())
    return "\n".join(out) + "\n"


def parse_derivation(text: str, source: str = "<text>") -> Derivation:
    start = end = None
    steps = []
    for no, line in _lines(text):
        key, sep, rest = line.partition(":")
        if not sep:
            raise FormatError(f"unrecognized line {line!r}", no, source)
        if key == "start":
            start = _word(rest, no, source)
        elif key == "end":
            end = _word(rest, no, source)
        elif key == "step":
            try:
                pos, orbit, shift, sign = (int(x) for x in rest.split())
            except ValueError:
                raise FormatError("step needs four integers", no, source) from None
            steps.append(Step(pos, orbit, shift, sign))
        else:
            raise FormatError(f"unrecognized line {line!r}", no, source)
    if start is None or end is None:
        raise FormatError("derivation needs start and end lines", None, source)
    return Derivation(start, tuple(steps), end)


# ---------------------------------------------------------------------------
# files


@dataclass(frozen=True)
class Loaded:
    kind: str
    value: object


def read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def load(path: str | Path) -> Loaded:
    path = Path(path)
    text = read_text(path)
    src = str(path)
    suffix = path.suffix
    if suffix == ".smf":
        return Loaded("machine", parse_machine(text, src))
    if suffix == ".gp":
        return Loaded("presentation", parse_presentation(text, src))
    if suffix == ".emb":
        return Loaded("profile", parse_profile(text, src))
    if suffix == ".drv":
        return Loaded("derivation", parse_derivation(text, src))
    raise FormatError(f"unknown file suffix {suffix!r}", None, src)
