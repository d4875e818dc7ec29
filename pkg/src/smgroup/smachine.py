"""S-machines as rewriting systems over admissible words.

A machine has ``k`` tape alphabets ``Y_1..Y_k`` and ``k+1`` pairwise disjoint
state alphabets ``Q_1..Q_{k+1}``.  Admissible words have the shape
``q_1 u_1 q_2 ... u_k q_{k+1}``.  A rule ``[U_1 -> V_1, ..., U_m -> V_m]``
rewrites the anchored subwords ``U_i`` simultaneously and the result is freely
reduced.  Machines are symmetric: every declared (positive) rule comes with its
inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .search import BudgetHit, SearchBudget, expand_frontier
from .words import Alphabet, Letter, Word, invert, reduce_codes

RuleRef = tuple[str, int]


class MachineError(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


class MissingComponent(NotAdmissible):
    def __init__(self, component: int):
        super().__init__(f"no state letter from Q{component}")
        self.component = component


class WrongOrder(NotAdmissible):
    pass


class ForeignTapeLetter(NotAdmissible):
    def __init__(self, segment: int, symbol: str):
        super().__init__(f"letter {symbol!r} does not belong to segment {segment}")
        self.segment = segment
        self.symbol = symbol


class NonReducedSegment(NotAdmissible):
    def __init__(self, segment: int):
        super().__init__(f"segment {segment} is not freely reduced")
        self.segment = segment


class NotApplicable(ValueError):
    def __init__(self, part: int, rule: str = "", step: int | None = None):
        msg = f"rule {rule} not applicable: part {part} does not match"
        if step is not None:
            msg += f" (step {step})"
        super().__init__(msg)
        self.part = part
        self.rule = rule
        self.step = step


class ResultNotAdmissible(ValueError):
    pass


@dataclass
class Report:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str) -> None:
        self.violations.append(msg)

    def extend(self, other: Report, prefix: str = "") -> None:
        self.violations.extend(prefix + v for v in other.violations)

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(self.violations)


# ---------------------------------------------------------------------------
# hardware and admissible words


@dataclass(frozen=True)
class Hardware:
    Y: tuple[tuple[str, ...], ...]
    Q: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "Y", tuple(tuple(y) for y in self.Y))
        object.__setattr__(self, "Q", tuple(tuple(q) for q in self.Q))
        if len(self.Q) != len(self.Y) + 1:
            raise MachineError(f"need k+1 = {len(self.Y) + 1} state alphabets, got {len(self.Q)}")

    @property
    def k(self) -> int:
        return len(self.Y)

    @property
    def state_letters(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(q for Qi in self.Q for q in Qi))

    @property
    def tape_letters(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(y for Yi in self.Y for y in Yi))

    def component(self, symbol: str) -> int | None:
        """1-based index of the state alphabet containing ``symbol``."""
        for i, Qi in enumerate(self.Q, 1):
            if symbol in Qi:
                return i
        return None

    def alphabet(self) -> Alphabet:
        return Alphabet(self.state_letters + self.tape_letters)


def validate_hardware(h: Hardware) -> Report:
    report = Report()
    owner: dict[str, int] = {}
    for i, Qi in enumerate(h.Q, 1):
        if not Qi:
            report.add(f"Q{i} is empty")
        for q in Qi:
            if q in owner and owner[q] != i:
                report.add(f"{q} in Q{owner[q]} and Q{i}")
            elif q in owner:
                report.add(f"{q} listed twice in Q{i}")
            else:
                owner[q] = i
    for i, Yi in enumerate(h.Y, 1):
        if len(set(Yi)) != len(Yi):
            report.add(f"Y{i} lists a letter twice")
        for y in Yi:
            if y in owner:
                report.add(f"{y} in Y{i} and Q{owner[y]}")
    return report


@dataclass(frozen=True)
class AdmissibleWord:
    word: Word
    positions: tuple[int, ...]

    def __str__(self) -> str:
        return str(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def state(self, i: int) -> Letter:
        return self.word.letters[self.positions[i - 1]]

    def segment(self, i: int) -> Word:
        return self.word[self.positions[i - 1] + 1 : self.positions[i]]

    @property
    def segments(self) -> tuple[Word, ...]:
        return tuple(self.segment(i) for i in range(1, len(self.positions)))


def parse_admissible(h: Hardware, w: Word | str) -> AdmissibleWord:
    if isinstance(w, str):
        w = Word.parse(w)
    letters = w.letters
    positions: list[int] = []
    comps: list[int] = []
    for idx, l in enumerate(letters):
        c = h.component(l.symbol)
        if c is None:
            continue
        if l.sign < 0:
            raise WrongOrder(f"inverted state letter {l} at position {idx}")
        positions.append(idx)
        comps.append(c)
    for c in comps:
        if comps.count(c) > 1:
            raise WrongOrder(f"Q{c} occurs {comps.count(c)} times")
    for i in range(1, h.k + 2):
        if i not in comps:
            raise MissingComponent(i)
    if comps != sorted(comps):
        raise WrongOrder("state letters out of order: " + " ".join(f"Q{c}" for c in comps))
    if positions[0] != 0:
        raise ForeignTapeLetter(0, letters[0].symbol)
    if positions[-1] != len(letters) - 1:
        raise ForeignTapeLetter(h.k + 1, letters[-1].symbol)
    for i in range(1, h.k + 1):
        seg = letters[positions[i - 1] + 1 : positions[i]]
        allowed = h.Y[i - 1]
        for l in seg:
            if l.symbol not in allowed:
                raise ForeignTapeLetter(i, l.symbol)
        if not Word(seg).is_reduced():
            raise NonReducedSegment(i)
    return AdmissibleWord(Word(letters), tuple(positions))


def is_admissible(h: Hardware, w: Word) -> bool:
    try:
        parse_admissible(h, w)
    except NotAdmissible:
        return False
    return True


# ---------------------------------------------------------------------------
# rules


@dataclass(frozen=True)
class RulePart:
    U: Word
    V: Word

    def __str__(self) -> str:
        return f"{self.U} -> {self.V}"


@dataclass(frozen=True)
class SRule:
    name: str
    parts: tuple[RulePart, ...]
    positive: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "parts", tuple(p if isinstance(p, RulePart) else RulePart(*p) for p in self.parts)
        )

    @property
    def sign(self) -> int:
        return 1 if self.positive else -1

    @property
    def ref(self) -> RuleRef:
        return (self.name, self.sign)

    def __str__(self) -> str:
        return "[" + " ; ".join(str(p) for p in self.parts) + "]"


def _states_in(h: Hardware, w: Word) -> list[tuple[int, int]]:
    """(position, component) of every state letter in w."""
    out = []
    for idx, l in enumerate(w.letters):
        c = h.component(l.symbol)
        if c is not None:
            out.append((idx, c))
    return out


def _subword_problems(h: Hardware, w: Word, lo: int, hi: int) -> list[str]:
    """Reasons why w is not a subword of an admissible word with states in Q_lo..Q_hi."""
    problems = []
    if not w.is_reduced():
        problems.append("not freely reduced")
    states = _states_in(h, w)
    comps = [c for _, c in states]
    if any(w.letters[p].sign < 0 for p, _ in states):
        problems.append("contains an inverted state letter")
    if comps != list(range(lo, hi + 1)):
        problems.append(
            "state letters " + (" ".join(f"Q{c}" for c in comps) or "none")
            + f" are not Q{lo}..Q{hi} in order"
        )
        return problems
    bounds = [-1] + [p for p, _ in states] + [len(w)]
    for j in range(len(bounds) - 1):
        seg_index = lo - 1 + j  # tape segment between Q_{seg} and Q_{seg+1}
        for l in w.letters[bounds[j] + 1 : bounds[j + 1]]:
            if h.component(l.symbol) is not None:
                continue
            if not 1 <= seg_index <= h.k:
                problems.append(f"tape letter {l} outside the tape segments")
            elif l.symbol not in h.Y[seg_index - 1]:
                problems.append(f"tape letter {l} not in Y{seg_index}")
    return problems


def part_span(h: Hardware, U: Word) -> tuple[int, int] | None:
    if not U.letters:
        return None
    lo = h.component(U.letters[0].symbol)
    hi = h.component(U.letters[-1].symbol)
    if lo is None or hi is None:
        return None
    return lo, hi


def _core_bounds(h: Hardware, V: Word) -> tuple[int, int] | None:
    states = _states_in(h, V)
    if not states:
        return None
    return states[0][0], states[-1][0] + 1


def validate_rule(h: Hardware, r: SRule) -> Report:
    report = Report()
    if not r.parts:
        report.add("rule has no parts")
        return report
    spans: list[tuple[int, int] | None] = []
    for i, p in enumerate(r.parts, 1):
        span = part_span(h, p.U)
        spans.append(span)
        if span is None:
            report.add(f"bullet 1: U_{i} = {p.U} must start and end with state letters")
            continue
        lo, hi = span
        if lo > hi:
            report.add(f"bullet 1: l({i}) = {lo} exceeds r({i}) = {hi}")
            continue
        for msg in _subword_problems(h, p.U, lo, hi):
            report.add(f"bullet 1: U_{i} is not an admissible subword: {msg}")
    for i in range(len(spans) - 1):
        a, b = spans[i], spans[i + 1]
        if a is not None and b is not None and a[1] >= b[0]:
            report.add(f"bullet 2: r({i + 1}) >= l({i + 2})")
    m = len(r.parts)
    for i, (p, span) in enumerate(zip(r.parts, spans), 1):
        if span is None or span[0] > span[1]:
            continue
        lo, hi = span
        problems = _subword_problems(h, p.V, lo, hi)
        core = _core_bounds(h, p.V)
        edge_left = lo == 1 and i == 1 and core is not None and core[0] > 0
        edge_right = hi == h.k + 1 and i == m and core is not None and core[1] < len(p.V)
        if edge_left or edge_right:
            problems = [x for x in problems if "outside the tape segments" not in x]
        for msg in problems:
            report.add(f"bullet 3: V_{i} = {p.V}: {msg}")
        if edge_left:
            report.add(f"bullet 4: V_1 = {p.V} must start with a Q1-letter")
        if edge_right:
            report.add(f"bullet 4: V_{m} = {p.V} must end with a Q{h.k + 1}-letter")
    return report


def invert_rule(r: SRule, h: Hardware) -> SRule:
    """[x V' y <- U] becomes [V' -> x^-1 U y^-1]; an involution."""
    parts = []
    for p in r.parts:
        bounds = _core_bounds(h, p.V)
        if bounds is None:
            raise MachineError(f"V = {p.V} contains no state letter")
        s, e = bounds
        x, core, y = p.V[:s], p.V[s:e], p.V[e:]
        parts.append(RulePart(core, invert(x) + p.U + invert(y)))
    return SRule(r.name, tuple(parts), not r.positive)


# ---------------------------------------------------------------------------
# machines


@dataclass(frozen=True)
class _CompiledPart:
    start: int  # component whose state letter anchors U
    U: tuple[int, ...]
    V: tuple[int, ...]


@dataclass(frozen=True)
class SMachine:
    name: str
    hardware: Hardware
    positive_rules: tuple[SRule, ...]
    all_rules: tuple[SRule, ...] = field(init=False, compare=False)
    alphabet: Alphabet = field(init=False, compare=False, repr=False)
    _compiled: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        h = self.hardware
        rules = tuple(self.positive_rules)
        object.__setattr__(self, "positive_rules", rules)
        report = validate_hardware(h)
        names = [r.name for r in rules]
        for n in names:
            if names.count(n) > 1:
                report.add(f"rule name {n} used twice")
                break
        for r in rules:
            if not r.positive:
                report.add(f"declared rule {r.name} must be positive")
            report.extend(validate_rule(h, r), prefix=f"rule {r.name}: ")
        if not report.ok:
            raise MachineError(str(report))
        all_rules = []
        for r in rules:
            all_rules.extend((r, invert_rule(r, h)))
        object.__setattr__(self, "all_rules", tuple(all_rules))
        alphabet = h.alphabet()
        object.__setattr__(self, "alphabet", alphabet)
        compiled = {}
        for r in all_rules:
            compiled[r.ref] = tuple(
                _CompiledPart(part_span(h, p.U)[0], alphabet.encode(p.U), alphabet.encode(p.V))
                for p in r.parts
            )
        object.__setattr__(self, "_compiled", compiled)

    @property
    def k(self) -> int:
        return self.hardware.k

    @property
    def moves(self) -> tuple[RuleRef, ...]:
        return tuple(r.ref for r in self.all_rules)

    def rule(self, ref: RuleRef | str) -> SRule:
        if isinstance(ref, str):
            ref = parse_rule_ref(ref)
        for r in self.all_rules:
            if r.ref == ref:
                return r
        raise KeyError(f"no rule {format_rule_ref(ref)} in machine {self.name}")

    def positive(self, name: str) -> SRule:
        return self.rule((name, 1))

    def admissible(self, w: Word | str) -> AdmissibleWord:
        return parse_admissible(self.hardware, w)


def parse_rule_ref(token: str) -> RuleRef:
    token = token.strip()
    if token.startswith("~"):
        return (token[1:], -1)
    return (token, 1)


def format_rule_ref(ref: RuleRef) -> str:
    return ref[0] if ref[1] > 0 else "~" + ref[0]


def parse_history(text: str) -> tuple[RuleRef, ...]:
    return tuple(parse_rule_ref(t) for t in text.replace(",", " ").split())


# ---------------------------------------------------------------------------
# application


def _apply_codes(m: SMachine, codes: tuple[int, ...], positions: Sequence[int], ref: RuleRef):
    """Return the rewritten (reduced) code tuple, or the 1-based failing part."""
    parts = m._compiled[ref]
    spans = []
    for i, p in enumerate(parts, 1):
        pos = positions[p.start - 1]
        end = pos + len(p.U)
        if codes[pos:end] != p.U:
            return i
        spans.append((pos, end, p.V))
    out = list(codes)
    for pos, end, V in reversed(spans):
        out[pos:end] = V
    return reduce_codes(out)


def _admissible_positions(m: SMachine, codes: tuple[int, ...]) -> list[int] | None:
    info = m._code_info  # type: ignore[attr-defined]
    positions = []
    expect = 1
    k = m.k
    for i, c in enumerate(codes):
        comp = info.get(c)
        if comp is None:
            return None
        if comp[0] == "Q":
            if comp[1] != expect:
                return None
            positions.append(i)
            expect += 1
        else:
            seg = expect - 1
            if seg < 1 or seg > k or seg not in comp[1]:
                return None
    if expect != k + 2 or positions[-1] != len(codes) - 1:
        return None
    return positions


def _prepare(m: SMachine) -> None:
    if hasattr(m, "_code_info"):
        return
    h, a = m.hardware, m.alphabet
    info: dict[int, tuple] = {}
    for i, Qi in enumerate(h.Q, 1):
        for q in Qi:
            info[a.code(Letter(q, 1))] = ("Q", i)
    for y in h.tape_letters:
        segs = frozenset(i for i, Yi in enumerate(h.Y, 1) if y in Yi)
        info[a.code(Letter(y, 1))] = ("Y", segs)
        info[a.code(Letter(y, -1))] = ("Y", segs)
    object.__setattr__(m, "_code_info", info)
    object.__setattr__(m, "_state_codes", frozenset(c for c, v in info.items() if v[0] == "Q"))


def apply_rule(m: SMachine, w: AdmissibleWord, rule: RuleRef | SRule | str) -> AdmissibleWord:
    _prepare(m)
    if isinstance(rule, SRule):
        ref = rule.ref
    elif isinstance(rule, str):
        ref = parse_rule_ref(rule)
    else:
        ref = rule
    r = m.rule(ref)
    codes = m.alphabet.encode(w.word)
    result = _apply_codes(m, codes, w.positions, ref)
    if isinstance(result, int):
        raise NotApplicable(result, format_rule_ref(ref))
    if _admissible_positions(m, result) is None:
        raw = m.alphabet.decode(result)
        try:
            parse_admissible(m.hardware, raw)
        except NotAdmissible as exc:
            raise ResultNotAdmissible(f"applying {format_rule_ref(r.ref)} to {w} gave {raw}: {exc}") from None
    return parse_admissible(m.hardware, Word(m.alphabet.decode(result).letters))


# ---------------------------------------------------------------------------
# computations


@dataclass(frozen=True)
class Computation:
    start: AdmissibleWord
    history: tuple[RuleRef, ...]
    trace: tuple[AdmissibleWord, ...]
    machine: SMachine | None = field(default=None, compare=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.history)

    @property
    def area(self) -> int:
        return sum(len(w) for w in self.trace)

    @property
    def end(self) -> AdmissibleWord:
        return self.trace[-1]

    @property
    def is_reduced(self) -> bool:
        return all(
            not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(self.history, self.history[1:])
        )

    def max_word_len(self) -> int:
        return max(len(w) for w in self.trace)


def run_history(m: SMachine, start: AdmissibleWord, history: Iterable[RuleRef | str]) -> Computation:
    refs = tuple(parse_rule_ref(h) if isinstance(h, str) else h for h in history)
    trace = [start]
    for step, ref in enumerate(refs, 1):
        try:
            trace.append(apply_rule(m, trace[-1], ref))
        except NotApplicable as exc:
            raise NotApplicable(exc.part, exc.rule, step) from None
    return Computation(start, refs, tuple(trace), m)


@dataclass(frozen=True)
class Found:
    computation: Computation
    nodes_expanded: int

    verdict = "found"


@dataclass(frozen=True)
class Exhausted:
    nodes_expanded: int
    pruned_by_length: int = 0

    verdict = "exhausted"


SearchResult = Union[Found, Exhausted, BudgetHit]


def default_machine_budget(src: AdmissibleWord, dst: AdmissibleWord) -> SearchBudget:
    return SearchBudget(2 * max(len(src), len(dst)) + 8)


def search_reachable(
    m: SMachine,
    src: AdmissibleWord,
    dst: AdmissibleWord,
    budget: SearchBudget | None = None,
    threads: int = 1,
) -> SearchResult:
    """Breadth-first search for a computation taking ``src`` to ``dst``.

    Moves are tried in rule declaration order, each positive rule before its
    inverse, so the returned computation is the first shortest one in that
    order.
    """
    _prepare(m)
    budget = budget or default_machine_budget(src, dst)
    a = m.alphabet
    start = a.encode(src.word)
    goal = a.encode(dst.word)
    if start == goal:
        return Found(Computation(src, (), (src,), m), 0)
    moves = m.moves
    cap = budget.max_word_len
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], RuleRef] | None] = {start: None}
    frontier = [(start, tuple(src.positions))]
    expanded = 0
    pruned = 0
    depth = 0

    def expand(node):
        codes, positions = node
        out = []
        for ref in moves:
            res = _apply_codes(m, codes, positions, ref)
            if isinstance(res, int):
                continue
            out.append((ref, res, len(res) > cap))
        return out

    while frontier:
        if depth >= budget.max_depth:
            return BudgetHit(expanded, f"depth budget {budget.max_depth} reached")
        if expanded + len(frontier) > budget.max_nodes:
            return BudgetHit(expanded, f"node budget {budget.max_nodes} reached")
        results = expand_frontier(frontier, expand, threads)
        expanded += len(frontier)
        depth += 1
        nxt = []
        for (codes, _), succ in zip(frontier, results):
            for ref, res, too_long in succ:
                if res in parent:
                    continue
                if too_long:
                    pruned += 1
                    continue
                positions = _admissible_positions(m, res)
                if positions is None:
                    continue
                parent[res] = (codes, ref)
                if res == goal:
                    return Found(_rebuild(m, src, parent, res), expanded)
                nxt.append((res, tuple(positions)))
        frontier = nxt
    return Exhausted(expanded, pruned)


def _rebuild(m: SMachine, src: AdmissibleWord, parent, node) -> Computation:
    refs = []
    while parent[node] is not None:
        prev, ref = parent[node]
        refs.append(ref)
        node = prev
    return run_history(m, src, reversed(refs))

