"""Word problem by relator insertion: verification, exact area, geodesics.

A derivation step inserts one relator instance (a cyclic shift of a relator or
of its inverse) at a position of the current freely reduced word and reduces
again.  The number of steps is the area.

The exact area search works on cyclic classes.  A boundary letter ``x`` of a
cyclically reduced word ``c`` lying on a relator instance ``R`` with
``R[0] = x`` can be replaced by ``R[1:]^-1``; every minimal van Kampen diagram
has a cell with an edge on the boundary, so these peels reach the empty word in
exactly area-many moves.  The peels are searched with A* (each move shortens
the word by at most the longest relator length) and the path is then turned
back into linear insertions.
"""

from __future__ import annotations

import functools
import heapq
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .gn import KappaParams, kappa_word
from .presentation import GroupPresentation
from .search import BudgetHit, SearchBudget, expand_frontier
from .smachine import (
    AdmissibleWord,
    Computation,
    Found,
    SMachine,
    _core_bounds,
    search_reachable,
)
from .words import (
    Codes,
    CyclicWord,
    Word,
    canonical_codes,
    core_offset,
    cyclic_reduce_codes,
    invert_codes,
    join_codes,
    reduce_codes,
)


class DerivationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Step:
    pos: int
    orbit: int
    shift: int
    sign: int


@dataclass(frozen=True)
class Derivation:
    start: Word
    steps: tuple[Step, ...]
    end: Word

    @property
    def area(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Ok:
    ok = True


@dataclass(frozen=True)
class FailAt:
    step: int
    ok = False


class RelatorIndex:
    """All relator instances of a presentation, keyed by their code tuples."""

    def __init__(self, g: GroupPresentation):
        self.presentation = g
        self.alphabet = g.generators
        self.orbits: list[Codes] = g.orbit_codes()
        self.instances: dict[Codes, tuple[int, int, int]] = {}
        for o, canon in enumerate(self.orbits):
            for sign, base in ((1, canon), (-1, invert_codes(canon))):
                for s in range(len(base)):
                    self.instances.setdefault(base[s:] + base[:s], (o, s, sign))
        self.by_first: dict[int, list[Codes]] = {}
        self.by_last: dict[int, list[Codes]] = {}
        for inst in sorted(self.instances):
            self.by_first.setdefault(inst[0], []).append(inst)
            self.by_last.setdefault(inst[-1], []).append(inst)
        # peel table: first letter -> inverted tails
        self.peel: dict[int, list[Codes]] = {
            x: [invert_codes(r[1:]) for r in insts] for x, insts in self.by_first.items()
        }
        self.rmax = max((len(o) for o in self.orbits), default=0)

    def instance(self, orbit: int, shift: int, sign: int) -> Codes:
        if not 0 <= orbit < len(self.orbits):
            raise DerivationError(f"no relator orbit {orbit}")
        if sign not in (1, -1):
            raise DerivationError(f"bad sign {sign}")
        base = self.orbits[orbit] if sign > 0 else invert_codes(self.orbits[orbit])
        if not 0 <= shift < len(base):
            raise DerivationError(f"shift {shift} out of range for orbit {orbit}")
        return base[shift:] + base[:shift]

    def locate(self, inst: Codes) -> tuple[int, int, int]:
        try:
            return self.instances[inst]
        except KeyError:
            raise DerivationError(
                f"{self.alphabet.decode(inst)} is not a relator instance of {self.presentation.name}"
            ) from None

    def step_for(self, pos: int, inst: Codes) -> Step:
        o, s, sign = self.locate(inst)
        return Step(pos, o, s, sign)


def apply_step(index: RelatorIndex, codes: Codes, step: Step) -> Codes:
    if not 0 <= step.pos <= len(codes):
        raise DerivationError(f"position {step.pos} outside 0..{len(codes)}")
    inst = index.instance(step.orbit, step.shift, step.sign)
    return reduce_codes(codes[: step.pos] + inst + codes[step.pos :])


def replay(g: GroupPresentation, d: Derivation, index: RelatorIndex | None = None) -> list[Codes]:
    index = index or RelatorIndex(g)
    cur = reduce_codes(g.generators.encode(d.start))
    out = [cur]
    for st in d.steps:
        cur = apply_step(index, cur, st)
        out.append(cur)
    return out


def verify_derivation(g: GroupPresentation, d: Derivation) -> Union[Ok, FailAt]:
    """Replay d; FailAt(i) names the last step (i = number of steps) when the end differs."""
    words = replay(g, d)
    if words[-1] != g.generators.encode(d.end):
        return FailAt(len(d.steps))
    return Ok()


# ---------------------------------------------------------------------------
# abelianization


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


class AbelianLattice:
    """Integer row span of the relator exponent vectors, kept in echelon form."""

    def __init__(self, n: int, vectors: Sequence[Sequence[int]] = ()):
        self.n = n
        self.rows: dict[int, list[int]] = {}
        for v in vectors:
            self.insert(v)

    def insert(self, v: Sequence[int]) -> None:
        v = list(v)
        for p in range(self.n):
            if v[p] == 0:
                continue
            r = self.rows.get(p)
            if r is None:
                self.rows[p] = v if v[p] > 0 else [-x for x in v]
                return
            g, s, t = _egcd(r[p], v[p])
            new_r = [s * a + t * b for a, b in zip(r, v)]
            rp, vp = r[p] // g, v[p] // g
            v = [rp * b - vp * a for a, b in zip(r, v)]
            self.rows[p] = new_r if new_r[p] > 0 else [-x for x in new_r]

    def contains(self, x: Sequence[int]) -> bool:
        x = list(x)
        for p in sorted(self.rows):
            r = self.rows[p]
            if x[p] % r[p]:
                return False
            q = x[p] // r[p]
            if q:
                x = [a - q * b for a, b in zip(x, r)]
        return not any(x)


def exponent_vector(codes: Codes, n: int) -> list[int]:
    v = [0] * n
    for c in codes:
        v[c >> 1] += -1 if c & 1 else 1
    return v


def abelian_lattice(g: GroupPresentation) -> AbelianLattice:
    n = len(g.generators)
    return AbelianLattice(n, [exponent_vector(o, n) for o in g.orbit_codes()])


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class Trivial:
    area: int
    derivation: Derivation
    exact: bool = True
    capped: bool = False
    nodes_expanded: int = 0

    verdict = "trivial"


@dataclass(frozen=True)
class NontrivialWithinCap:
    nodes_expanded: int = 0
    proved: bool = False
    capped: bool = False

    verdict = "nontrivial"
    exact = False


AreaResult = Union[Trivial, NontrivialWithinCap, BudgetHit]


def result_json(r) -> dict:
    out = {
        "verdict": r.verdict,
        "area": getattr(r, "area", None),
        "exact": bool(getattr(r, "exact", False)) if isinstance(r, Trivial) else getattr(r, "proved", False),
        "nodes_expanded": r.nodes_expanded,
    }
    if isinstance(r, Trivial):
        out["steps"] = [[s.pos, s.orbit, s.shift, s.sign] for s in r.derivation.steps]
        out["capped"] = r.capped
    elif isinstance(r, BudgetHit):
        out["reason"] = r.reason
    return out


def default_area_budget(g: GroupPresentation, w: Word) -> SearchBudget:
    """Core length cap |w| + 2 * (longest relator)."""
    rmax = max((len(r) for r in g.relators), default=0)
    return SearchBudget(max(1, len(w) + 2 * rmax))


# ---------------------------------------------------------------------------
# exact area


class AreaSolver:
    def __init__(self, g: GroupPresentation):
        self.g = g
        self.index = RelatorIndex(g)
        self.lattice = abelian_lattice(g)
        self.n = len(g.generators)

    def in_lattice(self, codes: Codes) -> bool:
        return self.lattice.contains(exponent_vector(codes, self.n))

    def _successors(self, c: Codes) -> list[Codes]:
        peel = self.index.peel
        out: dict[Codes, None] = {}
        n = len(c)
        for i in range(n):
            tails = peel.get(c[i])
            if not tails:
                continue
            rest = c[i + 1 :] + c[:i]
            for t in tails:
                w = join_codes(t, rest)
                w = cyclic_reduce_codes(w)
                out.setdefault(canonical_codes(w), None)
        return list(out)

    def _astar(self, start: Codes, budget: SearchBudget):
        """Returns (path of canonical states | None, nodes, capped, budget_reason)."""
        rmax = self.index.rmax
        cap = budget.max_word_len

        def h(c: Codes) -> int:
            return -(-len(c) // rmax)

        best = {start: 0}
        parent: dict[Codes, Codes | None] = {start: None}
        heap = [(h(start), 0, start)]
        closed: set[Codes] = set()
        nodes = 0
        capped = False
        while heap:
            f, negg, c = heapq.heappop(heap)
            g = -negg
            if c in closed or g > best[c]:
                continue
            closed.add(c)
            nodes += 1
            if nodes > budget.max_nodes:
                return None, nodes - 1, capped, f"node budget {budget.max_nodes} reached"
            if g >= budget.max_depth:
                capped = True
                continue
            for nxt in self._successors(c):
                if not nxt:
                    parent[nxt] = c
                    return self._path(parent, nxt), nodes, capped, None
                if len(nxt) > cap:
                    capped = True
                    continue
                ng = g + 1
                if ng < best.get(nxt, math.inf):
                    best[nxt] = ng
                    parent[nxt] = c
                    heapq.heappush(heap, (ng + h(nxt), -ng, nxt))
        return None, nodes, capped, None

    @staticmethod
    def _path(parent, node) -> list[Codes]:
        path = [node]
        while parent[node] is not None:
            node = parent[node]
            path.append(node)
        return path[::-1]

    def _linearize(self, start: Codes, states: list[Codes]) -> list[Step]:
        idx = self.index
        cur = start
        steps = []
        for target in states[1:]:
            found = None
            o = core_offset(cur)
            end = len(cur) - o
            for p in range(o, end + 1):
                cands: list[Codes] = []
                if p < len(cur):
                    cands.extend(idx.by_last.get(cur[p] ^ 1, ()))
                if p > 0:
                    cands.extend(idx.by_first.get(cur[p - 1] ^ 1, ()))
                for inst in sorted(set(cands)):
                    nxt = reduce_codes(cur[:p] + inst + cur[p:])
                    if canonical_codes(cyclic_reduce_codes(nxt)) == target:
                        found = (p, inst, nxt)
                        break
                if found:
                    break
            if found is None:
                raise RuntimeError("could not linearize a peel move")
            p, inst, cur = found
            steps.append(idx.step_for(p, inst))
        return steps

    def solve(self, w: Word, budget: SearchBudget | None = None) -> AreaResult:
        codes = reduce_codes(self.g.generators.encode(w))
        if not codes:
            return Trivial(0, Derivation(w, (), Word()), True, False, 0)
        if not self.in_lattice(codes) or not self.index.orbits:
            return NontrivialWithinCap(0, proved=True)
        budget = budget or default_area_budget(self.g, w)
        start = canonical_codes(cyclic_reduce_codes(codes))
        path, nodes, capped, reason = self._astar(start, budget)
        if reason is not None:
            return BudgetHit(nodes, reason)
        if path is None:
            return NontrivialWithinCap(nodes, proved=not capped, capped=capped)
        steps = self._linearize(codes, path)
        d = Derivation(w, tuple(steps), Word())
        return Trivial(len(steps), d, True, capped, nodes)


@functools.lru_cache(maxsize=16)
def solver_for(g: GroupPresentation) -> AreaSolver:
    return AreaSolver(g)


def decide_trivial(g: GroupPresentation, w: Word, b: SearchBudget | None = None) -> AreaResult:
    return solver_for(g).solve(w, b)


def min_area(g: GroupPresentation, w: Word, b: SearchBudget | None = None) -> AreaResult:
    """Like decide_trivial; ``exact`` is True only when no budget limit interfered."""
    return decide_trivial(g, w, b)


# ---------------------------------------------------------------------------
# word enumeration, geodesics, Dehn profile


def reduced_words(n_gens: int, length: int) -> Iterator[Codes]:
    """All freely reduced words of the given length in shortlex order."""
    letters = range(2 * n_gens)
    if length == 0:
        yield ()
        return

    def rec(prefix: list[int]) -> Iterator[Codes]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        last = prefix[-1] if prefix else -1
        for c in letters:
            if prefix and c == last ^ 1:
                continue
            prefix.append(c)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


@dataclass(frozen=True)
class Geodesic:
    length: int
    exact: bool
    nodes_expanded: int = 0

    verdict = "geodesic"


def geodesic_length(
    g: GroupPresentation, w: Word, b: SearchBudget | None = None, solver: AreaSolver | None = None
) -> Union[Geodesic, BudgetHit]:
    solver = solver or AreaSolver(g)
    alpha = g.generators
    codes = reduce_codes(alpha.encode(w))
    if not codes:
        return Geodesic(0, True)
    n = len(alpha)
    exact = True
    nodes = 0
    tested = 0
    limit = b.max_nodes if b is not None else 10**6
    for length in range(len(codes)):
        for v in reduced_words(n, length):
            test = reduce_codes(codes + invert_codes(v))
            if not solver.in_lattice(test):
                continue
            tested += 1
            if tested > limit:
                return BudgetHit(nodes, f"candidate budget {limit} reached")
            word = alpha.decode(test)
            budget = b.with_overrides(max_word_len=max(b.max_word_len, len(test))) if b else None
            r = solver.solve(word, budget)
            nodes += r.nodes_expanded
            if isinstance(r, Trivial):
                return Geodesic(length, exact, nodes)
            if isinstance(r, BudgetHit) or not r.proved:
                exact = False
    return Geodesic(len(codes), exact, nodes)


@dataclass
class GrowthTable:
    entries: dict[int, tuple[int, bool]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        keys = sorted(self.entries)
        if keys and keys != list(range(1, len(keys) + 1)):
            raise ValueError("growth table domain must be 1..n")

    @classmethod
    def from_function(cls, f, n: int) -> GrowthTable:
        return cls({i: (f(i), True) for i in range(1, n + 1)})

    def value(self, n: int) -> int:
        return self.entries[n][0]

    @property
    def domain(self) -> range:
        return range(1, len(self.entries) + 1)

    @property
    def exact(self) -> bool:
        return all(e for _, e in self.entries.values())


def cyclic_representatives(n_gens: int, length: int) -> Iterator[Codes]:
    for w in reduced_words(n_gens, length):
        if length >= 2 and w[0] == w[-1] ^ 1:
            continue
        if canonical_codes(w) == w:
            yield w


def dehn_profile(
    g: GroupPresentation, max_n: int, b: SearchBudget | None = None, threads: int = 1
) -> GrowthTable:
    solver = AreaSolver(g)
    n = len(g.generators)
    entries: dict[int, tuple[int, bool]] = {}
    best, exact = 0, True

    def solve(w: Codes):
        word = g.generators.decode(w)
        budget = b.with_overrides(max_word_len=max(b.max_word_len, len(w))) if b else None
        return solver.solve(word, budget)

    for length in range(1, max_n + 1):
        cands = [w for w in cyclic_representatives(n, length) if solver.in_lattice(w)]
        for r in expand_frontier(cands, solve, threads):
            if isinstance(r, Trivial):
                best = max(best, r.area)
            elif isinstance(r, BudgetHit) or not r.proved:
                exact = False
        entries[length] = (best, exact)
    return GrowthTable(entries)


# ---------------------------------------------------------------------------
# derivations from computations


class _Tape:
    """The working word with per-letter ids so the moving marker can be followed."""

    def __init__(self, codes: Codes):
        self.codes = list(codes)
        self.ids = list(range(len(codes)))
        self.next_id = len(codes)

    def insert(self, pos: int, inst: Codes, mark: int | None) -> int | None:
        new_ids = list(range(self.next_id, self.next_id + len(inst)))
        self.next_id += len(inst)
        codes = self.codes[:pos] + list(inst) + self.codes[pos:]
        ids = self.ids[:pos] + new_ids + self.ids[pos:]
        sc: list[int] = []
        si: list[int] = []
        for c, i in zip(codes, ids):
            if sc and sc[-1] == c ^ 1:
                sc.pop()
                si.pop()
            else:
                sc.append(c)
                si.append(i)
        self.codes, self.ids = sc, si
        if mark is None:
            return None
        target = new_ids[mark]
        try:
            return si.index(target)
        except ValueError:
            return None


@dataclass(frozen=True)
class SynthesisReport:
    derivation: Derivation
    area: int
    bound: int
    C: int
    E: int


def rule_excess(m: SMachine) -> int:
    """Largest total number of tape letters outside the state span of V over a rule's parts."""
    best = 0
    for r in m.positive_rules:
        e = 0
        for part in r.parts:
            s, t = _core_bounds(m.hardware, part.V)
            e += s + (len(part.V) - t)
        best = max(best, e)
    return best


def synthesis_constant(m: SMachine) -> int:
    return 4 * (rule_excess(m) + 2) + 1


def synthesis_bound(comp: Computation, p: KappaParams, C: int) -> int:
    n = comp.length
    return C * (comp.area + p.N * n * comp.max_word_len() + 1)


def derive_from_computation(
    g: GroupPresentation, comp: Computation, p: KappaParams, m: SMachine | None = None
) -> Derivation:
    return synthesize(g, comp, p, m).derivation


def synthesize(
    g: GroupPresentation, comp: Computation, p: KappaParams, m: SMachine | None = None
) -> SynthesisReport:
    m = m or comp.machine
    if m is None:
        raise DerivationError("computation carries no machine")
    idx = RelatorIndex(g)
    alpha = g.generators
    hub = [r for r in g.relators if r.kind == "hub"]
    if len(hub) != 1:
        raise DerivationError(f"{g.name} must have exactly one hub relator")
    kappa_end = alpha.encode(kappa_word(comp.end.word, p))
    if canonical_codes(kappa_end) != alpha.encode(hub[0].word):
        raise DerivationError("computation does not end at the hub word (or N does not match)")
    for s in p.kappa_symbols:
        if s not in alpha:
            raise DerivationError(f"{s} is not a generator of {g.name}")

    start = kappa_word(comp.start.word, p)
    tape = _Tape(alpha.encode(start))
    steps: list[Step] = []
    T: list[int] = []  # reduced prefix of Theta letters
    kappa_codes = [alpha.code(l) for l in Word.parse(" ".join(p.kappa_symbols))]

    def insert(pos: int, inst: Codes, mark: int | None) -> int | None:
        steps.append(idx.step_for(pos, inst))
        return tape.insert(pos, inst, mark)

    def commute(mpos: int, mk: int, z: int) -> int | None:
        # m z -> z m
        return insert(mpos + 1, (mk ^ 1, z, mk, z ^ 1), 2)

    def conjugate(mpos: int, mk: int, z: int) -> int:
        # m -> z^-1 m z
        return insert(mpos + 1, (mk ^ 1, z ^ 1, mk, z), 2)

    for i, ref in enumerate(comp.history):
        W = comp.trace[i]
        rule = m.rule(ref)
        Wc = alpha.encode(W.word)
        theta = alpha.code(Word.parse(ref[0]).letters[0])
        g_code = theta if ref[1] > 0 else theta ^ 1
        mk = g_code ^ 1
        pos_k1 = len(T)
        assert tape.codes[pos_k1] == kappa_codes[0]
        # kappa1 -> g kappa1 g^-1
        mpos = insert(pos_k1, (g_code, kappa_codes[0], mk, kappa_codes[0] ^ 1), 2)
        T = list(reduce_codes(tuple(T) + (g_code,)))
        # blocks of this rule inside W: start index -> part
        blocks = {}
        for pi, part in enumerate(rule.parts):
            s = W.positions[m.hardware.component(part.U.letters[0].symbol) - 1]
            blocks[s] = (pi, part)
        nW = len(Wc)
        last = 4 * p.N
        for j in range(last):
            forward = j % 2 == 0
            t = 0
            while t < nW:
                if forward:
                    found = blocks.get(t)
                else:
                    found = None
                    for s0, (pi, pt) in blocks.items():
                        if nW - (s0 + len(pt.U)) == t:
                            found = (pi, pt)
                if found is None:
                    z = Wc[t] if forward else Wc[nW - 1 - t] ^ 1
                    assert tape.codes[mpos + 1] == z
                    mpos = commute(mpos, mk, z)
                    t += 1
                    continue
                pi, part = found
                U = alpha.encode(part.U)
                V = alpha.encode(part.V)
                if ref[1] > 0:
                    if forward:
                        # m U -> V m via V m U^-1 m^-1
                        inst = V + (mk,) + invert_codes(U) + (mk ^ 1,)
                        mpos = insert(mpos, inst, len(V))
                    else:
                        # m U^-1 -> V^-1 m via V^-1 m U m^-1
                        inst = invert_codes(V) + (mk,) + U + (mk ^ 1,)
                        mpos = insert(mpos, inst, len(V))
                else:
                    # inverse rule: U is the core V' of a positive part x V' y -> U'
                    pos_rule = m.rule((ref[0], 1))
                    orig = pos_rule.parts[pi]
                    PU = alpha.encode(orig.U)
                    PV = alpha.encode(orig.V)
                    a, e = _core_bounds(m.hardware, orig.V)
                    x, y = PV[:a], PV[e:]
                    if forward:
                        for z in reversed(x):
                            mpos = conjugate(mpos, mk, z)
                        # m x V' -> U m y^-1
                        inst = PU + (mk,) + invert_codes(PV) + (mk ^ 1,)
                        mpos = insert(mpos, inst, len(PU))
                        for z in invert_codes(y):
                            mpos = commute(mpos, mk, z)
                    else:
                        for z in reversed(invert_codes(y)):
                            mpos = conjugate(mpos, mk, z)
                        # m y^-1 V'^-1 -> U^-1 m x
                        inst = invert_codes(PU) + (mk,) + PV + (mk ^ 1,)
                        mpos = insert(mpos, inst, len(PU))
                        for z in x:
                            mpos = commute(mpos, mk, z)
                t += len(U)
            if j + 1 < last:
                mpos = commute(mpos, mk, kappa_codes[j + 1])
            if mpos is None and j + 1 < last:
                raise DerivationError("marker lost during synthesis")
        expected = tuple(T) + alpha.encode(kappa_word(comp.trace[i + 1].word, p)) + invert_codes(tuple(T))
        if tuple(tape.codes) != expected:
            raise DerivationError(f"synthesis went astray at step {i + 1}")
    hub_inv = invert_codes(alpha.encode(kappa_word(comp.end.word, p)))
    insert(len(T), hub_inv, None)
    if tape.codes:
        raise DerivationError("hub insertion did not close the derivation")
    d = Derivation(start, tuple(steps), Word())
    C = synthesis_constant(m)
    return SynthesisReport(d, len(steps), synthesis_bound(comp, p, C), C, rule_excess(m))


# ---------------------------------------------------------------------------
# disc relators


@dataclass(frozen=True)
class DiscOracle:
    machine: SMachine
    W0: AdmissibleWord
    params: KappaParams
    budget: SearchBudget | None = None


@dataclass(frozen=True)
class Accepted:
    orbit: CyclicWord
    computation: Computation

    verdict = "accepted"


@dataclass(frozen=True)
class NotAcceptedWithinBudget:
    reason: str

    verdict = "not-accepted"


def disc_relator(o: DiscOracle, W: AdmissibleWord) -> Union[Accepted, NotAcceptedWithinBudget]:
    r = search_reachable(o.machine, W, o.W0, o.budget)
    if not isinstance(r, Found):
        return NotAcceptedWithinBudget(r.verdict)
    m = o.machine
    kw = kappa_word(W.word, o.params)
    alpha = m.alphabet.extend(o.params.kappa_symbols)
    canon = canonical_codes(cyclic_reduce_codes(reduce_codes(alpha.encode(kw))))
    return Accepted(CyclicWord(alpha.decode(canon)), r.computation)

