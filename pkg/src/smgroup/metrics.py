"""Weighted lengths, the constants c and N, the preceq comparator, distortion trials."""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from typing import Iterable, Union

from .gn import machine_k
from .hn import GbPresentation
from .presentation import GroupPresentation, PresentationError
from .search import BudgetHit, SearchBudget
from .wordproblem import AreaSolver, Geodesic, GrowthTable, RelatorIndex, geodesic_length
from .words import Letter, Word, reduce_codes

VARIANTS = ("y", "y_theta", "y_b_theta")


class UnclassifiedLetter(ValueError):
    pass


@dataclass(frozen=True)
class Constants:
    c: int
    k: int
    N_default: int
    degenerate: bool


def compute_constants(g: GroupPresentation) -> Constants:
    if "Y" not in g.classes or "theta" not in g.classes:
        raise PresentationError(f"{g.name} lacks partition tags")
    k = machine_k(g)
    tape = set(g.classes["Y"])
    most = 0
    for r in g.relators:
        if r.kind == "transition":
            most = max(most, sum(1 for l in r.word.letters if l.symbol in tape))
    c = 2 * most
    kk = max(k, 1)
    if c == 0:
        return Constants(0, k, 9 * kk, True)
    return Constants(c, k, 9 * c * kk, False)


@dataclass(frozen=True)
class WeightScheme:
    c: int
    classes: dict[str, str]

    @property
    def theta_weight(self) -> int:
        return 4 * self.c

    @classmethod
    def from_presentation(cls, g: GroupPresentation, c: int | None = None) -> WeightScheme:
        if c is None:
            c = compute_constants(g).c
        return cls(c, g.class_of)


def weighted_length(w: Word, s: WeightScheme, variant: str = "y_b_theta") -> int:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    total = 0
    for l in w.letters:
        tag = s.classes.get(l.symbol)
        if tag is None:
            raise UnclassifiedLetter(f"{l.symbol} has no class")
        if tag in ("Y", "A"):
            total += 1
        elif tag == "B":
            total += variant == "y_b_theta"
        elif tag == "theta":
            total += s.theta_weight if variant != "y" else 0
    return total


# ---------------------------------------------------------------------------
# f preceq g


@dataclass(frozen=True)
class Holds:
    a: int
    b: int
    c: int
    d: int

    verdict = "holds"


@dataclass(frozen=True)
class NotFoundWithinBounds:
    verdict = "not-found"


def preceq_check(
    f: GrowthTable, g: GrowthTable, bounds: tuple[int, int, int, int] = (16, 16, 64, 64)
) -> Union[Holds, NotFoundWithinBounds]:
    """Smallest integer witness of f(n) <= a g(bn) + cn + d on the sampled domain.

    Candidates are ranked by (c + d, a + b, a, b, c, d).  A scale b is usable
    only if b*n lies in the domain of g for every tested n.
    """
    amax, bmax, cmax, dmax = bounds
    domain = [n for n in f.domain if n in g.entries]
    if not domain:
        raise ValueError("tables do not overlap")
    best = None
    for b in range(1, bmax + 1):
        if any(b * n not in g.entries for n in domain):
            break
        for a in range(amax + 1):
            for c in range(cmax + 1):
                d = max(0, max(f.value(n) - a * g.value(b * n) - c * n for n in domain))
                if d > dmax:
                    continue
                key = (c + d, a + b, a, b, c, d)
                if best is None or key < best:
                    best = key
    if best is None:
        return NotFoundWithinBounds()
    return Holds(*best[2:])


def growth_csv(t: GrowthTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "value", "exact"])
    for n in t.domain:
        v, e = t.entries[n]
        w.writerow([n, v, str(e).lower()])
    return buf.getvalue()


def read_growth_csv(text: str) -> GrowthTable:
    rows = list(csv.DictReader(io.StringIO(text)))
    return GrowthTable({int(r["n"]): (int(r["value"]), r["exact"].strip().lower() == "true") for r in rows})


# ---------------------------------------------------------------------------
# distortion


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    u: Word
    v: Word
    L: int
    R: int
    holds: bool
    exact: bool


def perturb(h: GroupPresentation, u: Word, count: int, rng: random.Random, index: RelatorIndex | None = None) -> Word:
    """Insert ``count`` random relator instances of h at random positions."""
    index = index or RelatorIndex(h)
    insts = sorted(index.instances)
    codes = reduce_codes(h.generators.encode(u))
    for _ in range(count):
        inst = insts[rng.randrange(len(insts))]
        pos = rng.randrange(len(codes) + 1)
        codes = reduce_codes(codes[:pos] + inst + codes[pos:])
    return h.generators.decode(codes)


def distortion_trial(
    gb: GbPresentation,
    h: GroupPresentation,
    s: WeightScheme,
    u: Word,
    perturbations: int,
    b: SearchBudget | None = None,
    seed: int = 0,
    index: RelatorIndex | None = None,
    solver: AreaSolver | None = None,
) -> TrialRecord:
    rng = random.Random(seed)
    v = perturb(h, u, perturbations, rng, index)
    geo = geodesic_length(gb.copy, u, b, solver)
    R = weighted_length(v, s, "y_b_theta")
    if isinstance(geo, BudgetHit):
        return TrialRecord(seed, u, v, -1, R, False, False)
    assert isinstance(geo, Geodesic)
    return TrialRecord(seed, Word(u.letters), Word(v.letters), geo.length, R, geo.length <= R, geo.exact)


def distortion_trials(
    gb: GbPresentation,
    h: GroupPresentation,
    trials: int,
    seed: int = 0,
    perturbations: int = 3,
    max_u: int = 6,
    b: SearchBudget | None = None,
) -> list[TrialRecord]:
    """Seeded batch: each trial draws u with |u| <= max_u and up to ``perturbations`` insertions."""
    scheme = WeightScheme.from_presentation(h)
    index = RelatorIndex(h)
    solver = AreaSolver(gb.copy)
    rng = random.Random(seed)
    records = []
    for _ in range(trials):
        s = rng.randrange(2**31)
        trng = random.Random(s)
        u = random_reduced_word(gb.copy.generators.symbols, trng.randrange(max_u + 1), trng)
        k = trng.randrange(perturbations + 1)
        records.append(distortion_trial(gb, h, scheme, u, k, b, s, index, solver))
    return records


def random_reduced_word(symbols: tuple[str, ...], length: int, rng: random.Random) -> Word:
    letters: list[Letter] = []
    while len(letters) < length:
        l = Letter(symbols[rng.randrange(len(symbols))], rng.choice((1, -1)))
        if letters and letters[-1] == l.inverse():
            continue
        letters.append(l)
    return Word(tuple(letters))


def trials_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["seed", "u", "v", "L", "R", "holds"])
    for r in records:
        w.writerow([r.seed, str(r.u), str(r.v), r.L, r.R, str(r.holds).lower()])
    return buf.getvalue()
