"""Finite group presentations with relators stored as canonical cyclic orbits."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .words import (
    Alphabet,
    Codes,
    Word,
    WordError,
    canonical_codes,
    cyclic_reduce_codes,
    invert_codes,
    reduce_codes,
)

RELATOR_KINDS = (
    "transition",
    "auxiliary-Y",
    "auxiliary-kappa",
    "hub",
    "rho-rel",
    "d-rel",
    "AB-comm",
    "G_b",
    "user",
)


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Relator:
    word: Word
    kind: str = "user"

    def __str__(self) -> str:
        return str(self.word)

    def __len__(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class GroupPresentation:
    name: str
    generators: Alphabet
    relators: tuple[Relator, ...] = ()
    classes: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __hash__(self) -> int:
        return hash((self.name, self.generators.symbols, self.relators))

    @property
    def class_of(self) -> dict[str, str]:
        """Primary class tag of each classified symbol ("A" only if in no other class)."""
        out: dict[str, str] = {}
        for tag, syms in self.classes.items():
            for s in syms:
                if tag == "A" and s in out:
                    continue
                out[s] = tag
        return out

    def symbols_in(self, tag: str) -> tuple[str, ...]:
        return tuple(self.classes.get(tag, ()))

    def relators_of(self, *kinds: str) -> list[Relator]:
        return [r for r in self.relators if r.kind in kinds]

    def orbit_codes(self) -> list[Codes]:
        return [self.generators.encode(r.word) for r in self.relators]

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)


class PresentationBuilder:
    """Accumulates relators as canonical orbits, merging duplicates."""

    def __init__(self, name: str, generators: Iterable[str]):
        self.name = name
        self.generators = Alphabet(tuple(generators))
        self.classes: dict[str, tuple[str, ...]] = {}
        self._relators: list[Relator] = []
        self._seen: set[Codes] = set()

    def add_class(self, tag: str, symbols: Iterable[str]) -> None:
        syms = tuple(symbols)
        for s in syms:
            if s not in self.generators:
                raise PresentationError(f"class {tag}: {s} is not a generator")
        self.classes[tag] = self.classes.get(tag, ()) + syms

    def add(self, w: Word, kind: str = "user") -> bool:
        """Add the orbit of w; returns False if it was trivial or already present."""
        if kind not in RELATOR_KINDS:
            raise PresentationError(f"unknown relator kind {kind!r}")
        try:
            codes = self.generators.encode(w)
        except WordError as exc:
            raise PresentationError(f"relator {w}: {exc}") from None
        core = cyclic_reduce_codes(reduce_codes(codes))
        if not core:
            return False
        canon = canonical_codes(core)
        if canon in self._seen:
            return False
        self._seen.add(canon)
        self._relators.append(Relator(self.generators.decode(canon), kind))
        return True

    def build(self) -> GroupPresentation:
        return GroupPresentation(self.name, self.generators, tuple(self._relators), dict(self.classes))


def make_presentation(
    name: str,
    generators: Iterable[str],
    relators: Iterable[Word | str | tuple[Word | str, str]],
    classes: Mapping[str, Iterable[str]] | None = None,
) -> GroupPresentation:
    b = PresentationBuilder(name, generators)
    for tag, syms in (classes or {}).items():
        b.add_class(tag, syms)
    for r in relators:
        kind = "user"
        if isinstance(r, tuple):
            r, kind = r
        if isinstance(r, str):
            r = Word.parse(r)
        b.add(r, kind)
    return b.build()


def relator_instances(canon: Codes) -> list[Codes]:
    """Distinct cyclic shifts of a relator and of its inverse."""
    seen: dict[Codes, None] = {}
    for base in (canon, invert_codes(canon)):
        for s in range(len(base)):
            seen.setdefault(base[s:] + base[:s], None)
    return list(seen)


@dataclass(frozen=True)
class KindCount:
    orbits: int
    expanded: int
    max_length: int


@dataclass(frozen=True)
class Census:
    kinds: dict[str, KindCount]
    generator_counts: dict[str, int]
    total_generators: int

    def count(self, kind: str) -> int:
        return self.kinds[kind].orbits if kind in self.kinds else 0

    def rows(self) -> list[tuple[str, int, int, int]]:
        return [(k, v.orbits, v.expanded, v.max_length) for k, v in self.kinds.items()]


def relation_census(g: GroupPresentation) -> Census:
    kinds: dict[str, list[int]] = {}
    for r in g.relators:
        entry = kinds.setdefault(r.kind, [0, 0, 0])
        codes = g.generators.encode(r.word)
        entry[0] += 1
        entry[1] += len(relator_instances(codes))
        entry[2] = max(entry[2], len(codes))
    ordered = {k: KindCount(*kinds[k]) for k in RELATOR_KINDS if k in kinds}
    counts = {tag: len(syms) for tag, syms in g.classes.items()}
    return Census(ordered, counts, len(g.generators))
