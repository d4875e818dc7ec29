"""Compile an S-machine and a stop word into the presentation G_N(S)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .presentation import GroupPresentation, PresentationBuilder, PresentationError
from .smachine import AdmissibleWord, SMachine
from .words import Letter, Word, invert


class FreshSymbolClash(PresentationError):
    pass


class SmallNWarning(UserWarning):
    pass


@dataclass(frozen=True)
class KappaParams:
    N: int
    prefix: str = "kappa"

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be at least 1, got {self.N}")

    @property
    def kappa_symbols(self) -> tuple[str, ...]:
        return tuple(f"{self.prefix}{i}" for i in range(1, 4 * self.N + 1))


def kappa_word(W: Word, p: KappaParams) -> Word:
    """kappa_1 W kappa_2 W^-1 ... kappa_{4N-1} W kappa_{4N} W^-1."""
    inv = invert(W)
    letters: list[Letter] = []
    for i, k in enumerate(p.kappa_symbols):
        letters.append(Letter(k, 1))
        letters.extend((W if i % 2 == 0 else inv).letters)
    return Word(tuple(letters))


def transition_y_count(m: SMachine) -> int:
    """Largest number of tape letters in one transition relator of m."""
    tape = set(m.hardware.tape_letters)
    best = 0
    for r in m.positive_rules:
        for part in r.parts:
            n = sum(1 for l in part.U.letters + part.V.letters if l.symbol in tape)
            best = max(best, n)
    return best


def default_N(m: SMachine) -> int:
    """9ck with c twice the largest tape-letter count of a transition relator.

    With no tape letters in any transition relator c is 0 and 9k is used.
    """
    c = 2 * transition_y_count(m)
    k = max(m.k, 1)
    return 9 * c * k if c > 0 else 9 * k


def compile_gn(
    m: SMachine, W0: AdmissibleWord | Word | str, p: KappaParams | None = None, name: str | None = None
) -> GroupPresentation:
    if not isinstance(W0, AdmissibleWord):
        W0 = m.admissible(W0)
    if p is None:
        p = KappaParams(default_N(m))
    if p.N < 9:
        warnings.warn(f"N = {p.N} is below 9; the construction is only exercised mechanically", SmallNWarning, stacklevel=2)
    h = m.hardware
    theta = tuple(r.name for r in m.positive_rules)
    states = h.state_letters
    tape = h.tape_letters
    kappas = p.kappa_symbols
    machine_letters = set(states) | set(tape)
    for s in theta + kappas:
        if s in machine_letters:
            raise FreshSymbolClash(f"generator {s} collides with a machine letter")
    clash = set(theta) & set(kappas)
    if clash:
        raise FreshSymbolClash(f"rule names collide with kappa letters: {sorted(clash)}")

    b = PresentationBuilder(name or f"G_{p.N}({m.name})", theta + states + tape + kappas)
    b.add_class("theta", theta)
    for i, Qi in enumerate(h.Q, 1):
        b.add_class(f"Q{i}", Qi)
    b.add_class("Y", tape)
    for i, k in enumerate(kappas, 1):
        b.add_class(f"kappa{i}", (k,))

    for r in m.positive_rules:
        t = Word((Letter(r.name, 1),))
        ti = invert(t)
        touched = set()
        for part in r.parts:
            for l in part.U.letters:
                c = h.component(l.symbol)
                if c is not None:
                    touched.add(c)
            b.add(ti + part.U + t + invert(part.V), "transition")
        for j, Qj in enumerate(h.Q, 1):
            if j in touched:
                continue
            for q in Qj:
                qw = Word((Letter(q, 1),))
                b.add(ti + qw + t + invert(qw), "transition")
    for r in m.positive_rules:
        t = Word((Letter(r.name, 1),))
        for x in tape:
            xw = Word((Letter(x, 1),))
            b.add(t + xw + invert(t) + invert(xw), "auxiliary-Y")
        for k in kappas:
            kw = Word((Letter(k, 1),))
            b.add(t + kw + invert(t) + invert(kw), "auxiliary-kappa")
    b.add(kappa_word(W0.word, p), "hub")
    return b.build()


def kappa_count(g: GroupPresentation) -> int:
    n = 0
    while f"kappa{n + 1}" in g.classes:
        n += 1
    return n


def params_of(g: GroupPresentation) -> KappaParams:
    n = kappa_count(g)
    if n == 0 or n % 4:
        raise PresentationError(f"{g.name} has no kappa classes")
    return KappaParams(n // 4)


def machine_k(g: GroupPresentation) -> int:
    k = 0
    while f"Q{k + 1}" in g.classes:
        k += 1
    if k == 0:
        raise PresentationError(f"{g.name} has no state classes")
    return k - 1
