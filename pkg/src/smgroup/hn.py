"""The extension H_N(S), the copy G_b, and sigma-words."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .gn import kappa_count, machine_k
from .presentation import GroupPresentation, PresentationBuilder, PresentationError
from .smachine import AdmissibleWord, Report
from .words import IDENT_RE, Letter, Word

RHO = "rho"
D = "d"


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingProfile:
    name: str
    A: tuple[str, ...]
    B: tuple[str, ...]
    alpha: str
    delta: str
    omega: str
    z: tuple[Word, Word, Word, Word, Word]

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "B", tuple(self.B))
        z = tuple(Word.parse(x) if isinstance(x, str) else x for x in self.z)
        if len(z) != 5:
            raise ProfileError(f"need five z-words, got {len(z)}")
        object.__setattr__(self, "z", z)

    @property
    def specials(self) -> tuple[str, str, str]:
        return (self.alpha, self.delta, self.omega)

    @property
    def a_to_b(self) -> dict[str, str]:
        return dict(zip(self.A, self.B))

    def z_letters(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(l.symbol for zj in self.z for l in zj.letters))


def validate_profile(prof: EmbeddingProfile, g: GroupPresentation | None = None) -> Report:
    """Check the profile on its own and, if given, against a compiled G_N(S)."""
    report = Report()
    for s in prof.A + prof.B + prof.specials:
        if not IDENT_RE.match(s):
            report.add(f"bad symbol {s!r}")
    if len(prof.A) != len(prof.B):
        report.add(f"A has {len(prof.A)} letters but B has {len(prof.B)}")
    for name, letters in (("A", prof.A), ("B", prof.B)):
        if len(set(letters)) != len(letters):
            report.add(f"{name} lists a letter twice")
    if set(prof.A) & set(prof.B):
        report.add(f"A and B share {sorted(set(prof.A) & set(prof.B))}")
    if len(set(prof.specials)) != 3:
        report.add("alpha, delta, omega must be distinct")
    for s in prof.specials:
        if s in prof.A:
            report.add(f"special letter {s} lies in A")
    owner: dict[str, int] = {}
    for j, zj in enumerate(prof.z):
        for l in zj.letters:
            if l.sign < 0:
                report.add(f"z{j} contains an inverted letter {l}")
            if l.symbol in prof.A or l.symbol in prof.specials or l.symbol in prof.B:
                report.add(f"z{j} contains {l.symbol} from A, B or the special letters")
            if l.symbol in owner and owner[l.symbol] != j:
                report.add(f"{l.symbol} occurs in z{owner[l.symbol]} and z{j}")
            owner.setdefault(l.symbol, j)
    if g is None:
        return report
    gens = set(g.generators.symbols)
    tape = set(g.symbols_in("Y"))
    for s in prof.A:
        if s not in tape:
            report.add(f"A letter {s} is not a tape letter")
    for s in prof.specials:
        if s not in tape:
            report.add(f"special letter {s} is not a tape letter")
    for s in prof.B + (RHO, D):
        if s in gens:
            report.add(f"new letter {s} collides with a generator")
    try:
        k = machine_k(g)
    except PresentationError as exc:
        report.add(str(exc))
        return report
    comp = {}
    for i in range(1, k + 2):
        for q in g.symbols_in(f"Q{i}"):
            comp[q] = i
    seq = []
    for j, zj in enumerate(prof.z):
        for l in zj.letters:
            if l.symbol in comp:
                seq.append(comp[l.symbol])
            elif l.symbol not in tape:
                report.add(f"z{j} letter {l.symbol} is not a machine letter")
    if seq != list(range(1, k + 2)):
        report.add("z0..z4 must contain one state letter of each of Q1..Q%d in order" % (k + 1))
    return report


def _letter(s: str, sign: int = 1) -> Word:
    return Word((Letter(s, sign),))


def _comm(x: str, y: str) -> Word:
    return Word((Letter(x, 1), Letter(y, 1), Letter(x, -1), Letter(y, -1)))


def compile_hn(gn: GroupPresentation, prof: EmbeddingProfile, name: str | None = None) -> GroupPresentation:
    report = validate_profile(prof, gn)
    if not report.ok:
        raise ProfileError(str(report))
    nk = kappa_count(gn)
    kappas = [gn.symbols_in(f"kappa{i}")[0] for i in range(1, nk + 1)]
    b = PresentationBuilder(name or gn.name.replace("G_", "H_", 1), gn.generators.symbols + (RHO, D) + prof.B)
    for tag, syms in gn.classes.items():
        b.add_class(tag, syms)
    b.add_class("rho", (RHO,))
    b.add_class("d", (D,))
    b.add_class("B", prof.B)
    b.add_class("A", prof.A)
    for r in gn.relators:
        b.add(r.word, r.kind)

    zl = prof.z_letters()
    for x in prof.specials + prof.A + zl + tuple(kappas[2:]):
        b.add(_comm(RHO, x), "rho-rel")
    k1, k2 = kappas[0], kappas[1]
    # rho^-1 k1 rho = k1 d^-1 ; rho^-1 k2 rho = d k2
    b.add(_letter(RHO, -1) + _letter(k1) + _letter(RHO) + _letter(D) + _letter(k1, -1), "rho-rel")
    b.add(_letter(RHO, -1) + _letter(k2) + _letter(RHO) + _letter(k2, -1) + _letter(D, -1), "rho-rel")
    for x in prof.specials + zl:
        b.add(_comm(D, x), "d-rel")
    for a, bb in zip(prof.A, prof.B):
        # d^-1 a d = a b
        b.add(_letter(D, -1) + _letter(a) + _letter(D) + _letter(bb, -1) + _letter(a, -1), "d-rel")
    for a in prof.A:
        for bb in prof.B:
            b.add(_comm(a, bb), "AB-comm")
    return b.build()


@dataclass(frozen=True)
class GbPresentation:
    base: GroupPresentation
    copy: GroupPresentation


def transliterate(w: Word, mapping: dict[str, str]) -> Word:
    try:
        return Word(tuple(Letter(mapping[l.symbol], l.sign) for l in w.letters))
    except KeyError as exc:
        raise ProfileError(f"letter {exc.args[0]} has no image") from None


def gb_presentation(G: GroupPresentation, prof: EmbeddingProfile) -> GbPresentation:
    mapping = prof.a_to_b
    for s in G.generators:
        if s not in mapping:
            raise ProfileError(f"generator {s} of {G.name} is not in A")
    b = PresentationBuilder(G.name + "_b", tuple(mapping[s] for s in G.generators))
    for r in G.relators:
        b.add(transliterate(r.word, mapping), "G_b")
    return GbPresentation(G, b.build())


def sigma_word(prof: EmbeddingProfile, u: Word) -> Word:
    """z0 alpha^n z1 u z2 delta^n z3 omega^n z4 with n = |u|."""
    for l in u.letters:
        if l.symbol not in prof.A:
            raise ProfileError(f"{l.symbol} is not in A")
    if not u.is_reduced():
        raise ProfileError(f"{u} is not freely reduced")
    n = len(u)
    z0, z1, z2, z3, z4 = prof.z
    power = lambda s: Word((Letter(s, 1),) * n)  # noqa: E731
    return z0 + power(prof.alpha) + z1 + u + z2 + power(prof.delta) + z3 + power(prof.omega) + z4


@dataclass(frozen=True)
class Match:
    u: Word
    matched = True


@dataclass(frozen=True)
class NoMatch:
    reason: str
    matched = False


def validate_sigma_shape(prof: EmbeddingProfile, W: AdmissibleWord | Word) -> Union[Match, NoMatch]:
    letters = (W.word if isinstance(W, AdmissibleWord) else W).letters
    pos = 0

    def take_z(j: int) -> bool:
        nonlocal pos
        z = prof.z[j].letters
        if letters[pos : pos + len(z)] != z:
            return False
        pos += len(z)
        return True

    def take_power(s: str) -> int:
        nonlocal pos
        n = 0
        while pos < len(letters) and letters[pos] == Letter(s, 1):
            pos += 1
            n += 1
        return n

    if not take_z(0):
        return NoMatch("z0 absent")
    n_alpha = take_power(prof.alpha)
    if not take_z(1):
        return NoMatch("z1 absent")
    start = pos
    A = set(prof.A)
    while pos < len(letters) and letters[pos].symbol in A:
        pos += 1
    u = Word(letters[start:pos])
    if not take_z(2):
        return NoMatch("z2 absent")
    n_delta = take_power(prof.delta)
    if not take_z(3):
        return NoMatch("z3 absent")
    n_omega = take_power(prof.omega)
    if not take_z(4):
        return NoMatch("z4 absent")
    if pos != len(letters):
        return NoMatch("trailing letters after z4")
    if not u.is_reduced():
        return NoMatch("u is not reduced")
    if not n_alpha == n_delta == n_omega == len(u):
        return NoMatch(f"power mismatch: alpha^{n_alpha} delta^{n_delta} omega^{n_omega} but |u| = {len(u)}")
    return Match(u)

