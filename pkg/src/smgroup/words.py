"""Free-group words: letters, alphabets, free and cyclic reduction.

Text syntax is whitespace separated tokens, ``x`` for a positive letter and
``~x`` for its inverse.  The empty string is the empty word.

Internally the search engines work on tuples of small integers.  A letter
with alphabet index ``i`` is coded as ``2*i`` (sign +1) or ``2*i + 1``
(sign -1), so ``code ^ 1`` is the inverse letter and plain tuple comparison
orders words by (alphabet index, +1 before -1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*\Z")

Codes = tuple[int, ...]


class WordError(ValueError):
    pass


class AlphabetMismatch(WordError):
    pass


class EmptyCyclicWord(WordError):
    pass


class Letter(NamedTuple):
    symbol: str
    sign: int = 1

    def inverse(self) -> Letter:
        return Letter(self.symbol, -self.sign)

    def __str__(self) -> str:
        return self.symbol if self.sign > 0 else "~" + self.symbol


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        index: dict[str, int] = {}
        for s in symbols:
            if not isinstance(s, str) or not IDENT_RE.match(s):
                raise WordError(f"invalid symbol {s!r}")
            if s in index:
                raise WordError(f"duplicate symbol {s!r}")
            index[s] = len(index)
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._index

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise WordError(f"symbol {symbol!r} not in alphabet") from None

    def code(self, letter: Letter) -> int:
        return 2 * self.index(letter.symbol) + (letter.sign < 0)

    def letter(self, code: int) -> Letter:
        return Letter(self.symbols[code >> 1], -1 if code & 1 else 1)

    def encode(self, word: Word | Iterable[Letter]) -> Codes:
        index = self._index
        try:
            return tuple(2 * index[l.symbol] + (l.sign < 0) for l in word)
        except KeyError as exc:
            raise WordError(f"symbol {exc.args[0]!r} not in alphabet") from None

    def decode(self, codes: Iterable[int]) -> Word:
        syms = self.symbols
        return Word(tuple(Letter(syms[c >> 1], -1 if c & 1 else 1) for c in codes), self)

    def extend(self, more: Iterable[str]) -> Alphabet:
        return Alphabet(self.symbols + tuple(more))


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()
    alphabet: Alphabet | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        letters = tuple(l if isinstance(l, Letter) else Letter(*l) for l in self.letters)
        for l in letters:
            if l.sign not in (1, -1):
                raise WordError(f"bad sign in {l!r}")
            if self.alphabet is not None and l.symbol not in self.alphabet:
                raise WordError(f"symbol {l.symbol!r} not in alphabet")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> Word:
        letters = []
        for tok in text.split():
            sign = 1
            if tok.startswith("~"):
                sign, tok = -1, tok[1:]
            if not IDENT_RE.match(tok):
                raise WordError(f"bad token {tok!r} in word {text!r}")
            letters.append(Letter(tok, sign))
        return cls(tuple(letters), alphabet)

    def __str__(self) -> str:
        return " ".join(str(l) for l in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item], self.alphabet)
        return self.letters[item]

    def __add__(self, other: Word) -> Word:
        return Word(self.letters + other.letters, _common_alphabet(self, other))

    def __bool__(self) -> bool:
        return bool(self.letters)

    def symbols(self) -> set[str]:
        return {l.symbol for l in self.letters}

    def inverse(self) -> Word:
        return invert(self)

    def reduced(self) -> Word:
        return free_reduce(self)

    def is_reduced(self) -> bool:
        return all(a != b.inverse() for a, b in zip(self.letters, self.letters[1:]))

    def is_cyclically_reduced(self) -> bool:
        return self.is_reduced() and (
            len(self.letters) < 2 or self.letters[0] != self.letters[-1].inverse()
        )

    def rotate(self, k: int) -> Word:
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k], self.alphabet)


def word(text: str, alphabet: Alphabet | None = None) -> Word:
    return Word.parse(text, alphabet)


def _common_alphabet(w1: Word, w2: Word) -> Alphabet | None:
    a1, a2 = w1.alphabet, w2.alphabet
    if a1 is not None and a2 is not None and a1.symbols != a2.symbols:
        raise AlphabetMismatch(f"alphabets differ: {a1.symbols} vs {a2.symbols}")
    return a1 if a1 is not None else a2


def free_reduce(w: Word) -> Word:
    stack: list[Letter] = []
    for l in w.letters:
        if stack and stack[-1].symbol == l.symbol and stack[-1].sign == -l.sign:
            stack.pop()
        else:
            stack.append(l)
    return Word(tuple(stack), w.alphabet)


def invert(w: Word) -> Word:
    return Word(tuple(Letter(l.symbol, -l.sign) for l in reversed(w.letters)), w.alphabet)


def concat_reduce(w1: Word, w2: Word) -> Word:
    return free_reduce(w1 + w2)


def cyclic_reduce(w: Word) -> Word:
    letters = free_reduce(w).letters
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == letters[j - 1].inverse():
        i += 1
        j -= 1
    return Word(letters[i:j], w.alphabet)


@dataclass(frozen=True)
class CyclicWord:
    """Orbit of a nonempty word under cyclic shifts and inversion.

    ``canonical`` is the least representative in letter order.
    """

    canonical: Word

    def __str__(self) -> str:
        return str(self.canonical)

    def __len__(self) -> int:
        return len(self.canonical)


def _default_alphabet(w: Word) -> Alphabet:
    if w.alphabet is not None:
        return w.alphabet
    return Alphabet(tuple(sorted(w.symbols())))


def cyclic_canonical(w: Word, alphabet: Alphabet | None = None) -> CyclicWord:
    alphabet = alphabet or _default_alphabet(w)
    codes = cyclic_reduce_codes(reduce_codes(alphabet.encode(w)))
    if not codes:
        raise EmptyCyclicWord(f"{w} is trivial in the free group")
    return CyclicWord(alphabet.decode(canonical_codes(codes)))


# ---------------------------------------------------------------------------
# integer-code kernels (hot path)


def reduce_codes(seq: Iterable[int]) -> Codes:
    stack: list[int] = []
    push, pop = stack.append, stack.pop
    for c in seq:
        if stack and stack[-1] == c ^ 1:
            pop()
        else:
            push(c)
    return tuple(stack)


def invert_codes(codes: Sequence[int]) -> Codes:
    return tuple(c ^ 1 for c in reversed(codes))


def join_codes(a: Codes, b: Codes) -> Codes:
    """Free product of two reduced words; cancellation only at the seam."""
    n = min(len(a), len(b))
    k = 0
    la = len(a)
    while k < n and a[la - 1 - k] == b[k] ^ 1:
        k += 1
    if k == 0:
        return a + b
    return a[: la - k] + b[k:]


def cyclic_reduce_codes(codes: Codes) -> Codes:
    i, j = 0, len(codes)
    while j - i >= 2 and codes[i] == codes[j - 1] ^ 1:
        i += 1
        j -= 1
    return codes[i:j]


def core_offset(codes: Codes) -> int:
    """Length of the longest g with codes = g c g^-1 (c cyclically reduced)."""
    i, j = 0, len(codes)
    while j - i >= 2 and codes[i] == codes[j - 1] ^ 1:
        i += 1
        j -= 1
    return i


def least_rotation(codes: Codes) -> Codes:
    n = len(codes)
    if n < 2:
        return codes
    doubled = codes + codes
    return min(doubled[i : i + n] for i in range(n))


def canonical_codes(codes: Codes) -> Codes:
    """Least rotation of a cyclically reduced word or of its inverse."""
    if not codes:
        return codes
    a = least_rotation(codes)
    b = least_rotation(invert_codes(codes))
    return a if a <= b else b


def rotations(codes: Codes) -> list[Codes]:
    return [codes[i:] + codes[:i] for i in range(len(codes))]
