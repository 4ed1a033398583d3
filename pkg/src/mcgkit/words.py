"""Generator alphabet, word parsing/printing and free-group arithmetic.

Words are immutable tuples of signed letters; every operation returns a
fresh word so that proof replay has stable positions and cheap rollback.
Composition is read right to left: the leftmost letter acts last.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class WordSyntaxError(ValueError):
    """Raised when a word text fails to parse; carries the letter position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (letter {position})")
        self.position = position


class IndexRangeError(ValueError):
    """Raised when a symbol index falls outside 1..N for the given surface."""


@dataclass(frozen=True, order=True)
class GeneratorSymbol:
    """One Dehn-twist generator name.

    kind is one of "b" (the central twist), "bk" (handle twists b_k),
    "a" (the a_i family), "c" (the two-index c_{i,j} family) or "named"
    (free-form labels such as tau1, t1, x0, r2, E).
    """

    kind: str
    i: int = 0
    j: int = 0
    label: str = ""

    def __str__(self) -> str:
        if self.kind == "b":
            return "b"
        if self.kind == "bk":
            return f"b{self.i}"
        if self.kind == "a":
            return f"a{self.i}"
        if self.kind == "c":
            return f"c{{{self.i},{self.j}}}"
        return self.label


def b() -> GeneratorSymbol:
    return GeneratorSymbol("b")


def bk(k: int) -> GeneratorSymbol:
    if k < 1:
        raise IndexRangeError(f"b_k index must be >= 1, got {k}")
    return GeneratorSymbol("bk", i=k)


def a(i: int, n: int | None = None) -> GeneratorSymbol:
    if i < 1 or (n is not None and i > n):
        raise IndexRangeError(f"a index {i} outside 1..{n}")
    return GeneratorSymbol("a", i=i)


def c(i: int, j: int, n: int | None = None) -> GeneratorSymbol:
    """c_{i,j}; indices reduce cyclically into 1..n when n is supplied."""
    if n is not None:
        i = (i - 1) % n + 1
        j = (j - 1) % n + 1
    elif i < 1 or j < 1:
        raise IndexRangeError(f"c indices must be positive without a surface context: ({i},{j})")
    if i == j:
        raise ValueError(f"c indices must differ, got ({i},{j})")
    return GeneratorSymbol("c", i=i, j=j)


def named(label: str) -> GeneratorSymbol:
    if not label or " " in label:
        raise ValueError(f"bad generator label {label!r}")
    return GeneratorSymbol("named", label=label)


@dataclass(frozen=True, order=True)
class Letter:
    symbol: GeneratorSymbol
    sign: int  # +1 or -1

    def inverse(self) -> "Letter":
        return Letter(self.symbol, -self.sign)

    def __str__(self) -> str:
        return str(self.symbol) + ("'" if self.sign < 0 else "")


@dataclass(frozen=True)
class Word:
    """A finite sequence of letters; not reduced unless stated."""

    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return Word(self.letters[idx])
        return self.letters[idx]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __str__(self) -> str:
        return print_word(self)

    def __repr__(self) -> str:
        return f"Word({print_word(self)!r})"


EMPTY = Word()


def word(letters: Iterable[Letter]) -> Word:
    return Word(tuple(letters))


def letter(symbol: GeneratorSymbol, sign: int = 1) -> Letter:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +-1, got {sign}")
    return Letter(symbol, sign)


_ATOM_RE = re.compile(
    r"^(?:(?P<c>c\{(?P<ci>-?\d+),(?P<cj>-?\d+)\})|(?P<bk>b(?P<bki>[1-9]\d*))|(?P<a>a(?P<ai>[1-9]\d*))|(?P<b>b)|(?P<ident>[A-Za-z_][A-Za-z_0-9.\-]*))(?P<inv>'|\^-1)?$"
)


def parse_letter(token: str, n: int | None = None, position: int = 0) -> Letter:
    m = _ATOM_RE.match(token)
    if not m:
        raise WordSyntaxError(f"cannot parse letter {token!r}", position)
    sign = -1 if m.group("inv") else 1
    if m.group("c"):
        sym = c(int(m.group("ci")), int(m.group("cj")), n)
    elif m.group("bk"):
        sym = bk(int(m.group("bki")))
    elif m.group("a"):
        sym = a(int(m.group("ai")), n)
    elif m.group("b"):
        sym = b()
    else:
        sym = named(m.group("ident"))
    return Letter(sym, sign)


def parse_word(text: str, n: int | None = None) -> Word:
    """Parse a whitespace-separated word; left to right is composition order.

    When a surface context ``n`` (= 2g+n-2) is supplied, c-indices are
    normalized cyclically and a-indices are range checked.
    """
    out = []
    for pos, token in enumerate(text.split()):
        out.append(parse_letter(token, n, pos))
    return Word(tuple(out))


def print_word(w: Word) -> str:
    return " ".join(str(let) for let in w)


def free_reduce(w: Word) -> Word:
    """The unique freely reduced word equal to w; idempotent."""
    out: list[Letter] = []
    for let in w:
        if out and out[-1].symbol == let.symbol and out[-1].sign == -let.sign:
            out.pop()
        else:
            out.append(let)
    return Word(tuple(out))


def is_reduced(w: Word) -> bool:
    return all(
        not (w[k].symbol == w[k + 1].symbol and w[k].sign == -w[k + 1].sign)
        for k in range(len(w) - 1)
    )


def invert(w: Word) -> Word:
    return Word(tuple(let.inverse() for let in reversed(w.letters)))


def conjugate(y: Word, x: Word) -> Word:
    """free_reduce(y x y^-1), the paper's y(x)."""
    return free_reduce(y * x * invert(y))


def substitute(w: Word, pos: int, length: int, replacement: Word) -> Word:
    """Replace letters [pos, pos+length) by replacement, without reducing.

    Reduction is a separate explicit step so scripts stay position-stable.
    """
    if pos < 0 or length < 0 or pos + length > len(w):
        raise IndexError(
            f"substitute range [{pos}, {pos + length}) outside word of length {len(w)}"
        )
    return Word(w.letters[:pos] + replacement.letters + w.letters[pos + length:])


def cyclic_rotate(w: Word, offset: int) -> Word:
    if not w.letters:
        return w
    k = offset % len(w)
    return Word(w.letters[k:] + w.letters[:k])


def cyclic_reduce(w: Word) -> Word:
    w = free_reduce(w)
    while len(w) >= 2 and w[0].symbol == w[-1].symbol and w[0].sign == -w[-1].sign:
        w = free_reduce(Word(w.letters[1:-1]))
    return w


def conjugate_in_free(u: Word, v: Word) -> bool:
    """True iff u and v are conjugate in the free group."""
    cu, cv = cyclic_reduce(u), cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    return any(cyclic_rotate(cu, k) == cv for k in range(max(1, len(cu))))


def map_word(w: Word, images: Mapping[GeneratorSymbol, Word]) -> Word:
    """Apply the letterwise homomorphism given by generator images; reduced."""
    out: list[Letter] = []
    for let in w:
        img = images[let.symbol]
        piece = img if let.sign > 0 else invert(img)
        for x in piece:
            if out and out[-1].symbol == x.symbol and out[-1].sign == -x.sign:
                out.pop()
            else:
                out.append(x)
    return Word(tuple(out))


def alphabet(w: Word) -> set[GeneratorSymbol]:
    return {let.symbol for let in w}


def wpow(w: Word, k: int) -> Word:
    """w concatenated k times (k >= 0), or invert(w) concatenated -k times."""
    if k < 0:
        return wpow(invert(w), -k)
    return Word(w.letters * k)
