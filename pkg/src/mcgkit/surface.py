"""Genus-2 surface group with Dehn's algorithm, and the tabulated actions of
the five twists on the fundamental group of the closed genus-2 surface with
one marked point.

The single relator has no piece longer than one letter, so replacing any
subword longer than half of a cyclic rotation by the inverse of its
complement strictly shortens; the empty fixed point characterizes trivial
words (small cancellation well inside the required bound).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .words import (
    EMPTY,
    GeneratorSymbol,
    Letter,
    Word,
    a,
    b,
    bk,
    c,
    conjugate_in_free,
    cyclic_rotate,
    free_reduce,
    invert,
    map_word,
    named,
    parse_word,
    print_word,
    word,
    wpow,
)

X = tuple(named(f"x{i}") for i in range(4))

# x3 x2^-1 x1 x0^-1 x3^-1 x2 x1^-1 x0
RELATOR = parse_word("x3 x2' x1 x0' x3' x2 x1' x0")


def surface_word(text: str) -> Word:
    w = parse_word(text)
    bad = {let.symbol for let in w} - set(X)
    if bad:
        raise ValueError(f"not a surface word, foreign symbols {sorted(map(str, bad))}")
    return w


@lru_cache(maxsize=1)
def _half_table() -> dict[tuple[Letter, ...], Word]:
    """Maps each subword u with len(u) >= 5 of a rotation of R or R^-1 to the
    shorter word it equals (the inverse of the complementary part)."""
    table: dict[tuple[Letter, ...], Word] = {}
    for base in (RELATOR, invert(RELATOR)):
        for off in range(len(base)):
            rot = cyclic_rotate(base, off)
            for length in range(5, len(base) + 1):
                u = rot[:length]
                v = rot[length:]
                table.setdefault(u.letters, invert(v))
    return table


def dehn_reduce(w: Word) -> Word:
    """Iteratively replace the leftmost longest over-half relator subword by
    its shorter complement, then freely reduce; empty iff w is trivial."""
    table = _half_table()
    w = free_reduce(w)
    while True:
        best: tuple[int, int] | None = None  # (pos, length)
        for length in range(min(8, len(w)), 4, -1):
            for pos in range(len(w) - length + 1):
                if w[pos:pos + length].letters in table:
                    best = (pos, length)
                    break
            if best:
                break
        if best is None:
            return w
        pos, length = best
        repl = table[w[pos:pos + length].letters]
        w = free_reduce(w[:pos] * repl * w[pos + length:])


def is_trivial(w: Word) -> bool:
    return len(dehn_reduce(w)) == 0


def equal_in_surface_group(u: Word, v: Word) -> bool:
    return is_trivial(u * invert(v))


@dataclass(frozen=True)
class SurfaceAutomorphism:
    """Images of x0..x3; certified to preserve the relator up to conjugacy."""

    images: tuple[Word, Word, Word, Word]

    def __post_init__(self):
        img = self.apply(RELATOR)
        if not (conjugate_in_free(img, RELATOR) or conjugate_in_free(img, invert(RELATOR))):
            raise ValueError("images do not preserve the surface relator up to conjugacy")

    def mapping(self) -> dict[GeneratorSymbol, Word]:
        return dict(zip(X, self.images))

    def apply(self, w: Word) -> Word:
        return map_word(w, self.mapping())


def automorphism(images: Mapping[str, str]) -> SurfaceAutomorphism:
    return SurfaceAutomorphism(tuple(surface_word(images[f"x{i}"]) for i in range(4)))


IDENTITY = automorphism({"x0": "x0", "x1": "x1", "x2": "x2", "x3": "x3"})

# The tabulated actions of the five twists on pi_1 of the marked genus-2
# surface.  The second entry of the b_1 row is x3, not x2: the loops are
# defined by successive twist images (x1 = b(x0), x2 = a2(x1), x3 = b1(x2)),
# the row printed with b1(x2) = x2 fails to preserve the defining relation.
_ACTION_TABLES: dict[GeneratorSymbol, dict[str, str]] = {
    a(1): {"x0": "x0", "x1": "x1 x0'", "x2": "x2 x0'", "x3": "x3 x0'"},
    b(): {"x0": "x1", "x1": "x1 x0' x1", "x2": "x2", "x3": "x3"},
    a(2): {"x0": "x0", "x1": "x2", "x2": "x2 x1' x2", "x3": "x3"},
    bk(1): {"x0": "x0", "x1": "x1", "x2": "x3", "x3": "x3 x2' x3"},
    c(1, 2): {"x0": "x0", "x1": "x1", "x2": "x2", "x3": "x3 x2' x1 x0'"},
}

# Inverse rows solved once against the tables; the round-trip invariant
# (twist o inverse = identity) is enforced by the test suite.
_INVERSE_TABLES: dict[GeneratorSymbol, dict[str, str]] = {
    a(1): {"x0": "x0", "x1": "x1 x0", "x2": "x2 x0", "x3": "x3 x0"},
    b(): {"x0": "x0 x1' x0", "x1": "x0", "x2": "x2", "x3": "x3"},
    a(2): {"x0": "x0", "x1": "x1 x2' x1", "x2": "x1", "x3": "x3"},
    bk(1): {"x0": "x0", "x1": "x1", "x2": "x2 x3' x2", "x3": "x2"},
    c(1, 2): {"x0": "x0", "x1": "x1", "x2": "x2", "x3": "x3 x0 x1' x2"},
}

TWIST_GENERATORS = tuple(_ACTION_TABLES)


def twist_action(g: GeneratorSymbol, sign: int = 1) -> SurfaceAutomorphism:
    tables = _ACTION_TABLES if sign > 0 else _INVERSE_TABLES
    if g not in tables:
        raise KeyError(f"no tabulated action for {g}")
    return automorphism(tables[g])


def compose(f: SurfaceAutomorphism, h: SurfaceAutomorphism) -> SurfaceAutomorphism:
    """(f o h)(x) = f(h(x))."""
    return SurfaceAutomorphism(tuple(f.apply(h.images[i]) for i in range(4)))


def word_action(w: Word) -> SurfaceAutomorphism:
    """Composition of twist actions, rightmost letter applied first."""
    out = IDENTITY
    for let in reversed(w.letters):
        out = compose(twist_action(let.symbol, let.sign), out)
    return out


def automorphisms_equal(f: SurfaceAutomorphism, h: SurfaceAutomorphism) -> bool:
    return all(is_trivial(f.images[i] * invert(h.images[i])) for i in range(4))


def inner_automorphism(gamma: Word) -> SurfaceAutomorphism:
    return SurfaceAutomorphism(tuple(free_reduce(gamma * word([Letter(x, 1)]) * invert(gamma)) for x in X))


def _reduced_words_up_to(bound: int) -> Iterator[Word]:
    letters = [Letter(x, s) for x in X for s in (1, -1)]
    frontier: list[Word] = [EMPTY]
    yield EMPTY
    for _ in range(bound):
        nxt = []
        for w in frontier:
            for let in letters:
                if w.letters and w[-1].symbol == let.symbol and w[-1].sign == -let.sign:
                    continue
                grown = Word(w.letters + (let,))
                nxt.append(grown)
                yield grown
        frontier = nxt


def is_inner(f: SurfaceAutomorphism, bound: int) -> Word | None:
    """Search conjugators of reduced length <= bound; None is not a disproof."""
    for gamma in _reduced_words_up_to(bound):
        if automorphisms_equal(f, inner_automorphism(gamma)):
            return gamma
    return None


def normal_closure_ball(depth: int, max_length: int = 12) -> set[tuple[Letter, ...]]:
    """Freely reduced products of up to `depth` short conjugates of the
    relator, capped in length: a brute-force sample of the trivial words."""
    conjugators = [EMPTY] + [Word((Letter(x, s),)) for x in X for s in (1, -1)]
    conjugators += [
        free_reduce(u * v)
        for u in conjugators[1:]
        for v in conjugators[1:]
        if len(free_reduce(u * v)) == 2
    ]
    inserts = []
    for u in conjugators:
        for base in (RELATOR, invert(RELATOR)):
            inserts.append(free_reduce(u * base * invert(u)))
    ball = {EMPTY.letters}
    frontier = [EMPTY]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for ins in inserts:
                for pos in range(len(w) + 1):
                    grown = free_reduce(w[:pos] * ins * w[pos:])
                    if len(grown) <= max_length and grown.letters not in ball:
                        ball.add(grown.letters)
                        nxt.append(grown)
        frontier = nxt
    return ball
