"""Braid-group word problem via handle reduction.

A sigma_i-handle is a factor s_i^e u s_i^-e whose interior u only uses
generators with index > i.  Reducing the leftmost-closing handle strictly
normalizes: the procedure terminates, and the fully reduced word is empty
exactly when the braid is trivial (a handle-free nonempty word is sigma-
positive or sigma-negative in its lowest index, hence nontrivial).  This is
a complete decision procedure, not a heuristic.
"""

from __future__ import annotations

import re

from .words import Letter, Word, named, word

_SIGMA_RE = re.compile(r"^s([1-9]\d*)$")


class ForeignLetterError(ValueError):
    pass


def sigma(i: int) -> Letter:
    return Letter(named(f"s{i}"), 1)


def sigma_word(indices: list[int]) -> Word:
    """Word from signed indices: 3 means s3, -3 means s3^-1."""
    return word([Letter(named(f"s{abs(i)}"), 1 if i > 0 else -1) for i in indices])


def _to_indices(w: Word, strands: int) -> list[tuple[int, int]]:
    out = []
    for let in w:
        m = _SIGMA_RE.match(let.symbol.label) if let.symbol.kind == "named" else None
        if not m:
            raise ForeignLetterError(f"letter {let} is not a braid generator s1..s{strands - 1}")
        i = int(m.group(1))
        if not 1 <= i <= strands - 1:
            raise ForeignLetterError(f"generator index {i} outside 1..{strands - 1}")
        out.append((i, let.sign))
    return out


def _free_reduce_indices(letters: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for i, e in letters:
        if out and out[-1][0] == i and out[-1][1] == -e:
            out.pop()
        else:
            out.append((i, e))
    return out


def _first_handle(w: list[tuple[int, int]]) -> tuple[int, int] | None:
    """Leftmost-closing handle (s, t): w[s]=(i,e), w[t]=(i,-e), interior > i."""
    for t in range(len(w)):
        i, e = w[t]
        for s in range(t - 1, -1, -1):
            j, f = w[s]
            if j < i:
                break
            if j == i:
                if f == -e:
                    return (s, t)
                break
    return None


def _reduce_handle(w: list[tuple[int, int]], s: int, t: int) -> list[tuple[int, int]]:
    i, e = w[s]
    middle: list[tuple[int, int]] = []
    for j, f in w[s + 1:t]:
        if j == i + 1:
            middle += [(i + 1, -e), (i, f), (i + 1, e)]
        else:
            middle.append((j, f))
    return _free_reduce_indices(w[:s] + middle + w[t + 1:])


def handle_reduce(w: list[tuple[int, int]], max_steps: int = 2_000_000) -> list[tuple[int, int]]:
    w = _free_reduce_indices(w)
    for _ in range(max_steps):
        h = _first_handle(w)
        if h is None:
            return w
        w = _reduce_handle(w, *h)
    raise RuntimeError("handle reduction did not terminate within the step cap")


def braid_is_trivial(w: Word, strands: int) -> bool:
    return not handle_reduce(_to_indices(w, strands))


def braid_oracle_equal(w1: Word, w2: Word, strands: int) -> bool:
    """True iff w1 = w2 in the braid group on the given number of strands."""
    letters = _to_indices(w1, strands) + [(i, -e) for i, e in reversed(_to_indices(w2, strands))]
    return not handle_reduce(letters)
