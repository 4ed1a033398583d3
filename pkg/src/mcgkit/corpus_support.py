"""Authoring helpers for the derivation corpus.

The displayed computations lean on two mechanical patterns: rearranging a
positive twist word into another positive word using only braid/commute
moves (half-twist "staircase" identities), and conjugation bookkeeping
(insert u u^-1, rewrite a block, cancel).  positive_rearrange finds the
elementary move sequence for the first pattern with a guided search; the
result is replayed through the checker like every other step.
"""

from __future__ import annotations

import heapq
from typing import Sequence

from .presentations import IntersectionClass, Presentation, SurfaceParams, intersection_class
from .prover import ProofStep, ScriptBuilder, StepError, find_justification
from .words import Letter, Word, free_reduce, invert, print_word, word


class RearrangeError(RuntimeError):
    pass


def _pair_kind(pres_pairs: dict[tuple, str], x: Letter, y: Letter) -> str | None:
    return pres_pairs.get((x.symbol, y.symbol))


def _classify_pairs(p: SurfaceParams, symbols) -> dict[tuple, str]:
    table: dict[tuple, str] = {}
    for x in symbols:
        for y in symbols:
            if x == y:
                continue
            cls = intersection_class(x, y, p)
            if cls is IntersectionClass.ONCE:
                table[(x, y)] = "braid"
            elif cls is IntersectionClass.DISJOINT:
                table[(x, y)] = "comm"
    return table


def positive_rearrange(
    builder: ScriptBuilder,
    params: SurfaceParams,
    at: int,
    target: Word | str,
    max_nodes: int = 400_000,
) -> ScriptBuilder:
    """Rewrite the positive subword starting at `at` (same length as target)
    into `target` using braid and commutation moves only, found by guided
    best-first search and emitted as ordinary checked steps.
    """
    tgt = builder._word(target)
    n = len(tgt)
    src = builder.word[at:at + n]
    if any(let.sign < 0 for let in src) or any(let.sign < 0 for let in tgt):
        raise RearrangeError("positive_rearrange needs sign-positive words")
    symbols = {let.symbol for let in src} | {let.symbol for let in tgt}
    pairs = _classify_pairs(params, symbols)

    def mismatch(w: tuple) -> int:
        return sum(1 for a, b in zip(w, tgt.letters) if a != b)

    start = src.letters
    goal = tgt.letters
    if start == goal:
        return builder
    counter = 0
    heap = [(mismatch(start), 0, counter, start)]
    seen = {start: None}  # state -> (prev_state, move)
    while heap:
        f, g, _, state = heapq.heappop(heap)
        if state == goal:
            break
        if len(seen) > max_nodes:
            raise RearrangeError(
                f"rearrangement search exceeded {max_nodes} nodes: "
                f"{print_word(Word(start))!r} -> {print_word(tgt)!r}"
            )
        for pos in range(len(state) - 1):
            x, y = state[pos], state[pos + 1]
            kind = pairs.get((x.symbol, y.symbol))
            if kind == "comm":
                nxt = state[:pos] + (y, x) + state[pos + 2:]
                if nxt not in seen:
                    seen[nxt] = (state, ("swap", pos))
                    counter += 1
                    heapq.heappush(heap, (g + 1 + 2 * mismatch(nxt), g + 1, counter, nxt))
            if kind == "braid" and pos + 2 < len(state) and state[pos + 2] == x:
                nxt = state[:pos] + (y, x, y) + state[pos + 3:]
                if nxt not in seen:
                    seen[nxt] = (state, ("braid", pos))
                    counter += 1
                    heapq.heappush(heap, (g + 1 + 2 * mismatch(nxt), g + 1, counter, nxt))
    else:
        raise RearrangeError(
            f"no move sequence found: {print_word(Word(start))!r} -> {print_word(tgt)!r}"
        )
    moves = []
    state = goal
    while seen[state] is not None:
        prev, mv = seen[state]
        moves.append(mv)
        state = prev
    moves.reverse()
    for kind, pos in moves:
        if kind == "swap":
            builder.swap(at + pos)
        else:
            x, y = builder.word[at + pos], builder.word[at + pos + 1]
            builder.sub(at + pos, 3, word([y, x, y]))
    if builder.word[at:at + n] != tgt:
        raise RearrangeError("rearrangement replay mismatch")
    return builder


def staircase(chain: Sequence[Word | str], builderlike=None) -> None:
    raise NotImplementedError


def staircase_word(chain: Sequence[Letter]) -> Word:
    """The half-twist word (s1..sk)(s1..s_{k-1})...(s1) over the given chain."""
    letters: list[Letter] = []
    for top in range(len(chain), 0, -1):
        letters.extend(chain[:top])
    return Word(tuple(letters))


def conj_word(u: Word, x: Word) -> Word:
    """u x u^-1 as a plain (unreduced) word."""
    return u * x * invert(u)


def rewrite_conjugator_prefix(
    builder: ScriptBuilder,
    params: SurfaceParams,
    at: int,
    old_prefix_len: int,
    new_prefix: Word | str,
) -> ScriptBuilder:
    """Replace a positive conjugator prefix via positive_rearrange."""
    return positive_rearrange(builder, params, at, new_prefix)


def cancel_pair_run(builder: ScriptBuilder, at: int, count: int) -> ScriptBuilder:
    """Cancel `count` nested pairs meeting at position `at` (w w^-1 shape)."""
    for _ in range(count):
        builder.cancel(at - 1)
        at -= 1
    return builder
