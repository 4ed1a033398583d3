"""Replay and validate relator-substitution derivations, search for short
derivations, and verify homomorphisms between presentations.

A substitution step is certified positionally: the removed segment times the
inverse of the replacement must freely reduce to a cyclic rotation of the
justifying relator or of its inverse.  Scripts never reduce implicitly;
cancellation is an explicit step, so positions stay stable under replay.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Sequence

from .presentations import Presentation, Relator
from .words import (
    EMPTY,
    GeneratorSymbol,
    Letter,
    Word,
    cyclic_rotate,
    free_reduce,
    invert,
    map_word,
    parse_letter,
    parse_word,
    print_word,
    substitute,
    word,
)


class StepError(ValueError):
    pass


@dataclass(frozen=True)
class Justification:
    relator_id: str
    inverted: bool = False
    offset: int = 0

    def __str__(self) -> str:
        out = self.relator_id
        if self.inverted:
            out += " inv"
        if self.offset:
            out += f" rot {self.offset}"
        return out


@dataclass(frozen=True)
class ProofStep:
    kind: str  # "sub" | "ins" | "del"
    pos: int
    length: int = 0
    replacement: Word = EMPTY
    letter: Letter | None = None
    just: Justification | None = None

    def __str__(self) -> str:
        if self.kind == "sub":
            return f"sub {self.pos} {self.length} -> {print_word(self.replacement)} by {self.just}"
        if self.kind == "ins":
            return f"ins {self.pos} {self.letter}"
        return f"del {self.pos}"


@dataclass(frozen=True)
class ProofScript:
    name: str
    presentation_name: str
    start: Word
    steps: tuple[ProofStep, ...]
    end: Word


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    script_name: str
    failed_step: int | None = None
    reason: str = ""
    final: Word = EMPTY


def justification_target(p: Presentation, just: Justification) -> Word:
    base = p.relator(just.relator_id).word
    if just.inverted:
        base = invert(base)
    return cyclic_rotate(base, just.offset)


def check_step(p: Presentation, w: Word, s: ProofStep) -> Word:
    """Validate one step against w and return the rewritten (unreduced) word."""
    if s.kind == "ins":
        if not 0 <= s.pos <= len(w):
            raise StepError(f"insert position {s.pos} outside word of length {len(w)}")
        if s.letter is None:
            raise StepError("free-insert needs a letter")
        return substitute(w, s.pos, 0, word([s.letter, s.letter.inverse()]))
    if s.kind == "del":
        if not 0 <= s.pos <= len(w) - 2:
            raise StepError(f"cancel position {s.pos} outside word of length {len(w)}")
        x, y = w[s.pos], w[s.pos + 1]
        if not (x.symbol == y.symbol and x.sign == -y.sign):
            raise StepError(f"letters at {s.pos} do not cancel: {x} {y}")
        return substitute(w, s.pos, 2, EMPTY)
    if s.kind != "sub":
        raise StepError(f"unknown step kind {s.kind!r}")
    if s.just is None:
        raise StepError("relator substitution needs a justification")
    if s.pos < 0 or s.length < 0 or s.pos + s.length > len(w):
        raise StepError(f"substitution range [{s.pos},{s.pos + s.length}) outside word")
    removed = w[s.pos:s.pos + s.length]
    try:
        target = justification_target(p, s.just)
    except KeyError as e:
        raise StepError(str(e)) from None
    if free_reduce(removed * invert(s.replacement)) != target:
        raise StepError(
            f"substitution not certified by {s.just}: removed {print_word(removed)!r}, "
            f"replacement {print_word(s.replacement)!r}"
        )
    return substitute(w, s.pos, s.length, s.replacement)


def check_script(p: Presentation, s: ProofScript) -> CheckReport:
    w = s.start
    for i, step in enumerate(s.steps):
        try:
            w = check_step(p, w, step)
        except StepError as e:
            return CheckReport(False, s.name, i, str(e), w)
    if free_reduce(w) != free_reduce(s.end):
        return CheckReport(
            False, s.name, None,
            f"final word {print_word(free_reduce(w))!r} differs from end "
            f"{print_word(free_reduce(s.end))!r}", w,
        )
    return CheckReport(True, s.name, None, "", w)


# -- Justification search -----------------------------------------------

# keyed by id(); the presentation object is retained so the id stays valid
_ROTATION_CACHE: dict[int, tuple[Presentation, dict[Word, Justification]]] = {}


def _rotation_table(p: Presentation) -> dict[Word, Justification]:
    entry = _ROTATION_CACHE.get(id(p))
    if entry is None:
        table: dict[Word, Justification] = {}
        for r in p.relators:
            for inverted in (False, True):
                base = invert(r.word) if inverted else r.word
                for off in range(max(1, len(base))):
                    rot = cyclic_rotate(base, off)
                    table.setdefault(rot, Justification(r.id, inverted, off))
        _ROTATION_CACHE[id(p)] = entry = (p, table)
    return entry[1]


def find_justification(p: Presentation, removed: Word, replacement: Word) -> Justification:
    """A justification certifying removed -> replacement, if any relator does."""
    d = free_reduce(removed * invert(replacement))
    just = _rotation_table(p).get(d)
    if just is None:
        raise StepError(
            f"no relator certifies {print_word(removed)!r} -> {print_word(replacement)!r}"
        )
    return just


# -- Script builder (authoring API) --------------------------------------


class ScriptBuilder:
    """Incrementally build a checked script; every push replays check_step."""

    def __init__(self, pres: Presentation, start: Word | str, name: str, n: int | None = None):
        self.pres = pres
        self.n = n
        self.name = name
        self.start = self._word(start)
        self.word = self.start
        self.steps: list[ProofStep] = []

    def _word(self, w: Word | str) -> Word:
        return parse_word(w, self.n) if isinstance(w, str) else w

    def _push(self, step: ProofStep) -> "ScriptBuilder":
        self.word = check_step(self.pres, self.word, step)
        self.steps.append(step)
        return self

    def find(self, pattern: Word | str, occurrence: int = 0, start: int = 0) -> int:
        pat = self._word(pattern)
        seen = 0
        for pos in range(start, len(self.word) - len(pat) + 1):
            if self.word[pos:pos + len(pat)] == pat:
                if seen == occurrence:
                    return pos
                seen += 1
        raise StepError(
            f"pattern {print_word(pat)!r} (occurrence {occurrence}) not in "
            f"{print_word(self.word)!r}"
        )

    def sub(self, pos: int, length: int, replacement: Word | str,
            just: Justification | None = None) -> "ScriptBuilder":
        repl = self._word(replacement)
        if just is None:
            just = find_justification(self.pres, self.word[pos:pos + length], repl)
        return self._push(ProofStep("sub", pos, length, repl, just=just))

    def apply(self, before: Word | str, after: Word | str, occurrence: int = 0,
              at: int | None = None) -> "ScriptBuilder":
        """Replace the given occurrence of `before` by `after`, auto-justified."""
        bef = self._word(before)
        pos = at if at is not None else self.find(bef, occurrence)
        if self.word[pos:pos + len(bef)] != bef:
            raise StepError(f"pattern {print_word(bef)!r} not at position {pos}")
        return self.sub(pos, len(bef), after)

    def swap(self, pos: int) -> "ScriptBuilder":
        """Commute the two letters at pos, pos+1."""
        x, y = self.word[pos], self.word[pos + 1]
        return self.sub(pos, 2, word([y, x]))

    def move_left(self, pos: int, count: int) -> "ScriptBuilder":
        """Bubble the letter at pos leftwards across `count` commuting letters."""
        for k in range(count):
            self.swap(pos - 1 - k)
        return self

    def move_right(self, pos: int, count: int) -> "ScriptBuilder":
        for k in range(count):
            self.swap(pos + k)
        return self

    def commute_block(self, pos: int, left_len: int, right_len: int) -> "ScriptBuilder":
        """Exchange the adjacent blocks [pos, pos+left_len) and the following
        right_len letters, one elementary swap at a time."""
        for i in range(right_len):
            self.move_left(pos + left_len + i, left_len)
        return self

    def ins(self, pos: int, let: Letter | str) -> "ScriptBuilder":
        if isinstance(let, str):
            let = parse_letter(let, self.n)
        return self._push(ProofStep("ins", pos, letter=let))

    def ins_conj(self, pos: int, w: Word | str) -> "ScriptBuilder":
        """Insert w * w^-1 at pos, letter pair by letter pair."""
        w = self._word(w)
        for i, let in enumerate(w):
            self.ins(pos + i, let)
        return self

    def cancel(self, pos: int) -> "ScriptBuilder":
        return self._push(ProofStep("del", pos))

    def reduce_all(self) -> "ScriptBuilder":
        """Emit cancellation steps (leftmost pair first) until reduced."""
        while True:
            for pos in range(len(self.word) - 1):
                x, y = self.word[pos], self.word[pos + 1]
                if x.symbol == y.symbol and x.sign == -y.sign:
                    self.cancel(pos)
                    break
            else:
                return self

    def reduce_span(self, lo: int, hi: int) -> "ScriptBuilder":
        """Cancel only inside [lo, hi); bounds track the shrinking word."""
        while True:
            for pos in range(lo, min(hi, len(self.word)) - 1):
                x, y = self.word[pos], self.word[pos + 1]
                if x.symbol == y.symbol and x.sign == -y.sign:
                    self.cancel(pos)
                    hi -= 2
                    break
            else:
                return self

    def splice(self, steps: Iterable[ProofStep], at: int) -> "ScriptBuilder":
        """Replay the given steps shifted to act on the subword starting at `at`."""
        for s in steps:
            self._push(replace(s, pos=s.pos + at))
        return self

    def splice_script(self, script: ProofScript, at: int) -> "ScriptBuilder":
        sub = self.word[at:at + len(script.start)]
        if sub != script.start:
            raise StepError(
                f"splice of {script.name} expects {print_word(script.start)!r} at {at}, "
                f"found {print_word(sub)!r}"
            )
        return self.splice(script.steps, at)

    def expect(self, w: Word | str) -> "ScriptBuilder":
        """Authoring assertion: the current word must equal w exactly."""
        w = self._word(w)
        if self.word != w:
            raise StepError(
                f"expected {print_word(w)!r}, have {print_word(self.word)!r}"
            )
        return self

    def finish(self, end: Word | str | None = None) -> ProofScript:
        end_word = self.word if end is None else self._word(end)
        script = ProofScript(self.name, self.pres.name, self.start, tuple(self.steps), end_word)
        report = check_script(self.pres, script)
        if not report.ok:
            raise StepError(f"built script fails its own check: {report.reason}")
        return script


# -- Script transforms (authoring) ----------------------------------------


def replay_words(p: Presentation, script: ProofScript) -> list[Word]:
    """All intermediate words w_0 = start .. w_k of a valid script."""
    words = [script.start]
    for s in script.steps:
        words.append(check_step(p, words[-1], s))
    return words


def reverse_script(p: Presentation, script: ProofScript, name: str | None = None) -> ProofScript:
    """The inverse derivation, from end back to start."""
    ws = replay_words(p, script)
    steps: list[ProofStep] = []
    for w, s in zip(reversed(ws[:-1]), reversed(script.steps)):
        if s.kind == "ins":
            steps.append(ProofStep("del", s.pos))
        elif s.kind == "del":
            steps.append(ProofStep("ins", s.pos, letter=w[s.pos]))
        else:
            removed = w[s.pos:s.pos + s.length]
            just = find_justification(p, s.replacement, removed)
            steps.append(ProofStep("sub", s.pos, len(s.replacement), removed, just=just))
    out = ProofScript(name or script.name + "~rev", script.presentation_name,
                      ws[-1], tuple(steps), script.start)
    report = check_script(p, out)
    if not report.ok:
        raise StepError(f"reversed script fails: {report.reason}")
    return out


def mirror_script(p: Presentation, script: ProofScript, name: str | None = None) -> ProofScript:
    """The derivation on inverse words: proves invert(start) -> invert(end)."""
    ws = replay_words(p, script)
    steps: list[ProofStep] = []
    for w, s in zip(ws[:-1], script.steps):
        n = len(w)
        if s.kind == "ins":
            # invert(l l^-1) is the same pair, re-inserted at the mirror position
            steps.append(ProofStep("ins", n - s.pos, letter=s.letter))
        elif s.kind == "del":
            steps.append(ProofStep("del", n - s.pos - 2))
        else:
            removed = w[s.pos:s.pos + s.length]
            new_repl = invert(s.replacement)
            just = find_justification(p, invert(removed), new_repl)
            steps.append(ProofStep("sub", n - s.pos - s.length, s.length, new_repl, just=just))
    out = ProofScript(name or script.name + "~mir", script.presentation_name,
                      invert(script.start), tuple(steps), invert(script.end))
    report = check_script(p, out)
    if not report.ok:
        raise StepError(f"mirrored script fails: {report.reason}")
    return out


def rename_script(
    p_from: Presentation,
    p_to: Presentation,
    script: ProofScript,
    symbol_map: Mapping[GeneratorSymbol, GeneratorSymbol],
    name: str,
) -> ProofScript:
    """Transport a script along a bijective relabeling of generators."""

    def ren_word(w: Word) -> Word:
        return word([Letter(symbol_map[let.symbol], let.sign) for let in w])

    ws = replay_words(p_from, script)
    steps: list[ProofStep] = []
    for w, s in zip(ws[:-1], script.steps):
        if s.kind == "ins":
            steps.append(ProofStep("ins", s.pos, letter=Letter(symbol_map[s.letter.symbol], s.letter.sign)))
        elif s.kind == "del":
            steps.append(s)
        else:
            removed = ren_word(w[s.pos:s.pos + s.length])
            repl = ren_word(s.replacement)
            just = find_justification(p_to, removed, repl)
            steps.append(ProofStep("sub", s.pos, s.length, repl, just=just))
    out = ProofScript(name, p_to.name, ren_word(script.start), tuple(steps), ren_word(script.end))
    report = check_script(p_to, out)
    if not report.ok:
        raise StepError(f"renamed script fails: {report.reason}")
    return out


# -- Bounded search --------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 3
    max_length: int = 24
    relator_ids: frozenset[str] | None = None

    def __post_init__(self):
        if self.max_depth < 1 or self.max_length < 0:
            raise ValueError("search bounds must be positive")


def _search_rules(p: Presentation, cfg: SearchConfig) -> list[tuple[Word, Word, Justification]]:
    rules: dict[tuple[Word, Word], Justification] = {}
    for r in p.relators:
        if cfg.relator_ids is not None and r.id not in cfg.relator_ids:
            continue
        for inverted in (False, True):
            base = invert(r.word) if inverted else r.word
            for off in range(max(1, len(base))):
                rot = cyclic_rotate(base, off)
                for split in range(len(rot) + 1):
                    u, v = rot[:split], invert(rot[split:])
                    rules.setdefault((u, v), Justification(r.id, inverted, off))
    return [(u, v, j) for (u, v), j in rules.items()]


def search_equal(p: Presentation, w1: Word, w2: Word, cfg: SearchConfig) -> ProofScript | None:
    """Breadth-first search for a derivation w1 -> w2; absence proves nothing."""
    rules = _search_rules(p, cfg)
    start, goal = free_reduce(w1), free_reduce(w2)
    parent: dict[Word, tuple[Word, int, Word, Word, Justification] | None] = {start: None}
    frontier = [start]
    found = start == goal
    depth = 0
    while not found and frontier and depth < cfg.max_depth:
        depth += 1
        nxt = []
        for w in frontier:
            for u, v, just in rules:
                span = len(u)
                if len(w) - span + len(v) > cfg.max_length:
                    continue
                for pos in range(len(w) - span + 1):
                    if w[pos:pos + span] != u:
                        continue
                    res = free_reduce(substitute(w, pos, span, v))
                    if res in parent:
                        continue
                    parent[res] = (w, pos, u, v, just)
                    nxt.append(res)
                    if res == goal:
                        found = True
                        break
                if found:
                    break
            if found:
                break
        frontier = nxt
    if not found:
        return None
    # reconstruct the chain of moves goal <- ... <- start
    chain = []
    node = goal
    while parent[node] is not None:
        prev, pos, u, v, just = parent[node]
        chain.append((prev, pos, u, v, just))
        node = prev
    chain.reverse()
    builder = ScriptBuilder(p, w1, "search")
    builder.reduce_all()
    for prev, pos, u, v, just in chain:
        assert builder.word == prev
        builder.sub(pos, len(u), v, just)
        builder.reduce_all()
    return builder.finish(w2)


# -- Homomorphism verification ---------------------------------------------


@dataclass(frozen=True)
class HomItem:
    relator_id: str
    ok: bool
    method: str
    reason: str = ""


@dataclass(frozen=True)
class HomReport:
    ok: bool
    items: tuple[HomItem, ...]


def verify_homomorphism(
    src: Presentation,
    images: Mapping[GeneratorSymbol, Word],
    tgt: Presentation,
    certificates: Mapping[str, ProofScript] | None = None,
    fallback: SearchConfig | None = None,
) -> HomReport:
    """Certify that each src relator maps to the identity of tgt, either by a
    supplied script ending at the empty word or by bounded search."""
    for g in src.generators:
        if g not in images:
            raise KeyError(f"missing image for generator {g}")
    certificates = certificates or {}
    fallback = fallback or SearchConfig(max_depth=2, max_length=16)
    items = []
    for r in src.relators:
        img = map_word(r.word, images)
        script = certificates.get(r.id)
        if script is not None:
            if free_reduce(script.start) != img:
                items.append(HomItem(r.id, False, "certificate",
                                     f"certificate start differs from relator image {print_word(img)!r}"))
                continue
            if len(free_reduce(script.end)) != 0:
                items.append(HomItem(r.id, False, "certificate", "certificate does not end at the identity"))
                continue
            rep = check_script(tgt, script)
            items.append(HomItem(r.id, rep.ok, "certificate", rep.reason))
        else:
            found = search_equal(tgt, img, EMPTY, fallback)
            if found is None:
                items.append(HomItem(r.id, False, "search", "no derivation found within bounds"))
            else:
                items.append(HomItem(r.id, True, "search"))
    return HomReport(all(i.ok for i in items), tuple(items))


# -- Script file format -----------------------------------------------------


def save_script(script: ProofScript) -> str:
    lines = [f"script {script.name} over {script.presentation_name}"]
    lines.append(f"start: {print_word(script.start)}")
    lines += [str(s) for s in script.steps]
    lines.append(f"end: {print_word(script.end)}")
    return "\n".join(lines) + "\n"


def save_scripts(scripts: Sequence[ProofScript]) -> str:
    return "\n".join(save_script(s) for s in scripts)


def _parse_justification(text: str) -> Justification:
    toks = text.split()
    rid = toks[0]
    inverted = False
    offset = 0
    k = 1
    while k < len(toks):
        if toks[k] == "inv":
            inverted = True
            k += 1
        elif toks[k] == "rot":
            offset = int(toks[k + 1])
            k += 2
        else:
            raise ValueError(f"bad justification suffix {toks[k]!r}")
    return Justification(rid, inverted, offset)


def load_scripts(text: str) -> list[ProofScript]:
    scripts: list[ProofScript] = []
    name = pres_name = None
    start: Word | None = None
    steps: list[ProofStep] = []

    def flush(end: Word):
        nonlocal name, pres_name, start, steps
        if name is None or start is None:
            raise ValueError("end: before script header/start")
        scripts.append(ProofScript(name, pres_name, start, tuple(steps), end))
        name = pres_name = None
        start = None
        steps = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("script "):
                _, rest = line.split(" ", 1)
                name, pres_name = rest.split(" over ")
            elif line.startswith("start:"):
                start = parse_word(line[len("start:"):])
            elif line.startswith("end:"):
                flush(parse_word(line[len("end:"):]))
            elif line.startswith("sub "):
                head, just_text = line.rsplit(" by ", 1)
                _, pos, length, arrow_rest = head.split(" ", 3)
                if not arrow_rest.startswith("->"):
                    raise ValueError("missing ->")
                repl = parse_word(arrow_rest[2:])
                steps.append(ProofStep("sub", int(pos), int(length), repl,
                                       just=_parse_justification(just_text)))
            elif line.startswith("ins "):
                _, pos, gen = line.split(" ")
                steps.append(ProofStep("ins", int(pos), letter=parse_letter(gen)))
            elif line.startswith("del "):
                _, pos = line.split(" ")
                steps.append(ProofStep("del", int(pos)))
            else:
                raise ValueError(f"cannot parse {line!r}")
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    if name is not None:
        raise ValueError(f"script {name!r} missing end:")
    return scripts
