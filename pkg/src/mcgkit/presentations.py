"""Presentation builders: the symmetric twist presentation, the five-twist
genus-2 presentation, parametrized relator families, and the two generic
combinators (group extension, amalgam over a vertex stabilizer).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .words import (
    EMPTY,
    GeneratorSymbol,
    Letter,
    Word,
    a,
    alphabet,
    b,
    bk,
    c,
    free_reduce,
    invert,
    named,
    parse_word,
    print_word,
    word,
    wpow,
)


@dataclass(frozen=True)
class SurfaceParams:
    """Genus g >= 2 surface with n >= 0 boundary components; N = 2g+n-2."""

    g: int
    n: int

    def __post_init__(self):
        if self.g < 2:
            raise ValueError(f"genus must be >= 2, got {self.g}")
        if self.n < 0:
            raise ValueError(f"boundary count must be >= 0, got {self.n}")

    @property
    def N(self) -> int:
        return 2 * self.g + self.n - 2


class IntersectionClass(enum.Enum):
    DISJOINT = "disjoint"
    ONCE = "once"
    OTHER = "other"


@dataclass(frozen=True)
class Relator:
    id: str
    word: Word
    meta: str = ""


@dataclass(frozen=True)
class Presentation:
    name: str
    generators: tuple[GeneratorSymbol, ...]
    relators: tuple[Relator, ...]

    def __post_init__(self):
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise ValueError("duplicate generators")
        ids = [r.id for r in self.relators]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate relator ids: {dup}")
        for r in self.relators:
            foreign = alphabet(r.word) - gens
            if foreign:
                raise ValueError(
                    f"relator {r.id} uses symbols outside the generator set: "
                    f"{sorted(str(s) for s in foreign)}"
                )

    def relator(self, rid: str) -> Relator:
        for r in self.relators:
            if r.id == rid:
                return r
        raise KeyError(f"no relator {rid!r} in presentation {self.name!r}")

    def relator_ids(self) -> list[str]:
        return [r.id for r in self.relators]

    def with_relators(self, extra: Iterable[Relator], name: str | None = None) -> "Presentation":
        return Presentation(name or self.name, self.generators, self.relators + tuple(extra))


def _is_gervais_symbol(s: GeneratorSymbol, p: SurfaceParams) -> bool:
    if s.kind == "b":
        return True
    if s.kind == "bk":
        return 1 <= s.i <= p.g - 1
    if s.kind == "a":
        return 1 <= s.i <= p.N
    if s.kind == "c":
        return 1 <= s.i <= p.N and 1 <= s.j <= p.N and s.i != s.j
    return False


def _cyclically_inside(x: int, lo: int, hi: int, n: int) -> bool:
    """True iff x lies strictly inside the clockwise open interval (lo, hi)."""
    s = lo % n + 1
    while s != hi:
        if s == x:
            return True
        s = s % n + 1
    return False


# Pinned intersection facts; the c/c rows come from the boundary-arc model
# (see intersection_class docstring) and are the only extrapolated rows.
def intersection_class(
    x: GeneratorSymbol,
    y: GeneratorSymbol,
    p: SurfaceParams,
    mode: str = "full",
) -> IntersectionClass:
    """Classify the pair of twist curves: disjoint, once, or other.

    Facts: a_i/a_j disjoint; b/a_i once; b/{b_k, c_*} disjoint; b_k/b_l
    disjoint; b_k/a_i once iff i=2k; b_k/c_{i,j} once iff 2k in {i,j};
    c/a and c/b disjoint.  For two c-curves, model c_{i,j} as the clockwise
    boundary arc from i to j: disjoint when the arcs are nested,
    non-overlapping or share endpoints, "other" when they properly
    interleave.  Conservative mode quarantines the extrapolated c/c rows by
    reporting "other" for them (so no relator is emitted).
    """
    if mode not in ("conservative", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    for s in (x, y):
        if not _is_gervais_symbol(s, p):
            raise ValueError(f"{s} is not a generator symbol for (g,n)=({p.g},{p.n})")
    if x == y:
        return IntersectionClass.DISJOINT
    order = {"b": 0, "bk": 1, "a": 2, "c": 3}
    u, v = sorted((x, y), key=lambda s: order[s.kind])
    ku, kv = u.kind, v.kind
    if ku == "b":
        return IntersectionClass.ONCE if kv == "a" else IntersectionClass.DISJOINT
    if ku == "bk" and kv == "bk":
        return IntersectionClass.DISJOINT
    if ku == "bk" and kv == "a":
        return IntersectionClass.ONCE if v.i == 2 * u.i else IntersectionClass.DISJOINT
    if ku == "bk" and kv == "c":
        return IntersectionClass.ONCE if 2 * u.i in (v.i, v.j) else IntersectionClass.DISJOINT
    if ku == "a":
        return IntersectionClass.DISJOINT  # a/a and a/c
    # c vs c
    if mode == "conservative":
        return IntersectionClass.OTHER
    if {u.i, u.j} & {v.i, v.j}:
        return IntersectionClass.DISJOINT
    crossings = sum(1 for z in (v.i, v.j) if _cyclically_inside(z, u.i, u.j, p.N))
    return IntersectionClass.OTHER if crossings == 1 else IntersectionClass.DISJOINT


@dataclass(frozen=True, order=True)
class GoodTriple:
    i: int
    j: int
    k: int

    def rotations(self) -> tuple["GoodTriple", ...]:
        i, j, k = self.i, self.j, self.k
        return (GoodTriple(i, j, k), GoodTriple(j, k, i), GoodTriple(k, i, j))


def is_good_triple(i: int, j: int, k: int, p: SurfaceParams) -> bool:
    if not all(1 <= x <= p.N for x in (i, j, k)):
        return False
    if i == j == k:
        return False
    return (i <= j <= k) or (j <= k <= i) or (k <= i <= j)


def good_triples(p: SurfaceParams, dedup_rotations: bool = False) -> list[GoodTriple]:
    """All good triples in lexicographic order; optionally one per rotation class."""
    out = []
    for i in range(1, p.N + 1):
        for j in range(1, p.N + 1):
            for k in range(1, p.N + 1):
                if is_good_triple(i, j, k, p):
                    out.append(GoodTriple(i, j, k))
    if dedup_rotations:
        out = sorted({min(t.rotations()) for t in out})
    return out


def commutator_relator(x: GeneratorSymbol, y: GeneratorSymbol) -> Word:
    return word([Letter(x, 1), Letter(y, 1), Letter(x, -1), Letter(y, -1)])


def braid_relator(x: GeneratorSymbol, y: GeneratorSymbol) -> Word:
    return word([Letter(x, 1), Letter(y, 1), Letter(x, 1), Letter(y, -1), Letter(x, -1), Letter(y, -1)])


def handle_relator(k: int, p: SurfaceParams) -> Word:
    """c_{2k,2k+1} c_{2k-1,2k}^-1 with cyclic index normalization."""
    if not 1 <= k <= p.g - 1:
        raise ValueError(f"handle index {k} outside 1..{p.g - 1}")
    return word([Letter(c(2 * k, 2 * k + 1, p.N), 1), Letter(c(2 * k - 1, 2 * k, p.N), -1)])


def star_relator(t: GoodTriple, p: SurfaceParams) -> Word:
    """c_{i,j} c_{j,k} c_{k,i} ((a_i a_j a_k b)^3)^-1, omitting c_{l,l} factors."""
    if not is_good_triple(t.i, t.j, t.k, p):
        raise ValueError(f"{t} is not a good triple for N={p.N}")
    head: list[Letter] = []
    for (u, v) in ((t.i, t.j), (t.j, t.k), (t.k, t.i)):
        if (u - 1) % p.N != (v - 1) % p.N:
            head.append(Letter(c(u, v, p.N), 1))
    cycle = word([Letter(a(t.i, p.N), 1), Letter(a(t.j, p.N), 1), Letter(a(t.k, p.N), 1), Letter(b(), 1)])
    return word(head) * invert(wpow(cycle, 3))


def lantern_relator(t: GoodTriple, p: SurfaceParams, variant: int = 1) -> Word:
    """The four-holed-sphere relation, in either of its two displayed forms.

    a_i c_{i,j} c_{j,k} a_k = c_{i,k} a_j X a_j X^-1   (variant 1)
                            = c_{i,k} X^-1 a_j X a_j   (variant 2)
    with X = b a_i a_k b and the c_{l,l} = 1 convention.
    """
    if variant not in (1, 2):
        raise ValueError("variant must be 1 or 2")
    if not is_good_triple(t.i, t.j, t.k, p):
        raise ValueError(f"{t} is not a good triple for N={p.N}")
    i, j, k = t.i, t.j, t.k

    def cfac(u, v):
        return [] if (u - 1) % p.N == (v - 1) % p.N else [Letter(c(u, v, p.N), 1)]

    X = word([Letter(b(), 1), Letter(a(i, p.N), 1), Letter(a(k, p.N), 1), Letter(b(), 1)])
    aj = word([Letter(a(j, p.N), 1)])
    lhs = word([Letter(a(i, p.N), 1)] + cfac(i, j) + cfac(j, k) + [Letter(a(k, p.N), 1)])
    if variant == 1:
        rhs = word(cfac(i, k)) * aj * X * aj * invert(X)
    else:
        rhs = word(cfac(i, k)) * invert(X) * aj * X * aj
    return lhs * invert(rhs)


def gervais_generators(p: SurfaceParams) -> tuple[GeneratorSymbol, ...]:
    gens: list[GeneratorSymbol] = [b()]
    gens += [bk(k) for k in range(1, p.g)]
    gens += [a(i) for i in range(1, p.N + 1)]
    gens += [c(i, j) for i in range(1, p.N + 1) for j in range(1, p.N + 1) if i != j]
    return tuple(gens)


def gervais(p: SurfaceParams, mode: str = "full", dedup_stars: bool = True) -> Presentation:
    """The symmetric presentation: handles, braids, stars."""
    gens = gervais_generators(p)
    rels: list[Relator] = []
    for k in range(1, p.g):
        rels.append(Relator(f"handle({k})", handle_relator(k, p), "handle"))
    for idx, x in enumerate(gens):
        for y in gens[idx + 1:]:
            cls = intersection_class(x, y, p, mode)
            if cls is IntersectionClass.DISJOINT:
                rels.append(Relator(f"braid({x},{y})", commutator_relator(x, y), "braid"))
            elif cls is IntersectionClass.ONCE:
                rels.append(Relator(f"braid({x},{y})", braid_relator(x, y), "braid"))
    for t in good_triples(p, dedup_rotations=dedup_stars):
        rels.append(Relator(f"star({t.i},{t.j},{t.k})", star_relator(t, p), "star"))
    suffix = "" if mode == "full" else "_cons"
    return Presentation(f"gervais_{p.g}_{p.n}{suffix}", gens, tuple(rels))


def add_lanterns(pres: Presentation, p: SurfaceParams) -> Presentation:
    """Append both lantern forms as derived relators usable as justifications."""
    extra = []
    for t in good_triples(p, dedup_rotations=True):
        extra.append(Relator(f"lantern({t.i},{t.j},{t.k})", lantern_relator(t, p, 1), "lantern-derived"))
        extra.append(Relator(f"lantern2({t.i},{t.j},{t.k})", lantern_relator(t, p, 2), "lantern-derived"))
    return pres.with_relators(extra, name=pres.name + "+lanterns")


def tau(i: int) -> GeneratorSymbol:
    return named(f"tau{i}")


def birman_hilden_2_0() -> Presentation:
    """The five-twist presentation of the closed genus-2 mapping class group."""
    gens = tuple(tau(i) for i in range(1, 6))
    rels: list[Relator] = []
    for i in range(1, 6):
        for j in range(i + 2, 6):
            rels.append(Relator(f"i({i},{j})", commutator_relator(tau(i), tau(j)), "imported"))
    for i in range(1, 5):
        rels.append(Relator(f"ii({i})", braid_relator(tau(i), tau(i + 1)), "imported"))
    delta = word([Letter(tau(i), 1) for i in range(1, 6)])
    rels.append(Relator("iii", wpow(delta, 6), "imported"))
    big = word(
        [Letter(tau(i), 1) for i in (1, 2, 3, 4)]
        + [Letter(tau(5), 1), Letter(tau(5), 1)]
        + [Letter(tau(i), 1) for i in (4, 3, 2, 1)]
    )
    rels.append(Relator("iv", wpow(big, 2), "imported"))
    for i in range(1, 6):
        w = big * word([Letter(tau(i), 1)]) * invert(big) * word([Letter(tau(i), -1)])
        rels.append(Relator(f"v(tau{i})", w, "imported"))
    return Presentation("bh", gens, tuple(rels))


def g20_collapsed() -> Presentation:
    """Genus-2 closed surface group presentation on the five twists
    a1, b, a2, b1, c{1,2} with the braid relations and the single
    (a1 a1 a2 b)^3 = c^2 relation (the handle-identified alphabet).
    """
    p = SurfaceParams(2, 0)
    gens = (a(1), b(), a(2), bk(1), c(1, 2))
    rels: list[Relator] = []
    for idx, x in enumerate(gens):
        for y in gens[idx + 1:]:
            cls = intersection_class(x, y, p, "full")
            if cls is IntersectionClass.DISJOINT:
                rels.append(Relator(f"braid({x},{y})", commutator_relator(x, y), "braid"))
            else:
                rels.append(Relator(f"braid({x},{y})", braid_relator(x, y), "braid"))
    cyc = parse_word("a1 a1 a2 b")
    rels.append(Relator("rel2", wpow(cyc, 3) * invert(parse_word("c{1,2} c{1,2}")), "star"))
    return Presentation("g20", gens, tuple(rels))


def extension_presentation(
    name: str,
    left: Presentation,
    right: Presentation,
    action: Mapping[tuple[GeneratorSymbol, GeneratorSymbol], Word],
    lifted_relator_values: Mapping[str, Word],
    central: tuple[GeneratorSymbol, Mapping[str, int]] | None = None,
) -> Presentation:
    """Presentation of a group extension 1 -> L -> G -> R -> 1.

    action[(r, l)] gives r l r^-1 as a word over L's generators (plus the
    central symbol when present); lifted_relator_values[rid] gives the value
    of each R-relator word in L.  Relators: type 1 rewrites the action rows,
    type 2 the lifted R-relators, type 3 copies L's relators verbatim; a
    central symbol additionally commutes with everything, and its exponent
    table appends central^e to the relator with the given result id (the
    "up to powers of the boundary twist" corrections).
    """
    csym = central[0] if central else None
    exps = dict(central[1]) if central else {}
    gens = left.generators + right.generators + ((csym,) if csym else ())

    def with_exp(rid: str, w: Word) -> Word:
        e = exps.pop(rid, 0)
        if e and csym is None:
            raise ValueError("exponent table present without a central symbol")
        return w * wpow(word([Letter(csym, 1)]), e) if e else w

    rels: list[Relator] = []
    for rg in right.generators:
        for lg in left.generators:
            if (rg, lg) not in action:
                raise KeyError(f"missing action row ({rg},{lg})")
            val = action[(rg, lg)]
            w = word([Letter(rg, 1), Letter(lg, 1), Letter(rg, -1)]) * invert(val)
            rels.append(Relator(f"act({rg},{lg})", with_exp(f"act({rg},{lg})", w), "extension-type-1"))
    for r in right.relators:
        if r.id not in lifted_relator_values:
            raise KeyError(f"missing lifted value for relator {r.id}")
        w = r.word * invert(lifted_relator_values[r.id])
        rels.append(Relator(f"lift({r.id})", with_exp(f"lift({r.id})", w), "extension-type-2"))
    for r in left.relators:
        rels.append(Relator(f"L:{r.id}", with_exp(f"L:{r.id}", r.word), "extension-type-3"))
    if csym is not None:
        for g in left.generators + right.generators:
            rels.append(Relator(f"central({g})", commutator_relator(csym, g), "extension-type-1"))
    if exps:
        raise KeyError(f"exponent table rows match no relator: {sorted(exps)}")
    return Presentation(name, gens, tuple(rels))


def amalgam_presentation(
    name: str,
    stab: Presentation,
    t1: GeneratorSymbol,
    y1: Word,
    y2: Sequence[tuple[str, Word, Word]],
    y3: tuple[Word, Word],
) -> Presentation:
    """Presentation from the action on a simply connected complex:
    the vertex stabilizer plus the edge-flipping element t1, with
    (Y1) t1^2 = y1, (Y2) t1 s t1^-1 = value for each row (rid, s, value),
    and (Y3) W = its stabilizer word.
    """
    if t1 in stab.generators:
        raise ValueError(f"{t1} already a stabilizer generator")
    gens = stab.generators + (t1,)
    sgens = set(stab.generators)
    rels = [Relator(f"stab:{r.id}", r.word, r.meta) for r in stab.relators]
    if alphabet(y1) - sgens:
        raise ValueError("Y1 word uses symbols outside the stabilizer")
    rels.append(Relator("Y1", wpow(word([Letter(t1, 1)]), 2) * invert(y1), "amalgam-Y1"))
    for rid, s, val in y2:
        if alphabet(s) - sgens or alphabet(val) - sgens:
            raise ValueError(f"Y2 row {rid} uses symbols outside the stabilizer")
        w = word([Letter(t1, 1)]) * s * word([Letter(t1, -1)]) * invert(val)
        rels.append(Relator(f"Y2({rid})", w, "amalgam-Y2"))
    W, stab_word = y3
    if alphabet(W) - (sgens | {t1}) or alphabet(stab_word) - sgens:
        raise ValueError("Y3 words use foreign symbols")
    rels.append(Relator("Y3", W * invert(stab_word), "amalgam-Y3"))
    return Presentation(name, gens, tuple(rels))


def save_presentation(pres: Presentation) -> str:
    lines = [f"presentation {pres.name}"]
    lines += [f"gen {g}" for g in pres.generators]
    lines += [f"rel {r.id} : {print_word(r.word)}" for r in pres.relators]
    return "\n".join(lines) + "\n"


def load_presentation(text: str) -> Presentation:
    name = None
    gens: list[GeneratorSymbol] = []
    rels: list[Relator] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("presentation "):
            name = line.split(None, 1)[1]
        elif line.startswith("gen "):
            tok = line.split(None, 1)[1]
            lt = parse_word(tok)
            if len(lt) != 1 or lt[0].sign != 1:
                raise ValueError(f"line {lineno}: bad generator {tok!r}")
            gens.append(lt[0].symbol)
        elif line.startswith("rel "):
            body = line[4:]
            if " : " not in body:
                raise ValueError(f"line {lineno}: relator line missing ' : '")
            rid, wtext = body.split(" : ", 1)
            rels.append(Relator(rid.strip(), parse_word(wtext), "imported"))
        else:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
    if name is None:
        raise ValueError("missing 'presentation <name>' header")
    return Presentation(name, tuple(gens), tuple(rels))
