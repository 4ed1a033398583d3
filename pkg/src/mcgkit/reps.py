"""Refutation oracles on first homology: exact integer transvection
matrices for twist words, finite quotients by mod-p closure, and
presentation abelianization via Smith normal form.

Matrices are tuples of tuples of Python ints (exact, unbounded).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .presentations import Presentation, SurfaceParams
from .words import GeneratorSymbol, Word, a, b, bk, c

IntMatrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def mat_identity(d: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def mat_mul(x: IntMatrix, y: IntMatrix) -> IntMatrix:
    d = len(x)
    yt = tuple(zip(*y))
    return tuple(
        tuple(sum(xi * yj for xi, yj in zip(row, col)) for col in yt) for row in x
    )


def mat_mod(x: IntMatrix, p: int) -> IntMatrix:
    return tuple(tuple(e % p for e in row) for row in x)


@dataclass(frozen=True)
class CurveClassTable:
    """Homology classes of the twist curves plus the skew pairing J."""

    classes: dict[GeneratorSymbol, Vector]
    J: IntMatrix

    @property
    def dimension(self) -> int:
        return len(self.J)

    def pairing(self, u: Vector, v: Vector) -> int:
        return sum(u[i] * self.J[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))


@dataclass(frozen=True)
class TransvectionRep:
    table: CurveClassTable

    @property
    def dimension(self) -> int:
        return self.table.dimension


def curve_class_table(p: SurfaceParams) -> CurveClassTable:
    """The shipped class assignment.

    Model: a central one-handled piece carrying b (class e1) and the
    longitudes a_i (classes f1 + w_i), surrounded by N holes delta_1..delta_N;
    holes 2k and 2k+1 are joined by handle k (so delta_{2k} = eps_k,
    delta_{2k+1} = -eps_k and the through-curve b_k has class phi_k), the
    remaining holes are boundary.  w_i = delta_2 + ... + delta_i, and
    c_{i,j} encircles the holes in the cyclic interval (i, j].
    """
    g, n, N = p.g, p.n, p.N
    dim = 2 * g + (n - 1 if n >= 1 else 0)
    idx_eps = {k: 2 + 2 * (k - 1) for k in range(1, g)}
    idx_phi = {k: 3 + 2 * (k - 1) for k in range(1, g)}

    def basis(i: int, coef: int = 1) -> list[int]:
        v = [0] * dim
        v[i] = coef
        return v

    def vadd(u: Sequence[int], v: Sequence[int]) -> list[int]:
        return [x + y for x, y in zip(u, v)]

    delta: dict[int, list[int]] = {}
    for k in range(1, g):
        delta[2 * k] = basis(idx_eps[k])
        delta[(2 * k) % N + 1] = basis(idx_eps[k], -1)
    if n >= 1:
        for m in range(2 * g, N + 1):
            delta[m] = basis(2 * g + (m - 2 * g))
        d1 = [0] * dim
        for m in range(2 * g, N + 1):
            d1 = [x - y for x, y in zip(d1, delta[m])]
        delta[1] = d1

    J = [[0] * dim for _ in range(dim)]
    J[0][1], J[1][0] = 1, -1
    for k in range(1, g):
        J[idx_eps[k]][idx_phi[k]] = 1
        J[idx_phi[k]][idx_eps[k]] = -1

    classes: dict[GeneratorSymbol, Vector] = {b(): tuple(basis(0))}
    for k in range(1, g):
        classes[bk(k)] = tuple(basis(idx_phi[k]))
    for i in range(1, N + 1):
        w = [0] * dim
        for s in range(2, i + 1):
            w = vadd(w, delta[s])
        w[1] += 1
        classes[a(i)] = tuple(w)
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if i == j:
                continue
            w = [0] * dim
            s = i % N + 1
            while True:
                w = vadd(w, delta[s])
                if s == j:
                    break
                s = s % N + 1
            classes[c(i, j)] = tuple(w)
    return CurveClassTable(classes, tuple(tuple(row) for row in J))


def transvection_rep(p: SurfaceParams) -> TransvectionRep:
    return TransvectionRep(curve_class_table(p))


def twist_matrix(g: GeneratorSymbol, rep: TransvectionRep, sign: int = 1) -> IntMatrix:
    """Transvection x -> x + sign*<x, v> v for v = class(g)."""
    if g not in rep.table.classes:
        raise KeyError(f"no homology class for symbol {g}")
    v = rep.table.classes[g]
    d = rep.dimension
    J = rep.table.J
    Jv = [sum(J[i][j] * v[j] for j in range(d)) for i in range(d)]
    return tuple(
        tuple((1 if i == j else 0) + sign * v[i] * Jv[j] for j in range(d)) for i in range(d)
    )


def word_matrix(w: Word, rep: TransvectionRep) -> IntMatrix:
    """Product of twist matrices in word order (leftmost letter acts last)."""
    m = mat_identity(rep.dimension)
    for let in w:
        m = mat_mul(m, twist_matrix(let.symbol, rep, let.sign))
    return m


def refute_equal(w1: Word, w2: Word, rep: TransvectionRep) -> str:
    """"refuted" when homology distinguishes the words; never certifies equality."""
    return "refuted" if word_matrix(w1, rep) != word_matrix(w2, rep) else "inconclusive"


class ClosureCapExceeded(RuntimeError):
    pass


def mod_p_closure(gens: Iterable[IntMatrix], p: int, cap: int = 10_000_000) -> int:
    """Order of the matrix group generated by the images mod p (BFS closure)."""
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    mats = [mat_mod(g, p) for g in gens]
    if not mats:
        return 1
    d = len(mats[0])
    ident = mat_identity(d)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in mats:
                prod = mat_mod(mat_mul(m, g), p)
                if prod not in seen:
                    if len(seen) >= cap:
                        raise ClosureCapExceeded(f"closure exceeded cap {cap}")
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return len(seen)


def exponent_matrix(pres: Presentation) -> list[list[int]]:
    """Relator-by-generator exponent sums (the abelianized relation matrix)."""
    index = {g: i for i, g in enumerate(pres.generators)}
    rows = []
    for r in pres.relators:
        row = [0] * len(pres.generators)
        for let in r.word:
            row[index[let.symbol]] += let.sign
        rows.append(row)
    return rows


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (nonnegative, each divides the next)."""
    m = [list(row) for row in matrix]
    if not m or not m[0]:
        return []
    rows, cols = len(m), len(m[0])
    diag: list[int] = []
    r0 = c0 = 0
    while r0 < rows and c0 < cols:
        # find a nonzero pivot of least absolute value
        pivot = None
        for i in range(r0, rows):
            for j in range(c0, cols):
                if m[i][j] and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        m[r0], m[i] = m[i], m[r0]
        for row in m:
            row[c0], row[j] = row[j], row[c0]
        while True:
            reduced = False
            for i in range(r0 + 1, rows):
                if m[i][c0]:
                    q = m[i][c0] // m[r0][c0]
                    for jj in range(c0, cols):
                        m[i][jj] -= q * m[r0][jj]
                    if m[i][c0]:
                        m[r0], m[i] = m[i], m[r0]
                    reduced = True
            for jj in range(c0 + 1, cols):
                if m[r0][jj]:
                    q = m[r0][jj] // m[r0][c0]
                    for ii in range(r0, rows):
                        m[ii][jj] -= q * m[ii][c0]
                    if m[r0][jj]:
                        for row in m:
                            row[c0], row[jj] = row[jj], row[c0]
                    reduced = True
            if not reduced:
                break
        # clear any entry not divisible by the pivot
        d = m[r0][c0]
        culprit = None
        for i in range(r0 + 1, rows):
            for jj in range(c0 + 1, cols):
                if m[i][jj] % d:
                    culprit = i
                    break
            if culprit:
                break
        if culprit:
            for jj in range(c0, cols):
                m[r0][jj] += m[culprit][jj]
            continue
        diag.append(abs(d))
        r0 += 1
        c0 += 1
    return diag


def abelianization(pres: Presentation) -> list[int]:
    """Invariant factors of the abelianized group: the nontrivial torsion
    factors in divisibility order, followed by one 0 per free rank."""
    diag = smith_normal_form(exponent_matrix(pres))
    nonzero = [d for d in diag if d]
    free_rank = len(pres.generators) - len(nonzero)
    factors = [d for d in nonzero if d != 1]
    return factors + [0] * free_rank
