import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from mcgkit.presentations import (
    GoodTriple,
    IntersectionClass,
    SurfaceParams,
    birman_hilden_2_0,
    g20_collapsed,
    gervais,
    good_triples,
    intersection_class,
    lantern_relator,
)
from mcgkit.reps import (
    ClosureCapExceeded,
    abelianization,
    curve_class_table,
    exponent_matrix,
    mat_identity,
    mat_mul,
    mod_p_closure,
    refute_equal,
    smith_normal_form,
    transvection_rep,
    twist_matrix,
    word_matrix,
)
from mcgkit.words import EMPTY, Letter, Word, a, b, bk, c, invert, parse_word

SIZES = [(2, 0), (2, 1), (3, 1), (3, 2)]


def test_dimension():
    assert transvection_rep(SurfaceParams(2, 0)).dimension == 4
    assert transvection_rep(SurfaceParams(2, 1)).dimension == 4
    assert transvection_rep(SurfaceParams(3, 1)).dimension == 6
    assert transvection_rep(SurfaceParams(3, 2)).dimension == 7


def test_null_homologous_boundary_twist_is_identity():
    rep = transvection_rep(SurfaceParams(2, 1))
    assert rep.table.classes[c(3, 1)] == (0,) * 4
    assert twist_matrix(c(3, 1), rep) == mat_identity(4)


def test_transvection_square_nilpotent():
    for g, n in SIZES:
        rep = transvection_rep(SurfaceParams(g, n))
        ident = mat_identity(rep.dimension)
        for sym in rep.table.classes:
            m = twist_matrix(sym, rep)
            diff = tuple(
                tuple(m[i][j] - ident[i][j] for j in range(rep.dimension))
                for i in range(rep.dimension)
            )
            assert mat_mul(diff, diff) == tuple(
                tuple(0 for _ in range(rep.dimension)) for _ in range(rep.dimension)
            )


def test_twist_matrices_commute_when_disjoint():
    rep = transvection_rep(SurfaceParams(2, 0))
    m1, m2 = twist_matrix(a(1), rep), twist_matrix(a(2), rep)
    assert mat_mul(m1, m2) == mat_mul(m2, m1)


def test_symplectic_when_closed():
    rep = transvection_rep(SurfaceParams(2, 0))
    J = rep.table.J
    for sym in rep.table.classes:
        T = twist_matrix(sym, rep)
        Tt = tuple(zip(*T))
        assert mat_mul(Tt, mat_mul(J, T)) == J


def test_pairing_invariants_vs_table():
    for g, n in SIZES:
        params = SurfaceParams(g, n)
        rep = transvection_rep(params)
        tbl = rep.table
        for x, y in itertools.combinations(tbl.classes, 2):
            cls = intersection_class(x, y, params)
            pr = tbl.pairing(tbl.classes[x], tbl.classes[y])
            if cls is IntersectionClass.ONCE:
                assert abs(pr) == 1, (g, n, str(x), str(y))
            elif cls is IntersectionClass.DISJOINT:
                assert pr == 0, (g, n, str(x), str(y))


def test_handle_classes_match_up_to_sign():
    for g, n in SIZES:
        params = SurfaceParams(g, n)
        tbl = curve_class_table(params)
        for k in range(1, g):
            u = tbl.classes[c(2 * k, 2 * k + 1, params.N)]
            v = tbl.classes[c(2 * k - 1, 2 * k, params.N)]
            assert u == v or u == tuple(-x for x in v)


def test_word_matrix_examples():
    rep = transvection_rep(SurfaceParams(2, 0))
    assert word_matrix(EMPTY, rep) == mat_identity(4)
    w = parse_word("a1 b c{1,2}' b1", 2)
    assert word_matrix(w * invert(w), rep) == mat_identity(4)


def test_all_relators_map_to_identity():
    for g, n in SIZES:
        params = SurfaceParams(g, n)
        rep = transvection_rep(params)
        ident = mat_identity(rep.dimension)
        pres = gervais(params)
        bad = [r.id for r in pres.relators if word_matrix(r.word, rep) != ident]
        assert bad == [], (g, n, bad)


def test_lantern_forms_map_to_identity():
    for g, n in SIZES:
        params = SurfaceParams(g, n)
        rep = transvection_rep(params)
        ident = mat_identity(rep.dimension)
        for t in good_triples(params):
            for variant in (1, 2):
                w = lantern_relator(t, params, variant)
                assert word_matrix(w, rep) == ident, (g, n, t, variant)


def test_refute_equal():
    rep = transvection_rep(SurfaceParams(2, 0))
    assert refute_equal(parse_word("a1"), parse_word("a2"), rep) == "refuted"
    assert refute_equal(parse_word("a1 b a1"), parse_word("b a1 b"), rep) == "inconclusive"
    E = parse_word("a1 b a2 b1 c{1,2} c{1,2} b1 a2 b a1", 2)
    other = parse_word("a1 a1 b a1 a1 b c{1,2}' c{1,2}' b1' c{1,2}' c{1,2}' b1'", 2)
    assert refute_equal(E, other, rep) == "inconclusive"


GENS20 = [b(), bk(1), a(1), a(2), c(1, 2), c(2, 1)]
RANDOM_WORDS = st.builds(
    lambda ls: Word(tuple(ls)),
    st.lists(
        st.builds(Letter, st.sampled_from(GENS20), st.sampled_from([1, -1])),
        max_size=10,
    ),
)


@settings(max_examples=40, deadline=None)
@given(RANDOM_WORDS, RANDOM_WORDS)
def test_word_matrix_multiplicative(u, v):
    rep = transvection_rep(SurfaceParams(2, 0))
    assert word_matrix(u * v, rep) == mat_mul(word_matrix(u, rep), word_matrix(v, rep))


def test_mod_p_closure_values():
    rep = transvection_rep(SurfaceParams(2, 0))
    gens = [twist_matrix(s, rep) for s in gervais(SurfaceParams(2, 0)).generators]
    assert mod_p_closure(gens, 2) == 720
    assert mod_p_closure([twist_matrix(a(1), rep)], 2) == 2
    assert mod_p_closure([], 2) == 1


def test_mod_p_closure_cap():
    rep = transvection_rep(SurfaceParams(2, 0))
    gens = [twist_matrix(s, rep) for s in gervais(SurfaceParams(2, 0)).generators]
    with pytest.raises(ClosureCapExceeded):
        mod_p_closure(gens, 2, cap=100)


def test_smith_normal_form_known():
    assert smith_normal_form([[12, 6, 4], [3, 9, 6], [2, 16, 14]]) == [1, 10, 30]
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form([[0, 0], [0, 0]]) == []


def test_smith_vs_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import invariant_factors
    from sympy import Matrix

    rng = random.Random(7)
    for _ in range(25):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        ours = smith_normal_form(m)
        theirs = [int(x) for x in invariant_factors(Matrix(m)) if int(x) != 0]
        assert [d for d in ours if d] == theirs, m


def test_abelianization_values():
    assert abelianization(gervais(SurfaceParams(2, 0))) == [10]
    assert abelianization(birman_hilden_2_0()) == [10]
    assert abelianization(g20_collapsed()) == [10]
    assert abelianization(gervais(SurfaceParams(3, 1))) == []
    assert abelianization(gervais(SurfaceParams(3, 2))) == []


def test_abelianization_invariant_under_permutation():
    import dataclasses

    pres = gervais(SurfaceParams(2, 1))
    rng = random.Random(3)
    gens = list(pres.generators)
    rels = list(pres.relators)
    for _ in range(5):
        rng.shuffle(gens)
        rng.shuffle(rels)
        shuffled = dataclasses.replace(pres, generators=tuple(gens), relators=tuple(rels))
        assert abelianization(shuffled) == abelianization(pres)
