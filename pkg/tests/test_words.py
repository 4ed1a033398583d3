import pytest
from hypothesis import given, strategies as st

from mcgkit.words import (
    EMPTY,
    IndexRangeError,
    Letter,
    Word,
    WordSyntaxError,
    a,
    b,
    bk,
    c,
    conjugate,
    cyclic_reduce,
    free_reduce,
    invert,
    named,
    parse_word,
    print_word,
    substitute,
    word,
)


def W(text, n=None):
    return parse_word(text, n)


def test_parse_basic():
    w = W("a1 b a1")
    assert [(let.symbol.kind, let.sign) for let in w] == [("a", 1), ("b", 1), ("a", 1)]


def test_parse_inverse_markers():
    w = W("c{1,2}' b1")
    assert w[0].symbol == c(1, 2) and w[0].sign == -1
    assert w[1].symbol == bk(1) and w[1].sign == 1
    assert W("a1^-1") == W("a1'")


def test_parse_empty():
    assert W("") == EMPTY


def test_parse_named():
    w = W("t1 tau3 x0 r E1")
    assert all(let.symbol.kind == "named" for let in w)
    assert w[0].symbol == named("t1")


def test_parse_error_position():
    with pytest.raises(WordSyntaxError) as e:
        W("a1 ?bad")
    assert e.value.position == 1


def test_parse_index_range_with_context():
    with pytest.raises(IndexRangeError):
        W("a4", n=3)
    # c indices normalize cyclically instead of erroring
    assert W("c{2,3}", n=2)[0].symbol == c(2, 1)


def test_cyclic_normalization_at_construction():
    assert c(2, 3, 2) == c(2, 1)
    assert c(5, 7, 5) == c(5, 2)
    with pytest.raises(ValueError):
        c(1, 3, 2)  # collapses to c(1,1)


def test_free_reduce_examples():
    assert free_reduce(W("a1 a1'")) == EMPTY
    assert free_reduce(W("b a2 a2' b")) == W("b b")
    assert free_reduce(W("b a2 b'")) == W("b a2 b'")


def test_invert_examples():
    assert invert(W("a1 b")) == W("b' a1'")
    assert invert(EMPTY) == EMPTY
    assert invert(W("b'")) == W("b")


def test_conjugate_examples():
    assert conjugate(W("b"), W("a1")) == W("b a1 b'")
    assert conjugate(EMPTY, W("a1 a1' b")) == W("b")
    assert conjugate(W("a1"), W("a1 a1")) == W("a1 a1")


def test_substitute_examples():
    assert substitute(W("a1 b a1"), 0, 3, W("b a1 b")) == W("b a1 b")
    assert substitute(W("x"), 1, 0, W("g g'")) == W("x g g'")
    assert substitute(W("b b"), 1, 1, EMPTY) == W("b")
    with pytest.raises(IndexError):
        substitute(W("b"), 1, 1, EMPTY)


LETTERS = st.builds(
    Letter,
    st.sampled_from([b(), bk(1), a(1), a(2), c(1, 2), c(2, 1), named("t1")]),
    st.sampled_from([1, -1]),
)
WORDS = st.builds(lambda ls: Word(tuple(ls)), st.lists(LETTERS, max_size=24))


@given(WORDS)
def test_free_reduce_idempotent(w):
    assert free_reduce(free_reduce(w)) == free_reduce(w)


@given(WORDS)
def test_free_reduce_shortens_and_preserves_parity(w):
    r = free_reduce(w)
    assert len(r) <= len(w)
    assert (len(w) - len(r)) % 2 == 0


@given(WORDS)
def test_word_times_inverse_is_trivial(w):
    assert free_reduce(w * invert(w)) == EMPTY


@given(WORDS)
def test_parse_print_round_trip(w):
    r = free_reduce(w)
    assert parse_word(print_word(r)) == r


@given(WORDS, WORDS)
def test_conjugate_round_trip(y, x):
    assert conjugate(y, conjugate(invert(y), x)) == free_reduce(x)


@given(WORDS)
def test_cyclic_reduce_is_no_longer(w):
    assert len(cyclic_reduce(w)) <= len(free_reduce(w))
