import random

import pytest

from gwel.errors import ParseError, RankMismatchError
from gwel.words import (
    FreeGroup,
    Word,
    alphabet,
    ball_size,
    cyclically_reduce,
    format_word,
    identity,
    letter_key,
    multiply,
    parse_word,
    reduce_letters,
    sphere,
    sphere_size,
)


def random_letters(rng, rank, length):
    letters = [g for g in alphabet(rank)]
    return [rng.choice(letters) for _ in range(length)]


def oracle_reduce(letters):
    # repeatedly delete the first adjacent inverse pair until none remain
    out = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i] == -out[i + 1]:
                del out[i : i + 2]
                changed = True
                break
    return tuple(out)


def test_letter_key_order():
    # a < a^-1 < b < b^-1 < c < ...
    assert [letter_key(l) for l in (1, -1, 2, -2, 3, -3)] == [0, 1, 2, 3, 4, 5]
    assert alphabet(2) == [1, -1, 2, -2]


def test_word_rejects_unreduced_and_out_of_range():
    with pytest.raises(ValueError):
        Word((1, -1), 2)
    with pytest.raises(RankMismatchError):
        Word((3,), 2)
    with pytest.raises(RankMismatchError):
        Word((0,), 2)


def test_reduce_matches_oracle():
    rng = random.Random(71)
    for _ in range(300):
        raw = random_letters(rng, 2, rng.randrange(0, 14))
        assert reduce_letters(raw, 2).letters == oracle_reduce(raw)


def test_group_laws():
    rng = random.Random(72)
    e = identity(3)
    for _ in range(200):
        a = reduce_letters(random_letters(rng, 3, rng.randrange(0, 9)), 3)
        b = reduce_letters(random_letters(rng, 3, rng.randrange(0, 9)), 3)
        c = reduce_letters(random_letters(rng, 3, rng.randrange(0, 9)), 3)
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
        assert multiply(a, a.inverse()) == e
        assert multiply(a.inverse(), a) == e
        assert multiply(a, e) == a
        assert multiply(e, a) == a
        assert (a * b).inverse() == b.inverse() * a.inverse()


def test_cancellation_across_seam():
    # abA * aBA: the whole seam collapses, a b (Aa) B A -> a (bB) A -> e
    a = parse_word("abA", 2)
    b = parse_word("aBA", 2)
    assert (a * b) == identity(2)
    # partial cancellation leaves a shorter product
    assert str(parse_word("ab", 2) * parse_word("Ba", 2)) == "aa"


def test_cyclic_reduction():
    w = parse_word("aBbA", 2)  # already freely reduces to identity
    assert w == identity(2)
    v = parse_word("abA", 2)
    assert cyclically_reduce(v) == parse_word("b", 2)
    u = parse_word("Babab", 2)
    assert cyclically_reduce(u) == parse_word("aba", 2)
    assert cyclically_reduce(identity(2)) == identity(2)


def test_sphere_sizes_closed_form():
    assert [sphere_size(2, n) for n in range(5)] == [1, 4, 12, 36, 108]
    assert [ball_size(2, n) for n in range(4)] == [1, 5, 17, 53]
    assert [sphere_size(3, n) for n in range(4)] == [1, 6, 30, 150]
    for d in (2, 3, 4):
        for n in range(1, 7):
            assert ball_size(d, n) == ball_size(d, n - 1) + sphere_size(d, n)


def test_sphere_enumeration():
    for d in (2, 3):
        for n in range(0, 5):
            words = list(sphere(d, n))
            assert len(words) == sphere_size(d, n)
            assert len(set(words)) == len(words)
            for w in words:
                assert len(w) == n
            keys = [w.sort_key() for w in words]
            assert keys == sorted(keys)  # canonical order


def test_parse_format_roundtrip():
    rng = random.Random(73)
    for _ in range(200):
        w = reduce_letters(random_letters(rng, 4, rng.randrange(0, 10)), 4)
        assert parse_word(format_word(w), 4) == w
    assert format_word(identity(2)) == ""
    assert str(parse_word("aaBAc", 3)) == "aaBAc"


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse_word("ab?c", 2)
    assert e.value.position == 3
    with pytest.raises(ParseError) as e:
        parse_word("abc", 2)
    assert e.value.position == 3
    assert "exceeds rank" in str(e.value)


def test_free_group_wrapper():
    G = FreeGroup(2)
    a = parse_word("ab", 2)
    assert G.multiply(a, G.invert(a)) == G.identity
    assert G.describe() == "free:2"
    assert G.element_label(a) == "ab"
    with pytest.raises(RankMismatchError):
        G.validate_element(parse_word("c", 3))
