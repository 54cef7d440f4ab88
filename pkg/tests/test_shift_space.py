"""Words, shift maps, the embedding and the exactly computed metric d_c."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifscert import (
    EMPTY_WORD,
    FiniteWord,
    InfiniteWordSpec,
    concat,
    dc_distance,
    format_word,
    parse_word,
    prefix,
    shift_map,
    word_eq_to_depth,
)
from ifscert.errors import DomainError, WordSyntaxError
from ifscert.shift_space import TAU, letter_at

HALF = Fraction(1, 2)


def inf(pre, per):
    return InfiniteWordSpec(tuple(pre), tuple(per))


def fin(*letters):
    return FiniteWord(tuple(letters))


class TestPrefix:
    def test_unrolls_periodic(self):
        w = inf((), (0, 1))
        assert prefix(w, 5) == fin(0, 1, 0, 1, 0)

    def test_short_finite_word_returned_whole(self):
        assert prefix(fin(0, 1), 5) == fin(0, 1)

    def test_zero_prefix_is_empty(self):
        assert prefix(inf((), (2,)), 0) == EMPTY_WORD
        assert prefix(fin(1, 2, 3), 0) == EMPTY_WORD


class TestConcat:
    def test_empty_left_identity(self):
        w = inf((4,), (1, 2))
        assert concat(EMPTY_WORD, w) == w
        assert concat(EMPTY_WORD, fin(3)) == fin(3)

    def test_finite_finite(self):
        assert concat(fin(0), fin(1, 2)) == fin(0, 1, 2)

    def test_finite_infinite(self):
        got = concat(fin(1), inf((), (0,)))
        assert got == inf((1,), (0,))
        assert [letter_at(got, n) for n in range(1, 5)] == [1, 0, 0, 0]

    def test_prefix_of_concat(self):
        a = fin(2, 0)
        b = inf((1,), (0, 2))
        for n in range(6):
            assert prefix(concat(a, b), len(a.letters) + n) == FiniteWord(
                a.letters + prefix(b, n).letters
            )


class TestShiftMap:
    def test_on_periodic(self):
        got = shift_map(0, inf((), (1,)))
        assert [letter_at(got, n) for n in range(1, 5)] == [0, 1, 1, 1]

    def test_on_empty(self):
        assert shift_map(1, EMPTY_WORD) == fin(1)

    def test_prefix_identity(self):
        w = inf((2, 0), (1, 2))
        for n in range(5):
            lhs = prefix(shift_map(1, w), n + 1)
            rhs = FiniteWord((1,) + prefix(w, n).letters)
            assert lhs == rhs


class TestCanonicalForm:
    def test_period_reduced_to_primitive(self):
        assert inf((), (1, 1)) == inf((), (1,))
        assert inf((), (0, 1, 0, 1)) == inf((), (0, 1))

    def test_preperiod_absorbed_into_period(self):
        # 1 (0 1)^inf = (1 0)^inf
        assert inf((1,), (0, 1)) == inf((), (1, 0))

    def test_distinct_words_stay_distinct(self):
        assert inf((), (0, 1)) != inf((), (1, 0))
        assert inf((0,), (1,)) != inf((), (1,))

    def test_period_must_be_nonempty(self):
        with pytest.raises(DomainError):
            InfiniteWordSpec((), ())


class TestDcDistance:
    def test_identity_is_zero(self):
        for w in (fin(0, 1), inf((2,), (0, 1)), EMPTY_WORD):
            assert dc_distance(w, w, HALF) == 0

    def test_single_difference_at_first_position(self):
        a = inf((), (0,))
        b = inf((1,), (0,))
        assert dc_distance(a, b, HALF) == HALF

    def test_all_positions_differ(self):
        assert dc_distance(inf((), (0,)), inf((), (1,)), HALF) == 1

    def test_truncation_oracle(self):
        # exact value vs 60-term truncation plus a remainder bound
        a = inf((0, 1), (2, 0, 1))
        b = inf((1,), (2, 1))
        for c in (Fraction(1, 2), Fraction(1, 3), Fraction(9, 10)):
            exact = dc_distance(a, b, c)
            truncated = sum(
                c**n for n in range(1, 61) if letter_at(a, n) != letter_at(b, n)
            )
            remainder = c**61 / (1 - c)
            assert truncated <= exact <= truncated + remainder

    def test_empty_vs_one_letter(self):
        assert dc_distance(EMPTY_WORD, fin(0), HALF) == HALF

    def test_finite_words_pad_with_tau(self):
        # "0" vs "0 0": they differ exactly at position 2
        assert dc_distance(fin(0), fin(0, 0), HALF) == Fraction(1, 4)

    def test_float_c_gives_float(self):
        value = dc_distance(inf((), (0,)), inf((), (1,)), 0.5)
        assert isinstance(value, float) and value == 1.0

    def test_c_out_of_range(self):
        with pytest.raises(DomainError):
            dc_distance(fin(0), fin(1), Fraction(3, 2))

    def test_c_zero_degenerate(self):
        assert dc_distance(fin(0), fin(1), Fraction(0)) == 0

    def test_isolated_point_lower_bound(self):
        # a finite word a and any word agreeing with it through |a| letters
        # but continuing differ first at position |a|+1
        a = fin(0, 1)
        b = inf((0, 1), (0,))
        c = HALF
        assert dc_distance(a, b, c) >= c ** (len(a.letters) + 1)
        # a word differing inside a's letters sits at least c^pos away
        b2 = fin(0, 0)
        assert dc_distance(a, b2, c) >= c**2

    def test_embedding_injectivity_on_randoms(self):
        import random

        rng = random.Random(0)
        words = []
        for _ in range(40):
            pre = tuple(rng.randrange(3) for _ in range(rng.randrange(3)))
            per = tuple(rng.randrange(3) for _ in range(1, rng.randrange(1, 4) + 1))
            words.append(inf(pre, per))
        for i, a in enumerate(words):
            for b in words[i + 1 :]:
                if a != b:
                    horizon = (
                        len(a.preperiod)
                        + len(b.preperiod)
                        + len(a.period) * len(b.period)
                    )
                    assert any(
                        letter_at(a, n) != letter_at(b, n)
                        for n in range(1, horizon + 1)
                    )
                    assert dc_distance(a, b, HALF) > 0


class TestWordEqToDepth:
    def test_reflexive(self):
        w = inf((0,), (1, 2))
        assert word_eq_to_depth(w, w, 10)

    def test_first_difference(self):
        a = fin(0, 1)
        b = fin(0, 2)
        assert word_eq_to_depth(a, b, 1)
        assert not word_eq_to_depth(a, b, 2)

    def test_depth_implies_dc_tail_bound(self):
        a = inf((0, 1, 0), (2,))
        b = inf((0, 1), (0, 2))
        c = HALF
        for m in range(6):
            if word_eq_to_depth(a, b, m):
                assert dc_distance(a, b, c) <= c ** (m + 1) / (1 - c)


class TestTextSyntax:
    @pytest.mark.parametrize(
        "text",
        ["@", "1", "1.2.3", "(1)", "(3.1)", "1.2:(3.1)", "2:(1)"],
    )
    def test_round_trip(self, text):
        word = parse_word(text)
        assert parse_word(format_word(word)) == word

    def test_one_based_letters(self):
        assert parse_word("1.2") == fin(0, 1)
        assert parse_word("1.2:(3.1)") == inf((0, 1), (2, 0))

    def test_empty_word(self):
        assert parse_word("@") == EMPTY_WORD
        assert format_word(EMPTY_WORD) == "@"

    @pytest.mark.parametrize("bad", ["", "0", "1..2", "1:", "(1", "a.b", "1:()"])
    def test_malformed(self, bad):
        with pytest.raises(WordSyntaxError):
            parse_word(bad)


letters = st.integers(min_value=0, max_value=3)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(letters, max_size=3),
    st.lists(letters, min_size=1, max_size=3),
    st.lists(letters, max_size=3),
    st.lists(letters, min_size=1, max_size=3),
    st.lists(letters, max_size=3),
    st.lists(letters, min_size=1, max_size=3),
)
def test_dc_metric_axioms(pa, qa, pb, qb, pc_, qc):
    a, b, c = inf(pa, qa), inf(pb, qb), inf(pc_, qc)
    w = Fraction(1, 2)
    dab = dc_distance(a, b, w)
    assert dab == dc_distance(b, a, w)
    assert (dab == 0) == (a == b)
    assert dc_distance(a, c, w) <= dab + dc_distance(b, c, w)
