import math

import pytest
from hypothesis import given, strategies as st

from btlogic.errors import ArityError, NumericError, RangeError, TritError
from btlogic.trit import (TRITS, BalancedWord, LevelMap, check_trit, format_trit, int_to_word, nti, parse_trit,
                          pti, sti, tmax, tmax_n, tmin, tmin_n, trit_to_voltage, voltage_to_trit, word_range,
                          word_to_int)
from reference_tables import INVERTERS, MINMAX

trits = st.sampled_from(TRITS)


@pytest.mark.parametrize("pair,expected", MINMAX.items())
def test_minmax_table(pair, expected):
    assert (tmin(*pair), tmax(*pair)) == expected


@pytest.mark.parametrize("a,expected", INVERTERS.items())
def test_inverter_table(a, expected):
    assert (sti(a), pti(a), nti(a)) == expected


@pytest.mark.parametrize("bad", [2, -2, 0.5, "1", None, True, False])
def test_check_trit_rejects(bad):
    with pytest.raises(TritError):
        check_trit(bad)


def test_tmin_rejects_out_of_domain():
    with pytest.raises(TritError):
        tmin(2, 0)
    with pytest.raises(TritError):
        sti(3)


def test_nary_needs_input():
    with pytest.raises(ArityError):
        tmin_n([])
    with pytest.raises(ArityError):
        tmax_n(iter(()))


@given(st.lists(trits, min_size=1, max_size=9))
def test_nary_matches_builtin(xs):
    assert tmin_n(xs) == min(xs)
    assert tmax_n(xs) == max(xs)


@given(trits, trits, trits)
def test_lattice_laws(a, b, c):
    assert tmin(a, b) == tmin(b, a)
    assert tmin(a, tmin(b, c)) == tmin(tmin(a, b), c)
    assert tmin(a, tmax(a, b)) == a
    assert tmax(a, tmin(a, b)) == a
    # STI is an involution and swaps min with max (De Morgan)
    assert sti(sti(a)) == a
    assert sti(tmin(a, b)) == tmax(sti(a), sti(b))


@pytest.mark.parametrize("tok,val", [("-1", -1), ("0", 0), ("1", 1), ("+1", 1), ("N", -1), ("z", 0),
                                     ("P", 1), ("-", -1), ("+", 1), (" 1 ", 1)])
def test_parse_trit(tok, val):
    assert parse_trit(tok) == val


@pytest.mark.parametrize("tok", ["2", "", "x", "-0.5"])
def test_parse_trit_rejects(tok):
    with pytest.raises(TritError):
        parse_trit(tok)


def test_format_roundtrip():
    for t in TRITS:
        assert parse_trit(format_trit(t)) == t


def test_levels():
    m = LevelMap()
    assert [trit_to_voltage(t, m) for t in TRITS] == [-1.0, 0.0, 1.0]
    assert [trit_to_voltage(t, LevelMap(1.8)) for t in TRITS] == [-1.8, 0.0, 1.8]


@pytest.mark.parametrize("v,t", [(-0.98, -1), (0.0, 0), (0.98, 1), (-0.5, 0), (0.5, 0),
                                 (-0.5000001, -1), (0.5000001, 1), (3.0, 1), (-3.0, -1)])
def test_quantizer(v, t):
    assert voltage_to_trit(v) == t


@pytest.mark.parametrize("v", [math.nan, math.inf, -math.inf])
def test_quantizer_rejects_non_finite(v):
    with pytest.raises(NumericError):
        voltage_to_trit(v)


@pytest.mark.parametrize("vdd", [0.0, -1.0, math.nan, math.inf])
def test_levelmap_rejects(vdd):
    with pytest.raises(NumericError):
        LevelMap(vdd)


@given(trits, st.floats(0.1, 10))
def test_quantize_inverts_levels(t, vdd):
    m = LevelMap(vdd)
    assert voltage_to_trit(trit_to_voltage(t, m), m) == t


def test_codec_examples():
    assert int_to_word(5, 3).trits == (-1, -1, 1)
    assert str(int_to_word(5, 3)) == "1TT"
    assert int_to_word(0, 2).trits == (0, 0)
    assert int(int_to_word(-13, 3)) == -13
    assert word_to_int([1, 1, 1]) == 13
    assert word_range(5) == (-121, 121)


def test_codec_range_errors():
    with pytest.raises(RangeError):
        int_to_word(14, 3)
    with pytest.raises(RangeError):
        int_to_word(-122, 5)
    with pytest.raises(TritError):
        BalancedWord((0, 2))


@given(st.integers(1, 8).flatmap(lambda w: st.tuples(st.just(w), st.integers(*word_range(w)))))
def test_codec_roundtrip(wn):
    w, n = wn
    word = int_to_word(n, w)
    assert word.width == w
    assert word_to_int(word) == n
    # negation is trit-wise STI
    assert word_to_int([sti(t) for t in word.trits]) == -n
