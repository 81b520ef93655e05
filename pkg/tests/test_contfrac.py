import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fareymf import contfrac as cf
from fareymf import farey_core as fc

from oracles import fib

PHI_HAT = (1 + math.sqrt(5)) / 2
ALPHA_MIN = math.log(2) / math.log(PHI_HAT ** 2)


def test_expand_examples():
    assert cf.expand(Fraction(5, 8)).digits == (1, 1, 1, 2)
    assert cf.expand(Fraction(1, 2)).digits == (2,)
    g = cf.expand((math.sqrt(5) - 1) / 2, max_terms=10)
    assert g.digits == (1,) * 10 and not g.exact
    assert cf.expand(0.375).digits == (2, 1, 2)
    for bad in (0, 1, Fraction(3, 2), -0.2):
        with pytest.raises(ValueError):
            cf.expand(bad)


def test_float_guard_stops_before_noise():
    g = cf.expand((math.sqrt(5) - 1) / 2)
    assert set(g.digits) == {1}
    assert 30 <= len(g) <= 40
    s = cf.expand(math.sqrt(2) - 1)
    assert set(s.digits) == {2}


def test_cumulant_examples():
    c = cf.cumulants(cf.expand(Fraction(5, 8)))
    assert c.Q == (1, 2, 3, 8) and c.final == Fraction(5, 8)
    assert cf.cumulants([1] * 30).Q[-1] == fib(31)
    assert cf.cumulants([2, 2]).final == Fraction(2, 5)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=2, max_value=10 ** 6), st.data())
def test_expand_cumulants_identity(q, data):
    p = data.draw(st.integers(min_value=1, max_value=q - 1))
    r = Fraction(p, q)
    c = cf.cumulants(cf.expand(r))
    assert c.final == r
    P, Q = (0,) + c.P, (1,) + c.Q
    for N in range(1, len(P)):
        assert abs(P[N] * Q[N - 1] - P[N - 1] * Q[N]) == 1


def test_lemma1_examples():
    one = cf.DigitFrequencies(1, (1.0,))
    est = cf.lemma1_estimate(one)
    assert est == pytest.approx(cf.LEMMA1_CONST * 2)
    # zeta(2) - 1 from the series, with the 1/n tail added back
    zeta2 = math.fsum(1 / n ** 2 for n in range(1, 200001)) + 1 / 200000.5
    assert cf.LEMMA1_CONST == pytest.approx(math.sqrt(zeta2 - 1), abs=1e-10)
    true = math.exp(math.log(cf.cumulants([1] * 1000).Q[-1]) / 1000)
    assert abs(est / true - 1) <= 0.008
    two = cf.DigitFrequencies(2, (0.5, 0.5))
    assert cf.lemma1_estimate(two) == pytest.approx(cf.LEMMA1_CONST * math.sqrt(6))
    rng = random.Random(3)
    errs = [abs(cf.lemma1_estimate(two) / math.exp(math.log(cf.cumulants(w).Q[-1]) / 1000) - 1)
            for w in ([rng.choice((1, 2)) for _ in range(1000)] for _ in range(50))]
    assert sum(errs) / len(errs) <= 0.02


def test_frequencies_validate():
    with pytest.raises(ValueError):
        cf.DigitFrequencies(2, (0.5, 0.4))
    f = cf.DigitFrequencies.from_digits([1, 1, 2, 4])
    assert f.K == 4 and f.lam == (0.5, 0.25, 0.0, 0.25)


def test_alpha_sequence_golden_limit():
    seq = cf.alpha_sequence([1] * 2000, 10 ** 6)
    assert abs(seq[-1][1] - ALPHA_MIN) < 1e-3
    assert seq[0][0] == 2  # k = 1 has Q_1 Q_0 = 1 and is skipped


def test_alpha_sequence_silver():
    seq = cf.alpha_sequence([2] * 4000, 10 ** 9)
    assert seq[-1][1] == pytest.approx(math.log(2) / math.log(1 + math.sqrt(2)), abs=1e-3)


def test_alpha_sequence_sevens():
    # Q_N ~ r^N with r = (7 + sqrt 53)/2 and k = 7N, so alpha -> 7 ln2 / (2 ln r)
    r = (7 + math.sqrt(53)) / 2
    seq = cf.alpha_sequence([7] * 3000, 10 ** 9)
    assert seq[-1][1] == pytest.approx(7 * math.log(2) / (2 * math.log(r)), abs=1e-3)


@pytest.mark.parametrize("period", [[1], [2], [3], [7], [1, 2], [3, 1, 4]])
def test_alpha_sequence_cauchy(period):
    # successive terms for constant digits; for longer periods the terms
    # oscillate within a period, so successive periods are compared
    p = len(period)
    digits = period * (400 // p + 1)
    seq = dict((N, a) for N, (k, a) in enumerate(cf.alpha_sequence(digits, 10 ** 9), start=2 if digits[0] == 1 else 1))
    N = 200 - 200 % p
    assert abs(seq[N] - seq[N - p]) < 1e-4


def test_alpha_sequence_vs_tree():
    # the tree's own interval at level sum(n)-1 has length 1/(Q_N Q_{N-1})
    x = (math.sqrt(5) - 1) / 2
    for k, a in cf.alpha_sequence(x, 20):
        iv = fc.interval_of(x, k - 1)
        assert a == pytest.approx(k * math.log(2) / math.log(iv.left.denominator * iv.right.denominator))


def test_words_examples():
    assert cf.cf_of_word("RLRL") == Fraction(5, 8)
    assert cf.word_interval("RLRL").length == Fraction(1, 40)
    assert cf.cf_of_word("RLR") == Fraction(3, 5)
    assert cf.word_interval("RLR").length == Fraction(1, 15)
    assert cf.lr_word(cf.expand(Fraction(5, 8))) == "RLRL"
    with pytest.raises(ValueError):
        cf.cf_of_word("")
    with pytest.raises(ValueError):
        cf.cf_of_word("RXL")


def test_words_round_trip():
    for n in range(1, 13):
        for w in itertools.product("LR", repeat=n):
            w = "".join(w)
            r = cf.cf_of_word(w)
            assert fc.appearance_level(r) == n
            assert cf.cf_of_word(cf.lr_word(cf.expand(r))) == r
            if cf.is_canonical_word(w):
                assert cf.lr_word(cf.expand(r)) == w
