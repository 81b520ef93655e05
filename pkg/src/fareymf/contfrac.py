"""Continued fractions, cumulants and the concentration index alpha(x).

Integers are Python ints throughout, so cumulants never overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .farey_core import FareyInterval, _as_fraction

LEMMA1_CONST = math.sqrt(math.pi ** 2 / 6 - 1)  # 0.80308...
LN2 = math.log(2.0)


@dataclass(frozen=True)
class CFExpansion:
    digits: tuple[int, ...]
    exact: bool = True

    def __post_init__(self):
        if not self.digits:
            raise ValueError("empty expansion")
        if any(int(d) < 1 for d in self.digits):
            raise ValueError(f"digits must be >= 1: {self.digits}")
        if self.exact and self.digits[-1] < 2:
            raise ValueError("exact expansions end with a digit >= 2")

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    @property
    def value(self) -> Fraction:
        x = Fraction(0)
        for d in reversed(self.digits):
            x = 1 / (d + x)
        return x


@dataclass(frozen=True)
class ConvergentSequence:
    """P_N, Q_N for N = 1..len(digits); index 0 of each list is N = 1."""
    digits: tuple[int, ...]
    P: tuple[int, ...]
    Q: tuple[int, ...]

    def __len__(self):
        return len(self.Q)

    @property
    def final(self) -> Fraction:
        return Fraction(self.P[-1], self.Q[-1])


@dataclass(frozen=True)
class DigitFrequencies:
    K: int
    lam: tuple[float, ...]

    def __post_init__(self):
        if len(self.lam) != self.K:
            raise ValueError(f"expected {self.K} frequencies, got {len(self.lam)}")
        if any(v < 0 for v in self.lam):
            raise ValueError("frequencies must be non-negative")
        if abs(math.fsum(self.lam) - 1.0) > 1e-12:
            raise ValueError(f"frequencies sum to {math.fsum(self.lam)!r}, not 1")

    @classmethod
    def from_digits(cls, digits: Iterable[int], K: int | None = None) -> "DigitFrequencies":
        d = np.asarray(list(digits), dtype=np.int64)
        if d.size == 0:
            raise ValueError("no digits")
        K = int(d.max()) if K is None else K
        if d.max() > K:
            raise ValueError(f"digit {d.max()} exceeds the cap K={K}")
        counts = np.bincount(d, minlength=K + 1)[1:]
        return cls(K, tuple((counts / d.size).tolist()))


def _euclid(r: Fraction) -> list[int]:
    a, b, out = r.numerator, r.denominator, []
    while a:
        d, rem = divmod(b, a)
        out.append(d)
        b, a = a, rem
    return out


def expand(x, max_terms: int = 64) -> CFExpansion:
    """Continued fraction of x in (0,1).

    Fractions and ints ratios expand exactly.  A float is a dyadic rational
    whose tail digits are noise: its neighbours x -/+ 2 ulp are expanded too and
    digits are kept only while all three agree.  If the float is itself a
    short rational (0.5, 0.375) the exact expansion is returned.
    """
    if isinstance(x, (float, np.floating)):
        return _expand_float(float(x), max_terms)
    r = _as_fraction(x)
    if not 0 < r < 1:
        raise ValueError(f"x={r} is outside (0,1)")
    digits = _euclid(r)
    if len(digits) > max_terms:
        return CFExpansion(tuple(digits[:max_terms]), exact=False)
    return CFExpansion(tuple(digits), exact=True)


def _expand_float(x: float, max_terms: int) -> CFExpansion:
    if not 0 < x < 1:
        raise ValueError(f"x={x} is outside (0,1)")
    eps = 2 * math.ulp(x)
    mid = _euclid(Fraction(x))
    lo = _euclid(Fraction(x - eps))
    hi = _euclid(Fraction(x + eps))
    agreed = []
    for a, b, c in zip(lo, mid, hi):
        if not a == b == c:
            break
        agreed.append(b)
    if len(mid) <= len(agreed) + 1 and len(mid) <= max_terms and mid[-1] >= 2:
        return CFExpansion(tuple(mid), exact=True)
    if not agreed:
        raise ValueError(f"no stable digits for x={x}")
    return CFExpansion(tuple(agreed[:max_terms]), exact=False)


def _digits_of(cf) -> tuple[int, ...]:
    if isinstance(cf, CFExpansion):
        return cf.digits
    if isinstance(cf, (Fraction, float, int, np.floating)):
        return expand(cf).digits
    digits = tuple(int(d) for d in cf)
    if not digits or min(digits) < 1:
        raise ValueError(f"bad digit sequence {digits}")
    return digits


def cumulants(cf) -> ConvergentSequence:
    """Q_N = n_N Q_{N-1} + Q_{N-2} with Q_0 = 1, Q_-1 = 0 (and P likewise)."""
    digits = _digits_of(cf)
    P, Q = [], []
    p1, p0 = 0, 1   # P_0, P_-1
    q1, q0 = 1, 0   # Q_0, Q_-1
    for n in digits:
        p1, p0 = n * p1 + p0, p1
        q1, q0 = n * q1 + q0, q1
        P.append(p1)
        Q.append(q1)
    return ConvergentSequence(digits, tuple(P), tuple(Q))


def lemma1_estimate(freqs: DigitFrequencies) -> float:
    """sqrt(pi^2/6 - 1) * prod_i (i+1)^lambda_i, the estimate of Q_N^(1/N)."""
    lam = np.asarray(freqs.lam, dtype=float)
    i = np.arange(1, freqs.K + 1)
    return LEMMA1_CONST * math.exp(float(np.dot(lam, np.log(i + 1.0))))


def lemma1_error(digits: Sequence[int]) -> float:
    """|ln(estimate) - ln(Q_N)/N| for one digit word, against the exact cumulant."""
    digits = list(digits)
    est = lemma1_estimate(DigitFrequencies.from_digits(digits))
    qn = cumulants(digits).Q[-1]
    return abs(math.log(est) - _ln_int(qn) / len(digits))


def _ln_int(n: int) -> float:
    # math.log handles big ints, but keep it explicit
    return math.log(n)


def alpha_sequence(x, k_max: int) -> list[tuple[int, float]]:
    """(k, alpha_k) with k = n_1 + ... + n_N and alpha_k = k ln2 / ln(Q_N Q_{N-1}).

    x may be a float, a Fraction, a CFExpansion or a plain digit sequence
    (the latter is the way to feed long exact words such as [1]*500).  Terms
    where Q_N Q_{N-1} = 1 carry no information (0/0 style) and are skipped.
    """
    digits = _digits_of(x)
    cs = cumulants(digits)
    out = []
    k = 0
    q_prev = 1
    for n, q in zip(digits, cs.Q):
        k += n
        if k > k_max:
            break
        prod = q * q_prev
        if prod > 1:
            out.append((k, k * LN2 / math.log(prod)))
        q_prev = q
    return out


def alpha_at_level(x, k: int) -> float:
    """ln mu(I) / ln l(I) for the level-k interval around x, straight from the tree."""
    from .farey_core import interval_of
    iv = interval_of(x, k)
    return k * LN2 / math.log(iv.left.denominator * iv.right.denominator)


def word_interval(word: str) -> FareyInterval:
    """Interval addressed by an L/R word from the root [0,1] (R = right half)."""
    word = _check_word(word)
    pl, ql, pr, qr = 0, 1, 1, 1
    for c in word:
        pm, qm = pl + pr, ql + qr
        if c == "L":
            pr, qr = pm, qm
        else:
            pl, ql = pm, qm
    return FareyInterval(Fraction(pl, ql), Fraction(pr, qr), len(word))


def _check_word(word) -> str:
    word = "".join(word).upper()
    if not word:
        raise ValueError("empty word")
    bad = set(word) - {"L", "R"}
    if bad:
        raise ValueError(f"word may only contain L and R, got {sorted(bad)}")
    return word


def cf_of_word(word: str) -> Fraction:
    """Endpoint created at the last step of the word.

    RLRL addresses [3/5, 5/8]; 5/8 is the endpoint born at step 4.  After an L
    the new endpoint is the right end, after an R the left one.
    """
    iv = word_interval(word)
    return iv.right if word[-1].upper() == "L" else iv.left


def lr_word(cf) -> str:
    """Canonical word w with cf_of_word(w) equal to the given number.

    Each endpoint born at level k bounds two sibling intervals, so two words
    reach it; the canonical one turns on its last letter (...RL or ...LR, and
    'R' for 1/2).  In digits: runs n_1 - 1, n_2, ..., n_N - 1 of alternating
    L, R starting with L, then one letter of the opposite kind.
    """
    digits = list(_digits_of(cf))
    if isinstance(cf, CFExpansion) and not cf.exact:
        raise ValueError("lr_word needs a finite (exact) expansion")
    if digits[-1] < 2:
        # [.., n, 1] is the same number as [.., n+1]
        if len(digits) == 1:
            raise ValueError("1/1 is not an interior endpoint")
        digits = digits[:-2] + [digits[-2] + 1]
    runs = list(digits)
    runs[0] -= 1
    runs[-1] -= 1
    out = []
    for i, r in enumerate(runs):
        out.append(("L" if i % 2 == 0 else "R") * r)
    last = "L" if (len(runs) - 1) % 2 == 0 else "R"
    out.append("R" if last == "L" else "L")
    return "".join(out)


def is_canonical_word(word: str) -> bool:
    word = _check_word(word)
    if len(word) == 1:
        return word == "R"
    return word[-1] != word[-2]
