"""Farey-Brocot (Stern-Brocot) partition of [0,1] under the hyperbolic measure.

Level k of the full domain has 2^k intervals, each with measure 2^-k, and the
interval [p/q, p'/q'] has length 1/(q q').  The half domain [1/2, 1] is the
right subtree: at level k >= 1 it carries 2^(k-1) of the level-k intervals.

Traversal is depth first over the top of the tree and vectorised over leaf
blocks of 2^b intervals.  A leaf endpoint under the node [a, b] is
a*u_j + b*v_j, where (u_j, v_j) is the level-b Farey sequence built from the
formal endpoints (1,0) and (0,1); this gives numerators and denominators with
one integer multiply-add.  Memory is O(k + 2^b).
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, NamedTuple

import numpy as np

DEPTH_CAP = 40
BLOCK_BITS = 16
# products q*q' at level k stay below F_{k+2}^2, and F_46^2 < 2^63 < F_47^2
_HARD_CAP = 44
DYADIC_DEPTH_CAP = 1 << 14


class Domain(str, enum.Enum):
    FULL = "full"
    HALF = "half"


def as_domain(domain) -> Domain:
    if isinstance(domain, Domain):
        return domain
    try:
        return Domain(str(domain).lower())
    except ValueError:
        raise ValueError(f"unknown domain {domain!r}, expected 'full' or 'half'") from None


def _root(domain: Domain):
    # (p_left, q_left, p_right, q_right, level)
    if domain is Domain.FULL:
        return (0, 1, 1, 1, 0)
    return (1, 2, 1, 1, 1)


def domain_bounds(domain) -> tuple[Fraction, Fraction]:
    domain = as_domain(domain)
    return (Fraction(0), Fraction(1)) if domain is Domain.FULL else (Fraction(1, 2), Fraction(1))


def domain_measure(domain) -> Fraction:
    return Fraction(1) if as_domain(domain) is Domain.FULL else Fraction(1, 2)


def interval_count(k: int, domain) -> int:
    domain = as_domain(domain)
    return 1 << k if domain is Domain.FULL else 1 << (k - 1)


def _check_level(k: int, domain: Domain, cap: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise ValueError(f"level must be a non-negative integer, got {k!r}")
    if domain is Domain.HALF and k < 1:
        raise ValueError("the half domain starts at level 1")
    if cap > _HARD_CAP:
        raise ValueError(f"depth cap {cap} exceeds the int64-safe limit {_HARD_CAP}")
    if k > cap:
        raise ValueError(f"level {k} exceeds the depth cap {cap}")


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(float(x))
    if isinstance(x, tuple) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    return Fraction(x)


@dataclass(frozen=True)
class FareyInterval:
    left: Fraction
    right: Fraction
    level: int

    @property
    def length(self) -> Fraction:
        return Fraction(1, self.left.denominator * self.right.denominator)

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 1 << self.level)

    def contains(self, x) -> bool:
        x = _as_fraction(x)
        return self.left <= x <= self.right

    def children(self) -> tuple["FareyInterval", "FareyInterval"]:
        m = mediant(self.left, self.right)
        return (FareyInterval(self.left, m, self.level + 1),
                FareyInterval(m, self.right, self.level + 1))


def mediant(a, b) -> Fraction:
    a, b = _as_fraction(a), _as_fraction(b)
    for r in (a, b):
        if not 0 <= r <= 1:
            raise ValueError(f"{r} lies outside [0,1]")
    if not a < b:
        raise ValueError(f"mediant needs a < b, got {a} and {b}")
    det = b.numerator * a.denominator - a.numerator * b.denominator
    if det != 1:
        raise ValueError(f"{a} and {b} are not Farey neighbours (determinant {det})")
    # neighbours give a reduced mediant, no gcd needed
    return Fraction(a.numerator + b.numerator, a.denominator + b.denominator)


@lru_cache(maxsize=None)
def _template(b: int) -> tuple[np.ndarray, np.ndarray]:
    """Level-b coefficient sequence from the formal endpoints (1,0), (0,1)."""
    u = np.array([1, 0], dtype=np.int64)
    v = np.array([0, 1], dtype=np.int64)
    for _ in range(b):
        nu = np.empty(2 * len(u) - 1, dtype=np.int64)
        nv = np.empty_like(nu)
        nu[0::2], nu[1::2] = u, u[:-1] + u[1:]
        nv[0::2], nv[1::2] = v, v[:-1] + v[1:]
        u, v = nu, nv
    u.setflags(write=False)
    v.setflags(write=False)
    return u, v


def _top_nodes(root, depth: int) -> Iterator[tuple[int, int, int, int]]:
    """Nodes `depth` levels below root, left to right, with an explicit stack."""
    pl, ql, pr, qr, _ = root
    stack = [(pl, ql, pr, qr, 0)]
    while stack:
        pl, ql, pr, qr, d = stack.pop()
        if d == depth:
            yield pl, ql, pr, qr
            continue
        pm, qm = pl + pr, ql + qr
        stack.append((pm, qm, pr, qr, d + 1))
        stack.append((pl, ql, pm, qm, d + 1))


class Block(NamedTuple):
    """Endpoints of a contiguous run of level-k intervals (len(q) - 1 of them)."""
    p: np.ndarray | None
    q: np.ndarray
    level: int

    @property
    def q_left(self) -> np.ndarray:
        return self.q[:-1]

    @property
    def q_right(self) -> np.ndarray:
        return self.q[1:]


def _block_plan(k: int, domain, cap: int, block_bits: int):
    domain = as_domain(domain)
    _check_level(k, domain, cap)
    root = _root(domain)
    rel = k - root[4]
    b = min(rel, block_bits)
    return root, rel - b, b


def _make_block(node, b: int, k: int, numerators: bool) -> Block:
    u, v = _template(b)
    pl, ql, pr, qr = node
    q = ql * u + qr * v
    p = pl * u + pr * v if numerators else None
    return Block(p, q, k)


def iter_blocks(k: int, domain=Domain.FULL, *, numerators: bool = False,
                cap: int = DEPTH_CAP, block_bits: int = BLOCK_BITS) -> Iterator[Block]:
    root, top, b = _block_plan(k, domain, cap, block_bits)
    for node in _top_nodes(root, top):
        yield _make_block(node, b, k, numerators)


def traverse_level(k: int, domain, visitor: Callable, initial=None, *,
                   cap: int = DEPTH_CAP, block_bits: int = BLOCK_BITS):
    """Left-to-right fold over level k.

    ``visitor(acc, q_left, q_right, level)`` receives int64 arrays holding the
    endpoint denominators of consecutive intervals and returns the new acc.
    """
    acc = initial
    for blk in iter_blocks(k, domain, cap=cap, block_bits=block_bits):
        acc = visitor(acc, blk.q_left, blk.q_right, k)
    return acc


def reduce_level(k: int, domain, mapper: Callable, combine: Callable, *,
                 workers: int = 1, cap: int = DEPTH_CAP, block_bits: int = BLOCK_BITS):
    """Map every block to a partial result, then fold the partials in tree order.

    Partials are computed block by block whatever the worker count, and always
    combined left to right, so floating point results are bit-identical for
    any ``workers``.  ``mapper(q_left, q_right, level)``.
    """
    root, top, b = _block_plan(k, domain, cap, block_bits)

    def run(node):
        blk = _make_block(node, b, k, False)
        return mapper(blk.q_left, blk.q_right, k)

    nodes = _top_nodes(root, top)
    acc = None
    if workers is None or workers <= 1:
        parts = map(run, nodes)
        for part in parts:
            acc = part if acc is None else combine(acc, part)
        return acc
    with ThreadPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(run, nodes):
            acc = part if acc is None else combine(acc, part)
    return acc


def iter_intervals(k: int, domain=Domain.FULL, *, cap: int = DEPTH_CAP) -> Iterator[FareyInterval]:
    for blk in iter_blocks(k, domain, numerators=True, cap=cap):
        p, q = blk.p.tolist(), blk.q.tolist()
        for i in range(len(q) - 1):
            yield FareyInterval(Fraction(p[i], q[i]),
                                Fraction(p[i + 1], q[i + 1]), k)


def level_endpoints(k: int, domain=Domain.FULL, *, cap: int = DEPTH_CAP) -> list[Fraction]:
    out = []
    for blk in iter_blocks(k, domain, numerators=True, cap=cap):
        p, q = blk.p.tolist(), blk.q.tolist()
        start = 1 if out else 0
        out.extend(Fraction(a, b) for a, b in zip(p[start:], q[start:]))
    return out


@dataclass(frozen=True)
class LevelStats:
    k: int
    domain: Domain
    interval_count: int
    pi_bar_k: float
    min_length: Fraction
    max_length: Fraction
    length_sum: float
    max_denominator: int


def _stats_map(ql, qr, level):
    prod = ql * qr
    return (np.log(ql.astype(np.float64)).sum(),
            np.sum(1.0 / prod.astype(np.float64)),
            len(ql), int(prod.min()), int(prod.max()), int(ql.max()))


def _stats_combine(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2],
            min(a[3], b[3]), max(a[4], b[4]), max(a[5], b[5]))


def level_stats(k: int, domain=Domain.FULL, *, workers: int = 1, cap: int = DEPTH_CAP) -> LevelStats:
    """Counts, extreme lengths and pi_bar_k = mean of ln(Q_left)/k."""
    domain = as_domain(domain)
    if k < 1:
        raise ValueError("level_stats needs k >= 1")
    s, lsum, n, pmin, pmax, qmax = reduce_level(k, domain, _stats_map, _stats_combine,
                                                workers=workers, cap=cap)
    return LevelStats(k=k, domain=domain, interval_count=n, pi_bar_k=float(s / (n * k)),
                      min_length=Fraction(1, pmax), max_length=Fraction(1, pmin),
                      length_sum=float(lsum), max_denominator=max(qmax, 1))


def interval_of(x, k: int, domain=Domain.FULL, *, cap: int = DEPTH_CAP) -> FareyInterval:
    """Level-k interval containing x, by k mediant comparisons."""
    domain = as_domain(domain)
    _check_level(k, domain, cap)
    x = _as_fraction(x)
    lo_b, hi_b = domain_bounds(domain)
    if not lo_b < x < hi_b:
        raise ValueError(f"x={x} is not strictly inside the {domain.value} domain")
    pl, ql, pr, qr, lev = _root(domain)
    while lev < k:
        pm, qm = pl + pr, ql + qr
        lev += 1
        c = x.numerator * qm - pm * x.denominator
        if c == 0:
            raise ValueError(f"x={x} is the level-{lev} endpoint {pm}/{qm}")
        if c < 0:
            pr, qr = pm, qm
        else:
            pl, ql = pm, qm
    return FareyInterval(Fraction(pl, ql), Fraction(pr, qr), k)


def _digit_sum(r: Fraction) -> int:
    a, b, s = r.numerator, r.denominator, 0
    while a:
        d, rem = divmod(b, a)
        s += d
        b, a = a, rem
    return s


def appearance_level(r, domain=Domain.FULL) -> int:
    """First level at which r is a partition endpoint.

    Full domain: digit sum of the canonical continued fraction minus 1.
    Half domain: counted from the [1/2,1] root, i.e. digit sum minus 2.
    """
    domain = as_domain(domain)
    r = _as_fraction(r)
    lo, hi = domain_bounds(domain)
    if not lo < r < hi:
        raise ValueError(f"{r} is not strictly inside the {domain.value} domain")
    return _digit_sum(r) - (1 if domain is Domain.FULL else 2)


def _endpoint_level(r: Fraction, domain: Domain) -> int:
    lo, hi = domain_bounds(domain)
    if r == lo or r == hi:
        return 0
    return appearance_level(r, domain)


@dataclass(frozen=True)
class DyadicMeasureResult:
    m: int
    j: int
    left: Fraction
    right: Fraction
    measure: Fraction
    resolution_level: int

    @property
    def numerator(self) -> int:
        return self.measure.numerator

    @property
    def exponent(self) -> int:
        # measure = numerator / 2**exponent
        return self.measure.denominator.bit_length() - 1


def dyadic_measure(m: int, j: int, domain=Domain.FULL, *, max_depth: int = DYADIC_DEPTH_CAP) -> DyadicMeasureResult:
    """Exact hyperbolic measure of [m/2^j, (m+1)/2^j].

    Farey intervals inside the target contribute 2^-level, disjoint ones are
    dropped, straddling ones are split.  Uses Python integers: endpoints such as
    1/2^j only appear at level 2^j - 1, well past the int64 traversal cap.
    """
    domain = as_domain(domain)
    if j < 0 or not 0 <= m < (1 << j):
        raise ValueError(f"need 0 <= m < 2^j, got m={m}, j={j}")
    lo_b, hi_b = domain_bounds(domain)
    if j == 0:
        return DyadicMeasureResult(0, 0, lo_b, hi_b, domain_measure(domain), 0)
    D = 1 << j
    A, B = m, m + 1
    left, right = Fraction(A, D), Fraction(B, D)
    if left < lo_b or right > hi_b:
        raise ValueError(f"[{left}, {right}] is not inside the {domain.value} domain")
    res = max(_endpoint_level(left, domain), _endpoint_level(right, domain))
    if res > max_depth:
        raise ValueError(f"resolution level {res} exceeds the depth cap {max_depth}")

    total = 0  # in units of 2^-max_level, rescaled on the fly
    scale = 0
    stack = [_root(domain)]
    while stack:
        pl, ql, pr, qr, lev = stack.pop()
        if pr * D <= A * qr or pl * D >= B * ql:
            continue
        if pl * D >= A * ql and pr * D <= B * qr:
            if lev > scale:
                total <<= lev - scale
                scale = lev
            total += 1 << (scale - lev)
            continue
        if lev >= max_depth:
            raise ValueError(f"dyadic splitting exceeded the depth cap {max_depth}")
        pm, qm = pl + pr, ql + qr
        stack.append((pm, qm, pr, qr, lev + 1))
        stack.append((pl, ql, pm, qm, lev + 1))
    return DyadicMeasureResult(m, j, left, right, Fraction(total, 1 << scale), res)


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a
