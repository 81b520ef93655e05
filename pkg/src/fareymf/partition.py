"""Partition functions over level-k Farey intervals.

tau_k(q) = ln sum_i p_i^q / (-k ln 2),  p_i = 1/(Q_left Q_right)

One traversal serves a whole q-grid.  Each block produces, per q, the
shifted sums S = sum exp(q lp - M) and T = sum lp exp(q lp - M), where
lp = ln p and M is the block maximum of q lp.  Blocks are merged left to right
by rescaling to the larger shift, so the result does not depend on how many
workers computed the blocks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .farey_core import DEPTH_CAP, Domain, as_domain, reduce_level

LN2 = math.log(2.0)
_Q_CHUNK = 32


@dataclass(frozen=True)
class QGrid:
    values: np.ndarray
    q_min: float
    q_max: float
    count: int
    rule: str = "explicit"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("q-grid must be a non-empty 1-d list")
        if not np.all(np.isfinite(v)):
            raise ValueError("q-grid contains non-finite values")
        if v.size > 1 and not np.all(np.diff(v) > 0):
            raise ValueError("q-grid must be strictly increasing")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values) -> "QGrid":
        v = np.asarray(list(np.atleast_1d(values)), dtype=float)
        if v.size == 0:
            raise ValueError("empty q-grid")
        return cls(v, float(v[0]), float(v[-1]), int(v.size), "explicit")

    @classmethod
    def uniform(cls, q_min: float, q_max: float, count: int) -> "QGrid":
        if count < 2 or not q_max > q_min:
            raise ValueError("uniform grid needs count >= 2 and q_max > q_min")
        return cls(np.linspace(q_min, q_max, count), q_min, q_max, count, "uniform")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values.tolist())


def make_qgrid(q_min: float = -25.0, q_max: float = 40.0, count: int = 201,
               refine: tuple[float, float] = (0.0, 2.0), refine_share: float = 0.25) -> QGrid:
    """Uniform grid with a share of the points packed into the refine window.

    The default is 201 points on [-25, 40] with about a quarter of them in
    [0, 2], where the spectrum bends most.  q = 0 and q = 1 are always on the
    grid since they pin the apex and the tangency point.
    """
    if count < 3 or not q_max > q_min:
        raise ValueError("need count >= 3 and q_max > q_min")
    a, b = max(refine[0], q_min), min(refine[1], q_max)
    pins = [v for v in (0.0, 1.0) if q_min <= v <= q_max]
    if b > a:
        n_fine = int(round(count * refine_share))
        fine = np.linspace(a, b, max(n_fine, 2))
    else:
        fine = np.empty(0)
    coarse_n = count - len(fine) - len(pins)
    vals = np.unique(np.concatenate([np.linspace(q_min, q_max, max(coarse_n, 2)), fine, pins]))
    # top up to the requested count if merging removed duplicates
    extra = count - len(vals)
    if extra > 0:
        gaps = np.argsort(-np.diff(vals))[:extra]
        vals = np.unique(np.concatenate([vals, (vals[gaps] + vals[gaps + 1]) / 2]))
    return QGrid(vals, q_min, q_max, int(len(vals)), f"uniform+refined[{a},{b}]")


def _as_qvalues(qs) -> np.ndarray:
    if isinstance(qs, QGrid):
        return qs.values
    v = np.asarray(np.atleast_1d(qs), dtype=float)
    if v.size == 0:
        raise ValueError("empty q-grid")
    if not np.all(np.isfinite(v)):
        raise ValueError("q values must be finite")
    return v


@dataclass(frozen=True)
class TauSample:
    q: float
    tau: float
    tau_prime: float
    log_sum: float
    k: int


@dataclass
class LogSums:
    """Shifted partition sums for a q-grid: ln S(q) = M + ln S, T/S = <ln p>_q."""
    qs: np.ndarray
    M: np.ndarray
    S: np.ndarray
    T: np.ndarray
    count: int
    lp_min: float
    lp_max: float
    k: int = 0
    domain: Domain = Domain.FULL
    extra: dict = field(default_factory=dict)

    @property
    def log_sum(self) -> np.ndarray:
        return self.M + np.log(self.S)

    @property
    def mean_lp(self) -> np.ndarray:
        return self.T / self.S


def _block_sums(qs: np.ndarray):
    def mapper(ql, qr, level):
        lp = -(np.log(ql.astype(np.float64)) + np.log(qr.astype(np.float64)))
        lo, hi = float(lp.min()), float(lp.max())
        M = np.where(qs >= 0, qs * hi, qs * lo)
        S = np.empty_like(qs)
        T = np.empty_like(qs)
        for s in range(0, len(qs), _Q_CHUNK):
            qq = qs[s:s + _Q_CHUNK]
            w = np.exp(qq[:, None] * lp[None, :] - M[s:s + _Q_CHUNK, None])
            S[s:s + _Q_CHUNK] = w.sum(axis=1)
            T[s:s + _Q_CHUNK] = (w * lp).sum(axis=1)
        return M, S, T, len(lp), lo, hi
    return mapper


def _combine(a, b):
    Ma, Sa, Ta, na, loa, hia = a
    Mb, Sb, Tb, nb, lob, hib = b
    M = np.maximum(Ma, Mb)
    ea, eb = np.exp(Ma - M), np.exp(Mb - M)
    return M, Sa * ea + Sb * eb, Ta * ea + Tb * eb, na + nb, min(loa, lob), max(hia, hib)


def log_sums(k: int, qs, domain=Domain.FULL, *, workers: int = 1, cap: int = DEPTH_CAP) -> LogSums:
    domain = as_domain(domain)
    if k < 1:
        raise ValueError("partition sums need k >= 1")
    q = _as_qvalues(qs)
    M, S, T, n, lo, hi = reduce_level(k, domain, _block_sums(q), _combine, workers=workers, cap=cap)
    return LogSums(q, M, S, T, n, lo, hi, k, domain)


def _norm(k: int) -> float:
    # ln(1/2^k) taken as a log of the power of two, so that tau(0) = -1 exactly
    # (S(0) = 2^k is exact and both logs round identically)
    return -math.log(2.0 ** k)


def tau_bar(k: int, qs, domain=Domain.FULL, *, workers: int = 1, cap: int = DEPTH_CAP) -> list[TauSample]:
    ls = log_sums(k, qs, domain, workers=workers, cap=cap)
    nrm = _norm(k)
    lsum = ls.log_sum
    tau = lsum / nrm
    tp = ls.mean_lp / nrm
    return [TauSample(float(q), float(t), float(d), float(s), k)
            for q, t, d, s in zip(ls.qs, tau, tp, lsum)]


def tau_bar_prime(k: int, q: float, domain=Domain.FULL, *, workers: int = 1) -> float:
    """(sum p^q ln p / sum p^q) / (-k ln 2)."""
    return tau_bar(k, [float(q)], domain, workers=workers)[0].tau_prime


def beta_k(k: int, domain=Domain.FULL, *, workers: int = 1, cap: int = DEPTH_CAP) -> float:
    """sum_i ln(Q_i Q_{i+1}) / (Q_i Q_{i+1}) / (k ln 2), no q-grid involved."""
    def mapper(ql, qr, level):
        prod = ql.astype(np.float64) * qr.astype(np.float64)
        return float(np.sum(np.log(prod) / prod))
    total = reduce_level(k, domain, mapper, lambda a, b: a + b, workers=workers, cap=cap)
    return total / (k * LN2)


def samples_arrays(samples: Sequence[TauSample]) -> dict[str, np.ndarray]:
    return {name: np.array([getattr(s, name) for s in samples], dtype=float)
            for name in ("q", "tau", "tau_prime", "log_sum")}
