"""Legendre spectra of the Farey partition and the inversion transform.

Curves are sampled parametrically in q and always stored with alpha
increasing.  The barred (Legendre) spectrum f_bar(alpha_bar) comes straight
from tau; the computational spectrum is its inversion
f_C(alpha) = alpha f_bar(1/alpha).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .farey_core import Domain, as_domain, reduce_level
from .partition import QGrid, TauSample, beta_k, make_qgrid, tau_bar

KINDS = ("computational", "theoretical", "inverted")
_FLIP = {"computational": "inverted", "inverted": "computational", "theoretical": "inverted"}


class NumericalError(RuntimeError):
    pass


@dataclass(frozen=True)
class LegendrePoint:
    q: float
    alpha_bar: float
    f_bar: float


@dataclass
class SpectrumCurve:
    kind: str
    alpha: np.ndarray
    f: np.ndarray
    meta: dict = field(default_factory=dict)
    q: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        self.alpha = np.asarray(self.alpha, dtype=float)
        self.f = np.asarray(self.f, dtype=float)
        if self.q is not None:
            self.q = np.asarray(self.q, dtype=float)
        if self.alpha.shape != self.f.shape:
            raise ValueError("alpha and f must have the same length")

    def __len__(self):
        return len(self.alpha)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.alpha.tolist(), self.f.tolist()))

    def f_at(self, alpha: float) -> float:
        """Linear interpolation in alpha; nan outside the sampled range."""
        if not self.alpha[0] <= alpha <= self.alpha[-1]:
            return float("nan")
        return float(np.interp(alpha, self.alpha, self.f))

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "alpha": self.alpha.tolist(), "f": self.f.tolist(),
             "meta": self.meta}
        if self.q is not None:
            d["q"] = self.q.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumCurve":
        return cls(d["kind"], np.array(d["alpha"], dtype=float), np.array(d["f"], dtype=float),
                   dict(d.get("meta", {})), None if d.get("q") is None else np.array(d["q"], dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "SpectrumCurve":
        return cls.from_dict(json.loads(s))


def legendre_points(samples: Sequence[TauSample]) -> list[LegendrePoint]:
    return [LegendrePoint(s.q, s.tau_prime, s.q * s.tau_prime - s.tau) for s in samples]


def legendre_spectrum(samples: Sequence[TauSample], *, rtol: float = 1e-9) -> SpectrumCurve:
    """(alpha_bar, f_bar) = (tau'(q), q tau'(q) - tau(q)) along the q-grid.

    alpha_bar must fall as q grows.  Far out in q it saturates at the value of
    the dominant interval and consecutive samples coincide to the last bit;
    those repeats are dropped.  A genuine increase beyond rtol aborts.
    """
    if len(samples) < 1:
        raise ValueError("no samples")
    samples = sorted(samples, key=lambda s: s.q)
    ks = {s.k for s in samples}
    if len(ks) != 1:
        raise ValueError(f"samples mix levels {sorted(ks)}")
    pts = legendre_points(samples)
    keep = [pts[0]]
    for p in pts[1:]:
        prev = keep[-1]
        if p.alpha_bar < prev.alpha_bar:
            keep.append(p)
        elif p.alpha_bar - prev.alpha_bar > rtol * abs(prev.alpha_bar):
            raise NumericalError(
                f"alpha_bar increases between q={prev.q} ({prev.alpha_bar!r}) and "
                f"q={p.q} ({p.alpha_bar!r}); convexity of tau is broken numerically")
    keep.reverse()
    return SpectrumCurve("inverted",
                         np.array([p.alpha_bar for p in keep]),
                         np.array([p.f_bar for p in keep]),
                         {"k": samples[0].k, "source": "legendre", "dropped": len(pts) - len(keep)},
                         np.array([p.q for p in keep]))


def invert_spectrum(curve: SpectrumCurve) -> SpectrumCurve:
    """(alpha, f) -> (1/alpha, f/alpha), order reversed to keep alpha increasing."""
    a = curve.alpha
    if np.any(a == 0):
        raise ValueError("cannot invert a sample with alpha = 0")
    if np.any(a < 0):
        raise ValueError("inversion needs alpha > 0")
    meta = dict(curve.meta)
    meta["inverted_from"] = curve.kind
    q = None if curve.q is None else curve.q[::-1].copy()
    return SpectrumCurve(_FLIP[curve.kind], (1.0 / a)[::-1].copy(), (curve.f / a)[::-1].copy(), meta, q)


def computational_spectrum(k: int, qs=None, domain=Domain.FULL, *, workers: int = 1) -> SpectrumCurve:
    qs = make_qgrid() if qs is None else qs
    curve = invert_spectrum(legendre_spectrum(tau_bar(k, qs, domain, workers=workers)))
    curve.meta.update(k=k, domain=as_domain(domain).value, kind_detail="f_C")
    return curve


def alpha_unity(k: int, domain=Domain.FULL, *, workers: int = 1) -> float:
    """alpha where f_C = 1, i.e. 1/beta_k."""
    return 1.0 / beta_k(k, domain, workers=workers)


@dataclass(frozen=True)
class AlphaMax:
    k: int
    alpha: float
    limit: float
    gap: float
    q_max: float


def _p_max(k: int, domain) -> int:
    """Smallest Q_left * Q_right at level k (the widest interval)."""
    return reduce_level(k, domain, lambda ql, qr, lev: int((ql * qr).min()), min)


def alpha_max_limit(k: int, domain=Domain.FULL) -> float:
    """q -> infinity limit k ln2 / ln(1/p_max); for the full domain p_max = 1/(k+1)."""
    return k * math.log(2.0) / math.log(_p_max(k, domain))


def alpha_max(k: int, qs=None, domain=Domain.FULL, *, tol: float | None = None,
              workers: int = 1) -> AlphaMax:
    """Right end of the computational spectrum, 1/tau'(q_max).

    With tol set, a grid whose q_max leaves the result further than tol from
    the q -> infinity limit is rejected.
    """
    if qs is None:
        qmax = make_qgrid().q_max
    elif isinstance(qs, QGrid):
        qmax = qs.q_max
    else:
        qmax = float(np.max(np.atleast_1d(qs)))
    tp = tau_bar(k, [qmax], domain, workers=workers)[0].tau_prime
    lim = alpha_max_limit(k, domain)
    a = 1.0 / tp
    gap = lim - a
    if tol is not None and gap > tol:
        raise NumericalError(f"q-grid too short at k={k}: alpha_max={a} is {gap:.3g} below "
                             f"its q->inf limit {lim}")
    return AlphaMax(k, a, lim, gap, qmax)


def calibrate_q_max(k: int, target: float, domain=Domain.FULL, *, lo: float = 1.0,
                    hi: float = 1e4, iters: int = 200) -> float:
    """q such that 1/tau_k'(q) = target (1/tau' increases with q)."""
    lim = alpha_max_limit(k, domain)
    if not target < lim:
        raise ValueError(f"target {target} is not below the q->inf limit {lim} at k={k}")

    def g(q):
        return 1.0 / tau_bar(k, [q], domain)[0].tau_prime - target

    if g(lo) > 0:
        raise ValueError(f"target {target} is already exceeded at q={lo}")
    while g(hi) < 0:
        hi *= 4
        if hi > 1e9:
            raise NumericalError("could not bracket q_max")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-10 * hi:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ConcavityReport:
    passed: bool
    worst: float
    worst_index: int
    slack: float


def concavity_report(curve: SpectrumCurve, slack: float = 1e-6) -> ConcavityReport:
    """Each interior sample must sit on or above the chord of its neighbours.

    The excess chord - f is the second difference in a form that does not blow
    up where consecutive alpha samples nearly coincide.
    """
    a, f = curve.alpha, curve.f
    if len(a) < 3:
        raise ValueError("need at least 3 samples")
    w = (a[1:-1] - a[:-2]) / (a[2:] - a[:-2])
    excess = (f[:-2] + w * (f[2:] - f[:-2])) - f[1:-1]
    i = int(np.argmax(excess))
    return ConcavityReport(bool(excess[i] <= slack), float(excess[i]), i + 1, slack)
