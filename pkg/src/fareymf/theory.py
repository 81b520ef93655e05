"""Theoretical Hausdorff spectrum from bounded-digit continued fractions.

For a mean partial quotient m and digit cap K the pair (y, z) solves

    f(y, z) = sum_{i<K} (m - i - 1) y^a_i z^i = 0
    g(y, z) = y^t z^(1-m) sum_{i<K} y^a_i z^i - 1 = 0

a_i = (i-1) ln2 - i ln3 + ln(i+2),  t = ln C - (m-2) ln2 + (m-1) ln3,
C = sqrt(pi^2/6 - 1).  Then f_H = -ln(y)/2 and, with digit d = i + 1,
lambda_d = y^(a_{d-1}+t) z^(d-m) is a distribution of mean m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .contfrac import LEMMA1_CONST, DigitFrequencies
from .spectra import NumericalError, SpectrumCurve

LN2, LN3 = math.log(2.0), math.log(3.0)
LN_C = math.log(LEMMA1_CONST)
Y_LOW = math.exp(-2.0)
ANCHOR = (7.0, 0.1358, 0.4443)  # (m, y, z) near the m = 7 solution


class SolverError(NumericalError):
    pass


def dim_EK(K: float) -> float:
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    return 1 - 6 / (math.pi ** 2 * K) - 72 * math.log(K) / (math.pi ** 4 * K ** 2)


def K_of_m(m: float) -> int:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return max(2, math.ceil(math.exp((math.pi ** 2 / 6 - 1) * m)))


def default_K(m: float) -> int:
    return max(3 * K_of_m(m), 20)


def lambda_bar(K: int) -> DigitFrequencies:
    d = np.arange(1, K + 1, dtype=float)
    w = (d + 1) ** (-2 * dim_EK(K))
    w /= w.sum()
    return DigitFrequencies(K, tuple(w.tolist()))


def alpha_of_m_large(m: float) -> float:
    if m < 2:
        raise ValueError("the closed-form branch is meant for m >= 2")
    lam = np.array(lambda_bar(K_of_m(m)).lam)
    d = np.arange(1, len(lam) + 1)
    return (LN2 / 2) * m / (LN_C + float(np.dot(lam, np.log(d + 1.0))))


def _coeffs(m: float, K: int):
    i = np.arange(K, dtype=float)
    a = (i - 1) * LN2 - i * LN3 + np.log(i + 2)
    t = LN_C - (m - 2) * LN2 + (m - 1) * LN3
    return i, a, t


def _parts(m, K, u, v):
    """Terms in log coordinates u = ln y, v = ln z."""
    i, a, t = _coeffs(m, K)
    with np.errstate(over="ignore", invalid="ignore"):
        w = np.exp(a * u + i * v)
        E = math.exp(t * u - (m - 1) * v) if abs(t * u - (m - 1) * v) < 700 else math.inf
    return i, a, t, w, E


def system_residual(m: float, K: int, y: float, z: float) -> tuple[float, float]:
    i, a, t, w, E = _parts(m, K, math.log(y), math.log(z))
    c = m - i - 1
    return math.fsum(c * w), E * math.fsum(w) - 1.0


def system_jacobian(m: float, K: int, y: float, z: float) -> np.ndarray:
    """d(f, g)/d(y, z), analytic."""
    return _jac_log(m, K, math.log(y), math.log(z)) / np.array([y, z])[None, :]


def _jac_log(m, K, u, v) -> np.ndarray:
    # derivatives with respect to (ln y, ln z); y d/dy = d/du
    i, a, t, w, E = _parts(m, K, u, v)
    c = m - i - 1
    S = math.fsum(w)
    return np.array([
        [math.fsum(c * a * w), math.fsum(c * i * w)],
        [E * (t * S + math.fsum(a * w)), E * ((1 - m) * S + math.fsum(i * w))],
    ])


def _res_log(m, K, u, v) -> np.ndarray:
    i, a, t, w, E = _parts(m, K, u, v)
    return np.array([math.fsum((m - i - 1) * w), E * math.fsum(w) - 1.0])


@dataclass(frozen=True)
class SystemSolution:
    m: float
    K: int
    y: float
    z: float
    residuals: tuple[float, float]
    iterations: int
    path: tuple = ()


def _newton(m, K, u, v, tol, max_iter):
    r = _res_log(m, K, u, v)
    nr = float(np.max(np.abs(r)))
    hist = [nr]
    for it in range(1, max_iter + 1):
        if np.isfinite(nr) and nr <= tol:
            return u, v, r, it - 1, hist, True
        J = _jac_log(m, K, u, v)
        if not np.all(np.isfinite(J)):
            break
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            break
        # keep single steps modest in log space, then halve until the residual drops
        big = float(np.max(np.abs(step)))
        if big > 1.0:
            step /= big
        lam = 1.0
        while lam > 1e-10:
            un, vn = u + lam * step[0], v + lam * step[1]
            rn = _res_log(m, K, un, vn)
            nn = float(np.max(np.abs(rn)))
            if np.isfinite(nn) and nn < nr:
                break
            lam *= 0.5
        else:
            # no descent: at the rounding floor or stuck
            return u, v, r, it, hist, nr <= tol
        u, v, r, nr = un, vn, rn, nn
        hist.append(nr)
    return u, v, r, max_iter, hist, bool(np.isfinite(nr) and nr <= tol)


def _accept(m, K, u, v, r, it, hist) -> SystemSolution:
    y, z = math.exp(u), math.exp(v)
    if not (Y_LOW < y < 1 and 0 < z < 1):
        raise SolverError(f"solution (y={y}, z={z}) for m={m}, K={K} leaves (e^-2,1)x(0,1); "
                          "the (m, K) pairing is probably invalid")
    return SystemSolution(m, K, y, z, (float(r[0]), float(r[1])), it, tuple(hist))


def solve_system(m: float, K: int, tol: float = 1e-12, *, guess: tuple[float, float] | None = None,
                 max_iter: int = 100) -> SystemSolution:
    """Damped Newton in (ln y, ln z) with analytic Jacobian.

    Starts from ``guess`` (or the m = 7 anchor); if that fails, walks in m
    from the anchor to the target, each step warm-started from the last.
    """
    if not m > 1:
        raise ValueError(f"m must exceed 1, got {m}")
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    if not m < K:
        raise ValueError(f"mean digit m={m} needs K > m (got K={K})")
    y0, z0 = guess if guess is not None else ANCHOR[1:]
    u, v, r, it, hist, ok = _newton(m, K, math.log(y0), math.log(z0), tol, max_iter)
    if ok:
        return _accept(m, K, u, v, r, it, hist)
    return _continuation(m, K, tol, max_iter)


def _continuation(m, K, tol, max_iter) -> SystemSolution:
    # the anchor needs K > m; small caps start half way up instead
    m0 = ANCHOR[0] if K > ANCHOR[0] + 1 else K / 2
    u, v, r, it, hist, ok = _newton(m0, K, math.log(ANCHOR[1]), math.log(ANCHOR[2]), tol, max_iter)
    if not ok:
        raise SolverError(f"continuation anchor m={m0}, K={K} did not converge (residual {hist[-1]:.3g})")
    cur, h, total = m0, 0.25, it
    while cur != m:
        nxt = cur + max(-h, min(h, m - cur))
        un, vn, rn, itn, hn, ok = _newton(nxt, K, u, v, tol, max_iter)
        total += itn
        if ok:
            cur, u, v, r, hist = nxt, un, vn, rn, hn
            h = min(h * 2, 1.0)
        else:
            h /= 2
            if h < 1e-6:
                raise SolverError(f"continuation stalled at m={cur} towards m={m}, K={K} "
                                  f"(residual path {hn[-5:]})")
    return _accept(m, K, u, v, r, total, hist)


@dataclass(frozen=True)
class TheoreticalPoint:
    m: float
    K: int
    y: float
    z: float
    alpha: float
    f_H: float
    lam: np.ndarray = field(repr=False)

    @property
    def lam_sum(self) -> float:
        return math.fsum(self.lam)

    @property
    def lam_mean(self) -> float:
        return math.fsum(np.arange(1, self.K + 1) * self.lam)


def lambda_bbar(m: float, K: int, y: float, z: float) -> np.ndarray:
    i, a, t = _coeffs(m, K)
    d = i + 1
    return np.exp((a + t) * math.log(y) + (d - m) * math.log(z))


def theoretical_point(m: float, K: int | None = None, *, solution: SystemSolution | None = None,
                      tol: float = 1e-12, guess=None) -> TheoreticalPoint:
    K = default_K(m) if K is None else K
    sol = solution if solution is not None else solve_system(m, K, tol, guess=guess)
    lam = lambda_bbar(m, K, sol.y, sol.z)
    d = np.arange(1, K + 1)
    alpha = (LN2 / 2) * m / (LN_C + math.fsum(lam * np.log(d + 1.0)))
    return TheoreticalPoint(m, K, sol.y, sol.z, alpha, -0.5 * math.log(sol.y), lam)


def _pairs(m_grid) -> list[tuple[float, int]]:
    out = []
    for item in m_grid:
        if isinstance(item, (tuple, list)):
            out.append((float(item[0]), int(item[1])))
        else:
            out.append((float(item), default_K(float(item))))
    return out


def theoretical_points(m_grid: Iterable) -> list[TheoreticalPoint]:
    """Solve along the grid in decreasing m, warm-starting each point from the previous."""
    pairs = _pairs(m_grid)
    order = sorted(range(len(pairs)), key=lambda j: -pairs[j][0])
    res: list[TheoreticalPoint | None] = [None] * len(pairs)
    guess = None
    for j in order:
        m, K = pairs[j]
        p = theoretical_point(m, K, guess=guess)
        guess = (p.y, p.z)
        res[j] = p
    return res


def theoretical_spectrum(m_grid: Iterable) -> SpectrumCurve:
    pts = sorted(theoretical_points(m_grid), key=lambda p: p.m)
    alpha = np.array([p.alpha for p in pts])
    if np.any(np.diff(alpha) <= 0):
        raise NumericalError("alpha(m) is not increasing along the m-grid")
    return SpectrumCurve("theoretical", alpha, np.array([p.f_H for p in pts]),
                         {"m": [p.m for p in pts], "K": [p.K for p in pts]})


ALPHA_MIN = LN2 / math.log(((1 + math.sqrt(5)) / 2) ** 2)  # 0.72021


@dataclass(frozen=True)
class PhiSample:
    """phi and phi' at the midpoint alpha between two grid points.

    phi_second is centred between this midpoint and the next; the last sample
    has no right neighbour and repeats the previous value (one-sided).
    """
    alpha: float
    phi: float
    phi_prime: float
    phi_second: float
    low_confidence: bool = False


@dataclass
class PhiCurve:
    """phi(alpha) = f_H(1/alpha) on a grid with divided-difference derivatives.

    grid_alpha/grid_phi: the inverted grid points alpha_n, phi_n.
    alpha/phi/phi_prime: midpoints (alpha_n + alpha_{n+1})/2 with
      phi' = (phi_{n+1} - phi_n)/(alpha_{n+1} - alpha_n).
    alpha2/phi_prime2/phi_second: the same scheme applied once more to the
      midpoint values.
    """
    grid_alpha: np.ndarray
    grid_phi: np.ndarray
    alpha: np.ndarray
    phi: np.ndarray
    phi_prime: np.ndarray
    alpha2: np.ndarray
    phi_prime2: np.ndarray
    phi_second: np.ndarray
    source: str = "computed"

    @classmethod
    def from_grid(cls, alpha, phi, phi_prime=None, source="computed") -> "PhiCurve":
        alpha = np.asarray(alpha, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if len(alpha) < 3:
            raise ValueError("phi_curve needs at least 3 grid points")
        order = np.argsort(alpha)
        alpha, phi = alpha[order], phi[order]
        if np.any(np.diff(alpha) <= 0):
            raise ValueError("grid alpha values must be distinct")
        mid = 0.5 * (alpha[1:] + alpha[:-1])
        pmid = 0.5 * (phi[1:] + phi[:-1])
        dphi = np.diff(phi) / np.diff(alpha) if phi_prime is None else np.asarray(phi_prime, dtype=float)
        if len(dphi) != len(mid):
            raise ValueError("phi_prime must have one value per grid interval")
        mid2 = 0.5 * (mid[1:] + mid[:-1])
        dphi2 = 0.5 * (dphi[1:] + dphi[:-1])
        d2 = np.diff(dphi) / np.diff(mid)
        return cls(alpha, phi, mid, pmid, dphi, mid2, dphi2, d2, source)

    @property
    def samples(self) -> list[PhiSample]:
        out = []
        n = len(self.alpha)
        for j in range(n):
            end = j >= len(self.phi_second)
            d2 = self.phi_second[min(j, len(self.phi_second) - 1)]
            out.append(PhiSample(float(self.alpha[j]), float(self.phi[j]), float(self.phi_prime[j]),
                                 float(d2), end))
        return out


def phi_curve(source) -> PhiCurve:
    """Inverted grid alpha_n = 1/alpha(m_n), phi_n = f_H(m_n), with derivatives.

    ``source`` is a theoretical SpectrumCurve, a list of TheoreticalPoints, or
    an m-grid (values or (m, K) pairs) to be solved first.
    """
    if isinstance(source, SpectrumCurve):
        a, f = source.alpha, source.f
    else:
        src = list(source)
        if src and not isinstance(src[0], TheoreticalPoint):
            src = theoretical_points(src)
        a = np.array([p.alpha for p in src])
        f = np.array([p.f_H for p in src])
    return PhiCurve.from_grid(1.0 / np.asarray(a), f, source="computed")
