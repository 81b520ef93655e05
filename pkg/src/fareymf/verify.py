"""Regeneration of the verification tables.

Tables 2-12 index partitions by their position in a count that starts at 1,
so table index k is partition level k - 1 here (see ``table_level``); table
k = 22 means the 2^21 intervals of level 21.  That offset is what makes the
printed 1/beta and alpha_max columns come out exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import reference as ref
from .farey_core import Domain, level_stats
from .partition import log_sums, _norm
from .spectra import alpha_max, alpha_unity, calibrate_q_max
from .theory import PhiCurve, phi_curve, theoretical_points

DEFAULT_TABLE_K = 22
PHI_SOURCES = ("table", "divided", "computed")
SMALL = 0.1


def table_level(k: int) -> int:
    """Partition level for a table index k."""
    if k < 1:
        raise ValueError("table indices start at 1")
    return k - 1


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    alpha_n: float
    X: float
    Y: float

    @property
    def delta(self) -> float:
        return relative_error(self.X, self.Y)


def relative_error(X: float, Y: float) -> float:
    """(Y - X) / min(|X|, |Y|)."""
    den = min(abs(X), abs(Y))
    if den == 0:
        return 0.0 if X == Y else math.copysign(math.inf, Y - X)
    return (Y - X) / den


def phi_grid(source: str = "table") -> PhiCurve:
    """The 15-point grid alpha_n = 1/alpha(m_n) behind tables 4-12.

    table:    printed alpha_n and phi_n, printed phi' (misprints corrected),
              phi'' by divided differences of phi'.
    divided:  printed alpha_n and phi_n, phi' by divided differences.
    computed: table-1 (m, K) grid solved here, derivatives by divided differences.
    """
    if source == "computed":
        pc = phi_curve(theoretical_points(ref.table1_grid()))
        pc.source = source
        return pc
    alpha = ref.column(4, "alpha")
    phi = ref.column(4, "phi")
    if source == "table":
        dphi = ref.column(4, "phi_prime")[:len(alpha) - 1]
        return PhiCurve.from_grid(alpha, phi, dphi, source="table")
    if source == "divided":
        return PhiCurve.from_grid(alpha, phi, source="divided")
    raise ValueError(f"unknown phi source {source!r}, expected one of {PHI_SOURCES}")


def _tau_at(k: int, qs, domain, workers):
    ls = log_sums(k, np.asarray(qs, dtype=float), domain, workers=workers)
    nrm = _norm(k)
    return ls.log_sum / nrm, ls.mean_lp / nrm


def first_legendre_rows(k: int, phi: PhiCurve, domain=Domain.FULL, *, workers: int = 1) -> list[ComparisonRow]:
    """X = tau(phi + alpha phi'), Y = alpha^2 phi' at the midpoints."""
    a, p, d = phi.alpha, phi.phi, phi.phi_prime
    tau, _ = _tau_at(k, p + a * d, domain, workers)
    return [ComparisonRow(n + 1, float(a[n]), float(tau[n]), float(a[n] ** 2 * d[n])) for n in range(len(a))]


def second_legendre_rows(k: int, phi: PhiCurve, domain=Domain.FULL, *, workers: int = 1) -> list[ComparisonRow]:
    """X = tau'(phi + alpha phi'), Y = alpha."""
    a, p, d = phi.alpha, phi.phi, phi.phi_prime
    _, tp = _tau_at(k, p + a * d, domain, workers)
    return [ComparisonRow(n + 1, float(a[n]), float(tp[n]), float(a[n])) for n in range(len(a))]


def phi_first_rows(k: int, phi: PhiCurve, domain=Domain.FULL, *, workers: int = 1) -> list[ComparisonRow]:
    """X = tau(phi'), Y = alpha phi' - phi."""
    a, p, d = phi.alpha, phi.phi, phi.phi_prime
    tau, _ = _tau_at(k, d, domain, workers)
    return [ComparisonRow(n + 1, float(a[n]), float(tau[n]), float(a[n] * d[n] - p[n])) for n in range(len(a))]


def phi_derivative_rows(k: int, phi: PhiCurve, domain=Domain.FULL, *, workers: int = 1) -> list[ComparisonRow]:
    """X = tau'(phi') phi'', Y = alpha phi'' where phi'' lives (between midpoints)."""
    a, d, d2 = phi.alpha2, phi.phi_prime2, phi.phi_second
    _, tp = _tau_at(k, d, domain, workers)
    return [ComparisonRow(n + 1, float(a[n]), float(tp[n] * d2[n]), float(a[n] * d2[n])) for n in range(len(a))]


def restricted_rows(k: int, phi: PhiCurve, domain=Domain.FULL, *, workers: int = 1,
                    alpha_low: float | None = None) -> list[ComparisonRow]:
    """X = tau'(phi'), Y = alpha on the midpoints with alpha >= 2 pi_bar_k / ln 2."""
    if alpha_low is None:
        alpha_low = 2 * level_stats(k, domain, workers=workers).pi_bar_k / math.log(2)
    a, d = phi.alpha, phi.phi_prime
    idx = [n for n in range(len(a)) if a[n] >= alpha_low]
    _, tp = _tau_at(k, d[idx], domain, workers)
    return [ComparisonRow(n + 1, float(a[n]), float(t), float(a[n])) for n, t in zip(idx, tp)]


@dataclass
class ErrorReport:
    n: list[int]
    delta: list[float]
    small: list[bool]
    n_min: int
    max_abs: float


def error_report(rows: Sequence[ComparisonRow], n_min: int = 5) -> ErrorReport:
    if not rows:
        raise ValueError("no rows")
    deltas = [r.delta for r in rows]
    small = [abs(r.X) < SMALL and abs(r.Y) < SMALL for r in rows]
    sel = [abs(dl) for r, dl in zip(rows, deltas) if r.n >= n_min]
    return ErrorReport([r.n for r in rows], deltas, small, n_min, max(sel) if sel else float("nan"))


# --- table assembly -------------------------------------------------------

@dataclass
class VerifyTable:
    table: int
    columns: list[str]
    rows: list[list]
    notes: list[str] = field(default_factory=list)


def table1(**_) -> VerifyTable:
    pts = theoretical_points(ref.table1_grid())
    cols = ["m", "K", "y", "z", "alpha", "f_H", "paper_y", "paper_z", "paper_alpha", "paper_f_H", "max_abs_diff"]
    rows = []
    for p, r in zip(pts, ref.table(1)):
        diff = max(abs(p.y - r["y"]), abs(p.z - r["z"]), abs(p.alpha - r["alpha"]), abs(p.f_H - r["f_H"]))
        rows.append([p.m, p.K, p.y, p.z, p.alpha, p.f_H, r["y"], r["z"], r["alpha"], r["f_H"], diff])
    return VerifyTable(1, cols, rows)


def _k_range(k_range, default=(10, 22)):
    lo, hi = default if k_range is None else k_range
    if lo < 2 or hi < lo:
        raise ValueError(f"bad k range {lo}..{hi}")
    return list(range(lo, hi + 1))


def table2(k_range=None, workers: int = 1, q_max: float | None = None, **_) -> VerifyTable:
    ks = _k_range(k_range)
    printed = {r["k"]: r for r in ref.table(2)}
    if q_max is None:
        q_max = calibrate_q_max(table_level(10), printed[10]["alpha_max"])
    vals = [alpha_max(table_level(k), [q_max], workers=workers) for k in ks]
    cols = ["k", "level", "alpha_max", "delta", "limit", "q_max", "fit", "paper_alpha_max", "paper_delta"]
    rows = []
    for i, (k, am) in enumerate(zip(ks, vals)):
        d = vals[i + 1].alpha - am.alpha if i + 1 < len(vals) else None
        p = printed.get(k, {})
        rows.append([k, table_level(k), am.alpha, d, am.limit, q_max, 1 / math.sqrt(k + 25),
                     p.get("alpha_max"), p.get("delta")])
    return VerifyTable(2, cols, rows, [f"q_max calibrated at k=10: {q_max!r}"])


def table3(k_range=None, workers: int = 1, **_) -> VerifyTable:
    ks = _k_range(k_range)
    printed = {r["k"]: r for r in ref.table(3)}
    vals = [alpha_unity(table_level(k), workers=workers) for k in ks]
    cols = ["k", "level", "alpha_k", "delta_bar", "fit", "paper_alpha_k", "paper_delta_bar"]
    rows = []
    for i, (k, a) in enumerate(zip(ks, vals)):
        d = vals[i + 1] - a if i + 1 < len(vals) else None
        p = printed.get(k, {})
        rows.append([k, table_level(k), a, d, math.log(k + 16) / (k + 16), p.get("alpha_k"), p.get("delta_bar")])
    return VerifyTable(3, cols, rows)


_ROW_FUNCS = {4: first_legendre_rows, 6: second_legendre_rows, 8: phi_first_rows,
              10: phi_derivative_rows, 11: restricted_rows}
_DELTA_OF = {5: 4, 7: 6, 9: 8, 12: 11}


def comparison_rows(tid: int, k: int = DEFAULT_TABLE_K, phi_source: str = "table",
                    workers: int = 1) -> list[ComparisonRow]:
    phi = phi_grid(phi_source)
    return _ROW_FUNCS[tid](table_level(k), phi, workers=workers)


def _printed_xy(tid):
    rows = ref.table(tid)
    first = ref.load()["tables"][str(tid)].get("first_n", 1)
    return {first + i: (r.get("X"), r.get("Y")) for i, r in enumerate(rows)}


def table_comparison(tid: int, k: int = DEFAULT_TABLE_K, phi_source: str = "table",
                     workers: int = 1, **_) -> VerifyTable:
    rows = comparison_rows(tid, k, phi_source, workers)
    printed = _printed_xy(tid)
    cols = ["n", "alpha_n", "X", "Y", "delta", "paper_X", "paper_Y", "small"]
    out = []
    for r in rows:
        px, py = printed.get(r.n, (None, None))
        out.append([r.n, r.alpha_n, r.X, r.Y, r.delta, px, py, abs(r.X) < SMALL and abs(r.Y) < SMALL])
    return VerifyTable(tid, cols, out, [f"k={k} (level {table_level(k)}), phi source {phi_source}"])


def table_errors(tid: int, k: int = DEFAULT_TABLE_K, phi_source: str = "table",
                 workers: int = 1, **_) -> VerifyTable:
    src = _DELTA_OF[tid]
    rows = comparison_rows(src, k, phi_source, workers)
    rep = error_report(rows)
    first = ref.load()["tables"][str(tid)].get("first_n", 1)
    printed = {first + i: r["delta"] for i, r in enumerate(ref.table(tid))}
    cols = ["n", "delta", "paper_delta", "small"]
    out = [[n, d, printed.get(n), s] for n, d, s in zip(rep.n, rep.delta, rep.small)]
    return VerifyTable(tid, cols, out, [f"max |delta| for n >= {rep.n_min}: {rep.max_abs!r}",
                                        f"k={k} (level {table_level(k)}), phi source {phi_source}"])


def build_table(tid: int, **kw) -> VerifyTable:
    if tid == 1:
        return table1(**kw)
    if tid == 2:
        return table2(**kw)
    if tid == 3:
        return table3(**kw)
    if tid in _ROW_FUNCS:
        return table_comparison(tid, **kw)
    if tid in _DELTA_OF:
        return table_errors(tid, **kw)
    raise ValueError(f"table must be 1..12, got {tid}")
