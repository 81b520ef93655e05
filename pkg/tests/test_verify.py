import math

import numpy as np
import pytest

from fareymf import farey_core as fc
from fareymf import partition as pt
from fareymf import reference as ref
from fareymf import verify as v

K22 = 22
FIB = [0, 1]
while len(FIB) < 50:
    FIB.append(FIB[-1] + FIB[-2])


@pytest.fixture(scope="module")
def rows():
    return {t: v.comparison_rows(t, K22) for t in (4, 6, 8, 10, 11)}


def test_table_level_offset():
    assert v.table_level(22) == 21 and v.table_level(1) == 0
    with pytest.raises(ValueError):
        v.table_level(0)


def test_relative_error_convention():
    assert v.relative_error(2.0, 3.0) == 0.5
    assert v.relative_error(-6.1776, -6.1523) == pytest.approx((-6.1523 + 6.1776) / 6.1523)
    assert v.relative_error(0.0, 0.0) == 0.0
    assert v.relative_error(0.0, 1.0) == math.inf
    r = v.ComparisonRow(1, 0.5, -6.1776, -6.1523)
    assert abs(r.delta) == pytest.approx(0.0041, abs=1e-4)


def test_endpoint_identities():
    lev = v.table_level(K22)
    t1, t0 = pt.tau_bar(lev, [1.0, 0.0])
    # alpha = 0 in the first Legendre equation: q = 1, X = 0 = Y
    assert abs(t1.tau) < 1e-12
    # alpha = 0 in the phi equation: q = 0, X = -1 = 0 * phi' - phi(0)
    assert t0.tau == -1.0
    pib = fc.level_stats(lev).pi_bar_k
    assert t0.tau_prime == pytest.approx(2 * pib / math.log(2), abs=1e-3)


def test_alpha_max_endpoint():
    # q -> -inf picks out the smallest interval 1/(F_{k+1} F_{k+2})
    for k in (10, 16, 21):
        want = math.log(FIB[k + 1] * FIB[k + 2]) / (k * math.log(2))
        assert pt.tau_bar_prime(k, -400.0) == pytest.approx(want, rel=1e-9)
    lim = math.log(((1 + math.sqrt(5)) / 2) ** 2) / math.log(2)
    assert lim == pytest.approx(1.3885, abs=1e-4)
    gaps = [lim - pt.tau_bar_prime(k, -400.0) for k in (10, 16, 21, 30)]
    assert all(0 < b < a for a, b in zip(gaps, gaps[1:]))


def test_first_legendre_examples(rows):
    r = {x.n: x for x in rows[4]}
    assert r[10].alpha_n == pytest.approx(1.2718 + (1.3226 - 1.2718) / 2, abs=1e-3)
    assert r[10].X == pytest.approx(-6.1776, rel=0.02)
    assert r[10].Y == pytest.approx(-6.1523, rel=0.02)
    assert abs(r[10].delta) == pytest.approx(0.0041, abs=0.02)
    assert r[14].X == pytest.approx(-39.7022, rel=0.02)
    assert r[14].Y == pytest.approx(-39.4545, rel=0.02)


def test_second_legendre_examples(rows):
    r = {x.n: x for x in rows[6]}
    assert (r[7].X, r[7].Y) == pytest.approx((1.0726, 1.0727), rel=0.02)
    assert (r[14].X, r[14].Y) == pytest.approx((1.3753, 1.3642), rel=0.02)


def test_phi_first_examples(rows):
    r = {x.n: x for x in rows[8]}
    assert (r[10].X, r[10].Y) == pytest.approx((-5.5259, -5.3288), rel=0.02)
    assert (r[1].X, r[1].Y) == pytest.approx((-1.0169, -1.0057), rel=0.02)


def test_phi_derivative_examples(rows):
    r = {x.n: x for x in rows[10]}
    assert (r[10].X, r[10].Y) == pytest.approx((-126.9, -126.9), rel=0.02)
    restricted = rows[11]
    assert restricted[0].n == 8
    assert (restricted[2].X, restricted[2].Y) == pytest.approx((1.2936, 1.2972), abs=1e-3)
    pib = fc.level_stats(v.table_level(K22)).pi_bar_k
    assert all(x.alpha_n >= 2 * pib / math.log(2) for x in restricted)


def test_alpha_zero_leveler():
    # phi''(0) = 0: both sides of the derivative equation vanish whatever tau' is
    pc = v.PhiCurve.from_grid([0.0, 0.1, 0.2, 0.3], [1.0, 1.0, 1.0, 1.0])
    out = v.phi_derivative_rows(8, pc)
    assert all(r.X == 0 and r.Y == 0 for r in out)


def test_error_report_examples(rows):
    rep = v.error_report(rows[4])
    assert rep.small[:4] == [True] * 4 and not any(rep.small[4:])
    assert abs(rep.delta[9]) == pytest.approx(0.0041, abs=0.02)
    rep7 = v.error_report(rows[6])
    assert abs(rep7.delta[6]) == pytest.approx(0.001, abs=1e-3)
    assert rep.max_abs == max(abs(d) for n, d in zip(rep.n, rep.delta) if n >= 5)
    with pytest.raises(ValueError):
        v.error_report([])


@pytest.mark.parametrize("tid", [5, 7, 9, 12])
def test_delta_within_printed_bound(tid):
    tb = v.table_errors(tid, K22)
    for n, d, printed, _ in tb.rows:
        if n >= 5:
            assert abs(d) <= abs(printed) + 0.02, (n, d, printed)


@pytest.mark.parametrize("tid", [4, 6, 8, 10, 11])
def test_monotone_convergence_in_k(tid):
    worst = [max(abs(r.Y - r.X) for r in v.comparison_rows(tid, k) if r.n >= 5) for k in (14, 18, 22)]
    assert worst[0] >= worst[1] >= worst[2], worst


def test_phi_sources():
    t, d, c = (v.phi_grid(s) for s in v.PHI_SOURCES)
    assert np.array_equal(t.grid_alpha, d.grid_alpha)
    # the table source carries the printed phi' (with the n = 11 misprint fixed)
    assert t.phi_prime[10] == -7.4559
    assert d.phi_prime[9] == pytest.approx(t.phi_prime[9], rel=0.01)
    assert len(c.grid_alpha) == 15
    with pytest.raises(ValueError):
        v.phi_grid("nope")


def test_table_builders():
    t1 = v.build_table(1)
    assert len(t1.rows) == 15 and t1.columns[:2] == ["m", "K"]
    t3 = v.build_table(3, k_range=(10, 12))
    assert [r[0] for r in t3.rows] == [10, 11, 12]
    assert t3.rows[0][2] == pytest.approx(1.2220, abs=2e-3)
    t4 = v.build_table(4, k=14)
    assert t4.columns == ["n", "alpha_n", "X", "Y", "delta", "paper_X", "paper_Y", "small"]
    with pytest.raises(ValueError):
        v.build_table(13)
    with pytest.raises(ValueError):
        v.build_table(3, k_range=(10, 5))


def test_reference_corrections():
    assert ref.column(4, "alpha")[7] == 1.1183
    assert ref.column(4, "alpha", corrected=False)[7] == 1.183
    a = ref.column(4, "alpha")
    assert all(b > x for x, b in zip(a, a[1:]))


@pytest.mark.parametrize("tid", [4, 6, 8, 11])
def test_solver_grid_matches_printed(tid):
    # phi and phi' from the solver instead of the printed grid
    printed = v._printed_xy(tid)
    for r in v.comparison_rows(tid, K22, "computed"):
        px, py = printed[r.n]
        if r.n >= 5:
            assert abs(r.X - px) <= max(0.02 * abs(px), 0.02)
            assert abs(r.Y - py) <= max(0.02 * abs(py), 0.02)


def test_solver_grid_second_differences_drift():
    # second differences amplify the small grid differences near alpha_max:
    # the solved grid misses printed table 10 at n = 11 by about 4%
    r = {x.n: x for x in v.comparison_rows(10, K22, "computed")}
    assert r[11].X == pytest.approx(-404.2, rel=0.06)
    assert abs(r[11].X / -404.2 - 1) > 0.02
