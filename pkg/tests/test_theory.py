import math
import random

import numpy as np
import pytest

from fareymf import reference as ref
from fareymf import theory as th
from fareymf.spectra import concavity_report

C = math.sqrt(math.pi ** 2 / 6 - 1)


def test_dim_EK():
    assert th.dim_EK(2) == pytest.approx(1 - 6 / (2 * math.pi ** 2) - 72 * math.log(2) / (4 * math.pi ** 4), rel=1e-15)
    assert th.dim_EK(2) == pytest.approx(0.5680, abs=1e-4)
    vals = [th.dim_EK(K) for K in (2, 5, 20, 100, 10 ** 4, 10 ** 8)]
    assert all(b > a for a, b in zip(vals, vals[1:])) and 1 - vals[-1] < 1e-7
    with pytest.raises(ValueError):
        th.dim_EK(1.5)


def test_K_of_m():
    assert th.K_of_m(5) == 26
    assert th.K_of_m(7) == 92
    assert th.K_of_m(1) == 2
    assert th.default_K(5) == 78 and th.default_K(1.2) == 20


def test_lambda_bar():
    for K in (2, 7, 50, 1000):
        lam = th.lambda_bar(K).lam
        assert math.fsum(lam) == pytest.approx(1, abs=1e-12)
        assert all(b < a for a, b in zip(lam, lam[1:]))
    # exponent -> 2, so lam_1 -> (1/4) / (zeta(2) - 1)
    assert th.lambda_bar(10 ** 6).lam[0] == pytest.approx(0.25 / (math.pi ** 2 / 6 - 1), abs=1e-4)
    assert 0.25 / (math.pi ** 2 / 6 - 1) == pytest.approx(0.3876, abs=1e-4)


def _alpha_closed(m):
    # direct restatement, independent of the package's vectorized version
    K = math.ceil(math.exp((math.pi ** 2 / 6 - 1) * m))
    e = 2 * (1 - 6 / (math.pi ** 2 * K) - 72 * math.log(K) / (math.pi ** 4 * K ** 2))
    w = [(d + 1) ** -e for d in range(1, K + 1)]
    s = math.fsum(w)
    return math.log(2) / 2 * m / (math.log(C) + math.fsum(wi / s * math.log(d + 1) for d, wi in enumerate(w, 1)))


def test_alpha_of_m_large():
    for m in (2, 5, 7, 11.5):
        assert th.alpha_of_m_large(m) == pytest.approx(_alpha_closed(m), rel=1e-12)
    # the closed form sits above the system solution (1.5528, 2.032) by a few percent at moderate m
    assert th.alpha_of_m_large(5) == pytest.approx(1.5923, abs=1e-4)
    assert th.alpha_of_m_large(7) == pytest.approx(2.0643, abs=1e-4)
    with pytest.raises(ValueError):
        th.alpha_of_m_large(1.5)


def test_closed_form_tracks_system():
    ms = [4, 5, 6, 7, 10, 12]
    gaps = [th.alpha_of_m_large(m) / th.theoretical_point(m, max(400, th.default_K(m))).alpha - 1 for m in ms]
    assert all(g > 0 for g in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[0] < 0.04 and gaps[-2] < 0.01


def test_solver_examples():
    s = th.solve_system(1.2, 20)
    assert (s.y, s.z) == pytest.approx((0.3744, 0.1596), abs=2e-3)
    s = th.solve_system(3, 60)
    assert (s.y, s.z) == pytest.approx((0.1456, 0.4268), abs=2e-3)
    assert max(abs(r) for r in s.residuals) <= 1e-12
    assert -0.5 * math.log(0.3744) == pytest.approx(0.4912, abs=1e-4)


def test_point_examples():
    p = th.theoretical_point(1.4, 25)
    assert (p.alpha, p.f_H) == pytest.approx((0.7863, 0.6770), abs=2e-3)
    p = th.theoretical_point(2, 30)
    assert (p.alpha, p.f_H) == pytest.approx((0.8942, 0.8809), abs=2e-3)
    assert p.f_H == -0.5 * math.log(p.y)


@pytest.mark.parametrize("m,K", [(1.01, 10), (1.2, 20), (2.5, 40), (5, 300), (7, 400), (9, 900)])
def test_lambda_bbar_distribution(m, K):
    p = th.theoretical_point(m, K)
    assert p.lam_sum == pytest.approx(1, abs=1e-10)
    assert p.lam_mean == pytest.approx(m, abs=1e-8)
    # the same statements through the residuals, evaluated independently
    f, g = th.system_residual(m, K, p.y, p.z)
    assert abs(f) <= 1e-12 and abs(g) <= 1e-12
    assert math.exp(-2) < p.y < 1 and 0 < p.z < 1


def test_lambda_bbar_is_the_system():
    # at arbitrary (y, z): sum lam - 1 = g and sum (m - d) lam is f times the prefactor
    rng = random.Random(1)
    for _ in range(10):
        m, K = rng.uniform(1.1, 6), rng.randint(5, 60)
        y, z = rng.uniform(0.15, 0.9), rng.uniform(0.05, 0.9)
        lam = th.lambda_bbar(m, K, y, z)
        f, g = th.system_residual(m, K, y, z)
        assert math.fsum(lam) - 1 == pytest.approx(g, rel=1e-9, abs=1e-12)
        d = np.arange(1, K + 1)
        pref = math.exp(th._coeffs(m, K)[2] * math.log(y) - (m - 1) * math.log(z))
        assert math.fsum((m - d) * lam) == pytest.approx(pref * f, rel=1e-9, abs=1e-12)


def test_jacobian_vs_finite_differences():
    rng = random.Random(20)
    for _ in range(20):
        m, K = rng.uniform(1.05, 8), rng.randint(3, 200)
        y, z = rng.uniform(0.2, 0.9), rng.uniform(0.05, 0.8)
        J = th.system_jacobian(m, K, y, z)
        for col, (hy, hz) in enumerate(((1e-6 * y, 0), (0, 1e-6 * z))):
            hi = np.array(th.system_residual(m, K, y + hy, z + hz))
            lo = np.array(th.system_residual(m, K, y - hy, z - hz))
            fd = (hi - lo) / (2 * (hy + hz))
            scale = np.maximum(np.abs(fd), 1e-3 * np.abs(J).max())
            assert np.all(np.abs(J[:, col] - fd) <= 1e-5 * scale)


def test_table1_internal_identity():
    # y and f_H are printed to 4 decimals; the half-unit in y moves -ln(y)/2 by 5e-5/(2y)
    for r in ref.table(1):
        tol = 5e-5 / (2 * r["y"]) + 5e-5
        assert -0.5 * math.log(r["y"]) == pytest.approx(r["f_H"], abs=tol)


def test_continuation_monotone():
    K = 400
    # y moves fast just above m = 1, so the points are packed there
    ms = 1 + np.geomspace(0.01, 6, 120)
    ys, zs = [], []
    guess = None
    for m in ms[::-1]:
        s = th.solve_system(float(m), K, guess=guess)
        guess = (s.y, s.z)
        ys.append(s.y)
        zs.append(s.z)
    ys, zs = np.array(ys[::-1]), np.array(zs[::-1])
    # y falls and z rises with m, with no jumps
    assert np.all(np.diff(ys) < 0) and np.all(np.diff(zs) > 0)
    assert np.max(np.abs(np.diff(ys))) < 0.05 and np.max(np.abs(np.diff(zs))) < 0.05
    # no branch jump: a cold start lands on the same branch everywhere
    for j in range(0, len(ms), 17):
        s = th.solve_system(float(ms[j]), K)
        assert (s.y, s.z) == pytest.approx((ys[j], zs[j]), abs=1e-9)


def test_cold_start_matches_warm():
    pts = th.theoretical_points(ref.table1_grid())
    for p in pts:
        cold = th.solve_system(p.m, p.K)
        assert (cold.y, cold.z) == pytest.approx((p.y, p.z), abs=1e-10)


def test_solver_errors():
    with pytest.raises(ValueError):
        th.solve_system(1.0, 20)
    with pytest.raises(ValueError):
        th.solve_system(2, 1)
    with pytest.raises(ValueError):
        th.solve_system(7, 5)
    with pytest.raises(th.SolverError):
        th.solve_system(3, 60, max_iter=1, guess=(0.9, 0.01))


def test_theoretical_spectrum_shape():
    c = th.theoretical_spectrum(ref.table1_grid())
    assert np.all(np.diff(c.alpha) > 0)
    assert c.alpha[0] > th.ALPHA_MIN and c.alpha[0] - th.ALPHA_MIN < 0.02
    assert th.ALPHA_MIN == pytest.approx(0.7202, abs=1e-4)
    assert concavity_report(c).passed
    assert th.theoretical_point(12).f_H > 0.999


def test_phi_curve():
    pc = th.phi_curve(ref.table1_grid())
    a4, phi4, d4 = ref.column(4, "alpha"), ref.column(4, "phi"), ref.column(4, "phi_prime")
    assert pc.grid_alpha[0] == pytest.approx(1 / 2.032, abs=5e-4)
    assert pc.grid_alpha[0] == pytest.approx(a4[0], abs=5e-4)
    assert pc.grid_phi[0] == pytest.approx(0.9983, abs=2e-3)
    for n in range(4, 15):
        assert pc.phi_prime[n - 1] == pytest.approx(d4[n - 1], rel=0.05)
    assert np.all(np.diff(pc.grid_phi) < 0)
    s = pc.samples
    assert len(s) == 14 and s[-1].low_confidence and not s[0].low_confidence


def test_table4_alpha_is_inverted_table1():
    # the printed columns agree row by row, including the m = 6 row
    a1 = [r["alpha"] for r in ref.table(1)]
    a4 = ref.column(4, "alpha")
    inv = sorted(1 / a for a in a1)
    assert inv == pytest.approx(a4, abs=1e-3)


def test_phi_curve_needs_three_points():
    with pytest.raises(ValueError):
        th.PhiCurve.from_grid([0.5, 0.6], [1.0, 0.9])
