import math

import numpy as np
import pytest
from scipy import integrate

from hypmax.geometry import EuclideanBall, Point
from hypmax.integrate import (
    MeasureEstimate,
    QuadratureError,
    adaptive_panels,
    gauss_tail,
    gauss_tail_bound,
    integrate_disk_region,
    integrate_disks,
    log_gauss_tail,
    mc_ball_measure,
)
from hypmax.measures import (
    Density,
    MeasureSpec,
    Region,
    ball_measure,
    gaussian_part,
    hyperbola_part,
    paper_measure,
)

# independent oracles, see tests/oracles/generate.py
POLAR_GAUSSIAN_0_2 = 0.3960850826164265
M2_REFERENCE_DISK = 0.058820737290330716
MC_M1_REFERENCE_DISK = (2.1583131705413368e-20, 2.4459422364312232e-23)
MC_M2_REFERENCE_DISK = (0.058814384386385234, 0.0001346520352994802)
DBLQUAD_GAUSSIAN = {
    (0.3, 1.2, 0.9): 0.17850209279468568,
    (-1.0, 0.5, 0.4): 0.04217639693746622,
    (2.0, 3.0, 2.5): 0.10123102422547953,
}

GAUSS = Density("gaussian2d")
LEB = Density("lebesgue")
HALF = Region("upper_half_plane")
HYP = Region("hyperbola_tail")
UNIT = MeasureSpec(((HALF, LEB),))


class TestEstimate:
    def test_negative_error_rejected(self):
        with pytest.raises(ValueError):
            MeasureEstimate(1.0, -1e-3, "quadrature")

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            MeasureEstimate(1.0, 0.0, "guess")

    def test_log_value_undoes_shift(self):
        est = MeasureEstimate(2.0, 0.0, "quadrature", log_shift=100.0)
        assert est.log_value == pytest.approx(math.log(2.0) - 100.0)


class TestDiskQuadrature:
    @pytest.mark.parametrize("r", [0.1, 1.0, 7.5])
    def test_area(self, r):
        est = integrate_disk_region(LEB, HALF, EuclideanBall(Point(0.3, 10.0), r), tol=1e-12)
        assert est.value == pytest.approx(math.pi * r * r, abs=1e-10)

    def test_disjoint_is_exact_zero(self):
        est = integrate_disk_region(LEB, HYP, EuclideanBall(Point(-5, 1), 0.9))
        assert (est.value, est.err) == (0.0, 0.0)

    def test_m2_reference_disk(self):
        est = integrate_disk_region(LEB, HYP, (10.0, 1.0, 1.0), tol=1e-14)
        assert est.value == pytest.approx(M2_REFERENCE_DISK, abs=1e-13)
        assert 0 < est.value <= 2 * math.sqrt(2) / 27

    def test_gaussian_polar_oracle(self):
        est = integrate_disk_region(GAUSS, HALF, EuclideanBall(Point(0, 2), 1.999), tol=1e-12)
        assert est.value == pytest.approx(POLAR_GAUSSIAN_0_2, abs=1e-8)

    @pytest.mark.parametrize("disk", sorted(DBLQUAD_GAUSSIAN))
    def test_gaussian_dblquad_oracle(self, disk):
        est = integrate_disk_region(GAUSS, HALF, disk, tol=1e-13)
        assert est.value == pytest.approx(DBLQUAD_GAUSSIAN[disk], abs=1e-12)

    def test_disk_below_axis_clipped(self):
        # B_e((0, 1), 2) ∩ {y > 0}: area of the disk above the chord y = 0
        est = integrate_disk_region(LEB, HALF, (0.0, 1.0, 2.0), tol=1e-12)
        theta = 2 * math.acos(-1.0 / 2.0)
        segment = 0.5 * 4.0 * (theta - math.sin(theta))
        assert est.value == pytest.approx(segment, abs=1e-10)

    def test_bad_disk(self):
        with pytest.raises(ValueError):
            integrate_disk_region(LEB, HALF, (0.0, -1.0, 0.5))

    def test_batch_matches_single(self):
        rng = np.random.default_rng(2)
        a = rng.uniform(-2, 12, 30)
        b = np.exp(rng.uniform(-3, 2, 30))
        r = b * rng.uniform(0.05, 0.99, 30)
        res = integrate_disks(LEB, HYP, a, b, r, tol=1e-12)
        single = [integrate_disk_region(LEB, HYP, (ai, bi, ri), tol=1e-12).value
                  for ai, bi, ri in zip(a, b, r)]
        np.testing.assert_allclose(res.value, single, rtol=0, atol=1e-15)

    def test_tolerance_scaling(self):
        disk = (1.5, 0.8, 0.7)
        prev = None
        for tol in (1e-6, 5e-7, 1e-7, 1e-8, 1e-9):
            est = integrate_disk_region(GAUSS, HALF, disk, tol=tol, rtol=0.0)
            assert est.err <= tol
            if prev is not None:
                assert est.err <= prev.err
                assert abs(est.value - prev.value) <= 2 * max(est.err, prev.err) + 1e-15
            prev = est

    def test_budget_exhaustion_reports_estimate(self):
        with pytest.raises(QuadratureError) as info:
            integrate_disk_region(GAUSS, HALF, (0.0, 1.0, 0.5), tol=1e-30, rtol=0.0)
        assert info.value.estimate.value > 0

    def test_adaptive_panels_on_kink(self):
        f = lambda t, k: np.abs(t - 0.3)
        val, err, _, ok = adaptive_panels(f, [0.0], [1.0], [0], 1, 1e-12, 0.0)
        assert ok[0] and val[0] == pytest.approx(0.045 + 0.245, abs=1e-12)


class TestMonteCarlo:
    def test_unit_density_zero_variance(self):
        est = mc_ball_measure(UNIT, EuclideanBall(Point(0, 3), 2.0), 4096, seed=1)
        assert est.value == pytest.approx(4 * math.pi, rel=1e-14)
        assert est.err == 0.0

    def test_disjoint_exact_zero(self):
        est = mc_ball_measure(hyperbola_part(), EuclideanBall(Point(-4, 1), 0.5), 10_000, seed=0)
        assert (est.value, est.err) == (0.0, 0.0)

    def test_deterministic(self):
        ball = EuclideanBall(Point(2, 0.6), 0.5)
        a = mc_ball_measure(paper_measure(), ball, 300_000, seed=42)
        b = mc_ball_measure(paper_measure(), ball, 300_000, seed=42)
        c = mc_ball_measure(paper_measure(), ball, 300_000, seed=43)
        assert a == b
        assert a.value != c.value

    def test_stderr_survives_nearly_constant_density(self):
        # disk inside the hyperbola tail: density is 1 plus a ~1e-8 gaussian term
        disk = (5.727461694863388, 0.09400524319101389, 0.06133446256641766)
        mc = mc_ball_measure(paper_measure(), disk, 10**6, seed=1071)
        q = ball_measure(paper_measure(), disk)
        assert mc.err > 0
        assert abs(mc.value - q.value) <= 3 * (mc.err + q.err)

    def test_minimum_samples(self):
        with pytest.raises(ValueError):
            mc_ball_measure(paper_measure(), (0, 1, 0.5), 999, seed=0)

    def test_reference_disk_agrees_with_quadrature(self):
        mc = mc_ball_measure(paper_measure(), (10.0, 1.0, 1.0), 10**6, seed=42)
        q = ball_measure(paper_measure(), (10.0, 1.0, 1.0))
        assert abs(mc.value - q.value) <= 3 * (mc.err + q.err)

    def test_frozen_oracle_consistent(self):
        m1 = ball_measure(gaussian_part(), (10.0, 1.0, 1.0), tol=1e-30, rtol=1e-12).value
        m2 = ball_measure(hyperbola_part(), (10.0, 1.0, 1.0), tol=1e-14).value
        assert abs(m1 - MC_M1_REFERENCE_DISK[0]) <= 3 * MC_M1_REFERENCE_DISK[1]
        assert abs(m2 - MC_M2_REFERENCE_DISK[0]) <= 3 * MC_M2_REFERENCE_DISK[1]


class TestGaussTail:
    def test_bound_near_one(self):
        assert gauss_tail_bound(1 + 1e-9) == pytest.approx(math.exp(-0.5), rel=1e-8)

    @pytest.mark.parametrize("t", [2.0, 5.0, 9.0])
    def test_majorization(self, t):
        assert gauss_tail(t) < gauss_tail_bound(t)

    def test_R10_value(self):
        assert gauss_tail_bound(9.0) == pytest.approx(math.exp(-40.5) / 9, rel=1e-15)
        assert gauss_tail_bound(9.0) == pytest.approx(2.6e-19, rel=0.05)

    @pytest.mark.parametrize("t", [1.0, 0.5])
    def test_rejects_small_t(self, t):
        with pytest.raises(ValueError):
            gauss_tail_bound(t)

    @pytest.mark.parametrize("t", [1.5, 3.0, 9.0, 30.0])
    def test_tail_matches_quad(self, t):
        ref = integrate.quad(lambda u: math.exp(-0.5 * u * u), t, np.inf, epsabs=0, epsrel=1e-13)[0]
        assert gauss_tail(t) == pytest.approx(ref, rel=1e-10)
        assert log_gauss_tail(t) == pytest.approx(math.log(ref), rel=1e-12)

    def test_log_tail_far_below_float_range(self):
        t = 100.0
        # Mills ratio expansion: tail ~ e^{-t^2/2}/t (1 - 1/t^2 + 3/t^4)
        approx = -0.5 * t * t - math.log(t) + math.log1p(-1 / t**2 + 3 / t**4)
        assert log_gauss_tail(t) == pytest.approx(approx, abs=1e-9)
