import math

import numpy as np
import pytest

from hypmax.geometry import EuclideanBall, HyperbolicBall, Point, euclid_to_hyp, hyp_distance, hyp_to_euclid
from hypmax.maximal import (
    EPS_SEQUENCE,
    DiracAtom,
    MaximalValue,
    ball_average_dirac,
    maximal_atoms,
    maximal_dirac,
)
from hypmax.measures import ball_measure, paper_measure

MU = paper_measure()
ATOM = DiracAtom(Point(10.5, 1.0))


def test_atom_mass_validation():
    with pytest.raises(ValueError):
        DiracAtom(Point(0, 1), mass=0.0)


def test_eps_sequence():
    assert EPS_SEQUENCE == tuple(1e-2 * 4.0 ** -k for k in range(7))


class TestBallAverage:
    def test_atom_outside(self):
        assert ball_average_dirac(MU, Point(0, 1), 0.5, ATOM) == 0.0

    def test_large_ball_at_atom(self):
        s = 5.0
        avg = ball_average_dirac(MU, ATOM.location, s, ATOM)
        assert avg == pytest.approx(1.0 / ball_measure(MU, HyperbolicBall(ATOM.location, s)).value)

    def test_witness_disk(self):
        R, x, y = 10.0, 10.3, 0.05
        r = math.sqrt(1 - y * y)
        disk = EuclideanBall(Point(x, 1.0), r)
        h = euclid_to_hyp(disk)
        assert h.center.y == pytest.approx(y, rel=1e-12)
        avg = ball_average_dirac(MU, h.center, h.radius, DiracAtom(Point(R + 0.5, 1.0)))
        assert avg == pytest.approx(1.0 / ball_measure(MU, disk).value, rel=1e-9)

    def test_radius_validation(self):
        with pytest.raises(ValueError):
            ball_average_dirac(MU, Point(0, 1), 0.0, ATOM)


class TestMaximalDirac:
    def test_at_atom_is_infinite(self):
        m = maximal_dirac(MU, ATOM.location, ATOM)
        assert m.is_infinite and m.to_dict()["value"] is None

    def test_strip_point_exceeds_level(self):
        R = 100.0
        atom = DiracAtom(Point(R + 0.5, 1.0))
        m = maximal_dirac(MU, Point(100.5, 1 / 101), atom)
        assert m.value > (R - 1) ** 1.5 / 3

    def test_extrapolation_matches_direct(self):
        w = Point(0.0, 1.0)
        d = hyp_distance(w, ATOM.location)
        m = maximal_dirac(MU, w, ATOM)
        direct = 1.0 / ball_measure(MU, HyperbolicBall(w, d + 1e-6), tol=1e-12).value
        assert m.value == pytest.approx(direct, rel=1e-4)
        assert m.achieving_radius == d
        assert m.err < 1e-4

    def test_linear_in_mass(self):
        w = Point(3.0, 0.4)
        one = maximal_dirac(MU, w, ATOM).value
        heavy = maximal_dirac(MU, w, DiracAtom(ATOM.location, 2.5)).value
        assert heavy == pytest.approx(2.5 * one, rel=1e-14)

    def test_beyond_float_range(self):
        # near (99, 1) the ball meets only the gaussian, at about e^{-4900}
        m = maximal_dirac(MU, Point(99.0, 1.0), DiracAtom(Point(100.5, 1.0)))
        assert not m.is_infinite and math.isinf(m.value)
        d = hyp_distance(Point(99.0, 1.0), Point(100.5, 1.0))
        e = hyp_to_euclid(HyperbolicBall(Point(99.0, 1.0), d))
        # the mass concentrates at the lowest point of the disk, nearest the origin
        low = math.hypot(e.center.x, e.center.y) - e.radius
        assert m.log_value == pytest.approx(0.5 * low * low, rel=1e-2)
        assert m.err < 1e-6

    def test_decreases_along_ray(self):
        vals = [maximal_dirac(MU, Point(10.5, math.exp(t)), ATOM).value for t in np.linspace(0.2, 3.0, 8)]
        assert np.all(np.diff(vals) < 0)
        vals = [maximal_dirac(MU, Point(10.5 - dx, 1.0), ATOM).value for dx in (0.5, 1, 2, 4, 8)]
        assert np.all(np.diff(vals) < 0)


class TestRadialMonotonicity:
    def test_random_centers(self):
        rng = np.random.default_rng(4)
        s = np.geomspace(1e-3, 8.0, 50)
        for _ in range(6):
            w = Point(rng.uniform(-3, 12), math.exp(rng.uniform(-3, 1.5)))
            vals = [ball_measure(MU, HyperbolicBall(w, si), tol=1e-13).value for si in s]
            assert np.all(np.diff(vals) >= -1e-12)


class TestMaximalAtoms:
    def test_single_atom_matches_dirac(self):
        w = Point(9.0, 0.7)
        exact = maximal_dirac(MU, w, ATOM)
        grid = maximal_atoms(MU, w, [ATOM], refine=4)
        assert grid.value <= exact.value * (1 + 1e-9)
        assert grid.value == pytest.approx(exact.value, rel=2e-2)

    def test_all_atoms_inside_smallest_covering_radius(self):
        w = Point(0.0, 1.0)
        atoms = [DiracAtom(Point(0.1, 1.0), 0.5), DiracAtom(Point(-0.05, 1.1), 1.5)]
        d_max = max(hyp_distance(w, a.location) for a in atoms)
        grid = np.geomspace(1e-3, 10.0, 300)
        m = maximal_atoms(MU, w, atoms, radius_grid=grid, refine=0)
        s_best = grid[grid > d_max][0]
        assert m.achieving_radius == s_best
        assert m.value == pytest.approx(2.0 / ball_measure(MU, HyperbolicBall(w, s_best)).value, rel=1e-9)

    def test_two_symmetric_atoms_dominate_one(self):
        w = Point(0.0, 1.0)
        left, right = DiracAtom(Point(-0.4, 1.0)), DiracAtom(Point(0.4, 1.0))
        both = maximal_atoms(MU, w, [left, right])
        assert both.value >= maximal_atoms(MU, w, [left]).value
        assert both.value >= maximal_atoms(MU, w, [right]).value

    def test_lower_bound_against_finer_grid(self):
        w = Point(2.0, 0.3)
        atoms = [DiracAtom(Point(2.5, 0.2)), DiracAtom(Point(1.0, 1.0), 3.0)]
        coarse = maximal_atoms(MU, w, atoms, radius_grid=np.geomspace(1e-3, 1e2, 200), refine=0)
        fine = maximal_atoms(MU, w, atoms, radius_grid=np.geomspace(1e-3, 1e2, 399), refine=0)
        assert coarse.value <= fine.value * (1 + coarse.err) + 1e-12

    def test_point_on_atom(self):
        assert maximal_atoms(MU, ATOM.location, [ATOM]).is_infinite

    def test_validation(self):
        with pytest.raises(ValueError):
            maximal_atoms(MU, Point(0, 1), [])
        with pytest.raises(ValueError):
            maximal_atoms(MU, Point(0, 1), [ATOM], radius_grid=[0.0, 1.0])


def test_maximal_value_dict():
    d = MaximalValue.from_log(math.log(3.0), 0.5, 1e-6).to_dict()
    assert d == {"value": pytest.approx(3.0), "infinite": False, "log_value": math.log(3.0),
                 "achieving_radius": 0.5, "rel_err": 1e-6}
    huge = MaximalValue.from_log(4900.0, 1.0, 0.0)
    assert not huge.is_infinite and huge.to_dict()["value"] is None
