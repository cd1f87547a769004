"""Numerical experiments: failure of the weak (1,1) bound, linear growth, and the
chain of inequalities behind both.

The weak-type probe uses the strip ``S_R = {R < x < R + 1, 0 < y < g(x)}``
and the atom at ``(R + 1/2, 1)``.  Every strip point ``(x, y)`` is the
hyperbolic center of the witness disk ``B_e((x, 1), sqrt(1 - y^2))``, which
contains the atom, so ``M(delta)(x, y) >= 1 / mu(witness disk)``.  If that
exceeds the level ``lambda`` on all of ``S_R`` then
``mu{M delta > lambda} >= |S_R|`` and ``lambda * |S_R|`` bounds the weak
constant from below.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import optimize, special

from .geometry import Point, hyp_to_euclid_array
from .integrate import (
    disk_params,
    integrate_disks,
    integrate_rect_region,
    log_gauss_tail,
    log_gauss_tail_bound,
    mc_ball_measure,
)
from .maximal import DiracAtom, maximal_dirac
from .measures import (
    Density,
    MeasureSpec,
    Region,
    ball_measure,
    ball_measure_batch,
    log_ball_measure_batch,
    strip_measure_m2,
)

EPS = np.finfo(float).eps
_M1_SPEC = MeasureSpec(((Region("upper_half_plane"), Density("gaussian2d")),))
SAFETY = 10.0


def _round_err(*vals):
    return 8.0 * EPS * max(abs(float(v)) for v in vals)


# ---------------------------------------------------------------- reports


@dataclass
class InequalityCheck:
    """One inequality ``lhs < rhs`` (or ``lhs <= rhs``), checked at its worst case.

    ``margin`` is oriented so that positive means the inequality holds;
    ``error`` is the combined numerical error of both sides.  With
    ``scale == "log"`` both sides are natural logarithms.
    """

    id: str
    title: str
    lhs: float
    rhs: float
    margin: float
    error: float
    passed: bool
    scale: str = "linear"
    n_cases: int = 1
    worst_case: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def _check(id_, title, lhs, rhs, error, *, scale="linear", case=None, notes=None,
           safety=SAFETY, extra_ok=True) -> InequalityCheck:
    """Fold per-case arrays into a single record at the tightest case."""
    lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
    error = np.broadcast_to(np.atleast_1d(np.asarray(error, dtype=float)), lhs.shape)
    margin = rhs - lhs
    slack = margin - safety * error
    k = int(np.argmin(slack))
    worst = {}
    if case:
        worst = {name: float(np.atleast_1d(vals)[k]) for name, vals in case.items()}
    passed = bool(np.all(margin > 0) and np.all(slack > 0) and extra_ok)
    return InequalityCheck(id_, title, float(lhs[k]), float(rhs[k]), float(margin[k]),
                           float(error[k]), passed, scale, int(lhs.size), worst, notes or {})


# ---------------------------------------------------------------- strip geometry


def _tail_region(spec: MeasureSpec) -> Region:
    tails = [r for r, d in spec.components if r.kind != "upper_half_plane" and d.kind == "lebesgue"]
    if len(tails) != 1:
        raise ValueError("the probe needs exactly one (tail region, lebesgue) component")
    return tails[0]


def weak_type_level(region: Region, R: float) -> float:
    """Level exceeded by ``M delta_(R+1/2, 1)`` on the strip.

    For the hyperbola tail this is ``(R - 1)^{3/2} / 3``.  For the exponential
    tail the same argument bounds the disk part by ``2 sqrt(2) e^{-3(R-1)/2}``
    and gives ``e^{3(R-1)/2} / 3``.
    """
    if region.kind == "hyperbola_tail":
        return (R - 1.0) ** 1.5 / 3.0
    if region.kind == "exp_tail":
        return math.exp(1.5 * (R - 1.0)) / 3.0
    raise ValueError(f"no weak-type level for region {region.kind!r}")


def strip_samples(region: Region, R: float, n: int, seed: int):
    """``n`` seeded points of the strip: x uniform in (R, R+1), y uniform in (0, g(x))."""
    rng = np.random.default_rng(seed)
    x = R + rng.random(n)
    v = rng.random(n)
    v = np.where(v > 0, v, 0.5)
    y = v * region.section_top(x)
    keep = x > R
    return x[keep], y[keep]


def witness_radius(y):
    """Euclidean radius of the disk centered at height 1 whose hyperbolic center has height y."""
    y = np.asarray(y, dtype=float)
    return np.sqrt((1.0 - y) * (1.0 + y))


# ---------------------------------------------------------------- weak type


@dataclass(frozen=True)
class WeakTypeParams:
    R: float
    samples: int = 200
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.R) and self.R > 2):
            raise ValueError(f"R must exceed 2 (the estimates need R - 1 > 1), got R={self.R}")
        if self.samples < 10:
            raise ValueError(f"need at least 10 strip samples, got {self.samples}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")


@dataclass
class WeakTypeReport:
    params: WeakTypeParams
    region: str
    level: float
    strip_measure: float
    strip_lower_bound: float
    min_maximal_over_samples: float
    violations: list
    structural_violations: list
    weak_constant_lower_bound: float
    reference_disk_measure: float
    reference_comparison_failures: int
    checks: list
    effort: int

    @property
    def passed(self) -> bool:
        return (not self.violations and not self.structural_violations
                and self.strip_measure > self.strip_lower_bound * (1 - 1e-15)
                and all(c.passed for c in self.checks))

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "checks"}
        d["params"] = asdict(self.params)
        d["checks"] = [c.to_dict() for c in self.checks]
        d["passed"] = self.passed
        return _jsonable(d)


def weak_type_probe(spec: MeasureSpec, p: WeakTypeParams) -> WeakTypeReport:
    region = _tail_region(spec)
    R = p.R
    lam = weak_type_level(region, R)
    strip = region.strip_measure(R)
    # the simple lower bound for the strip measure used in the weak constant
    strip_lb = 1.0 / (2.0 * R) if region.kind == "hyperbola_tail" else strip

    x, y = strip_samples(region, R, p.samples, p.seed)
    r = witness_radius(y)
    atom_x = R + 0.5
    structural = []
    # r < 1 holds exactly for 0 < y < 1 but rounds to 1 once y < ~1e-8; the
    # rounded disk is slightly larger, which only makes the level check harder
    radius_ok = (r >= 0.5) & (r <= 1.0) & (y > 0) & (y < 1)
    atom_in = (atom_x - x) ** 2 < r * r
    # hyperbolic center of B_e((x, 1), r) must be (x, y); recovering y from
    # a rounded r near 1 amplifies rounding by 1/y
    center_y = np.sqrt((1.0 - r) * (1.0 + r))
    center_ok = np.abs(center_y - y) <= 8 * EPS * (y + 1.0 / y)
    for i in np.nonzero(~(radius_ok & atom_in & center_ok))[0]:
        structural.append({"x": x[i], "y": y[i], "r": r[i], "radius_ok": radius_ok[i],
                           "atom_inside": atom_in[i], "center_ok": center_ok[i]})

    tol = min(p.tol, 1e-3 / lam)
    mu, err, effort, conv = ball_measure_batch(spec, x, np.ones_like(x), r, tol=tol)
    lower = 1.0 / (mu + err)
    bad = ~(lower > lam) | ~conv
    violations = [{"x": x[i], "y": y[i], "r": r[i], "mu": mu[i], "err": err[i],
                   "maximal_lower_bound": lower[i]} for i in np.nonzero(bad)[0]]

    ref = ball_measure(spec, (R, 1.0, 1.0), tol=tol)
    ref_fail = int(np.sum(mu - err > ref.value + ref.err))

    quad = integrate_rect_region(Density("lebesgue"), region, R, R + 1.0, 0.0, 1.0,
                                 tol=1e-6 * strip, rtol=1e-12)
    checks = [
        _check("strip-quadrature", "closed-form strip measure matches quadrature",
               abs(quad.value - strip), 1e-8 * strip, quad.err + _round_err(strip),
               notes={"quadrature": quad.value, "closed_form": strip}),
    ]
    if region.kind == "hyperbola_tail":
        checks.append(_check("strip", "strip measure exceeds 1/(2R)", strip_lb, strip,
                             _round_err(strip, strip_lb), notes={"R": R}))
    checks += [
        _check("atom", "atom lies in every witness disk", (atom_x - x) ** 2, r * r,
               _round_err(1.0), case={"x": x, "y": y}),
        _check("level", "witness-disk measure below 1/level", mu, np.full(mu.shape, 1.0 / lam), err,
               case={"x": x, "y": y}),
    ]
    return WeakTypeReport(
        params=p, region=region.kind, level=lam, strip_measure=strip, strip_lower_bound=strip_lb,
        min_maximal_over_samples=float(lower.min()), violations=violations,
        structural_violations=structural, weak_constant_lower_bound=lam * strip_lb,
        reference_disk_measure=ref.value, reference_comparison_failures=ref_fail,
        checks=checks, effort=int(effort.sum() + ref.effort))


def level_set_window(spec: MeasureSpec, R: float, nx: int = 12, ny: int = 12,
                     y_top: Optional[float] = None) -> dict:
    """Direct estimate of ``mu({M delta > lambda} & W)`` on ``W = (R, R+1) x (0, y_top)``.

    Optional cross-check for :func:`weak_type_probe`.  ``W`` is cut into an
    ``nx`` by ``ny`` grid (``y`` log-spaced down to ``1e-6 y_top``) and a cell
    counts toward the superlevel set when the maximal function at its
    midpoint exceeds the level.  Cell masses are exact quadratures, so the
    estimate is only as coarse as the grid.  ``y_top`` defaults to twice
    the top of the strip, so cells above the strip are tested too.
    """
    region = _tail_region(spec)
    lam = weak_type_level(region, R)
    if y_top is None:
        y_top = 2.0 * float(region.section_top(np.array([R]))[0])
    atom = DiracAtom(Point(R + 0.5, 1.0))
    xs = np.linspace(R, R + 1.0, nx + 1)
    ys = np.concatenate(([0.0], np.geomspace(1e-6 * y_top, y_top, ny)))
    above = total = 0.0
    n_above = 0
    for i in range(nx):
        for j in range(ny):
            mass = sum(integrate_rect_region(d, reg, xs[i], xs[i + 1], ys[j], ys[j + 1],
                                             tol=1e-14).value for reg, d in spec.components)
            ym = 0.5 * (ys[j] + ys[j + 1]) if j == 0 else math.sqrt(ys[j] * ys[j + 1])
            m = maximal_dirac(spec, Point(0.5 * (xs[i] + xs[i + 1]), ym), atom)
            total += mass
            if m.log_value > math.log(lam):
                above += mass
                n_above += 1
    strip = region.strip_measure(R)
    return {"R": R, "level": lam, "window_mass": total, "superlevel_mass": above,
            "cells_above": n_above, "cells": nx * ny, "strip_measure": strip,
            "ratio_to_strip": above / strip}


# ---------------------------------------------------------------- growth scan


@dataclass(frozen=True)
class GrowthScanParams:
    """Grid over hyperbolic centers ``(x, y)`` and radii ``s``.

    ``x`` is linearly spaced; ``y`` and ``s`` are log-spaced.
    """

    x_range: tuple = (-20.0, 20.0)
    x_count: int = 40
    y_range: tuple = (1e-3, 20.0)
    y_count: int = 40
    s_range: tuple = (1e-3, 10.0)
    s_count: int = 40
    tol: float = 1e-9
    rtol: float = 1e-8

    def __post_init__(self):
        for name in ("x_count", "y_count", "s_count"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be at least 2")
        if not (self.y_range[0] > 0 and self.s_range[0] > 0):
            raise ValueError("y and s ranges must be positive")
        if not (self.x_range[1] > self.x_range[0] and self.y_range[1] > self.y_range[0]
                and self.s_range[1] > self.s_range[0]):
            raise ValueError("ranges must be increasing")
        if not (self.tol > 0 and self.rtol >= 0):
            raise ValueError("tolerances must be positive")

    def axes(self):
        return (np.linspace(*self.x_range, self.x_count),
                np.geomspace(*self.y_range, self.y_count),
                np.geomspace(*self.s_range, self.s_count))


def _midpoints(axis, log):
    mid = np.sqrt(axis[:-1] * axis[1:]) if log else 0.5 * (axis[:-1] + axis[1:])
    return mid


@dataclass
class GrowthReport:
    params: GrowthScanParams
    sup_ratio: float
    argsup: dict
    empirical_constant: float
    refinement: dict
    stability_delta: float
    failed_cells: int
    effort: int
    table: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return math.isfinite(self.sup_ratio) and self.sup_ratio > 0 and self.failed_cells == 0

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "table"}
        d["params"] = asdict(self.params)
        d["passed"] = self.passed
        return _jsonable(d)

    def table_rows(self):
        t = self.table
        for i in range(len(t["x"])):
            yield (t["x"][i], t["y"][i], t["s"][i], t["mu"][i], t["err"][i], t["ratio"][i],
                   bool(t["converged"][i]))


def growth_table(spec: MeasureSpec, x, y, s, tol=1e-9, rtol=1e-8, chunk=4096, workers=1):
    """``mu(B_h((x, y), s))`` for flat arrays of centers and radii.

    Chunks are independent; with ``workers > 1`` they run on a thread pool
    and are reassembled by position, so results do not depend on scheduling.
    """
    x, y, s = (np.asarray(v, dtype=float).ravel() for v in (x, y, s))
    starts = range(0, x.size, chunk)

    def one(start):
        sl = slice(start, start + chunk)
        a, b, r = hyp_to_euclid_array(x[sl], y[sl], s[sl])
        return ball_measure_batch(spec, a, b, r, tol=tol, rtol=rtol)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(one, starts))
    else:
        parts = [one(st) for st in starts]
    if not parts:
        empty = np.zeros(0)
        return empty, empty, empty.astype(np.int64), empty.astype(bool)
    return tuple(np.concatenate(cols) for cols in zip(*parts))


def _evaluate(spec, p, gx, gy, gs, workers=1):
    X, Y, S = np.meshgrid(gx, gy, gs, indexing="ij")
    mu, err, eff, ok = growth_table(spec, X, Y, S, tol=p.tol, rtol=p.rtol, workers=workers)
    return X.ravel(), Y.ravel(), S.ravel(), mu, err, eff, ok


def growth_scan(spec: MeasureSpec, p: GrowthScanParams, refine: bool = True,
                workers: int = 1) -> GrowthReport:
    """Scan ``mu(B_h(w, s)) / s`` over the grid.

    With ``refine``, each axis in turn gets its midpoints inserted; only
    the new cells are evaluated and the sup over the refined grid is
    compared with the base sup.
    """
    gx, gy, gs = p.axes()
    x, y, s, mu, err, eff, ok = _evaluate(spec, p, gx, gy, gs, workers)
    ratio = mu / s
    k = int(np.argmax(np.where(ok, ratio, -np.inf)))
    sup = float(ratio[k])
    effort = int(eff.sum())
    failed = int(np.sum(~ok))
    refinement = {}
    if refine:
        for name, axes in (("x", (_midpoints(gx, False), gy, gs)),
                           ("y", (gx, _midpoints(gy, True), gs)),
                           ("s", (gx, gy, _midpoints(gs, True)))):
            *_, rs, rmu, _, reff, rok = _evaluate(spec, p, *axes, workers=workers)
            new_sup = float(np.max(np.where(rok, rmu / rs, -np.inf)))
            rsup = max(sup, new_sup)
            effort += int(reff.sum())
            failed += int(np.sum(~rok))
            refinement[name] = {"count": 2 * len(axes[["x", "y", "s"].index(name)]) + 1,
                                "sup_ratio": rsup, "relative_change": abs(rsup - sup) / sup}
    delta = max((v["relative_change"] for v in refinement.values()), default=0.0)
    constant = max([sup] + [v["sup_ratio"] for v in refinement.values()])
    return GrowthReport(
        params=p, sup_ratio=sup,
        argsup={"x": float(x[k]), "y": float(y[k]), "s": float(s[k]), "mu": float(mu[k]), "err": float(err[k])},
        empirical_constant=constant, refinement=refinement, stability_delta=delta,
        failed_cells=failed, effort=effort,
        table={"x": x, "y": y, "s": s, "mu": mu, "err": err, "ratio": ratio, "converged": ok})


# ---------------------------------------------------------------- inequality suite


def _parts(spec: MeasureSpec):
    m1 = m2 = None
    for region, density in spec.components:
        if region.kind == "upper_half_plane" and density.kind == "gaussian2d":
            m1 = (region, density)
        elif region.kind == "hyperbola_tail" and density.kind == "lebesgue":
            m2 = (region, density)
    if m1 is None or m2 is None:
        raise ValueError("the inequality suite needs the gaussian and hyperbola-tail components")
    return m1, m2


def _log_m1(a, b, r, rtol=1e-12):
    """log of m1(B_e((a, b), r)) with its relative error, for disks far below float range."""
    return log_ball_measure_batch(_M1_SPEC, a, b, r, rtol=rtol)


def _hyp_radius(b, r):
    b = np.asarray(b, dtype=float)
    r = np.asarray(r, dtype=float)
    return 0.5 * np.log1p(2.0 * r / (b - r))


def check_strip(R: float) -> InequalityCheck:
    strip = strip_measure_m2(R)
    quad = integrate_rect_region(Density("lebesgue"), Region("hyperbola_tail"), R, R + 1.0, 0.0, 1.0)
    notes = {"R": R, "strip_quadrature": quad.value, "quadrature_gap": abs(quad.value - strip)}
    return _check("I1", "m2(strip) = log(1 + 1/R) > 1/(2R)", 1.0 / (2.0 * R), strip,
                  _round_err(strip), notes=notes, extra_ok=abs(quad.value - strip) <= 1e-8)


def check_atom_membership(R: float, n: int, seed: int) -> InequalityCheck:
    x, y = strip_samples(Region("hyperbola_tail"), R, n, seed)
    r = witness_radius(y)
    return _check("I2", "(R + 1/2, 1) lies in B_e((x, 1), r)", (x - R - 0.5) ** 2, r * r,
                  _round_err(1.0), case={"x": x, "y": y}, notes={"R": R, "r_min": float(r.min())},
                  extra_ok=bool(np.all((r >= 0.5) & (r < 1.0))))


def check_gaussian_tail(R: float) -> InequalityCheck:
    t = R - 1.0
    lm1, rel, conv = _log_m1(R, 1.0, 1.0)
    mid = log_gauss_tail(t)
    rhs = log_gauss_tail_bound(t)
    err = float(rel[0]) + _round_err(rhs)
    first = _check("I3a", "", float(lm1[0]), mid, err)
    second = _check("I3b", "", mid, rhs, _round_err(rhs, mid))
    notes = {"R": R, "log_tail_integral": mid, "margin_m1_vs_tail": first.margin,
             "margin_tail_vs_bound": second.margin}
    return _check("I3", "m1(B_e((R,1),1)) < int_{R-1}^inf e^{-t^2/2} dt < e^{-(R-1)^2/2}/(R-1)",
                  float(lm1[0]), rhs, err, scale="log", notes=notes,
                  extra_ok=first.passed and second.passed and bool(conv[0]))


def check_rectangle(R: float, n_grid: int = 2000, n_mc: int = 100_000, seed: int = 0) -> InequalityCheck:
    half = math.sqrt(2.0 / (R - 1.0))
    # t^2/2 < 1 - sqrt(1 - t^2) on the relevant range of t = x - R
    t = np.linspace(1e-3, min(half, 1.0 - 1e-9), n_grid)
    lhs = 0.5 * t * t
    rhs = t * t / (1.0 + np.sqrt((1.0 - t) * (1.0 + t)))
    pointwise = _check("I4a", "", lhs, rhs, 4 * EPS * rhs)

    def gap(x):
        u = x - R
        return 1.0 / x - u * u / (1.0 + math.sqrt((1.0 - u) * (1.0 + u)))

    x_left = optimize.brentq(gap, R - 1.0 + 1e-15, R, xtol=1e-15, rtol=4 * EPS)
    x_right = optimize.brentq(gap, R, R + 1.0 - 1e-15, xtol=1e-15, rtol=4 * EPS)
    extent = max(R - x_left, x_right - R)
    y_top = 1.0 / x_left

    rng = np.random.default_rng(seed)
    rho = np.sqrt(rng.random(n_mc))
    phi = 2 * np.pi * rng.random(n_mc)
    px, py = R + rho * np.cos(phi), 1.0 + rho * np.sin(phi)
    inside = (py > 0) & (py < 1.0 / px)
    outside_rect = inside & ((np.abs(px - R) >= half) | (py >= 1.0 / (R - 1.0)))
    notes = {"R": R, "x_extent": extent, "half_width": half, "y_top": y_top,
             "height": 1.0 / (R - 1.0), "pointwise_margin": pointwise.margin,
             "mc_points_in_set": int(inside.sum()), "mc_points_outside_rectangle": int(outside_rect.sum())}
    height_ok = _check("I4c", "", y_top, 1.0 / (R - 1.0), 1e-12)
    return _check("I4", "disk ∩ {y < 1/x} lies in the rectangle", extent, half, 1e-12, notes=notes,
                  extra_ok=pointwise.passed and height_ok.passed and not outside_rect.any())


def check_m2_bound(R: float, tol: float) -> InequalityCheck:
    est = ball_measure(_m2_spec(), (R, 1.0, 1.0), tol=tol)
    rhs = 2.0 * math.sqrt(2.0) / (R - 1.0) ** 1.5
    return _check("I5", "m2(B_e((R,1),1)) < 2 sqrt(2)/(R-1)^{3/2}", est.value, rhs,
                  est.err + _round_err(rhs), notes={"R": R, "effort": est.effort})


def _m2_spec():
    return MeasureSpec(((Region("hyperbola_tail"), Density("lebesgue")),))


def _reference_measure(spec, R, tol):
    return ball_measure(spec, (R, 1.0, 1.0), tol=tol)


def check_combined(spec: MeasureSpec, R: float, tol: float) -> InequalityCheck:
    est = _reference_measure(spec, R, tol)
    rhs = 3.0 / (R - 1.0) ** 1.5
    return _check("I6", "mu(B_e((R,1),1)) < 3/(R-1)^{3/2}", est.value, rhs,
                  est.err + _round_err(rhs), notes={"R": R})


def find_R0(spec: MeasureSpec, tol: float = 1e-9, r_minus_1=None) -> dict:
    """Smallest R above which ``mu(B_e((R,1),1)) < 3/(R-1)^{3/2}`` holds on the scan.

    Scans ``R - 1`` on a log grid; if a failing R is found, bisects between
    the last failure and the next success.
    """
    if r_minus_1 is None:
        r_minus_1 = np.geomspace(1e-2, 1e3, 61)
    grid = 1.0 + np.asarray(r_minus_1, dtype=float)

    def holds(R):
        est = _reference_measure(spec, R, tol)
        return 3.0 / (R - 1.0) ** 1.5 - est.value > SAFETY * est.err

    ok = np.array([holds(R) for R in grid])
    failing = np.nonzero(~ok)[0]
    if failing.size == 0:
        return {"R0": float(grid[0]), "holds_on_whole_scan": True,
                "scan": [float(grid[0]), float(grid[-1])], "n_grid": int(grid.size)}
    last = int(failing[-1])
    if last == grid.size - 1:
        return {"R0": math.inf, "holds_on_whole_scan": False,
                "scan": [float(grid[0]), float(grid[-1])], "n_grid": int(grid.size)}
    lo, hi = grid[last], grid[last + 1]
    for _ in range(40):
        mid = math.sqrt(lo * hi) if lo > 0 else 0.5 * (lo + hi)
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return {"R0": float(hi), "holds_on_whole_scan": False,
            "scan": [float(grid[0]), float(grid[-1])], "n_grid": int(grid.size)}


def _growth_samples(rng, n, b_lo, b_hi):
    b = np.exp(rng.uniform(math.log(b_lo), math.log(b_hi), n))
    a = rng.uniform(-20.0, 20.0, n)
    return a, b


def check_small_b(spec: MeasureSpec, n: int, seed: int, tol: float, grid_n: int = 400):
    """b <= 3: s >= r/3, and m_i(B) <= 3 pi rho_i r with rho_i the density maximum."""
    rng = np.random.default_rng(seed)
    a, b = _growth_samples(rng, n, 1e-3, 3.0)
    r = b * rng.uniform(1e-6, 1.0, n)
    s = _hyp_radius(b, r)
    # brute-force oracle for the constant: min of s/r over a (b, r) grid
    gb = np.linspace(3.0 / grid_n, 3.0, grid_n)
    gu = np.linspace(1.0 / grid_n, 1.0 - 1.0 / grid_n, grid_n)
    B, U = np.meshgrid(gb, gu, indexing="ij")
    c_grid = float(np.min(_hyp_radius(B, U * B) / (U * B)))
    checks = [_check("I7", "b <= 3 implies s >= r/3", r / 3.0, s, 4 * EPS * s,
                     case={"a": a, "b": b, "r": r}, notes={"grid_min_s_over_r": c_grid},
                     extra_ok=c_grid >= 1.0 / 3.0)]
    (r1, d1), (r2, d2) = _parts(spec)
    for name, (region, density), rho in (("m1", (r1, d1), 1.0 / (2 * math.pi)), ("m2", (r2, d2), 1.0)):
        res = integrate_disks(density, region, a, b, r, tol=tol, rtol=1e-10)
        bound = 3.0 * math.pi * rho * r
        checks.append(_check(f"I7-{name}", f"b <= 3 implies {name}(B) <= 3 pi rho r",
                             res.value, bound, res.err + 4 * EPS * bound,
                             case={"a": a, "b": b, "r": r},
                             notes={"empirical_c_r": float(np.max(res.value / r)),
                                    "empirical_c_s": float(np.max(res.value / s))},
                             extra_ok=bool(res.converged.all())))
    return checks


def check_large_b_m2(spec: MeasureSpec, n: int, seed: int, tol: float):
    """b > 3, r > b - 1: m2(B) <= log(1 + 2r) <= 2s."""
    rng = np.random.default_rng(seed)
    a, b = _growth_samples(rng, n, 3.0, 100.0)
    r = b - 1.0 + rng.uniform(1e-6, 1.0 - 1e-6, n)
    s = _hyp_radius(b, r)
    _, (region, density) = _parts(spec)
    res = integrate_disks(density, region, a, b, r, tol=tol, rtol=1e-10)
    log_bound = np.log1p(2.0 * r)
    case = {"a": a, "b": b, "r": r}
    first = _check("I8a", "", res.value, log_bound, res.err + 4 * EPS * log_bound, case=case)
    second = _check("I8b", "", log_bound, 2.0 * s, 8 * EPS * s, case=case)
    notes = {"margin_m2_vs_log": first.margin, "margin_log_vs_2s": second.margin,
             "empirical_c_s": float(np.max(res.value / s)),
             "zero_unless_r_gt_b_minus_1": _m2_zero_below(region, density, b, rng)}
    return _check("I8", "b > 3, r > b - 1 implies m2(B) <= log(1 + 2r) <= 2s",
                  res.value, 2.0 * s, res.err + 8 * EPS * s, case=case, notes=notes,
                  extra_ok=first.passed and second.passed and bool(res.converged.all())
                  and notes["zero_unless_r_gt_b_minus_1"])


def _m2_zero_below(region, density, b, rng):
    # disks with b > 3 and r < b - 1 stay above y = 1 > 1/x on x > 1
    r = (b - 1.0) * rng.uniform(0.01, 1.0 - 1e-9, b.size)
    a = rng.uniform(-20.0, 20.0, b.size)
    res = integrate_disks(density, region, a, b, r)
    return bool(np.all(res.value == 0.0))


def check_comparable(spec: MeasureSpec, n: int, seed: int, tol: float):
    """b > 3, b/3 <= r < b: m1(B) <= 1/2 and s >= log(2)/2."""
    rng = np.random.default_rng(seed)
    a, b = _growth_samples(rng, n, 3.0, 100.0)
    r = b * rng.uniform(1.0 / 3.0, 1.0 - 1e-6, n)
    s = _hyp_radius(b, r)
    (region, density), _ = _parts(spec)
    res = integrate_disks(density, region, a, b, r, tol=tol, rtol=1e-10)
    case = {"a": a, "b": b, "r": r}
    mass = _check("I9a", "", res.value, np.full(n, 0.5), res.err, case=case)
    radius = _check("I9b", "", np.full(n, 0.5 * math.log(2.0)), s, 8 * EPS * s, case=case)
    notes = {"margin_m1_vs_half": mass.margin, "margin_s_vs_half_log2": radius.margin,
             "empirical_c_s": float(np.max(res.value / s))}
    return _check("I9", "b/3 <= r < b implies m1(B) <= 1/2 and s >= log(2)/2",
                  radius.lhs, radius.rhs, radius.error, case=case, notes=notes,
                  extra_ok=mass.passed and radius.passed and bool(res.converged.all()))


def check_far_gaussian(spec: MeasureSpec, n: int, seed: int):
    """b > 3, r < b/3: the chain bounding m1(B) by e^{-(b-r)^2/2}/(b-r) min(1, 2r), and
    the two closing comparisons with s (constants reported, not asserted)."""
    _parts(spec)
    rng = np.random.default_rng(seed)
    a, b = _growth_samples(rng, n, 3.0, 100.0)
    r = np.exp(rng.uniform(math.log(1e-3), np.log(b / 3.0)))
    s = _hyp_radius(b, r)
    case = {"a": a, "b": b, "r": r}
    t = b - r

    lm_ab, e_ab, ok1 = _log_m1(a, b, r)
    lm_0b, e_0b, ok2 = _log_m1(np.zeros(n), b, r)
    log_int_x = np.log(np.sqrt(2 * np.pi) * special.erf(r / math.sqrt(2.0)))
    log_tail = np.array([log_gauss_tail(v) for v in t])
    log_rect = -math.log(2 * math.pi) + log_int_x + log_tail
    log_tailb = -0.5 * t * t - np.log(t)
    log_step3 = -math.log(2 * math.pi) + log_tailb + log_int_x
    log_final = log_tailb + np.log(np.minimum(1.0, 2.0 * r))
    tiny = 16 * EPS
    links = [
        _check("I10a", "", lm_ab, lm_0b, e_ab + e_0b, case=case),
        _check("I10b", "", lm_0b, log_rect, e_0b + tiny, case=case),
        _check("I10c", "", log_rect, log_step3, tiny * np.abs(log_step3), case=case),
        _check("I10d", "", log_step3, log_final, tiny * np.abs(log_final), case=case),
    ]
    small = r < 0.5
    notes = {"link_margins": {c.id: c.margin for c in links}}
    closing_ok = True
    if small.any():
        bs, rs, ts, ss = b[small], r[small], t[small], s[small]
        c1 = np.max(np.exp(-0.5 * ts * ts) * bs / ts)
        c2 = np.max((2 * rs / bs) / (0.5 * np.log1p(2 * rs / bs)))
        last = _check("I10e", "", 0.5 * np.log1p(2 * rs / bs), ss, 8 * EPS * ss)
        closing_ok &= last.passed
        notes["r_below_half"] = {"n": int(small.sum()), "c_exp_vs_1_over_b": float(c1),
                                 "c_2r_over_b_vs_log": float(c2), "margin_log_vs_s": last.margin}
    big = ~small
    if big.any():
        bs, ts, ss = b[big], t[big], s[big]
        c1 = np.max(np.exp(-0.5 * ts * ts) * bs / ts)
        c2 = np.max((1.0 / bs) / (0.5 * np.log1p(1.0 / bs)))
        last = _check("I10f", "", 0.5 * np.log1p(1.0 / bs), ss, 8 * EPS * ss)
        closing_ok &= last.passed
        notes["r_at_least_half"] = {"n": int(big.sum()), "c_exp_vs_1_over_b": float(c1),
                                    "c_1_over_b_vs_log": float(c2), "margin_log_vs_s": last.margin}
    with np.errstate(over="ignore"):
        notes["empirical_c_s"] = float(np.max(np.exp(lm_ab - np.log(s))))
    worst = min(links, key=lambda c: c.margin - SAFETY * c.error)
    return _check("I10", "b > 3, r < b/3 implies m1(B) <= e^{-(b-r)^2/2}/(b-r) min(1, 2r) <= c s",
                  worst.lhs, worst.rhs, worst.error, scale="log", case=None, notes=notes,
                  extra_ok=all(c.passed for c in links) and closing_ok
                  and bool(ok1.all() and ok2.all()))


@dataclass
class SuiteReport:
    checks: list
    R_values: tuple
    samples: int
    seed: int
    R0: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return _jsonable({"R_values": list(self.R_values), "samples": self.samples, "seed": self.seed,
                          "R0": self.R0, "passed": self.passed,
                          "checks": [c.to_dict() for c in self.checks]})


def proof_step_suite(spec: MeasureSpec, R_values: Sequence[float] = (10.0, 100.0),
                     sample_budget: int = 1000, seed: int = 0, tol: float = 1e-10,
                     find_r0: bool = True) -> SuiteReport:
    """Run I1-I10.  I1-I6 are checked at every R; I7-I10 on ``sample_budget``
    random ``(a, b, r)`` per growth case."""
    _parts(spec)
    checks = []
    for R in R_values:
        if not R > 2:
            raise ValueError(f"R must exceed 2, got {R}")
        checks += [
            check_strip(R),
            check_atom_membership(R, sample_budget, seed),
            check_gaussian_tail(R),
            check_rectangle(R, seed=seed),
            check_m2_bound(R, tol),
            check_combined(spec, R, tol),
        ]
    checks += check_small_b(spec, sample_budget, seed + 1, tol)
    checks.append(check_large_b_m2(spec, sample_budget, seed + 2, tol))
    checks.append(check_comparable(spec, sample_budget, seed + 3, tol))
    checks.append(check_far_gaussian(spec, sample_budget, seed + 4))
    r0 = find_R0(spec, tol=tol) if find_r0 else {}
    return SuiteReport(checks, tuple(R_values), sample_budget, seed, r0)


def mc_cross_check(spec: MeasureSpec, disk, n: int = 10**6, seed: int = 0, tol: float = 1e-9) -> dict:
    """Quadrature vs Monte Carlo on one disk; returns both estimates and the z-score."""
    q = ball_measure(spec, disk, tol=tol)
    m = mc_ball_measure(spec, disk, n, seed)
    sigma = q.err + m.err
    z = abs(q.value - m.value) / sigma if sigma > 0 else (0.0 if q.value == m.value else math.inf)
    return {"disk": list(disk_params(disk)), "quadrature": q.to_dict(), "monte_carlo": m.to_dict(), "z": z}
