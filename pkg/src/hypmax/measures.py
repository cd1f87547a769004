"""Absolutely continuous measures on the half-plane built from (region, density) pairs.

The measure used throughout is ``mu = m1 + m2`` where ``m1`` is the standard
gaussian on the plane restricted to ``y > 0`` and ``m2`` is Lebesgue measure on
``{x > 1, 0 < y < 1/x}``.  Replacing the hyperbola by ``0 < y < exp(-x)``
(for ``x > 0``) gives a finite variant of the same construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .geometry import Ball, Point

REGION_KINDS = ("upper_half_plane", "hyperbola_tail", "exp_tail")
DENSITY_KINDS = ("gaussian2d", "lebesgue")

_INV_2PI = 1.0 / (2.0 * math.pi)
_SQRT_HALF_PI = math.sqrt(0.5 * math.pi)
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Region:
    """Set of the form ``{x in domain, 0 < y < g(x)}``."""

    kind: str

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}; expected one of {REGION_KINDS}")

    @property
    def x_min(self) -> float:
        """Left end of the x-domain (the region is empty for x <= x_min)."""
        return {"upper_half_plane": -math.inf, "hyperbola_tail": 1.0, "exp_tail": 0.0}[self.kind]

    def section_top(self, x):
        """Upper end ``g(x)`` of the vertical section ``(0, g(x))``; 0 where empty."""
        x = np.asarray(x, dtype=float)
        if self.kind == "upper_half_plane":
            return np.full(x.shape, np.inf)
        with np.errstate(divide="ignore", over="ignore"):
            if self.kind == "hyperbola_tail":
                return np.where(x > 1.0, 1.0 / x, 0.0)
            return np.where(x > 0.0, np.exp(-np.maximum(x, 0.0)), 0.0)

    def contains(self, x, y):
        return (np.asarray(y) > 0) & (np.asarray(y) < self.section_top(x))

    def strip_measure(self, R: float) -> float:
        """Lebesgue measure of ``{R < x < R + 1} ∩ region`` in closed form."""
        if self.kind == "hyperbola_tail":
            if not R > 1:
                raise ValueError(f"the strip lies inside the hyperbola tail only for R > 1, got R={R}")
            return math.log1p(1.0 / R)
        if self.kind == "exp_tail":
            if not R > 0:
                raise ValueError(f"the strip lies inside the exponential tail only for R > 0, got R={R}")
            return math.exp(-R) * -math.expm1(-1.0)
        raise ValueError("the upper half-plane strip has infinite measure")

    def arc_crossings(self, a, b, r):
        """x-coordinates where ``y = g(x)`` meets the circle ``|(x, y) - (a, b)| = r``.

        Returns ``(index, x)`` arrays: one entry per crossing, ``index`` naming
        the disk.  Only crossings inside the region's x-domain are kept.
        """
        a = np.atleast_1d(np.asarray(a, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if self.kind == "upper_half_plane":
            empty = np.zeros(0)
            return empty.astype(int), empty
        if self.kind == "hyperbola_tail":
            return _hyperbola_crossings(a, b, r)
        return _sampled_crossings(self, a, b, r)


def _hyperbola_crossings(a, b, r):
    # x^2 (x - a)^2 + (1 - b x)^2 = r^2 x^2 expanded into a monic quartic
    n = a.size
    c2 = a * a + (b - r) * (b + r)
    comp = np.zeros((n, 4, 4))
    comp[:, 0, :] = np.stack([2.0 * a, -c2, 2.0 * b, -np.ones(n)], axis=1)
    comp[:, 1, 0] = comp[:, 2, 1] = comp[:, 3, 2] = 1.0
    roots = np.linalg.eigvals(comp)
    scale = 1.0 + np.abs(a)[:, None] + r[:, None]
    real = np.abs(roots.imag) <= 1e-7 * scale
    idx, col = np.nonzero(real & (roots.real > 1.0 - 1e-9))
    x = roots.real[idx, col]
    ai, bi, ri = a[idx], b[idx], r[idx]
    for _ in range(4):
        f = (x - ai) ** 2 + (1.0 / x - bi) ** 2 - ri * ri
        df = 2.0 * (x - ai) - 2.0 * (1.0 / x - bi) / (x * x)
        step = np.where(df != 0, f / np.where(df != 0, df, 1.0), 0.0)
        x = x - step
    keep = (x > 1.0) & (np.abs(x - ai) < ri)
    return idx[keep], x[keep]


def _sampled_crossings(region, a, b, r, n_grid=257, n_bisect=60):
    lo = np.maximum(a - r, region.x_min)
    hi = a + r
    ok = hi > lo
    t = np.linspace(0.0, 1.0, n_grid)
    xs = lo[:, None] + (hi - lo)[:, None] * t[None, :]

    def f(x, ai, bi, ri):
        return (x - ai) ** 2 + (region.section_top(x) - bi) ** 2 - ri * ri

    fx = f(xs, a[:, None], b[:, None], r[:, None])
    change = (np.sign(fx[:, :-1]) * np.sign(fx[:, 1:]) < 0) & ok[:, None]
    idx, col = np.nonzero(change)
    xl, xr = xs[idx, col], xs[idx, col + 1]
    fl = fx[idx, col]
    ai, bi, ri = a[idx], b[idx], r[idx]
    for _ in range(n_bisect):
        xm = 0.5 * (xl + xr)
        fm = f(xm, ai, bi, ri)
        left = np.sign(fm) == np.sign(fl)
        xl = np.where(left, xm, xl)
        fl = np.where(left, fm, fl)
        xr = np.where(left, xr, xm)
    return idx, 0.5 * (xl + xr)


@dataclass(frozen=True)
class Density:
    kind: str

    def __post_init__(self):
        if self.kind not in DENSITY_KINDS:
            raise ValueError(f"unknown density kind {self.kind!r}; expected one of {DENSITY_KINDS}")

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.kind == "lebesgue":
            return np.ones(np.broadcast(x, y).shape)
        return _INV_2PI * np.exp(-0.5 * (x * x + y * y))

    def section_integral(self, x, ylo, yhi, log_shift=0.0):
        """``exp(log_shift) * integral of the density over {x} x (ylo, yhi)``.

        ``ylo`` must be nonnegative.  Empty sections (``yhi <= ylo``) give 0.
        The shift lets gaussian masses far below the float range be
        integrated in scaled form.
        """
        x = np.asarray(x, dtype=float)
        ylo = np.asarray(ylo, dtype=float)
        yhi = np.asarray(yhi, dtype=float)
        empty = ~(yhi > ylo)
        if self.kind == "lebesgue":
            out = np.where(empty, 0.0, yhi - ylo)
            if np.any(log_shift):
                out = out * np.exp(log_shift)
            return out
        zl = ylo / _SQRT2
        zh = np.where(np.isfinite(yhi), yhi, 0.0) / _SQRT2
        base = log_shift - 0.5 * x * x
        # erfc(z) = erfcx(z) exp(-z^2), kept in scaled form to avoid underflow
        lo_term = special.erfcx(zl) * np.exp(base - zl * zl)
        hi_term = np.where(np.isfinite(yhi), special.erfcx(zh) * np.exp(base - zh * zh), 0.0)
        out = _INV_2PI * _SQRT_HALF_PI * (lo_term - hi_term)
        return np.where(empty, 0.0, np.maximum(out, 0.0))

    def x_support(self, log_shift=0.0) -> float:
        """Half-width beyond which the density is below the float range (inf if none)."""
        if self.kind == "lebesgue":
            return math.inf
        return math.sqrt(2.0 * (750.0 + max(log_shift, 0.0)))


@dataclass(frozen=True)
class MeasureSpec:
    components: tuple

    def __post_init__(self):
        comps = tuple(tuple(c) for c in self.components)
        if not comps:
            raise ValueError("a measure needs at least one component")
        for region, density in comps:
            if not isinstance(region, Region) or not isinstance(density, Density):
                raise TypeError("components must be (Region, Density) pairs")
        object.__setattr__(self, "components", comps)

    def __add__(self, other: "MeasureSpec") -> "MeasureSpec":
        return MeasureSpec(self.components + other.components)

    def to_dict(self) -> dict:
        return {"components": [{"region": r.kind, "density": d.kind} for r, d in self.components]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "MeasureSpec":
        try:
            items = data["components"]
        except (KeyError, TypeError):
            raise ValueError("measure document must have a 'components' list") from None
        comps = []
        for item in items:
            if not isinstance(item, dict) or set(item) != {"region", "density"}:
                raise ValueError(f"bad component entry {item!r}")
            comps.append((Region(item["region"]), Density(item["density"])))
        return cls(tuple(comps))

    @classmethod
    def from_json(cls, text: str) -> "MeasureSpec":
        return cls.from_dict(json.loads(text))


def gaussian_part() -> MeasureSpec:
    """``m1``: the planar standard gaussian restricted to the half-plane (mass 1/2)."""
    return MeasureSpec(((Region("upper_half_plane"), Density("gaussian2d")),))


def hyperbola_part() -> MeasureSpec:
    """``m2``: Lebesgue measure on ``{x > 1, 0 < y < 1/x}``."""
    return MeasureSpec(((Region("hyperbola_tail"), Density("lebesgue")),))


def exp_tail_part() -> MeasureSpec:
    return MeasureSpec(((Region("exp_tail"), Density("lebesgue")),))


def paper_measure() -> MeasureSpec:
    return gaussian_part() + hyperbola_part()


def finite_variant_measure() -> MeasureSpec:
    return gaussian_part() + exp_tail_part()


NAMED_MEASURES = {
    "paper": paper_measure,
    "finite-variant": finite_variant_measure,
    "m1": gaussian_part,
    "m2": hyperbola_part,
}


def density_at(spec: MeasureSpec, q: Point) -> float:
    return float(density_array(spec, q.x, q.y))


def density_array(spec: MeasureSpec, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = np.zeros(np.broadcast(x, y).shape)
    for region, density in spec.components:
        total = total + np.where(region.contains(x, y), density(x, y), 0.0)
    return total


def strip_measure_m2(R: float) -> float:
    """Lebesgue measure of ``{R < x < R + 1, 0 < y < 1/x}``, i.e. ``log(1 + 1/R)``."""
    return Region("hyperbola_tail").strip_measure(R)


def ball_measure(spec: MeasureSpec, ball: Ball, tol: float = 1e-9, rtol: float = 1e-10):
    """Measure of a ball (euclidean, hyperbolic, or raw ``(a, b, r)`` disk) by quadrature.

    Component integrals are summed; the error bound is the sum of the
    component bounds.  Raises :class:`~hypmax.integrate.QuadratureError`
    carrying the best estimate when a component does not converge.
    """
    from .integrate import MeasureEstimate, QuadratureError, disk_params, integrate_disk_region

    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    disk = disk_params(ball)
    share = tol / len(spec.components)
    value = err = 0.0
    effort = 0
    failed = None
    for region, density in spec.components:
        try:
            est = integrate_disk_region(density, region, disk, share, rtol=rtol)
        except QuadratureError as exc:
            est = exc.estimate
            failed = exc
        value += est.value
        err += est.err
        effort += est.effort
    total = MeasureEstimate(value, err, "quadrature", effort)
    if failed is not None:
        raise QuadratureError(f"quadrature did not converge: {failed}", total)
    return total


def ball_measure_batch(spec: MeasureSpec, a, b, r, tol: float = 1e-9, rtol: float = 1e-10):
    """Vectorized :func:`ball_measure` over euclidean disks ``B_e((a, b), r)``.

    Returns ``(value, err, effort, converged)`` arrays; non-convergence is
    flagged per disk instead of raised.
    """
    from .integrate import integrate_disks

    a, b, r = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (a, b, r))
    value = np.zeros(a.shape)
    err = np.zeros(a.shape)
    effort = np.zeros(a.shape, dtype=np.int64)
    ok = np.ones(a.shape, dtype=bool)
    share = tol / len(spec.components)
    for region, density in spec.components:
        res = integrate_disks(density, region, a, b, r, tol=share, rtol=rtol)
        value += res.value
        err += res.err
        effort += res.effort
        ok &= res.converged
    return value, err, effort, ok


def spec_from_name_or_path(source: str) -> MeasureSpec:
    if source in NAMED_MEASURES:
        return NAMED_MEASURES[source]()
    with open(source) as fh:
        return MeasureSpec.from_json(fh.read())


def log_ball_measure_batch(spec: MeasureSpec, a, b, r, tol: float = 1e-300, rtol: float = 1e-12):
    """``log mu(B_e((a, b), r))`` for measures far below the float range.

    Gaussian components are integrated in scaled form and combined with the
    others in log space.  ``tol`` applies to each (scaled) component.
    Returns ``(log_value, rel_err, converged)`` arrays; ``log_value`` is
    ``-inf`` for disks of measure zero.
    """
    from .integrate import integrate_disks

    a, b, r = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (a, b, r))
    log_value = np.full(a.shape, -np.inf)
    log_err = np.full(a.shape, -np.inf)
    ok = np.ones(a.shape, dtype=bool)
    with np.errstate(divide="ignore"):
        for region, density in spec.components:
            res = integrate_disks(density, region, a, b, r, tol=tol, rtol=rtol, scaled=True)
            log_value = np.logaddexp(log_value, np.log(res.value) - res.log_shift)
            log_err = np.logaddexp(log_err, np.log(res.err) - res.log_shift)
            ok &= res.converged
    rel = np.where(np.isfinite(log_value), np.exp(log_err - log_value), np.inf)
    return log_value, rel, ok
