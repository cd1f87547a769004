"""Integration of densities over disk ∩ region, with a Monte Carlo oracle.

Disks are parametrized by ``x = a + r sin(t)``, ``t in (-pi/2, pi/2)``.  The
vertical section of the disk at ``x`` is ``b ± r cos(t)``; intersected with
the region's section ``(0, g(x))`` it is integrated in closed form by the
density.  What is left is a 1-D integral in ``t`` whose integrand is smooth
between the points where the circle meets ``y = g(x)``, the region's left
edge, and the density's numerical support.  Those points become panel
breaks, and panels are refined by bisection until the difference between
one-panel and two-half-panel Gauss-Legendre values meets the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from .geometry import Ball, EuclideanBall, as_euclidean
from .measures import Density, MeasureSpec, Region, density_array

GL_ORDER = 10
MAX_LEVEL = 48
MAX_PANELS = 20_000

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


@dataclass(frozen=True)
class MeasureEstimate:
    """Value with an estimated absolute error.

    When ``log_shift`` is nonzero, ``value`` and ``err`` are scaled by
    ``exp(log_shift)``; :attr:`log_value` gives the log of the true value.
    """

    value: float
    err: float
    method: str
    effort: int = 0
    log_shift: float = 0.0

    def __post_init__(self):
        if self.err < 0:
            raise ValueError("error estimate must be nonnegative")
        if self.method not in ("quadrature", "monte_carlo", "analytic"):
            raise ValueError(f"unknown estimation method {self.method!r}")

    @property
    def log_value(self) -> float:
        return math.log(self.value) - self.log_shift if self.value > 0 else -math.inf

    @property
    def rel_err(self) -> float:
        return self.err / self.value if self.value > 0 else math.inf

    def to_dict(self) -> dict:
        return {"value": self.value, "err": self.err, "method": self.method,
                "effort": int(self.effort), "log_shift": self.log_shift}


class QuadratureError(RuntimeError):
    """Adaptive integration ran out of budget; ``estimate`` holds the best value."""

    def __init__(self, message, estimate: MeasureEstimate):
        super().__init__(message)
        self.estimate = estimate


class BatchResult(NamedTuple):
    value: np.ndarray
    err: np.ndarray
    effort: np.ndarray
    converged: np.ndarray
    log_shift: np.ndarray


def _gl(f, lo, hi, item):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(t, np.broadcast_to(item[:, None], t.shape))
    return half * (vals @ _GL_WEIGHTS)


def adaptive_panels(f, lo, hi, item, n_items, tol, rtol, max_level=MAX_LEVEL,
                    max_panels=MAX_PANELS):
    """Globally error-controlled bisection over a batch of panels.

    ``f(t, item)`` evaluates the integrand of integral ``item`` at nodes ``t``.
    A panel's value is the sum of Gauss-Legendre rules on its two halves and
    its error is the gap to the one-panel rule.  An integral is finished once
    its summed error is below ``max(tol, rtol * |value|)``; until then every
    panel whose error exceeds the mean share of that target is bisected.

    Returns ``(value, err, effort, converged)`` arrays of length ``n_items``.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    item = np.asarray(item, dtype=np.int64)
    tol = np.broadcast_to(np.asarray(tol, dtype=float), (n_items,))
    value = np.zeros(n_items)
    err = np.zeros(n_items)
    effort = np.zeros(n_items, dtype=np.int64)
    converged = np.ones(n_items, dtype=bool)
    level = np.zeros(lo.shape, dtype=np.int64)
    fine = np.zeros(lo.shape)
    gap = np.zeros(lo.shape)
    fresh = np.ones(lo.shape, dtype=bool)
    while lo.size:
        if fresh.any():
            flo, fhi, fit = lo[fresh], hi[fresh], item[fresh]
            fmid = 0.5 * (flo + fhi)
            coarse = _gl(f, flo, fhi, fit)
            fval = _gl(f, flo, fmid, fit) + _gl(f, fmid, fhi, fit)
            fine[fresh] = fval
            gap[fresh] = np.abs(fval - coarse)
            effort += np.bincount(fit, minlength=n_items) * 3 * GL_ORDER
        total = np.bincount(item, weights=fine, minlength=n_items)
        total_err = np.bincount(item, weights=gap, minlength=n_items)
        count = np.bincount(item, minlength=n_items)
        target = np.maximum(tol, rtol * np.abs(total))
        finished = (total_err <= target)[item]
        split = ~finished & (gap > (target / np.maximum(count, 1))[item])
        stuck = split & (level >= max_level)
        if stuck.any():
            converged[np.unique(item[stuck])] = False
            split &= ~stuck
            finished |= np.isin(item, item[stuck])
        over = count > max_panels
        if over.any():
            converged[over] = False
            finished |= over[item]
            split &= ~over[item]
        # retire whole integrals that are done
        out = finished | (~split & np.isin(item, item[finished]))
        if out.any():
            value += np.bincount(item[out], weights=fine[out], minlength=n_items)
            err += np.bincount(item[out], weights=gap[out], minlength=n_items)
        keep = ~out & ~split
        mid = 0.5 * (lo[split] + hi[split])
        lo = np.concatenate([lo[keep], lo[split], mid])
        hi = np.concatenate([hi[keep], mid, hi[split]])
        item = np.concatenate([item[keep], item[split], item[split]])
        level = np.concatenate([level[keep], level[split] + 1, level[split] + 1])
        fine = np.concatenate([fine[keep], np.zeros(2 * mid.size)])
        gap = np.concatenate([gap[keep], np.zeros(2 * mid.size)])
        fresh = np.concatenate([np.zeros(keep.sum(), dtype=bool), np.ones(2 * mid.size, dtype=bool)])
    return value, err, effort, converged


def disk_params(disk):
    """``(a, b, r)`` of a ball, or of a raw disk triple with ``b > 0``.

    Raw triples describe disks such as ``B_e((R, 1), 1)`` that touch or
    cross the x-axis and so are not hyperbolic balls.
    """
    if isinstance(disk, (EuclideanBall,)) or hasattr(disk, "center"):
        e = as_euclidean(disk)
        return e.center.x, e.center.y, e.radius
    a, b, r = (float(v) for v in disk)
    if not (r > 0 and b > 0):
        raise ValueError(f"bad disk {disk!r}")
    return a, b, r


def _panels_from_breaks(n_items, t_lo, t_hi, brk_item, brk_t):
    nonempty = t_hi > t_lo
    ids = np.nonzero(nonempty)[0]
    inside = (brk_t > t_lo[brk_item]) & (brk_t < t_hi[brk_item]) & nonempty[brk_item]
    items = np.concatenate([ids, ids, brk_item[inside]])
    ts = np.concatenate([t_lo[ids], t_hi[ids], brk_t[inside]])
    order = np.lexsort((ts, items))
    items, ts = items[order], ts[order]
    same = items[:-1] == items[1:]
    p_item, p_lo, p_hi = items[:-1][same], ts[:-1][same], ts[1:][same]
    keep = p_hi > p_lo
    return p_lo[keep], p_hi[keep], p_item[keep]


def _gaussian_shift(a, b, r):
    # smallest value of (x^2 + y^2)/2 over the disk
    gap = np.maximum(np.hypot(a, b) - r, 0.0)
    return 0.5 * gap * gap


def integrate_disks(density: Density, region: Region, a, b, r, tol=1e-9, rtol=1e-10,
                    scaled=False) -> BatchResult:
    """Integrate ``density`` over ``B_e((a, b), r) ∩ region`` for arrays of disks.

    Disks need not lie inside the half-plane (``r >= b`` is allowed); only
    the part with ``y > 0`` counts.

    With ``scaled=True`` gaussian integrals are returned multiplied by
    ``exp(log_shift)`` where ``log_shift`` is the minimum of ``|w|^2 / 2``
    over the disk, so masses far below the float range stay representable;
    ``tol`` then applies to the scaled values.
    """
    a, b, r = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (a, b, r))
    n = a.size
    if not (np.all(r > 0) and np.all(b > 0)):
        raise ValueError("disks need r > 0 and a center above the x-axis")
    if scaled and density.kind == "gaussian2d":
        shift = _gaussian_shift(a, b, r)
    else:
        shift = np.zeros(n)

    x_lo = np.full(n, region.x_min)
    x_hi = np.full(n, np.inf)
    if density.kind == "gaussian2d":
        support = np.sqrt(2.0 * (750.0 + shift))
        x_lo = np.maximum(x_lo, -support)
        x_hi = np.minimum(x_hi, support)
    t_lo = np.arcsin(np.clip((x_lo - a) / r, -1.0, 1.0))
    t_hi = np.arcsin(np.clip((x_hi - a) / r, -1.0, 1.0))

    brk_item, brk_x = region.arc_crossings(a, b, r)
    brk_t = np.arcsin(np.clip((brk_x - a[brk_item]) / r[brk_item], -1.0, 1.0))
    # disks reaching below the x-axis: lower arc crosses y = 0
    low = np.nonzero(r > b)[0]
    cut = np.arccos(b[low] / r[low])
    brk_item = np.concatenate([brk_item, low, low])
    brk_t = np.concatenate([brk_t, cut, -cut])
    lo, hi, item = _panels_from_breaks(n, t_lo, t_hi, brk_item, brk_t)

    def integrand(t, k):
        ak, bk, rk = a[k], b[k], r[k]
        x = ak + rk * np.sin(t)
        half = rk * np.cos(t)
        ylo = np.maximum(bk - half, 0.0)
        yhi = np.minimum(bk + half, region.section_top(x))
        return density.section_integral(x, ylo, yhi, shift[k]) * half

    value, err, effort, ok = adaptive_panels(integrand, lo, hi, item, n, tol, rtol)
    return BatchResult(value, err, effort, ok, shift)


def integrate_disk_region(density: Density, region: Region, disk,
                          tol: float = 1e-9, rtol: float = 1e-10, scaled=False) -> MeasureEstimate:
    """Integral of ``density`` over ``disk ∩ region``.

    ``disk`` is a ball or a raw ``(a, b, r)`` triple (see :func:`disk_params`).

    Raises :class:`QuadratureError` (with the best estimate attached) when
    the subdivision budget runs out.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    a, b, r = disk_params(disk)
    res = integrate_disks(density, region, a, b, r, tol=tol, rtol=rtol, scaled=scaled)
    est = MeasureEstimate(float(res.value[0]), float(res.err[0]), "quadrature",
                          int(res.effort[0]), float(res.log_shift[0]))
    if not res.converged[0]:
        raise QuadratureError(f"no convergence for {disk} (err {est.err:.3g})", est)
    return est


def integrate_rect_region(density: Density, region: Region, x0, x1, y0, y1,
                          tol=1e-9, rtol=1e-10) -> MeasureEstimate:
    """Integral of ``density`` over ``(x0, x1) x (y0, y1) ∩ region``; y0 >= 0."""
    if not (x1 > x0 and y1 > y0 >= 0):
        raise ValueError("need x0 < x1 and 0 <= y0 < y1")
    lo = max(x0, region.x_min)
    hi = x1
    if density.kind == "gaussian2d":
        lo, hi = max(lo, -density.x_support()), min(hi, density.x_support())
    if not hi > lo:
        return MeasureEstimate(0.0, 0.0, "quadrature", 0)
    brk = [lo, hi]
    for y in (y0, y1):
        if y > 0 and region.kind == "hyperbola_tail":
            brk.append(1.0 / y)
        elif y > 0 and region.kind == "exp_tail":
            brk.append(-math.log(y))
    brk = np.unique([v for v in brk if lo <= v <= hi])

    def integrand(x, k):
        top = np.minimum(y1, region.section_top(x))
        return density.section_integral(x, np.full(x.shape, float(y0)), top)

    value, err, effort, ok = adaptive_panels(
        integrand, brk[:-1], brk[1:], np.zeros(brk.size - 1, dtype=np.int64), 1, tol, rtol)
    est = MeasureEstimate(float(value[0]), float(err[0]), "quadrature", int(effort[0]))
    if not ok[0]:
        raise QuadratureError("rectangle quadrature did not converge", est)
    return est


def mc_ball_measure(spec: MeasureSpec, ball: Ball, n: int, seed: int,
                    chunk: int = 1 << 18) -> MeasureEstimate:
    """Monte Carlo estimate of ``spec`` on a ball (or raw disk) from ``n`` uniform samples.

    Samples are drawn in chunks, each from its own stream spawned off
    ``seed``, so results depend only on ``(n, seed, chunk)``.
    """
    if n < 1000:
        raise ValueError(f"need at least 1000 samples, got {n}")
    a, b, r = disk_params(ball)
    n_chunks = -(-n // chunk)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    count = 0
    mean = 0.0
    m2 = 0.0
    for i, ss in enumerate(streams):
        m = min(chunk, n - i * chunk)
        rng = np.random.default_rng(ss)
        rho = r * np.sqrt(rng.random(m))
        phi = 2.0 * np.pi * rng.random(m)
        y = b + rho * np.sin(phi)
        vals = np.where(y > 0, density_array(spec, a + rho * np.cos(phi), np.maximum(y, 1e-300)), 0.0)
        # centered chunk sums merged pairwise (Chan et al.); the raw sum of
        # squares cancels when the density is nearly constant on the disk
        c_mean = vals.mean()
        c_m2 = float(np.sum((vals - c_mean) ** 2))
        delta = c_mean - mean
        total = count + m
        mean += delta * m / total
        m2 += c_m2 + delta * delta * count * m / total
        count = total
    area = math.pi * r * r
    var = m2 / (n - 1)
    return MeasureEstimate(area * mean, area * math.sqrt(var / n), "monte_carlo", n)


def gauss_tail_bound(t: float) -> float:
    """Closed-form majorant ``exp(-t^2/2) / t`` of the gaussian tail integral."""
    if not t > 1:
        raise ValueError(f"the tail majorant is used for t > 1, got t={t}")
    return math.exp(-0.5 * t * t) / t


def gauss_tail(t: float) -> float:
    """``integral_t^inf exp(-u^2/2) du``."""
    return math.sqrt(0.5 * math.pi) * float(special.erfc(t / math.sqrt(2.0)))


def log_gauss_tail(t: float) -> float:
    z = t / math.sqrt(2.0)
    return 0.5 * math.log(0.5 * math.pi) + math.log(float(special.erfcx(z))) - z * z


def log_gauss_tail_bound(t: float) -> float:
    if not t > 1:
        raise ValueError(f"the tail majorant is used for t > 1, got t={t}")
    return -0.5 * t * t - math.log(t)
