"""Centered maximal function of Dirac atoms with respect to a measure on the half-plane.

For a point mass at ``q`` the ball average over ``B_h(w, s)`` is
``mass / mu(B_h(w, s))`` when ``d(w, q) < s`` and 0 otherwise.  Since
``s -> mu(B_h(w, s))`` is nondecreasing, the supremum over radii is reached
as ``s`` decreases to ``d(w, q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Point, hyp_distance, hyp_distance_array, hyp_to_euclid_array
from .measures import MeasureSpec, log_ball_measure_batch

# decreasing relative offsets above the atom distance: 1e-2 * 4**-k
EPS_SEQUENCE = tuple(1e-2 * 4.0 ** -k for k in range(7))


class ExtrapolationError(RuntimeError):
    def __init__(self, message, bracket):
        super().__init__(message)
        self.bracket = bracket


@dataclass(frozen=True)
class DiracAtom:
    location: Point
    mass: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError(f"atom mass must be positive and finite, got {self.mass}")


@dataclass(frozen=True)
class MaximalValue:
    """Maximal function value.

    ``log_value`` is the natural log of the value and stays finite when the
    value itself overflows (ball measures far below the float range).  Both
    are ``inf`` only at the atom itself.
    """

    value: float
    achieving_radius: float
    err: float
    log_value: float

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.log_value)

    def to_dict(self) -> dict:
        finite = math.isfinite(self.value)
        return {"value": self.value if finite else None, "infinite": self.is_infinite,
                "log_value": None if self.is_infinite else self.log_value,
                "achieving_radius": self.achieving_radius, "rel_err": self.err}

    @classmethod
    def from_log(cls, log_value, achieving_radius, err):
        value = math.exp(log_value) if log_value < 709.0 else math.inf
        return cls(value, float(achieving_radius), float(err), float(log_value))


AT_ATOM = MaximalValue(math.inf, 0.0, 0.0, math.inf)


def _log_measures(spec, w, radii, tol):
    a, b, r = hyp_to_euclid_array(np.full(len(radii), w.x), np.full(len(radii), w.y), radii)
    return log_ball_measure_batch(spec, a, b, r, tol=tol, rtol=1e-12)


def ball_average_dirac(spec: MeasureSpec, w: Point, s: float, atom: DiracAtom,
                       tol: float = 1e-9) -> float:
    """``mass / mu(B_h(w, s))`` if the ball contains the atom, else 0 (may overflow to inf)."""
    if not s > 0:
        raise ValueError(f"radius must be positive, got {s}")
    if not hyp_distance(w, atom.location) < s:
        return 0.0
    log_mu, _, _ = _log_measures(spec, w, np.array([float(s)]), tol)
    if not np.isfinite(log_mu[0]):
        raise ZeroDivisionError(f"ball B_h({w}, {s}) has zero measure")
    log_avg = math.log(atom.mass) - float(log_mu[0])
    return math.exp(log_avg) if log_avg < 709.0 else math.inf


def _richardson(values, ratio=4.0):
    # Neville table for h_k = h_0 / ratio**k, eliminating h, h^2, ...
    table = [list(values)]
    for j in range(1, len(values)):
        prev = table[-1]
        f = ratio ** j
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1.0) for i in range(len(prev) - 1)])
    return table


def maximal_dirac(spec: MeasureSpec, w: Point, atom: DiracAtom, tol: float = 1e-10,
                  eps_sequence: Sequence[float] = EPS_SEQUENCE, depth: int = 2) -> MaximalValue:
    """``M_mu(atom)(w) = mass / lim_{s -> d+} mu(B_h(w, s))`` with ``d = d(w, atom)``.

    The limit is extrapolated from ``log mu(B_h(w, d (1 + eps_k)))`` with a
    ``depth``-column Richardson table.  Far from the origin the Gaussian part
    of a ball changes by many orders of magnitude across the eps sequence,
    while its logarithm stays smooth, so working with logs keeps the table
    well conditioned and balls of measure far below the float range are fine.
    The error is the spread between the last two extrapolants plus the
    quadrature errors, both relative.
    """
    d = hyp_distance(w, atom.location)
    if d == 0.0:
        return AT_ATOM
    radii = d * (1.0 + np.asarray(eps_sequence, dtype=float))
    log_mu, rel, _ = _log_measures(spec, w, radii, tol)
    if not np.all(np.isfinite(log_mu)):
        raise ExtrapolationError(f"ball measures vanish near d={d}", (0.0, 0.0))
    table = _richardson(log_mu)
    col = table[min(depth, len(table) - 1)]
    if len(col) < 2:
        raise ValueError("eps sequence too short for the requested depth")
    limit, previous = col[-1], col[-2]
    spread = abs(limit - previous) + float(np.max(rel))
    if not spread < 0.5:
        raise ExtrapolationError(f"extrapolation did not settle at d={d}",
                                 (float(np.exp(log_mu.min())), float(np.exp(log_mu.max()))))
    # the limit cannot exceed the smallest sampled ball, by monotonicity
    limit = min(limit, float(log_mu[-1]))
    return MaximalValue.from_log(math.log(atom.mass) - limit, d, math.expm1(spread))


def maximal_atoms(spec: MeasureSpec, w: Point, atoms: Sequence[DiracAtom],
                  radius_grid=None, refine: int = 2, refine_points: int = 9,
                  tol: float = 1e-9) -> MaximalValue:
    """Grid lower bound for the maximal function of a finite sum of atoms.

    The sup of ball averages over ``radius_grid`` (log-spaced by default,
    200 radii in ``[1e-3, 1e2]``) is refined ``refine`` times on a log grid
    between the neighbours of the best radius.  ``err`` is the relative
    quadrature error at the best radius.
    """
    if not atoms:
        raise ValueError("need at least one atom")
    if radius_grid is None:
        radius_grid = np.geomspace(1e-3, 1e2, 200)
    grid = np.sort(np.asarray(radius_grid, dtype=float))
    if grid.size == 0 or np.any(grid <= 0):
        raise ValueError("radius grid must be nonempty and positive")
    ax = np.array([a.location.x for a in atoms])
    ay = np.array([a.location.y for a in atoms])
    masses = np.array([a.mass for a in atoms])
    dist = hyp_distance_array(w.x, w.y, ax, ay)
    if np.any(dist == 0):
        return AT_ATOM

    def log_averages(radii):
        inside = (dist[None, :] < radii[:, None]) @ masses
        out = np.full(radii.size, -np.inf)
        err = np.zeros(radii.size)
        live = inside > 0
        if live.any():
            log_mu, rel, _ = _log_measures(spec, w, radii[live], tol)
            out[live] = np.log(inside[live]) - log_mu
            err[live] = rel
        return out, err

    vals, errs = log_averages(grid)
    best = int(np.argmax(vals))
    best_val, best_s, best_err = vals[best], grid[best], errs[best]
    for _ in range(refine):
        lo = grid[max(best - 1, 0)]
        hi = grid[min(best + 1, grid.size - 1)]
        if not hi > lo:
            break
        grid = np.geomspace(lo, hi, refine_points)
        vals, errs = log_averages(grid)
        best = int(np.argmax(vals))
        if vals[best] > best_val:
            best_val, best_s, best_err = vals[best], grid[best], errs[best]
    if not np.isfinite(best_val):
        return MaximalValue(0.0, float(best_s), 0.0, -math.inf)
    return MaximalValue.from_log(float(best_val), best_s, best_err)
