"""Upper half-plane model of the hyperbolic plane.

Hyperbolic balls in the half-plane are ordinary euclidean disks with a
shifted center and a different radius.  A disk with euclidean center
``(a, b)`` and radius ``r < b`` has hyperbolic center ``(a, sqrt(b^2 - r^2))``
and hyperbolic radius ``0.5 * log((b + r) / (b - r))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

# disks with r/b above this are rejected (s would be distorted by rounding)
MAX_RADIUS_RATIO = 1.0 - 1e-12


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")
        if not self.y > 0:
            raise ValueError(f"point must lie in the upper half-plane, got y={self.y}")


@dataclass(frozen=True)
class EuclideanBall:
    """Open euclidean disk lying strictly inside the upper half-plane."""

    center: Point
    radius: float

    def __post_init__(self):
        r, b = self.radius, self.center.y
        if not r > 0:
            raise ValueError(f"radius must be positive, got {r}")
        if not r < b:
            raise ValueError(f"disk of radius {r} centered at height {b} leaves the half-plane")
        if r / b > MAX_RADIUS_RATIO:
            raise ValueError(f"r/b = {r / b!r} is too close to 1")


@dataclass(frozen=True)
class HyperbolicBall:
    center: Point
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"hyperbolic radius must be positive and finite, got {self.radius}")


Ball = Union[EuclideanBall, HyperbolicBall]


def hyp_distance(p: Point, q: Point) -> float:
    """Hyperbolic distance between two points of the half-plane.

    Uses ``2 * asinh(|p - q| / (2 sqrt(p.y q.y)))``, which equals
    ``arccosh(1 + |p - q|^2 / (2 p.y q.y))`` but keeps full relative
    accuracy when the points nearly coincide.
    """
    chord = math.hypot(p.x - q.x, p.y - q.y)
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(p.y * q.y)))


def hyp_distance_array(x1, y1, x2, y2):
    """Vectorized :func:`hyp_distance` over coordinate arrays."""
    chord = np.hypot(np.subtract(x1, x2), np.subtract(y1, y2))
    return 2.0 * np.arcsinh(chord / (2.0 * np.sqrt(np.multiply(y1, y2))))


def euclid_to_hyp(ball: EuclideanBall) -> HyperbolicBall:
    a, b = ball.center.x, ball.center.y
    r = ball.radius
    # (b - r)(b + r) avoids cancellation in b^2 - r^2
    height = math.sqrt((b - r) * (b + r))
    s = 0.5 * math.log1p(2.0 * r / (b - r))
    return HyperbolicBall(Point(a, height), s)


def hyp_to_euclid(ball: HyperbolicBall) -> EuclideanBall:
    p, s = ball.center, ball.radius
    return EuclideanBall(Point(p.x, p.y * math.cosh(s)), p.y * math.sinh(s))


def hyp_to_euclid_array(x, y, s):
    """Euclidean ``(a, b, r)`` arrays for hyperbolic balls ``B_h((x, y), s)``."""
    y = np.asarray(y, dtype=float)
    return np.asarray(x, dtype=float), y * np.cosh(s), y * np.sinh(s)


def as_euclidean(ball: Ball) -> EuclideanBall:
    if isinstance(ball, EuclideanBall):
        return ball
    if isinstance(ball, HyperbolicBall):
        return hyp_to_euclid(ball)
    raise TypeError(f"expected a ball, got {type(ball).__name__}")


def ball_contains(ball: Ball, q: Point) -> bool:
    """Membership in the open ball; boundary points are outside."""
    e = as_euclidean(ball)
    dx = q.x - e.center.x
    dy = q.y - e.center.y
    return dx * dx + dy * dy < e.radius * e.radius
