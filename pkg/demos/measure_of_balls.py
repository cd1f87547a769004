"""
Measuring balls
===============

The measure is a gaussian restricted to the half-plane plus Lebesgue measure
on the region under the hyperbola ``y = 1/x`` for ``x > 1``.  Ball measures
are computed by adaptive quadrature; a Monte Carlo estimate serves as an
independent check.
"""

from hypmax import EuclideanBall, Point, ball_measure, density_at, mc_ball_measure, paper_measure
from hypmax.measures import gaussian_part, hyperbola_part

mu = paper_measure()

# Pointwise density: near the origin only the gaussian contributes, under the
# hyperbola Lebesgue measure adds 1.
for q in (Point(0, 1), Point(2, 0.25), Point(2, 0.75)):
    print(f"density at ({q.x}, {q.y}): {density_at(mu, q):.6f}")

# The reference disk B_e((10, 1), 1) touches the x-axis.  It is passed as a raw
# (a, b, r) triple because it is not a hyperbolic ball.
disk = (10.0, 1.0, 1.0)
quad = ball_measure(mu, disk)
mc = mc_ball_measure(mu, disk, n=10**6, seed=42)
print(f"quadrature  {quad.value:.12f} ± {quad.err:.1e}")
print(f"monte carlo {mc.value:.12f} ± {mc.err:.1e}")
print(f"bound 3/(R-1)^1.5 = {3 / 9**1.5:.6f}")

# The two parts separately: the gaussian piece is about 1e-20.
print(f"m1 = {ball_measure(gaussian_part(), disk, tol=1e-30).value:.4e}")
print(f"m2 = {ball_measure(hyperbola_part(), disk).value:.12f}")

# Measures grow with the radius.
for r in (0.5, 1.0, 1.5, 1.9):
    print(f"mu(B_e((1.5, 2), {r})) = {ball_measure(mu, EuclideanBall(Point(1.5, 2.0), r)).value:.6f}")
