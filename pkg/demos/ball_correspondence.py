"""
Euclidean and hyperbolic descriptions of one ball
=================================================

In the upper half-plane every hyperbolic ball is an ordinary euclidean disk.
The disk keeps its horizontal position but the hyperbolic center sits lower
than the euclidean one, at the geometric mean of the disk's top and bottom.
"""

import math

from hypmax import EuclideanBall, Point, euclid_to_hyp, hyp_distance, hyp_to_euclid

# A disk of radius 3/4 centered at height 5/4 touches y = 1/2 and y = 2.
disk = EuclideanBall(Point(0.0, 1.25), 0.75)
ball = euclid_to_hyp(disk)
print(f"hyperbolic center ({ball.center.x}, {ball.center.y:.15f}), radius {ball.radius:.15f}")
print(f"log 2 = {math.log(2):.15f}")

# Every point of the euclidean circle is at hyperbolic distance s from the
# hyperbolic center.
for angle in (0.0, 1.0, 2.5, 4.0):
    q = Point(0.75 * math.cos(angle), 1.25 + 0.75 * math.sin(angle))
    print(f"angle {angle:.1f}: d = {hyp_distance(ball.center, q):.15f}")

# Going back recovers the disk.
back = hyp_to_euclid(ball)
print(f"round trip: center height {back.center.y!r}, radius {back.radius!r}")

# The same hyperbolic radius looks very different depending on height: a
# ball of radius 1 centered at y = 0.01 is a tiny disk, one at y = 100 is huge.
for y in (0.01, 1.0, 100.0):
    e = hyp_to_euclid(ball.__class__(Point(0.0, y), 1.0))
    print(f"s = 1 at height {y:>6}: euclidean radius {e.radius:.4g}")
