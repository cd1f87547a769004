"""
A finite measure with the same defect
=====================================

Replacing the hyperbola by ``y = e^{-x}`` makes the measure finite, and the
same strip argument still works: the witness disks are now exponentially
light, so the weak-type ratio grows exponentially in ``R``.
"""

from hypmax import WeakTypeParams, finite_variant_measure, weak_type_probe
from hypmax.integrate import integrate_rect_region
from hypmax.measures import Density, Region

mass = integrate_rect_region(Density("lebesgue"), Region("exp_tail"), 0.0, 60.0, 0.0, 1.0, tol=1e-13)
print(f"mass of the tail region: {mass.value:.15f}")

mu = finite_variant_measure()
for R in (3.0, 4.0, 8.0, 12.0):
    rep = weak_type_probe(mu, WeakTypeParams(R, samples=200))
    print(f"R = {R:4g}: level {rep.level:.4g}, strip {rep.strip_measure:.4g}, "
          f"weak bound {rep.weak_constant_lower_bound:.4g}, passed {rep.passed}")
