"""
Why the maximal operator is not of weak type (1,1)
==================================================

Put a unit atom at ``(R + 1/2, 1)``.  Each point ``(x, y)`` of the strip
``S_R = {R < x < R+1, 0 < y < 1/x}`` is the hyperbolic center of the disk
``B_e((x, 1), sqrt(1 - y^2))``, which contains the atom and has measure below
``3 / (R-1)^{3/2}``.  So ``M(delta) > (R-1)^{3/2} / 3`` on the whole strip,
whose measure exceeds ``1/(2R)``.  The product grows like ``sqrt(R)``.
"""

from hypmax import WeakTypeParams, paper_measure, weak_type_probe

mu = paper_measure()
print(f"{'R':>6} {'level':>10} {'min M':>10} {'violations':>10} {'weak bound':>10}")
for R in (10.0, 50.0, 100.0, 200.0, 1000.0):
    rep = weak_type_probe(mu, WeakTypeParams(R, samples=300, seed=1))
    print(f"{R:6g} {rep.level:10.2f} {rep.min_maximal_over_samples:10.2f} "
          f"{len(rep.violations):10d} {rep.weak_constant_lower_bound:10.4f}")

# Each witness disk is also compared with B_e((R, 1), 1); the inclusion used
# to bound them is not literal near x = R + 1, so the comparison is counted.
rep = weak_type_probe(mu, WeakTypeParams(100.0, samples=500, seed=2))
print(f"witness disks heavier than B_e((R,1),1): {rep.reference_comparison_failures}")
