"""
Linear growth of ball measures
==============================

Although the maximal operator misbehaves, balls never carry much mass:
``mu(B_h(w, s)) <= c s``.  A grid scan estimates the best ``c``, and the
inequality suite checks every step of the case analysis behind it.
"""

from hypmax import GrowthScanParams, growth_scan, paper_measure, proof_step_suite

mu = paper_measure()

rep = growth_scan(mu, GrowthScanParams(x_count=20, y_count=20, s_count=20))
print(f"sup mu(B)/s = {rep.sup_ratio:.4f} at {rep.argsup}")
for axis, info in rep.refinement.items():
    print(f"  refining {axis}: sup {info['sup_ratio']:.4f} (change {info['relative_change']:.2%})")

suite = proof_step_suite(mu, R_values=(10.0, 100.0), sample_budget=500)
for check in suite.checks:
    status = "ok" if check.passed else "FAILED"
    print(f"{check.id:>6} {status:6} margin {check.margin:.3e} ({check.scale})  {check.title}")
print(f"bound on the reference disk holds from R0 = {suite.R0['R0']:.3g}")
