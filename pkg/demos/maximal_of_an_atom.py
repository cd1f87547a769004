"""
The maximal function of a point mass
====================================

For a unit atom at ``q`` the average over ``B_h(w, s)`` is ``1 / mu(B_h(w, s))``
as soon as the ball contains ``q``.  Ball measures grow with ``s``, so the
supremum is the limit as ``s`` shrinks to ``d(w, q)``.
"""

from hypmax import DiracAtom, Point, maximal_atoms, maximal_dirac, paper_measure

mu = paper_measure()
R = 100.0
atom = DiracAtom(Point(R + 0.5, 1.0))

# A point of the thin strip {R < x < R+1, 0 < y < 1/x} sees a huge average.
w = Point(100.5, 1 / 101)
m = maximal_dirac(mu, w, atom)
print(f"M(delta)({w.x}, {w.y:.5f}) = {m.value:.2f} at radius {m.achieving_radius:.4f}")
print(f"level (R-1)^1.5/3 = {(R - 1) ** 1.5 / 3:.2f}")

# Along y = 1 the balls reaching the atom only meet the far Gaussian tail until
# they are big enough to dip into the strip, so M is astronomically large
# before it drops.  The log is reported because the value overflows a float.
for x in (100.0, 99.0, 95.0, 80.0):
    m = maximal_dirac(mu, Point(x, 1.0), atom)
    print(f"w = ({x}, 1): log M = {m.log_value:.2f}")

# At the atom itself every ball average blows up.
print(f"at the atom: {maximal_dirac(mu, atom.location, atom).value}")

# Several atoms: the radius grid gives a lower bound.
atoms = [DiracAtom(Point(0.4, 1.0)), DiracAtom(Point(-0.4, 1.0), 2.0)]
lb = maximal_atoms(mu, Point(0.0, 1.0), atoms)
print(f"two atoms: M >= {lb.value:.6f} (best radius {lb.achieving_radius:.4f})")
