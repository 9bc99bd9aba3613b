#!/usr/bin/env python3
"""Three unit disks on an equilateral triangle, slightly too far apart.

With centers a distance 1.9 apart, any two disks overlap in a lens but
the three share nothing: a 2-critical family in the plane.  The hollow
simplex has a closed form here, so every number the solver produces can
be checked by hand:

  the far lens corner sits at height sqrt(1 - (s/2)^2) above the
  opposite side's midpoint, and the gap is the distance from that corner
  to the far center minus the radius.
"""
import numpy as np

from hollowkit import (check_critical, hollow_simplex, random_cage,
                       cage_contains_hull_vertices, render_svg,
                       sandwich_check, uniqueness_probe)
from hollowkit.bodies import Ball

SIDE = 1.9

centers = np.array([
    [0.0, 0.0],
    [SIDE, 0.0],
    [SIDE / 2.0, SIDE * np.sqrt(3.0) / 2.0],
])
disks = [Ball(c, 1.0) for c in centers]

family = check_critical(disks)
print("criticality:", type(family).__name__,
      " margin:", family.certificate.distance)

hs = hollow_simplex(family)
print("hollow vertices:")
print(hs.vertices)
print("gaps:", hs.gaps)

# Closed form: vertex j is the lens corner of disks i, k nearest disk j.
half = SIDE / 2.0
lens_height = np.sqrt(1.0 - half * half)
corner_gap = np.sqrt(half * half * 3.0) - lens_height - 1.0
print("closed-form gap:", corner_gap,
      " max error:", np.abs(hs.gaps - corner_gap).max())
p2 = np.array([half, lens_height])  # corner of the bottom lens
print("bottom vertex error:", np.linalg.norm(hs.vertices[2] - p2))

# Each vertex must sit inside every body except its own (sandwich) and
# the solve must land on the same simplex from any starting point.
print("sandwich margin:", sandwich_check(family))
rep = uniqueness_probe(family, restarts=10)
print("uniqueness over", rep.restarts, "restarts: ok =", rep.ok,
      " max spread:", rep.deviations.max())

# Cages: any choice of base points, one per leave-one-out lens, spans a
# hull that contains the hollow.
rng = np.random.default_rng(7)
for trial in range(3):
    cage = random_cage(family, rng=rng)
    assert cage_contains_hull_vertices(family, cage, hs=hs)
print("3 random cages all contain the hollow vertices")

with open("three_disks.svg", "w") as fh:
    fh.write(render_svg(disks, witnesses=family.witnesses, hollow=hs))
print("wrote three_disks.svg")
