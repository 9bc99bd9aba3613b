"""Smallest critical family: two disjoint intervals on the line.

Each interval alone is nonempty (drop the other and a point remains),
but the two share nothing, so the pair is 1-critical in R^1.  The
bounded piece of the complement is the open gap between them, and its
closure is the segment spanned by the two hollow vertices.
"""
import numpy as np

from hollowkit import (CriticalityFailure, HPolytope, check_critical,
                       hollow_simplex)

left = HPolytope.box([0.0], [1.0])
right = HPolytope.box([2.0], [3.0])

family = check_critical([left, right])
print("criticality:", type(family).__name__)
print("  n =", family.n, " d =", family.d)
print("  witnesses (one per left-out body):", family.witnesses.ravel())

# The emptiness certificate is a separating hyperplane with margin.
cert = family.certificate
print("  separator: normal", cert.hyperplane.normal,
      "offset", cert.hyperplane.offset)
print("  distance between the intervals:", cert.distance)

hs = hollow_simplex(family)
print("hollow vertices:", np.sort(hs.vertices.ravel()))
print("gaps:", hs.gaps)
# vertex j is the point of the other interval nearest to interval j, so
# the hollow is exactly the closed segment [1, 2] and both gaps equal 1

# Slide the intervals together and criticality is refused, not fudged.
overlap = check_critical([left, HPolytope.box([0.5], [1.5])])
assert isinstance(overlap, CriticalityFailure)
print("overlapping pair:", overlap.reason, "-", overlap.detail)
