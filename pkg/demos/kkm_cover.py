"""Finite cover checks: points, image sets, and who covers which hull.

An instance assigns one closed convex image to each of finitely many
points.  The cover condition asks that the hull of every subset of the
points be covered by the union of that subset's images; when it holds, a
common point of all the images exists, and the verifier must produce
one.  When it fails, the verifier must exhibit an escaping hull point
instead.
"""
import numpy as np

from hollowkit import HPolytope, KkmInstance, family_kkm_instance, kkm_verify

# Three boxes tiling the square, with a witness point in each pairwise
# overlap; the induced instance satisfies the cover condition.
boxes = [
    HPolytope.box([0.0, 0.0], [3.0, 2.0]),
    HPolytope.box([1.0, 0.0], [3.0, 3.0]),
    HPolytope.box([0.0, 1.0], [2.0, 3.0]),
]
witnesses = np.array([[1.5, 2.5], [0.5, 1.5], [2.5, 0.5]])

instance = family_kkm_instance(boxes, witnesses)
report = kkm_verify(instance, samples=64)
print("cover holds:", report.kkm_holds,
      " subsets checked:", report.subsets_checked,
      " samples per subset:", report.samples_per_subset)
print("common point of all images:", report.witness)
print("  memberships:", [g.distance(report.witness) for g in instance.images])

# Now break the cover on purpose: two points on a line whose images
# leave the middle of the segment bare.
gap_instance = KkmInstance(
    points=np.array([[0.0], [1.0]]),
    images=(HPolytope.box([0.0], [0.4]), HPolytope.box([0.5], [1.0])),
)
refuted = kkm_verify(gap_instance, samples=64)
print("gap instance holds:", refuted.kkm_holds)
print("escaping hull point:", refuted.counterexample,
      " from subset:", refuted.subset)
# the counterexample sits in the bare zone (0.4, 0.5) of the full
# segment, outside both images
