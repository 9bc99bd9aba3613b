"""Criticality certification, hollow simplices, and cages."""
import dataclasses

import numpy as np
import pytest

from conftest import DISK_SIDE_CRITICAL, TRIANGLE, disk_centers
from hollowkit import (Ball, BorderlineCriticalError, Cage, CriticalFamily,
                       CriticalityFailure, HPolytope, NoHollowError, VPolytope,
                       cage_contains_hull_vertices, cage_intersection_is_cage,
                       check_critical, helly_guard, hollow_simplex, make_cage,
                       random_cage, recentered_witness, sandwich_check,
                       uniqueness_probe, witness_simplex)

# inner corner height of two unit circles at distance 1.9, and its distance
# to the far vertex of the equilateral triangle of centers
LENS_HALF_HEIGHT = np.sqrt(0.0975)
CORNER_TO_FAR_CENTER = 0.95 * np.sqrt(3.0) - LENS_HALF_HEIGHT
DISK_GAP = CORNER_TO_FAR_CENTER - 1.0
SEGMENT_GAPS = np.array([3.0, 12.0 / np.sqrt(13.0), 12.0 / np.sqrt(13.0)])


def test_pair_family_shape(pair_family):
    assert pair_family.n == 1
    assert pair_family.d == 1
    assert pair_family.certificate.distance == pytest.approx(1.0, abs=1e-8)


def test_pair_hollow_is_middle_gap(pair_family):
    hs = hollow_simplex(pair_family)
    assert np.allclose(hs.vertices, [[2.0], [1.0]], atol=1e-9)
    assert np.allclose(hs.gaps, [1.0, 1.0], atol=1e-9)


def test_disks_family_gaps_match_closed_form(disks_hollow):
    assert np.allclose(disks_hollow.gaps, DISK_GAP, atol=1e-7)


def test_disks_hollow_vertices_are_lens_corners(disks_hollow):
    centers = disk_centers(DISK_SIDE_CRITICAL)
    # p_2 is the inner corner of the bottom lens
    assert np.allclose(disks_hollow.vertices[2],
                       [0.95, LENS_HALF_HEIGHT], atol=1e-6)
    for j in range(3):
        p = disks_hollow.vertices[j]
        for i in range(3):
            r = np.linalg.norm(p - centers[i])
            if i == j:
                assert r == pytest.approx(CORNER_TO_FAR_CENTER, abs=1e-6)
            else:
                assert r == pytest.approx(1.0, abs=1e-6)


def test_segment_triangle_hollow_is_the_triangle(segments_family):
    hs = hollow_simplex(segments_family)
    assert np.allclose(hs.vertices, [TRIANGLE[2], TRIANGLE[0], TRIANGLE[1]],
                       atol=1e-6)
    assert np.allclose(hs.gaps, SEGMENT_GAPS, atol=1e-7)


def test_witnesses_live_in_all_bodies_but_their_own(disks_family,
                                                    segments_family,
                                                    balls_family):
    for fam in (disks_family, segments_family, balls_family):
        for j in range(fam.n + 1):
            w = fam.witnesses[j]
            for i, b in enumerate(fam.bodies):
                if i != j:
                    assert b.membership(w, 1e-6)
            assert not fam.bodies[j].membership(w, 1e-3)


def test_recentered_witness_is_deterministic(three_disks):
    rest = three_disks[:2]
    w1 = recentered_witness(rest)
    w2 = recentered_witness(rest)
    assert np.array_equal(w1, w2)
    for b in rest:
        assert b.membership(w1, 1e-7)


def test_full_intersection_nonempty_failure(three_disks_overlapping):
    res = check_critical(three_disks_overlapping)
    assert isinstance(res, CriticalityFailure)
    assert res.reason == "full-intersection-nonempty"
    for b in three_disks_overlapping:
        assert b.membership(res.witness, 1e-6)


def test_leave_one_out_empty_failure():
    bodies = [
        HPolytope.box([0.0, 0.0], [1.0, 1.0]),
        HPolytope.box([2.0, 0.0], [3.0, 1.0]),
        HPolytope.box([5.0, 0.0], [6.0, 1.0]),
    ]
    res = check_critical(bodies)
    assert isinstance(res, CriticalityFailure)
    assert res.reason == "leave-one-out-empty"
    # leaving out body 0 leaves the two far boxes, which share nothing
    assert res.index == 0


def test_helly_guard_rejects_oversized_families():
    boxes = [HPolytope.box([float(i), 0.0], [i + 1.0, 1.0]) for i in range(4)]
    rej = helly_guard(boxes)
    assert rej is not None
    assert rej.n == 3 and rej.d == 2
    assert "R^2" in rej.message
    res = check_critical(boxes)
    assert isinstance(res, CriticalityFailure)
    assert res.reason == "helly"
    assert helly_guard(boxes[:3]) is None


def test_borderline_margin_failure():
    bodies = [HPolytope.box([0.0], [1.0]), HPolytope.box([1.0 + 5e-7], [2.0])]
    res = check_critical(bodies, tol=1e-7)
    assert isinstance(res, CriticalityFailure)
    assert res.reason == "borderline"


def test_no_hollow_below_ambient_dimension():
    bodies = [
        HPolytope.box([0.0, 0.0], [1.0, 1.0]),
        HPolytope.box([2.0, 0.0], [3.0, 1.0]),
    ]
    fam = check_critical(bodies)
    assert isinstance(fam, CriticalFamily)
    with pytest.raises(NoHollowError):
        hollow_simplex(fam)


def test_borderline_hollow_gaps_error(disks_family):
    # inflating the working tolerance pushes the certification floor above
    # the actual gaps, which must be refused rather than returned
    loose = dataclasses.replace(disks_family, tol=0.05)
    with pytest.raises(BorderlineCriticalError):
        hollow_simplex(loose)


def test_sandwich_check_nonnegative(disks_family, segments_family):
    assert sandwich_check(disks_family) >= -1e-6
    assert sandwich_check(segments_family) >= -1e-6


def test_witness_simplex_has_positive_volume(disks_family):
    S = witness_simplex(disks_family)
    assert S.volume > 1e-3


def test_hollow_vertices_permute_with_the_bodies(three_disks, disks_hollow):
    perm = [2, 0, 1]
    fam = check_critical([three_disks[i] for i in perm])
    assert isinstance(fam, CriticalFamily)
    hs = hollow_simplex(fam)
    assert np.allclose(hs.vertices, disks_hollow.vertices[perm], atol=1e-6)
    assert np.allclose(hs.gaps, disks_hollow.gaps[perm], atol=1e-6)


def test_uniqueness_probe_small_deviations(disks_family):
    report = uniqueness_probe(disks_family, restarts=10, seed=5)
    assert report.ok
    assert report.deviations.shape == (3,)
    assert np.all(report.deviations <= report.threshold)


def test_random_cage_contains_hollow_vertices(disks_family, disks_hollow):
    rng = np.random.default_rng(11)
    for _ in range(5):
        cage = random_cage(disks_family, rng=rng)
        assert isinstance(cage, Cage)
        assert cage_contains_hull_vertices(disks_family, cage, hs=disks_hollow)


def test_make_cage_rejects_bad_base_point(disks_family):
    pts = disks_family.witnesses.copy()
    pts[0] = [50.0, 50.0]
    with pytest.raises(ValueError):
        make_cage(disks_family, pts)


def test_cage_intersection_still_cages(disks_family, disks_hollow):
    cage = make_cage(disks_family, disks_family.witnesses)
    region = VPolytope(disks_family.witnesses)
    assert cage_intersection_is_cage(disks_family, cage, region,
                                     hs=disks_hollow, region_tol=1e-6)


def test_cages_for_ball_tetrahedron(balls_family):
    rng = np.random.default_rng(7)
    hs = hollow_simplex(balls_family)
    assert np.all(hs.gaps > 1e-3)
    for _ in range(3):
        cage = random_cage(balls_family, rng=rng)
        assert cage_contains_hull_vertices(balls_family, cage, hs=hs)


def test_leave_one_out_body_membership(disks_family):
    for j in range(3):
        X = disks_family.leave_one_out(j)
        assert X.membership(disks_family.witnesses[j], 1e-6)
        p = X.project(np.array([10.0, 10.0]))
        for i, b in enumerate(disks_family.bodies):
            if i != j:
                assert b.membership(p, 1e-6)
