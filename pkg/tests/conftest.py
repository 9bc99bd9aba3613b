"""Shared fixtures: the reference families exercised across the suite."""
import numpy as np
import pytest

from hollowkit import Ball, HPolytope, VPolytope, check_critical, hollow_simplex

TRIANGLE = np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 3.0]])
DISK_SIDE_CRITICAL = 1.9
DISK_SIDE_OVERLAP = 1.5
BALL_SIDE = 1.7
RECT_HALF_WIDTH = 0.025


def disk_centers(side):
    """Vertices of an equilateral triangle with the given side."""
    return np.array([
        [0.0, 0.0],
        [side, 0.0],
        [side / 2.0, side * np.sqrt(3.0) / 2.0],
    ])


def tetrahedron_centers(side):
    """Vertices of a regular tetrahedron with the given edge length."""
    raw = np.array([
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ])
    return raw * (side / (2.0 * np.sqrt(2.0)))


def side_rectangle(a, b, half_width=RECT_HALF_WIDTH):
    """Rectangle of the segment ab, widened by half_width on every side."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    u = (b - a) / np.linalg.norm(b - a)
    n = np.array([-u[1], u[0]])
    A = np.vstack([n, -n, u, -u])
    offsets = np.array([
        n @ a + half_width,
        -(n @ a) + half_width,
        u @ b + half_width,
        -(u @ a) + half_width,
    ])
    return HPolytope(A, offsets)


@pytest.fixture(scope="session")
def two_intervals():
    """1-critical pair on the line: [0, 2] and [1, 3] translated apart."""
    return [HPolytope.box([0.0], [1.0]), HPolytope.box([2.0], [3.0])]


@pytest.fixture(scope="session")
def triangle_segments():
    """The three sides of the reference triangle as degenerate hulls."""
    v = TRIANGLE
    return [
        VPolytope([v[0], v[1]]),
        VPolytope([v[1], v[2]]),
        VPolytope([v[2], v[0]]),
    ]


@pytest.fixture(scope="session")
def triangle_rects():
    """The same sides thickened into rotated rectangles."""
    v = TRIANGLE
    return [
        side_rectangle(v[0], v[1]),
        side_rectangle(v[1], v[2]),
        side_rectangle(v[2], v[0]),
    ]


@pytest.fixture(scope="session")
def three_disks():
    return [Ball(c, 1.0) for c in disk_centers(DISK_SIDE_CRITICAL)]


@pytest.fixture(scope="session")
def three_disks_overlapping():
    return [Ball(c, 1.0) for c in disk_centers(DISK_SIDE_OVERLAP)]


@pytest.fixture(scope="session")
def four_balls():
    return [Ball(c, 1.0) for c in tetrahedron_centers(BALL_SIDE)]


@pytest.fixture(scope="session")
def squares_union():
    """Three boxes whose union is the square [0, 3] x [0, 3]."""
    return [
        HPolytope.box([0.0, 0.0], [3.0, 2.0]),
        HPolytope.box([1.0, 0.0], [3.0, 3.0]),
        HPolytope.box([0.0, 1.0], [2.0, 3.0]),
    ]


@pytest.fixture(scope="session")
def pair_family(two_intervals):
    fam = check_critical(two_intervals)
    assert fam.__class__.__name__ == "CriticalFamily"
    return fam


@pytest.fixture(scope="session")
def disks_family(three_disks):
    fam = check_critical(three_disks)
    assert fam.__class__.__name__ == "CriticalFamily"
    return fam


@pytest.fixture(scope="session")
def disks_hollow(disks_family):
    return hollow_simplex(disks_family)


@pytest.fixture(scope="session")
def rects_family(triangle_rects):
    fam = check_critical(triangle_rects)
    assert fam.__class__.__name__ == "CriticalFamily"
    return fam


@pytest.fixture(scope="session")
def segments_family(triangle_segments):
    fam = check_critical(triangle_segments)
    assert fam.__class__.__name__ == "CriticalFamily"
    return fam


@pytest.fixture(scope="session")
def balls_family(four_balls):
    fam = check_critical(four_balls)
    assert fam.__class__.__name__ == "CriticalFamily"
    return fam
