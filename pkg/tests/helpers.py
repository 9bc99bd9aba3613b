"""Independent oracles and random instance builders used by the tests.

Everything here is deliberately written against different machinery than
the package itself (direct LP formulations, closed forms), so agreement
between the two is evidence rather than tautology.
"""
import itertools

import numpy as np
from scipy.optimize import linprog

from hollowkit import Ball, HPolytope, VPolytope


def hulls_intersect(P, Q):
    """LP feasibility: do the convex hulls of two point sets meet?

    Solves for mixture weights lam, mu >= 0 with sum 1 each and
    P^T lam = Q^T mu; feasibility is exactly hull intersection.
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    p, q = P.shape[0], Q.shape[0]
    d = P.shape[1]
    A_eq = np.zeros((d + 2, p + q))
    b_eq = np.zeros(d + 2)
    A_eq[:d, :p] = P.T
    A_eq[:d, p:] = -Q.T
    A_eq[d, :p] = 1.0
    b_eq[d] = 1.0
    A_eq[d + 1, p:] = 1.0
    b_eq[d + 1] = 1.0
    res = linprog(np.zeros(p + q), A_eq=A_eq, b_eq=b_eq,
                  bounds=(0.0, None), method="highs")
    return res.status == 0


def intersecting_bipartitions(points):
    """All proper bipartitions whose hulls meet, by brute force."""
    points = np.asarray(points, dtype=float)
    m = points.shape[0]
    found = []
    for mask in range(1, 2 ** (m - 1)):
        part1 = [i for i in range(m) if mask >> i & 1]
        part2 = [i for i in range(m) if not mask >> i & 1]
        if not part1 or not part2:
            continue
        if hulls_intersect(points[part1], points[part2]):
            found.append((frozenset(part1), frozenset(part2)))
    return found


def segment_point_distance(p, a, b):
    """Closed-form distance from a point to a segment."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    u = b - a
    t = float(np.clip((p - a) @ u / (u @ u), 0.0, 1.0))
    return float(np.linalg.norm(a + t * u - p)), a + t * u


def box_box_distance(lo1, hi1, lo2, hi2):
    """Closed-form distance between axis-aligned boxes."""
    lo1, hi1 = np.asarray(lo1, float), np.asarray(hi1, float)
    lo2, hi2 = np.asarray(lo2, float), np.asarray(hi2, float)
    gaps = np.maximum(np.maximum(lo2 - hi1, lo1 - hi2), 0.0)
    return float(np.linalg.norm(gaps))


def ball_ball_distance(c1, r1, c2, r2):
    return max(float(np.linalg.norm(np.asarray(c2, float)
                                    - np.asarray(c1, float))) - r1 - r2, 0.0)


def circle_intersections(c1, c2, r=1.0):
    """Both intersection points of two unit circles (closed form)."""
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    dvec = c2 - c1
    dist = float(np.linalg.norm(dvec))
    a = dist / 2.0
    hh = np.sqrt(r * r - a * a)
    mid = (c1 + c2) / 2.0
    perp = np.array([-dvec[1], dvec[0]]) / dist
    return mid + hh * perp, mid - hh * perp


def union_box_family(rng, dim):
    """Family whose union is a box: the base box plus clipped half-boxes.

    Body 0 is the box itself; body j is the box cut down to x_j >= alpha_j
    with alpha_j strictly inside, so the union stays the box and the full
    intersection is a fat corner cell.
    """
    sides = rng.uniform(1.0, 3.0, size=dim)
    alphas = rng.uniform(0.2, 0.6, size=dim) * sides
    bodies = [HPolytope.box(np.zeros(dim), sides)]
    for j in range(dim):
        lo = np.zeros(dim)
        lo[j] = alphas[j]
        bodies.append(HPolytope.box(lo, sides))
    return bodies, sides, alphas


def random_critical_rejection_family(rng, dim):
    """n + 1 > d + 1 bodies all sharing a small central core.

    Such a family always trips the dimension guard, and the shared core
    point is an explicit witness that the full intersection is nonempty.
    """
    n_bodies = dim + 2 + int(rng.integers(0, 2))
    core = rng.uniform(-0.2, 0.2, size=dim)
    bodies = []
    for i in range(n_bodies):
        kind = int(rng.integers(0, 3))
        if kind == 0:
            center = core + rng.uniform(-0.3, 0.3, size=dim)
            radius = float(np.linalg.norm(core - center)) + rng.uniform(0.2, 1.0)
            bodies.append(Ball(center, radius))
        elif kind == 1:
            lo = core - rng.uniform(0.1, 1.0, size=dim)
            hi = core + rng.uniform(0.1, 1.0, size=dim)
            bodies.append(HPolytope.box(lo, hi))
        else:
            spread = rng.uniform(0.2, 1.0)
            pts = core + rng.uniform(-spread, spread, size=(2 * dim + 2, dim))
            pts = np.vstack([pts, core + spread * np.eye(dim),
                             core - spread * np.eye(dim)])
            bodies.append(VPolytope(pts))
    return bodies, core


def random_points(rng, count, dim, spread=2.0):
    return rng.uniform(-spread, spread, size=(count, dim))
