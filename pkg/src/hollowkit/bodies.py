"""Compact convex bodies behind a three-call oracle: membership, support, project.

Concrete types: :class:`HPolytope` (bounded intersection of halfspaces),
:class:`VPolytope` (convex hull of finitely many points), :class:`Ball`, and
:class:`IntersectionBody` (lazy intersection of other bodies).  Projection
onto an intersection runs Dykstra's alternating scheme with correction
terms; projection onto a V-polytope runs a conditional-gradient solve with
away steps over the weight simplex.  Both are implemented here so no
external QP solver is needed.
"""
from __future__ import annotations

import abc
import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import (
    EmptyBodyError,
    ProjectionError,
    ToleranceAmbiguityError,
    UnboundedBodyError,
)
from .geometry import as_point, as_points

logger = logging.getLogger(__name__)

# Membership tolerance used wherever an operation does not take its own.
DEFAULT_TOL = 1e-7

# Dykstra stopping rule: successive full-cycle iterates must move less than
# this, with a hard round cap.
DYKSTRA_MOVE_TOL = 1e-10
DYKSTRA_MAX_ROUNDS = 100000


@dataclass
class DykstraResult:
    point: np.ndarray
    rounds: int
    movement: float
    converged: bool


def dykstra(start, projectors, move_tol=DYKSTRA_MOVE_TOL, max_rounds=DYKSTRA_MAX_ROUNDS):
    """Dykstra's cyclic projection with correction terms.

    Converges to the nearest point of the intersection of the projectors'
    sets whenever that intersection is nonempty.  ``projectors`` is a list
    of callables mapping a point to its nearest point in one set.
    """
    x = np.array(start, dtype=float)
    incr = [np.zeros_like(x) for _ in projectors]
    movement = np.inf
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        x_prev = x
        corr_delta = 0.0
        for i, proj in enumerate(projectors):
            y = proj(x + incr[i])
            new_incr = x + incr[i] - y
            corr_delta += float(np.linalg.norm(new_incr - incr[i]))
            incr[i] = new_incr
            x = y
        # The iterate can sit still for whole stretches while the
        # corrections keep growing toward a corner, so convergence must be
        # judged on both.
        movement = float(np.linalg.norm(x - x_prev)) + corr_delta
        if movement < move_tol:
            return DykstraResult(x, rounds, movement, True)
    return DykstraResult(x, rounds, movement, False)


def feasibility_scan(bodies, start=None, tol=DEFAULT_TOL, stall_rounds=1000,
                     max_rounds=200000, stall_rtol=1e-12):
    """Cyclic Dykstra feasibility decision over a list of bodies.

    After every full round the gap ``max_i dist(x, C_i)`` is measured at the
    current iterate.  The scan returns

    - ``("witness", x, gap, dists, rounds)`` once the gap drops below
      ``tol / 10``;
    - ``("empty", x, gap, dists, rounds)`` when the gap stalls above ``tol``
      for ``stall_rounds`` consecutive rounds;
    - ``("ambiguous", ...)`` when it stalls inside ``[tol / 10, tol]``;
    - ``("noconv", ...)`` if the round budget runs out first.
    """
    if len(bodies) == 0:
        raise ValueError("need at least one body")
    if start is None:
        start = support_centroid(bodies)
    x = np.array(start, dtype=float)
    incr = [np.zeros_like(x) for _ in bodies]
    prev_gap = None
    stalled = 0
    for rounds in range(1, max_rounds + 1):
        for i, body in enumerate(bodies):
            y = body.project(x + incr[i])
            incr[i] = x + incr[i] - y
            x = y
        dists = np.array([body.distance(x) for body in bodies])
        gap = float(dists.max())
        if gap < tol / 10.0:
            return "witness", x, gap, dists, rounds
        if prev_gap is not None and abs(gap - prev_gap) < stall_rtol * max(1.0, gap):
            stalled += 1
        else:
            stalled = 0
        prev_gap = gap
        if stalled >= stall_rounds:
            status = "empty" if gap > tol else "ambiguous"
            return status, x, gap, dists, rounds
    return "noconv", x, prev_gap if prev_gap is not None else np.inf, None, max_rounds


def support_centroid(bodies):
    """Average of every body's support points along the +-axis directions."""
    dim = bodies[0].dim
    pts = []
    eye = np.eye(dim)
    for body in bodies:
        for i in range(dim):
            pts.append(body.support(eye[i]))
            pts.append(body.support(-eye[i]))
    return np.mean(pts, axis=0)


class ConvexBody(abc.ABC):
    """Oracle interface for a compact convex set in R^d."""

    @property
    @abc.abstractmethod
    def dim(self):
        """Ambient dimension."""

    @abc.abstractmethod
    def project(self, p):
        """Nearest point of the body to ``p`` (identity for members)."""

    @abc.abstractmethod
    def support(self, direction):
        """A member maximizing the inner product with ``direction``."""

    @abc.abstractmethod
    def bounding_box(self):
        """Axis-aligned bounds as a (lo, hi) pair of arrays."""

    def distance(self, p):
        """Euclidean distance from ``p`` to the body."""
        p = as_point(p, self.dim)
        return float(np.linalg.norm(p - self.project(p)))

    def membership(self, p, tol=DEFAULT_TOL):
        """True when ``p`` lies within ``tol`` of the body."""
        return self.distance(p) <= tol

    def contains_batch(self, points, tol=DEFAULT_TOL):
        """Vectorized membership for an (N, d) array; subclasses override."""
        pts = as_points(points, self.dim)
        return np.array([self.membership(q, tol) for q in pts], dtype=bool)

    def diameter(self):
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))

    @property
    def anchor(self):
        """Some member point, used as a default start for iterations."""
        lo, hi = self.bounding_box()
        return self.project((lo + hi) / 2.0)


def _project_onto_halfspace(p, a, b):
    """Projection onto {x : a . x <= b} with ``a`` a unit row."""
    slack = float(np.dot(a, p) - b)
    if slack <= 0.0:
        return p
    return p - slack * a


class HPolytope(ConvexBody):
    """Bounded nonempty polytope {x : A x <= b}.

    Rows of ``A`` are normalized at construction.  Construction verifies
    nonemptiness and boundedness with an LP screen and rejects unbounded or
    empty descriptions.

    Parameters
    ----------
    A : array_like, shape (m, d)
    b : array_like, shape (m,)
    """

    def __init__(self, A, b):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float)).astype(float)
        if A.ndim != 2 or A.shape[0] != b.shape[0]:
            raise ValueError(f"inconsistent halfspace data: A {A.shape}, b {b.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("halfspace data has non-finite entries")
        norms = np.linalg.norm(A, axis=1)
        keep = norms > 1e-12
        if not np.all(keep):
            if np.any(b[~keep] < -1e-12):
                raise EmptyBodyError("zero row with negative bound: empty polytope")
            A, b, norms = A[keep], b[keep], norms[keep]
        if A.shape[0] == 0:
            raise UnboundedBodyError("no constraints: whole space is unbounded")
        self._A = A / norms[:, None]
        self._b = b / norms
        self._dim = A.shape[1]
        self._screen()

    def _screen(self):
        """LP screen: nonempty, bounded, and cache the axis-aligned bounds."""
        d = self._dim
        lo = np.empty(d)
        hi = np.empty(d)
        sup_points = []
        for i in range(d):
            c = np.zeros(d)
            for sign in (1.0, -1.0):
                c[i] = -sign  # minimize -sign * x_i, i.e. maximize sign * x_i
                res = linprog(c, A_ub=self._A, b_ub=self._b, bounds=(None, None),
                              method="highs")
                c[i] = 0.0
                if res.status == 3:
                    raise UnboundedBodyError(
                        f"polytope is unbounded along axis {i} ({'+' if sign > 0 else '-'})"
                    )
                if res.status == 2:
                    raise EmptyBodyError("polytope has no feasible point")
                if res.status != 0:
                    raise ProjectionError(f"LP screen failed with status {res.status}")
                if sign > 0:
                    hi[i] = -res.fun
                else:
                    lo[i] = res.fun
                sup_points.append(np.asarray(res.x, dtype=float))
        self._lo, self._hi = lo, hi
        self._anchor = np.mean(sup_points, axis=0)

    @classmethod
    def box(cls, lo, hi):
        """Axis-aligned box [lo_1, hi_1] x ... x [lo_d, hi_d]."""
        lo = as_point(lo)
        hi = as_point(hi, lo.shape[0])
        if np.any(hi < lo):
            raise EmptyBodyError("box has hi < lo on some axis")
        d = lo.shape[0]
        A = np.vstack([np.eye(d), -np.eye(d)])
        b = np.concatenate([hi, -lo])
        return cls(A, b)

    @property
    def dim(self):
        return self._dim

    @property
    def A(self):
        return self._A

    @property
    def b(self):
        return self._b

    @property
    def anchor(self):
        return self._anchor

    def bounding_box(self):
        return self._lo.copy(), self._hi.copy()

    def support(self, direction):
        u = as_point(direction, self._dim)
        if np.linalg.norm(u) == 0:
            raise ValueError("support direction must be nonzero")
        res = linprog(-u, A_ub=self._A, b_ub=self._b, bounds=(None, None),
                      method="highs")
        if res.status != 0:
            raise ProjectionError(f"support LP failed with status {res.status}")
        return np.asarray(res.x, dtype=float)

    def project(self, p):
        p = as_point(p, self._dim)
        slacks = self._A @ p - self._b
        if slacks.max() <= 0.0:
            return p.copy()
        projs = [
            (lambda q, a=self._A[i], bi=self._b[i]: _project_onto_halfspace(q, a, bi))
            for i in range(self._A.shape[0])
        ]
        # The movement stop must sit above rounding noise, which grows with
        # the coordinate scale of the iterates.
        move_tol = max(1e-12, 4e-15 * (1.0 + float(np.linalg.norm(p))))
        res = dykstra(p, projs, move_tol=move_tol, max_rounds=DYKSTRA_MAX_ROUNDS)
        if not res.converged:
            raise ProjectionError("halfspace Dykstra did not converge",
                                  last_iterate=res.point, residual=res.movement)
        return res.point

    def distance(self, p):
        p = as_point(p, self._dim)
        slacks = self._A @ p - self._b
        if slacks.max() <= 0.0:
            return 0.0
        return float(np.linalg.norm(p - self.project(p)))

    def membership(self, p, tol=DEFAULT_TOL):
        p = as_point(p, self._dim)
        worst = float((self._A @ p - self._b).max())
        if worst <= 0.0:
            return True
        if worst > tol:
            # distance to the polytope dominates the worst halfspace slack
            return False
        return self.distance(p) <= tol

    def contains_batch(self, points, tol=DEFAULT_TOL):
        pts = as_points(points, self._dim)
        worst = (pts @ self._A.T - self._b).max(axis=1)
        out = worst <= 0.0
        band = (~out) & (worst <= tol)
        for idx in np.flatnonzero(band):
            out[idx] = self.distance(pts[idx]) <= tol
        return out


def _face_lstsq(Va, p):
    """Affine-combination weights of the point of aff(Va) nearest to p.

    Solved in a basis of the zero-sum subspace so the weights stay affine;
    signs are unconstrained.  Rank-deficient faces get the minimum-norm
    weights.
    """
    m = Va.shape[0]
    if m == 1:
        return np.ones(1)
    u0 = np.full(m, 1.0 / m)
    N = np.zeros((m - 1, m))
    for i in range(m - 1):
        N[i, i] = 1.0
        N[i, m - 1] = -1.0
    B = N @ Va
    t, *_ = np.linalg.lstsq(B.T, p - u0 @ Va, rcond=None)
    return u0 + t @ N


def _hull_project(V, p, gap_tol=1e-12, max_iter=5000):
    """Nearest point of conv(V) to p, by an active-set method.

    Each pass solves the affine least-squares problem on the current face
    exactly; an infeasible solution is approached only as far as the
    weights stay nonnegative (dropping the vertex that hits zero first),
    and a feasible one is tested against the simplex optimality condition,
    admitting the most promising outside vertex.  Finite in exact
    arithmetic.  The duality gap is judged relative to the query scale so
    far-away points terminate instead of chasing rounding noise.
    """
    V = np.asarray(V, dtype=float)
    k = V.shape[0]
    if k == 1:
        return V[0].copy()
    d2 = ((V - p) ** 2).sum(axis=1)
    gap_stop = gap_tol * max(1.0, float(np.sqrt(d2.max())))
    mask = np.zeros(k, dtype=bool)
    mask[int(np.argmin(d2))] = True
    lam = mask.astype(float)
    best = V[mask][0].copy()
    best_d2 = float(d2.min())
    for _ in range(max_iter):
        u = np.zeros(k)
        u[mask] = _face_lstsq(V[mask], p)
        if u[mask].min() >= -1e-12:
            lam = np.clip(u, 0.0, None)
            lam /= lam.sum()
            x = lam @ V
            r = x - p
            dist2 = float(r @ r)
            if dist2 < best_d2:
                best, best_d2 = x, dist2
            g = V @ r
            fw = int(np.argmin(g))
            if float(lam @ g - g[fw]) < gap_stop or mask[fw]:
                break
            mask[fw] = True
        else:
            # walk from the current weights toward the face solution until
            # the first weight vanishes, and retire that vertex
            drop = mask & (u < lam)
            steps = lam[drop] / (lam[drop] - u[drop])
            t = float(steps.min())
            lam = (1.0 - t) * lam + t * u
            lam[lam < 1e-15] = 0.0
            lam /= lam.sum()
            mask = lam > 0.0
    return best


class VPolytope(ConvexBody):
    """Convex hull of a finite generator set.

    Parameters
    ----------
    vertices : array_like, shape (k, d)
        Generators; duplicates and interior points are tolerated.
    """

    def __init__(self, vertices):
        self._V = as_points(vertices)
        self._dim = self._V.shape[1]

    @property
    def dim(self):
        return self._dim

    @property
    def vertices(self):
        return self._V

    @property
    def anchor(self):
        return self._V.mean(axis=0)

    def bounding_box(self):
        return self._V.min(axis=0), self._V.max(axis=0)

    def support(self, direction):
        u = as_point(direction, self._dim)
        if np.linalg.norm(u) == 0:
            raise ValueError("support direction must be nonzero")
        return self._V[int(np.argmax(self._V @ u))].copy()

    def project(self, p):
        return _hull_project(self._V, as_point(p, self._dim))


class Ball(ConvexBody):
    """Closed Euclidean ball with positive radius."""

    def __init__(self, center, radius):
        self._c = as_point(center)
        self._r = float(radius)
        if not np.isfinite(self._r) or self._r <= 0:
            raise ValueError(f"ball radius must be positive, got {radius}")

    @property
    def dim(self):
        return self._c.shape[0]

    @property
    def center(self):
        return self._c

    @property
    def radius(self):
        return self._r

    @property
    def anchor(self):
        return self._c.copy()

    def bounding_box(self):
        return self._c - self._r, self._c + self._r

    def support(self, direction):
        u = as_point(direction, self.dim)
        norm = float(np.linalg.norm(u))
        if norm == 0:
            raise ValueError("support direction must be nonzero")
        return self._c + self._r * u / norm

    def project(self, p):
        p = as_point(p, self.dim)
        v = p - self._c
        norm = float(np.linalg.norm(v))
        if norm <= self._r:
            return p.copy()
        return self._c + v * (self._r / norm)

    def distance(self, p):
        p = as_point(p, self.dim)
        return max(0.0, float(np.linalg.norm(p - self._c)) - self._r)

    def contains_batch(self, points, tol=DEFAULT_TOL):
        pts = as_points(points, self.dim)
        return np.linalg.norm(pts - self._c, axis=1) <= self._r + tol


class IntersectionBody(ConvexBody):
    """Intersection of member bodies, kept as oracles.

    Nonemptiness is certified at construction: either a ``witness`` member
    point is supplied by the caller or a feasibility scan finds one.  An
    empty intersection raises :class:`EmptyBodyError`.
    """

    # Far-point multiplier for support computations; the support point's
    # inner-product defect is bounded by diam^2 / (2 R).
    _SUPPORT_RADIUS = 1e4

    def __init__(self, bodies, witness=None, tol=DEFAULT_TOL):
        bodies = tuple(bodies)
        if not bodies:
            raise ValueError("need at least one body")
        d = bodies[0].dim
        for b in bodies:
            if b.dim != d:
                raise ValueError("member bodies live in different dimensions")
        self._bodies = bodies
        self._dim = d
        if witness is None:
            status, point, gap, _, _ = feasibility_scan(bodies, tol=tol)
            if status == "witness":
                witness = point
            elif status == "empty":
                raise EmptyBodyError(
                    f"intersection is empty (gap {gap:.3e} above tol {tol:.0e})"
                )
            else:
                raise ToleranceAmbiguityError(
                    "feasibility of the intersection is indeterminate at this tolerance",
                    gap=gap, tol=tol)
        else:
            witness = as_point(witness, d)
            for i, b in enumerate(bodies):
                if not b.membership(witness, tol):
                    raise ValueError(f"witness fails membership in member {i}")
        self._witness = witness

    @property
    def dim(self):
        return self._dim

    @property
    def bodies(self):
        return self._bodies

    @property
    def anchor(self):
        return self._witness.copy()

    def bounding_box(self):
        los, his = zip(*(b.bounding_box() for b in self._bodies))
        lo = np.max(los, axis=0)
        hi = np.min(his, axis=0)
        return lo, np.maximum(hi, lo)

    def project(self, p):
        p = as_point(p, self._dim)
        res = dykstra(p, [b.project for b in self._bodies])
        if not res.converged:
            residual = max(b.distance(res.point) for b in self._bodies)
            raise ProjectionError(
                f"intersection projection stalled after {res.rounds} rounds",
                last_iterate=res.point, residual=residual)
        return res.point

    def support(self, direction):
        u = as_point(direction, self._dim)
        norm = float(np.linalg.norm(u))
        if norm == 0:
            raise ValueError("support direction must be nonzero")
        diam = self.diameter()
        radius = self._SUPPORT_RADIUS * (1.0 + diam)
        far = self._witness + (radius / norm) * u
        # Projecting the far point directly stalls: Dykstra's corrections
        # would have to grow to the far point's scale before the iterate
        # reaches a corner of the intersection.  Instead re-aim a proxy at
        # short lever arm rho along the current far direction and project
        # that; a fixed point x of this map has (far - x) in the normal
        # cone at x, which makes x exactly the projection of the far point.
        rho = 10.0 * (1.0 + diam)
        projs = [b.project for b in self._bodies]
        x = self._witness.copy()
        for _ in range(200):
            w = far - x
            dist = float(np.linalg.norm(w))
            z = far if dist <= rho else x + (rho / dist) * w
            res = dykstra(z, projs, move_tol=DYKSTRA_MOVE_TOL,
                          max_rounds=20000)
            step = float(np.linalg.norm(res.point - x))
            x = res.point
            if step < 1e-10 * (1.0 + rho):
                break
        return x

    def membership(self, p, tol=DEFAULT_TOL):
        p = as_point(p, self._dim)
        dists = [b.distance(p) for b in self._bodies]
        worst = max(dists)
        if worst == 0.0:
            return True
        if worst > tol:
            return False
        return self.distance(p) <= tol

    def contains_batch(self, points, tol=DEFAULT_TOL):
        pts = as_points(points, self._dim)
        inner = np.ones(pts.shape[0], dtype=bool)
        outer = np.zeros(pts.shape[0], dtype=bool)
        for b in self._bodies:
            inner &= b.contains_batch(pts, tol=0.0)
            outer |= ~b.contains_batch(pts, tol=tol)
        out = inner.copy()
        band = ~inner & ~outer
        for idx in np.flatnonzero(band):
            out[idx] = self.membership(pts[idx], tol)
        return out
