"""Grid certification of the bounded complement component.

A critical family with as many overlap conditions as dimensions traps a
bounded piece of the complement of its union.  This module rasterizes the
union on a cell grid around the witness simplex, labels the uncovered
cells by face adjacency, and certifies the largest bounded component: its
measure, its convex hull, which bodies form its boundary, and whether a
given pair of affine flats stabs it the way the construction predicts.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.spatial import ConvexHull, QhullError

from .bodies import DEFAULT_TOL, ConvexBody, HPolytope, VPolytope
from .errors import (GridResolutionError, HollowNotFoundError, NoHollowError)
from .geometry import AffineSubspace, as_point, as_points
from .solvers import min_distance

MIN_CELLS_PER_AXIS = 20
BOX_EXPAND = 1.1


@dataclass
class Grid:
    """Axis-aligned cell grid with per-body coverage masks.

    ``covered[idx]`` is true when the cell center lies in at least one
    body; ``body_covers[i]`` is the mask for body i alone.
    """

    lo: np.ndarray
    resolution: float
    shape: tuple
    covered: np.ndarray = field(repr=False)
    body_covers: list = field(repr=False)

    def center(self, idx):
        return self.lo + (np.asarray(idx, dtype=float) + 0.5) * self.resolution

    def centers(self, cells):
        return self.lo + (np.asarray(cells, dtype=float) + 0.5) * self.resolution

    def index_of(self, point):
        idx = np.floor((as_point(point, self.lo.size) - self.lo)
                       / self.resolution).astype(int)
        if np.any(idx < 0) or np.any(idx >= np.asarray(self.shape)):
            return None
        return tuple(int(i) for i in idx)


def _build_grid(bodies, lo, hi, resolution):
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    counts = np.maximum(np.ceil((hi - lo) / resolution - 1e-12), 1).astype(int)
    axes = [lo[i] + (np.arange(counts[i]) + 0.5) * resolution
            for i in range(lo.size)]
    mesh = np.meshgrid(*axes, indexing="ij")
    flat = np.stack([m.ravel() for m in mesh], axis=1)
    shape = tuple(int(c) for c in counts)
    body_covers = [b.contains_batch(flat, tol=0.0).reshape(shape)
                   for b in bodies]
    covered = np.zeros(shape, dtype=bool)
    for mask in body_covers:
        covered |= mask
    return Grid(lo, float(resolution), shape, covered, body_covers)


def _border_labels(labels):
    d = labels.ndim
    seen = set()
    for axis in range(d):
        for face in (0, -1):
            sl = [slice(None)] * d
            sl[axis] = face
            seen.update(np.unique(labels[tuple(sl)]).tolist())
    seen.discard(0)
    return seen


@dataclass
class HollowCertificate:
    """One bounded uncovered component, certified on a grid.

    ``cells`` are multi-indices into the grid, ``measure`` is the covered
    volume estimate (cell count times cell volume), ``hull_vertices`` the
    convex hull of the cell centers.  ``component_count`` reports how many
    bounded components the grid found in total; the certificate describes
    the largest.
    """

    grid: Grid
    cells: np.ndarray = field(repr=False)
    measure: float
    hull_vertices: np.ndarray
    bounded: bool
    component_count: int
    resolution: float

    @property
    def cell_count(self):
        return self.cells.shape[0]

    @property
    def centers(self):
        return self.grid.centers(self.cells)


def _component_hull(centers):
    pts = as_points(centers)
    try:
        hull = ConvexHull(pts)
        return pts[hull.vertices]
    except QhullError:
        return np.unique(pts, axis=0)


def certify_hollow(family, resolution, expand=BOX_EXPAND, retry=True):
    """Locate and certify the bounded complement component of a family.

    The grid box is the witness bounding box scaled by ``expand`` about its
    center; cell centers are classified by body membership, uncovered cells
    are labeled by face adjacency, and components touching the grid border
    are discarded as unbounded.  If no bounded component shows up the grid
    is retried once at half the cell size.

    Raises
    ------
    NoHollowError
        If the family has fewer overlap conditions than dimensions (the
        complement of the union is connected).
    GridResolutionError
        If the requested resolution gives fewer than 20 cells per axis.
    HollowNotFoundError
        If no bounded component exists even after the retry.
    """
    if family.n != family.d:
        raise NoHollowError(
            f"a {family.n}-condition family in dimension {family.d} leaves "
            "no bounded complement component")
    d = family.d
    if d not in (2, 3):
        raise ValueError("grid certification supports dimension 2 or 3")
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    W = family.witnesses
    lo0, hi0 = W.min(axis=0), W.max(axis=0)
    center = 0.5 * (lo0 + hi0)
    half = 0.5 * expand * (hi0 - lo0)
    lo, hi = center - half, center + half
    counts = np.ceil((hi - lo) / resolution - 1e-12)
    if counts.min() < MIN_CELLS_PER_AXIS:
        raise GridResolutionError(
            f"resolution {resolution:g} gives only {int(counts.min())} cells "
            f"on the narrowest axis; at least {MIN_CELLS_PER_AXIS} required")
    grid = _build_grid(family.bodies, lo, hi, resolution)
    labels, nlab = ndimage.label(
        ~grid.covered, structure=ndimage.generate_binary_structure(d, 1))
    unbounded = _border_labels(labels)
    sizes = np.bincount(labels.ravel(), minlength=nlab + 1)
    bounded = [(int(sizes[l]), l) for l in range(1, nlab + 1)
               if l not in unbounded and sizes[l] > 0]
    if not bounded:
        if retry:
            return certify_hollow(family, resolution / 2.0, expand=expand,
                                  retry=False)
        raise HollowNotFoundError(
            f"no bounded uncovered component at resolution {resolution:g} "
            "or its refinement")
    bounded.sort(reverse=True)
    _, lab = bounded[0]
    cells = np.argwhere(labels == lab)
    centers = grid.centers(cells)
    return HollowCertificate(
        grid=grid,
        cells=cells,
        measure=float(cells.shape[0]) * resolution ** d,
        hull_vertices=_component_hull(centers),
        bounded=True,
        component_count=len(bounded),
        resolution=grid.resolution,
    )


@dataclass
class BoundaryAttribution:
    """Which bodies close off the component, cell by cell.

    ``cells`` are the component cells with at least one covered face
    neighbor; ``bodies_by_cell[k]`` lists the bodies covering those
    neighbors.  ``complete`` is true when every family member shows up
    somewhere on the boundary.
    """

    cells: np.ndarray = field(repr=False)
    centers: np.ndarray = field(repr=False)
    bodies_by_cell: tuple
    bodies_present: frozenset
    complete: bool


def boundary_attribution(certificate, n_bodies=None):
    """Attribute each boundary cell of the component to covering bodies."""
    grid = certificate.grid
    d = grid.lo.size
    cells = certificate.cells
    if n_bodies is None:
        n_bodies = len(grid.body_covers)
    shape = np.asarray(grid.shape)
    per_cell = [set() for _ in range(cells.shape[0])]
    for axis in range(d):
        for step in (-1, 1):
            nbr = cells.copy()
            nbr[:, axis] += step
            ok = (nbr[:, axis] >= 0) & (nbr[:, axis] < shape[axis])
            idx = tuple(nbr[ok].T)
            covered = grid.covered[idx]
            rows = np.flatnonzero(ok)[covered]
            if rows.size == 0:
                continue
            sub = tuple(nbr[rows].T)
            for i, mask in enumerate(grid.body_covers):
                hits = rows[mask[sub]]
                for r in hits:
                    per_cell[r].add(i)
    keep = [k for k, s in enumerate(per_cell) if s]
    bcells = cells[keep]
    by_cell = tuple(tuple(sorted(per_cell[k])) for k in keep)
    present = frozenset(i for s in by_cell for i in s)
    return BoundaryAttribution(
        cells=bcells,
        centers=grid.centers(bcells),
        bodies_by_cell=by_cell,
        bodies_present=present,
        complete=(len(present) == n_bodies),
    )


def nearest_boundary_distance(attribution, points):
    """Distance from each query point to the closest boundary cell center."""
    pts = as_points(points)
    centers = attribution.centers
    diffs = pts[:, None, :] - centers[None, :, :]
    return np.sqrt((diffs ** 2).sum(axis=2)).min(axis=1)


def enclosure_check(certificate, n_points=100, n_dirs=64, seed=0):
    """Ray test: every sampled escape from the component crosses the union.

    From sampled component cell centers, rays in random directions are
    marched in half-cell steps; each must hit a covered cell before leaving
    the grid box.  Returns the fraction of rays that did.
    """
    grid = certificate.grid
    d = grid.lo.size
    rng = np.random.default_rng(seed)
    k = certificate.cells.shape[0]
    pick = rng.choice(k, size=min(n_points, k), replace=False)
    starts = certificate.centers[pick]
    h = grid.resolution
    hi = grid.lo + np.asarray(grid.shape) * h
    span = float(np.linalg.norm(hi - grid.lo))
    t = (np.arange(1, int(np.ceil(span / (h / 2))) + 2)) * (h / 2)
    shape = np.asarray(grid.shape)
    ok = 0
    total = 0
    for start in starts:
        dirs = rng.normal(size=(n_dirs, d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        pts = start[None, None, :] + t[None, :, None] * dirs[:, None, :]
        idx = np.floor((pts - grid.lo) / h).astype(int)
        inside = np.all((idx >= 0) & (idx < shape), axis=2)
        idx_c = np.clip(idx, 0, shape - 1)
        covered = grid.covered[tuple(np.moveaxis(idx_c, 2, 0))]
        hit = covered & inside
        total += n_dirs
        ok += int(np.any(hit, axis=1).sum())
    return ok / float(total)


def simplex_containment(certificate, simplex):
    """Worst distance from a component cell center to the simplex.

    Zero when every center lies inside; a sound certificate stays within
    one cell diagonal of zero.
    """
    centers = certificate.centers
    V = simplex.vertices
    system = np.vstack([V.T, np.ones(V.shape[0])])
    rhs = np.vstack([centers.T, np.ones(centers.shape[0])])
    bary, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    worst = 0.0
    hull = VPolytope(V)
    for j in np.flatnonzero(bary.min(axis=0) < -1e-12):
        worst = max(worst, float(hull.distance(centers[j])))
    return worst


def perimeter_estimate(certificate):
    """Boundary cell count times cell face area; a surface-measure proxy."""
    attribution = boundary_attribution(certificate)
    d = certificate.grid.lo.size
    return attribution.cells.shape[0] * certificate.resolution ** (d - 1)


def hausdorff_convex(vertices_a, vertices_b):
    """Hausdorff distance between convex hulls of two finite point sets.

    The supremum over a convex hull of the distance to another convex set
    is attained at a vertex, so both directed distances reduce to vertex
    projections.
    """
    A = as_points(vertices_a)
    B = as_points(vertices_b)
    hull_a = VPolytope(A)
    hull_b = VPolytope(B)
    d_ab = max(float(hull_b.distance(v)) for v in A)
    d_ba = max(float(hull_a.distance(v)) for v in B)
    return max(d_ab, d_ba)


def hull_vs_simplex(certificate, hollow):
    """Hausdorff distance between the grid hull and the hollow simplex."""
    return hausdorff_convex(certificate.hull_vertices, hollow.vertices)


class _AffineSlice(ConvexBody):
    """A bounded piece of an affine flat, as a projection oracle.

    The flat is parametrized by orthonormal directions, so projecting a
    point means projecting its flat coordinates onto the parameter-space
    box polytope and lifting back.
    """

    def __init__(self, subspace, lo, hi):
        self._sub = subspace
        basis = subspace.basis
        A = np.vstack([basis.T, -basis.T])
        b = np.concatenate([np.asarray(hi, dtype=float) - subspace.base,
                            subspace.base - np.asarray(lo, dtype=float)])
        self._tbody = HPolytope(A, b)

    @property
    def dim(self):
        return self._sub.base.size

    def project(self, point):
        t = self._sub.coords(as_point(point, self.dim))
        return self._sub.lift(self._tbody.project(t))

    def support(self, direction):
        u = as_point(direction, self.dim)
        tu = self._sub.basis @ u
        if np.linalg.norm(tu) < 1e-12:
            return self._sub.lift(self._tbody.anchor)
        return self._sub.lift(self._tbody.support(tu))

    def bounding_box(self):
        tlo, thi = self._tbody.bounding_box()
        k = tlo.size
        corners = np.array([[tlo[i] if (m >> i) & 1 == 0 else thi[i]
                             for i in range(k)] for m in range(2 ** k)])
        lifted = np.array([self._sub.lift(c) for c in corners])
        return lifted.min(axis=0), lifted.max(axis=0)


@dataclass(frozen=True)
class StabbingPair:
    """Complementary affine flats crossing at a single point.

    ``w`` carries the hollow directions (dimension n), ``v`` the
    transversal directions (dimension d - n); they must meet only at
    ``point``.
    """

    w: AffineSubspace
    v: AffineSubspace
    point: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point",
                           as_point(self.point, self.w.base.size))
        d = self.w.base.size
        if self.w.dim + self.v.dim != d:
            raise ValueError(
                f"flat dimensions {self.w.dim} + {self.v.dim} must sum to {d}")
        scale = 1.0 + float(np.linalg.norm(self.point))
        if self.w.distance(self.point) > 1e-7 * scale:
            raise ValueError("crossing point is off the first flat")
        if self.v.distance(self.point) > 1e-7 * scale:
            raise ValueError("crossing point is off the second flat")
        stacked = np.vstack([self.w.basis, self.v.basis])
        sv = np.linalg.svd(stacked, compute_uv=False)
        if sv.size and sv[-1] < 1e-9:
            raise ValueError("flats are not transversal: directions overlap")


@dataclass(frozen=True)
class StabbingReport:
    """Two-part verdict on a stabbing pair.

    ``witness_ok`` records that every witness lies on the first flat and
    that the second flat clears every body; ``surround_ok`` that the
    crossing point sits in a bounded uncovered component of the union's
    trace on the first flat.  ``surround_ok`` is None when the first stage
    already failed.
    """

    witness_ok: bool
    surround_ok: object
    reasons: tuple
    witness_offsets: np.ndarray = None
    clearances: np.ndarray = None

    @property
    def ok(self):
        return bool(self.witness_ok) and bool(self.surround_ok)


def _family_box(bodies, extra_points, margin=0.1):
    los, his = [], []
    for b in bodies:
        lo, hi = b.bounding_box()
        los.append(lo)
        his.append(hi)
    pts = as_points(extra_points)
    los.append(pts.min(axis=0))
    his.append(pts.max(axis=0))
    lo = np.min(los, axis=0)
    hi = np.max(his, axis=0)
    pad = margin * max(float((hi - lo).max()), 1.0)
    return lo - pad, hi + pad


def verify_stabbing(pair, bodies, witnesses, tol=1e-6, resolution=None):
    """Check that a pair of flats stabs a family the way a hollow demands.

    Stage one: every witness must lie on ``pair.w`` (within ``tol``) and
    ``pair.v`` must keep a clearance above ``tol`` from every body.  Stage
    two, only if stage one passes: the union's trace on ``pair.w`` is
    rasterized and the crossing point must fall in a bounded uncovered
    component of that trace.
    """
    bodies = list(bodies)
    witnesses = as_points(witnesses)
    reasons = []
    offsets = np.array([pair.w.distance(a) for a in witnesses])
    bad = np.flatnonzero(offsets > tol)
    if bad.size:
        for j in bad:
            reasons.append(
                f"witness {j} is {offsets[j]:.3e} off the stabbing flat")
        return StabbingReport(False, None, tuple(reasons),
                              witness_offsets=offsets)
    lo, hi = _family_box(bodies, np.vstack([witnesses, pair.point[None, :]]))
    slice_body = _AffineSlice(pair.v, lo, hi)
    clearances = np.empty(len(bodies))
    for i, body in enumerate(bodies):
        clearances[i] = min_distance(slice_body, body).distance
        if clearances[i] <= tol:
            reasons.append(
                f"transversal flat meets body {i} "
                f"(clearance {clearances[i]:.3e})")
    if reasons:
        return StabbingReport(False, None, tuple(reasons),
                              witness_offsets=offsets, clearances=clearances)
    # stage two: trace of the union on the flat w
    k = pair.w.dim
    basis = pair.w.basis
    corners = np.array([[lo[i] if (m >> i) & 1 == 0 else hi[i]
                         for i in range(lo.size)]
                        for m in range(2 ** lo.size)])
    tcorners = np.array([pair.w.coords(c) for c in corners])
    tlo = tcorners.min(axis=0)
    thi = tcorners.max(axis=0)
    span = float((thi - tlo).max())
    h = resolution if resolution is not None else span / 256.0
    counts = np.ceil((thi - tlo + 4 * h) / h - 1e-12)
    if counts.min() < MIN_CELLS_PER_AXIS:
        raise GridResolutionError(
            f"trace resolution {h:g} gives only {int(counts.min())} cells "
            f"per axis; at least {MIN_CELLS_PER_AXIS} required")
    tlo = tlo - 2 * h
    axes = [tlo[i] + (np.arange(int(counts[i])) + 0.5) * h for i in range(k)]
    tmesh = np.meshgrid(*axes, indexing="ij")
    tflat = np.stack([m.ravel() for m in tmesh], axis=1)
    lifted = tflat @ basis + pair.w.base
    shape = tuple(int(c) for c in counts)
    covered = np.zeros(shape, dtype=bool)
    for body in bodies:
        covered |= body.contains_batch(lifted, tol=0.0).reshape(shape)
    tp = pair.w.coords(pair.point)
    pidx = np.floor((tp - tlo) / h).astype(int)
    if np.any(pidx < 0) or np.any(pidx >= np.asarray(shape)):
        reasons.append("crossing point falls outside the trace grid")
        return StabbingReport(True, False, tuple(reasons),
                              witness_offsets=offsets, clearances=clearances)
    if covered[tuple(pidx)]:
        reasons.append("crossing point lies inside the union's trace")
        return StabbingReport(True, False, tuple(reasons),
                              witness_offsets=offsets, clearances=clearances)
    labels, _ = ndimage.label(
        ~covered, structure=ndimage.generate_binary_structure(k, 1))
    lab = labels[tuple(pidx)]
    if lab in _border_labels(labels):
        reasons.append(
            "crossing point's uncovered trace component reaches the border")
        return StabbingReport(True, False, tuple(reasons),
                              witness_offsets=offsets, clearances=clearances)
    return StabbingReport(True, True, tuple(reasons),
                          witness_offsets=offsets, clearances=clearances)
