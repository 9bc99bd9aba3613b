"""Simplicial subdivision, boundary-legal colorings, and cover checks.

The combinatorial route to a common point of a family whose union is
convex: color subdivision vertices by the first body they fall out of, find
an all-colors cell (one always exists, in odd number), and shrink it by
refining.  A vertex that cannot be colored lies in every body and is
returned immediately.  ``kkm_verify`` is the companion sampled check for
set-valued covers of finite point sets.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .bodies import DEFAULT_TOL, dykstra
from .errors import KleeSolveError, SpernerLegalityError, SubdivisionSizeError
from .geometry import Simplex, affine_hull, as_point, as_points
from .solvers import intersect_witness

logger = logging.getLogger(__name__)

MAX_CELLS = 10_000_000


class _ExactComplex:
    """Iterated barycentric subdivision in exact rational barycentrics.

    Vertices are tuples of Fractions; deduplication and carrier faces are
    exact, so coloring legality never depends on floating-point luck.
    """

    def __init__(self, k):
        self.k = k
        self.vertices = [
            tuple(Fraction(1 if i == j else 0) for j in range(k + 1))
            for i in range(k + 1)
        ]
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.cells = [tuple(range(k + 1))]
        self.depth = 0

    def cell_count_after_step(self):
        return len(self.cells) * math.factorial(self.k + 1)

    def step(self):
        """One barycentric subdivision pass: cells become vertex-chain cells."""
        new_cells = []
        for cell in self.cells:
            for perm in itertools.permutations(cell):
                acc = [Fraction(0)] * (self.k + 1)
                chain = []
                for m, vid in enumerate(perm, start=1):
                    v = self.vertices[vid]
                    acc = [a + c for a, c in zip(acc, v)]
                    bary = tuple(a / m for a in acc)
                    idx = self.index.get(bary)
                    if idx is None:
                        idx = len(self.vertices)
                        self.vertices.append(bary)
                        self.index[bary] = idx
                    chain.append(idx)
                new_cells.append(tuple(chain))
        self.cells = new_cells
        self.depth += 1


@dataclass
class SubdivisionComplex:
    """A simplicial subdivision of an ambient simplex.

    ``bary[v]`` are barycentric coordinates of vertex v with respect to the
    ambient vertices, ``carriers[v]`` is the minimal ambient face containing
    v (as a frozenset of ambient vertex indices), and ``cells`` indexes
    ``coords`` row-wise.  Construction validates that the cells tile the
    ambient simplex and that every vertex lies on its carrier face.
    """

    ambient: Simplex
    coords: np.ndarray
    bary: np.ndarray
    carriers: tuple
    cells: np.ndarray
    depth: int = None

    def __post_init__(self):
        self.coords = as_points(self.coords)
        self.bary = np.asarray(self.bary, dtype=float)
        self.cells = np.asarray(self.cells, dtype=int)
        self._validate()
        self.mesh = self._compute_mesh()

    @classmethod
    def build(cls, ambient, coords, cells, carriers=None, depth=None):
        """Construct from explicit vertex coordinates and cells.

        Barycentrics are recovered by a least-squares solve against the
        ambient vertices; carriers default to the support of the
        barycentrics.
        """
        coords = as_points(coords, ambient.ambient_dim)
        k = ambient.dim
        V = ambient.vertices
        system = np.vstack([V.T, np.ones(k + 1)])
        rhs = np.vstack([coords.T, np.ones(coords.shape[0])])
        bary, *_ = np.linalg.lstsq(system, rhs, rcond=None)
        bary = bary.T
        if carriers is None:
            carriers = tuple(
                frozenset(int(i) for i in np.flatnonzero(row > 1e-9))
                for row in bary
            )
        else:
            carriers = tuple(frozenset(int(i) for i in c) for c in carriers)
        return cls(ambient, coords, bary, carriers, cells, depth=depth)

    def _validate(self):
        k = self.ambient.dim
        if self.bary.shape != (self.coords.shape[0], k + 1):
            raise ValueError("barycentric array shape mismatch")
        if self.cells.ndim != 2 or self.cells.shape[1] != k + 1:
            raise ValueError(f"cells must be (C, {k + 1}) vertex-index rows")
        if len(self.carriers) != self.coords.shape[0]:
            raise ValueError("one carrier face required per vertex")
        # vertices sit on their carrier faces
        recon = self.bary @ self.ambient.vertices
        err = np.linalg.norm(recon - self.coords, axis=1)
        scale = max(1.0, self.ambient.diameter)
        if err.max() > 1e-9 * scale:
            raise ValueError("vertex coordinates disagree with barycentrics")
        for v, carrier in enumerate(self.carriers):
            off_face = sum(abs(self.bary[v, i])
                           for i in range(k + 1) if i not in carrier)
            if off_face > 1e-9:
                raise ValueError(
                    f"vertex {v} has weight {off_face:.2e} outside its carrier face")
        # cells tile the ambient simplex (relative volume sums to one)
        rel = 0.0
        for chunk in range(0, self.cells.shape[0], 100000):
            cell_bary = self.bary[self.cells[chunk:chunk + 100000]]
            rel += np.abs(np.linalg.det(cell_bary)).sum()
        if abs(rel - 1.0) > 1e-6:
            raise ValueError(f"cells cover relative volume {rel:.8f}, expected 1")

    def _compute_mesh(self):
        mesh = 0.0
        k1 = self.cells.shape[1]
        for chunk in range(0, self.cells.shape[0], 100000):
            pts = self.coords[self.cells[chunk:chunk + 100000]]
            diffs = pts[:, :, None, :] - pts[:, None, :, :]
            d2 = (diffs ** 2).sum(axis=3).reshape(pts.shape[0], k1 * k1)
            mesh = max(mesh, float(np.sqrt(d2.max(initial=0.0))))
        return mesh

    @property
    def n_vertices(self):
        return self.coords.shape[0]

    @property
    def n_cells(self):
        return self.cells.shape[0]

    def cell_points(self, cell):
        return self.coords[np.asarray(cell, dtype=int)]


def _freeze(exact, ambient):
    bary = np.array([[float(f) for f in v] for v in exact.vertices])
    coords = bary @ ambient.vertices
    carriers = tuple(
        frozenset(i for i, f in enumerate(v) if f != 0) for v in exact.vertices
    )
    cells = np.array(exact.cells, dtype=int)
    return SubdivisionComplex(ambient, coords, bary, carriers, cells,
                              depth=exact.depth)


def subdivide(simplex, depth, max_cells=MAX_CELLS):
    """Iterated barycentric subdivision of a simplex.

    Produces ``((k+1)!)**depth`` cells with mesh at most
    ``(k/(k+1))**depth`` times the diameter.  Depths that would exceed
    ``max_cells`` cells are refused.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    k = simplex.dim
    cells = math.factorial(k + 1) ** depth
    if cells > max_cells:
        raise SubdivisionSizeError(
            f"depth {depth} needs {cells} cells, over the {max_cells} budget")
    exact = _ExactComplex(k)
    for _ in range(depth):
        exact.step()
    return _freeze(exact, simplex)


@dataclass(frozen=True)
class SpernerColoring:
    """A color in 0..n per subdivision vertex, legal w.r.t. carrier faces."""

    colors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "colors",
                           np.asarray(self.colors, dtype=int))


def sperner_color(complex_, bodies, tol=DEFAULT_TOL):
    """Color subdivision vertices by first-exit membership.

    Vertex v gets the smallest j such that v lies in body j-1 (cyclically)
    but not in body j.  A vertex admitting no such j lies in every body and
    is returned immediately as a common point.  Every assigned color is
    machine-checked against the vertex's carrier face.

    Returns
    -------
    SpernerColoring or ndarray
        The coloring, or a single common point (short-circuit).
    """
    bodies = list(bodies)
    n = len(bodies) - 1
    if complex_.ambient.dim != n:
        raise ValueError(
            f"need {complex_.ambient.dim + 1} bodies for a "
            f"{complex_.ambient.dim}-dimensional ambient simplex, got {n + 1}")
    inside = np.column_stack(
        [b.contains_batch(complex_.coords, tol) for b in bodies])
    shared = np.flatnonzero(inside.all(axis=1))
    if shared.size:
        return complex_.coords[int(shared[0])].copy()
    # eligible[v, j]: vertex v is in body j - 1 (cyclically) but not body j
    eligible = np.roll(inside, 1, axis=1) & ~inside
    colorless = np.flatnonzero(~eligible.any(axis=1))
    if colorless.size:
        x = complex_.coords[int(colorless[0])]
        raise SpernerLegalityError(
            f"vertex at {x} lies outside every consecutive difference and "
            "outside some body; the union is not convex there")
    colors = eligible.argmax(axis=1)
    for v, (color, carrier) in enumerate(zip(colors, complex_.carriers)):
        if int(color) not in carrier:
            raise SpernerLegalityError(
                f"vertex {v} colored {int(color)} outside its carrier face "
                f"{sorted(carrier)}")
    return SpernerColoring(colors)


def rainbow_cells(complex_, coloring):
    """Indices of cells whose vertices carry all n + 1 colors."""
    cell_colors = coloring.colors[complex_.cells]
    sorted_colors = np.sort(cell_colors, axis=1)
    target = np.arange(complex_.cells.shape[1])
    return np.flatnonzero((sorted_colors == target).all(axis=1))


def find_rainbow(complex_, coloring):
    """First cell carrying all colors; its existence is guaranteed.

    Raises :class:`SpernerLegalityError` if none exists, which would mean
    the coloring was not legal after all.
    """
    hits = rainbow_cells(complex_, coloring)
    if hits.size == 0:
        raise SpernerLegalityError(
            "no all-colors cell in a legally colored complex")
    return complex_.cells[int(hits[0])]


def random_legal_coloring(complex_, rng=None):
    """Uniform random color from each vertex's carrier face (always legal)."""
    rng = np.random.default_rng(rng)
    colors = np.empty(complex_.n_vertices, dtype=int)
    for v, carrier in enumerate(complex_.carriers):
        choices = sorted(carrier)
        colors[v] = choices[int(rng.integers(len(choices)))]
    return SpernerColoring(colors)


def _polish_common_point(x, bodies, tol):
    res = dykstra(x, [b.project for b in bodies], max_rounds=5000)
    cand = res.point
    if max(b.distance(cand) for b in bodies) <= max(b.distance(x) for b in bodies):
        x = cand
    worst = max(b.distance(x) for b in bodies)
    if worst > tol:
        raise KleeSolveError(
            f"candidate common point misses a body by {worst:.3e} (tol {tol:.0e})")
    return x


def klee_solve(bodies, witnesses, tol=1e-6, max_cells=MAX_CELLS):
    """Common point of bodies whose union is convex, via subdivision coloring.

    ``witnesses[j]`` must be a point shared by every body except possibly j.
    The witness simplex is subdivided until either some vertex lies in all
    bodies (short-circuit) or an all-colors cell has diameter below
    ``tol / 2``; the candidate is polished by cyclic projections and must
    pass membership in every body at ``tol``.

    Degenerate witness configurations fall back to the direct feasibility
    scan, which succeeds whenever fewer than d + 1 sets are involved or the
    union hypothesis holds.

    Raises
    ------
    KleeSolveError
        If the cell budget is exhausted first; carries the vertex array of
        the smallest all-colors cell seen.
    """
    bodies = list(bodies)
    n = len(bodies) - 1
    witnesses = as_points(witnesses)
    if witnesses.shape[0] != n + 1:
        raise ValueError(f"need {n + 1} witnesses, got {witnesses.shape[0]}")
    if n == 0:
        return _polish_common_point(witnesses[0], bodies, tol)
    if affine_hull(witnesses).dim < n:
        report = intersect_witness(bodies, tol=min(tol, DEFAULT_TOL))
        if report.feasible:
            return _polish_common_point(report.witness, bodies, tol)
        raise KleeSolveError(
            "degenerate witnesses and no common point: union cannot be convex")
    ambient = Simplex(witnesses)
    exact = _ExactComplex(n)
    best_cell = None
    best_diam = np.inf
    while True:
        complex_ = _freeze(exact, ambient)
        outcome = sperner_color(complex_, bodies, tol=tol)
        if isinstance(outcome, np.ndarray):
            return _polish_common_point(outcome, bodies, tol)
        hits = rainbow_cells(complex_, outcome)
        if hits.size == 0:
            raise SpernerLegalityError(
                "no all-colors cell in a legally colored complex")
        for idx in hits:
            pts = complex_.cell_points(complex_.cells[idx])
            diffs = pts[:, None, :] - pts[None, :, :]
            diam = float(np.sqrt((diffs ** 2).sum(axis=2).max()))
            if diam < best_diam:
                best_diam = diam
                best_cell = pts
        if best_diam < tol / 2.0:
            return _polish_common_point(best_cell.mean(axis=0), bodies, tol)
        if exact.cell_count_after_step() > max_cells:
            raise KleeSolveError(
                f"no common point within the {max_cells}-cell budget; the "
                "union may not be convex", best_cell=best_cell)
        exact.step()


@dataclass(frozen=True)
class KkmInstance:
    """Finite point set with one closed convex image set per point."""

    points: np.ndarray
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", as_points(self.points))
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.points.shape[0]:
            raise ValueError("need exactly one image body per point")
        for g in self.images:
            if g.dim != self.points.shape[1]:
                raise ValueError("image bodies must match the point dimension")


@dataclass(frozen=True)
class KkmReport:
    """Outcome of a sampled cover check.

    ``kkm_holds`` means no sampled hull point escaped its subset's images.
    When it holds, ``witness`` is a common point of all images;
    ``contradiction`` is set if no witness could be produced even though the
    sampled check passed, flagging a tolerance breakdown.
    """

    kkm_holds: bool
    counterexample: np.ndarray = None
    subset: tuple = None
    witness: np.ndarray = None
    contradiction: bool = False
    subsets_checked: int = 0
    samples_per_subset: int = 0


def _subset_samples(pts, samples):
    """Hull samples for one subset: vertices, midpoints, centroid, and a
    low-discrepancy spread with a vertex-biased half."""
    m = pts.shape[0]
    out = [pts[i] for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            out.append(0.5 * (pts[i] + pts[j]))
    out.append(pts.mean(axis=0))
    if m >= 2:
        count = 2 ** int(math.ceil(math.log2(max(samples, 2))))
        sob = qmc.Sobol(d=m, scramble=False)
        u = sob.random(count)
        u = np.clip(u, 1e-9, 1.0 - 1e-9)
        w = -np.log1p(-u)
        w /= w.sum(axis=1, keepdims=True)
        out.extend(w @ pts)
        biased = w ** 2
        biased /= biased.sum(axis=1, keepdims=True)
        out.extend(biased @ pts)
    return np.asarray(out)


def kkm_verify(instance, samples=64, tol=DEFAULT_TOL):
    """Sampled check that hulls of subsets stay inside their image unions.

    Every nonempty subset N of the instance's points is sampled (vertices,
    midpoints, centroid, plus a deterministic low-discrepancy mixture with a
    vertex-biased half); each sample must land in some image of a point of
    N.  On success a common point of all images is computed; failure to
    produce one despite the sampled check passing is flagged as a
    contradiction (tolerance breakdown).

    The point budget is capped at 12 points (4095 subsets).
    """
    pts = instance.points
    m = pts.shape[0]
    if m > 12:
        raise ValueError(f"subset enumeration capped at 12 points, got {m}")
    checked = 0
    for mask in range(1, 2 ** m):
        subset = tuple(i for i in range(m) if mask >> i & 1)
        sub_pts = pts[list(subset)]
        sub_images = [instance.images[i] for i in subset]
        for x in _subset_samples(sub_pts, samples):
            if not any(g.membership(x, tol) for g in sub_images):
                return KkmReport(False, counterexample=x, subset=subset,
                                 subsets_checked=checked, samples_per_subset=samples)
        checked += 1
    try:
        report = intersect_witness(list(instance.images), tol=tol)
    except Exception:
        report = None
    if report is not None and report.feasible:
        return KkmReport(True, witness=report.witness, subsets_checked=checked,
                         samples_per_subset=samples)
    return KkmReport(True, witness=None, contradiction=True,
                     subsets_checked=checked, samples_per_subset=samples)


def family_kkm_instance(bodies, witnesses):
    """Cover instance from a family: witness j maps to body j - 1 cyclically.

    When the family's union is convex the cover property holds and the
    images share a common point.
    """
    bodies = list(bodies)
    witnesses = as_points(witnesses)
    n = len(bodies) - 1
    if witnesses.shape[0] != n + 1:
        raise ValueError(f"need {n + 1} witnesses, got {witnesses.shape[0]}")
    images = tuple(bodies[(j - 1) % (n + 1)] for j in range(n + 1))
    return KkmInstance(witnesses, images)
