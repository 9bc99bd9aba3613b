"""Subdivision complexes, Sperner colorings, and the cover machinery."""
import math

import numpy as np
import pytest

from hollowkit import (HPolytope, Ball, KkmInstance, KleeSolveError, Simplex,
                       SpernerColoring, SpernerLegalityError,
                       SubdivisionComplex, SubdivisionSizeError,
                       family_kkm_instance, find_rainbow, kkm_verify,
                       klee_solve, rainbow_cells, random_legal_coloring,
                       sperner_color, subdivide)

UNIT_TRIANGLE = Simplex([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
SEGMENT = Simplex([[1.0], [0.0]])


def unit_simplex(k):
    verts = np.vstack([np.zeros(k), np.eye(k)])
    return Simplex(verts)


def test_subdivision_cell_counts():
    for k in (1, 2, 3):
        for depth in (0, 1, 2):
            cells = math.factorial(k + 1) ** depth
            if cells > 1000:
                continue
            sub = subdivide(unit_simplex(k), depth)
            assert sub.n_cells == cells
            assert sub.depth == depth


def test_subdivision_mesh_bound():
    for k in (1, 2, 3):
        S = unit_simplex(k)
        for depth in (1, 2):
            if math.factorial(k + 1) ** depth > 1000:
                continue
            sub = subdivide(S, depth)
            bound = (k / (k + 1.0)) ** depth * S.diameter
            assert sub.mesh <= bound + 1e-9


def test_subdivision_depth_zero_is_identity():
    sub = subdivide(UNIT_TRIANGLE, 0)
    assert sub.n_cells == 1
    assert sub.n_vertices == 3
    assert sub.mesh == pytest.approx(UNIT_TRIANGLE.diameter)


def test_subdivision_budget_refusal():
    with pytest.raises(SubdivisionSizeError):
        subdivide(UNIT_TRIANGLE, 3, max_cells=100)


def test_subdivision_vertex_invariants():
    sub = subdivide(UNIT_TRIANGLE, 2)
    assert np.allclose(sub.bary.sum(axis=1), 1.0, atol=1e-12)
    # the three ambient corners carry singleton faces
    singleton = sum(1 for c in sub.carriers if len(c) == 1)
    assert singleton == 3
    assert any(len(c) == 3 for c in sub.carriers)
    pts = sub.cell_points(sub.cells[0])
    assert pts.shape == (3, 2)


def test_build_rejects_partial_tilings():
    fan_coords = np.vstack([UNIT_TRIANGLE.vertices,
                            UNIT_TRIANGLE.vertices.mean(axis=0)])
    good = SubdivisionComplex.build(UNIT_TRIANGLE, fan_coords,
                                    [[0, 1, 3], [1, 2, 3], [2, 0, 3]])
    assert good.n_cells == 3
    with pytest.raises(ValueError):
        SubdivisionComplex.build(UNIT_TRIANGLE, fan_coords,
                                 [[0, 1, 3], [1, 2, 3]])


def test_build_rejects_carrier_violations():
    fan_coords = np.vstack([UNIT_TRIANGLE.vertices,
                            UNIT_TRIANGLE.vertices.mean(axis=0)])
    with pytest.raises(ValueError):
        SubdivisionComplex.build(UNIT_TRIANGLE, fan_coords,
                                 [[0, 1, 3], [1, 2, 3], [2, 0, 3]],
                                 carriers=[{0}, {1}, {2}, {0}])


def test_fan_coloring_has_one_rainbow():
    fan_coords = np.vstack([UNIT_TRIANGLE.vertices,
                            UNIT_TRIANGLE.vertices.mean(axis=0)])
    fan = SubdivisionComplex.build(UNIT_TRIANGLE, fan_coords,
                                   [[0, 1, 3], [1, 2, 3], [2, 0, 3]])
    coloring = SpernerColoring([0, 1, 2, 0])
    hits = rainbow_cells(fan, coloring)
    assert list(hits) == [1]
    assert sorted(find_rainbow(fan, coloring)) == [1, 2, 3]


def test_coloring_on_touching_intervals():
    bodies = [HPolytope.box([0.0], [0.45]), HPolytope.box([0.45], [1.0])]
    sub = subdivide(SEGMENT, 1)
    outcome = sperner_color(sub, bodies)
    assert isinstance(outcome, SpernerColoring)
    hits = rainbow_cells(sub, outcome)
    assert hits.size == 1
    pts = sub.cell_points(sub.cells[int(hits[0])])
    assert sorted(float(p) for p in pts.ravel()) == pytest.approx([0.0, 0.5])


def test_coloring_short_circuits_on_shared_vertex():
    bodies = [HPolytope.box([0.0], [0.6]), HPolytope.box([0.4], [1.0])]
    outcome = sperner_color(subdivide(SEGMENT, 1), bodies)
    assert isinstance(outcome, np.ndarray)
    for b in bodies:
        assert b.membership(outcome, 1e-9)


def test_coloring_rejects_uncovered_vertices():
    bodies = [HPolytope.box([0.0], [0.3]), HPolytope.box([0.4], [1.0])]
    with pytest.raises(SpernerLegalityError):
        sperner_color(subdivide(SEGMENT, 3), bodies)


def test_random_legal_colorings_have_odd_rainbows():
    rng = np.random.default_rng(29)
    cases = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)]
    for k, depth in cases:
        sub = subdivide(unit_simplex(k), depth)
        for _ in range(10):
            coloring = random_legal_coloring(sub, rng=rng)
            assert rainbow_cells(sub, coloring).size % 2 == 1


def test_klee_solve_three_squares(squares_union):
    witnesses = [[1.5, 2.5], [0.5, 1.5], [2.5, 0.5]]
    x = klee_solve(squares_union, witnesses)
    for b in squares_union:
        assert b.membership(x, 1e-6)


def test_klee_solve_thin_core():
    # the two intervals share exactly one point, so the sentinel never fires
    # and the rainbow cells must shrink onto it; the final projection polish
    # still lands on the corner itself
    bodies = [HPolytope.box([0.0], [1.0 / 3.0]),
              HPolytope.box([1.0 / 3.0], [1.0])]
    x = klee_solve(bodies, [[1.0], [0.0]], tol=1e-4)
    assert float(x[0]) == pytest.approx(1.0 / 3.0, abs=1e-9)


def test_klee_solve_single_body():
    ball = Ball([0.0, 0.0], 1.0)
    x = klee_solve([ball], [[2.0, 0.0]])
    assert ball.membership(x, 1e-6)


def test_klee_solve_degenerate_witnesses_fall_back(squares_union):
    collinear = [[1.5, 2.5], [1.5, 1.5], [1.5, 0.5]]
    x = klee_solve(squares_union, collinear)
    for b in squares_union:
        assert b.membership(x, 1e-6)


def test_klee_solve_degenerate_and_empty_raises():
    bodies = [HPolytope.box([0.0], [1.0]), HPolytope.box([2.0], [3.0])]
    with pytest.raises(KleeSolveError):
        klee_solve(bodies, [[1.5], [1.5]])


def test_klee_solve_budget_error_carries_best_cell():
    bodies = [HPolytope.box([0.0], [0.35]), HPolytope.box([0.35], [1.0])]
    with pytest.raises(KleeSolveError) as info:
        klee_solve(bodies, [[1.0], [0.0]], tol=1e-12, max_cells=4)
    cell = info.value.best_cell
    assert cell is not None
    assert cell.min() <= 0.35 <= cell.max()
    assert cell.max() - cell.min() == pytest.approx(0.25)


def test_kkm_gap_counterexample():
    instance = KkmInstance([[0.0], [1.0]],
                           (HPolytope.box([0.0], [0.4]),
                            HPolytope.box([0.5], [1.0])))
    report = kkm_verify(instance)
    assert not report.kkm_holds
    assert report.subset == (0, 1)
    assert 0.4 < float(report.counterexample[0]) < 0.5


def test_kkm_holds_for_square_cover(squares_union):
    witnesses = [[1.5, 2.5], [0.5, 1.5], [2.5, 0.5]]
    instance = family_kkm_instance(squares_union, witnesses)
    assert instance.images[0] is squares_union[2]
    assert instance.images[1] is squares_union[0]
    report = kkm_verify(instance)
    assert report.kkm_holds
    assert not report.contradiction
    assert report.subsets_checked == 7
    for g in instance.images:
        assert g.membership(report.witness, 1e-6)


def test_kkm_instance_validation():
    with pytest.raises(ValueError):
        KkmInstance([[0.0], [1.0]], (HPolytope.box([0.0], [1.0]),))
    with pytest.raises(ValueError):
        KkmInstance([[0.0], [1.0]],
                    (HPolytope.box([0.0, 0.0], [1.0, 1.0]),
                     HPolytope.box([0.0, 0.0], [1.0, 1.0])))


def test_kkm_point_budget_cap():
    pts = np.linspace(0.0, 1.0, 13)[:, None]
    images = tuple(HPolytope.box([0.0], [1.0]) for _ in range(13))
    with pytest.raises(ValueError):
        kkm_verify(KkmInstance(pts, images))
