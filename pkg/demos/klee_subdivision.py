#!/usr/bin/env python3
"""Finding a common point of bodies whose union is convex.

Three overlapping boxes tile the square [0, 3] x [0, 3].  Because the
union is convex and every two boxes meet, all three must meet; the
subdivision solver locates a shared point without ever forming the
intersection explicitly.  Along the way this shows the coloring
machinery: legal colorings of a subdivided simplex always contain an odd
number of all-colors cells.
"""
import numpy as np

from hollowkit import (HPolytope, Simplex, klee_solve, random_legal_coloring,
                       rainbow_cells, sperner_color, subdivide)

boxes = [
    HPolytope.box([0.0, 0.0], [3.0, 2.0]),
    HPolytope.box([1.0, 0.0], [3.0, 3.0]),
    HPolytope.box([0.0, 1.0], [2.0, 3.0]),
]
# witness j lies in both boxes other than j
witnesses = np.array([[1.5, 2.5], [0.5, 1.5], [2.5, 0.5]])

x = klee_solve(boxes, witnesses, tol=1e-6)
print("common point:", x)
print("memberships:", [b.distance(x) for b in boxes])

# Under the hood: subdivide the witness simplex and color each vertex by
# a body that misses it (or stop at a vertex inside all bodies).
cpx = subdivide(Simplex(witnesses), depth=2)
print("depth-2 subdivision:", cpx.cells.shape[0], "cells,",
      cpx.coords.shape[0], "vertices, mesh", cpx.mesh)
result = sperner_color(cpx, boxes)
if isinstance(result, np.ndarray):
    print("a subdivision vertex already lies in every box:", result)
else:
    cells = rainbow_cells(cpx, result)
    print("rainbow cells:", cells)

# The parity fact, checked on arbitrary legal colorings (no bodies at
# all, just carrier-respecting labels) of a deeper subdivision.
deep = subdivide(Simplex(witnesses), depth=3)
rng = np.random.default_rng(11)
counts = []
for trial in range(10):
    coloring = random_legal_coloring(deep, rng=rng)
    counts.append(int(rainbow_cells(deep, coloring).size))
print("rainbow counts over 10 random colorings:", counts)
assert all(c % 2 == 1 for c in counts)
print("all odd, as the parity argument demands")
