"""Scene and result files: a small JSON dialect with stable bytes.

A scene file describes a family of convex bodies plus optional cover and
stabbing inputs; a result file records what a run concluded.  Both use
schema tag ``hollowkit/1``.  Serialization is canonical: fixed key order,
two-space indent, floats at 17 significant digits, so identical inputs
produce byte-identical files.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import Ball, ConvexBody, HPolytope, IntersectionBody, VPolytope
from .errors import SceneError
from .geometry import AffineSubspace, as_point, as_points
from .hollow import StabbingPair
from .sperner import KkmInstance

SCHEMA = "hollowkit/1"

OPTION_KEYS = ("tol", "resolution", "depth", "restarts", "seed", "samples")
_INT_OPTIONS = {"depth", "restarts", "seed", "samples"}


@dataclass(eq=False)
class Scene:
    """Parsed scene: bodies plus optional cover and stabbing sections."""

    dimension: int
    bodies: tuple
    options: dict = field(default_factory=dict)
    kkm: KkmInstance = None
    stabbing: StabbingPair = None
    stabbing_witnesses: np.ndarray = None

    def to_json(self):
        out = {"schema": SCHEMA, "dimension": int(self.dimension)}
        out["bodies"] = [body_to_json(b) for b in self.bodies]
        if self.options:
            out["options"] = {k: self.options[k] for k in OPTION_KEYS
                              if k in self.options}
        if self.kkm is not None:
            out["kkm"] = {
                "points": _listify(self.kkm.points),
                "images": [body_to_json(g) for g in self.kkm.images],
            }
        if self.stabbing is not None:
            out["stabbing"] = {
                "flat": {"base": _listify(self.stabbing.w.base),
                         "basis": _listify(self.stabbing.w.basis)},
                "transversal": {"base": _listify(self.stabbing.v.base),
                                "basis": _listify(self.stabbing.v.basis)},
                "point": _listify(self.stabbing.point),
                "witnesses": _listify(self.stabbing_witnesses),
            }
        return out

    def __eq__(self, other):
        if not isinstance(other, Scene):
            return NotImplemented
        return self.to_json() == other.to_json()


def _listify(arr):
    return np.asarray(arr, dtype=float).tolist()


def body_to_json(body):
    """JSON description of a body, inverse of :func:`body_from_json`."""
    if isinstance(body, HPolytope):
        return {"kind": "hpoly", "normals": _listify(body.A),
                "offsets": _listify(body.b)}
    if isinstance(body, VPolytope):
        return {"kind": "vpoly", "vertices": _listify(body.vertices)}
    if isinstance(body, Ball):
        return {"kind": "ball", "center": _listify(body.center),
                "radius": float(body.radius)}
    if isinstance(body, IntersectionBody):
        return {"kind": "intersection",
                "parts": [body_to_json(b) for b in body.bodies],
                "witness": _listify(body.anchor)}
    raise SceneError(f"cannot serialize body of type {type(body).__name__}")


def _field(obj, key, path, kind=None):
    if key not in obj:
        raise SceneError(f"{path}: missing required key {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SceneError(f"{path}.{key}: expected {kind.__name__}, "
                         f"got {type(val).__name__}")
    return val


def body_from_json(obj, dimension, path="body"):
    """Build a body from its JSON description, checking the dimension."""
    if not isinstance(obj, dict):
        raise SceneError(f"{path}: body must be an object")
    kind = _field(obj, "kind", path, str)
    try:
        if kind == "hpoly":
            A = as_points(_field(obj, "normals", path, list))
            b = np.asarray(_field(obj, "offsets", path, list), dtype=float)
            if A.shape[1] != dimension:
                raise SceneError(
                    f"{path}: normals have dimension {A.shape[1]}, "
                    f"scene has {dimension}")
            if b.shape != (A.shape[0],):
                raise SceneError(f"{path}: need one offset per normal row")
            return HPolytope(A, b)
        if kind == "vpoly":
            V = as_points(_field(obj, "vertices", path, list))
            if V.shape[1] != dimension:
                raise SceneError(
                    f"{path}: vertices have dimension {V.shape[1]}, "
                    f"scene has {dimension}")
            return VPolytope(V)
        if kind == "ball":
            c = as_point(_field(obj, "center", path, list))
            if c.shape[0] != dimension:
                raise SceneError(
                    f"{path}: center has dimension {c.shape[0]}, "
                    f"scene has {dimension}")
            r = _field(obj, "radius", path, (int, float))
            return Ball(c, float(r))
        if kind == "intersection":
            parts_json = _field(obj, "parts", path, list)
            parts = [body_from_json(p, dimension, f"{path}.parts[{i}]")
                     for i, p in enumerate(parts_json)]
            witness = obj.get("witness")
            if witness is not None:
                witness = as_point(witness, dimension)
            return IntersectionBody(parts, witness=witness)
    except SceneError:
        raise
    except Exception as exc:
        raise SceneError(f"{path}: {exc}") from exc
    raise SceneError(f"{path}: unknown body kind {kind!r}")


def _subspace_from_json(obj, dimension, path):
    base = as_point(_field(obj, "base", path, list))
    basis = as_points(_field(obj, "basis", path, list))
    if base.shape[0] != dimension or basis.shape[1] != dimension:
        raise SceneError(f"{path}: flat does not match scene dimension "
                         f"{dimension}")
    try:
        return AffineSubspace(base, basis)
    except Exception as exc:
        raise SceneError(f"{path}: {exc}") from exc


def parse_scene(text, source="<scene>"):
    """Parse scene JSON text; errors carry line and column positions."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"{source}: invalid JSON: {exc.msg}",
                         line=exc.lineno, column=exc.colno) from exc
    if not isinstance(raw, dict):
        raise SceneError(f"{source}: top level must be an object")
    schema = raw.get("schema")
    if schema != SCHEMA:
        raise SceneError(f"{source}: unsupported schema {schema!r}, "
                         f"expected {SCHEMA!r}")
    dimension = raw.get("dimension")
    if not isinstance(dimension, int) or dimension < 1:
        raise SceneError(f"{source}: dimension must be a positive integer")
    bodies_json = raw.get("bodies")
    if not isinstance(bodies_json, list) or not bodies_json:
        raise SceneError(f"{source}: bodies must be a nonempty list")
    bodies = []
    problems = []
    for i, obj in enumerate(bodies_json):
        try:
            bodies.append(body_from_json(obj, dimension, f"bodies[{i}]"))
        except SceneError as exc:
            problems.append(str(exc))
    if problems:
        raise SceneError(f"{source}: {len(problems)} bad bodies",
                         details=tuple(problems))
    options = raw.get("options", {})
    if not isinstance(options, dict):
        raise SceneError(f"{source}: options must be an object")
    clean = {}
    for key, val in options.items():
        if key not in OPTION_KEYS:
            raise SceneError(f"{source}: unknown option {key!r}")
        if key in _INT_OPTIONS:
            if not isinstance(val, int):
                raise SceneError(f"{source}: option {key!r} must be an integer")
            clean[key] = val
        else:
            if not isinstance(val, (int, float)):
                raise SceneError(f"{source}: option {key!r} must be a number")
            clean[key] = float(val)
    kkm = None
    if "kkm" in raw:
        sec = raw["kkm"]
        if not isinstance(sec, dict):
            raise SceneError(f"{source}: kkm must be an object")
        points = as_points(_field(sec, "points", "kkm", list))
        if points.shape[1] != dimension:
            raise SceneError("kkm.points: dimension mismatch with scene")
        images_json = _field(sec, "images", "kkm", list)
        images = [body_from_json(g, dimension, f"kkm.images[{i}]")
                  for i, g in enumerate(images_json)]
        try:
            kkm = KkmInstance(points, tuple(images))
        except Exception as exc:
            raise SceneError(f"kkm: {exc}") from exc
    stabbing = None
    stab_wit = None
    if "stabbing" in raw:
        sec = raw["stabbing"]
        if not isinstance(sec, dict):
            raise SceneError(f"{source}: stabbing must be an object")
        w = _subspace_from_json(_field(sec, "flat", "stabbing", dict),
                                dimension, "stabbing.flat")
        v = _subspace_from_json(_field(sec, "transversal", "stabbing", dict),
                                dimension, "stabbing.transversal")
        point = as_point(_field(sec, "point", "stabbing", list), dimension)
        stab_wit = as_points(_field(sec, "witnesses", "stabbing", list),
                             dimension)
        try:
            stabbing = StabbingPair(w, v, point)
        except Exception as exc:
            raise SceneError(f"stabbing: {exc}") from exc
    return Scene(dimension=dimension, bodies=tuple(bodies), options=clean,
                 kkm=kkm, stabbing=stabbing, stabbing_witnesses=stab_wit)


def load_scene(path):
    """Parse a scene file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_scene(text, source=str(path))


def to_jsonable(obj):
    """Normalize numpy containers and scalars for serialization."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (frozenset, set)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # adding +0.0 folds negative zero, keeping the text re-parse stable
        return float(obj) + 0.0
    if obj is None or isinstance(obj, str):
        return obj
    raise SceneError(f"cannot serialize value of type {type(obj).__name__}")


def _dump(obj, indent):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f'{pad}  {json.dumps(k)}: {_dump(v, indent + 1)}'
                for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        flat = all(not isinstance(v, (dict, list)) for v in obj)
        if flat:
            return "[" + ", ".join(_dump(v, 0) for v in obj) + "]"
        rows = [f"{pad}  {_dump(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            raise SceneError("cannot serialize non-finite number")
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    raise SceneError(f"cannot serialize value of type {type(obj).__name__}")


def dumps(obj):
    """Canonical JSON text: stable key order, indent 2, 17-digit floats."""
    return _dump(to_jsonable(obj), 0) + "\n"


def serialize_scene(scene):
    """Canonical scene text; ``parse_scene`` inverts it."""
    return dumps(scene.to_json())
