"""JSON body files.

One object per file, selected by ``"type"``::

    {"type": "vertices", "dim": 3, "points": [[0, 0, 0], ...]}
    {"type": "ball", "dim": 3, "radius": 1.0, "center": [0, 0, 0]}   # center optional
    {"type": "cube", "dim": 3, "side": 1.0}                         # [0, side]^dim
    {"type": "simplex", "dim": 3}                                   # conv{0, e_1, ..., e_dim}
    {"type": "random", "dim": 3, "vertices": 10, "seed": 1}
    {"type": "ball_approx", "dim": 3, "radius": 1.0, "points": 200, "seed": 0}
"""
import json

import numpy as np

from .geometry import MAX_DIM, Ball, ball_approx, convex_hull, cube, standard_simplex
from .streams import SampleStream
from .verify import random_polytope

TYPES = ("vertices", "ball", "cube", "simplex", "random", "ball_approx")


class BodySpecError(ValueError):
    pass


def _get(spec, key, kind, default=None, required=True):
    if key not in spec:
        if required:
            raise BodySpecError(f"body spec of type {spec.get('type')!r} is missing {key!r}")
        return default
    value = spec[key]
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise BodySpecError(f"{key!r} must be an integer, got {value!r}")
    elif kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise BodySpecError(f"{key!r} must be a number, got {value!r}")
        value = float(value)
    return value


def _dim(spec):
    d = _get(spec, "dim", int)
    if not 1 <= d <= MAX_DIM:
        raise BodySpecError(f"'dim' must be between 1 and {MAX_DIM}, got {d}")
    return d


def body_from_spec(spec):
    if not isinstance(spec, dict):
        raise BodySpecError(f"body spec must be a JSON object, got {type(spec).__name__}")
    kind = spec.get("type")
    if kind not in TYPES:
        raise BodySpecError(f"unknown body type {kind!r}; expected one of {', '.join(TYPES)}")
    d = _dim(spec)
    try:
        if kind == "vertices":
            points = _get(spec, "points", list)
            if not isinstance(points, list) or not points:
                raise BodySpecError("'points' must be a nonempty list of coordinate lists")
            for p in points:
                if not isinstance(p, list) or len(p) != d:
                    raise BodySpecError(f"every point needs exactly {d} coordinates, got {p!r}")
            return convex_hull(np.array(points, dtype=np.float64), d)
        if kind == "ball":
            radius = _get(spec, "radius", float, 1.0, required=False)
            center = _get(spec, "center", list, None, required=False)
            return Ball(d, radius, center)
        if kind == "cube":
            side = _get(spec, "side", float, 1.0, required=False)
            if not side > 0:
                raise BodySpecError(f"'side' must be positive, got {side}")
            return cube(d, side)
        if kind == "simplex":
            return standard_simplex(d)
        if kind == "random":
            count = _get(spec, "vertices", int)
            seed = _get(spec, "seed", int, 0, required=False)
            return random_polytope(SampleStream(seed), d, count)
        radius = _get(spec, "radius", float, 1.0, required=False)
        points = _get(spec, "points", int, 200, required=False)
        seed = _get(spec, "seed", int, 0, required=False)
        return ball_approx(d, radius, points, seed)
    except BodySpecError:
        raise
    except (ValueError, TypeError) as exc:
        raise BodySpecError(f"invalid {kind} body: {exc}") from None


def load_body(path):
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise BodySpecError(f"cannot read {path}: {exc.strerror}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise BodySpecError(f"{path} is not valid UTF-8 JSON: {exc}") from None
    try:
        return body_from_spec(spec)
    except BodySpecError as exc:
        raise BodySpecError(f"{path}: {exc}") from None
