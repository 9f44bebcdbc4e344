"""Scenario files: JSON description of (F, h, β, grid) plus command defaults."""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .beta import BetaDatum, validate_beta
from .embeddings import check_h_point, h_grid
from .errors import BtembedError, SchemaError, ValidationError
from .hermitian import HermitianSpace, make_witt_space
from .laurent import Field, scalar_from_json
from .lattice_functions import LatticeFunction, point_from_json
from .matrix import Matrix

SUPPORTED_VERSIONS = (1,)

_scalar = {"oneOf": [{"type": "integer"}, {"type": "array", "minItems": 2, "maxItems": 3}]}
_matrix = {"type": "array", "items": {"type": "array", "items": _scalar}}
_point = {
    "type": "object",
    "required": ["alpha"],
    "properties": {"alpha": {"type": "array", "items": {"type": ["string", "integer"]}},
                   "transform": {"oneOf": [{"const": "identity"}, _matrix]}},
}

SCHEMA = {
    "type": "object",
    "required": ["version", "id", "field", "hermitian", "beta"],
    "properties": {
        "version": {"type": "integer"},
        "id": {"type": "string"},
        "field": {
            "type": "object",
            "required": ["q"],
            "properties": {"q": {"type": "integer", "minimum": 3}, "precision": {"type": "integer", "minimum": 4}},
        },
        "hermitian": {
            "type": "object",
            "required": ["n", "witt_rank", "epsilon"],
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "witt_rank": {"type": "integer", "minimum": 0},
                "epsilon": {"enum": [1, -1]},
                "anisotropic_units": {"type": "array", "items": _scalar},
            },
        },
        "beta": {
            "type": "object",
            "required": ["matrix", "components"],
            "properties": {
                "matrix": _matrix,
                "components": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["min_poly"],
                        "properties": {
                            "min_poly": {"type": "array", "items": _scalar},
                            "e": {"type": "integer", "minimum": 1},
                            "f": {"type": "integer", "minimum": 1},
                            "uniformizer": _matrix,
                            "unit_generator": _matrix,
                            "h_i": _matrix,
                        },
                    },
                },
            },
        },
        "flags": {"type": "object", "properties": {"has_gl1_factor": {"type": "boolean"}}},
        "grid": {
            "type": "object",
            "properties": {"n": {"type": "integer", "minimum": 1}, "k": {"type": "integer", "minimum": 0}},
        },
        "defaults": {
            "type": "object",
            "properties": {"x": {"type": "object", "additionalProperties": _point}, "seed": {"type": "integer"}},
        },
    },
}


@dataclass
class Scenario:
    id: str
    field: Field
    space: HermitianSpace
    datum: BetaDatum
    grid_n: int = 4
    grid_k: int = 4
    defaults: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    def default_x(self) -> dict:
        data = self.defaults.get("x")
        if data is None:
            return h_grid(self.datum, self.grid_n, self.grid_k)[0]
        return parse_h_point(self, data)

    def grid_points(self) -> list[dict]:
        key = (self.grid_n, self.grid_k)
        cache = self.__dict__.setdefault("_grid", {})
        if key not in cache:
            cache[key] = h_grid(self.datum, *key)
        return cache[key]

    def random_points(self, count: int, seed: int = 0) -> list[dict]:
        """``count`` grid points of the building of H, drawn with replacement."""
        pts = self.grid_points()
        rng = random.Random(seed)
        return [pts[rng.randrange(len(pts))] for _ in range(count)]


def parse_h_point(scenario: Scenario, data: dict) -> dict:
    try:
        x = {int(i): point_from_json(scenario.field, p) for i, p in data.items()}
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad point: {exc}", "point") from exc
    return x


def parse_point(scenario: Scenario, data: dict) -> LatticeFunction:
    try:
        return point_from_json(scenario.field, data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad point: {exc}", "point") from exc


def _matrix(field_: Field, data, where: str) -> Matrix:
    try:
        return Matrix.from_json(field_, data)
    except (TypeError, ValueError, IndexError) as exc:
        raise ValidationError(str(exc), where) from exc


def build_scenario(data: Any) -> Scenario:
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{loc}: {exc.message}") from exc
    if data["version"] not in SUPPORTED_VERSIONS:
        raise SchemaError(f"unsupported schema version {data['version']}")

    fd = data["field"]
    try:
        prec = None if os.environ.get("BTEMBED_PRECISION") else fd.get("precision")
        F = Field(fd["q"], prec)
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc), "field") from exc

    hd = data["hermitian"]
    try:
        D = [scalar_from_json(F, d) for d in hd.get("anisotropic_units", [])]
        space = make_witt_space(F, hd["n"], hd["witt_rank"], hd["epsilon"], D)
    except (BtembedError, ValueError) as exc:
        raise ValidationError(str(exc), "hermitian") from exc

    bd = data["beta"]
    beta = _matrix(F, bd["matrix"], "beta.matrix")
    comps = []
    for k, c in enumerate(bd["components"]):
        where = f"beta.components[{k}]"
        entry = {"min_poly": [scalar_from_json(F, a) for a in c["min_poly"]],
                 "e": c.get("e", 1), "f": c.get("f", 1)}
        for key in ("uniformizer", "unit_generator", "h_i"):
            if key in c:
                entry[key] = _matrix(F, c[key], f"{where}.{key}")
        comps.append(entry)
    flag = data.get("flags", {}).get("has_gl1_factor")
    try:
        datum = validate_beta(space, beta, comps, flag)
    except (BtembedError, ValueError) as exc:
        raise ValidationError(str(exc), "beta") from exc

    grid = data.get("grid", {})
    sc = Scenario(data["id"], F, space, datum, grid.get("n", 4), grid.get("k", 4),
                  data.get("defaults", {}), data)
    if "x" in sc.defaults:
        try:
            check_h_point(datum, sc.default_x())
        except BtembedError as exc:
            raise ValidationError(str(exc), "defaults.x") from exc
    return sc


def load_scenario(path) -> Scenario:
    """Read, schema-check and fully validate a scenario file.

    A bare name such as ``"herm4"`` resolves to the bundled scenario.
    """
    p = Path(path)
    if not p.exists() and p.suffix == "" and str(path) in bundled_names():
        p = bundled_path(str(path))
    try:
        text = p.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return build_scenario(data)


def bundled_names() -> list[str]:
    root = resources.files("btembed") / "scenarios"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".json"))


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("btembed") / "scenarios" / f"{name}.json"))
