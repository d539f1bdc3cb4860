"""Finite measure spaces, scalar fields, and integration.

The measure space is a finite list of atoms with strictly positive
weights. Integration is an exact weighted sum: products are formed in
ascending point order and accumulated with ``math.fsum`` (correctly
rounded), so every expectation is bit-reproducible across runs.

This finite-atom model is a deliberate discretization of the continuous
setting: on finitely many atoms every positive unit-mass field is a
density and all the function-space inclusions collapse, which is
strictly stronger than the non-atomic picture the theory is stated in.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import DomainError, StructuralError

DEFAULT_DENSITY_TOL = 1e-10


def _as_vector(values: Any, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise StructuralError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise StructuralError(f"{what} must be non-empty")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """Ordered finite point set with a positive weight per point."""

    point_ids: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        ids = tuple(str(i) for i in self.point_ids)
        arr = _as_vector(self.weights, "weights")
        if len(ids) != arr.size:
            raise StructuralError(f"{len(ids)} point ids but {arr.size} weights")
        if len(set(ids)) != len(ids):
            raise StructuralError("point ids must be unique")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise DomainError("weights must be finite and strictly positive")
        object.__setattr__(self, "point_ids", ids)
        object.__setattr__(self, "weights", arr)

    @property
    def n_points(self) -> int:
        return len(self.point_ids)

    def __len__(self) -> int:
        return self.n_points

    def __eq__(self, other) -> bool:
        if other is self:
            return True
        if not isinstance(other, MeasureSpace):
            return NotImplemented
        return self.point_ids == other.point_ids and np.array_equal(self.weights, other.weights)

    def __repr__(self) -> str:
        return f"MeasureSpace(n={self.n_points}, total_mass={math.fsum(self.weights.tolist()):g})"

    @classmethod
    def unit(cls, n: int) -> "MeasureSpace":
        """Space of n points, unit weight each, ids '0'..'n-1'."""
        return cls(tuple(str(i) for i in range(n)), np.ones(n))

    # ---- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {"points": list(self.point_ids), "weights": [float(w) for w in self.weights]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MeasureSpace":
        try:
            return cls(tuple(obj["points"]), obj["weights"])
        except KeyError as exc:
            raise StructuralError(f"measure space JSON is missing key {exc}") from exc

    def save_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_obj()) + "\n")

    @classmethod
    def load_json(cls, path: str | Path) -> "MeasureSpace":
        return cls.from_json_obj(_read_json(path))

    def save_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "weight"])
            for pid, w in zip(self.point_ids, self.weights):
                writer.writerow([pid, f"{w:.17g}"])

    @classmethod
    def load_csv(cls, path: str | Path) -> "MeasureSpace":
        rows = _read_csv_rows(path, "weight")
        return cls(tuple(r[0] for r in rows), [r[1] for r in rows])


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One finite real value per point of a measure space."""

    space: MeasureSpace
    values: np.ndarray

    def __post_init__(self):
        arr = _as_vector(self.values, "values")
        if arr.size != self.space.n_points:
            raise StructuralError(
                f"field has {arr.size} values but its space has {self.space.n_points} points")
        if not np.all(np.isfinite(arr)):
            raise DomainError("field values must all be finite (no NaN or +-inf)")
        object.__setattr__(self, "values", arr)

    @classmethod
    def constant(cls, space: MeasureSpace, x: float) -> "ScalarField":
        return cls(space, np.full(space.n_points, float(x)))

    @classmethod
    def zeros(cls, space: MeasureSpace) -> "ScalarField":
        return cls.constant(space, 0.0)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __eq__(self, other) -> bool:
        if other is self:
            return True
        if not isinstance(other, ScalarField):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"ScalarField({np.array2string(self.values, precision=6, threshold=8)})"

    # ---- pointwise arithmetic (results stay on the same space) ------------

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, ScalarField):
            if not (other.space is self.space or other.space == self.space):
                raise StructuralError("fields live on different measure spaces")
            return other.values
        return np.asarray(float(other))

    def __add__(self, other):
        return ScalarField(self.space, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ScalarField(self.space, self.values - self._coerce(other))

    def __rsub__(self, other):
        return ScalarField(self.space, self._coerce(other) - self.values)

    def __mul__(self, other):
        return ScalarField(self.space, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ScalarField(self.space, self.values / self._coerce(other))

    def __neg__(self):
        return ScalarField(self.space, -self.values)

    # ---- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {"values": [float(v) for v in self.values]}

    @classmethod
    def from_json_obj(cls, obj: dict, space: MeasureSpace) -> "ScalarField":
        try:
            return cls(space, obj["values"])
        except KeyError as exc:
            raise StructuralError(f"field JSON is missing key {exc}") from exc

    def save_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_obj()) + "\n")

    @classmethod
    def load_json(cls, path: str | Path, space: MeasureSpace) -> "ScalarField":
        return cls.from_json_obj(_read_json(path), space)

    def save_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "value"])
            for pid, v in zip(self.space.point_ids, self.values):
                writer.writerow([pid, f"{v:.17g}"])

    @classmethod
    def load_csv(cls, path: str | Path, space: MeasureSpace) -> "ScalarField":
        rows = _read_csv_rows(path, "value")
        ids = tuple(r[0] for r in rows)
        if ids != space.point_ids:
            raise StructuralError("CSV point ids do not match the space's point ids")
        return cls(space, [r[1] for r in rows])


# ---- integration -----------------------------------------------------------


def _require_field(space: MeasureSpace, f: ScalarField, name: str) -> None:
    if not isinstance(f, ScalarField):
        raise StructuralError(f"{name} must be a ScalarField")
    if not (f.space is space or f.space == space):
        raise StructuralError(f"{name} does not belong to the given measure space")


def weighted_sum(values: np.ndarray, weights: np.ndarray) -> float:
    """fsum of values*weights in ascending point order; +inf passes through."""
    return math.fsum((values * weights).tolist())


def expectation(space: MeasureSpace, f: ScalarField) -> float:
    """Integral of f against the space's weights."""
    _require_field(space, f, "f")
    return weighted_sum(f.values, space.weights)


def is_density(space: MeasureSpace, p: ScalarField, tol: float = DEFAULT_DENSITY_TOL) -> bool:
    """True iff p is strictly positive and integrates to 1 within tol."""
    _require_field(space, p, "p")
    if not np.all(p.values > 0.0):
        return False
    return abs(weighted_sum(p.values, space.weights) - 1.0) <= tol


def expectation_wrt(space: MeasureSpace, p: ScalarField, f: ScalarField) -> float:
    """Integral of f against the reweighted measure p*mu."""
    _require_field(space, f, "f")
    if not is_density(space, p):
        raise DomainError("p is not a probability density on this space")
    return weighted_sum(f.values * p.values, space.weights)


# ---- spec-string resolution (shared by chart files and the CLI) -------------


def _read_json(path: str | Path) -> dict:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise StructuralError(f"{path}: expected a JSON object")
    return obj


def _read_csv_rows(path: str | Path, value_header: str) -> list[tuple[str, float]]:
    rows: list[tuple[str, float]] = []
    with open(path, newline="") as fh:
        for raw in csv.reader(fh):
            if not raw:
                continue
            if len(raw) != 2:
                raise StructuralError(f"{path}: expected two columns per row, got {raw!r}")
            if rows == [] and raw[1].strip().lower() == value_header:
                continue  # optional header row
            try:
                rows.append((raw[0], float(raw[1])))
            except ValueError as exc:
                raise StructuralError(f"{path}: non-numeric value {raw[1]!r}") from exc
    if not rows:
        raise StructuralError(f"{path}: no data rows")
    return rows


def space_from_spec(spec: dict | str, base_dir: str | Path = ".") -> MeasureSpace:
    """Resolve an inline JSON object or a .json/.csv file path to a space."""
    if isinstance(spec, dict):
        return MeasureSpace.from_json_obj(spec)
    path = Path(base_dir) / str(spec)
    if path.suffix.lower() == ".csv":
        return MeasureSpace.load_csv(path)
    return MeasureSpace.load_json(path)


def field_from_spec(spec: dict | str, space: MeasureSpace,
                    base_dir: str | Path = ".") -> ScalarField:
    """Resolve a field spec: inline object, 'zero', 'const:X', or a file path."""
    if isinstance(spec, dict):
        return ScalarField.from_json_obj(spec, space)
    text = str(spec)
    if text == "zero":
        return ScalarField.zeros(space)
    if text.startswith("const:"):
        try:
            return ScalarField.constant(space, float(text.split(":", 1)[1]))
        except ValueError as exc:
            raise StructuralError(f"bad constant field spec {text!r}") from exc
    path = Path(base_dir) / text
    if path.suffix.lower() == ".csv":
        return ScalarField.load_csv(path, space)
    return ScalarField.load_json(path, space)
