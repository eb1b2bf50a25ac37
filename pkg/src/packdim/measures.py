"""Finitely supported measures on R^m and the mass queries used everywhere
downstream: balls, axis rectangles, coordinate slices, pushforwards.

A DiscreteMeasure is a probability measure (weights sum to 1).  Slicing
produces a SubMeasure, which keeps the un-normalized total mass explicit
instead of silently renormalizing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, InvalidMapError

__all__ = [
    "DiscreteMeasure",
    "SubMeasure",
    "pushforward",
    "ball_mass",
    "rect_mass",
    "slice_measure",
    "write_measure_csv",
    "read_measure_csv",
]

_MASS_TOL = 1e-12
_MAX_ATOMS = 10**6


def _validate_support(atoms: np.ndarray, weights: np.ndarray, *, require_prob: bool):
    if atoms.ndim != 2:
        raise InvalidArgumentError("atoms must be a (k, m) array")
    k, m = atoms.shape
    if k == 0 or m == 0:
        raise InvalidArgumentError("measure needs at least one atom and one coordinate")
    if k > _MAX_ATOMS:
        raise InvalidArgumentError(f"atom count {k} exceeds the supported {_MAX_ATOMS}")
    if weights.shape != (k,):
        raise InvalidArgumentError("weights must be a (k,) array matching atoms")
    if not np.all(np.isfinite(atoms)):
        raise InvalidArgumentError("atom coordinates must be finite")
    if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
        raise InvalidArgumentError("weights must be finite and strictly positive")
    if len(np.unique(atoms, axis=0)) != k:
        raise InvalidArgumentError("atoms must be pairwise distinct")
    if require_prob and abs(float(weights.sum()) - 1.0) > _MASS_TOL:
        raise InvalidArgumentError(
            f"weights must sum to 1 within {_MASS_TOL}, got {float(weights.sum())!r}"
        )


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability measure with finitely many atoms in R^m."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.ascontiguousarray(np.asarray(self.atoms, dtype=float))
        weights = np.ascontiguousarray(np.asarray(self.weights, dtype=float))
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        _validate_support(atoms, weights, require_prob=True)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def count(self) -> int:
        return self.atoms.shape[0]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class SubMeasure:
    """Sub-probability measure: same layout, total mass in (0, 1] not
    enforced to equal 1.  A slice result is flagged by construction."""

    atoms: np.ndarray
    weights: np.ndarray
    sliced: bool = field(default=True)

    def __post_init__(self):
        atoms = np.ascontiguousarray(np.asarray(self.atoms, dtype=float))
        weights = np.ascontiguousarray(np.asarray(self.weights, dtype=float))
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        if atoms.shape[0] > 0:
            _validate_support(atoms, weights, require_prob=False)
        elif weights.shape != (0,):
            raise InvalidArgumentError("empty support needs empty weights")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def count(self) -> int:
        return self.atoms.shape[0]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum()) if self.count else 0.0


def pushforward(mu: DiscreteMeasure, h) -> DiscreteMeasure:
    """Image measure of mu under the map h.

    ``h`` takes one atom (a length-m array) and returns a finite vector.
    Atoms that land on exactly equal images are merged, their weights summed
    with math.fsum-grade accuracy; first-occurrence order is kept so the
    result is deterministic.
    """
    images = []
    for row in mu.atoms:
        y = np.asarray(h(row), dtype=float).reshape(-1)
        if y.size == 0 or not np.all(np.isfinite(y)):
            raise InvalidMapError(f"map produced a non-finite image for atom {row!r}")
        images.append(y)
    width = images[0].size
    if any(y.size != width for y in images):
        raise InvalidMapError("map must produce images of one common dimension")

    order: dict[bytes, int] = {}
    merged_atoms: list[np.ndarray] = []
    merged_weights: list[list[float]] = []
    for y, w in zip(images, mu.weights):
        key = y.tobytes()
        idx = order.get(key)
        if idx is None:
            order[key] = len(merged_atoms)
            merged_atoms.append(y)
            merged_weights.append([float(w)])
        else:
            merged_weights[idx].append(float(w))
    weights = np.array([np.sum(ws) if len(ws) > 1 else ws[0] for ws in merged_weights])
    return DiscreteMeasure(np.vstack(merged_atoms), weights)


def _check_point(mu, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != mu.dim:
        raise InvalidArgumentError(
            f"point dimension {x.size} does not match measure dimension {mu.dim}"
        )
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("query point must be finite")
    return x


def ball_mass(mu, x, r: float, norm: str = "euclidean") -> float:
    """Mass of the closed ball B(x, r) in the chosen norm."""
    x = _check_point(mu, x)
    if not (r >= 0):
        raise InvalidArgumentError("radius must be nonnegative")
    diff = mu.atoms - x
    if norm == "euclidean":
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    elif norm == "max":
        dist = np.abs(diff).max(axis=1)
    else:
        raise InvalidArgumentError(f"unknown norm {norm!r}")
    return float(mu.weights[dist <= r].sum())


def rect_mass(mu, x, halfwidths) -> float:
    """Mass of the closed axis rectangle prod_i [x_i - h_i, x_i + h_i]."""
    x = _check_point(mu, x)
    h = np.asarray(halfwidths, dtype=float).reshape(-1)
    if h.size == 1 and mu.dim > 1:
        h = np.full(mu.dim, float(h[0]))
    if h.size != mu.dim:
        raise InvalidArgumentError("halfwidths must match the measure dimension")
    if np.any(h < 0):
        raise InvalidArgumentError("halfwidths must be nonnegative")
    inside = np.all(np.abs(mu.atoms - x) <= h, axis=1)
    return float(mu.weights[inside].sum())


def slice_measure(mu: DiscreteMeasure, u, r: float, n: int | None = None) -> SubMeasure:
    """Restrict to atoms whose first n coordinates lie in the max-norm box
    D(u, r), then project onto the remaining coordinates.

    Weights are kept as-is: the result is a sub-probability measure whose
    total mass reports how much survived the slice.  n == 0 returns the
    whole measure (the empty condition holds vacuously).
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    if n is None:
        n = u.size
    if not (0 <= n < mu.dim):
        raise InvalidArgumentError("need 0 <= n < mu.dim")
    if u.size != n:
        raise InvalidArgumentError("slice center must have length n")
    if not (r >= 0):
        raise InvalidArgumentError("slice radius must be nonnegative")

    if n == 0:
        return SubMeasure(mu.atoms.copy(), mu.weights.copy())

    head = mu.atoms[:, :n]
    keep = np.all(np.abs(head - u) <= r, axis=1)
    tail_atoms = mu.atoms[keep, n:]
    weights = mu.weights[keep]
    # Distinct full atoms can project onto equal tails; merge them.
    if len(tail_atoms):
        order: dict[bytes, int] = {}
        rows: list[np.ndarray] = []
        sums: list[float] = []
        for row, w in zip(tail_atoms, weights):
            key = row.tobytes()
            idx = order.get(key)
            if idx is None:
                order[key] = len(rows)
                rows.append(row)
                sums.append(float(w))
            else:
                sums[idx] += float(w)
        tail_atoms = np.vstack(rows)
        weights = np.asarray(sums)
    return SubMeasure(tail_atoms, weights)


def write_measure_csv(mu, path) -> None:
    """CSV with header x1,...,xm,weight and one row per atom."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i + 1}" for i in range(mu.dim)] + ["weight"])
        for row, w in zip(mu.atoms, mu.weights):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(w))])


def read_measure_csv(path) -> DiscreteMeasure:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[-1] != "weight" or len(header) < 2:
            raise InvalidArgumentError("expected header x1,...,xm,weight")
        m = len(header) - 1
        if header[:m] != [f"x{i + 1}" for i in range(m)]:
            raise InvalidArgumentError("expected header x1,...,xm,weight")
        atoms = []
        weights = []
        for row in reader:
            if not row:
                continue
            if len(row) != m + 1:
                raise InvalidArgumentError(f"row width {len(row)} does not match header")
            atoms.append([float(v) for v in row[:m]])
            weights.append(float(row[m]))
    return DiscreteMeasure(np.asarray(atoms), np.asarray(weights))
