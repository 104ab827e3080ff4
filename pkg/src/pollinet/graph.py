"""Bipartite interaction graphs and the plant-level projection.

Rows are observation units (sessions), columns are the interacting class
(insects).  Matrices are dense float64 throughout and are frozen on
construction so they can be shared safely across replicate workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Array = np.ndarray


def _frozen(arr, dtype=np.float64) -> Array:
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class BipartiteGraph:
    """Binary incidence matrix plus covariates for both node sets.

    incidence: n1 x n2 matrix of {0,1}
    row_cov:   n1 x d1 row (session) covariates, float64
    col_cov:   n2 x d2 column (insect) covariates, float64
    """

    incidence: Array
    row_cov: Array
    col_cov: Array

    def __post_init__(self):
        b = _frozen(self.incidence)
        x1 = _frozen(self.row_cov)
        x2 = _frozen(self.col_cov)
        if b.ndim != 2 or x1.ndim != 2 or x2.ndim != 2:
            raise ValueError("incidence and covariates must be 2-D")
        if not np.all((b == 0.0) | (b == 1.0)):
            raise ValueError("incidence entries must be 0 or 1")
        if x1.shape[0] != b.shape[0]:
            raise ValueError(
                f"row covariates have {x1.shape[0]} rows, incidence has {b.shape[0]}"
            )
        if x2.shape[0] != b.shape[1]:
            raise ValueError(
                f"column covariates have {x2.shape[0]} rows, incidence has {b.shape[1]} columns"
            )
        if not (np.all(np.isfinite(x1)) and np.all(np.isfinite(x2))):
            raise ValueError("covariates must be finite")
        object.__setattr__(self, "incidence", b)
        object.__setattr__(self, "row_cov", x1)
        object.__setattr__(self, "col_cov", x2)

    @property
    def n_rows(self) -> int:
        return self.incidence.shape[0]

    @property
    def n_cols(self) -> int:
        return self.incidence.shape[1]

    @property
    def n_row_features(self) -> int:
        return self.row_cov.shape[1]


@dataclass(frozen=True)
class PlantAssignment:
    """One-hot membership of rows (sessions) to plant species.

    onehot: n1 x u binary matrix, exactly one 1 per row, no empty column.
    plant_ids: optional labels for the u plant columns.
    """

    onehot: Array
    plant_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        p = _frozen(self.onehot)
        if p.ndim != 2:
            raise ValueError("plant assignment must be 2-D")
        if not np.all((p == 0.0) | (p == 1.0)):
            raise ValueError("plant assignment entries must be 0 or 1")
        if not np.all(p.sum(axis=1) == 1.0):
            raise ValueError("each row must belong to exactly one plant")
        counts = p.sum(axis=0)
        if np.any(counts == 0.0):
            empty = int(np.argmin(counts))
            raise ValueError(f"plant column {empty} has no rows")
        object.__setattr__(self, "onehot", p)
        if self.plant_ids is not None:
            ids = tuple(str(s) for s in self.plant_ids)
            if len(ids) != p.shape[1]:
                raise ValueError("plant_ids length must match the number of plant columns")
            object.__setattr__(self, "plant_ids", ids)

    @property
    def n_plants(self) -> int:
        return self.onehot.shape[1]

    @property
    def labels(self) -> Array:
        """Integer plant index per row."""
        return np.argmax(self.onehot, axis=1)


@dataclass(frozen=True)
class NormalizedIncidence:
    """Degree-normalized incidence used by the encoder convolutions."""

    values: Array

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))


def normalize_incidence(b: Array) -> NormalizedIncidence:
    """Scale each entry by 1/sqrt(row degree * column degree).

    Isolated rows or columns would divide 0 by 0; those entries are defined
    as 0, so the result is finite for every binary matrix.
    """
    b = np.asarray(b, dtype=np.float64)
    row_deg = b.sum(axis=1)
    col_deg = b.sum(axis=0)
    row_scale = np.where(row_deg > 0.0, 1.0 / np.sqrt(np.maximum(row_deg, 1.0e-300)), 0.0)
    col_scale = np.where(col_deg > 0.0, 1.0 / np.sqrt(np.maximum(col_deg, 1.0e-300)), 0.0)
    return NormalizedIncidence(b * row_scale[:, None] * col_scale[None, :])


def project_plant_network(b: Array, plants: PlantAssignment) -> Array:
    """Collapse sessions to plants: entry (k, j) is 1 iff any session of
    plant k interacted with column j."""
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != plants.onehot.shape[0]:
        raise ValueError(
            f"incidence has {b.shape[0]} rows, plant assignment has {plants.onehot.shape[0]}"
        )
    hits = plants.onehot.T @ b
    return (hits > 0.0).astype(np.float64)


def plant_average_matrix(plants: PlantAssignment) -> Array:
    """Column-normalized membership: averaging sessions within each plant.

    Returns the n1 x u matrix whose column k holds 1/(sessions of plant k)
    on that plant's rows; transposing it maps session-level probabilities
    to plant-level means.
    """
    counts = plants.onehot.sum(axis=0)
    return plants.onehot / counts[None, :]


def connectivity(m: Array) -> float:
    """Mean of a probability (or binary) interaction matrix."""
    m = np.asarray(m, dtype=np.float64)
    if m.size == 0:
        raise ValueError("connectivity of an empty matrix is undefined")
    if np.any(m < 0.0) or np.any(m > 1.0) or not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must lie in [0, 1]")
    return float(m.mean())
