"""Feature attribution for scalar functionals of the row covariates.

Four methods, all operating on a functional object exposing value /
value_and_grad / value_rows_batch (see Functional):

* smoothed gradients: average gradient under per-column scaled noise
* gradient times input
* integrated gradients along a straight path from a baseline (midpoint rule)
* grouped Shapley regression: one kernel-weighted least squares per row
  group, where out-of-group rows sit at the column means and coalition
  membership decides which features of the group's rows are real

Scores are per covariate cell (row x feature) for the gradient family and
per (group x feature) for the Shapley method; aggregate_by_group averages
cell scores over each group's rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Array = np.ndarray

# regression weight of the empty and full coalitions, standing in for the
# infinite weight the Shapley kernel assigns them
KERNEL_WEIGHT_CAP = 1.0e4

DEFAULT_NOISE_SAMPLES = 50
DEFAULT_PATH_STEPS = 64
DEFAULT_COALITION_CAP = 2048

_COALITION_BLOCK = 32


class Functional:
    """Scalar function of an n1 x d1 covariate matrix.

    Subclasses implement value and value_and_grad; the batched variants
    have generic (slow) fallbacks that concrete functionals may override.
    """

    def value(self, x1: Array) -> float:
        raise NotImplementedError

    def value_and_grad(self, x1: Array) -> tuple[float, Array]:
        raise NotImplementedError

    def value_batch(self, xs) -> Array:
        return np.array([self.value(x) for x in xs])

    def value_rows_batch(self, x_base: Array, rows: Array, rows_values: Array) -> Array:
        out = np.empty(rows_values.shape[0])
        for t in range(rows_values.shape[0]):
            x = x_base.copy()
            x[rows] = rows_values[t]
            out[t] = self.value(x)
        return out


@dataclass(frozen=True)
class GroupPartition:
    """Assignment of rows to attribution groups (0..n_groups-1)."""

    labels: Array
    n_groups: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.intp)
        if labels.ndim != 1:
            raise ValueError("group labels must be a 1-D array")
        if self.n_groups < 1:
            raise ValueError("n_groups must be positive")
        if labels.size and (labels.min() < 0 or labels.max() >= self.n_groups):
            raise ValueError("group labels must lie in [0, n_groups)")
        counts = np.bincount(labels, minlength=self.n_groups)
        if np.any(counts == 0):
            raise ValueError(f"group {int(np.argmin(counts))} has no rows")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def single(cls, n_rows: int) -> "GroupPartition":
        return cls(np.zeros(n_rows, dtype=np.intp), 1)

    @classmethod
    def from_labels(cls, labels) -> "GroupPartition":
        labels = np.asarray(labels, dtype=np.intp)
        return cls(labels, int(labels.max()) + 1 if labels.size else 1)


@dataclass
class AttributionResult:
    """Scores from one method: per covariate cell and/or per group."""

    method: str
    per_cell: Array | None
    per_group: Array | None


def noise_scales(x1: Array, fraction: float = 0.1) -> Array:
    """Per-column noise standard deviation: fraction of the column range."""
    return fraction * (x1.max(axis=0) - x1.min(axis=0))


def smoothgrad(
    f: Functional,
    x1: Array,
    rng: np.random.Generator,
    k_samples: int = DEFAULT_NOISE_SAMPLES,
) -> AttributionResult:
    """Average gradient over noisy copies of the covariates."""
    if k_samples < 1:
        raise ValueError("k_samples must be positive")
    sigma = noise_scales(x1)
    acc = np.zeros_like(x1)
    for _ in range(k_samples):
        noisy = x1 + rng.standard_normal(x1.shape) * sigma
        _, grad = f.value_and_grad(noisy)
        acc += grad
    return AttributionResult("grad", acc / k_samples, None)


def grad_times_input(
    f: Functional,
    x1: Array,
    rng: np.random.Generator,
    k_samples: int = DEFAULT_NOISE_SAMPLES,
) -> AttributionResult:
    """Covariates times the smoothed gradient."""
    base = smoothgrad(f, x1, rng, k_samples)
    return AttributionResult("grad_input", x1 * base.per_cell, None)


def mean_baseline(x1: Array) -> Array:
    """Every row replaced by the column means."""
    return np.tile(x1.mean(axis=0), (x1.shape[0], 1))


def integrated_gradients(
    f: Functional,
    x1: Array,
    baseline: Array | None = None,
    m_steps: int = DEFAULT_PATH_STEPS,
) -> AttributionResult:
    """Path integral of the gradient from the baseline, midpoint rule."""
    if m_steps < 2:
        raise ValueError("m_steps must be at least 2")
    if baseline is None:
        baseline = mean_baseline(x1)
    if baseline.shape != x1.shape:
        raise ValueError("baseline shape must match the covariates")
    diff = x1 - baseline
    acc = np.zeros_like(x1)
    for t in range(1, m_steps + 1):
        alpha = (t - 0.5) / m_steps
        _, grad = f.value_and_grad(baseline + alpha * diff)
        acc += grad
    return AttributionResult("ig", diff * (acc / m_steps), None)


def shapley_kernel_weight(m: int, s: int) -> float:
    """Shapley kernel weight of a coalition of size s among m players;
    the infinite end weights are capped."""
    if s <= 0 or s >= m:
        return KERNEL_WEIGHT_CAP
    return (m - 1) / (math.comb(m, s) * s * (m - s))


def coalition_masks(
    m: int, n_coalitions: int | None, rng: np.random.Generator
) -> tuple[Array, Array]:
    """Coalition design for the Shapley regression.

    The empty and full coalitions are always rows 0 and 1.  When every
    coalition fits in the budget they are all enumerated with exact kernel
    weights; otherwise sizes are drawn from the kernel's size distribution
    (p(s) proportional to 1/(s(m-s))) with uniform member choice, making
    the correct regression weight a constant.
    """
    if m < 1:
        raise ValueError("need at least one player")
    exhaustive = m <= 20 and 2**m <= (n_coalitions or DEFAULT_COALITION_CAP)
    if n_coalitions is None:
        n_coalitions = min(2**m, DEFAULT_COALITION_CAP) if m <= 20 else DEFAULT_COALITION_CAP
    if not exhaustive and n_coalitions < m + 2:
        raise ValueError(f"n_coalitions must be at least players + 2 = {m + 2}")

    if exhaustive:
        indices = np.arange(2**m, dtype=np.int64)
        masks = (indices[:, None] >> np.arange(m)[None, :]) & 1 != 0
        # reorder so the empty and full coalitions come first
        sizes = masks.sum(axis=1)
        key = np.where(sizes == 0, 0, np.where(sizes == m, 1, 2))
        masks = masks[np.argsort(key, kind="stable")]
        weights = np.array([shapley_kernel_weight(m, int(s)) for s in masks.sum(axis=1)])
        return masks, weights

    sizes = np.arange(1, m)
    p = 1.0 / (sizes * (m - sizes))
    p /= p.sum()
    drawn = rng.choice(sizes, size=n_coalitions - 2, p=p)
    masks = np.zeros((n_coalitions, m), dtype=bool)
    masks[1, :] = True
    for t, s in enumerate(drawn):
        members = rng.permutation(m)[:s]
        masks[t + 2, members] = True
    weights = np.ones(n_coalitions)
    weights[0] = weights[1] = KERNEL_WEIGHT_CAP
    return masks, weights


def solve_weighted_shapley(masks: Array, weights: Array, values: Array) -> Array:
    """Weighted least squares of coalition values on membership indicators;
    returns the per-player coefficients (the intercept is dropped)."""
    m = masks.shape[1]
    design = np.column_stack([np.ones(masks.shape[0]), masks.astype(np.float64)])
    sw = np.sqrt(weights)
    coef, _, rank, _ = np.linalg.lstsq(design * sw[:, None], values * sw, rcond=None)
    if rank < m + 1:
        raise RuntimeError(
            f"Shapley regression is singular: rank {rank} for {m + 1} coefficients; "
            "increase n_coalitions"
        )
    return coef[1:]


def graphsvx(
    f: Functional,
    x1: Array,
    partition: GroupPartition,
    rng: np.random.Generator,
    n_coalitions: int | None = None,
) -> AttributionResult:
    """Grouped Shapley regression scores.

    For each group, rows outside the group are fixed at the column means
    and the group's rows mix true covariates (coalition members) with
    column means (non-members); the regression coefficient of feature j is
    its score for that group.
    """
    n1, d1 = x1.shape
    if partition.labels.shape[0] != n1:
        raise ValueError("partition size must match the covariate rows")
    base = mean_baseline(x1)
    base_row = base[0]
    per_group = np.empty((partition.n_groups, d1))
    for g in range(partition.n_groups):
        rows = np.flatnonzero(partition.labels == g)
        true_rows = x1[rows]
        masks, weights = coalition_masks(d1, n_coalitions, rng)
        values = np.empty(masks.shape[0])
        for start in range(0, masks.shape[0], _COALITION_BLOCK):
            stop = min(start + _COALITION_BLOCK, masks.shape[0])
            block = masks[start:stop]
            variants = np.where(block[:, None, :], true_rows[None, :, :], base_row[None, None, :])
            values[start:stop] = f.value_rows_batch(base, rows, variants)
        per_group[g] = solve_weighted_shapley(masks, weights, values)
    return AttributionResult("graphsvx", None, per_group)


def aggregate_by_group(per_cell: Array, partition: GroupPartition) -> Array:
    """Mean of per-cell scores over each group's rows."""
    if per_cell.shape[0] != partition.labels.shape[0]:
        raise ValueError("per-cell scores and partition disagree on row count")
    out = np.empty((partition.n_groups, per_cell.shape[1]))
    for g in range(partition.n_groups):
        out[g] = per_cell[partition.labels == g].mean(axis=0)
    return out


def estimate_sign(per_group: Array) -> Array:
    """Elementwise sign of group-level scores (-1, 0 or +1 integers)."""
    return np.sign(per_group).astype(np.int64)
