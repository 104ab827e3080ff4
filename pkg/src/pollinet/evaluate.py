"""Benchmark harness: attribution metrics and multi-run evaluation.

Scores every requested attribution method against the ground truth of a
synthetic setting, over several independent replicates.  Each replicate
draws its own dataset, trains its own model and runs every method with an
independent random stream, so replicates and methods can be added or
removed without disturbing each other's randomness.

Metrics per run and method:

* plus / minus rate: fraction of group-by-feature cells whose expected
  sign is +1 (resp. -1) where the estimated sign agrees
* signal AUC: rank AUC of absolute scores, signal cells versus noise
  cells, inside the evaluated region
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .attribution import (
    GroupPartition,
    aggregate_by_group,
    estimate_sign,
    grad_times_input,
    graphsvx,
    integrated_gradients,
    smoothgrad,
)
from .model import (
    ConnectivityFunctional,
    ModelConfig,
    TrainedModel,
    TrainingDiverged,
    predict_edge_probabilities,
    train,
)
from .simulate import SimSetting, generate

Array = np.ndarray

METHODS = ("grad", "grad_input", "ig", "graphsvx")

# penalty strength used by default when a setting asks for debiasing; the
# warmup keeps the first half of training penalty-free, which avoids the
# constant-embedding trap a cold-started penalty falls into
DEFAULT_HSIC_WEIGHT = 20.0
DEFAULT_HSIC_WARMUP = 150

_STREAM_DATA = 0
_STREAM_MODEL = 1
_STREAM_METHOD_BASE = 2


def rank_auc(scores, labels) -> float:
    """Rank AUC with midranks for ties (probability that a random positive
    outscores a random negative, ties counted half)."""
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels).ravel().astype(bool)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must have the same length")
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("rank AUC needs both classes present")
    _, inverse, counts = np.unique(scores, return_inverse=True, return_counts=True)
    starts = np.concatenate(([0.0], np.cumsum(counts[:-1])))
    ranks = (starts + (counts + 1) / 2.0)[inverse]
    return float((ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def sign_rates(est_sign: Array, expected_sign: Array, eval_mask: Array) -> tuple[float, float]:
    """Agreement rates on the cells expected positive and expected negative;
    nan when a side has no cells."""
    rates = []
    for target in (1, -1):
        cells = eval_mask & (expected_sign == target)
        rates.append(float(np.mean(est_sign[cells] == target)) if cells.any() else float("nan"))
    return rates[0], rates[1]


def signal_auc(per_group: Array, signal_mask: Array, eval_mask: Array) -> float:
    """Rank AUC of absolute scores, signal versus noise, over evaluated cells."""
    return rank_auc(np.abs(per_group[eval_mask]), signal_mask[eval_mask])


def link_auc(model: TrainedModel, graph) -> float:
    """Rank AUC of predicted edge probabilities against the incidence."""
    return rank_auc(predict_edge_probabilities(model, graph).ravel(), graph.incidence.ravel())


def default_model_config(setting: SimSetting) -> ModelConfig:
    """Training configuration matched to a synthetic setting."""
    debias = setting.hsic_cols > 0
    return ModelConfig(
        d_plus=setting.d_plus,
        d_minus=setting.d_minus,
        plant_reconstruction=setting.study == 2,
        hsic_weight=DEFAULT_HSIC_WEIGHT if debias else 0.0,
        hsic_warmup=DEFAULT_HSIC_WARMUP if debias else 0,
    )


@dataclass
class RunRecord:
    """Everything retained from one replicate."""

    run: int
    scores: dict[str, Array]
    signs: dict[str, Array]
    metrics: dict[str, dict[str, float]]
    expected_sign: Array
    signal_mask: Array
    eval_mask: Array
    link_auc: float


@dataclass
class BenchmarkResult:
    setting_name: str
    methods: tuple[str, ...]
    records: list[RunRecord] = field(default_factory=list)
    excluded: list[tuple[int, str]] = field(default_factory=list)
    feature_names: tuple[str, ...] = ()
    group_names: tuple[str, ...] = ()

    @property
    def n_completed(self) -> int:
        return len(self.records)

    def metric_values(self, method: str, metric: str) -> Array:
        return np.array([r.metrics[method][metric] for r in self.records])

    def summary(self) -> dict[str, dict[str, float]]:
        """Per-method means over completed runs (nan cells ignored)."""
        out = {}
        for method in self.methods:
            out[method] = {
                metric: float(np.nanmean(self.metric_values(method, metric)))
                for metric in ("plus", "minus", "auc")
            }
        return out

    def per_run_rows(self) -> list[dict]:
        rows = []
        for rec in self.records:
            for method in self.methods:
                rows.append(
                    {
                        "setting": self.setting_name,
                        "run": rec.run,
                        "method": method,
                        "plus_rate": rec.metrics[method]["plus"],
                        "minus_rate": rec.metrics[method]["minus"],
                        "signal_auc": rec.metrics[method]["auc"],
                        "link_auc": rec.link_auc,
                    }
                )
        return rows


def _method_rng(base_seed: int, run: int, method: str) -> np.random.Generator:
    stream = _STREAM_METHOD_BASE + METHODS.index(method)
    return np.random.default_rng(np.random.SeedSequence([base_seed, run, stream]))


def attribute_all(
    functional,
    x1: Array,
    partition: GroupPartition,
    methods=METHODS,
    rng_for=None,
    method_options: dict | None = None,
) -> dict[str, Array]:
    """Group-level scores for each requested method.

    rng_for maps a method name to its generator; by default every call
    shares one fresh generator (fine for single shots, not for replicated
    studies, which pass per-method streams).
    """
    if rng_for is None:
        shared = np.random.default_rng(0)
        rng_for = lambda method: shared
    opts = method_options or {}
    scores: dict[str, Array] = {}
    for method in methods:
        kw = dict(opts.get(method, {}))
        if method == "grad":
            res = smoothgrad(functional, x1, rng_for(method), **kw)
            scores[method] = aggregate_by_group(res.per_cell, partition)
        elif method == "grad_input":
            res = grad_times_input(functional, x1, rng_for(method), **kw)
            scores[method] = aggregate_by_group(res.per_cell, partition)
        elif method == "ig":
            res = integrated_gradients(functional, x1, **kw)
            scores[method] = aggregate_by_group(res.per_cell, partition)
        elif method == "graphsvx":
            res = graphsvx(functional, x1, partition, rng_for(method), **kw)
            scores[method] = res.per_group
        else:
            raise ValueError(f"unknown attribution method {method!r}")
    return scores


def run_benchmark(
    setting: SimSetting,
    n_runs: int = 10,
    base_seed: int = 0,
    methods=METHODS,
    config: ModelConfig | None = None,
    method_options: dict | None = None,
    run_indices=None,
) -> BenchmarkResult:
    """Replicated evaluation of attribution methods on one setting.

    Per run: fresh dataset, fresh model, fresh method streams, all hanging
    off (base_seed, run).  Runs whose training diverges are excluded and
    listed in the result.  run_indices restricts the loop to specific
    replicate indices; every run is seeded by its index alone, so a
    partitioned sweep merged back together matches the sequential one.
    """
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown attribution method {m!r}")
    result = BenchmarkResult(setting_name=setting.name, methods=methods)
    base_config = config if config is not None else default_model_config(setting)

    runs = range(n_runs) if run_indices is None else [int(r) for r in run_indices]
    for run in runs:
        data_rng = np.random.default_rng(np.random.SeedSequence([base_seed, run, _STREAM_DATA]))
        data = generate(setting, data_rng)
        if not result.feature_names:
            result.feature_names = data.truth.feature_names
            result.group_names = data.truth.group_names

        model_seed = int(
            np.random.SeedSequence([base_seed, run, _STREAM_MODEL]).generate_state(1)[0]
        )
        cfg = replace(
            base_config,
            seed=model_seed,
            hsic_columns=data.truth.hsic_features if base_config.hsic_weight > 0 else (),
        )
        try:
            model = train(data.graph, cfg, data.plants)
        except TrainingDiverged as exc:
            result.excluded.append((run, str(exc)))
            continue

        functional = ConnectivityFunctional(model, data.graph, data.plants)
        partition = GroupPartition(data.group_labels, data.truth.n_groups)
        scores = attribute_all(
            functional,
            data.graph.row_cov,
            partition,
            methods=methods,
            rng_for=lambda m: _method_rng(base_seed, run, m),
            method_options=method_options,
        )

        signs = {m: estimate_sign(s) for m, s in scores.items()}
        metrics = {}
        for m in methods:
            plus, minus = sign_rates(signs[m], data.truth.expected_sign, data.truth.eval_mask)
            metrics[m] = {
                "plus": plus,
                "minus": minus,
                "auc": signal_auc(scores[m], data.truth.signal_mask, data.truth.eval_mask),
            }
        result.records.append(
            RunRecord(
                run=run,
                scores=scores,
                signs=signs,
                metrics=metrics,
                expected_sign=data.truth.expected_sign,
                signal_mask=data.truth.signal_mask,
                eval_mask=data.truth.eval_mask,
                link_auc=link_auc(model, data.graph),
            )
        )
    return result


def _rank_within_rows(scores: Array) -> Array:
    """1-based rank of each |score| inside its row, largest first, ties by
    feature position."""
    ranks = np.empty_like(scores, dtype=np.float64)
    for g in range(scores.shape[0]):
        order = np.argsort(-np.abs(scores[g]), kind="stable")
        ranks[g, order] = np.arange(1, scores.shape[1] + 1)
    return ranks


def median_rank_rows(
    scores_by_method: dict[str, list[Array]],
    feature_names,
    group_names,
    rank_method: str = "ig",
    sign_method: str = "grad",
) -> list[dict]:
    """Per (group, feature) ranking table across replicates.

    Features are ranked by absolute score within each group and run; the
    table reports the median rank and median score across runs, plus the
    fraction of runs where the sign method scored the cell positive.
    Plant-membership columns are dropped except in their own plant's group.
    """
    if rank_method not in scores_by_method:
        raise ValueError(f"no scores for rank method {rank_method!r}")
    stack = np.stack(scores_by_method[rank_method])  # runs x K x d1
    ranks = np.stack([_rank_within_rows(s) for s in stack])
    sign_stack = None
    if sign_method in scores_by_method:
        sign_stack = np.stack(scores_by_method[sign_method])

    rows = []
    for g, gname in enumerate(group_names):
        for j, fname in enumerate(feature_names):
            if fname.startswith("plant:") and fname[len("plant:"):] != gname:
                continue
            row = {
                "group": gname,
                "feature": fname,
                "median_rank": float(np.median(ranks[:, g, j])),
                "median_score": float(np.median(stack[:, g, j])),
                "n_runs": stack.shape[0],
            }
            if sign_stack is not None:
                row["grad_positive_rate"] = float(np.mean(sign_stack[:, g, j] > 0))
            rows.append(row)
    rows.sort(key=lambda r: (r["median_rank"], r["group"], r["feature"]))
    return rows


def median_rank_report(
    result: BenchmarkResult, rank_method: str = "ig", sign_method: str = "grad"
) -> list[dict]:
    """Ranking table from a benchmark result's retained scores."""
    scores_by_method = {
        m: [rec.scores[m] for rec in result.records] for m in result.methods
    }
    return median_rank_rows(
        scores_by_method,
        result.feature_names,
        result.group_names,
        rank_method=rank_method,
        sign_method=sign_method,
    )
