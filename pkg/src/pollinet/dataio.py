"""On-disk formats: dataset directories, run artifacts and report tables.

A dataset directory holds
    edges.csv           row_id,col_id            one line per interaction
    columns.csv         col_id                   full column roster
    row_covariates.csv  row_id,<feature...>      float64 covariates
    plants.csv          row_id,plant_id          only when plants exist
    groups.csv          row_id,group             attribution group per row
    ground_truth.csv    group,feature,expected_sign,is_signal
    protected.csv       row_id,value             only from ingestion
    manifest.json       seed, config hash, shapes, effect magnitudes

The roster file exists because an edge list alone cannot represent a
column that never interacts, and dropping such columns would change the
connectivity denominator after a round trip.  All floats are written with
repr(), which round-trips float64 exactly and keeps reruns byte-identical.
IDs are strings; loaders map them to contiguous indices in first-seen
order.  Ground truth is optional (ingested data has none).
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np

from .graph import BipartiteGraph, PlantAssignment
from .simulate import GroundTruth, SimSetting, SimulatedData

Array = np.ndarray

# thresholds of the land-cover filter: a category is kept when its
# proportion exceeds PROP_CUT in at least SESSION_CUT of the sessions
CLC_PROPORTION_CUT = 0.10
CLC_SESSION_CUT = 0.05


def _fmt(x) -> str:
    return repr(float(x))


def _write_rows(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read_rows(path) -> tuple[list[str], list[list[str]]]:
    if not os.path.exists(path):
        raise FileNotFoundError(f"missing input file: {path}")
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        try:
            header = next(r)
        except StopIteration:
            raise ValueError(f"{path} is empty") from None
        return header, [row for row in r if row]


def config_digest(payload) -> str:
    """Stable hash of any JSON-serializable configuration object."""
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def write_manifest(path, payload: dict) -> None:
    """JSON manifest; keys sorted, no timestamps, trailing newline."""
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_manifest(path) -> dict:
    if not os.path.exists(path):
        raise FileNotFoundError(f"missing input file: {path}")
    with open(path) as fh:
        return json.load(fh)


def default_row_ids(n: int) -> tuple[str, ...]:
    return tuple(f"s{i + 1:04d}" for i in range(n))


def default_col_ids(n: int) -> tuple[str, ...]:
    return tuple(f"i{i + 1:04d}" for i in range(n))


def write_dataset(out_dir, data: SimulatedData, setting: SimSetting, seed: int) -> None:
    """Write one simulated dataset as the directory layout above."""
    os.makedirs(out_dir, exist_ok=True)
    g = data.graph
    rows = default_row_ids(g.n_rows)
    cols = default_col_ids(g.n_cols)
    t = data.truth

    ii, jj = np.nonzero(g.incidence)
    _write_rows(
        os.path.join(out_dir, "edges.csv"),
        ["row_id", "col_id"],
        ([rows[i], cols[j]] for i, j in zip(ii, jj)),
    )
    _write_rows(os.path.join(out_dir, "columns.csv"), ["col_id"], ([c] for c in cols))
    _write_rows(
        os.path.join(out_dir, "row_covariates.csv"),
        ["row_id", *t.feature_names],
        ([rows[i], *map(_fmt, g.row_cov[i])] for i in range(g.n_rows)),
    )
    if data.plants is not None:
        ids = data.plants.plant_ids
        labels = data.plants.labels
        _write_rows(
            os.path.join(out_dir, "plants.csv"),
            ["row_id", "plant_id"],
            ([rows[i], ids[labels[i]]] for i in range(g.n_rows)),
        )
    _write_rows(
        os.path.join(out_dir, "groups.csv"),
        ["row_id", "group"],
        ([rows[i], t.group_names[data.group_labels[i]]] for i in range(g.n_rows)),
    )

    _write_rows(
        os.path.join(out_dir, "ground_truth.csv"),
        ["group", "feature", "expected_sign", "is_signal"],
        (
            [gname, fname, _fmt(t.expected_sign[k, j]), str(int(t.signal_mask[k, j]))]
            for k, gname in enumerate(t.group_names)
            for j, fname in enumerate(t.feature_names)
        ),
    )

    setting_payload = {
        "name": setting.name,
        "study": setting.study,
        "d_plus": setting.d_plus,
        "d_minus": setting.d_minus,
        "d_noise": setting.d_noise,
        "k_groups": setting.k_groups,
        "effect_values": list(setting.effect_values),
        "hsic_cols": setting.hsic_cols,
        "plants_in_h": setting.plants_in_h,
        "n_rows": setting.n_rows,
        "n_cols": setting.n_cols,
        "n_plants": setting.n_plants,
        "beta0": setting.beta0,
    }
    write_manifest(
        os.path.join(out_dir, "manifest.json"),
        {
            "kind": "dataset",
            "seed": int(seed),
            "config_hash": config_digest({"setting": setting_payload, "seed": int(seed)}),
            "setting": setting_payload,
            "n_rows": g.n_rows,
            "n_cols": g.n_cols,
            "x2_mode": "ones",
            "has_truth": True,
            "hsic_features": list(t.hsic_features),
            "effects": [[float(v) for v in row] for row in t.effects],
        },
    )


@dataclass(frozen=True)
class LoadedDataset:
    """A dataset directory back in memory."""

    graph: BipartiteGraph
    plants: PlantAssignment | None
    group_labels: Array
    truth: GroundTruth | None
    protected: Array | None
    row_ids: tuple[str, ...]
    col_ids: tuple[str, ...]
    feature_names: tuple[str, ...]
    group_names: tuple[str, ...]
    manifest: dict


def load_dataset(in_dir) -> LoadedDataset:
    manifest = read_manifest(os.path.join(in_dir, "manifest.json"))

    header, cov_rows = _read_rows(os.path.join(in_dir, "row_covariates.csv"))
    feature_names = tuple(header[1:])
    row_ids = tuple(r[0] for r in cov_rows)
    row_index = {rid: i for i, rid in enumerate(row_ids)}
    x1 = np.array([[float(v) for v in r[1:]] for r in cov_rows])

    _, col_rows = _read_rows(os.path.join(in_dir, "columns.csv"))
    col_ids = tuple(r[0] for r in col_rows)
    col_index = {cid: j for j, cid in enumerate(col_ids)}

    b = np.zeros((len(row_ids), len(col_ids)))
    _, edge_rows = _read_rows(os.path.join(in_dir, "edges.csv"))
    for rid, cid in edge_rows:
        if rid not in row_index:
            raise ValueError(f"edge references unknown row_id {rid!r}")
        if cid not in col_index:
            raise ValueError(f"edge references unknown col_id {cid!r}")
        b[row_index[rid], col_index[cid]] = 1.0
    graph = BipartiteGraph(b, x1, np.ones((len(col_ids), 1)))

    plants = None
    plants_path = os.path.join(in_dir, "plants.csv")
    if os.path.exists(plants_path):
        _, prows = _read_rows(plants_path)
        by_row = {rid: pid for rid, pid in prows}
        plant_ids = tuple(dict.fromkeys(by_row[rid] for rid in row_ids))
        pix = {pid: k for k, pid in enumerate(plant_ids)}
        onehot = np.zeros((len(row_ids), len(plant_ids)))
        for i, rid in enumerate(row_ids):
            onehot[i, pix[by_row[rid]]] = 1.0
        plants = PlantAssignment(onehot, plant_ids=plant_ids)

    truth = None
    group_names: tuple[str, ...]
    truth_path = os.path.join(in_dir, "ground_truth.csv")
    if os.path.exists(truth_path):
        _, trows = _read_rows(truth_path)
        group_names = tuple(dict.fromkeys(r[0] for r in trows))
        gix = {g: k for k, g in enumerate(group_names)}
        fix = {f: j for j, f in enumerate(feature_names)}
        k, d1 = len(group_names), len(feature_names)
        expected = np.zeros((k, d1))
        signal = np.zeros((k, d1), dtype=bool)
        for gname, fname, exp, sig in trows:
            cell = (gix[gname], fix[fname])
            expected[cell] = float(exp)
            signal[cell] = sig == "1"
        # the intercept and plant one-hots sit outside the scored set
        in_h = np.array(
            [f == "intercept" or f.startswith("plant:") for f in feature_names]
        )
        eval_mask = np.tile(~in_h, (k, 1))
        truth = GroundTruth(
            effects=np.asarray(manifest.get("effects", np.zeros((k, 0)))),
            expected_sign=expected,
            signal_mask=signal,
            eval_mask=eval_mask,
            feature_names=feature_names,
            group_names=group_names,
            hsic_features=tuple(int(c) for c in manifest.get("hsic_features", ())),
        )

    _, grows = _read_rows(os.path.join(in_dir, "groups.csv"))
    by_row = {rid: g for rid, g in grows}
    if truth is None:
        group_names = tuple(dict.fromkeys(by_row[rid] for rid in row_ids))
    gix = {g: k for k, g in enumerate(group_names)}
    group_labels = np.array([gix[by_row[rid]] for rid in row_ids], dtype=np.int64)

    protected = None
    prot_path = os.path.join(in_dir, "protected.csv")
    if os.path.exists(prot_path):
        _, prows = _read_rows(prot_path)
        vals = {rid: float(v) for rid, v in prows}
        protected = np.array([vals[rid] for rid in row_ids])[:, None]

    return LoadedDataset(
        graph=graph,
        plants=plants,
        group_labels=group_labels,
        truth=truth,
        protected=protected,
        row_ids=row_ids,
        col_ids=col_ids,
        feature_names=feature_names,
        group_names=group_names,
        manifest=manifest,
    )


def write_trace_csv(path, trace: list[dict]) -> None:
    fields = ["epoch", "total", "recon", "kl_row", "kl_col", "plant", "hsic"]
    _write_rows(path, fields, ([_fmt(t[f]) for f in fields] for t in trace))


def write_attributions(path, rows: list[dict]) -> None:
    """Per-cell scores; one line per (method, group, feature, run)."""
    _write_rows(
        path,
        ["method", "group", "feature", "score", "sign", "run_seed"],
        (
            [r["method"], r["group"], r["feature"], _fmt(r["score"]), str(r["sign"]), str(r["run_seed"])]
            for r in rows
        ),
    )


def read_attributions(path) -> list[dict]:
    header, rows = _read_rows(path)
    want = ["method", "group", "feature", "score", "sign", "run_seed"]
    if header != want:
        raise ValueError(f"{path}: expected columns {want}, found {header}")
    return [
        {
            "method": r[0],
            "group": r[1],
            "feature": r[2],
            "score": float(r[3]),
            "sign": int(r[4]),
            "run_seed": int(r[5]),
        }
        for r in rows
    ]


def write_scorecard(path, setting_name: str, summary: dict[str, dict[str, float]], methods) -> None:
    """Table-2 layout: one row per method with mean rates and AUC."""
    _write_rows(
        path,
        ["setting", "method", "plus", "minus", "auc"],
        (
            [
                setting_name,
                m,
                _fmt(summary[m]["plus"]),
                _fmt(summary[m]["minus"]),
                _fmt(summary[m]["auc"]),
            ]
            for m in methods
        ),
    )


def write_rank_report(path, report_rows: list[dict]) -> None:
    """Tables 5-8 layout, rows already sorted by median rank."""
    _write_rows(
        path,
        ["median_rank", "median_score", "plant", "feature", "grad_positive"],
        (
            [
                _fmt(r["median_rank"]),
                _fmt(r["median_score"]),
                r["group"],
                r["feature"],
                "" if r.get("grad_positive_rate") is None else _fmt(r["grad_positive_rate"]),
            ]
            for r in report_rows
        ),
    )


def write_per_run_csv(path, rows: list[dict]) -> None:
    fields = ["setting", "run", "method", "plus_rate", "minus_rate", "signal_auc", "link_auc"]
    _write_rows(
        path,
        fields,
        (
            [
                r["setting"],
                str(r["run"]),
                r["method"],
                _fmt(r["plus_rate"]),
                _fmt(r["minus_rate"]),
                _fmt(r["signal_auc"]),
                _fmt(r["link_auc"]),
            ]
            for r in rows
        ),
    )


def _zscore(col: Array) -> Array:
    sd = col.std()
    return (col - col.mean()) / (sd if sd > 0 else 1.0)


def spipoll_ingest(sessions_csv, covariates_csv, clc_csv):
    """Field-observation ingestion.

    sessions_csv is the edge list (row_id,col_id).  covariates_csv holds
    plant_id,day,year,delta_t,participations keyed by row_id.  clc_csv
    holds land-cover proportions keyed by row_id, one column per category.
    Returns (graph, plants, protected_column, meta) where the row
    covariates are [plant one-hot | day | year | delta_t | kept land-cover]
    with continuous columns standardized, and the protected column
    (participation count, standardized) stays out of the covariate matrix.
    """
    _, edge_rows = _read_rows(sessions_csv)
    header, cov_rows = _read_rows(covariates_csv)
    want = ["row_id", "plant_id", "day", "year", "delta_t", "participations"]
    if header != want:
        raise ValueError(f"{covariates_csv}: expected columns {want}, found {header}")

    row_ids = tuple(r[0] for r in cov_rows)
    row_index = {rid: i for i, rid in enumerate(row_ids)}
    n1 = len(row_ids)

    col_ids = tuple(dict.fromkeys(r[1] for r in edge_rows))
    col_index = {cid: j for j, cid in enumerate(col_ids)}
    b = np.zeros((n1, len(col_ids)))
    for rid, cid in edge_rows:
        if rid not in row_index:
            raise ValueError(f"session {rid!r} has an edge but no covariates")
        b[row_index[rid], col_index[cid]] = 1.0

    plant_ids = tuple(dict.fromkeys(r[1] for r in cov_rows))
    pix = {pid: k for k, pid in enumerate(plant_ids)}
    onehot = np.zeros((n1, len(plant_ids)))
    numerics = np.empty((n1, 3))
    protected = np.empty((n1, 1))
    for r in cov_rows:
        i = row_index[r[0]]
        onehot[i, pix[r[1]]] = 1.0
        numerics[i] = [float(r[2]), float(r[3]), float(r[4])]
        protected[i, 0] = float(r[5])
    plants = PlantAssignment(onehot, plant_ids=plant_ids)

    clc_header, clc_rows = _read_rows(clc_csv)
    if clc_header[0] != "row_id":
        raise ValueError(f"{clc_csv}: first column must be row_id")
    categories = clc_header[1:]
    clc = np.zeros((n1, len(categories)))
    seen = set()
    for r in clc_rows:
        if r[0] not in row_index:
            raise ValueError(f"land-cover row {r[0]!r} matches no session")
        seen.add(r[0])
        clc[row_index[r[0]]] = [float(v) for v in r[1:]]
    missing = [rid for rid in row_ids if rid not in seen]
    if missing:
        raise ValueError(f"missing land-cover rows for sessions: {missing[:5]}")

    # keep a category when its proportion is large often enough;
    # both cuts are inclusive on the session side
    frequent = (clc > CLC_PROPORTION_CUT).mean(axis=0) >= CLC_SESSION_CUT
    kept = [c for c, keep in zip(categories, frequent) if keep]
    clc_kept = clc[:, frequent]

    x1 = np.hstack(
        [onehot]
        + [_zscore(numerics[:, [j]]) for j in range(3)]
        + ([_zscore(clc_kept[:, [j]]) for j in range(clc_kept.shape[1])] if kept else [])
    )
    feature_names = tuple(
        [f"plant:{pid}" for pid in plant_ids] + ["day", "year", "delta_t"] + [f"clc:{c}" for c in kept]
    )
    graph = BipartiteGraph(b, x1, np.ones((len(col_ids), 1)))
    meta = {
        "row_ids": row_ids,
        "col_ids": col_ids,
        "feature_names": feature_names,
        "kept_clc": tuple(kept),
        "dropped_clc": tuple(c for c, keep in zip(categories, frequent) if not keep),
    }
    return graph, plants, _zscore(protected), meta


def write_ingested_dataset(out_dir, graph, plants, protected, meta) -> None:
    """Persist an ingested dataset in the same directory layout."""
    os.makedirs(out_dir, exist_ok=True)
    rows, cols = meta["row_ids"], meta["col_ids"]
    ii, jj = np.nonzero(graph.incidence)
    _write_rows(
        os.path.join(out_dir, "edges.csv"),
        ["row_id", "col_id"],
        ([rows[i], cols[j]] for i, j in zip(ii, jj)),
    )
    _write_rows(os.path.join(out_dir, "columns.csv"), ["col_id"], ([c] for c in cols))
    _write_rows(
        os.path.join(out_dir, "row_covariates.csv"),
        ["row_id", *meta["feature_names"]],
        ([rows[i], *map(_fmt, graph.row_cov[i])] for i in range(graph.n_rows)),
    )
    ids = plants.plant_ids
    labels = plants.labels
    _write_rows(
        os.path.join(out_dir, "plants.csv"),
        ["row_id", "plant_id"],
        ([rows[i], ids[labels[i]]] for i in range(graph.n_rows)),
    )
    _write_rows(
        os.path.join(out_dir, "groups.csv"),
        ["row_id", "group"],
        ([rows[i], ids[labels[i]]] for i in range(graph.n_rows)),
    )
    _write_rows(
        os.path.join(out_dir, "protected.csv"),
        ["row_id", "value"],
        ([rows[i], _fmt(protected[i, 0])] for i in range(graph.n_rows)),
    )
    write_manifest(
        os.path.join(out_dir, "manifest.json"),
        {
            "kind": "dataset",
            "config_hash": config_digest({"kept_clc": list(meta["kept_clc"])}),
            "n_rows": graph.n_rows,
            "n_cols": graph.n_cols,
            "x2_mode": "ones",
            "has_truth": False,
            "kept_clc": list(meta["kept_clc"]),
            "dropped_clc": list(meta["dropped_clc"]),
        },
    )
