"""Command-line pipeline around the library.

Subcommands cover the whole workflow: simulate | train | attribute |
benchmark | report | ingest.  Every command resolves its parameters from
an optional JSON config file plus flag overrides (flags win), archives the
effective configuration beside its outputs, and writes a manifest with the
configuration hash and seed.  Given the same configuration and seed, every
command rewrites byte-identical CSV files.

Exit codes: 0 success, 1 usage error, 2 runtime failure.  The default
output root is the POLLINET_OUT environment variable (falling back to the
working directory); explicit --out paths are used as given.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import click
import numpy as np

from . import dataio as dio
from . import plots
from .attribution import GroupPartition, estimate_sign
from .evaluate import (
    METHODS,
    BenchmarkResult,
    attribute_all,
    default_model_config,
    link_auc,
    median_rank_rows,
    run_benchmark,
)
from .model import (
    ConnectivityFunctional,
    ModelConfig,
    TrainingDiverged,
    load_checkpoint,
    save_checkpoint,
    train,
)
from .simulate import generate, preset, preset_names

OUT_ROOT_ENV = "POLLINET_OUT"


def _out_dir(out: str | None, default_name: str) -> str:
    if out is None:
        out = os.path.join(os.environ.get(OUT_ROOT_ENV, "."), default_name)
    os.makedirs(out, exist_ok=True)
    return out


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    if not os.path.exists(path):
        raise FileNotFoundError(f"missing input file: {path}")
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise click.UsageError(f"{path}: config file must hold a JSON object")
    return cfg


def _resolve(flag_value, file_cfg: dict, key: str, fallback):
    """Flag beats config file beats fallback."""
    if flag_value is not None:
        return flag_value
    if key in file_cfg:
        return file_cfg[key]
    return fallback


def _archive(out_dir: str, effective: dict) -> None:
    """Effective config + provenance manifest beside the outputs.

    Dataset-writing commands already produced a manifest; its contents are
    kept and only the provenance keys are refreshed.
    """
    dio.write_manifest(os.path.join(out_dir, "config.json"), effective)
    manifest_path = os.path.join(out_dir, "manifest.json")
    manifest = dio.read_manifest(manifest_path) if os.path.exists(manifest_path) else {}
    manifest["config_hash"] = dio.config_digest(effective)
    manifest["seed"] = effective.get("seed", effective.get("base_seed"))
    dio.write_manifest(manifest_path, manifest)


def _check_preset(name: str) -> str:
    if name is None:
        raise click.UsageError("a preset name is required (flag --preset or config key)")
    if name not in preset_names():
        raise click.UsageError(
            f"unknown preset {name!r}; valid presets: {', '.join(preset_names())}"
        )
    return name


def _parse_methods(flag: str | None, file_cfg: dict) -> tuple[str, ...]:
    raw = _resolve(flag, file_cfg, "methods", list(METHODS))
    if isinstance(raw, str):
        raw = [m.strip() for m in raw.split(",") if m.strip()]
    methods = tuple(raw)
    for m in methods:
        if m not in METHODS:
            raise click.UsageError(
                f"unknown method {m!r}; valid methods: {', '.join(METHODS)}"
            )
    return methods


def _parse_columns(flag, file_cfg: dict, key: str):
    raw = _resolve(flag, file_cfg, key, None)
    if raw is None:
        return None
    if isinstance(raw, str):
        raw = [c.strip() for c in raw.split(",") if c.strip()]
    return tuple(int(c) for c in raw)


@click.group()
def cli():
    """Bipartite auto-encoder pipeline: data, training, attribution, reports."""


# ---------------------------------------------------------------- simulate


@cli.command()
@click.option("--config", "config_path", type=str, default=None, help="JSON config file; flags override its keys.")
@click.option("--preset", "preset_name", default=None, help="Scenario name, e.g. 1.A or 2.F.")
@click.option("--seed", type=int, default=None, help="Generator seed [default: 0].")
@click.option("--rows", type=int, default=None, help="Override the number of rows.")
@click.option("--cols", type=int, default=None, help="Override the number of columns.")
@click.option("--plants", type=int, default=None, help="Override the number of plants.")
@click.option("--out", default=None, help="Output directory [default: $POLLINET_OUT/sim-<preset>].")
def simulate(config_path, preset_name, seed, rows, cols, plants, out):
    """Generate one synthetic dataset and write it as CSV files."""
    file_cfg = _load_config_file(config_path)
    name = _check_preset(_resolve(preset_name, file_cfg, "preset", None))
    seed = int(_resolve(seed, file_cfg, "seed", 0))
    overrides = {}
    for key, val in (("n_rows", rows), ("n_cols", cols), ("n_plants", plants)):
        val = _resolve(val, file_cfg, key, None)
        if val is not None:
            overrides[key] = int(val)
    setting = preset(name, **overrides)

    out = _out_dir(_resolve(out, file_cfg, "out", None), f"sim-{name}-seed{seed}")
    data = generate(setting, seed=seed)
    dio.write_dataset(out, data, setting, seed=seed)
    _archive(out, {"command": "simulate", "preset": name, "seed": seed, **overrides})
    click.echo(f"wrote dataset for {name} (seed {seed}) to {out}")


# ------------------------------------------------------------------- train


def _model_config_from(file_cfg: dict, flags: dict, manifest: dict, has_protected: bool) -> ModelConfig:
    setting_info = manifest.get("setting", {})
    d_plus = _resolve(flags["latent_plus"], file_cfg, "d_plus", setting_info.get("d_plus", 6))
    d_minus = _resolve(flags["latent_minus"], file_cfg, "d_minus", setting_info.get("d_minus", 6))
    plant_recon = _resolve(
        flags["plant_loss"],
        file_cfg,
        "plant_reconstruction",
        setting_info.get("study") == 2 if setting_info else not manifest.get("has_truth", True),
    )
    hsic_weight = float(_resolve(flags["hsic_weight"], file_cfg, "hsic_weight", 0.0))
    hsic_columns = _parse_columns(flags["hsic_columns"], file_cfg, "hsic_columns")
    if hsic_weight > 0.0 and hsic_columns is None and not has_protected:
        hsic_columns = tuple(manifest.get("hsic_features", ()))
        if not hsic_columns:
            raise click.UsageError(
                "a positive --hsic-weight needs --hsic-columns, a dataset with "
                "recorded penalty features, or a protected column"
            )
    return ModelConfig(
        d_plus=int(d_plus),
        d_minus=int(d_minus),
        hidden_dim=int(_resolve(flags["hidden"], file_cfg, "hidden_dim", 32)),
        epochs=int(_resolve(flags["epochs"], file_cfg, "epochs", 300)),
        learning_rate=float(_resolve(flags["lr"], file_cfg, "learning_rate", 0.01)),
        seed=int(_resolve(flags["seed"], file_cfg, "seed", 0)),
        plant_reconstruction=bool(plant_recon),
        plant_weight=float(_resolve(flags["plant_weight"], file_cfg, "plant_weight", 1.0)),
        hsic_weight=hsic_weight,
        hsic_columns=hsic_columns or (),
        hsic_warmup=int(_resolve(flags["hsic_warmup"], file_cfg, "hsic_warmup", 0)),
    )


@cli.command(name="train")
@click.option("--config", "config_path", type=str, default=None, help="JSON config file; flags override its keys.")
@click.option("--data", "data_dir", default=None, help="Dataset directory from simulate/ingest.")
@click.option("--epochs", type=int, default=None, help="Training epochs [default: 300].")
@click.option("--lr", type=float, default=None, help="Adam learning rate [default: 0.01].")
@click.option("--hidden", type=int, default=None, help="Hidden layer width [default: 32].")
@click.option("--latent-plus", type=int, default=None, help="Positive latent coordinates [default: from dataset, else 6].")
@click.option("--latent-minus", type=int, default=None, help="Negative latent coordinates [default: from dataset, else 6].")
@click.option("--seed", type=int, default=None, help="Initialization seed [default: 0].")
@click.option("--plant-loss/--no-plant-loss", "plant_loss", default=None, help="Plant-level reconstruction term [default: on for sampled/field data].")
@click.option("--plant-weight", type=float, default=None, help="Weight of the plant term [default: 1.0].")
@click.option("--hsic-weight", type=float, default=None, help="Dependence penalty weight [default: 0].")
@click.option("--hsic-columns", default=None, help="Comma-separated covariate indices to decorrelate.")
@click.option("--hsic-warmup", type=int, default=None, help="Epoch at which the penalty switches on [default: 0].")
@click.option("--out", default=None, help="Output directory [default: $POLLINET_OUT/train].")
def train_cmd(config_path, data_dir, out, **flags):
    """Fit the auto-encoder on a dataset directory."""
    file_cfg = _load_config_file(config_path)
    data_dir = _resolve(data_dir, file_cfg, "data", None)
    if data_dir is None:
        raise click.UsageError("a dataset directory is required (flag --data or config key)")
    ds = dio.load_dataset(data_dir)

    cfg = _model_config_from(file_cfg, flags, ds.manifest, ds.protected is not None)
    hsic_target = None
    if cfg.hsic_weight > 0.0 and not cfg.hsic_columns and ds.protected is not None:
        hsic_target = ds.protected

    out = _out_dir(_resolve(out, file_cfg, "out", None), "train")
    model = train(ds.graph, cfg, ds.plants, hsic_target=hsic_target)
    save_checkpoint(os.path.join(out, "checkpoint.npz"), model)
    dio.write_trace_csv(os.path.join(out, "trace.csv"), model.trace)
    if model.trace:
        plots.training_curve_plot(os.path.join(out, "trace.png"), model.trace)

    metrics = {
        "initial_loss": model.trace[0]["total"] if model.trace else None,
        "final_loss": model.trace[-1]["total"] if model.trace else None,
        "link_auc": link_auc(model, ds.graph),
        "epochs": cfg.epochs,
    }
    dio.write_manifest(os.path.join(out, "metrics.json"), metrics)

    effective = {"command": "train", "data": str(data_dir), "protected_target": hsic_target is not None}
    effective.update({k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(cfg).items()})
    _archive(out, effective)
    click.echo(
        f"trained {cfg.epochs} epochs; link AUC {metrics['link_auc']:.3f}; wrote {out}"
    )


# --------------------------------------------------------------- attribute


@cli.command()
@click.option("--config", "config_path", type=str, default=None, help="JSON config file; flags override its keys.")
@click.option("--data", "data_dir", default=None, help="Dataset directory.")
@click.option("--checkpoint", default=None, help="Trained model file.")
@click.option("--methods", default=None, help="Comma-separated method list [default: all four].")
@click.option("--seed", type=int, default=None, help="Stream seed for stochastic methods [default: 0].")
@click.option("--ig-steps", type=int, default=None, help="Integration grid size [default: 64].")
@click.option("--coalitions", type=int, default=None, help="Coalition budget cap for the Shapley method [default: 2048].")
@click.option("--out", default=None, help="Output directory [default: $POLLINET_OUT/attribution].")
def attribute(config_path, data_dir, checkpoint, methods, seed, ig_steps, coalitions, out):
    """Score covariates of a trained model; writes one CSV of cell scores."""
    file_cfg = _load_config_file(config_path)
    data_dir = _resolve(data_dir, file_cfg, "data", None)
    checkpoint = _resolve(checkpoint, file_cfg, "checkpoint", None)
    if data_dir is None or checkpoint is None:
        raise click.UsageError("attribute needs --data and --checkpoint (flags or config keys)")
    if not os.path.exists(checkpoint):
        raise FileNotFoundError(f"missing input file: {checkpoint}")
    method_list = _parse_methods(methods, file_cfg)
    seed = int(_resolve(seed, file_cfg, "seed", 0))

    ds = dio.load_dataset(data_dir)
    model = load_checkpoint(checkpoint)
    functional = ConnectivityFunctional(model, ds.graph, ds.plants)
    partition = GroupPartition(ds.group_labels, len(ds.group_names))

    method_options = {}
    ig_steps = _resolve(ig_steps, file_cfg, "ig_steps", None)
    if ig_steps is not None:
        method_options["ig"] = {"m_steps": int(ig_steps)}
    coalitions = _resolve(coalitions, file_cfg, "coalitions", None)
    if coalitions is not None:
        method_options["graphsvx"] = {"n_coalitions": int(coalitions)}

    streams = np.random.SeedSequence(seed).spawn(len(METHODS))
    rngs = {m: np.random.default_rng(streams[i]) for i, m in enumerate(METHODS)}
    scores = attribute_all(
        functional,
        ds.graph.row_cov,
        partition,
        methods=method_list,
        rng_for=lambda m: rngs[m],
        method_options=method_options or None,
    )

    out = _out_dir(_resolve(out, file_cfg, "out", None), "attribution")
    rows = []
    for m in method_list:
        sign = estimate_sign(scores[m])
        for g, gname in enumerate(ds.group_names):
            for j, fname in enumerate(ds.feature_names):
                rows.append(
                    {
                        "method": m,
                        "group": gname,
                        "feature": fname,
                        "score": scores[m][g, j],
                        "sign": int(sign[g, j]),
                        "run_seed": seed,
                    }
                )
    dio.write_attributions(os.path.join(out, "attributions.csv"), rows)
    _archive(
        out,
        {
            "command": "attribute",
            "data": str(data_dir),
            "checkpoint": str(checkpoint),
            "methods": list(method_list),
            "seed": seed,
            "ig_steps": ig_steps,
            "coalitions": coalitions,
        },
    )
    click.echo(f"scored {len(method_list)} methods over {len(ds.group_names)} groups; wrote {out}")


# --------------------------------------------------------------- benchmark


def _benchmark_chunk(setting, run_ids, base_seed, methods, config):
    return run_benchmark(
        setting, base_seed=base_seed, methods=methods, config=config, run_indices=run_ids
    )


def _merge_results(parts: list[BenchmarkResult]) -> BenchmarkResult:
    merged = BenchmarkResult(setting_name=parts[0].setting_name, methods=parts[0].methods)
    for p in parts:
        merged.records.extend(p.records)
        merged.excluded.extend(p.excluded)
        if not merged.feature_names and p.feature_names:
            merged.feature_names = p.feature_names
            merged.group_names = p.group_names
    merged.records.sort(key=lambda r: r.run)
    merged.excluded.sort()
    return merged


@cli.command()
@click.option("--config", "config_path", type=str, default=None, help="JSON config file; flags override its keys.")
@click.option("--preset", "preset_name", default=None, help="Scenario name, e.g. 1.A or 2.F.")
@click.option("--runs", type=int, default=None, help="Number of replicates [default: 10].")
@click.option("--methods", default=None, help="Comma-separated method list [default: all four].")
@click.option("--seed", type=int, default=None, help="Base seed for the replicate tree [default: 0].")
@click.option("--jobs", type=int, default=None, help="Worker processes over replicates [default: 1].")
@click.option("--rows", type=int, default=None, help="Override the number of rows.")
@click.option("--cols", type=int, default=None, help="Override the number of columns.")
@click.option("--plants", type=int, default=None, help="Override the number of plants.")
@click.option("--epochs", type=int, default=None, help="Override training epochs.")
@click.option("--hsic-weight", type=float, default=None, help="Override the dependence penalty weight.")
@click.option("--out", default=None, help="Output directory [default: $POLLINET_OUT/bench-<preset>].")
def benchmark(config_path, preset_name, runs, methods, seed, jobs, rows, cols, plants, epochs, hsic_weight, out):
    """Replicated method comparison on one scenario; writes scorecard CSVs."""
    file_cfg = _load_config_file(config_path)
    name = _check_preset(_resolve(preset_name, file_cfg, "preset", None))
    n_runs = int(_resolve(runs, file_cfg, "n_runs", 10))
    method_list = _parse_methods(methods, file_cfg)
    base_seed = int(_resolve(seed, file_cfg, "base_seed", 0))
    jobs = int(_resolve(jobs, file_cfg, "jobs", 1))

    overrides = {}
    for key, val in (("n_rows", rows), ("n_cols", cols), ("n_plants", plants)):
        val = _resolve(val, file_cfg, key, None)
        if val is not None:
            overrides[key] = int(val)
    setting = preset(name, **overrides)

    cfg = default_model_config(setting)
    epochs = _resolve(epochs, file_cfg, "epochs", None)
    if epochs is not None:
        cfg = replace(cfg, epochs=int(epochs))
    hsic_weight = _resolve(hsic_weight, file_cfg, "hsic_weight", None)
    if hsic_weight is not None:
        cfg = replace(cfg, hsic_weight=float(hsic_weight))

    if jobs > 1 and n_runs > 1:
        chunks = [c.tolist() for c in np.array_split(np.arange(n_runs), min(jobs, n_runs))]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [
                pool.submit(_benchmark_chunk, setting, chunk, base_seed, method_list, cfg)
                for chunk in chunks
            ]
            result = _merge_results([f.result() for f in futures])
    else:
        result = run_benchmark(
            setting, n_runs=n_runs, base_seed=base_seed, methods=method_list, config=cfg
        )

    out = _out_dir(_resolve(out, file_cfg, "out", None), f"bench-{name}")
    summary = result.summary()
    dio.write_scorecard(os.path.join(out, "scorecard.csv"), name, summary, method_list)
    dio.write_per_run_csv(os.path.join(out, "per_run.csv"), result.per_run_rows())
    rows_out = []
    for rec in result.records:
        for m in method_list:
            for g, gname in enumerate(result.group_names):
                for j, fname in enumerate(result.feature_names):
                    rows_out.append(
                        {
                            "method": m,
                            "group": gname,
                            "feature": fname,
                            "score": rec.scores[m][g, j],
                            "sign": int(rec.signs[m][g, j]),
                            "run_seed": rec.run,
                        }
                    )
    dio.write_attributions(os.path.join(out, "attributions.csv"), rows_out)
    plots.method_bar_plot(os.path.join(out, "summary.png"), summary, title=f"{name}, {result.n_completed} runs")

    effective = {
        "command": "benchmark",
        "preset": name,
        "n_runs": n_runs,
        "methods": list(method_list),
        "base_seed": base_seed,
        **overrides,
    }
    if epochs is not None:
        effective["epochs"] = int(epochs)
    if hsic_weight is not None:
        effective["hsic_weight"] = float(hsic_weight)
    _archive(out, effective)
    if result.excluded:
        click.echo(f"excluded runs: {result.excluded}", err=True)
    lines = ", ".join(f"{m} auc={summary[m]['auc']:.3f}" for m in method_list)
    click.echo(f"{name} over {result.n_completed} runs: {lines}; wrote {out}")


# ------------------------------------------------------------------ report


def _collect_runs(paths: tuple[str, ...]):
    """Attribution CSVs -> per-method score/sign stacks plus cell labels.

    Each (file, run_seed) pair counts as one replicate, so the same file
    given twice contributes two replicates (the seeds may coincide).
    """
    cells: list[tuple[str, str]] = []
    cell_index: dict[tuple[str, str], int] = {}
    per_run: dict[tuple[int, int, str], dict[int, tuple[float, int]]] = {}
    for fi, path in enumerate(paths):
        for row in dio.read_attributions(path):
            cell = (row["group"], row["feature"])
            if cell not in cell_index:
                cell_index[cell] = len(cells)
                cells.append(cell)
            key = (fi, row["run_seed"], row["method"])
            per_run.setdefault(key, {})[cell_index[cell]] = (row["score"], row["sign"])

    group_names = tuple(dict.fromkeys(g for g, _ in cells))
    feature_names = tuple(dict.fromkeys(f for _, f in cells))
    gix = {g: i for i, g in enumerate(group_names)}
    fix = {f: j for j, f in enumerate(feature_names)}
    if len(cells) != len(group_names) * len(feature_names):
        raise ValueError(
            "attribution inputs do not form a full group x feature grid "
            f"({len(cells)} cells for {len(group_names)} groups x {len(feature_names)} features)"
        )

    scores_by_method: dict[str, list[np.ndarray]] = {}
    signs_by_method: dict[str, list[np.ndarray]] = {}
    for key in sorted(per_run):
        fi, run_seed, method = key
        got = per_run[key]
        if len(got) != len(cells):
            raise ValueError(
                f"{paths[fi]}: run {run_seed} method {method!r} covers "
                f"{len(got)} of {len(cells)} cells; inputs must share one cell universe"
            )
        score = np.zeros((len(group_names), len(feature_names)))
        sign = np.zeros((len(group_names), len(feature_names)))
        for ci, (s, sg) in got.items():
            g, f = cells[ci]
            score[gix[g], fix[f]] = s
            sign[gix[g], fix[f]] = sg
        scores_by_method.setdefault(method, []).append(score)
        signs_by_method.setdefault(method, []).append(sign)
    return scores_by_method, signs_by_method, feature_names, group_names


@cli.command()
@click.argument("attribution_csvs", nargs=-1, required=True)
@click.option("--rank-method", default="ig", show_default=True, help="Method whose scores set the ranking.")
@click.option("--sign-method", default="grad", show_default=True, help="Method whose sign is reported.")
@click.option("--out", default=None, help="Output directory [default: $POLLINET_OUT/report].")
def report(attribution_csvs, rank_method, sign_method, out):
    """Aggregate attribution CSVs into a median-rank table and figures."""
    scores_by_method, signs_by_method, feature_names, group_names = _collect_runs(
        tuple(attribution_csvs)
    )
    if rank_method not in scores_by_method:
        raise click.UsageError(
            f"rank method {rank_method!r} absent from the inputs; "
            f"present: {', '.join(sorted(scores_by_method))}"
        )
    rows = median_rank_rows(
        scores_by_method, feature_names, group_names,
        rank_method=rank_method, sign_method=sign_method,
    )
    out = _out_dir(out, "report")
    dio.write_rank_report(os.path.join(out, "rank_report.csv"), rows)

    plots.median_rank_plot(
        os.path.join(out, "median_rank.png"), rows, title=f"median {rank_method} rank"
    )
    sign_source = signs_by_method.get(sign_method, signs_by_method[rank_method])
    majority = np.sign(np.sum(sign_source, axis=0))
    plots.sign_grid_heatmap(
        os.path.join(out, "sign_grid.png"), majority, feature_names, group_names,
        title=f"majority {sign_method} sign over {len(sign_source)} runs",
    )
    stack = scores_by_method[rank_method]
    median_sign = np.sign(np.median(np.stack(stack), axis=0))
    plots.score_strip_plot(
        os.path.join(out, "score_strip.png"), stack, median_sign,
        np.ones_like(median_sign, dtype=bool), feature_names,
        title=f"{rank_method} scores over {len(stack)} runs",
    )
    _archive(
        out,
        {
            "command": "report",
            "inputs": [str(p) for p in attribution_csvs],
            "rank_method": rank_method,
            "sign_method": sign_method,
        },
    )
    click.echo(f"rank table over {len(rows)} cells; wrote {out}")


# ------------------------------------------------------------------ ingest


@cli.command()
@click.option("--sessions", required=True, help="Edge list CSV (row_id,col_id).")
@click.option("--covariates", required=True, help="Session covariates CSV.")
@click.option("--clc", required=True, help="Land-cover proportions CSV.")
@click.option("--out", default=None, help="Output directory [default: $POLLINET_OUT/ingested].")
def ingest(sessions, covariates, clc, out):
    """Convert field observation CSVs into a dataset directory."""
    graph, plants, protected, meta = dio.spipoll_ingest(sessions, covariates, clc)
    out = _out_dir(out, "ingested")
    dio.write_ingested_dataset(out, graph, plants, protected, meta)
    _archive(
        out,
        {
            "command": "ingest",
            "sessions": str(sessions),
            "covariates": str(covariates),
            "clc": str(clc),
            "kept_clc": list(meta["kept_clc"]),
        },
    )
    click.echo(
        f"ingested {graph.n_rows} sessions x {graph.n_cols} taxa; "
        f"kept land cover: {', '.join(meta['kept_clc']) or 'none'}; wrote {out}"
    )


def main(argv=None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:  # --help and friends
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except TrainingDiverged as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
