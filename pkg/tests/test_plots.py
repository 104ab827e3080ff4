"""Figure rendering: files must appear and be nonempty, nothing more."""

import numpy as np

from pollinet import plots


def test_score_strip_plot_writes_file(tmp_path):
    rng = np.random.default_rng(0)
    k, d1, runs = 2, 7, 5
    scores = [rng.standard_normal((k, d1)) for _ in range(runs)]
    expected = np.zeros((k, d1))
    expected[:, 1] = 1.0
    expected[:, 2] = -1.0
    eval_mask = np.ones((k, d1), dtype=bool)
    eval_mask[:, 0] = False
    names = ["intercept", "x01", "x02", "x03", "noise01", "noise02", "noise03"]
    path = tmp_path / "strip.png"
    plots.score_strip_plot(path, scores, expected, eval_mask, names, hsic_features=(3,))
    assert path.stat().st_size > 0


def test_sign_grid_heatmap_writes_file(tmp_path):
    rng = np.random.default_rng(1)
    signs = rng.integers(-1, 2, size=(4, 9)).astype(float)
    path = tmp_path / "grid.png"
    plots.sign_grid_heatmap(
        path, signs, [f"f{j}" for j in range(9)], [f"g{i}" for i in range(4)], title="signs"
    )
    assert path.stat().st_size > 0


def test_sign_grid_heatmap_many_groups(tmp_path):
    # the 83-group layout must not try to label every row
    signs = np.zeros((83, 12))
    path = tmp_path / "grid83.png"
    plots.sign_grid_heatmap(path, signs, [f"f{j}" for j in range(12)], [f"p{i}" for i in range(83)])
    assert path.stat().st_size > 0


def test_training_curve_plot_writes_file(tmp_path):
    trace = [
        {"epoch": float(e), "total": 1.0 / (e + 1), "recon": 0.8 / (e + 1),
         "kl_row": 0.1, "kl_col": 0.1, "plant": 0.0, "hsic": 0.0}
        for e in range(20)
    ]
    path = tmp_path / "curve.png"
    plots.training_curve_plot(path, trace, title="run")
    assert path.stat().st_size > 0


def test_method_bar_plot_writes_file(tmp_path):
    summary = {
        "grad": {"plus": 1.0, "minus": 0.9, "auc": 0.97},
        "ig": {"plus": 0.95, "minus": 0.85, "auc": 0.99},
        "graphsvx": {"plus": 0.9, "minus": 0.1, "auc": 0.8},
    }
    path = tmp_path / "bars.png"
    plots.method_bar_plot(path, summary, title="1.A")
    assert path.stat().st_size > 0


def test_median_rank_plot_writes_file(tmp_path):
    rows = [
        {"group": "all", "feature": f"x{j:02d}", "median_rank": float(j + 1),
         "median_score": 1.0 / (j + 1), "grad_positive_rate": 1.0 if j % 2 else 0.0}
        for j in range(12)
    ]
    path = tmp_path / "rank.png"
    plots.median_rank_plot(path, rows, top=10)
    assert path.stat().st_size > 0
