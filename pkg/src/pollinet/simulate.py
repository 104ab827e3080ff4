"""Synthetic data generators with known covariate effects.

Two families:

* latent study: edges come from a signed inner product of latent
  coordinates, so selected row covariates carry the true positive or
  negative drivers of connectivity.
* sampling study: a block-model "possible" network between plants and
  insects is thinned by a per-session observation probability, mimicking
  opportunistic sampling where effort varies across sessions.

Covariates are assembled the same way in both: a fixed block H (intercept,
optionally plant membership), one column per latent coordinate that either
carries the coordinate times a signed effect or fresh noise, and pure
noise columns.  The ground truth records expected attribution signs and
which columns count as signal.

All randomness flows through the caller's generator; given the same
generator state every function is deterministic, and draws happen in a
fixed order regardless of parameter values.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .autodiff import stable_sigmoid
from .graph import BipartiteGraph, PlantAssignment

Array = np.ndarray

# block-model parameters of the sampling study's possible network
BLOCK_ROW_WEIGHTS = np.array([0.3, 0.4, 0.3])
BLOCK_COL_WEIGHTS = np.array([0.2, 0.4, 0.4])
BLOCK_LINK_PROBS = np.array(
    [
        [0.95, 0.80, 0.50],
        [0.90, 0.55, 0.20],
        [0.70, 0.25, 0.06],
    ]
)

_REDRAW_LIMIT = 10000


@dataclass(frozen=True)
class SimSetting:
    """Shape and effect layout of one synthetic setting."""

    name: str
    study: int
    d_plus: int
    d_minus: int
    d_noise: int
    k_groups: int
    effect_values: tuple[int, ...]
    hsic_cols: int = 0
    plants_in_h: bool = False
    n_rows: int = 1000
    n_cols: int = 100
    n_plants: int = 83
    beta0: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.study not in (1, 2):
            raise ValueError("study must be 1 or 2")
        if self.d_plus < 0 or self.d_minus < 0 or self.d_plus + self.d_minus < 1:
            raise ValueError("latent dimensions must be nonnegative and sum to at least 1")
        if self.d_noise < 0:
            raise ValueError("d_noise must be nonnegative")
        if self.k_groups < 1:
            raise ValueError("k_groups must be positive")
        vals = tuple(int(v) for v in self.effect_values)
        if not vals or not set(vals).issubset({-1, 0, 1}):
            raise ValueError("effect_values must be a nonempty subset of {-1, 0, 1}")
        if len(set(vals)) != len(vals):
            raise ValueError("effect_values must not repeat")
        if self.hsic_cols < 0 or self.hsic_cols > self.d_plus + self.d_minus:
            raise ValueError("hsic_cols out of range")
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if self.study == 2 and self.n_plants < 1:
            raise ValueError("n_plants must be positive")
        if self.plants_in_h and self.study != 2:
            raise ValueError("plant membership columns need the sampling study")
        object.__setattr__(self, "effect_values", vals)

    @property
    def d_signal(self) -> int:
        return self.d_plus + self.d_minus


@dataclass(frozen=True)
class GroundTruth:
    """Expected attribution outcomes for one simulated dataset.

    expected_sign / signal_mask / eval_mask are (k_groups x d1) arrays over
    all row covariates.  H columns are outside eval_mask; columns under the
    dependence penalty have expected sign 0 and are not signal, and their
    covariate indices are listed in hsic_features.
    """

    effects: Array
    expected_sign: Array
    signal_mask: Array
    eval_mask: Array
    feature_names: tuple[str, ...]
    group_names: tuple[str, ...]
    hsic_features: tuple[int, ...]

    @property
    def n_groups(self) -> int:
        return self.expected_sign.shape[0]


@dataclass(frozen=True)
class SamplingTruth:
    """Hidden state of the sampling study generator."""

    possible_network: Array
    plant_choice: Array
    observe_prob: Array
    row_blocks: Array
    col_blocks: Array


@dataclass(frozen=True)
class SimulatedData:
    graph: BipartiteGraph
    plants: PlantAssignment | None
    group_labels: Array
    truth: GroundTruth
    z_row: Array
    sampling: SamplingTruth | None


def simulate_bipartite(setting: SimSetting, rng: np.random.Generator) -> tuple[Array, Array, Array]:
    """Latent-study incidence: edges from a signed latent inner product.

    Returns (incidence, row latent coords, column latent coords); the row
    coords are standard normal, the column coords are shifted to mean 1.
    """
    n1, n2 = setting.n_rows, setting.n_cols
    z_plus = rng.standard_normal((n1, setting.d_plus))
    z_minus = rng.standard_normal((n1, setting.d_minus))
    z_col = rng.standard_normal((n2, setting.d_signal)) + 1.0
    logits = z_plus @ z_col[:, : setting.d_plus].T - z_minus @ z_col[:, setting.d_plus :].T
    b = (rng.random((n1, n2)) < stable_sigmoid(logits)).astype(np.float64)
    return b, np.hstack([z_plus, z_minus]), z_col


def _draw_plant_choice(setting: SimSetting, rng: np.random.Generator) -> tuple[Array, Array]:
    """Uniform plant per session; when sessions comfortably outnumber
    plants the whole vector is redrawn until every plant is hit, otherwise
    empty plants are dropped (with a warning) and labels are remapped."""
    u = setting.n_plants
    choice = rng.integers(0, u, size=setting.n_rows)
    if setting.n_rows >= 5 * u:
        tries = 0
        while len(np.unique(choice)) < u:
            choice = rng.integers(0, u, size=setting.n_rows)
            tries += 1
            if tries > _REDRAW_LIMIT:
                raise RuntimeError("could not draw a plant assignment covering every plant")
        return choice, np.arange(u)
    kept = np.unique(choice)
    if len(kept) < u:
        warnings.warn(f"dropping {u - len(kept)} plants with no sessions", stacklevel=3)
    remap = np.full(u, -1)
    remap[kept] = np.arange(len(kept))
    return remap[choice], kept


def simulate_sampling(
    setting: SimSetting, rng: np.random.Generator
) -> tuple[Array, Array, SamplingTruth]:
    """Sampling-study incidence: block-model possible network thinned by a
    per-session observation probability driven by the latent coords."""
    n1, n2 = setting.n_rows, setting.n_cols
    row_blocks = rng.choice(len(BLOCK_ROW_WEIGHTS), size=setting.n_plants, p=BLOCK_ROW_WEIGHTS)
    col_blocks = rng.choice(len(BLOCK_COL_WEIGHTS), size=n2, p=BLOCK_COL_WEIGHTS)
    link_p = BLOCK_LINK_PROBS[row_blocks][:, col_blocks]
    possible = (rng.random((setting.n_plants, n2)) < link_p).astype(np.float64)
    choice, kept = _draw_plant_choice(setting, rng)
    possible = possible[kept]
    row_blocks = row_blocks[kept]
    z_plus = rng.standard_normal((n1, setting.d_plus))
    z_minus = rng.standard_normal((n1, setting.d_minus))
    observe = stable_sigmoid(setting.beta0 + z_plus.sum(axis=1) - z_minus.sum(axis=1))
    b = (rng.random((n1, n2)) < observe[:, None] * possible[choice]).astype(np.float64)
    truth = SamplingTruth(possible, choice, observe, row_blocks, col_blocks)
    return b, np.hstack([z_plus, z_minus]), truth


def _assign_effects(setting: SimSetting, rng: np.random.Generator) -> Array:
    """Signed effect per (group, signal column), cycling through the effect
    values column-major with a random offset so groups disagree within a
    column whenever there are several groups."""
    vals = sorted(setting.effect_values, reverse=True)
    k, d = setting.k_groups, setting.d_signal
    offset = int(rng.integers(len(vals)))
    effects = np.empty((k, d))
    for j in range(d):
        for g in range(k):
            effects[g, j] = vals[(j * k + g + offset) % len(vals)]
    return effects


def build_covariates(
    z_row: Array,
    setting: SimSetting,
    rng: np.random.Generator,
    plants: PlantAssignment | None = None,
) -> tuple[Array, GroundTruth, Array]:
    """Row covariate matrix [H | signal-or-noise | noise] plus ground truth.

    Cells with a nonzero effect carry effect * latent coordinate; zero-effect
    cells get fresh standard normal draws (drawn for every cell regardless,
    to keep the generator stream independent of the effect layout).
    """
    n1 = z_row.shape[0]
    d_sig, d_noise, k = setting.d_signal, setting.d_noise, setting.k_groups

    if k == 1:
        groups = np.zeros(n1, dtype=np.intp)
    elif plants is not None and k == plants.n_plants:
        groups = plants.labels
    else:
        groups = rng.integers(0, k, size=n1)
    effects = _assign_effects(setting, rng)
    fresh = rng.standard_normal((n1, d_sig))
    noise = rng.standard_normal((n1, d_noise))

    cell_effect = effects[groups]  # n1 x d_sig
    x_signal = np.where(cell_effect != 0.0, cell_effect * z_row, fresh)

    names: list[str] = ["intercept"]
    h_parts = [np.ones((n1, 1))]
    if setting.plants_in_h:
        if plants is None:
            raise ValueError("plants_in_h requires a plant assignment")
        h_parts.append(plants.onehot)
        ids = plants.plant_ids or tuple(f"p{k_ + 1:03d}" for k_ in range(plants.n_plants))
        names.extend(f"plant:{pid}" for pid in ids)
    names.extend(f"x{j + 1:02d}" for j in range(d_sig))
    names.extend(f"noise{j + 1:02d}" for j in range(d_noise))
    x1 = np.hstack(h_parts + [x_signal, noise])
    h_count = x1.shape[1] - d_sig - d_noise

    # penalized columns alternate between the plus and minus halves
    hsic_features = []
    for t in range(setting.hsic_cols):
        block = t % 2
        within = t // 2
        col = within if block == 0 else setting.d_plus + within
        hsic_features.append(h_count + col)
    hsic_features = tuple(sorted(hsic_features))

    d1 = x1.shape[1]
    expected = np.zeros((k, d1))
    coord_sign = np.concatenate([np.ones(setting.d_plus), -np.ones(setting.d_minus)])
    expected[:, h_count : h_count + d_sig] = effects * coord_sign[None, :]
    signal = expected != 0.0
    for col in hsic_features:
        expected[:, col] = 0.0
        signal[:, col] = False
    eval_mask = np.ones((k, d1), dtype=bool)
    eval_mask[:, :h_count] = False

    if k == 1:
        group_names = ("all",)
    elif plants is not None and k == plants.n_plants:
        group_names = plants.plant_ids or tuple(f"p{k_ + 1:03d}" for k_ in range(k))
    else:
        group_names = tuple(f"g{k_ + 1}" for k_ in range(k))

    truth = GroundTruth(
        effects=effects,
        expected_sign=expected,
        signal_mask=signal,
        eval_mask=eval_mask,
        feature_names=tuple(names),
        group_names=group_names,
        hsic_features=hsic_features,
    )
    return x1, truth, groups


def generate(setting: SimSetting, seed: int | np.random.Generator | None = None) -> SimulatedData:
    """Full dataset for a setting: incidence, covariates, ground truth."""
    if isinstance(seed, np.random.Generator):
        rng = seed
    else:
        rng = np.random.default_rng(setting.seed if seed is None else seed)

    if setting.study == 1:
        b, z_row, _ = simulate_bipartite(setting, rng)
        plants = None
        sampling = None
    else:
        b, z_row, sampling = simulate_sampling(setting, rng)
        u = int(sampling.possible_network.shape[0])
        ids = tuple(f"p{k_ + 1:03d}" for k_ in range(u))
        plants = PlantAssignment(np.eye(u)[sampling.plant_choice], plant_ids=ids)

    # settings grouped by plant need the realized plant count
    eff_setting = setting
    if setting.study == 2 and setting.k_groups == setting.n_plants and plants is not None:
        eff_setting = replace(setting, k_groups=plants.n_plants)

    x1, truth, groups = build_covariates(z_row, eff_setting, rng, plants)
    graph = BipartiteGraph(b, x1, np.ones((setting.n_cols, 1)))
    return SimulatedData(graph, plants, groups, truth, z_row, sampling)


_PRESETS: dict[str, SimSetting] = {}


def _register(name, study, d_signal, d_noise, k_groups, effect_values, hsic_cols, plants_in_h=False):
    n_cols = 100 if study == 1 else 306
    _PRESETS[name] = SimSetting(
        name=name,
        study=study,
        d_plus=d_signal,
        d_minus=d_signal,
        d_noise=d_noise,
        k_groups=k_groups,
        effect_values=effect_values,
        hsic_cols=hsic_cols,
        plants_in_h=plants_in_h,
        n_rows=1000,
        n_cols=n_cols,
        n_plants=83,
    )


_register("1.A", 1, 3, 50, 1, (1,), 0)
_register("1.B", 1, 1, 1, 2, (1, -1), 0)
_register("1.C", 1, 3, 6, 2, (1, 0, -1), 0)
_register("1.D", 1, 3, 1, 4, (1,), 2)
_register("2.A", 2, 3, 50, 1, (1,), 0)
_register("2.B", 2, 1, 1, 2, (1, -1), 0)
_register("2.C", 2, 3, 6, 2, (1, 0, -1), 0)
_register("2.D", 2, 3, 1, 4, (1,), 2)
_register("2.E", 2, 4, 8, 83, (1, 0, -1), 2, plants_in_h=True)
_register("2.F", 2, 4, 50, 83, (1, 0, -1), 2, plants_in_h=True)


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def preset(name: str, **overrides) -> SimSetting:
    """Catalog lookup; overrides replace individual fields."""
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}; valid presets: {', '.join(_PRESETS)}")
    setting = _PRESETS[name]
    return replace(setting, **overrides) if overrides else setting
