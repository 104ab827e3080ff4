"""Variational bipartite auto-encoder over the interaction graph.

Each side gets a pair of two-layer graph convolutions producing latent
means and log standard deviations; the first-layer weights are shared
between the two heads of a side.  Decoding is a generalized inner product
whose signature splits the latent space into positively and negatively
interacting coordinates.  Expected connectivity is the mean of the decoded
probability matrix, optionally after averaging sessions into plants.

Training minimizes the negative evidence lower bound scaled per entry:
a positively-reweighted binary cross entropy plus both KL terms divided
by the entry count.  Two optional terms are added on top: a plant-level
reconstruction loss that corrects for uneven observation effort, and an
HSIC dependence penalty that pushes the row latent means away from
selected covariates.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import autodiff as ad
from .graph import (
    BipartiteGraph,
    PlantAssignment,
    connectivity,
    normalize_incidence,
    plant_average_matrix,
    project_plant_network,
)

Array = np.ndarray

# probabilities are clamped here before any log; keeps BCE finite
PROB_CLAMP = 1.0e-7
# median squared distance floor for the HSIC kernel bandwidth
HSIC_BANDWIDTH_FLOOR = 1.0e-8

_ADAM_B1 = 0.9
_ADAM_B2 = 0.999
_ADAM_EPS = 1.0e-8

_WEIGHT_NAMES = ("w1_row", "w2_mu_row", "w2_sig_row", "w1_col", "w2_mu_col", "w2_sig_col")


class TrainingDiverged(RuntimeError):
    """Raised when the training loss stops being finite."""

    def __init__(self, epoch: int, value: float):
        super().__init__(f"training loss became non-finite at epoch {epoch} (value={value})")
        self.epoch = epoch


@dataclass(frozen=True)
class ModelConfig:
    """Architecture and optimization settings.

    d_plus / d_minus: latent coordinates with positive / negative sign in
    the decoder. pos_weight None means #zero-entries / #one-entries of the
    incidence. hsic_columns indexes row covariates whose dependence with
    the row latent means is penalized with weight hsic_weight; the penalty
    switches on at epoch hsic_warmup (0 = active from the first epoch).
    Applying it to a cold model can push the embedding into the constant
    solution, so benchmark configs leave a warmup window.
    """

    d_plus: int
    d_minus: int
    hidden_dim: int = 32
    epochs: int = 300
    learning_rate: float = 0.01
    seed: int = 0
    pos_weight: float | None = None
    plant_reconstruction: bool = False
    plant_weight: float = 1.0
    hsic_weight: float = 0.0
    hsic_columns: tuple[int, ...] = ()
    hsic_warmup: int = 0

    def __post_init__(self):
        if self.d_plus < 0 or self.d_minus < 0 or self.d_plus + self.d_minus < 1:
            raise ValueError("latent dimensions must be nonnegative and sum to at least 1")
        if self.hidden_dim < 1:
            raise ValueError("hidden_dim must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be nonnegative")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if self.hsic_weight < 0.0:
            raise ValueError("hsic_weight must be nonnegative")
        if self.hsic_warmup < 0:
            raise ValueError("hsic_warmup must be nonnegative")
        if self.pos_weight is not None and self.pos_weight <= 0.0:
            raise ValueError("pos_weight must be positive when given")
        object.__setattr__(self, "hsic_columns", tuple(int(c) for c in self.hsic_columns))

    @property
    def latent_dim(self) -> int:
        return self.d_plus + self.d_minus


@dataclass(frozen=True)
class EncoderWeights:
    """All trainable matrices; one shared first layer per side."""

    w1_row: Array
    w2_mu_row: Array
    w2_sig_row: Array
    w1_col: Array
    w2_mu_col: Array
    w2_sig_col: Array

    def as_dict(self) -> dict[str, Array]:
        return {name: getattr(self, name) for name in _WEIGHT_NAMES}


@dataclass(frozen=True)
class LatentState:
    """Posterior means, log standard deviations and sampled embeddings."""

    mu_row: Array
    log_sigma_row: Array
    mu_col: Array
    log_sigma_col: Array
    z_row: Array
    z_col: Array


@dataclass
class TrainedModel:
    weights: EncoderWeights
    config: ModelConfig
    signature: Array
    trace: list[dict[str, float]]


def signature_vector(d_plus: int, d_minus: int) -> Array:
    """Decoder signature: d_plus ones followed by d_minus minus-ones."""
    return np.concatenate([np.ones(d_plus), -np.ones(d_minus)])


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> Array:
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))


def init_weights(d1: int, d2: int, config: ModelConfig, rng: np.random.Generator) -> EncoderWeights:
    h, d = config.hidden_dim, config.latent_dim
    return EncoderWeights(
        w1_row=_glorot(rng, d1, h),
        w2_mu_row=_glorot(rng, h, d),
        w2_sig_row=_glorot(rng, h, d),
        w1_col=_glorot(rng, d2, h),
        w2_mu_col=_glorot(rng, h, d),
        w2_sig_col=_glorot(rng, h, d),
    )


def _forward_means(
    x1: Array, x2: Array, nb: Array, nbt: Array, w: EncoderWeights
) -> tuple[Array, Array, Array, Array]:
    """Posterior means and log-sigmas for both sides, plain numpy."""
    h_row = np.maximum(nbt @ (x1 @ w.w1_row), 0.0)
    mu_row = nb @ (h_row @ w.w2_mu_row)
    ls_row = nb @ (h_row @ w.w2_sig_row)
    h_col = np.maximum(nb @ (x2 @ w.w1_col), 0.0)
    mu_col = nbt @ (h_col @ w.w2_mu_col)
    ls_col = nbt @ (h_col @ w.w2_sig_col)
    return mu_row, ls_row, mu_col, ls_col


def encode(
    graph: BipartiteGraph, weights: EncoderWeights, rng: np.random.Generator | None = None
) -> LatentState:
    """Run the encoder; z is sampled when an rng is given, else z = mu."""
    nb = normalize_incidence(graph.incidence).values
    nbt = nb.T.copy()
    mu_row, ls_row, mu_col, ls_col = _forward_means(graph.row_cov, graph.col_cov, nb, nbt, weights)
    if rng is None:
        z_row, z_col = mu_row.copy(), mu_col.copy()
    else:
        z_row = mu_row + np.exp(ls_row) * rng.standard_normal(mu_row.shape)
        z_col = mu_col + np.exp(ls_col) * rng.standard_normal(mu_col.shape)
    return LatentState(mu_row, ls_row, mu_col, ls_col, z_row, z_col)


def decode(z_row: Array, z_col: Array, signature: Array) -> Array:
    """Edge probabilities from the signed inner product of embeddings."""
    z_row = np.asarray(z_row, dtype=np.float64)
    z_col = np.asarray(z_col, dtype=np.float64)
    signature = np.asarray(signature, dtype=np.float64)
    if z_row.shape[1] != z_col.shape[1] or z_row.shape[1] != signature.shape[0]:
        raise ValueError("embedding dimensions and signature length must agree")
    return ad.stable_sigmoid((z_row * signature[None, :]) @ z_col.T)


def _default_pos_weight(b: Array) -> float:
    ones = float(b.sum())
    zeros = float(b.size) - ones
    if ones == 0.0 or zeros == 0.0:
        return 1.0
    return zeros / ones


def elbo_components(
    graph: BipartiteGraph, latent: LatentState, b_hat: Array, pos_weight: float | None = None
) -> tuple[float, float, float]:
    """(reconstruction, row KL, column KL), each scaled per incidence entry."""
    b = graph.incidence
    pw = _default_pos_weight(b) if pos_weight is None else float(pos_weight)
    p = np.clip(b_hat, PROB_CLAMP, 1.0 - PROB_CLAMP)
    recon = float(np.mean(-pw * b * np.log(p) - (1.0 - b) * np.log(1.0 - p)))
    denom = float(b.size)

    def kl(mu: Array, ls: Array) -> float:
        return float(0.5 * np.sum(mu * mu + np.exp(2.0 * ls) - 1.0 - 2.0 * ls) / denom)

    return recon, kl(latent.mu_row, latent.log_sigma_row), kl(latent.mu_col, latent.log_sigma_col)


def elbo_loss(
    graph: BipartiteGraph, latent: LatentState, b_hat: Array, pos_weight: float | None = None
) -> float:
    """Negative evidence lower bound per incidence entry."""
    recon, kl_row, kl_col = elbo_components(graph, latent, b_hat, pos_weight)
    return recon + kl_row + kl_col


def plant_level_bce(graph: BipartiteGraph, plants: PlantAssignment, b_hat: Array) -> float:
    """Cross entropy between the plant-level projection of the incidence
    and the plant-averaged predicted probabilities."""
    target = project_plant_network(graph.incidence, plants)
    pav_t = plant_average_matrix(plants).T
    p = np.clip(pav_t @ b_hat, PROB_CLAMP, 1.0 - PROB_CLAMP)
    return float(np.mean(-target * np.log(p) - (1.0 - target) * np.log(1.0 - p)))


def spipoll_loss(
    graph: BipartiteGraph,
    plants: PlantAssignment,
    latent: LatentState,
    b_hat: Array,
    pos_weight: float | None = None,
    plant_weight: float = 1.0,
) -> float:
    """ELBO plus the plant-level reconstruction term."""
    return elbo_loss(graph, latent, b_hat, pos_weight) + plant_weight * plant_level_bce(
        graph, plants, b_hat
    )


def _centered_gram(m: Array) -> tuple[Array, Array, float]:
    """Gaussian kernel with median-squared-distance bandwidth, raw and
    double-centered, plus the bandwidth used."""
    sq = np.sum(m * m, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (m @ m.T), 0.0)
    n = m.shape[0]
    iu = np.triu_indices(n, k=1)
    med = max(float(np.median(d2[iu])), HSIC_BANDWIDTH_FLOOR)
    k = np.exp(-d2 / med)
    kc = k - k.mean(axis=0)[None, :] - k.mean(axis=1)[:, None] + k.mean()
    return k, kc, med


def hsic(u: Array, v: Array) -> float:
    """Biased HSIC estimate between row-aligned samples u and v.

    Gaussian kernels on both sides, bandwidth set to the median pairwise
    squared distance (floored).  Zero iff (approximately) independent.
    """
    u = np.atleast_2d(np.asarray(u, dtype=np.float64))
    v = np.atleast_2d(np.asarray(v, dtype=np.float64))
    if u.shape[0] != v.shape[0]:
        raise ValueError("hsic inputs must have the same number of rows")
    n = u.shape[0]
    if n < 4:
        raise ValueError("hsic needs at least 4 samples")
    _, kc, _ = _centered_gram(u)
    _, lc, _ = _centered_gram(v)
    return float(np.sum(kc * lc) / float((n - 1) ** 2))


def _hsic_node(u_t: ad.Tensor, lc: Array, n: int) -> ad.Tensor:
    """Tape node for HSIC(u, v) with the v-side kernel precomputed.

    The bandwidth is treated as a constant of the backward pass.  With
    W = (lc * K) * (-1 / (med * (n-1)^2)), the gradient with respect to u
    is 4 * (diag(W @ 1) - W) @ u.
    """
    u = u_t.data
    k, kc, med = _centered_gram(u)
    denom = float((n - 1) ** 2)
    value = float(np.sum(kc * lc) / denom)

    def backward(g: Array) -> None:
        w = (lc * k) * (-1.0 / (med * denom))
        grad_u = 4.0 * (w.sum(axis=1)[:, None] * u - w @ u) * g[0, 0]
        ad.accumulate(u_t, grad_u)

    return ad.custom(np.array([[value]]), [u_t], backward)


def _encoder_tensors(
    x1c: ad.Tensor,
    x2c: ad.Tensor,
    nbc: ad.Tensor,
    nbtc: ad.Tensor,
    w: dict[str, ad.Tensor],
) -> tuple[ad.Tensor, ad.Tensor, ad.Tensor, ad.Tensor]:
    h_row = ad.relu(nbtc @ (x1c @ w["w1_row"]))
    mu_row = nbc @ (h_row @ w["w2_mu_row"])
    ls_row = nbc @ (h_row @ w["w2_sig_row"])
    h_col = ad.relu(nbc @ (x2c @ w["w1_col"]))
    mu_col = nbtc @ (h_col @ w["w2_mu_col"])
    ls_col = nbtc @ (h_col @ w["w2_sig_col"])
    return mu_row, ls_row, mu_col, ls_col


def _kl_tensor(mu: ad.Tensor, ls: ad.Tensor, denom: float) -> ad.Tensor:
    inner = ad.add(ad.add(ad.multiply(mu, mu), ad.exp(ad.scale(ls, 2.0))), ad.scale(ls, -2.0))
    return ad.scale(ad.shift(ad.total(inner), -float(mu.data.size)), 0.5 / denom)


def _bce_tensor(target: ad.Tensor, one_minus_target: ad.Tensor, p: ad.Tensor, pos_weight: float) -> ad.Tensor:
    om_p = ad.shift(ad.scale(p, -1.0), 1.0)
    t1 = ad.scale(ad.multiply(target, ad.log(p)), -pos_weight)
    t2 = ad.scale(ad.multiply(one_minus_target, ad.log(om_p)), -1.0)
    return ad.mean(ad.add(t1, t2))


def _training_constants(
    graph: BipartiteGraph,
    config: ModelConfig,
    plants: PlantAssignment | None = None,
    hsic_target: Array | None = None,
) -> dict:
    """Everything about the loss that does not change across epochs."""
    if config.plant_reconstruction and plants is None:
        raise ValueError("plant_reconstruction requires a plant assignment")
    b = graph.incidence
    n1, n2 = b.shape
    nb = normalize_incidence(b).values
    nbt = nb.T.copy()
    pw = _default_pos_weight(b) if config.pos_weight is None else config.pos_weight
    signature = signature_vector(config.d_plus, config.d_minus)

    lc = None
    if config.hsic_weight > 0.0:
        if hsic_target is not None:
            v = np.asarray(hsic_target, dtype=np.float64)
        elif config.hsic_columns:
            v = graph.row_cov[:, list(config.hsic_columns)]
        else:
            raise ValueError("hsic_weight > 0 needs hsic_columns or an explicit hsic_target")
        if v.ndim == 1:
            v = v[:, None]
        if v.shape[0] != n1:
            raise ValueError("hsic target rows must align with the sessions")
        if n1 < 4:
            raise ValueError("hsic needs at least 4 sessions")
        _, lc, _ = _centered_gram(v)

    c = {
        "n1": n1,
        "n2": n2,
        "denom": float(b.size),
        "pos_weight": pw,
        "signature": signature,
        "lc": lc,
        "x1c": ad.tensor(graph.row_cov),
        "x2c": ad.tensor(graph.col_cov),
        "nbc": ad.tensor(nb),
        "nbtc": ad.tensor(nbt),
        "bc": ad.tensor(b),
        "ombc": ad.tensor(1.0 - b),
        "sigc": ad.tensor(signature[None, :]),
    }
    if config.plant_reconstruction:
        bp = project_plant_network(b, plants)
        c["bpc"] = ad.tensor(bp)
        c["ombpc"] = ad.tensor(1.0 - bp)
        c["pavtc"] = ad.tensor(plant_average_matrix(plants).T)
    return c


def _loss_graph(
    c: dict,
    wt: dict[str, ad.Tensor],
    eps_row: Array,
    eps_col: Array,
    config: ModelConfig,
) -> tuple[ad.Tensor, dict[str, float]]:
    """One epoch's loss tape from constants, weight tensors and noise."""
    mu_row, ls_row, mu_col, ls_col = _encoder_tensors(c["x1c"], c["x2c"], c["nbc"], c["nbtc"], wt)
    z_row = ad.add(mu_row, ad.multiply(ad.exp(ls_row), ad.tensor(eps_row)))
    z_col = ad.add(mu_col, ad.multiply(ad.exp(ls_col), ad.tensor(eps_col)))
    logits = ad.matmul(ad.multiply(z_row, c["sigc"]), ad.transpose(z_col))
    p = ad.clip(ad.sigmoid(logits), PROB_CLAMP, 1.0 - PROB_CLAMP)

    recon = _bce_tensor(c["bc"], c["ombc"], p, c["pos_weight"])
    kl_row = _kl_tensor(mu_row, ls_row, c["denom"])
    kl_col = _kl_tensor(mu_col, ls_col, c["denom"])
    loss = ad.add(recon, ad.add(kl_row, kl_col))

    plant_term = 0.0
    if config.plant_reconstruction:
        p_plant = ad.clip(ad.matmul(c["pavtc"], p), PROB_CLAMP, 1.0 - PROB_CLAMP)
        plant_loss = _bce_tensor(c["bpc"], c["ombpc"], p_plant, 1.0)
        loss = ad.add(loss, ad.scale(plant_loss, config.plant_weight))
        plant_term = plant_loss.item()

    hsic_term = 0.0
    if config.hsic_weight > 0.0:
        hsic_loss = _hsic_node(mu_row, c["lc"], c["n1"])
        loss = ad.add(loss, ad.scale(hsic_loss, config.hsic_weight))
        hsic_term = hsic_loss.item()

    terms = {
        "total": loss.item(),
        "recon": recon.item(),
        "kl_row": kl_row.item(),
        "kl_col": kl_col.item(),
        "plant": plant_term,
        "hsic": hsic_term,
    }
    return loss, terms


def train(
    graph: BipartiteGraph,
    config: ModelConfig,
    plants: PlantAssignment | None = None,
    hsic_target: Array | None = None,
) -> TrainedModel:
    """Fit the auto-encoder with Adam; deterministic given config.seed.

    plants is required when config.plant_reconstruction is set.  The HSIC
    penalty target defaults to graph.row_cov[:, config.hsic_columns] and
    can be overridden with an explicit matrix (rows aligned with sessions).
    """
    c = _training_constants(graph, config, plants, hsic_target)
    rng = np.random.default_rng(config.seed)
    weights = init_weights(graph.n_row_features, graph.col_cov.shape[1], config, rng)
    params = {name: arr.copy() for name, arr in weights.as_dict().items()}
    adam_m = {name: np.zeros_like(arr) for name, arr in params.items()}
    adam_v = {name: np.zeros_like(arr) for name, arr in params.items()}
    trace: list[dict[str, float]] = []
    warm_config = replace(config, hsic_weight=0.0) if config.hsic_warmup > 0 else config

    for epoch in range(config.epochs):
        eps_row = rng.standard_normal((c["n1"], config.latent_dim))
        eps_col = rng.standard_normal((c["n2"], config.latent_dim))
        wt = {name: ad.tensor(arr) for name, arr in params.items()}
        cfg_epoch = config if epoch >= config.hsic_warmup else warm_config
        loss, terms = _loss_graph(c, wt, eps_row, eps_col, cfg_epoch)
        if not np.isfinite(terms["total"]):
            raise TrainingDiverged(epoch, terms["total"])
        grads = ad.gradients(loss, list(wt.values()))

        step = epoch + 1
        for (name, arr), g in zip(params.items(), grads):
            m = adam_m[name]
            v = adam_v[name]
            m *= _ADAM_B1
            m += (1.0 - _ADAM_B1) * g
            v *= _ADAM_B2
            v += (1.0 - _ADAM_B2) * g * g
            m_hat = m / (1.0 - _ADAM_B1**step)
            v_hat = v / (1.0 - _ADAM_B2**step)
            arr -= config.learning_rate * m_hat / (np.sqrt(v_hat) + _ADAM_EPS)
        trace.append({"epoch": float(epoch), **terms})

    final = EncoderWeights(**{name: arr.copy() for name, arr in params.items()})
    return TrainedModel(weights=final, config=config, signature=c["signature"], trace=trace)


def predict_edge_probabilities(model: TrainedModel, graph: BipartiteGraph) -> Array:
    """Deterministic decoded probabilities using the posterior means."""
    latent = encode(graph, model.weights, rng=None)
    return decode(latent.mu_row, latent.mu_col, model.signature)


def predict_connectivity(
    model: TrainedModel, graph: BipartiteGraph, plants: PlantAssignment | None = None
) -> float:
    """Expected connectivity; with plants, sessions are first averaged
    into plant-level interaction probabilities."""
    probs = predict_edge_probabilities(model, graph)
    if plants is not None:
        probs = plant_average_matrix(plants).T @ probs
    return connectivity(probs)


class ConnectivityFunctional:
    """Expected connectivity as a function of the row covariates only.

    Freezes the trained weights and the column-side latent means, then
    exposes the value, its gradient, and batched evaluations where only a
    subset of rows differs from a base matrix (the shape the grouped
    Shapley method needs).  All paths share the same forward algebra.
    """

    def __init__(
        self,
        model: TrainedModel,
        graph: BipartiteGraph,
        plants: PlantAssignment | None = None,
        chunk_size: int = 16,
    ):
        nb = normalize_incidence(graph.incidence).values
        self._nb = nb
        self._nbt = nb.T.copy()
        self._w1 = model.weights.w1_row
        self._w2 = model.weights.w2_mu_row
        _, _, mu_col, _ = _forward_means(graph.row_cov, graph.col_cov, nb, self._nbt, model.weights)
        # D x n2 projection folding the signature into the column means
        self._proj = model.signature[:, None] * mu_col.T
        n1, n2 = graph.incidence.shape
        if plants is None:
            omega = np.full((n1, 1), 1.0 / (n1 * n2))
        else:
            counts = plants.onehot.sum(axis=0)
            u = plants.n_plants
            omega = (1.0 / (u * n2 * counts[plants.labels]))[:, None]
        self._omega = omega
        self._chunk = int(chunk_size)
        self._nbc = ad.tensor(nb)
        self._nbtc = ad.tensor(self._nbt)
        self._w1c = ad.tensor(self._w1)
        self._w2c = ad.tensor(self._w2)
        self._projc = ad.tensor(self._proj)
        self._omegac = ad.tensor(omega)

    @property
    def n_features(self) -> int:
        return self._w1.shape[0]

    def value(self, x1: Array) -> float:
        h = np.maximum(self._nbt @ (x1 @ self._w1), 0.0)
        mu = self._nb @ (h @ self._w2)
        probs = ad.stable_sigmoid(mu @ self._proj)
        return float(np.sum(probs * self._omega))

    def value_and_grad(self, x1: Array) -> tuple[float, Array]:
        xc = ad.tensor(x1)
        h = ad.relu(ad.matmul(self._nbtc, ad.matmul(xc, self._w1c)))
        mu = ad.matmul(self._nbc, ad.matmul(h, self._w2c))
        probs = ad.sigmoid(ad.matmul(mu, self._projc))
        val = ad.total(ad.multiply(probs, self._omegac))
        return val.item(), ad.gradient(val, xc)

    def value_batch(self, xs) -> Array:
        return np.array([self.value(x) for x in xs])

    def value_rows_batch(self, x_base: Array, rows: Array, rows_values: Array) -> Array:
        """Values for many variants of x_base differing only on `rows`.

        rows_values has shape (n_variants, len(rows), d1).  The base hidden
        pre-activation is computed once; each variant adds the low-rank
        correction from its changed rows before the nonlinearity.
        """
        rows = np.asarray(rows, dtype=np.intp)
        base_pre = self._nbt @ (x_base @ self._w1)
        nbt_rows = self._nbt[:, rows]
        base_rows = x_base[rows]
        n = rows_values.shape[0]
        out = np.empty(n)
        for start in range(0, n, self._chunk):
            stop = min(start + self._chunk, n)
            delta = rows_values[start:stop] - base_rows
            pre = base_pre[None, :, :] + nbt_rows @ (delta @ self._w1)
            h = np.maximum(pre, 0.0)
            mu = self._nb @ (h @ self._w2)
            probs = ad.stable_sigmoid(mu @ self._proj)
            out[start:stop] = np.sum(probs * self._omega, axis=(1, 2))
        return out


def save_checkpoint(path, model: TrainedModel) -> None:
    """Write weights, signature and config; round-trips bit-exactly."""
    meta = json.dumps({"config": asdict(model.config), "format": 1}, sort_keys=True)
    arrays = {name: np.ascontiguousarray(arr) for name, arr in model.weights.as_dict().items()}
    with open(path, "wb") as fh:
        np.savez(fh, signature=model.signature, meta=np.array(meta), **arrays)


def load_checkpoint(path) -> TrainedModel:
    with np.load(path, allow_pickle=False) as data:
        meta = json.loads(str(data["meta"]))
        cfg_dict = meta["config"]
        cfg_dict["hsic_columns"] = tuple(cfg_dict.get("hsic_columns", ()))
        config = ModelConfig(**cfg_dict)
        weights = EncoderWeights(**{name: data[name] for name in _WEIGHT_NAMES})
        signature = data["signature"]
    return TrainedModel(weights=weights, config=config, signature=signature, trace=[])
