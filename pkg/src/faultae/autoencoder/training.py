"""Adam optimizer and the mini-batch training loop."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, DataError, DivergenceError, ShapeError
from .model import LOSS_KINDS, AutoencoderModel, loss_and_gradients, window_losses

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    epochs: int = 50
    batch_size: int = 128
    loss: str = "MAE"
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    rng_seed: int = 0
    early_stop_patience: int = 10
    validation_fraction: float = 0.1

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be positive")
        if self.epochs < 0 or self.batch_size < 1:
            raise ConfigError("epochs must be >= 0 and batch_size >= 1")
        if not 0 <= self.validation_fraction < 1:
            raise ConfigError("validation_fraction must lie in [0, 1)")
        if self.loss.upper() not in LOSS_KINDS:
            raise ConfigError(f"loss must be one of {LOSS_KINDS}")
        object.__setattr__(self, "loss", self.loss.upper())


@dataclass
class AdamState:
    first_moment: list
    second_moment: list
    step_count: int = 0

    @classmethod
    def zeros_like(cls, params):
        return cls([np.zeros_like(p) for p in params], [np.zeros_like(p) for p in params])


def adam_step(params, grads, state: AdamState, config: TrainConfig):
    """One bias-corrected Adam update. Returns new parameter arrays and a new state."""
    if not (len(params) == len(grads) == len(state.first_moment) == len(state.second_moment)):
        raise ShapeError("params, grads and optimizer state differ in length")
    b1, b2 = config.adam_beta1, config.adam_beta2
    step = state.step_count + 1
    lr_t = config.learning_rate
    c1 = 1.0 - b1**step
    c2 = 1.0 - b2**step
    new_params, new_m, new_v = [], [], []
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        if not p.shape == g.shape == m.shape == v.shape:
            raise ShapeError(f"shape mismatch: param {p.shape}, grad {g.shape}")
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * (g * g)
        new_params.append(p - lr_t * (m / c1) / (np.sqrt(v / c2) + config.adam_eps))
        new_m.append(m)
        new_v.append(v)
    return new_params, AdamState(new_m, new_v, step)


@dataclass
class TrainResult:
    model: AutoencoderModel
    loss_history: list = field(default_factory=list)
    val_history: list = field(default_factory=list)

    @property
    def epochs_run(self) -> int:
        return len(self.loss_history)


def evaluate_loss(model, windows, kind="MAE", batch_size=2048):
    """Mean loss over all windows, accumulated batch by batch in a fixed order."""
    total = 0.0
    for i in range(0, len(windows), batch_size):
        chunk = np.asarray(windows[i : i + batch_size])
        total += window_losses(model.reconstruct(chunk), chunk, kind).sum()
    return total / len(windows)


def train(model: AutoencoderModel, train_windows, config: TrainConfig | None = None) -> TrainResult:
    """Fit a copy of ``model`` to reconstruct ``train_windows``.

    A seeded permutation holds out ``validation_fraction`` of the windows and
    reshuffles the rest every epoch. Early stopping watches the training loss.
    """
    config = config or TrainConfig()
    windows = getattr(train_windows, "windows", train_windows)
    windows = np.asarray(windows, dtype=np.float64)
    if windows.ndim != 2 or windows.shape[0] == 0:
        raise DataError("training needs a non-empty (M, T) window matrix")
    if windows.shape[1] != model.input_len:
        raise ShapeError(f"window length {windows.shape[1]} != model input length {model.input_len}")

    model = model.copy()
    result = TrainResult(model)
    if config.epochs == 0:
        return result

    rng = np.random.default_rng(config.rng_seed)
    order = rng.permutation(len(windows))
    n_val = int(len(windows) * config.validation_fraction)
    if n_val >= len(windows):
        n_val = 0
    val_idx, train_idx = np.sort(order[:n_val]), order[n_val:]

    params = model.parameters()
    state = AdamState.zeros_like(params)
    best, stale = np.inf, 0
    for epoch in range(1, config.epochs + 1):
        perm = train_idx[rng.permutation(len(train_idx))]
        total = 0.0
        for start in range(0, len(perm), config.batch_size):
            batch = windows[perm[start : start + config.batch_size]]
            value, grads = loss_and_gradients(model, batch, config.loss)
            if not np.isfinite(value):
                raise DivergenceError(f"loss became {value} in epoch {epoch}", epoch=epoch)
            params, state = adam_step(params, grads, state, config)
            model.set_parameters(params)
            params = model.parameters()
            total += value * len(batch)
        epoch_loss = total / len(perm)
        result.loss_history.append(epoch_loss)
        if n_val:
            result.val_history.append(evaluate_loss(model, windows[val_idx], config.loss))
        logger.info("epoch %d loss %.6f", epoch, epoch_loss)

        if epoch_loss < best:
            best, stale = epoch_loss, 0
        else:
            stale += 1
            if config.early_stop_patience and stale >= config.early_stop_patience:
                logger.info("early stop after epoch %d", epoch)
                break
    return result
