"""Principal-component baseline and the linear autoencoder it should coincide with.

A linear autoencoder with latent size k trained on squared error spans the same
subspace as the top-k principal components, so its reconstruction error
converges to the PCA optimum from above.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .autoencoder.layers import Conv1D, TransposedConv1D
from .autoencoder.model import AutoencoderModel
from .autoencoder.training import TrainConfig, TrainResult, train
from .errors import ConfigError, ShapeError


class PCABasis:
    def __init__(self, mean_vector, components, explained_variance=None):
        self.mean_vector = np.asarray(mean_vector, dtype=np.float64)
        self.components = np.atleast_2d(np.asarray(components, dtype=np.float64))
        self.explained_variance = explained_variance

    @property
    def k(self) -> int:
        return self.components.shape[0]

    @property
    def window_len(self) -> int:
        return self.mean_vector.size


def _matrix(windows):
    return np.asarray(getattr(windows, "windows", windows), dtype=np.float64)


def fit_pca(windows, k: int) -> PCABasis:
    """Top-k principal directions from the SVD of the centred window matrix."""
    x = _matrix(windows)
    m, t = x.shape
    if not 1 <= k < t:
        raise ConfigError(f"k must satisfy 1 <= k < window length {t}, got {k}")
    if k > m:
        raise ConfigError(f"k={k} exceeds the number of windows {m}")
    mean = x.mean(axis=0)
    _, sing, vt = np.linalg.svd(x - mean, full_matrices=False)
    # sign convention: largest-magnitude entry of each component is positive
    comps = vt[:k]
    signs = np.sign(comps[np.arange(k), np.abs(comps).argmax(axis=1)])
    comps = comps * signs[:, None]
    return PCABasis(mean, comps, sing[:k] ** 2 / m)


def pca_reconstruct(basis: PCABasis, window):
    w = np.asarray(window, dtype=np.float64)
    if w.shape[-1] != basis.window_len:
        raise ShapeError(f"window length {w.shape[-1]} != basis length {basis.window_len}")
    centred = w - basis.mean_vector
    return basis.mean_vector + (centred @ basis.components.T) @ basis.components


def reconstruction_mse(reconstruction, target) -> float:
    d = np.asarray(reconstruction) - np.asarray(target)
    return float(np.mean(d * d))


def pca_mse(basis: PCABasis, windows) -> float:
    x = _matrix(windows)
    return reconstruction_mse(pca_reconstruct(basis, x), x)


def linear_autoencoder(window_len: int, k: int, seed: int = 0) -> AutoencoderModel:
    """Dense-equivalent pair: full-width linear conv down to k channels of length 1, and back."""
    encoder = Conv1D(1, k, window_len, activation="linear")
    decoder = TransposedConv1D(k, 1, window_len, activation="linear")
    model = AutoencoderModel([encoder], [decoder], window_len, require_compression=k < window_len)
    return model.init_params(seed)


def train_linear_ae(windows, k: int, config: TrainConfig | None = None) -> TrainResult:
    """Gradient-train a linear autoencoder with latent size ``k`` on squared error.

    Matches the PCA-k optimum when the window mean is the same at every
    position (true for standardized stationary windows).
    """
    x = _matrix(windows)
    config = config or TrainConfig(loss="MSE")
    if config.loss != "MSE":
        config = replace(config, loss="MSE")
    model = linear_autoencoder(x.shape[1], k, config.rng_seed)
    # conv biases are per channel, so the output offset is one scalar shared by
    # all positions; a position-dependent data mean costs one latent dimension
    model.decoder_layers[0].bias[...] = x.mean()
    return train(model, x, config)
