"""Convolutional autoencoder: encoder/decoder stacks, reconstruction losses and gradients."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, ShapeError
from .layers import Conv1D, TransposedConv1D, layer_from_description

LOSS_KINDS = ("MAE", "MSE")


class AutoencoderModel:
    """Encoder conv stack followed by a transposed-conv decoder stack.

    The composed length formulas must map ``input_len`` back to itself, and the
    bottleneck (channels x length after the encoder) must be smaller than
    ``input_len`` unless ``require_compression`` is off.
    """

    def __init__(self, encoder_layers, decoder_layers, input_len, require_compression=True):
        self.encoder_layers = list(encoder_layers)
        self.decoder_layers = list(decoder_layers)
        self.input_len = int(input_len)
        if not self.encoder_layers or not self.decoder_layers:
            raise ConfigError("encoder and decoder need at least one layer each")

        layers = self.layers
        if layers[0].in_channels != 1 or layers[-1].out_channels != 1:
            raise ConfigError("model input and output must have a single channel")
        length = self.input_len
        for prev, layer in zip([None] + layers[:-1], layers):
            if prev is not None and prev.out_channels != layer.in_channels:
                raise ConfigError(
                    f"channel mismatch: {prev.out_channels} -> {layer.in_channels}"
                )
            length = layer.output_len(length)
            if length < 1:
                raise ConfigError(f"{layer.kind} produces non-positive length")
            if layer is self.encoder_layers[-1]:
                self.latent_shape = (layer.out_channels, length)
        if length != self.input_len:
            raise ConfigError(f"architecture maps length {self.input_len} to {length}")
        if require_compression and self.latent_size >= self.input_len:
            raise ConfigError(
                f"latent size {self.latent_size} is not smaller than input length {self.input_len}"
            )
        self.require_compression = require_compression

    @property
    def layers(self):
        return self.encoder_layers + self.decoder_layers

    @property
    def latent_size(self) -> int:
        return self.latent_shape[0] * self.latent_shape[1]

    def parameters(self):
        """All weight and bias arrays in declared order (layer by layer, weight then bias)."""
        return [p for layer in self.layers for p in layer.params]

    def set_parameters(self, values):
        params = self.parameters()
        if len(values) != len(params):
            raise ShapeError(f"expected {len(params)} parameter arrays, got {len(values)}")
        for p, v in zip(params, values):
            v = np.asarray(v, dtype=np.float64)
            if v.shape != p.shape:
                raise ShapeError(f"parameter shape {v.shape} does not match {p.shape}")
            p[...] = v

    @property
    def n_params(self) -> int:
        return sum(p.size for p in self.parameters())

    def init_params(self, seed):
        rng = np.random.default_rng(seed)
        for layer in self.layers:
            layer.init_params(rng)
        return self

    def describe(self):
        return {
            "input_len": self.input_len,
            "encoder": [layer.describe() for layer in self.encoder_layers],
            "decoder": [layer.describe() for layer in self.decoder_layers],
            "require_compression": self.require_compression,
        }

    @classmethod
    def from_description(cls, desc):
        return cls(
            [layer_from_description(d) for d in desc["encoder"]],
            [layer_from_description(d) for d in desc["decoder"]],
            desc["input_len"],
            desc.get("require_compression", True),
        )

    def copy(self):
        clone = AutoencoderModel.from_description(self.describe())
        clone.set_parameters([p.copy() for p in self.parameters()])
        return clone

    def _as_batch(self, windows):
        x = np.asarray(windows, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.input_len:
            raise ShapeError(f"expected windows of length {self.input_len}, got shape {x.shape}")
        return x

    def encode(self, windows):
        h = self._as_batch(windows)[:, None, :]
        for layer in self.encoder_layers:
            h, _ = layer.forward(h)
        return h

    def reconstruct(self, windows, batch_size=1024):
        """Forward pass; accepts (T,) or (B, T) and returns the same shape.

        Large inputs are processed ``batch_size`` windows at a time.
        """
        squeeze = np.ndim(windows) == 1
        x = self._as_batch(windows)
        out = np.empty_like(x)
        for start in range(0, len(x), batch_size):
            h = x[start : start + batch_size, None, :]
            for layer in self.layers:
                h, _ = layer.forward(h)
            out[start : start + batch_size] = h[:, 0, :]
        return out[0] if squeeze else out


def default_autoencoder(input_len, channels=(32, 2), kernel_len=7, stride=2, seed=0):
    """Two strided conv layers down, two mirrored transposed-conv layers up.

    Padding is ``kernel_len // 2``; each decoder ``output_padding`` is chosen so
    the output length equals the matching encoder input length.
    """
    pad = kernel_len // 2
    encoder, lengths, in_ch = [], [], 1
    length = input_len
    for out_ch in channels:
        layer = Conv1D(in_ch, out_ch, kernel_len, stride, pad, "relu")
        lengths.append(length)
        length = layer.output_len(length)
        encoder.append(layer)
        in_ch = out_ch
    decoder = []
    out_channels = list(channels[-2::-1]) + [1]
    for i, out_ch in enumerate(out_channels):
        target = lengths[-1 - i]
        base = (length - 1) * stride - 2 * pad + kernel_len
        if not 0 <= target - base < stride:
            raise ConfigError(f"cannot mirror length {target} from {length}")
        activation = "linear" if i == len(out_channels) - 1 else "relu"
        decoder.append(TransposedConv1D(in_ch, out_ch, kernel_len, stride, pad, target - base, activation))
        in_ch, length = out_ch, target
    return AutoencoderModel(encoder, decoder, input_len).init_params(seed)


def forward(model: AutoencoderModel, window):
    return model.reconstruct(window)


def loss(reconstruction, target, kind="MAE"):
    """Mean absolute or mean squared reconstruction error over every element."""
    r = np.asarray(reconstruction, dtype=np.float64)
    t = np.asarray(target, dtype=np.float64)
    if r.shape != t.shape:
        raise ShapeError(f"reconstruction shape {r.shape} != target shape {t.shape}")
    diff = r - t
    kind = kind.upper()
    if kind == "MAE":
        return float(np.mean(np.abs(diff)))
    if kind == "MSE":
        return float(np.mean(diff * diff))
    raise ConfigError(f"unknown loss {kind!r}")


def window_losses(reconstruction, target, kind="MAE"):
    """Per-window loss for (B, T) arrays."""
    diff = np.asarray(reconstruction) - np.asarray(target)
    if kind.upper() == "MAE":
        return np.abs(diff).mean(axis=1)
    if kind.upper() == "MSE":
        return (diff * diff).mean(axis=1)
    raise ConfigError(f"unknown loss {kind!r}")


def loss_and_gradients(model: AutoencoderModel, windows, kind="MAE"):
    """Batch-mean loss and its gradient w.r.t. every parameter, in ``model.parameters()`` order.

    The MAE subgradient at an exactly zero residual is taken as 0.
    """
    x = model._as_batch(windows)
    kind = kind.upper()
    if kind not in LOSS_KINDS:
        raise ConfigError(f"unknown loss {kind!r}")
    h = x[:, None, :]
    caches = []
    for layer in model.layers:
        h, cache = layer.forward(h)
        caches.append(cache)
    diff = h[:, 0, :] - x
    if kind == "MAE":
        value = float(np.mean(np.abs(diff)))
        grad = np.sign(diff) / diff.size
    else:
        value = float(np.mean(diff * diff))
        grad = 2.0 * diff / diff.size

    dh = grad[:, None, :]
    grads = []
    for layer, cache in zip(reversed(model.layers), reversed(caches)):
        dh, layer_grads = layer.backward(dh, cache)
        grads = layer_grads + grads
    return value, grads


def backward(model: AutoencoderModel, window, loss_kind="MAE"):
    return loss_and_gradients(model, window, loss_kind)[1]
