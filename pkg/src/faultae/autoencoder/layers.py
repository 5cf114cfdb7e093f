"""Batched 1-D convolution and transposed convolution with hand-written backward passes.

Tensors are laid out ``(batch, channels, length)``. Each ``forward`` returns the
output together with a cache that ``backward`` consumes.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, ShapeError

ACTIVATIONS = ("relu", "linear")


def conv_output_len(input_len, kernel_len, stride=1, padding=0):
    return (input_len + 2 * padding - kernel_len) // stride + 1


def conv_transpose_output_len(input_len, kernel_len, stride=1, padding=0, output_padding=0):
    return (input_len - 1) * stride - 2 * padding + kernel_len + output_padding


def _activate(z, activation):
    return np.maximum(z, 0.0) if activation == "relu" else z


def _activation_grad(dy, z, activation):
    return dy * (z > 0) if activation == "relu" else dy


class _Layer:
    kind = ""

    def __init__(self, in_channels, out_channels, kernel_len, stride=1, padding=0, activation="relu"):
        if min(in_channels, out_channels, kernel_len, stride) < 1 or padding < 0:
            raise ConfigError("channel counts, kernel length and stride must be >= 1, padding >= 0")
        activation = activation.lower()
        if activation not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {activation!r}")
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel_len = kernel_len
        self.stride = stride
        self.padding = padding
        self.activation = activation
        self.weight = np.zeros(self.weight_shape)
        self.bias = np.zeros(out_channels)

    @property
    def params(self):
        return [self.weight, self.bias]

    @property
    def fan_in(self):
        return self.in_channels * self.kernel_len

    @property
    def fan_out(self):
        return self.out_channels * self.kernel_len

    def init_params(self, rng):
        limit = np.sqrt(6.0 / (self.fan_in + self.fan_out))
        self.weight[...] = rng.uniform(-limit, limit, self.weight_shape)
        self.bias[...] = 0.0

    def describe(self):
        return {
            "kind": self.kind,
            "in_channels": self.in_channels,
            "out_channels": self.out_channels,
            "kernel_len": self.kernel_len,
            "stride": self.stride,
            "padding": self.padding,
            "output_padding": getattr(self, "output_padding", 0),
            "activation": self.activation,
        }

    def _check_input(self, x):
        if x.ndim != 3 or x.shape[1] != self.in_channels:
            raise ShapeError(
                f"{self.kind} expects (batch, {self.in_channels}, length), got {x.shape}"
            )


def _gather(xp, kernel_len, stride, out_len):
    """cols[b, c, k, l] = xp[b, c, l*stride + k]"""
    b, c, _ = xp.shape
    cols = np.empty((b, c, kernel_len, out_len))
    span = stride * (out_len - 1) + 1
    for k in range(kernel_len):
        cols[:, :, k, :] = xp[:, :, k : k + span : stride]
    return cols


def _scatter_add(target, cols, stride):
    """Adjoint of ``_gather``: target[b, c, l*stride + k] += cols[b, c, k, l]."""
    kernel_len, out_len = cols.shape[2], cols.shape[3]
    span = stride * (out_len - 1) + 1
    for k in range(kernel_len):
        target[:, :, k : k + span : stride] += cols[:, :, k, :]
    return target


class Conv1D(_Layer):
    kind = "conv1d"

    @property
    def weight_shape(self):
        return (self.out_channels, self.in_channels, self.kernel_len)

    def output_len(self, input_len):
        return conv_output_len(input_len, self.kernel_len, self.stride, self.padding)

    def forward(self, x):
        self._check_input(x)
        b, c, n = x.shape
        p = self.padding
        xp = np.pad(x, ((0, 0), (0, 0), (p, p))) if p else x
        cols = _gather(xp, self.kernel_len, self.stride, self.output_len(n))
        w2 = self.weight.reshape(self.out_channels, -1)
        z = np.matmul(w2, cols.reshape(b, c * self.kernel_len, -1))
        z += self.bias[None, :, None]
        return _activate(z, self.activation), (x.shape, cols, z)

    def backward(self, dy, cache):
        (b, c, n), cols, z = cache
        dz = _activation_grad(dy, z, self.activation)
        p = self.padding
        cols2 = cols.reshape(b, c * self.kernel_len, -1)
        dw = np.tensordot(dz, cols2, axes=([0, 2], [0, 2])).reshape(self.weight_shape)
        db = dz.sum(axis=(0, 2))
        w2 = self.weight.reshape(self.out_channels, -1)
        dcols = np.matmul(w2.T, dz).reshape(cols.shape)
        dxp = _scatter_add(np.zeros((b, c, n + 2 * p)), dcols, self.stride)
        return dxp[:, :, p : p + n], [dw, db]


class TransposedConv1D(_Layer):
    kind = "conv_transpose1d"

    def __init__(self, in_channels, out_channels, kernel_len, stride=1, padding=0,
                 output_padding=0, activation="relu"):
        super().__init__(in_channels, out_channels, kernel_len, stride, padding, activation)
        if output_padding < 0:
            raise ConfigError("output_padding must be non-negative")
        self.output_padding = output_padding

    @property
    def weight_shape(self):
        return (self.in_channels, self.out_channels, self.kernel_len)

    def output_len(self, input_len):
        return conv_transpose_output_len(
            input_len, self.kernel_len, self.stride, self.padding, self.output_padding
        )

    def _full_len(self, input_len):
        return (input_len - 1) * self.stride + self.kernel_len + self.output_padding

    def _w2(self):
        # (I, O*K)
        return self.weight.reshape(self.in_channels, -1)

    def forward(self, x):
        self._check_input(x)
        b, _, n = x.shape
        p = self.padding
        # contrib[b, o, k, l] = sum_i w[i, o, k] * x[b, i, l]
        contrib = np.matmul(self._w2().T, x).reshape(b, self.out_channels, self.kernel_len, n)
        full = _scatter_add(np.zeros((b, self.out_channels, self._full_len(n))), contrib, self.stride)
        z = full[:, :, p : p + self.output_len(n)] + self.bias[None, :, None]
        return _activate(z, self.activation), (x, z)

    def backward(self, dy, cache):
        x, z = cache
        dz = _activation_grad(dy, z, self.activation)
        b, _, n = x.shape
        p = self.padding
        dfull = np.zeros((b, self.out_channels, self._full_len(n)))
        dfull[:, :, p : p + dz.shape[2]] = dz
        g = _gather(dfull, self.kernel_len, self.stride, n).reshape(b, -1, n)
        dx = np.matmul(self._w2(), g)
        dw = np.tensordot(x, g, axes=([0, 2], [0, 2])).reshape(self.weight_shape)
        db = dz.sum(axis=(0, 2))
        return dx, [dw, db]


LAYER_KINDS = {cls.kind: cls for cls in (Conv1D, TransposedConv1D)}


def layer_from_description(desc):
    cls = LAYER_KINDS.get(desc["kind"])
    if cls is None:
        raise ConfigError(f"unknown layer kind {desc['kind']!r}")
    kwargs = dict(
        in_channels=desc["in_channels"],
        out_channels=desc["out_channels"],
        kernel_len=desc["kernel_len"],
        stride=desc["stride"],
        padding=desc["padding"],
        activation=desc["activation"],
    )
    if cls is TransposedConv1D:
        kwargs["output_padding"] = desc.get("output_padding", 0)
    return cls(**kwargs)
