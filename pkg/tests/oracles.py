"""Independent reference implementations used only by the tests."""

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

from faultae.autoencoder.layers import Conv1D, TransposedConv1D
from faultae.autoencoder.model import AutoencoderModel


def naive_conv1d(x, w, b, stride, pad):
    """x: (C, L); w: (O, C, K). Direct nested-loop cross-correlation."""
    c_in, n = x.shape
    o_ch, _, k_len = w.shape
    xp = np.zeros((c_in, n + 2 * pad))
    xp[:, pad : pad + n] = x
    out_len = (n + 2 * pad - k_len) // stride + 1
    y = np.zeros((o_ch, out_len))
    for o in range(o_ch):
        for j in range(out_len):
            acc = b[o]
            for c in range(c_in):
                for k in range(k_len):
                    acc += w[o, c, k] * xp[c, j * stride + k]
            y[o, j] = acc
    return y


def naive_conv_transpose1d(x, w, b, stride, pad, out_pad):
    """x: (I, L); w: (I, O, K). Scatter every input sample times the kernel, then crop."""
    i_ch, n = x.shape
    _, o_ch, k_len = w.shape
    out_len = (n - 1) * stride - 2 * pad + k_len + out_pad
    full = np.zeros((o_ch, (n - 1) * stride + k_len + out_pad))
    for i in range(i_ch):
        for l in range(n):
            for o in range(o_ch):
                for k in range(k_len):
                    full[o, l * stride + k] += x[i, l] * w[i, o, k]
    return full[:, pad : pad + out_len] + b[:, None]


def naive_layer(layer, x):
    if isinstance(layer, Conv1D):
        z = naive_conv1d(x, layer.weight, layer.bias, layer.stride, layer.padding)
    else:
        z = naive_conv_transpose1d(x, layer.weight, layer.bias, layer.stride, layer.padding,
                                   layer.output_padding)
    return z


def naive_forward(model, window, return_preactivations=False):
    h = np.asarray(window, dtype=float)[None, :]
    pre = []
    for layer in model.layers:
        z = naive_layer(layer, h)
        pre.append(z)
        h = np.maximum(z, 0.0) if layer.activation == "relu" else z
    return (h[0], pre) if return_preactivations else h[0]


def brute_loss(rec, target, kind):
    total = 0.0
    for a, b in zip(np.ravel(rec), np.ravel(target)):
        total += abs(a - b) if kind == "MAE" else (a - b) ** 2
    return total / np.size(target)


def batch_loss(model, x, kind):
    return brute_loss(np.array([naive_forward(model, w) for w in x]), x, kind)


def numeric_gradients(model, x, kind, h=1e-6, loss_fn=None):
    """Central finite differences of the batch-mean loss w.r.t. every parameter entry."""
    from faultae.autoencoder.model import loss as fast_loss

    loss_fn = loss_fn or (lambda m: fast_loss(m.reconstruct(x), x, kind))
    grads = []
    for p in model.parameters():
        g = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            up = loss_fn(model)
            p[idx] = old - h
            down = loss_fn(model)
            p[idx] = old
            g[idx] = (up - down) / (2 * h)
        grads.append(g)
    return grads


def max_relative_error(analytic, numeric, floor=1e-4):
    """Largest elementwise |a - n| / max(|a|, |n|, floor) over all parameter arrays.

    The floor keeps gradients that cancel to zero exactly (finite differences
    then return pure roundoff, ~1e-10 at h=1e-6) from dominating.
    """
    worst = 0.0
    for a, n in zip(analytic, numeric):
        denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        worst = max(worst, float(np.max(np.abs(a - n) / denom)))
    return worst


@st.composite
def small_autoencoders(draw, max_len=32, max_encoder_layers=2):
    """Random conv autoencoders whose decoders mirror the encoder lengths exactly."""
    t = draw(st.integers(6, max_len))
    n_enc = draw(st.integers(1, max_encoder_layers))
    encoder, lengths, ch, length = [], [], 1, t
    for _ in range(n_enc):
        k = draw(st.integers(1, 5))
        s = draw(st.integers(1, 2))
        p = draw(st.integers(0, k // 2))
        out = draw(st.integers(1, 3))
        layer = Conv1D(ch, out, k, s, p, draw(st.sampled_from(["relu", "linear"])))
        new_len = layer.output_len(length)
        assume(new_len >= 1)
        encoder.append(layer)
        lengths.append(length)
        ch, length = out, new_len
    decoder = []
    for i in range(n_enc):
        target = lengths[-1 - i]
        out = 1 if i == n_enc - 1 else encoder[-2 - i].out_channels
        options = []
        for s in (1, 2):
            for k in range(1, 8):
                for p in range(0, k // 2 + 1):
                    op = target - ((length - 1) * s - 2 * p + k)
                    if 0 <= op < s:
                        options.append((k, s, p, op))
        assume(options)
        k, s, p, op = draw(st.sampled_from(options))
        act = "linear" if i == n_enc - 1 else draw(st.sampled_from(["relu", "linear"]))
        decoder.append(TransposedConv1D(ch, out, k, s, p, op, act))
        ch, length = out, target
    model = AutoencoderModel(encoder, decoder, t, require_compression=False)
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    for param in model.parameters():
        param[...] = rng.normal(0.0, 0.5, param.shape)
    return model, rng


def well_conditioned(model, x, residual_gap=1e-3, preactivation_gap=1e-4):
    """True when no MAE residual or ReLU pre-activation sits near its kink."""
    for w in x:
        rec, pre = naive_forward(model, w, return_preactivations=True)
        if np.abs(rec - w).min() <= residual_gap:
            return False
        for z, layer in zip(pre, model.layers):
            if layer.activation == "relu" and np.abs(z).min() <= preactivation_gap:
                return False
    return True


def count_confusion(pred, truth):
    """Per-element (tp, fp, fn, tn) count with fault as positive."""
    tp = fp = fn = tn = 0
    for p, t in zip(pred, truth):
        if p and t:
            tp += 1
        elif p:
            fp += 1
        elif t:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def score_formulas(tp, fp, fn, tn):
    def div(a, b):
        return a / b if b else None

    p, r = div(tp, tp + fp), div(tp, tp + fn)
    f1 = None if p is None or r is None or p + r == 0 else 2 * p * r / (p + r)
    return {"accuracy": (tp + tn) / (tp + fp + fn + tn), "precision": p, "recall": r,
            "specificity": div(tn, tn + fp), "f1": f1}


def jaccard(a, b):
    """Intersection over union of two half-open intervals."""
    inter = max(0, min(a[1], b[1]) - max(a[0], b[0]))
    union = (a[1] - a[0]) + (b[1] - b[0]) - inter
    return inter / union if union else 0.0
