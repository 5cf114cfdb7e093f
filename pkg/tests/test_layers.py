import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import naive_conv1d, naive_conv_transpose1d, naive_forward, small_autoencoders

from faultae.autoencoder import (
    AutoencoderModel,
    Conv1D,
    TransposedConv1D,
    conv_output_len,
    conv_transpose_output_len,
    default_autoencoder,
    forward,
)
from faultae.errors import ConfigError, ShapeError


@given(st.integers(1, 40), st.integers(1, 7), st.integers(1, 3), st.integers(0, 3),
       st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**31))
def test_conv_matches_naive(n, k, s, p, cin, cout, seed):
    if n + 2 * p < k:
        return
    rng = np.random.default_rng(seed)
    layer = Conv1D(cin, cout, k, s, p, "linear")
    layer.weight[...] = rng.standard_normal(layer.weight.shape)
    layer.bias[...] = rng.standard_normal(cout)
    x = rng.standard_normal((2, cin, n))
    y, _ = layer.forward(x)
    assert y.shape[2] == conv_output_len(n, k, s, p)
    for b in range(2):
        np.testing.assert_allclose(y[b], naive_conv1d(x[b], layer.weight, layer.bias, s, p),
                                   rtol=0, atol=1e-12)


@given(st.integers(1, 30), st.integers(1, 7), st.integers(1, 3), st.integers(0, 3),
       st.integers(0, 2), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**31))
def test_conv_transpose_matches_naive(n, k, s, p, op, cin, cout, seed):
    if conv_transpose_output_len(n, k, s, p, op) < 1:
        return
    rng = np.random.default_rng(seed)
    layer = TransposedConv1D(cin, cout, k, s, p, op, "linear")
    layer.weight[...] = rng.standard_normal(layer.weight.shape)
    layer.bias[...] = rng.standard_normal(cout)
    x = rng.standard_normal((2, cin, n))
    y, _ = layer.forward(x)
    assert y.shape[2] == conv_transpose_output_len(n, k, s, p, op)
    for b in range(2):
        np.testing.assert_allclose(
            y[b], naive_conv_transpose1d(x[b], layer.weight, layer.bias, s, p, op), rtol=0, atol=1e-12
        )


def test_layers_agree_with_torch():
    torch = pytest.importorskip("torch")
    rng = np.random.default_rng(0)
    conv = Conv1D(3, 4, 5, 2, 2, "linear")
    tconv = TransposedConv1D(4, 2, 5, 2, 2, 1, "linear")
    for layer in (conv, tconv):
        layer.weight[...] = rng.standard_normal(layer.weight.shape)
        layer.bias[...] = rng.standard_normal(layer.bias.shape)
    x = rng.standard_normal((2, 3, 21))
    h, _ = conv.forward(x)
    y, _ = tconv.forward(h)
    tx = torch.from_numpy(x)
    th = torch.nn.functional.conv1d(tx, torch.from_numpy(conv.weight), torch.from_numpy(conv.bias),
                                    stride=2, padding=2)
    ty = torch.nn.functional.conv_transpose1d(th, torch.from_numpy(tconv.weight),
                                              torch.from_numpy(tconv.bias), stride=2, padding=2,
                                              output_padding=1)
    np.testing.assert_allclose(h, th.numpy(), atol=1e-12)
    np.testing.assert_allclose(y, ty.numpy(), atol=1e-12)


def test_zero_model_gives_zero_output(rng):
    model = default_autoencoder(64, seed=3)
    for p in model.parameters():
        p[...] = 0.0
    assert not forward(model, rng.standard_normal(64)).any()


def test_identity_kernel():
    enc = Conv1D(1, 1, 1, activation="linear")
    dec = TransposedConv1D(1, 1, 1, activation="linear")
    enc.weight[...] = 1.0
    dec.weight[...] = 1.0
    model = AutoencoderModel([enc], [dec], 10, require_compression=False)
    x = np.linspace(-1, 1, 10)
    np.testing.assert_array_equal(forward(model, x), x)


@given(small_autoencoders())
def test_forward_matches_naive_oracle(model_rng):
    model, rng = model_rng
    x = rng.standard_normal((3, model.input_len))
    out = model.reconstruct(x)
    assert out.shape == x.shape
    for w, o in zip(x, out):
        np.testing.assert_allclose(o, naive_forward(model, w), rtol=0, atol=1e-12)


@pytest.mark.parametrize("t", [16, 33, 64, 100, 320, 321])
def test_default_architecture_preserves_length_and_compresses(t):
    model = default_autoencoder(t)
    assert model.reconstruct(np.zeros(t)).shape == (t,)
    assert model.latent_size < t
    assert model.encode(np.zeros(t)).shape[1:] == model.latent_shape


def test_default_layout_for_320():
    model = default_autoencoder(320)
    assert model.latent_shape == (2, 80)
    assert [l.kind for l in model.layers] == ["conv1d", "conv1d", "conv_transpose1d", "conv_transpose1d"]
    assert [l.output_padding for l in model.decoder_layers] == [1, 1]
    assert model.layers[-1].activation == "linear"


def test_expanding_latent_rejected():
    with pytest.raises(ConfigError, match="latent"):
        default_autoencoder(320, channels=(32, 16))


def test_length_mismatch_rejected():
    enc = Conv1D(1, 2, 3, 2, 1)
    dec = TransposedConv1D(2, 1, 3, 2, 1, 0, "linear")
    with pytest.raises(ConfigError):
        AutoencoderModel([enc], [dec], 10)  # 10 -> 5 -> 9


def test_forward_shape_error():
    model = default_autoencoder(32)
    with pytest.raises(ShapeError):
        forward(model, np.zeros(31))


def test_deterministic_forward(rng):
    model = default_autoencoder(64, seed=1)
    x = rng.standard_normal((5, 64))
    assert model.reconstruct(x).tobytes() == model.reconstruct(x).tobytes()


def test_batching_does_not_change_results(rng):
    model = default_autoencoder(64, seed=1)
    x = rng.standard_normal((50, 64))
    np.testing.assert_array_equal(model.reconstruct(x, batch_size=7), model.reconstruct(x))
