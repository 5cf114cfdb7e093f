"""Linear autoencoder vs PCA reconstruction error on Gaussian windows, for several latent sizes.

    python scripts/pca_equivalence.py [--window-len 16] [--epochs 40]
"""

import argparse

import numpy as np

from faultae.autoencoder import TrainConfig
from faultae.baseline import fit_pca, pca_mse, reconstruction_mse, train_linear_ae


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--window-len", type=int, default=16)
    ap.add_argument("--train", type=int, default=8000)
    ap.add_argument("--held-out", type=int, default=4000)
    ap.add_argument("--epochs", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t = args.window_len
    rng = np.random.default_rng(args.seed)
    scales = np.geomspace(3, 0.1, t)
    q, _ = np.linalg.qr(rng.standard_normal((t, t)))
    x = (rng.standard_normal((args.train + args.held_out, t)) * scales) @ q.T
    train_x, held = x[: args.train], x[args.train :]
    cfg = TrainConfig(loss="MSE", learning_rate=3e-3, epochs=args.epochs, batch_size=64,
                      early_stop_patience=0, validation_fraction=0, rng_seed=args.seed)

    print(f"{'k':>3} {'AE MSE':>10} {'PCA MSE':>10} {'gap %':>7}")
    for k in (1, 2, 4, 8):
        model = train_linear_ae(train_x, k, cfg).model
        ae = reconstruction_mse(model.reconstruct(held), held)
        opt = pca_mse(fit_pca(held, k), held)
        print(f"{k:>3} {ae:>10.5f} {opt:>10.5f} {100 * (ae / opt - 1):>7.2f}")


if __name__ == "__main__":
    main()
