"""Overlapping fixed-length windows over one channel, and the map back to points."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ConfigError, DegenerateSignalError, InsufficientDataError


@dataclass(frozen=True)
class WindowConfig:
    window_len: int = 320
    stride: int = 1

    def __post_init__(self):
        if self.window_len < 4:
            raise ConfigError(f"window_len must be at least 4, got {self.window_len}")
        if self.stride < 1:
            raise ConfigError(f"stride must be at least 1, got {self.stride}")


@dataclass(frozen=True)
class Standardizer:
    mean: float
    std: float

    def __post_init__(self):
        if not self.std > 0:
            raise DegenerateSignalError(f"standard deviation must be positive, got {self.std}")

    def apply(self, channel):
        return (np.asarray(channel, dtype=np.float64) - self.mean) / self.std


def fit_standardizer(channel) -> Standardizer:
    """Sample mean and population standard deviation of ``channel``."""
    x = np.asarray(channel, dtype=np.float64)
    if x.size < 2:
        raise DegenerateSignalError("need at least two samples to standardize")
    std = float(x.std())
    if std == 0.0:
        raise DegenerateSignalError("channel is constant")
    return Standardizer(float(x.mean()), std)


@dataclass
class WindowSet:
    windows: np.ndarray  # (M, T), possibly a read-only view
    origins: np.ndarray  # (M,)
    config: WindowConfig

    def __len__(self):
        return self.windows.shape[0]

    @property
    def window_len(self) -> int:
        return self.config.window_len


def window_count(n: int, config: WindowConfig) -> int:
    return (n - config.window_len) // config.stride + 1


def make_windows(channel, standardizer: Standardizer, config: WindowConfig | None = None) -> WindowSet:
    config = config or WindowConfig()
    x = standardizer.apply(channel)
    n, t = x.size, config.window_len
    if n < t:
        raise InsufficientDataError(f"channel has {n} samples, window length is {t}")
    windows = sliding_window_view(x, t)[:: config.stride]
    origins = np.arange(windows.shape[0], dtype=np.int64) * config.stride
    return WindowSet(windows, origins, config)


def points_from_windows(flags, origins, n: int, window_len: int, theta: float = 1.0) -> np.ndarray:
    """Label point i faulty when at least a ``theta`` fraction of the windows covering it are flagged.

    Points covered by no window stay 0.
    """
    if not 0.0 < theta <= 1.0:
        raise ConfigError(f"theta must lie in (0, 1], got {theta}")
    flags = np.asarray(flags).astype(bool)
    origins = np.asarray(origins, dtype=np.int64)
    if flags.shape != origins.shape:
        raise ValueError("flags and origins differ in length")
    if origins.size and (origins.min() < 0 or origins.max() + window_len > n):
        raise ValueError("a window extends past the channel")

    cover = np.zeros(n + 1, np.int64)
    hits = np.zeros(n + 1, np.int64)
    np.add.at(cover, origins, 1)
    np.add.at(cover, origins + window_len, -1)
    np.add.at(hits, origins[flags], 1)
    np.add.at(hits, origins[flags] + window_len, -1)
    cover = np.cumsum(cover)[:n]
    hits = np.cumsum(hits)[:n]
    return ((cover > 0) & (hits >= theta * cover)).astype(np.uint8)


def segments_from_labels(labels) -> list[tuple[int, int]]:
    """Maximal runs of ones as ``(start, end_exclusive)`` pairs."""
    padded = np.concatenate(([0], np.asarray(labels, dtype=np.int8) != 0, [0])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))
