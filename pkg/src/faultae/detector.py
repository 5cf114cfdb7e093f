"""Reconstruction-error thresholding: calibrate on clean windows, flag and segment test signals."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .autoencoder.model import AutoencoderModel, window_losses
from .errors import DataError, ShapeError
from .signal_sim import PHASES, ThreePhaseSignal
from .windowing import (
    Standardizer,
    WindowConfig,
    make_windows,
    points_from_windows,
    segments_from_labels,
)

# every window covering a point must be flagged; see README "Window-to-point rule"
DEFAULT_THETA = 1.0


@dataclass(frozen=True)
class Threshold:
    alpha: float
    calibration_size: int
    loss_kind: str = "MAE"

    def __post_init__(self):
        if self.calibration_size < 1:
            raise DataError("threshold must be calibrated on at least one window")


@dataclass
class DetectionResult:
    window_errors: np.ndarray
    window_flags: np.ndarray
    origins: np.ndarray
    point_labels: np.ndarray
    segments: list
    threshold: Threshold


@dataclass
class MultiPhaseResult:
    phases: dict = field(default_factory=dict)  # phase letter -> DetectionResult
    merged_labels: np.ndarray | None = None

    @property
    def merged_segments(self):
        return segments_from_labels(self.merged_labels)


def window_errors(model: AutoencoderModel, windows, loss_kind="MAE", batch_size=1024) -> np.ndarray:
    windows = getattr(windows, "windows", windows)
    out = np.empty(len(windows))
    for start in range(0, len(windows), batch_size):
        chunk = np.asarray(windows[start : start + batch_size])
        out[start : start + len(chunk)] = window_losses(model.reconstruct(chunk), chunk, loss_kind)
    return out


def calibrate(model: AutoencoderModel, train_windows, loss_kind="MAE") -> Threshold:
    """Threshold = largest per-window reconstruction error over the clean windows."""
    if len(train_windows) == 0:
        raise DataError("cannot calibrate on an empty window set")
    errors = window_errors(model, train_windows, loss_kind)
    return Threshold(float(errors.max()), len(errors), loss_kind.upper())


def flag_windows(errors, threshold: Threshold) -> np.ndarray:
    # ties with alpha are normal
    return (np.asarray(errors) > threshold.alpha).astype(np.uint8)


def detect(
    model: AutoencoderModel,
    threshold: Threshold,
    channel,
    standardizer: Standardizer,
    window_config: WindowConfig | None = None,
    theta: float = DEFAULT_THETA,
) -> DetectionResult:
    window_config = window_config or WindowConfig(model.input_len)
    if window_config.window_len != model.input_len:
        raise ShapeError(
            f"window length {window_config.window_len} != model input length {model.input_len}"
        )
    channel = np.asarray(channel, dtype=np.float64)
    ws = make_windows(channel, standardizer, window_config)
    errors = window_errors(model, ws, threshold.loss_kind)
    flags = flag_windows(errors, threshold)
    labels = points_from_windows(flags, ws.origins, channel.size, window_config.window_len, theta)
    return DetectionResult(errors, flags, ws.origins, labels, segments_from_labels(labels), threshold)


def detect_all_phases(
    model: AutoencoderModel,
    threshold: Threshold,
    signal: ThreePhaseSignal,
    standardizer: Standardizer,
    window_config: WindowConfig | None = None,
    theta: float = DEFAULT_THETA,
) -> MultiPhaseResult:
    """Run ``detect`` on each phase current with the shared model/threshold; OR-merge the labels."""
    result = MultiPhaseResult(merged_labels=np.zeros(len(signal), np.uint8))
    for phase in PHASES:
        res = detect(model, threshold, signal.current(phase), standardizer, window_config, theta)
        result.phases[phase] = res
        result.merged_labels |= res.point_labels
    return result


def write_window_csv(result: DetectionResult, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "error", "flag"])
        for idx, err, flag in zip(result.origins.tolist(), result.window_errors.tolist(),
                                  result.window_flags.tolist()):
            w.writerow([idx, repr(err), flag])


def write_labels_csv(labels, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "label"])
        w.writerows(enumerate(np.asarray(labels).tolist()))


def read_labels_csv(path) -> np.ndarray:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([int(r["label"]) for r in rows], dtype=np.uint8)


def write_segments_json(segments, path) -> None:
    payload = [{"start": int(a), "end": int(b)} for a, b in segments]
    Path(path).write_text(json.dumps(payload, indent=1) + "\n")


def error_histogram(errors, bins=50):
    counts, edges = np.histogram(np.asarray(errors), bins=bins)
    return counts, edges


def write_histogram_csv(errors, path, bins=50) -> None:
    counts, edges = error_histogram(errors, bins)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_left", "bin_right", "count"])
        for left, right, c in zip(edges[:-1].tolist(), edges[1:].tolist(), counts.tolist()):
            w.writerow([repr(left), repr(right), c])


def export_detection(result: MultiPhaseResult, out_dir, bins=50) -> list[Path]:
    """Write per-phase and merged exports into ``out_dir``; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for phase, res in result.phases.items():
        stem = f"phase_{phase}"
        files = {
            "windows.csv": lambda p, r=res: write_window_csv(r, p),
            "points.csv": lambda p, r=res: write_labels_csv(r.point_labels, p),
            "segments.json": lambda p, r=res: write_segments_json(r.segments, p),
            "histogram.csv": lambda p, r=res: write_histogram_csv(r.window_errors, p, bins),
        }
        for suffix, writer in files.items():
            path = out_dir / f"{stem}_{suffix}"
            writer(path)
            written.append(path)
    write_labels_csv(result.merged_labels, out_dir / "merged_points.csv")
    write_segments_json(result.merged_segments, out_dir / "segments.json")
    written += [out_dir / "merged_points.csv", out_dir / "segments.json"]
    return written
