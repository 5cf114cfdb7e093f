"""Experiment configuration and the train / detect / evaluate pipeline shared by the CLI and scripts."""

from __future__ import annotations

import configparser
import logging
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .autoencoder import TrainConfig, default_autoencoder, save_model, train
from .autoencoder.serialization import SavedModel
from .detector import DEFAULT_THETA, MultiPhaseResult, calibrate, detect_all_phases, export_detection
from .errors import ConfigError, ShapeError
from .ingest import DatasetSchema, load_csv, split_normal
from .metrics import ConfusionCounts, confusion, write_report_json
from .signal_sim import SimConfig, ThreePhaseSignal, generate_dataset
from .windowing import WindowConfig, fit_standardizer, make_windows

logger = logging.getLogger(__name__)

CONFIG_SECTION = "experiment"


@dataclass
class ExperimentConfig:
    """Everything a run needs. ``source`` is ``"simulate"`` or a CSV path."""

    source: str = "simulate"
    schema: DatasetSchema = field(default_factory=DatasetSchema)
    sample_interval: float = 1.0
    sim: SimConfig = field(default_factory=SimConfig)
    window: WindowConfig = field(default_factory=WindowConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    channels: tuple = (32, 2)
    train_phase: str = "A"
    train_stride: int = 1
    theta: float = DEFAULT_THETA
    histogram_bins: int = 50
    out_dir: str = "runs/default"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ConfigError(f"theta must lie in (0, 1], got {self.theta}")
        if self.train_stride < 1:
            raise ConfigError("train_stride must be >= 1")
        if self.train_phase not in "ABC" or len(self.train_phase) != 1:
            raise ConfigError("train_phase must be A, B or C")

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(
            self,
            seed=seed,
            sim=replace(self.sim, rng_seed=seed),
            train=replace(self.train, rng_seed=seed),
        )

    def load_signal(self) -> ThreePhaseSignal:
        if self.source == "simulate":
            return generate_dataset(self.sim)
        return load_csv(self.source, self.schema, self.sample_interval)


def _split(text):
    return tuple(s.strip() for s in text.split(",") if s.strip())


# key -> (parser, setter); setters return an updated config
def _sub(attr, name, conv):
    return lambda cfg, raw: replace(cfg, **{attr: replace(getattr(cfg, attr), **{name: conv(raw)})})


def _top(name, conv):
    return lambda cfg, raw: replace(cfg, **{name: conv(raw)})


def _bool(raw):
    return str(raw).strip().lower() in ("1", "true", "yes", "on")


CONFIG_KEYS = {
    "source": _top("source", str),
    "seed": lambda cfg, raw: cfg.with_seed(int(raw)),
    "out_dir": _top("out_dir", str),
    "theta": _top("theta", float),
    "channels": _top("channels", lambda r: tuple(int(c) for c in _split(r))),
    "train_phase": _top("train_phase", lambda r: r.strip().upper()),
    "train_stride": _top("train_stride", int),
    "histogram_bins": _top("histogram_bins", int),
    "sample_interval": _top("sample_interval", float),
    "window_len": _sub("window", "window_len", int),
    "stride": _sub("window", "stride", int),
    "epochs": _sub("train", "epochs", int),
    "batch_size": _sub("train", "batch_size", int),
    "learning_rate": _sub("train", "learning_rate", float),
    "loss": _sub("train", "loss", lambda r: r.strip().upper()),
    "early_stop_patience": _sub("train", "early_stop_patience", int),
    "validation_fraction": _sub("train", "validation_fraction", float),
    "sim_duration": _sub("sim", "duration", float),
    "sim_sample_interval": _sub("sim", "sample_interval", float),
    "sim_frequency": _sub("sim", "system_frequency", float),
    "sim_noise_std": _sub("sim", "noise_std", float),
    "sim_current_amplitude": _sub("sim", "current_amplitude", float),
    "sim_voltage_amplitude": _sub("sim", "voltage_amplitude", float),
}


SCHEMA_KEYS = {
    "schema_currents": ("current_columns", _split),
    "schema_voltages": ("voltage_columns", _split),
    "schema_label_mode": ("label_mode", lambda r: r.strip().lower()),
    "schema_labels": ("label_columns", _split),
    "schema_has_header": ("has_header", _bool),
}


def apply_settings(cfg: ExperimentConfig, settings: dict) -> ExperimentConfig:
    """Apply ``key -> raw string`` settings; ``seed`` goes first so explicit keys win over it."""
    unknown = set(settings) - set(CONFIG_KEYS) - set(SCHEMA_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    schema = {f.name: getattr(cfg.schema, f.name) for f in fields(DatasetSchema)}
    for key in sorted(settings, key=lambda k: (k != "seed", k)):
        raw = settings[key]
        try:
            if key in SCHEMA_KEYS:
                name, conv = SCHEMA_KEYS[key]
                schema[name] = conv(raw)
            else:
                cfg = CONFIG_KEYS[key](cfg, raw)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None
    return replace(cfg, schema=DatasetSchema(**schema))


def read_config_file(path) -> dict:
    """Read ``key = value`` pairs from the ``[experiment]`` section of an INI-style file."""
    parser = configparser.ConfigParser(interpolation=None)
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    parser.read(path)
    if not parser.has_section(CONFIG_SECTION):
        raise ConfigError(f"{path} has no [{CONFIG_SECTION}] section")
    return dict(parser.items(CONFIG_SECTION))


def load_config(path=None, overrides: dict | None = None) -> ExperimentConfig:
    settings = read_config_file(path) if path else {}
    settings.update({k: str(v) for k, v in (overrides or {}).items() if v is not None})
    return apply_settings(ExperimentConfig(), settings)


@dataclass
class FitOutcome:
    saved: SavedModel
    history: list
    train_signal: ThreePhaseSignal


def fit_detector(signal: ThreePhaseSignal, cfg: ExperimentConfig) -> FitOutcome:
    """Train on the longest clean run of one phase current and calibrate the threshold."""
    train_sig, _ = split_normal(signal, cfg.window.window_len)
    channel = train_sig.current(cfg.train_phase)
    standardizer = fit_standardizer(channel)
    train_windows = make_windows(
        channel, standardizer, WindowConfig(cfg.window.window_len, cfg.train_stride)
    )
    model = default_autoencoder(cfg.window.window_len, cfg.channels, seed=cfg.seed)
    logger.info("training on %d windows of length %d", len(train_windows), cfg.window.window_len)
    result = train(model, train_windows, cfg.train)
    calib = make_windows(channel, standardizer, cfg.window)
    threshold = calibrate(result.model, calib, cfg.train.loss)
    return FitOutcome(SavedModel(result.model, standardizer, threshold), result.loss_history, train_sig)


def run_detection(saved: SavedModel, signal: ThreePhaseSignal, cfg: ExperimentConfig) -> MultiPhaseResult:
    if saved.standardizer is None or saved.threshold is None:
        raise ShapeError("model file lacks a standardizer or calibrated threshold")
    if cfg.window.window_len != saved.model.input_len:
        raise ShapeError(
            f"window length {cfg.window.window_len} does not match model input length "
            f"{saved.model.input_len}"
        )
    return detect_all_phases(
        saved.model, saved.threshold, signal, saved.standardizer, cfg.window, cfg.theta
    )


def evaluate(labels, truth) -> ConfusionCounts:
    return confusion(labels, truth)


@dataclass
class RunOutcome:
    signal: ThreePhaseSignal
    fit: FitOutcome
    detection: MultiPhaseResult
    counts: ConfusionCounts
    seconds: float
    written: list = field(default_factory=list)


def run_pipeline(cfg: ExperimentConfig, out_dir=None) -> RunOutcome:
    """Load or simulate, train, calibrate, detect on all phases and score against the mask.

    With ``out_dir`` set, the model file, detection exports and metrics are written there.
    """
    start = time.perf_counter()
    signal = cfg.load_signal()
    fit = fit_detector(signal, cfg)
    detection = run_detection(fit.saved, signal, cfg)
    counts = evaluate(detection.merged_labels, signal.fault_mask)
    seconds = time.perf_counter() - start
    written = []
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        save_model(out / "model.faem", fit.saved.model, fit.saved.standardizer, fit.saved.threshold)
        written = [out / "model.faem"] + export_detection(detection, out, cfg.histogram_bins)
        write_report_json(counts, out / "metrics.json")
        written.append(out / "metrics.json")
    return RunOutcome(signal, fit, detection, counts, seconds, written)
