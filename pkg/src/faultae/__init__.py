"""Fault detection in three-phase power signals with a 1-D convolutional autoencoder.

Train on fault-free current windows, set the threshold to the largest training
reconstruction error, and flag test windows whose error exceeds it.
"""

from .autoencoder import (
    AutoencoderModel,
    TrainConfig,
    default_autoencoder,
    load_model,
    save_model,
    train,
)
from .baseline import PCABasis, fit_pca, linear_autoencoder, pca_reconstruct, train_linear_ae
from .detector import (
    DEFAULT_THETA,
    DetectionResult,
    MultiPhaseResult,
    Threshold,
    calibrate,
    detect,
    detect_all_phases,
)
from .experiment import ExperimentConfig, fit_detector, load_config, run_detection, run_pipeline
from .ingest import DatasetSchema, infer_schema, load_csv, split_normal
from .metrics import ConfusionCounts, confusion, report_dict, scores
from .signal_sim import (
    FaultSpec,
    FaultType,
    SimConfig,
    ThreePhaseSignal,
    generate_clean,
    generate_dataset,
    inject_fault,
)
from .windowing import Standardizer, WindowConfig, fit_standardizer, make_windows, points_from_windows

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_THETA",
    "AutoencoderModel",
    "ConfusionCounts",
    "DatasetSchema",
    "DetectionResult",
    "ExperimentConfig",
    "FaultSpec",
    "FaultType",
    "MultiPhaseResult",
    "PCABasis",
    "SimConfig",
    "Standardizer",
    "ThreePhaseSignal",
    "Threshold",
    "TrainConfig",
    "WindowConfig",
    "calibrate",
    "confusion",
    "default_autoencoder",
    "detect",
    "detect_all_phases",
    "fit_detector",
    "fit_pca",
    "fit_standardizer",
    "generate_clean",
    "generate_dataset",
    "infer_schema",
    "inject_fault",
    "linear_autoencoder",
    "load_config",
    "load_csv",
    "load_model",
    "make_windows",
    "pca_reconstruct",
    "points_from_windows",
    "report_dict",
    "run_detection",
    "run_pipeline",
    "save_model",
    "scores",
    "split_normal",
    "train",
    "train_linear_ae",
]
