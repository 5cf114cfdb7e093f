from .layers import Conv1D, TransposedConv1D, conv_output_len, conv_transpose_output_len
from .model import (
    AutoencoderModel,
    backward,
    default_autoencoder,
    forward,
    loss,
    loss_and_gradients,
    window_losses,
)
from .serialization import SavedModel, load_model, model_bytes, save_model
from .training import AdamState, TrainConfig, TrainResult, adam_step, train

__all__ = [
    "AdamState",
    "AutoencoderModel",
    "Conv1D",
    "SavedModel",
    "TrainConfig",
    "TrainResult",
    "TransposedConv1D",
    "adam_step",
    "backward",
    "conv_output_len",
    "conv_transpose_output_len",
    "default_autoencoder",
    "forward",
    "load_model",
    "loss",
    "loss_and_gradients",
    "model_bytes",
    "save_model",
    "train",
    "window_losses",
]
