"""Tiny dense gesture classifier: training, quantization, evaluation, I/O."""

from .evaluate import ConfusionMatrix, evaluate
from .model import DEFAULT_DIMS, TinyModel, forward_f32, loss_and_grads, softmax
from .modelio import load_file, load_model, save_file, save_model
from .quant import QuantModel, float_payload_bytes, forward_int8, int8_payload_bytes, quantize_int8
from .train import History, TrainConfig, train

__all__ = [
    "DEFAULT_DIMS",
    "TinyModel",
    "QuantModel",
    "TrainConfig",
    "History",
    "ConfusionMatrix",
    "forward_f32",
    "forward_int8",
    "loss_and_grads",
    "softmax",
    "train",
    "quantize_int8",
    "evaluate",
    "save_model",
    "load_model",
    "save_file",
    "load_file",
    "float_payload_bytes",
    "int8_payload_bytes",
]
