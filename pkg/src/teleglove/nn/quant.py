"""Post-training int8 quantization and the integer inference path.

Per-tensor affine scheme: weights are symmetric (zero_point = 0, scale =
max|w| / 127), activations are asymmetric with ranges calibrated from
min/max over a calibration set. Biases are int32 at scale s_in * s_w.
Inference quantizes the input, accumulates every matmul in int32,
requantizes between layers, and dequantizes the final logits before
softmax.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import QuantizationError
from .model import TinyModel, softmax

Q_MIN, Q_MAX = -128, 127
W_MAX = 127  # symmetric weights never use -128


@dataclass(frozen=True)
class ActQuant:
    """Asymmetric activation quantizer: real = scale * (q - zero_point)."""

    scale: float
    zero_point: int

    def quantize(self, x: np.ndarray) -> np.ndarray:
        q = np.round(x / self.scale) + self.zero_point
        return np.clip(q, Q_MIN, Q_MAX).astype(np.int8)


def _act_quant(r_min: float, r_max: float) -> ActQuant:
    r_min = min(r_min, 0.0)
    r_max = max(r_max, 0.0)
    if r_max == r_min:
        return ActQuant(1.0, 0)
    # scales live as float32 in the serialized form; round here so a
    # save/load round-trip reproduces inference bit-for-bit
    scale = float(np.float32((r_max - r_min) / (Q_MAX - Q_MIN)))
    zp = int(np.clip(round(Q_MIN - r_min / scale), Q_MIN, Q_MAX))
    return ActQuant(scale, zp)


@dataclass
class QuantModel:
    """Int8 weights, int32 biases, and the per-tensor quantizers to run them."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    w_scales: list[float]
    acts: list[ActQuant]  # input quantizer, then each hidden output

    def __post_init__(self) -> None:
        n = len(self.weights)
        if not (len(self.biases) == n and len(self.w_scales) == n and len(self.acts) == n):
            raise ValueError("per-layer lists must have equal length")
        for i, w in enumerate(self.weights):
            if w.dtype != np.int8:
                raise ValueError(f"layer {i}: weights must be int8")
            if int(w.min()) < -W_MAX or int(w.max()) > W_MAX:
                raise ValueError(f"layer {i}: symmetric weights must lie in [-127, 127]")
        for i, b in enumerate(self.biases):
            if b.dtype != np.int32:
                raise ValueError(f"layer {i}: biases must be int32")

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0], *(w.shape[1] for w in self.weights))

    @property
    def n_in(self) -> int:
        return self.weights[0].shape[0]

    @property
    def n_classes(self) -> int:
        return self.weights[-1].shape[1]

    def forward(self, x: np.ndarray) -> np.ndarray:
        return forward_int8(self, x)

    def dequantized_weights(self) -> list[np.ndarray]:
        return [w.astype(np.float64) * s for w, s in zip(self.weights, self.w_scales)]


def quantize_int8(model: TinyModel, calib: np.ndarray) -> QuantModel:
    """Quantize a float model, calibrating activation ranges on ``calib``.

    ``calib`` is a non-empty (n, n_in) batch of representative feature
    vectors; its per-tensor min/max set the activation quantizers.
    """
    calib = np.atleast_2d(np.asarray(calib, dtype=np.float64))
    if calib.size == 0:
        raise QuantizationError("calibration set must be non-empty")
    if calib.shape[1] != model.n_in:
        raise QuantizationError(
            f"calibration vectors must have {model.n_in} features, got {calib.shape[1]}"
        )

    # acts[0] is the input; acts[1..L-1] are the post-rectifier hiddens.
    float_acts = model.activations(calib)
    act_quants = [
        _act_quant(float(a.min()), float(a.max())) for a in float_acts[:-1]
    ]

    weights, biases, w_scales = [], [], []
    for (w, b), act in zip(
        ((w.astype(np.float64), b.astype(np.float64)) for w, b in zip(model.weights, model.biases)),
        act_quants,
    ):
        max_abs = float(np.max(np.abs(w)))
        s_w = float(np.float32(max_abs / W_MAX)) if max_abs > 0 else 1.0
        q_w = np.clip(np.round(w / s_w), -W_MAX, W_MAX).astype(np.int8)
        q_b = np.round(b / (act.scale * s_w)).astype(np.int32)
        weights.append(q_w)
        biases.append(q_b)
        w_scales.append(s_w)

    return QuantModel(weights, biases, w_scales, act_quants)


def forward_int8(qmodel: QuantModel, x: np.ndarray) -> np.ndarray:
    """Integer-path class probabilities; accepts a vector or a batch."""
    single = np.asarray(x).ndim == 1
    a = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if a.shape[1] != qmodel.n_in:
        raise ValueError(f"input must have {qmodel.n_in} features, got shape {a.shape}")

    q = qmodel.acts[0].quantize(a).astype(np.int32)
    zp_in = qmodel.acts[0].zero_point
    last = len(qmodel.weights) - 1
    logits = None
    for i, (w, b, s_w) in enumerate(zip(qmodel.weights, qmodel.biases, qmodel.w_scales)):
        s_in = qmodel.acts[i].scale
        acc = (q - zp_in) @ w.astype(np.int32) + b  # int32 accumulation
        if i == last:
            logits = acc.astype(np.float64) * (s_in * s_w)
            break
        nxt = qmodel.acts[i + 1]
        multiplier = s_in * s_w / nxt.scale
        q = np.round(acc * multiplier).astype(np.int64) + nxt.zero_point
        # rectifier folds into the clamp: real zero sits at the zero point
        q = np.clip(q, nxt.zero_point, Q_MAX).astype(np.int32)
        zp_in = nxt.zero_point

    probs = softmax(logits)
    return probs[0] if single else probs


def float_payload_bytes(model: TinyModel) -> int:
    """Serialized float32 parameter payload size."""
    return sum(4 * (w.size + b.size) for w, b in zip(model.weights, model.biases))


def int8_payload_bytes(qmodel: QuantModel) -> int:
    """Serialized int8 payload: weights, biases, and per-tensor quantizers."""
    tensors = sum(w.size + 4 * b.size for w, b in zip(qmodel.weights, qmodel.biases))
    quant_params = 4 * len(qmodel.w_scales) + 6 * len(qmodel.acts)  # f32 scale + i16 zp
    return tensors + quant_params
