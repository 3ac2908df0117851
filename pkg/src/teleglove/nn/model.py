"""Dense rectifier network with softmax output, sized for 117-dim features.

The default topology is 117 -> 20 -> 10 -> 5 -> 7 (2667 parameters).
Weights are stored float32 so serialization round-trips bit-exactly; the
training/gradient path upcasts to float64 where precision matters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_DIMS = (117, 20, 10, 5, 7)

Params = list[tuple[np.ndarray, np.ndarray]]


def softmax(z: np.ndarray) -> np.ndarray:
    """Row-wise softmax, shifted by the row max for stability."""
    z = np.asarray(z, dtype=np.float64)
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass
class TinyModel:
    """Float32 dense classifier: rectifier hiddens, softmax output."""

    weights: list[np.ndarray]
    biases: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.biases):
            raise ValueError("weights and biases must pair up")
        self.weights = [np.ascontiguousarray(w, dtype=np.float32) for w in self.weights]
        self.biases = [np.ascontiguousarray(b, dtype=np.float32) for b in self.biases]
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ValueError(f"layer {i}: bias shape {b.shape} does not match {w.shape}")
            if i > 0 and w.shape[0] != self.weights[i - 1].shape[1]:
                raise ValueError(f"layer {i}: input dim {w.shape[0]} breaks the chain")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"layer {i}: non-finite parameters")

    @classmethod
    def init(cls, dims: tuple[int, ...] = DEFAULT_DIMS, seed: int = 0) -> "TinyModel":
        """Glorot-uniform initialization, deterministic for a given seed."""
        rng = np.random.default_rng(seed)
        weights, biases = [], []
        for n_in, n_out in zip(dims, dims[1:]):
            limit = np.sqrt(6.0 / (n_in + n_out))
            weights.append(rng.uniform(-limit, limit, size=(n_in, n_out)))
            biases.append(np.zeros(n_out))
        return cls(weights, biases)

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0], *(w.shape[1] for w in self.weights))

    @property
    def n_in(self) -> int:
        return self.weights[0].shape[0]

    @property
    def n_classes(self) -> int:
        return self.weights[-1].shape[1]

    def param_count(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def params64(self) -> Params:
        """Float64 copies of all parameters, for gradient work."""
        return [
            (w.astype(np.float64), b.astype(np.float64))
            for w, b in zip(self.weights, self.biases)
        ]

    def forward(self, x: np.ndarray) -> np.ndarray:
        return forward_f32(self, x)

    def activations(self, x: np.ndarray) -> list[np.ndarray]:
        """Input plus every post-rectifier hidden activation and raw logits.

        Returned list: [x, h1, ..., h_{L-1}, logits]; used for quantization
        calibration.
        """
        a = _as_batch(x, self.n_in)
        acts = [a]
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            a = a @ w.astype(np.float64) + b.astype(np.float64)
            if i < last:
                a = np.maximum(a, 0.0)
            acts.append(a)
        return acts


def _as_batch(x: np.ndarray, n_in: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != n_in:
        raise ValueError(f"input must have {n_in} features, got shape {x.shape}")
    return x


def forward_f32(model: TinyModel, x: np.ndarray) -> np.ndarray:
    """Class probabilities for one feature vector or a batch.

    A 1-D input returns shape (n_classes,); a batch returns (n, n_classes).
    Rows are non-negative and sum to 1.
    """
    single = np.asarray(x).ndim == 1
    probs = softmax(model.activations(x)[-1])
    return probs[0] if single else probs


def loss_and_grads(
    params: Params, X: np.ndarray, Y: np.ndarray
) -> tuple[float, Params]:
    """Mean categorical cross-entropy and its analytic gradients.

    ``params`` is a list of (W, b) float64 pairs; ``Y`` is one-hot. The
    gradients come from standard backprop through the rectifier hiddens and
    the fused softmax/cross-entropy output.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    n = X.shape[0]
    last = len(params) - 1

    acts = [X]
    a = X
    for i, (w, b) in enumerate(params):
        z = a @ w + b
        a = z if i == last else np.maximum(z, 0.0)
        acts.append(a)

    probs = softmax(acts[-1])
    loss = float(-np.mean(np.sum(Y * np.log(probs + 1e-300), axis=1)))

    grads: Params = [None] * len(params)  # type: ignore[list-item]
    delta = (probs - Y) / n
    for i in range(last, -1, -1):
        w, _ = params[i]
        grads[i] = (acts[i].T @ delta, delta.sum(axis=0))
        if i > 0:
            delta = (delta @ w.T) * (acts[i] > 0.0)
    return loss, grads
