"""Adam training loop with stratified validation split and per-epoch history."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import TrainingError
from .model import DEFAULT_DIMS, TinyModel, loss_and_grads, softmax


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 30
    base_lr: float = 5e-4
    batch_size: int = 32
    val_fraction: float = 0.20
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.val_fraction < 1.0:
            raise ValueError(f"val_fraction must be in (0, 1), got {self.val_fraction}")
        if self.epochs < 1 or self.batch_size < 1 or self.base_lr <= 0:
            raise ValueError("epochs, batch_size must be >= 1 and base_lr > 0")


@dataclass
class EpochStats:
    epoch: int
    train_loss: float
    train_acc: float
    val_loss: float
    val_acc: float


@dataclass
class History:
    epochs: list[EpochStats] = field(default_factory=list)

    @property
    def final(self) -> EpochStats:
        return self.epochs[-1]

    def metrics_lines(self) -> list[str]:
        """Metrics-file rows: epoch, train_loss, val_loss, val_acc."""
        lines = ["epoch,train_loss,val_loss,val_acc"]
        for e in self.epochs:
            lines.append(f"{e.epoch},{e.train_loss:.6f},{e.val_loss:.6f},{e.val_acc:.6f}")
        return lines


def stratified_split(
    y: np.ndarray, val_fraction: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class shuffled split keeping at least one sample on each side."""
    train_idx, val_idx = [], []
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        idx = rng.permutation(idx)
        n_val = int(round(len(idx) * val_fraction))
        n_val = min(max(n_val, 1), len(idx) - 1)
        val_idx.append(idx[:n_val])
        train_idx.append(idx[n_val:])
    return np.sort(np.concatenate(train_idx)), np.sort(np.concatenate(val_idx))


def _eval_split(params, X, Y, y):
    probs = softmax(_forward_logits(params, X))
    loss = float(-np.mean(np.sum(Y * np.log(probs + 1e-300), axis=1)))
    acc = float(np.mean(probs.argmax(axis=1) == y))
    return loss, acc


def _forward_logits(params, X):
    a = X
    last = len(params) - 1
    for i, (w, b) in enumerate(params):
        a = a @ w + b
        if i < last:
            a = np.maximum(a, 0.0)
    return a


def train(
    X: np.ndarray,
    y: np.ndarray,
    cfg: TrainConfig = TrainConfig(),
    dims: tuple[int, ...] = DEFAULT_DIMS,
) -> tuple[TinyModel, History]:
    """Train a dense classifier on labeled feature vectors.

    Every class index 0..n_classes-1 must appear with at least two examples
    (the stratified split needs one on each side); otherwise a TrainingError
    lists the absent classes. The run is fully deterministic for a given
    config seed.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[1] != dims[0]:
        raise TrainingError(f"X must be (n, {dims[0]}), got {X.shape}")
    if y.shape != (X.shape[0],):
        raise TrainingError("y must align with X rows")

    n_classes = dims[-1]
    counts = np.bincount(y, minlength=n_classes) if y.size else np.zeros(n_classes, int)
    if y.size and (y.min() < 0 or y.max() >= n_classes):
        raise TrainingError(f"labels must lie in 0..{n_classes - 1}")
    absent = [int(c) for c in range(n_classes) if counts[c] == 0]
    if absent:
        raise TrainingError(f"missing classes in training data: {absent}")
    thin = [int(c) for c in range(n_classes) if counts[c] < 2]
    if thin:
        raise TrainingError(f"classes with fewer than 2 examples: {thin}")

    rng = np.random.default_rng(cfg.seed)
    train_idx, val_idx = stratified_split(y, cfg.val_fraction, rng)
    Xt, yt = X[train_idx], y[train_idx]
    Xv, yv = X[val_idx], y[val_idx]
    Yt = np.eye(n_classes)[yt]
    Yv = np.eye(n_classes)[yv]

    # Standardize inputs for optimization, then fold the affine map into the
    # first layer afterwards, so the returned model maps raw feature vectors.
    # Per-feature scales are floored at a fraction of the global RMS: fully
    # per-feature scaling blows up the folded first-layer dynamic range and
    # ruins per-tensor int8 quantization downstream.
    mu = Xt.mean(axis=0)
    rms = float(np.sqrt(np.mean((Xt - mu) ** 2)))
    rms = rms if rms > 1e-9 else 1.0
    scale = np.maximum(Xt.std(axis=0), 0.25 * rms)
    Xt = (Xt - mu) / scale
    Xv = (Xv - mu) / scale

    params = TinyModel.init(dims, seed=cfg.seed).params64()
    for w, b in params[:-1]:
        b += 0.01  # small positive bias keeps rectifier units initially live
    m = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
    v = [(np.zeros_like(w), np.zeros_like(b)) for w, b in params]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0

    history = History()
    n_train = len(yt)
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n_train)
        batch_losses = []
        for start in range(0, n_train, cfg.batch_size):
            sel = order[start : start + cfg.batch_size]
            loss, grads = loss_and_grads(params, Xt[sel], Yt[sel])
            batch_losses.append(loss)
            step += 1
            bc1 = 1.0 - beta1**step
            bc2 = 1.0 - beta2**step
            for i, (gw, gb) in enumerate(grads):
                w, b = params[i]
                mw, mb = m[i]
                vw, vb = v[i]
                mw[:] = beta1 * mw + (1 - beta1) * gw
                mb[:] = beta1 * mb + (1 - beta1) * gb
                vw[:] = beta2 * vw + (1 - beta2) * gw**2
                vb[:] = beta2 * vb + (1 - beta2) * gb**2
                w -= cfg.base_lr * (mw / bc1) / (np.sqrt(vw / bc2) + eps)
                b -= cfg.base_lr * (mb / bc1) / (np.sqrt(vb / bc2) + eps)

        train_loss = float(np.mean(batch_losses))
        _, train_acc = _eval_split(params, Xt, Yt, yt)
        val_loss, val_acc = _eval_split(params, Xv, Yv, yv)
        history.epochs.append(EpochStats(epoch, train_loss, train_acc, val_loss, val_acc))

    w1, b1 = params[0]
    params[0] = (w1 / scale[:, None], b1 - (mu / scale) @ w1)
    model = TinyModel([w for w, _ in params], [b for _, b in params])
    return model, history
