"""Scikit-learn style estimators wrapping the feature and classifier cores.

WindowFeaturizer is a stateless transformer turning raw 9-axis windows into
117-dim feature vectors; TinyGestureClassifier wraps the dense network with
the standard fit / predict / predict_proba surface, so both compose with
sklearn pipelines and model-selection tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .imu import ImuWindow
from .nn import DEFAULT_DIMS, TinyModel, TrainConfig, forward_f32, train
from .spectral import N_AXES, N_FEATURES, extract_features_batch


class WindowFeaturizer(BaseEstimator, TransformerMixin):
    """Transform (n, n_samples, 9) raw windows into (n, 117) feature vectors.

    Accepts ndarrays or sequences of ImuWindow. Stateless: fit only
    validates. ``fs`` is the sampling rate used for the power spectra.
    """

    def __init__(self, fs: float = 100.0):
        self.fs = fs

    def fit(self, X, y=None):
        self._validate(X)
        return self

    def transform(self, X) -> np.ndarray:
        return extract_features_batch(self._validate(X), fs=self.fs)

    def _validate(self, X) -> np.ndarray:
        if len(X) and isinstance(X[0], ImuWindow):
            X = np.stack([w.axes() for w in X])
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 3 or X.shape[2] != N_AXES:
            raise ValueError(f"expected (n, samples, {N_AXES}) windows, got {X.shape}")
        return X


class TinyGestureClassifier(ClassifierMixin, BaseEstimator):
    """Dense 117->20->10->5->n softmax classifier with deterministic training.

    Hyperparameters mirror the training defaults (30 epochs, Adam at 5e-4,
    batch 32, stratified 20% validation split). After fit, ``model_`` holds
    the trained float32 network and ``history_`` the per-epoch metrics.
    """

    def __init__(
        self,
        epochs: int = 30,
        base_lr: float = 5e-4,
        batch_size: int = 32,
        val_fraction: float = 0.20,
        seed: int = 0,
        hidden: tuple[int, ...] = (20, 10, 5),
    ):
        self.epochs = epochs
        self.base_lr = base_lr
        self.batch_size = batch_size
        self.val_fraction = val_fraction
        self.seed = seed
        self.hidden = hidden

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        y = y.astype(np.int64)
        self.classes_ = np.unique(y)
        dims = (X.shape[1], *self.hidden, int(y.max()) + 1)
        cfg = TrainConfig(
            epochs=self.epochs,
            base_lr=self.base_lr,
            batch_size=self.batch_size,
            val_fraction=self.val_fraction,
            seed=self.seed,
        )
        self.model_, self.history_ = train(X, y, cfg, dims=dims)
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X) -> np.ndarray:
        check_is_fitted(self, "model_")
        X = check_array(X)
        return forward_f32(self.model_, X)

    def predict(self, X) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)

    @classmethod
    def from_model(cls, model: TinyModel) -> "TinyGestureClassifier":
        """Wrap an already trained network (e.g. loaded from a model file)."""
        est = cls(hidden=model.dims[1:-1])
        est.model_ = model
        est.classes_ = np.arange(model.n_classes)
        est.n_features_in_ = model.n_in
        return est
