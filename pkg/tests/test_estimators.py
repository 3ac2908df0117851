import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline

from teleglove.estimators import TinyGestureClassifier, WindowFeaturizer
from teleglove.spectral import N_FEATURES
from teleglove.synth import build_dataset, features_and_labels


@pytest.fixture(scope="module")
def small_windows():
    ds = build_dataset(per_class_ms=14_000, seed=4)
    X = np.stack([w.axes() for w in ds])
    y = np.array([w.label for w in ds], dtype=np.int64)
    return X, y


class TestWindowFeaturizer:
    def test_transform_shape(self, small_windows):
        X, _ = small_windows
        feats = WindowFeaturizer().fit_transform(X)
        assert feats.shape == (len(X), N_FEATURES)

    def test_accepts_imu_windows(self):
        ds = build_dataset(per_class_ms=4_000, seed=1)
        feats = WindowFeaturizer().transform(ds)
        ref, _ = features_and_labels(ds)
        assert np.allclose(feats, ref)

    def test_bad_shape_rejected(self):
        with pytest.raises(ValueError):
            WindowFeaturizer().transform(np.zeros((3, 200, 5)))

    def test_get_params(self):
        assert WindowFeaturizer(fs=50.0).get_params() == {"fs": 50.0}


class TestTinyGestureClassifier:
    def test_fit_predict(self, small_windows):
        X, y = small_windows
        feats = WindowFeaturizer().transform(X)
        clf = TinyGestureClassifier(epochs=8, seed=0).fit(feats, y)
        assert clf.predict(feats).shape == (len(y),)
        probs = clf.predict_proba(feats)
        assert probs.shape == (len(y), 7)
        assert np.abs(probs.sum(axis=1) - 1).max() < 1e-6
        assert len(clf.history_.epochs) == 8

    def test_unfitted_raises(self):
        with pytest.raises(NotFittedError):
            TinyGestureClassifier().predict(np.zeros((1, N_FEATURES)))

    def test_sklearn_clone_and_params(self):
        clf = TinyGestureClassifier(epochs=5, seed=9)
        cloned = clone(clf)
        assert cloned.get_params()["epochs"] == 5
        assert cloned.get_params()["seed"] == 9

    def test_pipeline_composition(self, small_windows):
        X, y = small_windows
        pipe = Pipeline(
            [("features", WindowFeaturizer()), ("clf", TinyGestureClassifier(epochs=8, seed=2))]
        )
        pipe.fit(X, y)
        acc = pipe.score(X, y)
        assert acc > 0.5  # sanity: far above the 1/7 chance level

    def test_from_model(self, trained_model):
        clf = TinyGestureClassifier.from_model(trained_model)
        x = np.zeros((2, N_FEATURES))
        assert clf.predict_proba(x).shape == (2, 7)
        assert list(clf.classes_) == list(range(7))
