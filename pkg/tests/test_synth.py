import numpy as np
import pytest

from teleglove.errors import GenerationError
from teleglove.spectral import psd_welch
from teleglove.synth import (
    GESTURE_LABELS,
    GestureClass,
    SynthSpec,
    build_dataset,
    features_and_labels,
    load_dataset_csv,
    load_windows_csv,
    save_dataset_csv,
    synth_gesture,
    synth_recordings,
)


def axes_of(samples):
    return np.stack([s.as_row() for s in samples])


class TestSynthGesture:
    def test_deterministic(self):
        spec = SynthSpec(GestureClass.CIRCLE, seed=9)
        a = axes_of(synth_gesture(spec))
        b = axes_of(synth_gesture(spec))
        assert np.array_equal(a, b)

    def test_distinct_seeds_differ(self):
        a = axes_of(synth_gesture(SynthSpec(GestureClass.IDLE, seed=1)))
        b = axes_of(synth_gesture(SynthSpec(GestureClass.IDLE, seed=2)))
        assert not np.array_equal(a, b)

    def test_noise_free_idle_is_constant(self):
        data = axes_of(synth_gesture(SynthSpec(GestureClass.IDLE, noise_sigma=0.0)))
        assert np.allclose(data[:, 0:2], 0.0)
        assert np.allclose(data[:, 2], 1.0)  # gravity on accZ
        assert np.allclose(data[:, 3:6], 0.0)
        assert np.ptp(data[:, 6:9], axis=0).max() == 0.0

    def test_circle_quadrature_quarter_period(self):
        # 90 degrees of a 1 Hz wave at 100 Hz = 25 samples
        spec = SynthSpec(GestureClass.CIRCLE, freq=1.0, noise_sigma=0.0)
        data = axes_of(synth_gesture(spec))
        acc_x, acc_y = data[:, 0], data[:, 1]
        assert np.allclose(acc_y[25:], acc_x[:-25], atol=1e-9)

    def test_circle_quadrature_lag_at_2hz(self):
        spec = SynthSpec(GestureClass.CIRCLE, freq=2.0, noise_sigma=0.0)
        data = axes_of(synth_gesture(spec))
        lags = [
            np.correlate(data[:, 1], np.roll(data[:, 0], k)).item()
            for k in range(0, 30)
        ]
        assert int(np.argmax(lags)) in (12, 13)  # quarter period of 2 Hz = 12.5 samples

    def test_to_fro_energy_on_x(self):
        spec = SynthSpec(GestureClass.TO_FRO, freq=2.0, seed=4)
        data = axes_of(synth_gesture(spec))
        e_x = psd_welch(data[:, 0]).p[1:].sum()  # skip the DC bin
        e_y = psd_welch(data[:, 1]).p[1:].sum()
        assert e_x / e_y > 10

    def test_rectangle_flat_uses_xz_plane(self):
        data = axes_of(synth_gesture(SynthSpec(GestureClass.RECTANGLE_FLAT, noise_sigma=0.0)))
        assert np.ptp(data[:, 1]) == 0.0  # accY silent
        assert np.ptp(data[:, 0]) > 0 and np.ptp(data[:, 2]) > 0

    def test_invalid_spec_rejected(self):
        with pytest.raises(GenerationError):
            SynthSpec(GestureClass.IDLE, duration_ms=500)
        with pytest.raises(GenerationError):
            SynthSpec(GestureClass.IDLE, noise_sigma=-0.1)
        with pytest.raises(GenerationError):
            SynthSpec(GestureClass.IDLE, fs=0)


class TestBuildDataset:
    def test_window_counts_with_contiguous_hop(self):
        ds = build_dataset(per_class_ms=60_000, seed=0, hop_ms=2000)
        assert len(ds) == 210
        labels = [w.label for w in ds]
        assert all(labels.count(c) == 30 for c in range(7))

    def test_window_counts_with_streaming_hop(self):
        # (60000 - 2000) / 250 + 1 = 233 per class
        ds = build_dataset(per_class_ms=60_000, seed=0, hop_ms=250)
        labels = [w.label for w in ds]
        assert all(labels.count(c) == 233 for c in range(7))

    def test_deterministic(self):
        a, _ = features_and_labels(build_dataset(per_class_ms=8_000, seed=5))
        b, _ = features_and_labels(build_dataset(per_class_ms=8_000, seed=5))
        assert np.array_equal(a, b)

    def test_too_short_rejected(self):
        with pytest.raises(GenerationError, match="too short"):
            build_dataset(per_class_ms=1_000)

    def test_nearest_centroid_separability(self):
        # noise_sigma = 0.1 * amplitude, the bound for the separability oracle
        ds = build_dataset(per_class_ms=60_000, seed=3, noise_sigma=0.15, amplitude=1.5, hop_ms=2000)
        X, y = features_and_labels(ds)
        rng = np.random.default_rng(0)
        idx = rng.permutation(len(y))
        half = len(y) // 2
        tr, te = idx[:half], idx[half:]
        centroids = np.stack([X[tr][y[tr] == c].mean(axis=0) for c in range(7)])
        d = ((X[te][:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        acc = (d.argmin(axis=1) == y[te]).mean()
        assert acc >= 0.95


class TestDatasetCsv:
    def test_roundtrip(self, tmp_path):
        recs = synth_recordings(per_class_ms=4_000, seed=2)
        path = tmp_path / "ds.csv"
        assert save_dataset_csv(recs, path) == sum(len(r.samples) for r in recs)
        loaded = load_dataset_csv(path)
        assert [r.label for r in loaded] == [r.label for r in recs]
        assert [len(r.samples) for r in loaded] == [len(r.samples) for r in recs]
        X0, y0 = features_and_labels(build_dataset(per_class_ms=4_000, seed=2))
        X1, y1 = features_and_labels(load_windows_csv(path))
        assert np.array_equal(y0, y1)
        assert np.allclose(X0, X1, atol=1e-4)

    def test_same_seed_identical_bytes(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        save_dataset_csv(synth_recordings(per_class_ms=4_000, seed=6), p1)
        save_dataset_csv(synth_recordings(per_class_ms=4_000, seed=6), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_unknown_label_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        save_dataset_csv(synth_recordings(per_class_ms=4_000, seed=2), path)
        content = path.read_text().replace("idle", "wave")
        path.write_text(content)
        with pytest.raises(ValueError, match="wave"):
            load_dataset_csv(path)

    def test_label_names_are_canonical(self):
        assert GESTURE_LABELS[GestureClass.UP_DOWN] == "up-down"
        assert GESTURE_LABELS[GestureClass.RECTANGLE_FLAT] == "rectangle-flat"
