"""Spectral + statistical feature extraction for 9-axis IMU windows.

Each axis of a 200-sample window contributes 13 features: the 8 one-sided
log-power bins of an averaged 16-point FFT power spectrum, followed by 5
time-domain statistics (mean, rms, variance, skewness, excess kurtosis).
9 axes x 13 = 117 features per window, axis-major (accX..magZ).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imu import ImuWindow

N_FFT = 16
N_PSD_BINS = N_FFT // 2  # one-sided bins k = 0..7
N_STATS = 5
N_AXES = 9
FEATURES_PER_AXIS = N_PSD_BINS + N_STATS
N_FEATURES = N_AXES * FEATURES_PER_AXIS  # 117
LOG_FLOOR = 1e-12

AXIS_NAMES = ("accX", "accY", "accZ", "gyrX", "gyrY", "gyrZ", "magX", "magY", "magZ")

# Bit-reversal permutation and per-stage twiddle factors for the fixed
# 16-point radix-2 decimation-in-time transform.
_BITREV16 = np.array([0, 8, 4, 12, 2, 10, 6, 14, 1, 9, 5, 13, 3, 11, 7, 15])
_TWIDDLES = [
    np.exp(-2j * np.pi * np.arange(half) / (2 * half)) for half in (1, 2, 4, 8)
]


@dataclass(frozen=True)
class Spectrum16:
    """Complex 16-point DFT bins of one frame."""

    bins: np.ndarray
    fs: float


@dataclass(frozen=True)
class PsdBins:
    """One-sided averaged power bins P[0..7] with their bin spacing."""

    p: np.ndarray
    delta_f: float


@dataclass(frozen=True)
class AxisStats:
    """Time-domain statistics of one axis: rms is raw, variance is central."""

    mean: float
    rms: float
    variance: float
    skewness: float
    kurtosis: float


def fft16(frame: np.ndarray) -> np.ndarray:
    """16-point DFT along the last axis via radix-2 butterflies.

    Accepts any leading batch shape (..., 16) and returns complex bins with
    the same shape. Matches the direct O(N^2) DFT to ~1e-15 relative error.
    """
    frame = np.asarray(frame)
    if frame.shape[-1] != N_FFT:
        raise ValueError(f"frame length must be {N_FFT}, got {frame.shape[-1]}")
    if not np.all(np.isfinite(frame)):
        raise ValueError("frame contains non-finite values")
    x = frame[..., _BITREV16].astype(np.complex128)
    for half, w in zip((1, 2, 4, 8), _TWIDDLES):
        x = x.reshape(*x.shape[:-1], -1, 2 * half)
        even = x[..., :half]
        odd = x[..., half:] * w
        x = np.concatenate([even + odd, even - odd], axis=-1)
        x = x.reshape(*x.shape[:-2], -1)
    return x


def spectrum16(frame: np.ndarray, fs: float = 100.0) -> Spectrum16:
    """Convenience wrapper pairing the 16 DFT bins with their sample rate."""
    return Spectrum16(bins=fft16(frame), fs=fs)


def psd_welch(axis: np.ndarray, fs: float = 100.0) -> PsdBins:
    """One-sided power bins averaged over disjoint 16-sample frames.

    The window is split into floor(n/16) frames (the trailing remainder is
    discarded), each frame yields P[k] = |X[k]|^2 / 16 for k = 0..7, and the
    bins are averaged across frames. No tapering window is applied.
    """
    axis = np.asarray(axis, dtype=np.float64)
    if axis.ndim != 1:
        raise ValueError("axis must be 1-D")
    n_frames = axis.size // N_FFT
    if n_frames < 1:
        raise ValueError(f"need at least {N_FFT} samples, got {axis.size}")
    frames = axis[: n_frames * N_FFT].reshape(n_frames, N_FFT)
    spec = fft16(frames)
    p = (np.abs(spec[:, :N_PSD_BINS]) ** 2 / N_FFT).mean(axis=0)
    return PsdBins(p=p, delta_f=fs / N_FFT)


def axis_stats(axis: np.ndarray) -> AxisStats:
    """Mean, raw rms, population variance, skewness, and excess kurtosis.

    Zero-variance input returns skewness = kurtosis = 0 by convention, so a
    constant axis produces finite features.
    """
    axis = np.asarray(axis, dtype=np.float64)
    if axis.size == 0:
        raise ValueError("axis must be non-empty")
    mean = float(axis.mean())
    rms = float(np.sqrt(np.mean(axis**2)))
    centered = axis - mean
    m2 = float(np.mean(centered**2))
    if m2 <= 0.0:
        return AxisStats(mean, rms, 0.0, 0.0, 0.0)
    m3 = float(np.mean(centered**3))
    m4 = float(np.mean(centered**4))
    return AxisStats(mean, rms, m2, m3 / m2**1.5, m4 / m2**2 - 3.0)


def _features_from_matrix(data: np.ndarray, fs: float) -> np.ndarray:
    parts = []
    for col in range(data.shape[1]):
        axis = data[:, col]
        psd = psd_welch(axis, fs=fs)
        stats = axis_stats(axis)
        parts.append(np.log10(psd.p + LOG_FLOOR))
        parts.append(
            np.array([stats.mean, stats.rms, stats.variance, stats.skewness, stats.kurtosis])
        )
    return np.concatenate(parts)


def extract_features(window: ImuWindow) -> np.ndarray:
    """117-dim feature vector of a window, axis-major (accX..magZ).

    Scaling and decimation are identity (factor 1), so the window content
    passes through unchanged before the per-axis transform.
    """
    return _features_from_matrix(window.axes(), window.fs)


def extract_features_batch(windows: np.ndarray, fs: float = 100.0) -> np.ndarray:
    """Vectorized feature extraction over (n_windows, n_samples, 9) arrays."""
    windows = np.asarray(windows, dtype=np.float64)
    if windows.ndim != 3 or windows.shape[2] != N_AXES:
        raise ValueError(f"expected (n, samples, {N_AXES}), got {windows.shape}")
    n_win, n_samp, _ = windows.shape
    n_frames = n_samp // N_FFT
    if n_frames < 1:
        raise ValueError(f"need at least {N_FFT} samples per window")

    # (n, axes, samples) so frames tile each axis independently.
    data = windows.transpose(0, 2, 1)
    frames = data[:, :, : n_frames * N_FFT].reshape(n_win, N_AXES, n_frames, N_FFT)
    psd = (np.abs(fft16(frames)[..., :N_PSD_BINS]) ** 2 / N_FFT).mean(axis=2)
    log_psd = np.log10(psd + LOG_FLOOR)

    mean = data.mean(axis=2)
    rms = np.sqrt(np.mean(data**2, axis=2))
    centered = data - mean[:, :, None]
    m2 = np.mean(centered**2, axis=2)
    m3 = np.mean(centered**3, axis=2)
    m4 = np.mean(centered**4, axis=2)
    ok = m2 > 0.0
    skew = np.zeros_like(m2)
    kurt = np.zeros_like(m2)
    skew[ok] = m3[ok] / m2[ok] ** 1.5
    kurt[ok] = m4[ok] / m2[ok] ** 2 - 3.0

    stats = np.stack([mean, rms, m2, skew, kurt], axis=2)
    feats = np.concatenate([log_psd, stats], axis=2)
    return feats.reshape(n_win, N_FEATURES)
