"""Discrete-spectrum helpers for beat analysis of simulated traces."""

import numpy as np

from .errors import FitError, ValidationError


def modulation_spectrum(
    x: np.ndarray, y: np.ndarray, detrend: bool = True, window: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """One-sided amplitude spectrum of a uniformly sampled signal.

    Subtracts the mean and applies a Hann window by default (sidelobes of a
    strong line then stay below a few percent, so thresholded peak sets are
    meaningful). Returns (frequencies, amplitudes).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 8:
        raise ValidationError("need at least 8 aligned samples")
    steps = np.diff(x)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValidationError("spectrum requires a uniform grid")
    signal = y - np.mean(y) if detrend else y.copy()
    if window:
        signal = signal * np.hanning(signal.size)
    amplitude = np.abs(np.fft.rfft(signal))
    frequency = np.fft.rfftfreq(signal.size, steps[0])
    return frequency, amplitude


def spectral_peaks(
    frequency: np.ndarray, amplitude: np.ndarray, rel_threshold: float = 0.1
) -> np.ndarray:
    """Frequencies of interior local maxima above a fraction of the strongest.

    Excluding the boundary bins discards the DC foot of decaying baselines.
    """
    idx = np.arange(1, amplitude.size - 1)
    local_max = idx[(amplitude[idx] > amplitude[idx - 1]) & (amplitude[idx] >= amplitude[idx + 1])]
    if local_max.size == 0:
        raise FitError("spectrum has no interior peaks")
    keep = amplitude[local_max] >= rel_threshold * np.max(amplitude[local_max])
    return frequency[local_max[keep]]


def dominant_beat(x: np.ndarray, y: np.ndarray) -> float:
    """Frequency of the strongest interior spectral peak of a signal."""
    frequency, amplitude = modulation_spectrum(x, y)
    idx = np.arange(1, amplitude.size - 1)
    local_max = idx[(amplitude[idx] > amplitude[idx - 1]) & (amplitude[idx] >= amplitude[idx + 1])]
    if local_max.size == 0:
        raise FitError("signal has no oscillatory component")
    return float(frequency[local_max[np.argmax(amplitude[local_max])]])
