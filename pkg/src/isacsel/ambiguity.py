"""Matched-filter autocorrelation measures used for the sensing metrics.

Everything works on the zero-Doppler cut of the ambiguity surface, i.e.
the aperiodic autocorrelation of the transmitted waveform, interpolated by
spectral zero padding so that mainlobe widths can be read off precisely.
"""

from __future__ import annotations

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


def autocorrelation_cut(samples: np.ndarray, oversample: int = 16) -> tuple:
    """Oversampled |r(tau)| around zero lag, normalized to peak 1.

    Returns ``(mag, lag_step)`` where ``lag_step`` is the lag spacing in
    samples between consecutive points of ``mag`` (1/oversample).
    """
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.size == 0 or not np.any(samples):
        raise ValueError("degenerate frame: no energy to correlate")
    n = samples.size
    nfft = 1 << int(np.ceil(np.log2(2 * n)))
    spec = np.abs(np.fft.fft(samples, nfft)) ** 2
    padded = np.zeros(nfft * oversample, dtype=np.complex128)
    padded[: nfft // 2] = spec[: nfft // 2]
    padded[-nfft // 2 :] = spec[-nfft // 2 :]
    acf = np.fft.fftshift(np.fft.ifft(padded))
    mag = np.abs(acf)
    peak = mag.max()
    return mag / peak, 1.0 / oversample


def mainlobe_width_samples(mag: np.ndarray, lag_step: float, level_db: float = -3.0) -> float:
    """Two-sided width of the mainlobe at ``level_db`` below its peak,
    in units of input samples (linear interpolation between grid points)."""
    level = 10.0 ** (level_db / 20.0)
    c = int(np.argmax(mag))
    i = c
    while i + 1 < mag.size and mag[i] > level:
        i += 1
    if mag[i] > level:
        raise ValueError("mainlobe never crosses the requested level")
    right = i - 1 + (mag[i - 1] - level) / (mag[i - 1] - mag[i])
    j = c
    while j - 1 >= 0 and mag[j] > level:
        j -= 1
    if mag[j] > level:
        raise ValueError("mainlobe never crosses the requested level")
    left = j + 1 - (mag[j + 1] - level) / (mag[j + 1] - mag[j])
    return (right - left) * lag_step


def _mainlobe_edges(mag: np.ndarray) -> tuple:
    """First local minima on each side of the peak (mainlobe nulls)."""
    c = int(np.argmax(mag))
    i = c
    while i + 1 < mag.size and mag[i + 1] < mag[i]:
        i += 1
    j = c
    while j - 1 >= 0 and mag[j - 1] < mag[j]:
        j -= 1
    return j, i


def peak_sidelobe_db(mag: np.ndarray) -> float:
    """Peak sidelobe level in dB relative to the mainlobe (<= 0)."""
    left, right = _mainlobe_edges(mag)
    side = np.concatenate([mag[:left], mag[right + 1 :]])
    if side.size == 0:
        return -np.inf
    return float(20 * np.log10(max(side.max(), 1e-300)))


def integrated_sidelobe_db(mag: np.ndarray) -> float:
    """Sidelobe-to-mainlobe energy ratio in dB (clutter sensitivity proxy)."""
    left, right = _mainlobe_edges(mag)
    main = float(np.sum(mag[left : right + 1] ** 2))
    side = float(np.sum(mag**2) - main)
    return float(10 * np.log10(max(side, 1e-300) / main))


def doppler_cut(samples: np.ndarray, normalized_shifts) -> np.ndarray:
    """Coarse zero-delay Doppler cut |<s, s*e^{j2 pi f n}>| / ||s||^2.

    ``normalized_shifts`` are frequencies in cycles/sample.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    n = np.arange(samples.size)
    energy = float(np.sum(np.abs(samples) ** 2))
    out = np.empty(len(normalized_shifts))
    for i, f in enumerate(normalized_shifts):
        out[i] = np.abs(np.sum(np.abs(samples) ** 2 * np.exp(2j * np.pi * f * n))) / energy
    return out
