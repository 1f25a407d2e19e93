"""Delay-Doppler multipath propagation, sensing echoes, and AWGN.

A channel realization is a bank of discrete paths (complex gain, delay in
seconds, Doppler in Hz). Application is the superposition

    y(t) = sum_l  alpha_l * exp(j*2*pi*nu_l*t) * x(t - tau_l)

discretized at the frame sample rate; fractional delays are realized by a
windowed-sinc interpolator (8 taps by default), so integer delays are
exact. The inner loop lives in :mod:`isacsel.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from isacsel import kernels


@dataclass
class PathParams:
    gain: complex
    delay_s: float
    doppler_hz: float


@dataclass
class ChannelRealization:
    """Path bank plus the sample rate it will be applied at."""

    paths: list
    sample_rate: float

    def __post_init__(self):
        if not self.paths:
            raise ValueError("a channel realization needs at least one path")
        if any(p.delay_s < 0 for p in self.paths):
            raise ValueError("path delays must be >= 0")

    def max_delay_samples(self) -> int:
        return int(math.ceil(max(p.delay_s for p in self.paths) * self.sample_rate))

    def cp_covers_delays(self, cp_len: int) -> bool:
        """Flag used to mark realizations whose delays exceed the CP budget."""
        return self.max_delay_samples() <= cp_len


@dataclass
class EchoSet:
    """Q dominant reflectors: reflection coefficient, round-trip delay, Doppler."""

    reflection: np.ndarray
    delay_s: np.ndarray
    doppler_hz: np.ndarray

    def __post_init__(self):
        self.reflection = np.asarray(self.reflection, dtype=np.complex128)
        self.delay_s = np.asarray(self.delay_s, dtype=float)
        self.doppler_hz = np.asarray(self.doppler_hz, dtype=float)
        if np.any(self.delay_s < 0):
            raise ValueError("echo delays must be >= 0")

    @property
    def count(self) -> int:
        return int(self.reflection.shape[0])


def sinc_interp_taps(delay_samples: float, n_taps: int):
    """Windowed-sinc fractional-delay kernel.

    Returns ``(base_offset, taps)`` with tap ``j`` acting at sample offset
    ``base_offset + j``. Integer delays collapse to a single unit tap, so
    they are exact; fractional kernels are normalized to unit DC gain.
    """
    d_int = int(math.floor(delay_samples))
    frac = delay_samples - d_int
    center = n_taps // 2 - 1
    u = np.arange(n_taps) - center - frac
    # Hamming-like taper centered on the true delay
    window = 0.54 + 0.46 * np.cos(np.pi * u / (n_taps / 2))
    taps = np.sinc(u) * np.clip(window, 0.0, None)
    taps /= taps.sum()
    return d_int - center, taps


def _path_arrays(paths, sample_rate: float, sinc_taps: int, t_start: float):
    n_paths = len(paths)
    offsets = np.empty(n_paths, dtype=np.int64)
    taps = np.empty((n_paths, sinc_taps), dtype=np.float64)
    phase0 = np.empty(n_paths, dtype=np.complex128)
    omega = np.empty(n_paths, dtype=np.float64)
    for i, p in enumerate(paths):
        offsets[i], taps[i] = sinc_interp_taps(p.delay_s * sample_rate, sinc_taps)
        phase0[i] = p.gain * np.exp(2j * np.pi * p.doppler_hz * t_start)
        omega[i] = 2 * np.pi * p.doppler_hz / sample_rate
    return offsets, taps, phase0, omega


def apply_paths_array(
    x: np.ndarray,
    paths,
    sample_rate: float,
    sinc_taps: int = 8,
    out_len: int | None = None,
    t_start: float = 0.0,
) -> np.ndarray:
    """Apply a path bank to (B, n) or (n,) samples; see module docstring."""
    x = np.asarray(x, dtype=np.complex128)
    squeeze = x.ndim == 1
    x2 = np.atleast_2d(x)
    if out_len is None:
        out_len = x2.shape[1]
    offsets, taps, phase0, omega = _path_arrays(paths, sample_rate, sinc_taps, t_start)
    out = kernels.apply_paths(x2, offsets, taps, phase0, omega, int(out_len))
    return out[0] if squeeze else out


def apply_channel(frame, realization: ChannelRealization, sinc_taps: int = 8, t_start: float = 0.0):
    """Propagate a frame (SignalFrame or array) through the realization."""
    samples = getattr(frame, "samples", frame)
    samples = np.asarray(samples, dtype=np.complex128)
    fs = getattr(frame, "sample_rate", realization.sample_rate)
    if abs(fs - realization.sample_rate) > 1e-6:
        raise ValueError(
            f"sample-rate mismatch: frame {fs} Hz vs realization {realization.sample_rate} Hz"
        )
    out = apply_paths_array(samples, realization.paths, fs, sinc_taps, t_start=t_start)
    if hasattr(frame, "samples"):
        return type(frame)(samples=out, sample_rate=fs, waveform=frame.waveform)
    return out


def awgn_variance(samples: np.ndarray, snr_db: float) -> float:
    """Complex noise variance that realizes the target SNR for this signal."""
    power = float(np.mean(np.abs(samples) ** 2))
    if power <= 0:
        raise ValueError("cannot set an SNR on a zero-energy frame")
    if math.isinf(snr_db):
        return 0.0
    return power / (10.0 ** (snr_db / 10.0))


def add_noise(samples: np.ndarray, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Circularly symmetric AWGN at the target SNR; +inf dB is noiseless."""
    samples = np.asarray(samples, dtype=np.complex128)
    var = awgn_variance(samples, snr_db)
    if var == 0.0:
        return samples.copy()
    scale = math.sqrt(var / 2.0)
    noise = scale * (rng.standard_normal(samples.shape) + 1j * rng.standard_normal(samples.shape))
    return samples + noise


def generate_echo(frame, echoes: EchoSet, sample_rate: float | None = None, sinc_taps: int = 8):
    """Superpose Q delayed/Doppler-shifted echoes of the frame (no noise)."""
    samples = getattr(frame, "samples", frame)
    samples = np.asarray(samples, dtype=np.complex128)
    fs = sample_rate or getattr(frame, "sample_rate", None)
    if fs is None:
        raise ValueError("sample_rate required when frame carries none")
    if echoes.count == 0:
        return np.zeros_like(samples)
    if np.any(echoes.delay_s * fs > samples.shape[-1]):
        raise ValueError("echo delay beyond the simulated observation window")
    paths = [
        PathParams(gain=complex(b), delay_s=float(t), doppler_hz=float(f))
        for b, t, f in zip(echoes.reflection, echoes.delay_s, echoes.doppler_hz)
    ]
    return apply_paths_array(samples, paths, fs, sinc_taps)


@dataclass
class ChannelState:
    """Everything the genie receiver knows: the realization, the injected
    noise variance, and where each frame starts inside the stream."""

    realization: ChannelRealization
    noise_var: float
    frame_offsets: np.ndarray
    sinc_taps: int = 8
    _kernels: list = field(default=None, repr=False)

    def __post_init__(self):
        self.frame_offsets = np.asarray(self.frame_offsets, dtype=np.int64)

    def tap_kernels(self) -> list:
        """Per-path (offsets, taps) interpolation kernels, gain excluded."""
        if self._kernels is None:
            fs = self.realization.sample_rate
            ks = []
            for p in self.realization.paths:
                base, taps = sinc_interp_taps(p.delay_s * fs, self.sinc_taps)
                ks.append((base + np.arange(self.sinc_taps), taps))
            self._kernels = ks
        return self._kernels

    def path_rotations_at(self, t: np.ndarray) -> np.ndarray:
        """(F, L) Doppler phase factors exp(j*2*pi*nu_l*t_f)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        nus = np.array([p.doppler_hz for p in self.realization.paths])
        return np.exp(2j * np.pi * np.outer(t, nus))

    def path_gains_at(self, t: np.ndarray) -> np.ndarray:
        """(F, L) complex gains alpha_l * exp(j*2*pi*nu_l*t_f)."""
        gains = np.array([p.gain for p in self.realization.paths])
        return self.path_rotations_at(t) * gains[None, :]

    def max_delay_samples(self) -> int:
        return self.realization.max_delay_samples()
