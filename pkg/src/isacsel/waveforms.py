"""The five candidate waveforms behind one modulate/demodulate surface.

All candidates are expressed as linear operators on a symbol vector at
complex baseband, critically sampled (sample rate = bandwidth):

* OFDM: unitary inverse DFT per block, plus cyclic prefix.
* OCDM: inverse DFT of a chirp-phased DFT (Fresnel-like transform), plus CP.
* OTFS: symbols on an M-delay x N-Doppler grid; with rectangular pulses the
  time-domain frame is the unitary inverse DFT along the Doppler axis,
  vectorized delay-first, plus one CP for the whole frame.
* FMCW: one full-band linear chirp per symbol, sign of the symbol's real
  part encoded as the chirp phase (binary phase coding, 1 bit/chirp).
* SC: the symbol train itself (rectangular pulse) or an RRC-shaped,
  oversampled block; CP appended for block equalization.

Demodulation is genie-aided: the receiver is handed the true channel
realization (and noise variance) and applies per-tone MMSE equalization
(OFDM/OCDM/SC), block MMSE over the probed effective matrix (OTFS), or a
channel-matched per-chirp correlator (FMCW).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import numpy as np

from isacsel.channel import ChannelState, apply_paths_array


class WaveformId(IntEnum):
    """Stable candidate indices; this order is part of the dataset contract."""

    OFDM = 0
    OCDM = 1
    OTFS = 2
    FMCW = 3
    SC = 4


N_WAVEFORMS = len(WaveformId)
WAVEFORM_NAMES = tuple(w.name for w in WaveformId)


@dataclass
class SignalFrame:
    """One baseband frame: samples plus the metadata needed downstream."""

    samples: np.ndarray
    sample_rate: float
    waveform: WaveformId

    @property
    def duration(self) -> float:
        return self.samples.shape[-1] / self.sample_rate


# ---------------------------------------------------------------------------
# constellation
# ---------------------------------------------------------------------------


def _gray_to_binary(g: int) -> int:
    b = 0
    while g:
        b ^= g
        g >>= 1
    return b


@lru_cache(maxsize=None)
def qam_constellation(order: int):
    """Gray-mapped unit-energy constellation; returns (points, bit table)."""
    if order == 2:
        return np.array([1 + 0j, -1 + 0j]), np.array([[0], [1]], dtype=np.int8)
    k = int(np.log2(order))
    side = int(round(order**0.5))
    levels = np.arange(-(side - 1), side, 2, dtype=float)
    pts, bits = [], []
    for gi in range(side):
        for gq in range(side):
            pts.append(levels[_gray_to_binary(gi)] + 1j * levels[_gray_to_binary(gq)])
            word = (gi << (k // 2)) | gq
            bits.append([(word >> shift) & 1 for shift in range(k - 1, -1, -1)])
    pts = np.array(pts)
    pts /= np.sqrt(np.mean(np.abs(pts) ** 2))
    return pts, np.array(bits, dtype=np.int8)


def map_bits(bits: np.ndarray, order: int) -> np.ndarray:
    """Map a bit array (..., k) groups to constellation symbols."""
    pts, table = qam_constellation(order)
    k = table.shape[1]
    bits = np.asarray(bits).reshape(*bits.shape[:-1], -1, k)
    weights = 1 << np.arange(k - 1, -1, -1)
    idx_of_word = np.empty(order, dtype=np.int64)
    idx_of_word[(table * weights).sum(axis=1)] = np.arange(order)
    return pts[idx_of_word[(bits * weights).sum(axis=-1)]]


def demap_symbols(symbols: np.ndarray, order: int) -> np.ndarray:
    """Hard-decision demap to bits, shape (..., n_sym * k)."""
    pts, table = qam_constellation(order)
    d = np.abs(symbols[..., None] - pts)
    idx = np.argmin(d, axis=-1)
    out = table[idx]
    return out.reshape(*symbols.shape[:-1], -1)


def bits_per_symbol(waveform: WaveformId, cfg) -> int:
    if waveform == WaveformId.FMCW:
        return 1
    return int(np.log2(cfg.qam_order))


def symbols_per_frame(waveform: WaveformId, cfg) -> int:
    if waveform == WaveformId.OTFS:
        return cfg.otfs_delay_bins * cfg.otfs_doppler_bins
    return cfg.n_subcarriers


def frame_sample_count(waveform: WaveformId, cfg) -> int:
    if waveform == WaveformId.FMCW:
        return cfg.n_subcarriers * cfg.fmcw_samples_per_chirp
    if waveform == WaveformId.OTFS:
        return cfg.otfs_delay_bins * cfg.otfs_doppler_bins + cfg.cp_len
    if waveform == WaveformId.SC and cfg.sc_pulse == "rrc":
        return cfg.n_subcarriers * cfg.sc_oversample + cfg.cp_len
    return cfg.n_subcarriers + cfg.cp_len


# ---------------------------------------------------------------------------
# per-waveform transforms (batch core: symbol matrix (F, n_sym) -> (F, L))
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def ocdm_chirp_diag(n: int) -> np.ndarray:
    """Diagonal chirp phases exp(j*pi*k^2/N) of the OCDM transform."""
    k = np.arange(n)
    return np.exp(1j * np.pi * k * k / n)


@lru_cache(maxsize=None)
def fmcw_chirp(samples_per_chirp: int) -> np.ndarray:
    """Full-band unit-modulus chirp sweeping -fs/2 .. fs/2."""
    n = np.arange(samples_per_chirp)
    phase = 2 * np.pi * (-0.5 * n + 0.5 * n * n / samples_per_chirp)
    return np.exp(1j * phase)


@lru_cache(maxsize=None)
def rrc_taps(beta: float, span: int, oversample: int) -> np.ndarray:
    """Root-raised-cosine pulse, unit energy, length span*oversample+1."""
    t = np.arange(-span * oversample // 2, span * oversample // 2 + 1) / oversample
    taps = np.empty_like(t)
    for i, ti in enumerate(t):
        if abs(ti) < 1e-12:
            taps[i] = 1 - beta + 4 * beta / np.pi
        elif beta > 0 and abs(abs(4 * beta * ti) - 1.0) < 1e-9:
            taps[i] = (beta / np.sqrt(2)) * (
                (1 + 2 / np.pi) * np.sin(np.pi / (4 * beta))
                + (1 - 2 / np.pi) * np.cos(np.pi / (4 * beta))
            )
        else:
            num = np.sin(np.pi * ti * (1 - beta)) + 4 * beta * ti * np.cos(np.pi * ti * (1 + beta))
            den = np.pi * ti * (1 - (4 * beta * ti) ** 2)
            taps[i] = num / den
    return taps / np.linalg.norm(taps)


def _add_cp(blocks: np.ndarray, cp_len: int) -> np.ndarray:
    if cp_len == 0:
        return blocks
    return np.concatenate([blocks[..., -cp_len:], blocks], axis=-1)


def modulate_batch(waveform: WaveformId, symbols: np.ndarray, cfg) -> np.ndarray:
    """Modulate a (F, n_sym) symbol matrix into (F, L) baseband frames."""
    symbols = np.atleast_2d(np.asarray(symbols, dtype=np.complex128))
    n_sym = symbols.shape[1]
    if waveform != WaveformId.FMCW and n_sym != symbols_per_frame(waveform, cfg):
        raise ValueError(
            f"{waveform.name} expects {symbols_per_frame(waveform, cfg)} symbols per frame, got {n_sym}"
        )

    if waveform == WaveformId.OFDM:
        return _add_cp(np.fft.ifft(symbols, norm="ortho", axis=-1), cfg.cp_len)

    if waveform == WaveformId.OCDM:
        spread = ocdm_chirp_diag(n_sym) * np.fft.fft(symbols, norm="ortho", axis=-1)
        return _add_cp(np.fft.ifft(spread, norm="ortho", axis=-1), cfg.cp_len)

    if waveform == WaveformId.OTFS:
        m, n = cfg.otfs_delay_bins, cfg.otfs_doppler_bins
        grid = symbols.reshape(-1, n, m)  # [frame, doppler, delay]
        time_blocks = np.fft.ifft(grid, norm="ortho", axis=1)  # IDFT along Doppler
        return _add_cp(time_blocks.reshape(-1, m * n), cfg.cp_len)

    if waveform == WaveformId.FMCW:
        if n_sym < 1:
            raise ValueError("FMCW needs at least one symbol (chirp)")
        signs = np.where(symbols.real >= 0, 1.0, -1.0)
        chirp = fmcw_chirp(cfg.fmcw_samples_per_chirp)
        return (signs[:, :, None] * chirp[None, None, :]).reshape(symbols.shape[0], -1)

    if waveform == WaveformId.SC:
        if cfg.sc_pulse == "rect":
            return _add_cp(symbols, cfg.cp_len)
        os = cfg.sc_oversample
        up = np.zeros((symbols.shape[0], n_sym * os), dtype=np.complex128)
        up[:, ::os] = symbols
        taps = rrc_taps(cfg.sc_rrc_beta, cfg.sc_rrc_span, os)
        # circular shaping keeps the block length at n_sym*os so that CP
        # based frequency-domain equalization stays exact
        kernel = np.zeros(n_sym * os, dtype=np.complex128)
        half = len(taps) // 2
        idx = (np.arange(len(taps)) - half) % (n_sym * os)
        np.add.at(kernel, idx, taps)
        shaped = np.fft.ifft(np.fft.fft(up, axis=-1) * np.fft.fft(kernel), axis=-1)
        return _add_cp(shaped, cfg.cp_len)

    raise ValueError(f"unknown waveform id {waveform}")


def modulate(waveform: WaveformId, symbols: np.ndarray, cfg, sample_rate: float) -> SignalFrame:
    """Modulate one frame of symbols; see :func:`modulate_batch`."""
    samples = modulate_batch(waveform, np.asarray(symbols)[None, :], cfg)[0]
    return SignalFrame(samples=samples, sample_rate=sample_rate, waveform=waveform)


# ---------------------------------------------------------------------------
# genie-aided demodulation
# ---------------------------------------------------------------------------


def _mmse_taps(h: np.ndarray, noise_var: float) -> np.ndarray:
    """Per-tone MMSE equalizer; collapses to zero-forcing when noiseless."""
    return np.conj(h) / (np.abs(h) ** 2 + noise_var)


def _block_freq_response(state: ChannelState, t_mid: np.ndarray, nfft: int) -> np.ndarray:
    """(F, nfft) circular channel response seen by each frame.

    Doppler is frozen at each frame's mid-block time (the quasi-static
    approximation a one-tap equalizer lives with); the delay profile is the
    true windowed-sinc tap kernel folded modulo the block length.
    """
    kernels = state.tap_kernels()  # list of (offsets, taps) per path
    fr = np.zeros((len(t_mid), nfft), dtype=np.complex128)
    k = np.arange(nfft)
    gains = state.path_gains_at(t_mid)  # (F, L)
    for ell, (offsets, taps) in enumerate(kernels):
        resp = (taps[None, :] * np.exp(-2j * np.pi * np.outer(k, offsets % nfft) / nfft)).sum(
            axis=1
        )
        fr += gains[:, ell : ell + 1] * resp[None, :]
    return fr


def otfs_path_operators(cfg, state: ChannelState) -> list:
    """Per-path linear maps from the OTFS symbol vector to the CP-stripped
    received block, probed column by column through the real channel code.

    Each basis frame is propagated in isolation with its own time origin,
    so for frame f the effective matrix is exactly
    ``sum_l exp(j*2*pi*nu_l*t_f) * ops[l]``.
    """
    m, n = cfg.otfs_delay_bins, cfg.otfs_doppler_bins
    mn = m * n
    basis = np.eye(mn, dtype=np.complex128)
    tx = modulate_batch(WaveformId.OTFS, basis, cfg)  # (mn, mn+cp)
    ops = []
    for path in state.realization.paths:
        rx = apply_paths_array(
            tx,
            [path],
            state.realization.sample_rate,
            sinc_taps=state.sinc_taps,
            out_len=tx.shape[1],
        )
        ops.append(rx[:, cfg.cp_len : cfg.cp_len + mn].T.copy())
    return ops


def demodulate_batch(
    waveform: WaveformId, rx_frames: np.ndarray, cfg, state: ChannelState
) -> np.ndarray:
    """Recover symbol estimates from (F, L) received frames.

    ``state`` carries the true channel realization, the injected noise
    variance, and each frame's start time within the transmitted stream.
    """
    rx = np.atleast_2d(np.asarray(rx_frames, dtype=np.complex128))
    n_frames = rx.shape[0]
    expected = frame_sample_count(waveform, cfg)
    if rx.shape[1] < expected:
        raise ValueError(f"frame shorter than expected: {rx.shape[1]} < {expected}")
    if state is None:
        raise ValueError("demodulation requires the channel state (genie receiver)")
    fs = state.realization.sample_rate
    t0 = state.frame_offsets / fs
    nv = state.noise_var

    if waveform in (WaveformId.OFDM, WaveformId.OCDM, WaveformId.SC):
        n = cfg.n_subcarriers
        os = cfg.sc_oversample if (waveform == WaveformId.SC and cfg.sc_pulse == "rrc") else 1
        block = n * os
        data = rx[:, cfg.cp_len : cfg.cp_len + block]
        t_mid = t0 + (cfg.cp_len + block / 2) / fs
        h = _block_freq_response(state, t_mid, block)
        # unit-energy symbols through unitary transforms keep per-sample
        # signal power at 1, so the per-tone MMSE load is just noise_var
        eq = np.fft.fft(data, axis=-1) * _mmse_taps(h, nv)
        if waveform == WaveformId.OFDM:
            return eq * (1 / np.sqrt(n))  # undo ortho IDFT scale
        if waveform == WaveformId.OCDM:
            despread = np.conj(ocdm_chirp_diag(n)) * eq / np.sqrt(n)
            return np.fft.ifft(despread, norm="ortho", axis=-1)
        if os == 1:
            return np.fft.ifft(eq, axis=-1)
        # RRC: circular matched filter then symbol-rate sampling
        taps = rrc_taps(cfg.sc_rrc_beta, cfg.sc_rrc_span, os)
        kernel = np.zeros(block, dtype=np.complex128)
        half = len(taps) // 2
        idx = (np.arange(len(taps)) - half) % block
        np.add.at(kernel, idx, taps)
        matched = np.fft.ifft(eq * np.conj(np.fft.fft(kernel)), axis=-1)
        return matched[:, ::os]

    if waveform == WaveformId.OTFS:
        m, n = cfg.otfs_delay_bins, cfg.otfs_doppler_bins
        mn = m * n
        data = rx[:, cfg.cp_len : cfg.cp_len + mn]
        ops = otfs_path_operators(cfg, state)
        rot = state.path_rotations_at(t0)  # (F, L) phase factors
        heff = np.zeros((n_frames, mn, mn), dtype=np.complex128)
        for ell, op in enumerate(ops):
            heff += rot[:, ell, None, None] * op[None, :, :]
        hh = np.conj(np.swapaxes(heff, 1, 2))
        gram = hh @ heff + nv * np.eye(mn)[None, :, :]
        return np.linalg.solve(gram, hh @ data[:, :, None])[:, :, 0]

    if waveform == WaveformId.FMCW:
        spc = cfg.fmcw_samples_per_chirp
        n_chirps = rx.shape[1] // spc
        # genie matched template: the all-positive chirp train through the
        # true channel, decomposed per path so each frame's template is the
        # Doppler-rotated combination (exact, avoids per-frame re-probes)
        clean = np.tile(fmcw_chirp(spc), n_chirps)
        per_path = np.stack(
            [
                apply_paths_array(clean, [p], fs, sinc_taps=state.sinc_taps, out_len=clean.size)
                for p in state.realization.paths
            ]
        )  # (L, n_chirps*spc)
        rot = state.path_rotations_at(t0)  # (F, L)
        tmpl = (rot @ per_path).reshape(n_frames, n_chirps, spc)
        # the first samples of each chirp carry spill from the previous
        # chirp's data bit; skip them so in-window content is purely the own bit
        guard = min(state.max_delay_samples(), spc - 4)
        windows = rx[:, : n_chirps * spc].reshape(n_frames, n_chirps, spc)
        corr = (windows[:, :, guard:] * np.conj(tmpl[:, :, guard:])).sum(axis=2)
        return np.where(corr.real >= 0, 1.0, -1.0).astype(np.complex128)

    raise ValueError(f"unknown waveform id {waveform}")


def demodulate(waveform: WaveformId, rx_frame, cfg, state: ChannelState) -> np.ndarray:
    """Single-frame façade over :func:`demodulate_batch`."""
    samples = rx_frame.samples if isinstance(rx_frame, SignalFrame) else np.asarray(rx_frame)
    return demodulate_batch(waveform, samples[None, :], cfg, state)[0]


# ---------------------------------------------------------------------------
# signal statistics
# ---------------------------------------------------------------------------


def papr_db(samples: np.ndarray) -> float:
    """Peak-to-average power ratio in dB; >= 0, = 0 iff constant modulus."""
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("empty frame")
    power = np.abs(samples) ** 2
    mean = power.mean()
    if mean == 0:
        raise ValueError("zero-energy frame")
    return float(10 * np.log10(power.max() / mean))


def papr(frame: SignalFrame) -> float:
    return papr_db(frame.samples)
