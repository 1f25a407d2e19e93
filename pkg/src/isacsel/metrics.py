"""Raw sensing, communication, and joint figures for one (waveform, scenario).

The measurement chain per candidate: synthesize frames, run them through a
scenario-representative delay-Doppler channel as one continuous stream,
inject AWGN at the scenario's mean SNR, demodulate with the genie-aided
receiver, and count bit errors; the sensing figures come from the
matched-filter autocorrelation of a clean reference frame, and the joint
figures from the transmit-side signal statistics. All draws are derived
from the scenario seed, so every figure is reproducible in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from isacsel import ambiguity, waveforms
from isacsel.ambiguity import SPEED_OF_LIGHT
from isacsel.channel import (
    ChannelRealization,
    ChannelState,
    PathParams,
    add_noise,
    apply_paths_array,
    awgn_variance,
)
from isacsel.config import SimConfig
from isacsel.scenario import Scenario
from isacsel.seeding import child_rng
from isacsel.waveforms import WaveformId


@dataclass
class CommMetrics:
    ber: float
    spectral_efficiency: float  # bits/s/Hz
    throughput: float  # bits/s


@dataclass
class SensingMetrics:
    range_resolution_m: float
    velocity_resolution_mps: float
    asl_db: float
    clutter_db: float


@dataclass
class JointMetrics:
    papr_db: float
    latency_s: float
    energy_efficiency: float  # bits/Joule


def effective_channel(scenario: Scenario, config: SimConfig) -> ChannelRealization:
    """Cell-representative multipath realization shared by all candidates.

    Drawn from the same profile family as the per-user path sets but
    parameterized by the realized cell descriptors, so the feature vector
    and the channel the waveforms actually see stay consistent.
    """
    rng = child_rng(scenario.seed, "effective-channel")
    cfg = config.scenario
    lo, hi = cfg.path_count_range
    n_paths = int(rng.integers(lo, hi + 1))
    target = max(scenario.descriptors.delay_spread_s, 1e-12)
    delays = np.zeros(n_paths)
    if n_paths > 1:
        delays[1:] = np.sort(rng.uniform(0.0, 3.0 * target, n_paths - 1))
    powers = np.exp(-delays / target)
    powers /= powers.sum()
    phases = rng.uniform(0.0, 2 * np.pi, n_paths)
    gains = np.sqrt(powers) * np.exp(1j * phases)
    f_max = scenario.carrier_hz * scenario.mobility_mps / SPEED_OF_LIGHT
    dopplers = f_max * np.cos(rng.uniform(0.0, 2 * np.pi, n_paths))
    paths = [
        PathParams(gain=complex(g), delay_s=float(d), doppler_hz=float(f))
        for g, d, f in zip(gains, delays, dopplers)
    ]
    return ChannelRealization(paths=paths, sample_rate=scenario.bandwidth_hz)


def _random_frame_symbols(waveform, n_frames, cfg, rng):
    """Random payload: returns (bits, symbols) for a batch of frames."""
    n_sym = waveforms.symbols_per_frame(waveform, cfg)
    bps = waveforms.bits_per_symbol(waveform, cfg)
    bits = rng.integers(0, 2, size=(n_frames, n_sym * bps), dtype=np.int8)
    if waveform == WaveformId.FMCW:
        symbols = (1.0 - 2.0 * bits).astype(np.complex128)  # bit 0 -> +1
    else:
        symbols = waveforms.map_bits(bits, cfg.qam_order)
    return bits, symbols


def measure_comm(
    waveform: WaveformId,
    scenario: Scenario,
    config: SimConfig,
    rng: np.random.Generator | None = None,
    snr_db: float | None = None,
    realization: ChannelRealization | None = None,
) -> CommMetrics:
    """Monte-Carlo BER / spectral efficiency / throughput.

    ``snr_db`` and ``realization`` default to the scenario's own values and
    exist for controlled experiments (e.g. noiseless round trips).
    """
    wf = config.waveform
    mt = config.metrics
    if rng is None:
        rng = child_rng(scenario.seed, "comm", int(waveform))
    if snr_db is None:
        snr_db = scenario.descriptors.snr_db
    if realization is None:
        realization = effective_channel(scenario, config)

    n_frames = mt.comm_frames
    bits, symbols = _random_frame_symbols(waveform, n_frames, wf, rng)
    tx = waveforms.modulate_batch(waveform, symbols, wf)
    frame_len = tx.shape[1]
    stream = tx.reshape(-1)
    rx_stream = apply_paths_array(
        stream,
        realization.paths,
        realization.sample_rate,
        sinc_taps=config.channel.sinc_taps,
        out_len=stream.size,
    )
    noise_var = awgn_variance(rx_stream, snr_db)
    rx_stream = add_noise(rx_stream, snr_db, rng)
    state = ChannelState(
        realization=realization,
        noise_var=noise_var,
        frame_offsets=np.arange(n_frames) * frame_len,
        sinc_taps=config.channel.sinc_taps,
    )
    est = waveforms.demodulate_batch(waveform, rx_stream.reshape(n_frames, frame_len), wf, state)

    if waveform == WaveformId.FMCW:
        rx_bits = (est.real < 0).astype(np.int8)
    else:
        rx_bits = waveforms.demap_symbols(est, wf.qam_order)
    total_bits = bits.size
    errors = int(np.count_nonzero(rx_bits != bits))
    ber = errors / total_bits
    if errors == 0 and not np.isinf(snr_db):
        # Monte-Carlo floor: a noisy link that shows zero errors is only
        # known to be below ~1/(2*bits); noiseless runs stay at exactly 0
        ber = 1.0 / (2.0 * total_bits)

    if waveform == WaveformId.FMCW:
        se = (1.0 - ber) / wf.fmcw_samples_per_chirp
    else:
        se = waveforms.bits_per_symbol(waveform, wf) * (1.0 - ber)
    throughput = se * scenario.bandwidth_hz * (1.0 - mt.throughput_overhead[int(waveform)])
    return CommMetrics(ber=float(ber), spectral_efficiency=float(se), throughput=float(throughput))


def sensing_reference(waveform: WaveformId, scenario: Scenario, config: SimConfig) -> np.ndarray:
    """Clean compression unit the ambiguity cut is computed on.

    For FMCW this is a single chirp (per-sweep pulse compression); data
    phase coding only flips its sign and cannot change |r|. The other
    candidates correlate over a whole transmitted frame, CP included, with
    payload drawn from the scenario seed.
    """
    wf = config.waveform
    if waveform == WaveformId.FMCW:
        return waveforms.fmcw_chirp(wf.fmcw_samples_per_chirp)
    rng = child_rng(scenario.seed, "sensing", int(waveform))
    _, symbols = _random_frame_symbols(waveform, 1, wf, rng)
    return waveforms.modulate_batch(waveform, symbols, wf)[0]


def measure_sensing(waveform: WaveformId, scenario: Scenario, config: SimConfig) -> SensingMetrics:
    """Ambiguity-based sensing figures at the scenario bandwidth."""
    wf = config.waveform
    fs = scenario.bandwidth_hz
    ref = sensing_reference(waveform, scenario, config)
    mag, lag_step = ambiguity.autocorrelation_cut(ref, config.metrics.acf_oversample)
    width_s = ambiguity.mainlobe_width_samples(mag, lag_step) / fs
    range_res = SPEED_OF_LIGHT * width_s / 2.0
    frame_duration = waveforms.frame_sample_count(waveform, wf) / fs
    vel_res = SPEED_OF_LIGHT / (2.0 * scenario.carrier_hz * frame_duration)
    return SensingMetrics(
        range_resolution_m=float(range_res),
        velocity_resolution_mps=float(vel_res),
        asl_db=float(ambiguity.peak_sidelobe_db(mag)),
        clutter_db=float(ambiguity.integrated_sidelobe_db(mag)),
    )


def measure_joint(
    waveform: WaveformId,
    scenario: Scenario,
    config: SimConfig,
    comm: CommMetrics | None = None,
) -> JointMetrics:
    """Transmit-side practicality figures: PAPR, latency proxy, bits/Joule."""
    wf = config.waveform
    mt = config.metrics
    if comm is None:
        comm = measure_comm(waveform, scenario, config)
    rng = child_rng(scenario.seed, "joint", int(waveform))
    _, symbols = _random_frame_symbols(waveform, mt.joint_frames, wf, rng)
    frames = waveforms.modulate_batch(waveform, symbols, wf)
    papr = float(np.mean([waveforms.papr_db(f) for f in frames]))
    frame_duration = waveforms.frame_sample_count(waveform, wf) / scenario.bandwidth_hz
    latency = frame_duration * mt.latency_factors[int(waveform)]
    backoff = 1.0 + mt.papr_backoff_per_db * papr
    energy_eff = comm.throughput / (mt.p_tx_watts * backoff)
    return JointMetrics(
        papr_db=papr, latency_s=float(latency), energy_efficiency=float(energy_eff)
    )


def measure_all(scenario: Scenario, config: SimConfig) -> tuple:
    """Raw metric tables for all K candidates under one scenario.

    Returns ``(sensing, comm, joint)`` arrays of shapes (K,4), (K,3), (K,3)
    in the column orders declared in :mod:`isacsel.objectives`.
    """
    realization = effective_channel(scenario, config)
    sensing = np.empty((waveforms.N_WAVEFORMS, 4))
    comm = np.empty((waveforms.N_WAVEFORMS, 3))
    joint = np.empty((waveforms.N_WAVEFORMS, 3))
    for wid in WaveformId:
        c = measure_comm(wid, scenario, config, realization=realization)
        s = measure_sensing(wid, scenario, config)
        j = measure_joint(wid, scenario, config, comm=c)
        sensing[wid] = (s.range_resolution_m, s.velocity_resolution_mps, s.asl_db, s.clutter_db)
        comm[wid] = (c.ber, c.spectral_efficiency, c.throughput)
        joint[wid] = (j.papr_db, j.latency_s, j.energy_efficiency)
    return sensing, comm, joint
