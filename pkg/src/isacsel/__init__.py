"""isacsel: simulation-driven waveform evaluation and learned selection.

The pipeline samples heterogeneous network snapshots, simulates five
candidate waveforms (OFDM, OCDM, OTFS, FMCW, single-carrier) through a
delay-Doppler multipath channel, scores each candidate on sensing,
communication and joint objectives, labels every snapshot with its
epsilon-Pareto-optimal waveform set, and trains multi-label models to
predict those sets from an 8-dimensional scenario feature vector.
"""

from isacsel.waveforms import WaveformId

__version__ = "0.1.0"

__all__ = ["WaveformId", "__version__"]
