"""Numpy reference implementation of the multipath application kernel.

Semantics (shared with the compiled backend): for each batch row and each
path ``l`` with base sample offset ``o_l``, interpolation taps ``c_l``,
initial phase ``p_l`` and per-sample angular step ``w_l``,

    out[b, m] += p_l * exp(1j*w_l*m) * sum_j c_l[j] * x[b, m - o_l - j]

with out-of-range input samples treated as zero. The backends agree to
~1e-12 relative (the extension advances the phase by recurrence with
periodic exact renormalization).
"""

import numpy as np


def apply_paths(x, offsets, taps, phase0, omega, out_len):
    """Apply a bank of delayed/Doppler-shifted paths to (B, n) input rows.

    Parameters are arrays: ``offsets (L,) int``, ``taps (L, T) float``,
    ``phase0 (L,) complex``, ``omega (L,) float`` (radians/sample).
    Returns an (B, out_len) complex array.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.complex128))
    batch, n = x.shape
    out = np.zeros((batch, out_len), dtype=np.complex128)
    m = np.arange(out_len)
    tmp = np.empty((batch, out_len), dtype=np.complex128)
    for ell in range(len(offsets)):
        tmp[:] = 0.0
        for j in range(taps.shape[1]):
            shift = int(offsets[ell]) + j
            lo, hi = max(0, shift), min(out_len, n + shift)
            if lo >= hi:
                continue
            tmp[:, lo:hi] += taps[ell, j] * x[:, lo - shift : hi - shift]
        out += tmp * (phase0[ell] * np.exp(1j * omega[ell] * m))[None, :]
    return out
