# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled multipath application kernel; see pyref.py for the semantics."""

import numpy as np

cimport cython
from libc.math cimport cos, sin

ctypedef double complex dcomplex

# exact phase recomputation interval; bounds recurrence drift to ~1e-13
DEF RENORM = 512


def apply_paths(x, offsets, taps, phase0, omega, Py_ssize_t out_len):
    x2 = np.ascontiguousarray(np.atleast_2d(np.asarray(x, dtype=np.complex128)))
    cdef dcomplex[:, ::1] xv = x2
    cdef long long[::1] offv = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef double[:, ::1] tapv = np.ascontiguousarray(taps, dtype=np.float64)
    cdef dcomplex[::1] ph0v = np.ascontiguousarray(phase0, dtype=np.complex128)
    cdef double[::1] omv = np.ascontiguousarray(omega, dtype=np.float64)

    out = np.zeros((x2.shape[0], out_len), dtype=np.complex128)
    cdef dcomplex[:, ::1] outv = out
    tmp = np.empty(out_len, dtype=np.complex128)
    cdef dcomplex[::1] tmpv = tmp
    phase = np.empty(out_len, dtype=np.complex128)
    cdef dcomplex[::1] phv = phase

    cdef Py_ssize_t batch = xv.shape[0]
    cdef Py_ssize_t n = xv.shape[1]
    cdef Py_ssize_t n_paths = offv.shape[0]
    cdef Py_ssize_t n_taps = tapv.shape[1]
    cdef Py_ssize_t b, ell, j, m, lo, hi, shift
    cdef double w, ang, tap
    cdef dcomplex p0, rot, p

    for ell in range(n_paths):
        # per-output-sample phase ramp, shared by all batch rows
        w = omv[ell]
        p0 = ph0v[ell]
        rot = cos(w) + 1j * sin(w)
        p = p0
        for m in range(out_len):
            if m % RENORM == 0:
                ang = w * m
                p = p0 * (cos(ang) + 1j * sin(ang))
            phv[m] = p
            p = p * rot

        for b in range(batch):
            for m in range(out_len):
                tmpv[m] = 0
            for j in range(n_taps):
                shift = <Py_ssize_t> offv[ell] + j
                lo = shift if shift > 0 else 0
                hi = n + shift if n + shift < out_len else out_len
                tap = tapv[ell, j]
                for m in range(lo, hi):
                    tmpv[m] = tmpv[m] + tap * xv[b, m - shift]
            for m in range(out_len):
                outv[b, m] = outv[b, m] + tmpv[m] * phv[m]
    return out
