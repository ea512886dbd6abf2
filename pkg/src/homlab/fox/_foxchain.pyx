# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch Fox-chain kernel.

Letter codes: k > 0 is generator k-1, k < 0 its inverse, 0 is padding.
Chain coordinates are edge indices j*N + h with N = L^{2g}.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int8_t, int64_t


def fox_chains(letters, int g, int L):
    """Return (chains, ends): int64 arrays of shape (B, 2g*N) and (B,)."""
    cdef const int8_t[:, :] w = np.ascontiguousarray(letters, dtype=np.int8)
    cdef Py_ssize_t B = w.shape[0], W = w.shape[1]
    cdef int n = 2 * g
    cdef int64_t N = 1
    cdef int i
    for i in range(n):
        N *= L
    cdef int64_t[:] step = np.array([L ** i for i in range(n)], dtype=np.int64)
    chains_arr = np.zeros((B, n * N), dtype=np.int64)
    ends_arr = np.zeros(B, dtype=np.int64)
    cdef int64_t[:, :] chains = chains_arr
    cdef int64_t[:] ends = ends_arr
    cdef Py_ssize_t b, t
    cdef int64_t h, s, digit
    cdef int k, j
    for b in range(B):
        h = 0
        for t in range(W):
            k = w[b, t]
            if k == 0:
                continue
            if k > 0:
                j = k - 1
                chains[b, j * N + h] += 1
                s = step[j]
                digit = (h // s) % L
                if digit == L - 1:
                    h -= (L - 1) * s
                else:
                    h += s
            else:
                j = -k - 1
                s = step[j]
                digit = (h // s) % L
                if digit == 0:
                    h += (L - 1) * s
                else:
                    h -= s
                chains[b, j * N + h] -= 1
        ends[b] = h
    return chains_arr, ends_arr
