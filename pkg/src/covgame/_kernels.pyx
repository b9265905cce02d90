# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled coverage-integral kernel.

Must stay arithmetically identical to ``_kernels_py.utility_rows`` term by
term; only the final accumulation order differs (sequential here).
"""

import numpy as np
from libc.math cimport log2


def utility_rows(const double[::1] weights, const double[:, ::1] gains, Py_ssize_t i,
                 double sigma2, const double[:, ::1] powers):
    cdef Py_ssize_t n_rows = powers.shape[0]
    cdef Py_ssize_t n_nodes = weights.shape[0]
    cdef Py_ssize_t n_sbs = gains.shape[1]
    out = np.zeros(n_rows, dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t m, n, j
    cdef double interference, g_own, w
    # nodes outer so each gains row is read once; every row still sums its
    # terms in ascending node order
    with nogil:
        for n in range(n_nodes):
            w = weights[n]
            g_own = gains[n, i]
            for m in range(n_rows):
                if powers[m, i] == 0.0:  # w * log2(1) == 0
                    continue
                interference = sigma2
                for j in range(n_sbs):
                    if j != i:
                        interference = interference + gains[n, j] * powers[m, j]
                res[m] = res[m] + w * log2(1.0 + g_own * powers[m, i] / interference)
    return out
