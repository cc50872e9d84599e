# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sequential-sweep kernel.

Must stay step-for-step identical to ``_sweep_py.run_sweeps``: both consume
the same uniform array and the same packed cumulative rows, so traces are
bit-identical across backends.
"""

from libc.stdint cimport int64_t


def run_sweeps(int64_t[::1] state, int64_t[:, ::1] out,
               const double[::1] uniforms,
               const int64_t[::1] nbr_flat, const int64_t[::1] nbr_off,
               const int64_t[::1] nbr_sizes,
               const double[::1] cdf_flat, const int64_t[::1] cdf_off,
               const int64_t[::1] n_actions):
    """Advance `state` through out.shape[0] full player sweeps.

    Player i's row inside ``cdf_flat`` is picked by the mixed-radix index of
    its neighbors' current actions; the draw is the first cumulative entry
    strictly above the step's uniform (clamped to the last action).
    """
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t rounds = out.shape[0]
    cdef Py_ssize_t t = 0
    cdef Py_ssize_t r, i, j, a
    cdef int64_t idx, base, na
    cdef double u
    for r in range(rounds):
        for i in range(n):
            idx = 0
            for j in range(nbr_off[i], nbr_off[i + 1]):
                idx = idx * nbr_sizes[j] + state[nbr_flat[j]]
            na = n_actions[i]
            base = cdf_off[i] + idx * na
            u = uniforms[t]
            a = 0
            while a < na - 1 and u >= cdf_flat[base + a]:
                a += 1
            state[i] = a
            t += 1
        for i in range(n):
            out[r, i] = state[i]
