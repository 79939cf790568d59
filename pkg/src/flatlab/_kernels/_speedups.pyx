# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics match flatlab._kernels.pykernels exactly."""

from libc.math cimport log


def iet_orbit_visits(double[::1] breaks, double[::1] deltas, double x0,
                     Py_ssize_t n_steps, signed char[::1] visits):
    cdef Py_ssize_t n = breaks.shape[0]
    cdef double x = x0
    cdef Py_ssize_t k, j
    for k in range(n_steps):
        j = n - 1
        while j > 0 and x < breaks[j]:
            j -= 1
        visits[k] = <signed char> j
        x += deltas[j]
    return x


def zorich_chunk(double[::1] lam, long long[::1] top, long long[::1] bot,
                 double[:, ::1] frame, Py_ssize_t max_accel, int inverse=0):
    cdef Py_ssize_t n = lam.shape[0]
    cdef Py_ssize_t accel = 0
    cdef long long rauzy = 0
    cdef double teich = 0.0
    cdef long long wt, wb, winner, loser
    cdef int cur_type, step_type
    cdef Py_ssize_t p, i, j
    cdef double total
    while accel < max_accel:
        wt = top[n - 1]
        wb = bot[n - 1]
        if lam[wt] == lam[wb]:
            return accel, rauzy, teich, True
        cur_type = 0 if lam[wt] > lam[wb] else 1
        while True:
            wt = top[n - 1]
            wb = bot[n - 1]
            if lam[wt] == lam[wb]:
                return accel, rauzy, teich, True
            step_type = 0 if lam[wt] > lam[wb] else 1
            if step_type != cur_type:
                break
            if cur_type == 0:
                winner = wt
                loser = wb
            else:
                winner = wb
                loser = wt
            lam[winner] -= lam[loser]
            if inverse:
                for j in range(n):
                    frame[winner, j] -= frame[loser, j]
            else:
                for j in range(n):
                    frame[loser, j] += frame[winner, j]
            if cur_type == 0:
                p = 0
                while bot[p] != winner:
                    p += 1
                i = n - 1
                while i > p + 1:
                    bot[i] = bot[i - 1]
                    i -= 1
                bot[p + 1] = loser
            else:
                p = 0
                while top[p] != winner:
                    p += 1
                i = n - 1
                while i > p + 1:
                    top[i] = top[i - 1]
                    i -= 1
                top[p + 1] = loser
            rauzy += 1
        total = 0.0
        for j in range(n):
            total += lam[j]
        teich += -log(total)
        for j in range(n):
            lam[j] /= total
        accel += 1
    return accel, rauzy, teich, False
