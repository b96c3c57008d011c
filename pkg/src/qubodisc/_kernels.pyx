# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Metropolis kernels.

``anneal_run`` draws straight from a numpy bit generator; the Python twin in
``_fallback`` reads the same raw 64-bit stream through ``random_raw``.
``metropolis_block`` consumes pre-drawn arrays. Keep the arithmetic in the
two files in the same order.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport exp, pow
from libc.stdint cimport uint64_t
from numpy.random cimport bitgen_t

import numpy as np

# exp(-x) == 0.0 in double precision for x beyond this, so u < exp(-x) is false
cdef double EXP_CUTOFF = 746.0
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline double _uniform(bitgen_t *rng) noexcept nogil:
    return <double>(rng.next_uint64(rng.state) >> 11) * INV_2_53


def anneal_run(const double[:, ::1] quad,
               double offset,
               unsigned char[::1] z,
               unsigned char[::1] best_z,
               object bit_generator,
               Py_ssize_t iterations,
               double t0,
               double gamma,
               Py_ssize_t resync,
               double[::1] energy_out,
               double[::1] best_out):
    """Run ``iterations`` SA iterations of ``2 n`` single-bit updates on ``z``.

    Each update draws one uniform for the bit index and a second one only
    when the move is uphill and not certainly rejected. Fields and energy are
    recomputed from ``z`` every ``resync`` iterations. ``energy_out`` and
    ``best_out`` are filled per iteration when they have length
    ``iterations``. Returns ``(energy, best_energy, accepted)``.
    """
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t per_iter = 2 * n
    cdef Py_ssize_t t, s, i, j
    cdef double T, delta, sign, energy, best_energy
    cdef long accepted = 0
    cdef bint record = energy_out.shape[0] == iterations
    cdef double[::1] field = np.zeros(n)
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(
        bit_generator.capsule, "BitGenerator")

    with bit_generator.lock, nogil:
        energy = _resync(quad, offset, z, field)
        best_energy = energy
        best_z[:] = z
        for t in range(iterations):
            T = t0 * pow(gamma, <double>t)
            for s in range(per_iter):
                i = <Py_ssize_t>(_uniform(rng) * n)
                sign = 1.0 - 2.0 * z[i]
                delta = quad[i, i] + 2.0 * sign * field[i]
                if delta <= 0.0 or (T > 0.0 and delta < EXP_CUTOFF * T
                                    and _uniform(rng) < exp(-delta / T)):
                    z[i] = 1 - z[i]
                    for j in range(n):
                        field[j] += sign * quad[i, j]
                    energy += delta
                    accepted += 1
                    if energy < best_energy:
                        best_energy = energy
                        best_z[:] = z
            if record:
                energy_out[t] = energy
                best_out[t] = best_energy
            if (t + 1) % resync == 0:
                energy = _resync(quad, offset, z, field)
    return energy, best_energy, accepted


cdef double _resync(const double[:, ::1] quad, double offset,
                    const unsigned char[::1] z, double[::1] field) noexcept nogil:
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc, e = offset
    for i in range(n):
        acc = 0.0
        for j in range(n):
            if z[j]:
                acc += quad[i, j]
        field[i] = acc
        if z[i]:
            e += acc
    return e


def metropolis_block(const double[:, ::1] gram,
                     const double[::1] moment,
                     double[::1] w,
                     double[::1] gw,
                     double cost,
                     double temperature,
                     const Py_ssize_t[::1] picks,
                     const double[::1] steps,
                     const double[::1] uniforms,
                     Py_ssize_t interval,
                     double[:, ::1] out):
    """Metropolis chain on ``w^T G w - 2 w^T m``; record ``w`` every ``interval`` steps.

    ``gw`` holds ``gram @ w`` and is updated in place with ``w``.
    Returns ``(cost, accepted)``.
    """
    cdef Py_ssize_t D = w.shape[0]
    cdef Py_ssize_t r, s, k, d, j
    cdef double step, delta
    cdef long accepted = 0

    for r in range(out.shape[0]):
        for s in range(interval):
            k = r * interval + s
            d = picks[k]
            step = steps[k]
            delta = step * step * gram[d, d] + 2.0 * step * (gw[d] - moment[d])
            if delta <= 0.0 or uniforms[k] < exp(-delta / temperature):
                w[d] += step
                for j in range(D):
                    gw[j] += step * gram[j, d]
                cost += delta
                accepted += 1
        out[r, :] = w
    return cost, accepted
