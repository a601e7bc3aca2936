# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 stepping kernels.

Semantics are defined by the reference implementation in ``_stepper_py``;
this module only exists to make the per-step work (phase-factorized sparse
products plus the dissipator scatter) cheap enough for master-equation
parameter sweeps.
"""

import numpy as np

from libc.stdint cimport int32_t, int64_t

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex conj(double complex)

ctypedef double complex cplx


cdef class SchrodingerStepper:
    cdef Py_ssize_t d, nt
    cdef cplx[::1] data, amps
    cdef int32_t[::1] indices
    cdef int64_t[::1] indptr
    cdef double[::1] freqs
    cdef cplx[::1] w, k, acc, stage

    def __init__(self, d, lm_data, lm_indices, lm_indptr, lm_amps, lm_freqs):
        self.d = d
        self.data = np.ascontiguousarray(lm_data, dtype=np.complex128)
        self.indices = np.ascontiguousarray(lm_indices, dtype=np.int32)
        self.indptr = np.ascontiguousarray(lm_indptr, dtype=np.int64)
        self.amps = np.ascontiguousarray(lm_amps, dtype=np.complex128)
        self.freqs = np.ascontiguousarray(lm_freqs, dtype=np.float64)
        self.nt = len(lm_amps)
        self.w = np.zeros(d, dtype=np.complex128)
        self.k = np.zeros(d, dtype=np.complex128)
        self.acc = np.zeros(d, dtype=np.complex128)
        self.stage = np.zeros(d, dtype=np.complex128)

    cdef void _rhs(self, double t, cplx[::1] psi, cplx[::1] out) nogil:
        cdef Py_ssize_t j, i, p, base
        cdef int64_t p0, p1
        cdef cplx c, v
        for i in range(self.d):
            out[i] = 0
        for j in range(self.nt):
            c = self.amps[j] * cexp(1j * self.freqs[j] * t)
            base = j * (self.d + 1)
            for i in range(self.d):
                p0 = self.indptr[base + i]
                p1 = self.indptr[base + i + 1]
                v = 0
                for p in range(p0, p1):
                    v = v + c * self.data[p] * psi[self.indices[p]]
                out[i] = out[i] + v

    def run(self, cplx[::1] psi, double t0, double dt, long steps):
        cdef Py_ssize_t s, i
        cdef double t
        with nogil:
            for s in range(steps):
                t = t0 + s * dt
                self._rhs(t, psi, self.k)
                for i in range(self.d):
                    self.acc[i] = self.k[i]
                    self.stage[i] = psi[i] + 0.5 * dt * self.k[i]
                self._rhs(t + 0.5 * dt, self.stage, self.k)
                for i in range(self.d):
                    self.acc[i] = self.acc[i] + 2 * self.k[i]
                    self.stage[i] = psi[i] + 0.5 * dt * self.k[i]
                self._rhs(t + 0.5 * dt, self.stage, self.k)
                for i in range(self.d):
                    self.acc[i] = self.acc[i] + 2 * self.k[i]
                    self.stage[i] = psi[i] + dt * self.k[i]
                self._rhs(t + dt, self.stage, self.k)
                for i in range(self.d):
                    psi[i] = psi[i] + (dt / 6.0) * (self.acc[i] + self.k[i])


cdef class LindbladStepper:
    cdef Py_ssize_t d, nt, nc
    cdef cplx[::1] data, amps, vals
    cdef int32_t[::1] indices, rows, cols
    cdef int64_t[::1] indptr, offs
    cdef double[::1] freqs
    cdef cplx[:, ::1] w, k, acc, stage

    def __init__(self, d, lm_data, lm_indices, lm_indptr, lm_amps, lm_freqs,
                  sc_vals, sc_rows, sc_cols, sc_offsets):
        self.d = d
        self.data = np.ascontiguousarray(lm_data, dtype=np.complex128)
        self.indices = np.ascontiguousarray(lm_indices, dtype=np.int32)
        self.indptr = np.ascontiguousarray(lm_indptr, dtype=np.int64)
        self.amps = np.ascontiguousarray(lm_amps, dtype=np.complex128)
        self.freqs = np.ascontiguousarray(lm_freqs, dtype=np.float64)
        self.nt = len(lm_amps)
        self.vals = np.ascontiguousarray(sc_vals, dtype=np.complex128)
        self.rows = np.ascontiguousarray(sc_rows, dtype=np.int32)
        self.cols = np.ascontiguousarray(sc_cols, dtype=np.int32)
        self.offs = np.ascontiguousarray(sc_offsets, dtype=np.int64)
        self.nc = len(sc_offsets) - 1
        self.w = np.zeros((d, d), dtype=np.complex128)
        self.k = np.zeros((d, d), dtype=np.complex128)
        self.acc = np.zeros((d, d), dtype=np.complex128)
        self.stage = np.zeros((d, d), dtype=np.complex128)

    cdef void _rhs(self, double t, cplx[:, ::1] rho, cplx[:, ::1] out) nogil:
        # out = W + W† + sum_k L_k rho L_k†  with  W = sum_j amp_j e^{i w_j t} M_j rho;
        # valid for Hermitian rho, which every RK4 stage input here is.
        cdef Py_ssize_t j, i, p, q, base, col, rp, cp
        cdef int64_t p0, p1, q0, q1
        cdef cplx c, v, vp
        for i in range(self.d):
            for q in range(self.d):
                self.w[i, q] = 0
        for j in range(self.nt):
            c = self.amps[j] * cexp(1j * self.freqs[j] * t)
            base = j * (self.d + 1)
            for i in range(self.d):
                p0 = self.indptr[base + i]
                p1 = self.indptr[base + i + 1]
                for p in range(p0, p1):
                    v = c * self.data[p]
                    col = self.indices[p]
                    for q in range(self.d):
                        self.w[i, q] = self.w[i, q] + v * rho[col, q]
        for i in range(self.d):
            for q in range(self.d):
                out[i, q] = self.w[i, q] + conj(self.w[q, i])
        for j in range(self.nc):
            q0 = self.offs[j]
            q1 = self.offs[j + 1]
            for p in range(q0, q1):
                rp = self.rows[p]
                cp = self.cols[p]
                vp = self.vals[p]
                for q in range(q0, q1):
                    out[rp, self.rows[q]] = out[rp, self.rows[q]] + \
                        vp * conj(self.vals[q]) * rho[cp, self.cols[q]]

    def run(self, cplx[:, ::1] rho, double t0, double dt, long steps):
        cdef Py_ssize_t s, i, q
        cdef double t
        cdef cplx v
        with nogil:
            for s in range(steps):
                t = t0 + s * dt
                self._rhs(t, rho, self.k)
                for i in range(self.d):
                    for q in range(self.d):
                        self.acc[i, q] = self.k[i, q]
                        self.stage[i, q] = rho[i, q] + 0.5 * dt * self.k[i, q]
                self._rhs(t + 0.5 * dt, self.stage, self.k)
                for i in range(self.d):
                    for q in range(self.d):
                        self.acc[i, q] = self.acc[i, q] + 2 * self.k[i, q]
                        self.stage[i, q] = rho[i, q] + 0.5 * dt * self.k[i, q]
                self._rhs(t + 0.5 * dt, self.stage, self.k)
                for i in range(self.d):
                    for q in range(self.d):
                        self.acc[i, q] = self.acc[i, q] + 2 * self.k[i, q]
                        self.stage[i, q] = rho[i, q] + dt * self.k[i, q]
                self._rhs(t + dt, self.stage, self.k)
                for i in range(self.d):
                    for q in range(self.d):
                        rho[i, q] = rho[i, q] + (dt / 6.0) * (self.acc[i, q] + self.k[i, q])
                for i in range(self.d):
                    for q in range(i, self.d):
                        v = 0.5 * (rho[i, q] + conj(rho[q, i]))
                        rho[i, q] = v
                        rho[q, i] = conj(v)
