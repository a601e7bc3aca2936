"""NumPy implementation of the RK4 stepping kernels.

Mirrors the compiled extension in :mod:`catsum._stepper`: same packed-array
constructor signatures, same stepping semantics (identical chunking and time
grid), so either backend can serve :mod:`catsum.dynamics`.

The master-equation right-hand side is evaluated as W + W† with
W = (-iH(t) - G/2) rho, which is valid because every RK4 stage input is kept
Hermitian (the RHS output is Hermitian by construction and rho is
re-symmetrized after each step).
"""

import numpy as np
import scipy.sparse as sp


def _rebuild_csr(d, data, indices, indptr, count):
    mats = []
    for j in range(count):
        ptr = np.asarray(indptr[j * (d + 1) : (j + 1) * (d + 1)], dtype=np.int64)
        lo, hi = int(ptr[0]), int(ptr[-1])
        m = sp.csr_matrix(
            (data[lo:hi], indices[lo:hi], ptr - lo), shape=(d, d), dtype=np.complex128
        )
        mats.append(m)
    return mats


class SchrodingerStepper:
    """RK4 for dpsi/dt = sum_j amp_j e^{i freq_j t} M_j psi."""

    def __init__(self, d, lm_data, lm_indices, lm_indptr, lm_amps, lm_freqs):
        self.d = d
        self.mats = _rebuild_csr(d, lm_data, lm_indices, lm_indptr, len(lm_amps))
        self.amps = np.asarray(lm_amps, dtype=np.complex128)
        self.freqs = np.asarray(lm_freqs, dtype=np.float64)

    def _rhs(self, t, psi):
        out = np.zeros_like(psi)
        for m, amp, freq in zip(self.mats, self.amps, self.freqs):
            out += (amp * np.exp(1j * freq * t)) * m.dot(psi)
        return out

    def run(self, psi, t0, dt, steps):
        for s in range(steps):
            t = t0 + s * dt
            k1 = self._rhs(t, psi)
            k2 = self._rhs(t + 0.5 * dt, psi + (0.5 * dt) * k1)
            k3 = self._rhs(t + 0.5 * dt, psi + (0.5 * dt) * k2)
            k4 = self._rhs(t + dt, psi + dt * k3)
            psi += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


class LindbladStepper:
    """RK4 for drho/dt = W + W† + sum_k L_k rho L_k†, W = (-iH(t) - G/2) rho.

    The -iH terms and the -G/2 term arrive pre-mixed in the packed term list;
    collapse operators arrive pre-scaled by sqrt(rate).
    """

    def __init__(
        self,
        d,
        lm_data,
        lm_indices,
        lm_indptr,
        lm_amps,
        lm_freqs,
        sc_vals,
        sc_rows,
        sc_cols,
        sc_offsets,
    ):
        self.d = d
        self.mats = _rebuild_csr(d, lm_data, lm_indices, lm_indptr, len(lm_amps))
        self.amps = np.asarray(lm_amps, dtype=np.complex128)
        self.freqs = np.asarray(lm_freqs, dtype=np.float64)
        self.collapse = []
        offsets = np.asarray(sc_offsets, dtype=np.int64)
        for k in range(len(offsets) - 1):
            s = slice(int(offsets[k]), int(offsets[k + 1]))
            m = sp.csr_matrix(
                (sc_vals[s], (sc_rows[s], sc_cols[s])), shape=(d, d), dtype=np.complex128
            )
            self.collapse.append(m)

    def _rhs(self, t, rho):
        w = np.zeros_like(rho)
        for m, amp, freq in zip(self.mats, self.amps, self.freqs):
            w += (amp * np.exp(1j * freq * t)) * m.dot(rho)
        out = w + w.conj().T
        for m in self.collapse:
            e = m.dot(rho)  # L rho L† = (L (L rho)†)†
            out += m.dot(e.conj().T).conj().T
        return out

    def run(self, rho, t0, dt, steps):
        for s in range(steps):
            t = t0 + s * dt
            k1 = self._rhs(t, rho)
            k2 = self._rhs(t + 0.5 * dt, rho + (0.5 * dt) * k1)
            k3 = self._rhs(t + 0.5 * dt, rho + (0.5 * dt) * k2)
            k4 = self._rhs(t + dt, rho + dt * k3)
            rho += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            rho[:] = 0.5 * (rho + rho.conj().T)
