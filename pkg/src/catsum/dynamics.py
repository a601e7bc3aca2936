"""Time-evolution engines.

Three levels of fidelity, in both senses of the word:

* :func:`evolve_effective_analytic` — closed-form phase map of the diagonal
  dispersive Hamiltonian; exact to machine precision, serves as the oracle
  for the integrators and as the "ideal gate" reference.
* :func:`evolve_schrodinger` — fixed-step RK4 for a pure state under a
  phase-factorized time-dependent Hamiltonian.
* :func:`evolve_lindblad` — fixed-step RK4 of the master equation
  drho/dt = -i[H(t), rho] + sum_k (L_k rho L_k† - {L_k†L_k, rho}/2).

The RK4 right-hand sides run in a compiled stepping kernel when available,
with a NumPy implementation as fallback (see :mod:`catsum._backend`).  Fixed
stepping keeps every run bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import _backend as backend
from .core import LEVEL_B, OperatorMatrix, QuantumState, SystemDims

__all__ = [
    "TimeDependentOperator",
    "EvolutionConfig",
    "IntegrationError",
    "evolve_schrodinger",
    "evolve_lindblad",
    "evolve_effective_analytic",
]

NORM_DRIFT_LIMIT = 1e-6
NORM_DRIFT_FAIL = 1e-4
TRACE_DRIFT_FAIL = 1e-4
FINAL_EIG_FAIL = 1e-6


class IntegrationError(RuntimeError):
    """Fixed-step integration left its validity envelope (norm/trace/positivity)."""


@dataclass
class TimeDependentOperator:
    """Phase-factorized operator H(t) = sum_j amp_j e^{i freq_j t} M_j.

    Hermiticity for all t is guaranteed by construction: terms are added
    either as conjugate pairs or as self-adjoint zero-frequency matrices.
    """

    dims: SystemDims
    terms: list = field(default_factory=list)  # (csr_matrix, freq, amp)

    def add_pair(self, matrix: sp.csr_matrix, freq: float, amp: complex):
        """Add amp e^{i freq t} M together with its Hermitian conjugate."""
        m = sp.csr_matrix(matrix, dtype=np.complex128)
        self.terms.append((m, float(freq), complex(amp)))
        self.terms.append((m.getH().tocsr(), -float(freq), complex(amp).conjugate()))

    def add_static(self, op: OperatorMatrix):
        """Add a time-independent Hermitian term."""
        m = sp.csr_matrix(op.data, dtype=np.complex128)
        err = abs(m - m.getH()).max() if m.nnz else 0.0
        if err > 1e-12:
            raise ValueError(f"static term must be Hermitian, deviates by {err:.3e}")
        self.terms.append((m, 0.0, 1.0 + 0j))

    @classmethod
    def from_static(cls, op: OperatorMatrix) -> "TimeDependentOperator":
        h = cls(op.dims)
        h.add_static(op)
        return h

    @property
    def max_frequency(self) -> float:
        """Fastest scalar oscillation, which the step-size rule must resolve."""
        return max((abs(f) for _, f, _ in self.terms), default=0.0)

    def assemble(self, t: float) -> np.ndarray:
        """Dense H(t); for tests and small systems only."""
        d = self.dims.total_dim
        out = np.zeros((d, d), dtype=np.complex128)
        for m, freq, amp in self.terms:
            out += (amp * np.exp(1j * freq * t)) * m.toarray()
        return out


@dataclass(frozen=True)
class EvolutionConfig:
    """Fixed-step integration policy.

    ``dt`` must resolve the fastest phase of the operator being integrated:
    dt <= 2*pi / (max_frequency * points_per_period).
    """

    dt: float
    t_final: float
    method: str = "rk4"
    points_per_period: int = 20

    def __post_init__(self):
        if self.method != "rk4":
            raise ValueError("only the rk4 method is implemented")
        if self.points_per_period < 20:
            raise ValueError("points_per_period must be >= 20")
        if self.dt <= 0 or self.t_final < 0:
            raise ValueError("dt must be positive and t_final non-negative")

    @classmethod
    def for_hamiltonian(
        cls,
        h: TimeDependentOperator,
        t_final: float,
        points_per_period: int = 20,
        dt_scale: float = 1.0,
        min_steps: int = 200,
    ) -> "EvolutionConfig":
        """Pick dt from the fastest phase of ``h`` (or from ``min_steps`` if static)."""
        if h.max_frequency > 0:
            dt = 2.0 * math.pi / (h.max_frequency * points_per_period)
            dt = min(dt, t_final / min_steps) if t_final > 0 else dt
        else:
            dt = t_final / min_steps if t_final > 0 else 1.0
        return cls(dt=dt * dt_scale, t_final=t_final, points_per_period=points_per_period)

    def steps_and_dt(self) -> tuple[int, float]:
        """Integer step count hitting t_final exactly."""
        if self.t_final == 0:
            return 0, self.dt
        steps = max(1, math.ceil(self.t_final / self.dt - 1e-9))
        return steps, self.t_final / steps

    def check_resolves(self, h: TimeDependentOperator):
        limit = 2.0 * math.pi / (h.max_frequency * self.points_per_period) if h.max_frequency > 0 else math.inf
        _, dt = self.steps_and_dt()
        if dt > limit * (1.0 + 1e-9):
            raise ValueError(
                f"dt = {dt:.3e} us does not resolve the fastest phase "
                f"{h.max_frequency:.3e} rad/us at {self.points_per_period} points per period"
            )


# ---------------------------------------------------------------------------
# packing for the stepping kernels


def _pack_csr_terms(terms, d):
    """Concatenate (csr, freq, amp) terms into flat arrays for a stepping kernel."""
    datas, indices, indptrs, amps, freqs = [], [], [], [], []
    offset = 0
    for m, freq, amp in terms:
        m = m.tocsr()
        m.sort_indices()
        datas.append(m.data.astype(np.complex128))
        indices.append(m.indices.astype(np.int32))
        indptrs.append(m.indptr.astype(np.int64) + offset)
        offset += m.nnz
        amps.append(amp)
        freqs.append(freq)
    if not terms:
        return (
            np.zeros(0, np.complex128),
            np.zeros(0, np.int32),
            np.zeros(0, np.int64),
            np.zeros(0, np.complex128),
            np.zeros(0, np.float64),
        )
    return (
        np.concatenate(datas),
        np.concatenate(indices),
        np.concatenate(indptrs),
        np.array(amps, np.complex128),
        np.array(freqs, np.float64),
    )


def _pack_collapse(collapse):
    """Collapse operators as concatenated COO triplets for the scatter pass."""
    vals, rows, cols, offsets = [], [], [], [0]
    for op in collapse:
        m = op.data.tocoo()
        vals.append(m.data.astype(np.complex128))
        rows.append(m.row.astype(np.int32))
        cols.append(m.col.astype(np.int32))
        offsets.append(offsets[-1] + m.nnz)
    if not collapse:
        return (
            np.zeros(0, np.complex128),
            np.zeros(0, np.int32),
            np.zeros(0, np.int32),
            np.array([0], np.int64),
        )
    return (
        np.concatenate(vals),
        np.concatenate(rows),
        np.concatenate(cols),
        np.array(offsets, np.int64),
    )


def _generator_terms(h: TimeDependentOperator, collapse=None):
    """Terms of the left-multiplication generator (-i H(t) - G/2) with G = sum L†L."""
    terms = [(m, freq, -1j * amp) for m, freq, amp in h.terms]
    if collapse:
        d = h.dims.total_dim
        g = sp.csr_matrix((d, d), dtype=np.complex128)
        for op in collapse:
            m = op.data
            g = g + (m.getH() @ m).tocsr()
        if g.nnz:
            terms.append((g, 0.0, -0.5 + 0j))
    return terms


def _chunk_sizes(steps: int, chunks: int = 64):
    size = max(1, steps // chunks)
    done = 0
    while done < steps:
        n = min(size, steps - done)
        yield done, n
        done += n


# ---------------------------------------------------------------------------
# engines


def evolve_schrodinger(
    h: TimeDependentOperator,
    psi0: QuantumState,
    cfg: EvolutionConfig,
    monitor=None,
) -> QuantumState:
    """RK4 integration of dpsi/dt = -i H(t) psi.

    The state is never renormalized while stepping; the final norm drift is a
    diagnostic (``meta['norm_drift']``, must stay below 1e-6) and the returned
    vector is normalized only after it has been recorded.  ``monitor(t, psi)``
    is called on raw chunk-boundary vectors.
    """
    if psi0.kind != "pure" or psi0.space != "composite":
        raise ValueError("evolve_schrodinger expects a composite pure state")
    cfg.check_resolves(h)
    steps, dt = cfg.steps_and_dt()
    d = psi0.dims.total_dim
    stepper = backend.make_schrodinger_stepper(d, _pack_csr_terms(_generator_terms(h), d))
    psi = psi0.data.copy()
    for done, n in _chunk_sizes(steps):
        stepper.run(psi, done * dt, dt, n)
        if monitor is not None:
            monitor((done + n) * dt, psi)
    norm = float(np.linalg.norm(psi))
    drift = abs(norm - 1.0)
    if drift > NORM_DRIFT_FAIL:
        raise IntegrationError(f"norm drift {drift:.3e} exceeds {NORM_DRIFT_FAIL}")
    meta = {"norm_drift": drift, "dt": dt, "steps": steps}
    return QuantumState("pure", psi / norm, psi0.dims, meta=meta)


def evolve_lindblad(
    h: TimeDependentOperator,
    collapse: list,
    rho0: QuantumState,
    cfg: EvolutionConfig,
    monitor=None,
) -> QuantumState:
    """RK4 integration of the master equation with the given collapse operators.

    The density matrix is re-symmetrized after every step; positivity is
    checked at the final time only.  Trace drift is recorded before the final
    trace normalization.
    """
    if rho0.kind != "mixed" or rho0.space != "composite":
        raise ValueError("evolve_lindblad expects a composite density matrix")
    cfg.check_resolves(h)
    steps, dt = cfg.steps_and_dt()
    d = rho0.dims.total_dim
    lm = _pack_csr_terms(_generator_terms(h, collapse), d)
    sc = _pack_collapse(collapse)
    stepper = backend.make_lindblad_stepper(d, lm, sc)
    rho = rho0.data.copy()
    for done, n in _chunk_sizes(steps):
        stepper.run(rho, done * dt, dt, n)
        if monitor is not None:
            monitor((done + n) * dt, rho)
    trace = float(np.trace(rho).real)
    drift = abs(trace - 1.0)
    if drift > TRACE_DRIFT_FAIL:
        raise IntegrationError(f"trace drift {drift:.3e} exceeds {TRACE_DRIFT_FAIL}")
    min_eig = float(np.linalg.eigvalsh(rho)[0])
    if min_eig < -FINAL_EIG_FAIL:
        raise IntegrationError(f"final state has eigenvalue {min_eig:.3e}")
    meta = {
        "trace_drift": drift,
        "min_eigenvalue": min_eig,
        "dt": dt,
        "steps": steps,
        "eig_tol": FINAL_EIG_FAIL,
    }
    return QuantumState("mixed", rho / trace, rho0.dims, meta=meta)


def evolve_effective_analytic(shifts, psi0: QuantumState, t: float) -> QuantumState:
    """Exact propagation under the reduced dispersive Hamiltonian.

    The operator is diagonal in the level (x) Fock basis, so evolution is the
    phase map |j, n> -> e^{i lambda_j n t} |j, n| with lambda_0 = 0.  Requires
    (and checks) that the auxiliary level carries no amplitude.
    """
    if psi0.kind != "pure" or psi0.space != "composite":
        raise ValueError("the analytic engine evolves composite pure states")
    n_fock = psi0.dims.fock_cutoff
    blocks = psi0.data.reshape(4, n_fock)
    b_amp = float(np.linalg.norm(blocks[LEVEL_B]))
    if b_amp > 1e-10:
        raise ValueError(f"auxiliary-level amplitude {b_amp:.3e} outside the reduced subspace")
    lam = np.array([0.0, shifts.lambda_1, shifts.lambda_2, 0.0])
    phases = np.exp(1j * np.outer(lam, np.arange(n_fock)) * t)
    return QuantumState("pure", (blocks * phases).reshape(-1), psi0.dims)
