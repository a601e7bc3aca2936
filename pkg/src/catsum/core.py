"""Truncated Fock-space and ququart operator algebra.

Everything lives on the composite Hilbert space of a four-level artificial
atom (levels 0, 1, 2 and an auxiliary level b) tensored with a cavity mode
truncated to ``fock_cutoff`` Fock states.  The composite basis is ordered
level-major: state index = level * fock_cutoff + n, so each ququart level
owns one contiguous cavity block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

__all__ = [
    "LEVEL_B",
    "LEVEL_NAMES",
    "SystemDims",
    "QuantumState",
    "OperatorMatrix",
    "CatCode",
    "TruncationError",
    "coherent_state",
    "coherent_truncation_leakage",
    "cat_state",
    "cat_codeword",
    "annihilation",
    "number_op",
    "ququart_transition",
    "ququart_projector",
    "ququart_level_state",
    "tensor_level_cavity",
    "overlap",
    "expectation",
    "fidelity_pure_mixed",
    "rotate_cavity_phase",
    "level_populations",
]

LEVEL_B = 3
LEVEL_NAMES = ("0", "1", "2", "b")

PURE_NORM_TOL = 1e-8
TRACE_TOL = 1e-8
HERMITICITY_TOL = 1e-10
EIG_TOL = 1e-8


class TruncationError(ValueError):
    """Fock cutoff too small for the requested coherent amplitude."""


@dataclass(frozen=True)
class SystemDims:
    """Dimensions of the ququart ⊗ cavity composite space."""

    fock_cutoff: int
    ququart_dim: int = 4

    def __post_init__(self):
        if self.ququart_dim != 4:
            raise ValueError("ququart_dim is fixed at 4")
        if self.fock_cutoff < 2:
            raise ValueError("fock_cutoff must be >= 2")

    @property
    def total_dim(self) -> int:
        return self.ququart_dim * self.fock_cutoff

    def space_dim(self, space: str) -> int:
        return {
            "composite": self.total_dim,
            "cavity": self.fock_cutoff,
            "ququart": self.ququart_dim,
        }[space]


@dataclass
class QuantumState:
    """Pure state vector or density matrix on (a factor of) the composite space.

    ``space`` tags which factor the data lives on; cat codewords and coherent
    states are cavity-only, everything the evolution engines touch is
    composite.  Instances are treated as immutable after construction.
    """

    kind: str  # "pure" | "mixed"
    data: np.ndarray
    dims: SystemDims
    space: str = "composite"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("pure", "mixed"):
            raise ValueError(f"unknown state kind {self.kind!r}")
        if self.space not in ("composite", "cavity", "ququart"):
            raise ValueError(f"unknown space {self.space!r}")
        d = self.dims.space_dim(self.space)
        self.data = np.ascontiguousarray(self.data, dtype=np.complex128)
        if self.kind == "pure":
            if self.data.shape != (d,):
                raise ValueError(f"pure state must have shape ({d},)")
            self._check_norm()
        else:
            if self.data.shape != (d, d):
                raise ValueError(f"density matrix must have shape ({d}, {d})")
            self._check_density(self.meta.get("eig_tol", EIG_TOL))

    def _check_norm(self):
        err = abs(float(np.vdot(self.data, self.data).real) - 1.0)
        if err > PURE_NORM_TOL:
            raise ValueError(f"pure state norm off by {err:.3e}")

    def _check_density(self, eig_tol):
        rho = self.data
        tr_err = abs(float(np.trace(rho).real) - 1.0)
        if tr_err > TRACE_TOL:
            raise ValueError(f"density matrix trace off by {tr_err:.3e}")
        herm_err = float(np.max(np.abs(rho - rho.conj().T)))
        if herm_err > HERMITICITY_TOL:
            raise ValueError(f"density matrix not Hermitian: {herm_err:.3e}")
        min_eig = float(np.linalg.eigvalsh(rho)[0])
        if min_eig < -eig_tol:
            raise ValueError(f"density matrix has eigenvalue {min_eig:.3e}")

    @property
    def dim(self) -> int:
        return self.dims.space_dim(self.space)

    def to_density_matrix(self) -> "QuantumState":
        if self.kind == "mixed":
            return self
        rho = np.outer(self.data, self.data.conj())
        return QuantumState("mixed", rho, self.dims, self.space)


@dataclass
class OperatorMatrix:
    """Sparse operator on the composite space, with an optional Hermiticity pledge."""

    data: sp.csr_matrix
    dims: SystemDims
    hermitian: bool = False

    def __post_init__(self):
        self.data = sp.csr_matrix(self.data, dtype=np.complex128)
        d = self.dims.total_dim
        if self.data.shape != (d, d):
            raise ValueError(f"operator must be {d} x {d}")
        if self.hermitian:
            err = _max_abs(self.data - self.data.getH())
            if err > 1e-12:
                raise ValueError(f"operator flagged Hermitian but deviates by {err:.3e}")

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.data.getH().tocsr(), self.dims, self.hermitian)

    def toarray(self) -> np.ndarray:
        return self.data.toarray()


def _max_abs(m: sp.spmatrix) -> float:
    m = sp.csr_matrix(m)
    return float(np.max(np.abs(m.data))) if m.nnz else 0.0


# ---------------------------------------------------------------------------
# cavity states


def coherent_truncation_leakage(alpha: complex, fock_cutoff: int) -> float:
    """Probability weight of |alpha> beyond the highest kept Fock state."""
    x = abs(alpha) ** 2
    # Poisson tail: 1 - sum_{n<N} e^{-x} x^n / n!, summed in stable form
    log_terms = [-x + n * math.log(x) - math.lgamma(n + 1) for n in range(1, fock_cutoff)] if x > 0 else []
    kept = math.exp(-x) + sum(math.exp(t) for t in log_terms)
    return max(0.0, 1.0 - kept)


def coherent_state(alpha: complex, dims: SystemDims) -> QuantumState:
    """Truncated coherent state |alpha> on the cavity factor, renormalized.

    Raises TruncationError when the cutoff drops more than 1e-6 of the
    amplitude weight; the realized leakage is recorded in ``meta``.
    """
    n = np.arange(dims.fock_cutoff)
    if alpha == 0:
        amps = np.zeros(dims.fock_cutoff, dtype=np.complex128)
        amps[0] = 1.0
        leakage = 0.0
    else:
        # amplitudes e^{-|a|^2/2} a^n / sqrt(n!) via log-space magnitudes;
        # phases by cumulative product so real alpha gives exact +-1 signs
        log_mag = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * np.array(
            [math.lgamma(k + 1) for k in range(dims.fock_cutoff)]
        )
        unit = complex(alpha) / abs(alpha)
        phase = np.concatenate(([1.0 + 0j], np.cumprod(np.full(dims.fock_cutoff - 1, unit))))
        amps = np.exp(log_mag) * phase
        leakage = coherent_truncation_leakage(alpha, dims.fock_cutoff)
        if leakage > 1e-6:
            raise TruncationError(
                f"coherent amplitude |alpha|={abs(alpha):.3g} leaks {leakage:.3e} "
                f"past fock_cutoff={dims.fock_cutoff}"
            )
    amps = amps / np.linalg.norm(amps)
    return QuantumState("pure", amps, dims, space="cavity", meta={"leakage": leakage})


def cat_state(alpha: complex, dims: SystemDims) -> QuantumState:
    """Even cat (|alpha> + |-alpha>)/norm on the cavity factor."""
    if alpha == 0:
        raise ValueError("cat state undefined for alpha = 0")
    plus = coherent_state(alpha, dims)
    minus = coherent_state(-alpha, dims)
    amps = plus.data + minus.data
    amps = amps / np.linalg.norm(amps)
    meta = {"leakage": plus.meta["leakage"]}
    return QuantumState("pure", amps, dims, space="cavity", meta=meta)


def cat_codeword(k: int, alpha: complex, dims: SystemDims) -> QuantumState:
    """Codeword k of the cat-state qutrit: even cat at phase angle k*pi/3.

    Normalization is numerical rather than the analytic coefficient, so the
    Fock truncation can never break the norm invariant.
    """
    if k not in (0, 1, 2):
        raise ValueError("codeword index must be 0, 1 or 2")
    return cat_state(alpha * np.exp(1j * k * np.pi / 3), dims)


def cat_norm_coefficient(alpha: complex) -> float:
    """Analytic codeword normalization 1/sqrt(2(1+e^{-2|alpha|^2}))."""
    return 1.0 / math.sqrt(2.0 * (1.0 + math.exp(-2.0 * abs(alpha) ** 2)))


@dataclass
class CatCode:
    """The three quasi-orthogonal cavity codewords at amplitude alpha."""

    alpha: complex
    codewords: tuple
    norm_coeff: float

    @classmethod
    def build(cls, alpha: complex, dims: SystemDims) -> "CatCode":
        words = tuple(cat_codeword(k, alpha, dims) for k in range(3))
        return cls(alpha=alpha, codewords=words, norm_coeff=cat_norm_coefficient(alpha))

    def overlap_matrix(self) -> np.ndarray:
        """3x3 matrix of |<k|l>|^2 between codewords."""
        g = np.empty((3, 3))
        for k in range(3):
            for l in range(3):
                g[k, l] = abs(overlap(self.codewords[k], self.codewords[l])) ** 2
        return g


# ---------------------------------------------------------------------------
# operators on the composite space


def _cavity_annihilation(n_fock: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n_fock)), 1, format="csr", dtype=np.complex128)


def annihilation(dims: SystemDims) -> OperatorMatrix:
    """Photon annihilation on the composite space (identity on the ququart)."""
    a = sp.kron(sp.identity(4, format="csr"), _cavity_annihilation(dims.fock_cutoff), format="csr")
    return OperatorMatrix(a, dims)


def number_op(dims: SystemDims) -> OperatorMatrix:
    """Photon number operator, exact diagonal (not built as a†a)."""
    n = sp.diags(np.arange(dims.fock_cutoff, dtype=float), 0, format="csr")
    full = sp.kron(sp.identity(4, format="csr"), n, format="csr")
    return OperatorMatrix(full.astype(np.complex128), dims, hermitian=True)


def _level_index(level) -> int:
    if level == "b":
        return LEVEL_B
    if level in (0, 1, 2, 3):
        return int(level)
    raise ValueError(f"level must be one of 0, 1, 2, 3/'b', got {level!r}")


def ququart_transition(i, j, dims: SystemDims) -> OperatorMatrix:
    """|i><j| on the ququart, identity on the cavity."""
    ii, jj = _level_index(i), _level_index(j)
    e = sp.csr_matrix(
        (np.array([1.0 + 0j]), (np.array([ii]), np.array([jj]))), shape=(4, 4)
    )
    return OperatorMatrix(sp.kron(e, sp.identity(dims.fock_cutoff, format="csr"), format="csr"), dims)


def ququart_projector(j, dims: SystemDims) -> OperatorMatrix:
    op = ququart_transition(j, j, dims)
    op.hermitian = True
    return op


def ququart_level_state(level, dims: SystemDims) -> QuantumState:
    """Basis state |level> on the ququart factor."""
    v = np.zeros(4, dtype=np.complex128)
    v[_level_index(level)] = 1.0
    return QuantumState("pure", v, dims, space="ququart")


def tensor_level_cavity(level_state: QuantumState, cavity_state: QuantumState) -> QuantumState:
    """Composite pure state from ququart-factor and cavity-factor pure states."""
    if level_state.space != "ququart" or cavity_state.space != "cavity":
        raise ValueError("expected a ququart-factor and a cavity-factor state")
    if level_state.dims != cavity_state.dims:
        raise ValueError("dimension mismatch between factors")
    data = np.kron(level_state.data, cavity_state.data)
    data = data / np.linalg.norm(data)
    return QuantumState("pure", data, level_state.dims, space="composite")


# ---------------------------------------------------------------------------
# scalar maps


def overlap(a: QuantumState, b: QuantumState) -> complex:
    """Inner product <a|b> of two pure states on the same space."""
    if a.kind != "pure" or b.kind != "pure":
        raise ValueError("overlap is defined for pure states")
    if a.space != b.space or a.dims != b.dims:
        raise ValueError("states live on different spaces")
    return complex(np.vdot(a.data, b.data))


def expectation(op: OperatorMatrix, state: QuantumState) -> complex:
    """<A> in a pure or mixed composite state."""
    if state.space != "composite":
        raise ValueError("expectation values are taken on the composite space")
    if state.kind == "pure":
        return complex(np.vdot(state.data, op.data @ state.data))
    return complex((op.data @ state.data).trace())


def fidelity_pure_mixed(psi: QuantumState, rho: QuantumState) -> float:
    """Operational fidelity sqrt(<psi|rho|psi>) in [0, 1]."""
    if psi.kind != "pure" or rho.kind != "mixed":
        raise ValueError("expected fidelity_pure_mixed(pure, mixed)")
    if psi.dims != rho.dims or psi.space != rho.space:
        raise ValueError("dimension mismatch")
    val = float(np.vdot(psi.data, rho.data @ psi.data).real)
    if val < -EIG_TOL:
        raise ValueError(f"<psi|rho|psi> = {val:.3e} is negative beyond tolerance")
    return math.sqrt(min(max(val, 0.0), 1.0))


def rotate_cavity_phase(state: QuantumState, theta: float) -> QuantumState:
    """Apply e^{i theta n} on the cavity factor."""
    n_fock = state.dims.fock_cutoff
    phases = np.exp(1j * theta * np.arange(n_fock))
    if state.space == "cavity":
        full = phases
    elif state.space == "composite":
        full = np.tile(phases, state.dims.ququart_dim)
    else:
        raise ValueError("no cavity factor to rotate")
    if state.kind == "pure":
        return QuantumState("pure", full * state.data, state.dims, state.space)
    rho = full[:, None] * state.data * full.conj()[None, :]
    return QuantumState("mixed", rho, state.dims, state.space, meta=dict(state.meta))


def level_populations(state: QuantumState) -> np.ndarray:
    """Ququart level populations (length-4, sums to 1) of a composite state."""
    if state.space != "composite":
        raise ValueError("level populations require a composite state")
    n = state.dims.fock_cutoff
    if state.kind == "pure":
        blocks = state.data.reshape(4, n)
        return np.sum(np.abs(blocks) ** 2, axis=1)
    diag = np.real(np.diag(state.data))
    return diag.reshape(4, n).sum(axis=1)
