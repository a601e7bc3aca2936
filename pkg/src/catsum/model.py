"""Hamiltonians and dissipation channels of the ququart-cavity device.

All frequencies and rates are angular, in rad/us; times are in us (hbar = 1).
Configuration files quote lab-frame values in GHz/MHz and the loader in
:mod:`catsum.experiments` multiplies by 2*pi on the way in.

The interaction-picture Hamiltonians are kept phase-factorized: a list of
constant sparse matrices, each tagged with the complex amplitude and the
oscillation frequency of its scalar prefactor.  The fastest counter-rotating
phase for the reference parameters is 2*pi x 25 GHz, so assembling a dense
matrix per integrator step would dominate the runtime; scalar phases cost
nothing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import scipy.sparse as sp

from .core import LEVEL_B, OperatorMatrix, SystemDims, annihilation, number_op, ququart_projector, ququart_transition
from .dynamics import TimeDependentOperator

__all__ = [
    "DeviceParams",
    "DispersiveShifts",
    "DecoherenceParams",
    "GateConditionReport",
    "hamiltonian_rwa",
    "hamiltonian_full",
    "hamiltonian_effective",
    "collapse_operators",
    "validate_gate_condition",
]

# (name, upper level, lower level) for the six cavity-coupled transitions;
# "upper" is the higher-energy level so a photon absorption drives lower->upper
TRANSITIONS = (
    ("1b", LEVEL_B, 1),
    ("2b", LEVEL_B, 2),
    ("0b", LEVEL_B, 0),
    ("01", 0, 1),
    ("02", 2, 0),
    ("12", 2, 1),
)


@dataclass(frozen=True)
class DeviceParams:
    """Transition frequencies, cavity frequency and coupling constants (rad/us)."""

    omega_c: float
    omega_1b: float
    omega_2b: float
    omega_0b: float
    omega_01: float
    omega_02: float
    omega_12: float
    g_1b: float
    g_2b: float
    g_0b: float
    g_01: float
    g_02: float
    g_12: float
    alpha: complex = 3.05

    def __post_init__(self):
        for name in ("1b", "2b"):
            g = getattr(self, f"g_{name}")
            delta = abs(self.detuning(name))
            if g > 0 and delta < 10.0 * g:
                warnings.warn(
                    f"|Delta_{name}| = {delta:.3g} rad/us is below 10*g_{name}; "
                    "the dispersive description is marginal",
                    stacklevel=2,
                )

    def detuning(self, name: str) -> float:
        """Delta_xy = omega_xy - omega_c."""
        return getattr(self, f"omega_{name}") - self.omega_c

    def coupling(self, name: str) -> float:
        return getattr(self, f"g_{name}")

    def dispersive_shifts(self) -> "DispersiveShifts":
        return DispersiveShifts(
            lambda_1=self.g_1b**2 / self.detuning("1b"),
            lambda_2=self.g_2b**2 / self.detuning("2b"),
        )


@dataclass(frozen=True)
class DispersiveShifts:
    """Photon-number Stark shifts g^2/Delta for the two gate transitions (rad/us)."""

    lambda_1: float
    lambda_2: float

    @property
    def mismatch(self) -> float:
        """Relative deviation |lambda_2 - 2*lambda_1| / lambda_1 from the gate condition."""
        return abs(self.lambda_2 - 2.0 * self.lambda_1) / abs(self.lambda_1)

    @property
    def gate_time(self) -> float:
        """Duration pi / (3 lambda_1) that advances the level-1 cat angle by pi/3."""
        return math.pi / (3.0 * self.lambda_1)


@dataclass(frozen=True)
class DecoherenceParams:
    """Cavity decay and ququart relaxation/dephasing rates (1/us).

    The level ladder has |1> as the ground level, so the 01 channel relaxes
    |0> -> |1>.  Dephasing is tracked for levels 0, 2 and b relative to the
    ground level.
    """

    kappa: float
    gamma_0b: float
    gamma_1b: float
    gamma_2b: float
    gamma_02: float
    gamma_12: float
    gamma_01: float
    gamma_phi_0: float
    gamma_phi_2: float
    gamma_phi_b: float
    T: float = float("inf")

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if name != "T" and value < 0:
                raise ValueError(f"rate {name} must be >= 0, got {value}")

    @classmethod
    def from_timescale(cls, T: float, kappa: float) -> "DecoherenceParams":
        """Standard rate table parameterized by the single timescale T (us):

        1/gamma_0b = 1/gamma_02 = 1/gamma_01 = 5T, 1/gamma_1b = 1/gamma_2b = T/2,
        1/gamma_12 = T, 1/gamma_phi_b = 1/gamma_phi_2 = T/2, 1/gamma_phi_0 = 2.5T.
        """
        if T <= 0:
            raise ValueError("T must be positive")
        if math.isinf(T):
            return cls.lossless()
        return cls(
            kappa=kappa,
            gamma_0b=1.0 / (5.0 * T),
            gamma_1b=2.0 / T,
            gamma_2b=2.0 / T,
            gamma_02=1.0 / (5.0 * T),
            gamma_12=1.0 / T,
            gamma_01=1.0 / (5.0 * T),
            gamma_phi_0=1.0 / (2.5 * T),
            gamma_phi_2=2.0 / T,
            gamma_phi_b=2.0 / T,
            T=T,
        )

    @classmethod
    def lossless(cls) -> "DecoherenceParams":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# Hamiltonians


def _coupling_matrix(upper: int, lower: int, photon_op: sp.csr_matrix, dims: SystemDims) -> sp.csr_matrix:
    """Composite-space photon operator times |upper><lower| on the ququart."""
    sigma = ququart_transition(upper, lower, dims).data
    return (photon_op @ sigma).tocsr()


def hamiltonian_rwa(params: DeviceParams, dims: SystemDims) -> TimeDependentOperator:
    """Rotating-wave interaction Hamiltonian of the two gate transitions:

    H(t) = g_1b (e^{i Delta_1b t} a|b><1| + h.c.) + g_2b (e^{i Delta_2b t} a|b><2| + h.c.)
    """
    a = annihilation(dims).data
    h = TimeDependentOperator(dims)
    for name in ("1b", "2b"):
        upper, lower = LEVEL_B, int(name[0])
        h.add_pair(_coupling_matrix(upper, lower, a, dims), params.detuning(name), params.coupling(name))
    return h


def hamiltonian_full(params: DeviceParams, dims: SystemDims) -> TimeDependentOperator:
    """Interaction Hamiltonian with all six cavity couplings, no rotating-wave cut.

    Each transition xy contributes a co-rotating term a|up><lo| at Delta_xy and
    a counter-rotating term a†|up><lo| at omega_c + omega_xy, plus conjugates.
    """
    a = annihilation(dims).data
    adag = a.getH().tocsr()
    h = TimeDependentOperator(dims)
    for name, upper, lower in TRANSITIONS:
        g = params.coupling(name)
        omega = getattr(params, f"omega_{name}")
        h.add_pair(_coupling_matrix(upper, lower, a, dims), params.detuning(name), g)
        h.add_pair(_coupling_matrix(upper, lower, adag, dims), params.omega_c + omega, g)
    return h


def hamiltonian_effective(shifts: DispersiveShifts, dims: SystemDims, include_b: bool = False) -> OperatorMatrix:
    """Dispersive photon-number-shift Hamiltonian.

    With ``include_b`` the b-level Stark shifts +(lambda_1+lambda_2) a a† |b><b|
    are kept; without it the operator is the reduced form
    -lambda_1 n|1><1| - lambda_2 n|2><2| valid on the zero-b subspace.
    """
    n = number_op(dims).data
    h = -shifts.lambda_1 * (n @ ququart_projector(1, dims).data) - shifts.lambda_2 * (
        n @ ququart_projector(2, dims).data
    )
    if include_b:
        a = annihilation(dims).data
        aad = (a @ a.getH()).tocsr()
        h = h + (shifts.lambda_1 + shifts.lambda_2) * (aad @ ququart_projector(LEVEL_B, dims).data)
    return OperatorMatrix(h.tocsr(), dims, hermitian=True)


# ---------------------------------------------------------------------------
# dissipation


def collapse_operators(dec: DecoherenceParams, dims: SystemDims) -> list[OperatorMatrix]:
    """Collapse operators pre-scaled by sqrt(rate); zero-rate channels are dropped.

    Channels: cavity decay sqrt(kappa) a; relaxation sqrt(gamma_jb)|j><b|,
    sqrt(gamma_j2)|j><2|, sqrt(gamma_01)|1><0|; dephasing sqrt(gamma_phi_j)|j><j|
    for j in {0, 2, b}.  The projector form reproduces the dephasing dissipator
    gamma (P rho P - P rho/2 - rho P/2) exactly, so one Lindblad code path
    serves every channel.
    """
    ops = []

    def add(rate, matrix):
        if rate > 0:
            ops.append(OperatorMatrix(math.sqrt(rate) * matrix, dims))

    add(dec.kappa, annihilation(dims).data)
    for j in (0, 1, 2):
        add(getattr(dec, f"gamma_{j}b"), ququart_transition(j, LEVEL_B, dims).data)
    for j in (0, 1):
        add(getattr(dec, f"gamma_{j}2"), ququart_transition(j, 2, dims).data)
    add(dec.gamma_01, ququart_transition(1, 0, dims).data)
    for j in (0, 2, LEVEL_B):
        label = "b" if j == LEVEL_B else str(j)
        add(getattr(dec, f"gamma_phi_{label}"), ququart_projector(j, dims).data)
    return ops


@dataclass(frozen=True)
class GateConditionReport:
    lambda_1: float
    lambda_2: float
    mismatch: float
    gate_time: float


def validate_gate_condition(params: DeviceParams) -> GateConditionReport:
    """Report the dispersive shifts, the lambda_2 = 2 lambda_1 mismatch and the gate time."""
    shifts = params.dispersive_shifts()
    if shifts.lambda_1 == 0:
        raise ValueError("lambda_1 vanishes; no gate time exists")
    return GateConditionReport(
        lambda_1=shifts.lambda_1,
        lambda_2=shifts.lambda_2,
        mismatch=shifts.mismatch,
        gate_time=shifts.gate_time,
    )
