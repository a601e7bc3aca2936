"""catsum: lossy circuit-QED simulation of a hybrid controlled-SUM gate
between a superconducting qutrit and a cat-state qutrit.
"""

from ._backend import active_backend
from .core import (
    CatCode,
    OperatorMatrix,
    QuantumState,
    SystemDims,
    TruncationError,
    cat_codeword,
    coherent_state,
    fidelity_pure_mixed,
    rotate_cavity_phase,
)
from .dynamics import (
    EvolutionConfig,
    IntegrationError,
    TimeDependentOperator,
    evolve_effective_analytic,
    evolve_lindblad,
    evolve_schrodinger,
)
from .model import (
    DecoherenceParams,
    DeviceParams,
    DispersiveShifts,
    collapse_operators,
    hamiltonian_effective,
    hamiltonian_full,
    hamiltonian_rwa,
    validate_gate_condition,
)
from .protocol import (
    GateRunResult,
    HybridBasisLabel,
    csum_target,
    hybrid_basis_state,
    initial_state,
    prepare_control_superposition,
    run_gate,
    target_entangled_state,
)

__version__ = "0.1.0"

__all__ = [
    "active_backend",
    "CatCode",
    "OperatorMatrix",
    "QuantumState",
    "SystemDims",
    "TruncationError",
    "cat_codeword",
    "coherent_state",
    "fidelity_pure_mixed",
    "rotate_cavity_phase",
    "EvolutionConfig",
    "IntegrationError",
    "TimeDependentOperator",
    "evolve_effective_analytic",
    "evolve_lindblad",
    "evolve_schrodinger",
    "DecoherenceParams",
    "DeviceParams",
    "DispersiveShifts",
    "collapse_operators",
    "hamiltonian_effective",
    "hamiltonian_full",
    "hamiltonian_rwa",
    "validate_gate_condition",
    "GateRunResult",
    "HybridBasisLabel",
    "csum_target",
    "hybrid_basis_state",
    "initial_state",
    "prepare_control_superposition",
    "run_gate",
    "target_entangled_state",
]
