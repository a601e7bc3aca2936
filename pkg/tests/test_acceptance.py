"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The master-equation
points at the reference parameters take half a minute to a minute each with
the compiled kernel; they are shared across criteria through session
fixtures.

Three criteria assert reproduction targets for the reference device at cat
amplitude 3.05 (the grid-point fidelity, the preparation-error minima, and
the 0.99 rotating-wave-vs-dispersive bound).  Those targets are not reached
by the model itself: the dispersive phase error per photon grows with photon
number, and at mean photon number 9.3 with g/Delta = 0.06 on the 2-b
transition the branch-2 phase error is of order one radian.  The integrators
here agree with independent matrix-exponential and adaptive-integrator
oracles to better than 1e-4 on exactly those runs, so the suite reports the
model's honest numbers and the affected criteria fail.  See the README for
the full numbers and the convergence evidence.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

from catsum.core import (
    CatCode,
    SystemDims,
    annihilation,
    coherent_state,
    expectation,
    overlap,
    ququart_level_state,
    ququart_projector,
    ququart_transition,
    tensor_level_cavity,
)
from catsum.dynamics import (
    EvolutionConfig,
    TimeDependentOperator,
    evolve_effective_analytic,
    evolve_lindblad,
    evolve_schrodinger,
)
from catsum.model import (
    DecoherenceParams,
    OperatorMatrix,
    collapse_operators,
    hamiltonian_effective,
    hamiltonian_rwa,
)
from catsum.protocol import (
    HybridBasisLabel,
    csum_target,
    hybrid_basis_state,
    initial_state,
    run_gate,
)

ALPHA = 3.05
LABELS = [HybridBasisLabel(c, k) for c in range(3) for k in range(3)]


def _criterion(name, ok, detail):
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="session")
def shifts(device):
    return device.dispersive_shifts()


@pytest.fixture(scope="session")
def grid_point(device, dims40):
    """Reference grid point: full model + dissipation, T = 20 us, kappa_inv = 100 us."""
    dec = DecoherenceParams.from_timescale(20.0, 1.0 / 100.0)
    psi0 = initial_state(0.0, ALPHA, dims40)
    return run_gate("full_lindblad", device, psi0, dec=dec)


@pytest.fixture(scope="session")
def grid_point_n50(device):
    dims = SystemDims(50)
    dec = DecoherenceParams.from_timescale(20.0, 1.0 / 100.0)
    psi0 = initial_state(0.0, ALPHA, dims)
    return run_gate("full_lindblad", device, psi0, dec=dec)


@pytest.fixture(scope="session")
def delta_endpoint_runs(device, dims40):
    """delta = +-0.1 endpoints per kappa_inv; fidelity is monotone in |delta|,
    and the delta = 0 column is the separately tested grid point."""
    results = {}
    for kappa_inv in (50.0, 100.0, 150.0):
        dec = DecoherenceParams.from_timescale(20.0, 1.0 / kappa_inv)
        ideal0 = initial_state(0.0, ALPHA, dims40)
        for delta in (-0.1, 0.1):
            psi0 = initial_state(delta, ALPHA, dims40)
            res = run_gate("full_lindblad", device, psi0, dec=dec, ideal_input=ideal0)
            alt = run_gate("effective_analytic", device, psi0)  # perturbed-input target
            from catsum.core import fidelity_pure_mixed

            f_alt = fidelity_pure_mixed(alt.final_state, res.final_state)
            results[(kappa_inv, delta)] = (res.fidelity, f_alt)
    return results


@pytest.fixture(scope="session")
def rwa_basis_runs(device, dims40):
    return {
        (lbl.control, lbl.target): run_gate("rwa", device, hybrid_basis_state(lbl, ALPHA, dims40))
        for lbl in LABELS
    }


class TestAcceptance:
    def test_c01_gate_truth_table(self, device, dims40):
        """Nine analytic-mode basis states map per the truth table, under 1 s."""
        tic = time.perf_counter()
        worst = 1.0
        for lbl in LABELS:
            res = run_gate("effective_analytic", device, hybrid_basis_state(lbl, ALPHA, dims40))
            target = hybrid_basis_state(csum_target(lbl), ALPHA, dims40)
            worst = min(worst, abs(overlap(target, res.final_state)))
        elapsed = time.perf_counter() - tic
        ok = worst >= 1 - 1e-4 and elapsed < 1.0
        _criterion("gate-truth-table", ok, f"min fidelity {worst:.8f}, runtime {elapsed:.3f}s")

    def test_c02_cat_quasi_orthogonality(self, dims40):
        gram = CatCode.build(ALPHA, dims40).overlap_matrix()
        worst = max(gram[k, l] for k in range(3) for l in range(3) if k != l)
        _criterion("cat-quasi-orthogonality", worst < 1e-4, f"max |<k|l>|^2 = {worst:.3e}")

    def test_c03_timing_scalars(self, device, shifts):
        t_gate = shifts.gate_time
        q = device.omega_c * 100.0
        ok_t = abs(t_gate - 0.0463) / 0.0463 < 0.01
        ok_q = abs(q - 6.59e6) / 6.59e6 < 0.01
        _criterion(
            "timing-scalars", ok_t and ok_q,
            f"t_gate = {t_gate:.6f} us (target 0.0463 +- 1%), Q = {q:.4g} (target 6.59e6 +- 1%)",
        )

    def test_c04_grid_point_fidelity(self, grid_point):
        """Full model + dissipation at (kappa_inv = 100 us, T = 20 us), delta = 0."""
        f = grid_point.fidelity
        grid_estimate_h = 24 * grid_point.runtime_s / 3600
        ok = f > 0.961 and abs(f - 0.961) < 0.01 and grid_estimate_h < 2.0
        _criterion(
            "grid-point-fidelity", ok,
            f"F = {f:.6f} (target > 0.961 within 1pp), "
            f"8x3 grid estimate {grid_estimate_h:.2f} h",
        )

    def test_c05_preparation_error_minima(self, delta_endpoint_runs):
        """Worst fidelity over delta in [-0.1, 0.1] per kappa_inv, T = 20 us."""
        bounds = {50.0: 0.945, 100.0: 0.947, 150.0: 0.948}
        details, ok = [], True
        for kappa_inv, bound in bounds.items():
            fmin = min(delta_endpoint_runs[(kappa_inv, d)][0] for d in (-0.1, 0.1))
            fmin_alt = min(delta_endpoint_runs[(kappa_inv, d)][1] for d in (-0.1, 0.1))
            ok = ok and fmin > bound and abs(fmin - bound) < 0.01
            details.append(
                f"kappa_inv={kappa_inv:g}: min F = {fmin:.4f} (target > {bound}), "
                f"perturbed-target convention {fmin_alt:.4f}"
            )
        _criterion("preparation-error-minima", ok, "; ".join(details))

    def test_c06_oracle_equivalence(self, device, shifts, dims40):
        """RK4 under the diagonal dispersive Hamiltonian vs the exact phase map."""
        h = TimeDependentOperator.from_static(hamiltonian_effective(shifts, dims40))
        t_gate = shifts.gate_time
        worst = 1.0
        for lbl in LABELS:
            psi = hybrid_basis_state(lbl, ALPHA, dims40)
            got = evolve_schrodinger(h, psi, EvolutionConfig(dt=t_gate / 2000, t_final=t_gate))
            want = evolve_effective_analytic(shifts, psi, t_gate)
            worst = min(worst, abs(overlap(want, got)))
        psi = hybrid_basis_state(HybridBasisLabel(2, 1), ALPHA, dims40)
        want = evolve_effective_analytic(shifts, psi, t_gate)
        errs = [
            np.linalg.norm(
                evolve_schrodinger(h, psi, EvolutionConfig(dt=t_gate / n, t_final=t_gate)).data
                - want.data
            )
            for n in (400, 800)
        ]
        order = math.log2(errs[0] / errs[1])
        ok = worst >= 1 - 1e-6 and abs(order - 4.0) <= 0.3
        _criterion(
            "oracle-equivalence", ok,
            f"min fidelity {worst:.9f} (target >= 1-1e-6), RK4 order {order:.2f} (target 4 +- 0.3)",
        )

    def test_c07_lindblad_physics(self, device, grid_point):
        details = []

        drift = grid_point.trace_drift
        ok = drift <= 1e-6
        details.append(f"trace drift {drift:.2e}")

        dims = SystemDims(25)
        kappa, t_final = 0.8, 1.0
        lop = OperatorMatrix(math.sqrt(kappa) * annihilation(dims).data, dims)
        psi = tensor_level_cavity(ququart_level_state(1, dims), coherent_state(2.0, dims))
        rho = evolve_lindblad(
            TimeDependentOperator(dims), [lop], psi.to_density_matrix(),
            EvolutionConfig(dt=5e-4, t_final=t_final),
        )
        a_err = abs(expectation(annihilation(dims), rho) - 2.0 * math.exp(-kappa * t_final / 2))
        ok = ok and a_err < 1e-6
        details.append(f"damped-cavity <a> error {a_err:.2e}")

        dims4 = SystemDims(4)
        gamma = 0.5
        lop = OperatorMatrix(math.sqrt(gamma) * ququart_transition(1, 0, dims4).data, dims4)
        psi = tensor_level_cavity(ququart_level_state(0, dims4), coherent_state(0.0, dims4))
        rho = evolve_lindblad(
            TimeDependentOperator(dims4), [lop], psi.to_density_matrix(),
            EvolutionConfig(dt=1e-3, t_final=2.0),
        )
        p_err = abs(expectation(ququart_projector(0, dims4), rho).real - math.exp(-gamma * 2.0))
        ok = ok and p_err < 1e-6
        details.append(f"two-level decay error {p_err:.2e}")

        dims12 = SystemDims(12)
        h = hamiltonian_rwa(device, dims12)
        psi = tensor_level_cavity(ququart_level_state(1, dims12), coherent_state(1.2, dims12))
        cfg = EvolutionConfig.for_hamiltonian(h, 0.002)
        pure = evolve_schrodinger(h, psi, cfg)
        mixed = evolve_lindblad(h, [], psi.to_density_matrix(), cfg)
        closed_err = float(np.max(np.abs(mixed.data - np.outer(pure.data, pure.data.conj()))))
        ok = ok and closed_err < 1e-6
        details.append(f"closed-system mismatch {closed_err:.2e}")

        _criterion("lindblad-physics", ok, "; ".join(details))

    def test_c08_dispersive_validity(self, device, rwa_basis_runs):
        """Rotating-wave evolution vs the dispersive phase map on all nine states."""
        bound = 4 * max(
            device.g_1b / device.detuning("1b"), device.g_2b / device.detuning("2b")
        ) ** 2 * (ALPHA**2 + 1)
        fmin = min(res.fidelity for res in rwa_basis_runs.values())
        b_worst = max(res.b_population_max for res in rwa_basis_runs.values())
        ok = fmin >= 0.99 and b_worst <= bound
        per_state = ", ".join(
            f"({c},{k})={res.fidelity:.4f}" for (c, k), res in sorted(rwa_basis_runs.items())
        )
        _criterion(
            "dispersive-validity", ok,
            f"min fidelity {fmin:.4f} (target >= 0.99), max b-population {b_worst:.4f} "
            f"(bound {bound:.4f}); per state: {per_state}",
        )

    def test_c09_cutoff_convergence(self, grid_point, grid_point_n50):
        diff = abs(grid_point.fidelity - grid_point_n50.fidelity)
        _criterion(
            "cutoff-convergence", diff < 1e-4,
            f"|F(N=40) - F(N=50)| = {diff:.3e} (target < 1e-4)",
        )
