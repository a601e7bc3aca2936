"""Hamiltonian construction, collapse operators, gate-condition checks."""

import math

import numpy as np
import pytest

from catsum.core import LEVEL_B, SystemDims
from catsum.model import (
    DecoherenceParams,
    DeviceParams,
    DispersiveShifts,
    collapse_operators,
    hamiltonian_effective,
    hamiltonian_full,
    hamiltonian_rwa,
    validate_gate_condition,
)

TWO_PI = 2 * math.pi


@pytest.fixture(scope="module")
def dims():
    return SystemDims(10)


class TestDeviceParams:
    def test_reference_detunings(self, device):
        """Detunings derived from the transition/cavity frequencies."""
        expected_ghz = {"1b": 4.0, "2b": 2.0, "0b": 3.0, "01": -9.5, "02": -9.5, "12": -8.5}
        for name, value in expected_ghz.items():
            assert device.detuning(name) == pytest.approx(TWO_PI * 1e3 * value)

    def test_reference_shifts(self, device):
        shifts = device.dispersive_shifts()
        assert shifts.lambda_1 == pytest.approx(TWO_PI * 3.6)
        assert shifts.lambda_2 == pytest.approx(TWO_PI * 7.2)
        assert shifts.mismatch == pytest.approx(0.0, abs=1e-12)

    def test_marginal_dispersive_regime_warns(self, device):
        from dataclasses import replace

        with pytest.warns(UserWarning):
            replace(device, omega_2b=device.omega_c + 5 * device.g_2b)


class TestGateCondition:
    def test_reference_gate_time(self, device):
        report = validate_gate_condition(device)
        assert report.gate_time == pytest.approx(math.pi / (3 * TWO_PI * 3.6))
        assert report.gate_time == pytest.approx(0.0463, rel=1e-2)

    def test_sqrt2_scaling_keeps_condition(self, device):
        from dataclasses import replace

        scaled = replace(device, g_2b=device.g_1b * math.sqrt(2), omega_2b=device.omega_1b)
        assert validate_gate_condition(scaled).mismatch == pytest.approx(0.0, abs=1e-12)

    def test_equal_couplings_equal_detunings_mismatch_one(self, device):
        from dataclasses import replace

        bad = replace(device, g_2b=device.g_1b, omega_2b=device.omega_1b)
        assert validate_gate_condition(bad).mismatch == pytest.approx(1.0)

    def test_zero_shift_rejected(self, device):
        from dataclasses import replace

        with pytest.raises(ValueError):
            validate_gate_condition(replace(device, g_1b=0.0))


class TestRotatingWaveHamiltonian:
    def test_hermitian_at_probe_times(self, device, dims):
        h = hamiltonian_rwa(device, dims)
        for t in (0.0, 0.013):
            m = h.assemble(t)
            assert np.max(np.abs(m - m.conj().T)) <= 1e-12

    def test_hermitian_at_random_times(self, device, dims):
        h = hamiltonian_rwa(device, dims)
        rng = np.random.default_rng(3)
        for t in rng.uniform(0, 0.05, size=100):
            m = h.assemble(t)
            assert np.max(np.abs(m - m.conj().T)) <= 1e-12

    def test_matrix_elements(self, device, dims):
        h = hamiltonian_rwa(device, dims).assemble(0.0)
        n_fock = dims.fock_cutoff
        for n in (1, 2, 3):
            row = LEVEL_B * n_fock + (n - 1)
            col = 1 * n_fock + n
            assert h[row, col] == pytest.approx(device.g_1b * math.sqrt(n))

    def test_no_level2_coupling_when_g2b_zero(self, device, dims):
        from dataclasses import replace

        h = hamiltonian_rwa(replace(device, g_2b=0.0), dims).assemble(0.0123)
        n_fock = dims.fock_cutoff
        block = slice(2 * n_fock, 3 * n_fock)
        assert np.all(h[block, :] == 0)
        assert np.all(h[:, block] == 0)


class TestFullHamiltonian:
    def test_hermitian_at_random_times(self, device, dims):
        h = hamiltonian_full(device, dims)
        rng = np.random.default_rng(5)
        for t in rng.uniform(0, 0.05, size=100):
            m = h.assemble(t)
            assert np.max(np.abs(m - m.conj().T)) <= 1e-12

    def test_term_count_and_max_frequency(self, device, dims):
        h = hamiltonian_full(device, dims)
        assert len(h.terms) == 24
        assert h.max_frequency == pytest.approx(device.omega_c + device.omega_1b)
        assert h.max_frequency == pytest.approx(TWO_PI * 25e3)

    def test_reduces_to_rwa_term_subset(self, device, dims):
        """Dropping unwanted couplings and counter-rotating terms leaves the RWA terms."""
        from dataclasses import replace

        stripped = replace(device, g_0b=0.0, g_01=0.0, g_02=0.0, g_12=0.0)
        full_terms = [
            (m, f, a) for m, f, a in hamiltonian_full(stripped, dims).terms
            if a != 0 and abs(f) < device.omega_c
        ]
        rwa_terms = hamiltonian_rwa(stripped, dims).terms
        assert len(full_terms) == len(rwa_terms)
        for (ma, fa, aa), (mb, fb, ab) in zip(full_terms, rwa_terms):
            assert fa == fb and aa == ab
            assert (ma != mb).nnz == 0


class TestEffectiveHamiltonian:
    def test_diagonal_eigenvalue(self, device, dims):
        shifts = device.dispersive_shifts()
        h = hamiltonian_effective(shifts, dims).toarray()
        idx = 1 * dims.fock_cutoff + 3
        assert h[idx, idx] == pytest.approx(-3 * shifts.lambda_1)
        assert np.count_nonzero(h - np.diag(np.diag(h))) == 0

    def test_annihilates_level0(self, device, dims):
        h = hamiltonian_effective(device.dispersive_shifts(), dims).toarray()
        block = slice(0, dims.fock_cutoff)
        assert np.all(h[block, :] == 0)

    def test_with_and_without_b_agree_off_b(self, device, dims):
        shifts = device.dispersive_shifts()
        h4 = hamiltonian_effective(shifts, dims, include_b=True).toarray()
        h5 = hamiltonian_effective(shifts, dims, include_b=False).toarray()
        keep = slice(0, 3 * dims.fock_cutoff)
        np.testing.assert_array_equal(h4[keep, keep], h5[keep, keep])
        # auxiliary-level Stark shift +(lambda_1 + lambda_2) a a† on |b>
        n = 4
        idx = 3 * dims.fock_cutoff + n
        assert h4[idx, idx] == pytest.approx((shifts.lambda_1 + shifts.lambda_2) * (n + 1))


class TestDecoherenceParams:
    @pytest.mark.parametrize("T", [10.0, 20.0, 30.0])
    def test_inverse_rate_table(self, T):
        dec = DecoherenceParams.from_timescale(T, 0.01)
        assert 1.0 / dec.gamma_0b == pytest.approx(5 * T)
        assert 1.0 / dec.gamma_02 == pytest.approx(5 * T)
        assert 1.0 / dec.gamma_01 == pytest.approx(5 * T)
        assert 1.0 / dec.gamma_1b == pytest.approx(T / 2)
        assert 1.0 / dec.gamma_2b == pytest.approx(T / 2)
        assert 1.0 / dec.gamma_12 == pytest.approx(T)
        assert 1.0 / dec.gamma_phi_b == pytest.approx(T / 2)
        assert 1.0 / dec.gamma_phi_2 == pytest.approx(T / 2)
        assert 1.0 / dec.gamma_phi_0 == pytest.approx(2.5 * T)

    def test_t20_gamma_1b(self):
        assert DecoherenceParams.from_timescale(20.0, 0.01).gamma_1b == pytest.approx(0.1)

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError):
            DecoherenceParams(kappa=-1.0, gamma_0b=0, gamma_1b=0, gamma_2b=0,
                              gamma_02=0, gamma_12=0, gamma_01=0,
                              gamma_phi_0=0, gamma_phi_2=0, gamma_phi_b=0)


class TestCollapseOperators:
    def test_lossless_gives_empty_list(self, dims):
        assert collapse_operators(DecoherenceParams.lossless(), dims) == []

    def test_channel_count(self, dims):
        ops = collapse_operators(DecoherenceParams.from_timescale(20.0, 0.01), dims)
        assert len(ops) == 10  # cavity + 6 relaxation paths + 3 dephasing projectors

    def test_rates_recoverable_from_scaling(self, dims):
        """Each operator is sqrt(rate) times a unit-element matrix."""
        for T in (10.0, 20.0, 30.0):
            dec = DecoherenceParams.from_timescale(T, 1.0 / 50.0)
            ops = collapse_operators(dec, dims)
            relax = ops[1]  # first ququart channel: |0><b| at gamma_0b
            assert relax.data.max() ** 2 == pytest.approx(dec.gamma_0b)
            assert ops[0].data.data[0] ** 2 == pytest.approx(dec.kappa)  # sqrt(kappa) a, element sqrt(1)

    def test_dephasing_projector_structure(self, dims):
        dec = DecoherenceParams.from_timescale(20.0, 0.0)
        ops = collapse_operators(dec, dims)
        deph2 = ops[-2]  # dephasing projectors come last, in order (0, 2, b)
        dense = deph2.toarray()
        assert np.count_nonzero(dense - np.diag(np.diag(dense))) == 0
        diag = np.real(np.diag(dense)).reshape(4, dims.fock_cutoff)
        assert np.all(diag[2] > 0)
        assert np.all(diag[[0, 1, 3]] == 0)
