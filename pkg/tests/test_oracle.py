"""Exact diagonalization, QTM and structural-identity oracles."""

import numpy as np
import pytest

from qtmchain import (
    build_hamiltonian,
    finite_free_energy,
    qtm_eigenvalue,
    qtm_matrix,
    solve_bethe_roots,
    spin2_identity_residual,
    transfer_matrix,
    trotter_free_energy,
    ybe_residual,
)
from qtmchain.errors import DomainError
from qtmchain.oracle import number_operator
from qtmchain.spectral import eigenvalue_from_roots


class TestHamiltonian:
    def test_two_site_spectrum(self):
        H = build_hamiltonian(5, 2, periodic=False).matrix
        ev = np.round(np.linalg.eigvalsh(H), 10)
        vals, counts = np.unique(ev, return_counts=True)
        assert dict(zip(vals, counts)) == {-1.0: 10, 1.0: 15}

    def test_transposition_squares_to_identity(self):
        H = build_hamiltonian(3, 2, periodic=False).matrix
        assert np.max(np.abs(H @ H - np.eye(9))) == 0.0

    def test_heisenberg_mapping(self):
        H = build_hamiltonian(2, 4, periodic=True).matrix
        sx = np.array([[0.0, 1.0], [1.0, 0.0]])
        sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
        sz = np.diag([1.0, -1.0])

        def site(op, i):
            out = np.array([[1.0]])
            for k in range(4):
                out = np.kron(out, op if k == i else np.eye(2))
            return out

        Hh = sum(
            0.5
            * (
                np.eye(16)
                + site(sx, i) @ site(sx, (i + 1) % 4)
                + (site(sy, i) @ site(sy, (i + 1) % 4)).real
                + site(sz, i) @ site(sz, (i + 1) % 4)
            )
            for i in range(4)
        )
        assert np.max(np.abs(H - Hh.real)) < 1e-13
        g_perm = np.linalg.eigvalsh(H)[0]
        g_heis = np.linalg.eigvalsh(Hh.real)[0]
        assert g_perm == pytest.approx(g_heis)

    def test_dimension_cap(self):
        with pytest.raises(DomainError):
            build_hamiltonian(5, 12)

    def test_number_operator(self):
        nop = number_operator(3, 2, 1)
        assert nop.tolist() == [2, 1, 1, 1, 0, 0, 1, 0, 0]


class TestFiniteFreeEnergy:
    def test_two_site_partition_function(self):
        T = 1.3
        beta = 1.0 / T
        Z = 15.0 * np.exp(-beta) + 10.0 * np.exp(beta)
        assert finite_free_energy(5, 2, T, periodic=False) == pytest.approx(
            -(T / 2) * np.log(Z)
        )

    def test_infinite_temperature(self):
        assert finite_free_energy(5, 4, 1e9) / 1e9 == pytest.approx(
            -np.log(5), abs=1e-8
        )

    def test_chemical_potential_shift(self):
        base = finite_free_energy(3, 4, 1.5)
        shifted = finite_free_energy(3, 4, 1.5, mu=(0.2, 0.2, 0.2))
        assert shifted == pytest.approx(base - 0.2)


class TestQtm:
    def test_beta_zero_counts_states(self):
        lam = qtm_eigenvalue(5, 2, T=1e8)
        assert lam.real == pytest.approx(5.0, abs=1e-6)

    def test_power_iteration_matches_dense(self):
        T = 1.4
        M = qtm_matrix(4, 2, T=T).matrix
        ev = np.linalg.eigvals(M)
        dominant = ev[np.argmax(ev.real)]
        assert qtm_eigenvalue(4, 2, T=T).real == pytest.approx(dominant.real, abs=1e-10)

    @pytest.mark.parametrize("n", [2, 4, 5])
    def test_bethe_reconstruction(self, n):
        T = 1.0 / 0.7
        data = solve_bethe_roots(n, 2, beta=1.0 / T)
        lam_formula = eigenvalue_from_roots(data, 0.0)
        lam_matrix = qtm_eigenvalue(n, 2, T=T)
        assert abs(lam_formula - lam_matrix) <= 1e-9

    def test_bethe_reconstruction_off_origin(self):
        T = 1.0 / 0.7
        data = solve_bethe_roots(4, 2, beta=1.0 / T)
        for x in (0.3, -0.6):
            lam_formula = eigenvalue_from_roots(data, x)
            M = qtm_matrix(4, 2, T=T, x=x).matrix
            ev = np.linalg.eigvals(M)
            dominant = ev[np.argmax(ev.real)]
            assert abs(lam_formula - dominant) <= 1e-9

    def test_commutativity(self):
        Q1 = qtm_matrix(3, 2, T=2.0, x=0.3).matrix
        Q2 = qtm_matrix(3, 2, T=2.0, x=-0.8).matrix
        assert np.max(np.abs(Q1 @ Q2 - Q2 @ Q1)) <= 1e-12

    def test_row_to_row_commutativity(self):
        T1 = transfer_matrix(3, 4, 0.63).matrix
        T2 = transfer_matrix(3, 4, -0.41).matrix
        assert np.max(np.abs(T1 @ T2 - T2 @ T1)) <= 1e-12


class TestTrotterConvergence:
    def test_normalized_sequence_is_second_order(self):
        # away from the tau = 1/2 degeneracy the errors fall like 1/N^2
        from qtmchain import solve_nlie, free_energy

        f_ref = free_energy(solve_nlie(4, T=2.0))
        errs = [abs(trotter_free_energy(4, N, 2.0) - f_ref) for N in (2, 4, 6)]
        assert errs[0] > errs[1] > errs[2]
        ratio = errs[0] / errs[1]
        assert 3.0 <= ratio <= 5.5

    def test_finite_size_convergence(self):
        from qtmchain import solve_nlie, free_energy

        f_ref = free_energy(solve_nlie(5, T=2.0))
        e4 = abs(finite_free_energy(5, 4, 2.0) - f_ref)
        e6 = abs(finite_free_energy(5, 6, 2.0) - f_ref)
        assert e6 < e4
        assert e6 < 1e-5


class TestStructural:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_yang_baxter(self, n):
        assert ybe_residual(n) <= 1e-13

    def test_yang_baxter_negative_control(self):
        assert ybe_residual(3, perturb=1.01) > 1e-3

    def test_spin2_polynomial(self):
        residual, const = spin2_identity_residual()
        assert residual <= 1e-12
        assert const == pytest.approx(-1.0, abs=1e-12)

    def test_spin2_negative_control(self):
        residual, _ = spin2_identity_residual(
            coeffs=(-2.5, 0.0, 1.0 / 6.0, 1.0 / 36.0)
        )
        assert residual > 1e-1
