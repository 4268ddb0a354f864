"""Shared fixtures: bundled H2 problem, optimized parameters, kron oracles."""

import numpy as np
import pytest

import qemsim as q

I2 = np.eye(2, dtype=complex)
PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_embed(op, qubit, n):
    """Independent little-endian embedding oracle (qubit 0 = LSB)."""
    full = np.array([[1.0 + 0j]])
    for j in range(n - 1, -1, -1):
        full = np.kron(full, op if j == qubit else I2)
    return full


def pauli_string_dense(ps, n):
    """Independent dense matrix of a PauliString via explicit krons."""
    full = np.eye(2**n, dtype=complex)
    for qubit, letter in ps.ops:
        full = full @ kron_embed(PAULI[letter], qubit, n)
    return full


def pauli_sum_dense(psum):
    out = np.zeros((2**psum.n_qubits,) * 2, dtype=complex)
    for coeff, ps in psum.terms:
        out += coeff * pauli_string_dense(ps, psum.n_qubits)
    return out


def random_density_matrix(n, rng):
    dim = 2**n
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    return q.DensityMatrix(n, rho)


@pytest.fixture(scope="session")
def h2_hamiltonian():
    return q.parse_pauli_sum(q.bundled_text("h2"))


@pytest.fixture(scope="session")
def h2_ground_energy(h2_hamiltonian):
    """Independent dense eigensolve of the bundled file (oracle)."""
    return float(np.linalg.eigvalsh(pauli_sum_dense(h2_hamiltonian))[0])


@pytest.fixture(scope="session")
def h2_uccsd_circuit():
    spec, n = q.parse_ansatz_file(q.bundled_text("h2_uccsd"))
    return q.build_ansatz(spec, n)


@pytest.fixture(scope="session")
def h2_vqe_result(h2_hamiltonian, h2_uccsd_circuit):
    problem = q.VqeProblem(h2_hamiltonian, h2_uccsd_circuit)
    return q.solve_vqe(problem, q.OptimizerSettings(max_evals=2000, seed=3))

@pytest.fixture(scope="session")
def h2_bound_circuit(h2_uccsd_circuit, h2_vqe_result):
    return q.bind(h2_uccsd_circuit, h2_vqe_result.theta_opt)
