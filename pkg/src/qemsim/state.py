"""Dense density-matrix state and unitary gate kernels.

The state of an n-qubit register is a 2^n x 2^n complex matrix rho.
Basis indexing is little-endian: qubit 0 is the least-significant bit of
the computational-basis index.  Gates act as rho -> U rho U^dagger via
strided tensor contractions (one pass over rows, one over columns), which
costs O(4^n) per gate instead of the O(8^n) of a full matrix product.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError

DEFAULT_QUBIT_CAP = 14


def _check_qubits(qubits, n_qubits):
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubit indices: {qubits}")
    for q in qubits:
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit index {q} out of range for {n_qubits} qubits")


def apply_matrix_left(rho, u, qubits, n_qubits):
    """Return U_embedded @ rho for a small matrix u acting on `qubits`.

    The small matrix is indexed with qubits[0] as the most-significant bit.
    """
    k = len(qubits)
    t = rho.reshape((2,) * (2 * n_qubits))
    ut = u.reshape((2,) * (2 * k))
    row_axes = [n_qubits - 1 - q for q in qubits]
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), row_axes))
    t = np.moveaxis(t, range(k), row_axes)
    return np.ascontiguousarray(t).reshape(rho.shape)


def apply_matrix_right(rho, m, qubits, n_qubits):
    """Return rho @ M_embedded for a small matrix m acting on `qubits`."""
    k = len(qubits)
    t = rho.reshape((2,) * (2 * n_qubits))
    mt = m.reshape((2,) * (2 * k))
    col_axes = [2 * n_qubits - 1 - q for q in qubits]
    t = np.tensordot(t, mt, axes=(col_axes, list(range(k))))
    t = np.moveaxis(t, range(2 * n_qubits - k, 2 * n_qubits), col_axes)
    return np.ascontiguousarray(t).reshape(rho.shape)


def embed(u, qubits, n_qubits):
    """Dense 2^n x 2^n embedding of a small operator on the given qubits."""
    _check_qubits(qubits, n_qubits)
    eye = np.eye(2**n_qubits, dtype=complex)
    return apply_matrix_left(eye, np.asarray(u, dtype=complex), qubits, n_qubits)


@dataclass
class DensityMatrix:
    n_qubits: int
    data: np.ndarray  # (2^n, 2^n) complex128

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.n_qubits, self.data.copy())

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def purity(self) -> float:
        return float(np.real(np.trace(self.data @ self.data)))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.data)[0])

    def to_debug_json(self) -> str:
        """Row-major dump as nested [re, im] pairs; test-only interface."""
        pairs = [
            [[float(z.real), float(z.imag)] for z in row] for row in self.data
        ]
        return json.dumps(pairs)

    @classmethod
    def from_debug_json(cls, text: str) -> "DensityMatrix":
        pairs = json.loads(text)
        data = np.array([[complex(re, im) for re, im in row] for row in pairs])
        n = int(np.log2(data.shape[0]) + 0.5)
        return cls(n, data)


def new_pure_ground(n_qubits: int, cap: int = DEFAULT_QUBIT_CAP) -> DensityMatrix:
    """|0...0><0...0| on n qubits."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if n_qubits > cap:
        raise CapacityError(
            f"{n_qubits} qubits exceeds the cap of {cap} "
            f"(state storage is 4^n complex numbers)"
        )
    dim = 2**n_qubits
    data = np.zeros((dim, dim), dtype=complex)
    data[0, 0] = 1.0
    return DensityMatrix(n_qubits, data)


def apply_gate(rho: DensityMatrix, gate) -> DensityMatrix:
    """rho -> U rho U^dagger for a bound (fully resolved) gate."""
    _check_qubits(gate.qubits, rho.n_qubits)
    u = gate.matrix()
    out = apply_matrix_left(rho.data, u, gate.qubits, rho.n_qubits)
    out = apply_matrix_right(out, u.conj().T, gate.qubits, rho.n_qubits)
    return DensityMatrix(rho.n_qubits, out)
