"""Pauli-string observables: parsing, expectation values, exact diagonalization.

A PauliSum with real coefficients represents a Hermitian observable such
as a molecular Hamiltonian.  Expectation values Tr(rho A) are evaluated
term by term with index/bit arithmetic, never materializing A as a dense
matrix; each string contributes sum_j phi_j rho[j, j ^ flip_mask] where
phi_j collects the Y/Z phases of P acting on basis state |j>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, PauliParseError

_PAULI_LETTERS = ("X", "Y", "Z")
EIG_QUBIT_CAP = 14


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis; identity on unlisted qubits."""

    ops: tuple[tuple[int, str], ...]  # sorted (qubit, letter) pairs

    def __init__(self, ops):
        if isinstance(ops, dict):
            items = sorted(ops.items())
        else:
            items = sorted(tuple(p) for p in ops)
        qubits = [q for q, _ in items]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate qubit in Pauli string: {items}")
        for q, letter in items:
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
            if letter not in _PAULI_LETTERS:
                raise ValueError(f"unknown Pauli letter {letter!r}")
        object.__setattr__(self, "ops", tuple(items))

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.ops)

    def is_identity(self) -> bool:
        return not self.ops

    def max_qubit(self) -> int:
        return max((q for q, _ in self.ops), default=-1)

    def masks(self) -> tuple[int, int, int]:
        """(flip, y, z) bit masks: flip = X|Y qubits, y = Y qubits, z = Z qubits."""
        flip = y = z = 0
        for q, letter in self.ops:
            if letter in ("X", "Y"):
                flip |= 1 << q
            if letter == "Y":
                y |= 1 << q
            if letter == "Z":
                z |= 1 << q
        return flip, y, z

    def __str__(self) -> str:
        if not self.ops:
            return "I"
        return " ".join(f"{letter}{q}" for q, letter in self.ops)


@dataclass(frozen=True)
class PauliSum:
    """Real-weighted sum of Pauli strings on a fixed qubit register."""

    terms: tuple[tuple[float, PauliString], ...]
    n_qubits: int

    def __init__(self, terms, n_qubits):
        terms = tuple((float(c), p) for c, p in terms)
        for c, p in terms:
            if not np.isfinite(c):
                raise ValueError(f"non-finite coefficient {c}")
            if p.max_qubit() >= n_qubits:
                raise ValueError(
                    f"string {p} exceeds declared qubit count {n_qubits}"
                )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "n_qubits", int(n_qubits))

    def __len__(self) -> int:
        return len(self.terms)


def _parity(values: np.ndarray) -> np.ndarray:
    """Parity of the popcount of each entry, as 0/1."""
    return np.bitwise_count(values.astype(np.uint64)) & 1


def _string_phases(ps: PauliString, indices: np.ndarray) -> np.ndarray:
    """Phase phi_j with P|j> = phi_j |j ^ flip>, vectorized over j."""
    flip, ymask, zmask, = ps.masks()
    n_y = bin(ymask).count("1")
    signs = 1.0 - 2.0 * _parity(indices & (ymask | zmask))
    return (1j**n_y) * signs


def expectation(rho, a: PauliSum) -> float:
    """Tr(rho A), term by term; asserts the imaginary part is negligible."""
    if rho.n_qubits != a.n_qubits:
        raise ValueError(
            f"qubit-count mismatch: state has {rho.n_qubits}, observable {a.n_qubits}"
        )
    dim = 2**a.n_qubits
    idx = np.arange(dim)
    total = 0.0 + 0.0j
    for coeff, ps in a.terms:
        flip, _, _ = ps.masks()
        phases = _string_phases(ps, idx)
        total += coeff * np.sum(phases * rho.data[idx, idx ^ flip])
    if abs(total.imag) > 1e-9:
        raise ValueError(f"expectation has imaginary part {total.imag:g}")
    return float(total.real)


def dense_matrix(a: PauliSum) -> np.ndarray:
    """Dense 2^n x 2^n Hermitian matrix of the sum (oracle-scale only)."""
    if a.n_qubits > EIG_QUBIT_CAP:
        raise CapacityError(f"{a.n_qubits} qubits exceeds cap {EIG_QUBIT_CAP}")
    dim = 2**a.n_qubits
    idx = np.arange(dim)
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, ps in a.terms:
        flip, _, _ = ps.masks()
        phases = _string_phases(ps, idx)
        out[idx ^ flip, idx] += coeff * phases
    return out


def exact_ground_energy(h: PauliSum) -> float:
    """Smallest eigenvalue of the dense matrix of h."""
    return float(np.linalg.eigvalsh(dense_matrix(h))[0])


def _parse_token(token: str, line_no: int) -> tuple[int, str]:
    letter, idx = token[0].upper(), token[1:]
    if letter not in _PAULI_LETTERS or not idx.isdigit():
        raise PauliParseError(f"bad Pauli token {token!r}", line_no)
    return int(idx), letter


def parse_pauli_string(tokens, line_no=None) -> PauliString:
    if len(tokens) == 1 and tokens[0].upper() == "I":
        return PauliString(())
    pairs = []
    for token in tokens:
        if token.upper() == "I":
            raise PauliParseError(
                "bare 'I' must stand alone as the identity string", line_no
            )
        pairs.append(_parse_token(token, line_no))
    try:
        return PauliString(pairs)
    except ValueError as exc:
        raise PauliParseError(str(exc), line_no) from exc


def _content_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line_no, line


def parse_pauli_sum(text: str) -> PauliSum:
    """Parse the observable file format.

    First non-comment line: "qubits N".  Each following line:
    "<coeff> <P><idx> [<P><idx> ...]", with a bare "I" for the identity
    string; "#" starts a comment.
    """
    lines = _content_lines(text)
    try:
        line_no, header = next(lines)
    except StopIteration:
        raise PauliParseError("empty file") from None
    parts = header.split()
    if len(parts) != 2 or parts[0].lower() != "qubits" or not parts[1].isdigit():
        raise PauliParseError(f"expected 'qubits N' header, got {header!r}", line_no)
    n_qubits = int(parts[1])
    terms = []
    for line_no, line in lines:
        tokens = line.split()
        try:
            coeff = float(tokens[0])
        except ValueError:
            raise PauliParseError(f"bad coefficient {tokens[0]!r}", line_no) from None
        ps = parse_pauli_string(tokens[1:], line_no)
        if ps.max_qubit() >= n_qubits:
            raise PauliParseError(
                f"qubit index exceeds declared count {n_qubits}", line_no
            )
        terms.append((coeff, ps))
    return PauliSum(terms, n_qubits)


def format_pauli_sum(a: PauliSum) -> str:
    """Inverse of parse_pauli_sum; coefficients keep 17 significant digits."""
    lines = [f"qubits {a.n_qubits}"]
    for coeff, ps in a.terms:
        lines.append(f"{coeff:.17g} {ps}")
    return "\n".join(lines) + "\n"
