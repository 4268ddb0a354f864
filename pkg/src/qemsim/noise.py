"""Lindblad noise terms and master-equation propagation between gates.

Four dissipator families are supported: amplitude damping D[sigma],
dephasing D[sigma^dag sigma], thermal (competing decay/excitation with
occupation n_th), and a two-qubit correlated excitation-exchange pair.
The inter-gate propagator exp(tau * L) is approximated by classic RK4
with a configurable number of substeps; the integrator itself must
preserve the trace (no renormalization), which doubles as a correctness
signal.

For small registers the right-hand side is compiled to a dense
superoperator acting on vec(rho); one RK4 substep of the linear master
equation is then exactly the degree-4 Taylor polynomial of h*L, so the
whole interval propagator is precomputed as that step matrix raised to
the substep count.  Larger registers fall back to per-term tensor
kernels, O(4^n) per term per substep.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import IntegrationError
from .state import DensityMatrix, apply_gate, apply_matrix_left, apply_matrix_right, embed

KINDS = ("amplitude_damping", "dephasing", "thermal", "correlated")

# Dense superoperators are 16^n; cap at n=5 (16 MiB) to bound memory.
SUPEROP_MAX_QUBITS = 5
TRACE_DRIFT_LIMIT = 1e-6

_SIGMA = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
_SIGMA_DAG = _SIGMA.conj().T
_NUMBER = _SIGMA_DAG @ _SIGMA


@dataclass(frozen=True)
class LindbladTerm:
    kind: str
    qubits: tuple[int, ...]
    rate: float
    n_th: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        want = 2 if self.kind == "correlated" else 1
        if len(self.qubits) != want or len(set(self.qubits)) != want:
            raise ValueError(
                f"{self.kind} needs {want} distinct qubit(s), got {self.qubits}"
            )
        if self.rate < 0:
            raise ValueError(f"negative rate {self.rate}")
        if (self.n_th is not None) != (self.kind == "thermal"):
            raise ValueError("n_th is required for thermal terms and only those")
        if self.n_th is not None and self.n_th < 0:
            raise ValueError(f"negative n_th {self.n_th}")

    def collapse_ops(self) -> list[tuple[float, np.ndarray, tuple[int, ...]]]:
        """(rate, small collapse matrix, qubits) pairs for this term."""
        if self.kind == "amplitude_damping":
            return [(self.rate, _SIGMA, self.qubits)]
        if self.kind == "dephasing":
            return [(self.rate, _NUMBER, self.qubits)]
        if self.kind == "thermal":
            return [
                (self.rate * (self.n_th + 1.0), _SIGMA, self.qubits),
                (self.rate * self.n_th, _SIGMA_DAG, self.qubits),
            ]
        # correlated: sigma_1^dag sigma_2 and sigma_1 sigma_2^dag,
        # qubits[0] is the most-significant index of the 4x4 matrix
        return [
            (self.rate, np.kron(_SIGMA_DAG, _SIGMA), self.qubits),
            (self.rate, np.kron(_SIGMA, _SIGMA_DAG), self.qubits),
        ]


@dataclass(frozen=True)
class NoiseModel:
    terms: tuple[LindbladTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def max_qubit(self) -> int:
        return max((max(t.qubits) for t in self.terms), default=-1)

    def validate_for(self, n_qubits: int) -> None:
        if self.max_qubit() >= n_qubits:
            raise ValueError(
                f"noise model touches qubit {self.max_qubit()}, "
                f"state has {n_qubits} qubits"
            )


@dataclass(frozen=True)
class PropagatorConfig:
    tau: float = 1.0
    substeps: int = 64

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.substeps < 1:
            raise ValueError(f"substeps must be >= 1, got {self.substeps}")


def remove_group(model: NoiseModel, qubit: int) -> NoiseModel:
    """Copy of the model with every term touching `qubit` deleted."""
    return NoiseModel(tuple(t for t in model.terms if qubit not in t.qubits))


def remove_terms(model: NoiseModel, indices) -> NoiseModel:
    drop = set(indices)
    return NoiseModel(
        tuple(t for i, t in enumerate(model.terms) if i not in drop)
    )


def scale_model(model: NoiseModel, factor: float) -> NoiseModel:
    if factor < 0:
        raise ValueError(f"scale factor must be >= 0, got {factor}")
    return NoiseModel(tuple(replace(t, rate=t.rate * factor) for t in model.terms))


def scale_terms(model: NoiseModel, indices, factor: float) -> NoiseModel:
    if factor < 0:
        raise ValueError(f"scale factor must be >= 0, got {factor}")
    chosen = set(indices)
    return NoiseModel(
        tuple(
            replace(t, rate=t.rate * factor) if i in chosen else t
            for i, t in enumerate(model.terms)
        )
    )


def dissipator(rho_data: np.ndarray, collapse: np.ndarray, qubits, n_qubits: int) -> np.ndarray:
    """D[C](rho) = C rho C^dag - (C^dag C rho + rho C^dag C) / 2."""
    c = np.asarray(collapse, dtype=complex)
    sandwich = apply_matrix_right(
        apply_matrix_left(rho_data, c, qubits, n_qubits), c.conj().T, qubits, n_qubits
    )
    cdc = c.conj().T @ c
    anti = apply_matrix_left(rho_data, cdc, qubits, n_qubits) + apply_matrix_right(
        rho_data, cdc, qubits, n_qubits
    )
    return sandwich - 0.5 * anti


def lindblad_rhs(rho_data: np.ndarray, model: NoiseModel, n_qubits: int) -> np.ndarray:
    """Sum of all dissipator contributions; traceless by construction."""
    out = np.zeros_like(rho_data)
    for term in model.terms:
        for rate, c, qubits in term.collapse_ops():
            if rate != 0.0:
                out += rate * dissipator(rho_data, c, qubits, n_qubits)
    return out


def build_liouvillian(model: NoiseModel, n_qubits: int) -> np.ndarray:
    """Dense superoperator L with vec(drho/dt) = L vec(rho), row-major vec."""
    dim = 2**n_qubits
    eye = np.eye(dim, dtype=complex)
    lmat = np.zeros((dim * dim, dim * dim), dtype=complex)
    for term in model.terms:
        for rate, c_small, qubits in term.collapse_ops():
            if rate == 0.0:
                continue
            c = embed(c_small, qubits, n_qubits)
            cdc = c.conj().T @ c
            lmat += rate * (
                np.kron(c, c.conj())
                - 0.5 * (np.kron(cdc, eye) + np.kron(eye, cdc.T))
            )
    return lmat


def _rk4_step_matrix(lmat: np.ndarray, h: float) -> np.ndarray:
    """One classic RK4 substep of the linear ODE, as a matrix.

    For v' = L v the RK4 update is exactly the degree-4 Taylor polynomial
    in h*L.
    """
    dim = lmat.shape[0]
    hl = h * lmat
    hl2 = hl @ hl
    hl3 = hl2 @ hl
    return np.eye(dim, dtype=complex) + hl + hl2 / 2.0 + hl3 / 6.0 + (hl3 @ hl) / 24.0


class IntervalPropagator:
    """Reusable approximation of exp(tau * L) for a fixed model and config."""

    def __init__(self, model: NoiseModel, n_qubits: int, cfg: PropagatorConfig):
        self.model = model
        self.n_qubits = n_qubits
        self.cfg = cfg
        self.trivial = all(
            rate == 0.0 for t in model.terms for rate, _, _ in t.collapse_ops()
        )
        self._vmat = None
        if not self.trivial and n_qubits <= SUPEROP_MAX_QUBITS:
            lmat = build_liouvillian(model, n_qubits)
            step = _rk4_step_matrix(lmat, cfg.tau / cfg.substeps)
            self._vmat = np.linalg.matrix_power(step, cfg.substeps)

    def propagate(self, rho: DensityMatrix) -> DensityMatrix:
        if self.trivial:
            return rho
        if self._vmat is not None:
            vec = self._vmat @ rho.data.reshape(-1)
            out = DensityMatrix(rho.n_qubits, vec.reshape(rho.data.shape))
        else:
            h = self.cfg.tau / self.cfg.substeps
            data = rho.data
            for _ in range(self.cfg.substeps):
                k1 = lindblad_rhs(data, self.model, self.n_qubits)
                k2 = lindblad_rhs(data + 0.5 * h * k1, self.model, self.n_qubits)
                k3 = lindblad_rhs(data + 0.5 * h * k2, self.model, self.n_qubits)
                k4 = lindblad_rhs(data + h * k3, self.model, self.n_qubits)
                data = data + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out = DensityMatrix(rho.n_qubits, data)
        drift = abs(out.trace() - 1.0)
        if drift > TRACE_DRIFT_LIMIT:
            raise IntegrationError(
                f"trace drifted by {drift:.3g} over one interval; "
                f"increase substeps (currently {self.cfg.substeps})"
            )
        return out


def evolve(rho: DensityMatrix, model: NoiseModel, cfg: PropagatorConfig) -> DensityMatrix:
    """rho(t + tau) = exp(tau L) rho, via RK4 with cfg.substeps steps."""
    model.validate_for(rho.n_qubits)
    return IntervalPropagator(model, rho.n_qubits, cfg).propagate(rho)


def run_noisy_circuit(
    rho0: DensityMatrix,
    circuit,
    model: NoiseModel,
    cfg: PropagatorConfig | None = None,
) -> DensityMatrix:
    """Alternate gate jumps with inter-gate Lindblad evolution.

    Gate 1, evolve tau, gate 2, ..., gate G; there is no evolution after
    the final gate, so total noisy time is (G - 1) * tau.  With an empty
    model this reduces to plain sequential gate application.
    """
    if cfg is None:
        cfg = PropagatorConfig()
    if circuit.n_qubits != rho0.n_qubits:
        raise ValueError(
            f"circuit has {circuit.n_qubits} qubits, state has {rho0.n_qubits}"
        )
    model.validate_for(rho0.n_qubits)
    propagator = IntervalPropagator(model, rho0.n_qubits, cfg)
    rho = rho0.copy()
    last = len(circuit.gates) - 1
    for i, gate in enumerate(circuit.gates):
        rho = apply_gate(rho, gate)
        if i != last:
            rho = propagator.propagate(rho)
    return rho


def parse_noise_terms(entries) -> NoiseModel:
    """Build a model from JSON-style dicts: {kind, qubits, rate, n_th?}."""
    terms = []
    for entry in entries:
        terms.append(
            LindbladTerm(
                kind=entry["kind"],
                qubits=tuple(entry["qubits"]),
                rate=float(entry["rate"]),
                n_th=float(entry["n_th"]) if "n_th" in entry else None,
            )
        )
    return NoiseModel(tuple(terms))


def build_template_model(
    template: str, n_qubits: int, rate: float, n_th: float = 0.5
) -> NoiseModel:
    """Homogeneous-rate models matching the standard sweep templates.

    Correlated terms use ring pairing (q, (q+1) mod n); explicit term
    lists override this when finer control is needed.
    """
    terms: list[LindbladTerm] = []
    if template in ("gamma1", "gamma1_gamma2"):
        terms += [
            LindbladTerm("amplitude_damping", (q,), rate) for q in range(n_qubits)
        ]
    if template in ("gamma2", "gamma1_gamma2"):
        terms += [LindbladTerm("dephasing", (q,), rate) for q in range(n_qubits)]
    if template == "thermal":
        terms += [
            LindbladTerm("thermal", (q,), rate, n_th=n_th) for q in range(n_qubits)
        ]
    if template == "correlated":
        if n_qubits < 2:
            raise ValueError("correlated template needs at least 2 qubits")
        terms += [
            LindbladTerm("correlated", (q, (q + 1) % n_qubits), rate)
            for q in range(n_qubits)
        ]
    if not terms:
        raise ValueError(f"unknown noise template {template!r}")
    return NoiseModel(tuple(terms))
