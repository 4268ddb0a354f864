"""Sweep, scaling-ladder, and self-check machinery shared by the CLI and tests."""

from __future__ import annotations

import math
from importlib import resources

import numpy as np

from .circuit import BoundCircuit, Circuit, bind, compile_pauli_exponential
from .mitigation import run_mitigation
from .noise import (
    LindbladTerm,
    NoiseModel,
    PropagatorConfig,
    build_template_model,
    evolve,
)
from .paulis import PauliString, PauliSum, expectation
from .state import DensityMatrix, embed, new_pure_ground

CHEMICAL_ACCURACY = 1.6e-3  # Hartree

BUNDLED_FILES = {
    "h2": "h2_sto3g_0.74.txt",
    "h2_uccsd": "h2_uccsd_0.74.txt",
}


def bundled_text(name: str) -> str:
    """Contents of a bundled data file, by alias or file name."""
    fname = BUNDLED_FILES.get(name, name)
    return (resources.files("qemsim") / "data" / fname).read_text()


def sweep(
    circuit: BoundCircuit,
    observable: PauliSum,
    template: str,
    rates,
    cfg: PropagatorConfig | None = None,
    n_th: float = 0.5,
    workers: int = 1,
) -> list[dict]:
    """One mitigation run per rate; rows mirror the output CSV columns."""
    if cfg is None:
        cfg = PropagatorConfig()
    rows = []
    for rate in rates:
        model = build_template_model(template, circuit.n_qubits, float(rate), n_th)
        report = run_mitigation(circuit, model, observable, cfg, workers=workers)
        rows.append(
            {
                "rate": float(rate),
                "a_noisy": report.a_noisy,
                "a_ideal": report.a_ideal,
                "a_corrected": report.a_corrected,
                "correction_magnitude": report.correction_magnitude,
                "residual": report.residual,
            }
        )
    return rows


def uncorrected_error(row: dict) -> float:
    return abs(row["a_noisy"] - row["a_ideal"])


def crossing_rate(rates, errors, threshold: float = CHEMICAL_ACCURACY) -> float | None:
    """Rate at which the error first crosses the threshold, interpolated
    log-log between the bracketing grid points.  None if never crossed."""
    rates = np.asarray(rates, dtype=float)
    errors = np.asarray(errors, dtype=float)
    for i in range(len(rates)):
        if errors[i] >= threshold:
            if i == 0 or errors[i - 1] <= 0:
                return float(rates[i])
            lr0, lr1 = math.log(rates[i - 1]), math.log(rates[i])
            le0, le1 = math.log(errors[i - 1]), math.log(errors[i])
            if le1 == le0:
                return float(rates[i])
            frac = (math.log(threshold) - le0) / (le1 - le0)
            return float(math.exp(lr0 + frac * (lr1 - lr0)))
    return None


def threshold_ratio(rows, threshold: float = CHEMICAL_ACCURACY) -> float | None:
    """Corrected-over-uncorrected ratio of threshold-crossing rates."""
    rates = [r["rate"] for r in rows]
    raw = crossing_rate(rates, [uncorrected_error(r) for r in rows], threshold)
    corr = crossing_rate(rates, [r["residual"] for r in rows], threshold)
    if raw is None or corr is None:
        return None
    return corr / raw


def scaling_ladder(
    circuit: BoundCircuit,
    model: NoiseModel,
    observable: PauliSum,
    tau0: float = 1.0,
    substeps: int = 64,
    n_points: int = 4,
    workers: int = 1,
) -> tuple[list[dict], float, float]:
    """Dyadic ladder tau0, tau0/2, ... with fitted log-log error slopes.

    The uncorrected error |<A> - <A_a>| should scale linearly in the
    interval length while the corrected residual drops quadratically
    (first-order cancellation).
    """
    rows = []
    for k in range(n_points):
        scale = 0.5**k
        cfg = PropagatorConfig(tau=tau0 * scale, substeps=substeps)
        report = run_mitigation(circuit, model, observable, cfg, workers=workers)
        rows.append(
            {
                "scale": scale,
                "tau": tau0 * scale,
                "uncorrected_error": abs(report.a_noisy - report.a_ideal),
                "corrected_error": report.residual,
            }
        )
    log_s = np.log([r["scale"] for r in rows])
    slope_raw = float(
        np.polyfit(log_s, np.log([r["uncorrected_error"] for r in rows]), 1)[0]
    )
    slope_corr = float(
        np.polyfit(log_s, np.log([r["corrected_error"] for r in rows]), 1)[0]
    )
    return rows, slope_raw, slope_corr


# ---------------------------------------------------------------------------
# Self-checks (the validate subcommand): closed-form channels, integrator
# order, compiled-unitary equivalence.


def _one_qubit_excited() -> DensityMatrix:
    rho = new_pure_ground(1)
    rho.data[:] = [[0, 0], [0, 1]]
    return rho


def _one_qubit_plus() -> DensityMatrix:
    rho = new_pure_ground(1)
    rho.data[:] = [[0.5, 0.5], [0.5, 0.5]]
    return rho


def check_amplitude_damping(
    gamma: float = 0.1, t: float = 5.0, substeps: int = 64
) -> tuple[bool, str]:
    """Excited population must follow exp(-gamma t)."""
    cfg = PropagatorConfig(tau=t, substeps=int(substeps * t))
    model = NoiseModel((LindbladTerm("amplitude_damping", (0,), gamma),))
    rho = evolve(_one_qubit_excited(), model, cfg)
    err = abs(rho.data[1, 1].real - math.exp(-gamma * t))
    return err < 1e-6, f"population error {err:.3g}"


def check_dephasing(
    gamma: float = 0.1, t: float = 5.0, substeps: int = 64
) -> tuple[bool, str]:
    """|+> coherence must follow exp(-gamma t / 2) / 2."""
    cfg = PropagatorConfig(tau=t, substeps=int(substeps * t))
    model = NoiseModel((LindbladTerm("dephasing", (0,), gamma),))
    rho = evolve(_one_qubit_plus(), model, cfg)
    err = abs(rho.data[0, 1] - 0.5 * math.exp(-0.5 * gamma * t))
    return err < 1e-6, f"coherence error {err:.3g}"


def check_thermal_steady_state(
    gamma: float = 0.5, n_th: float = 0.5, t: float = 60.0, substeps: int = 16
) -> tuple[bool, str]:
    """Long-time excited population must reach n_th / (2 n_th + 1)."""
    cfg = PropagatorConfig(tau=t, substeps=int(substeps * t))
    model = NoiseModel((LindbladTerm("thermal", (0,), gamma, n_th=n_th),))
    rho = evolve(new_pure_ground(1), model, cfg)
    target = n_th / (2.0 * n_th + 1.0)
    err = abs(rho.data[1, 1].real - target)
    return err < 1e-6, f"steady-state error {err:.3g}"


def check_rk4_convergence(
    gamma: float = 0.8, substeps: int = 2
) -> tuple[bool, str]:
    """Doubling substeps must shrink the closed-form error ~16x (> 8x)."""
    model = NoiseModel((LindbladTerm("amplitude_damping", (0,), gamma),))
    exact = math.exp(-gamma)

    def err(steps):
        cfg = PropagatorConfig(tau=1.0, substeps=steps)
        rho = evolve(_one_qubit_excited(), model, cfg)
        return abs(rho.data[1, 1].real - exact)

    e1, e2 = err(substeps), err(2 * substeps)
    if e2 == 0:
        return True, "fine-step error at machine precision"
    ratio = e1 / e2
    return ratio > 8.0, f"error ratio {ratio:.2f} (substeps {substeps} vs {2 * substeps})"


def dense_unitary(circuit: BoundCircuit) -> np.ndarray:
    """Dense matrix of a bound circuit (oracle scale only)."""
    dim = 2**circuit.n_qubits
    u = np.eye(dim, dtype=complex)
    for gate in circuit.gates:
        u = embed(gate.matrix(), gate.qubits, circuit.n_qubits) @ u
    return u


def _pauli_dense(ps: PauliString, n_qubits: int) -> np.ndarray:
    mats = {
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }
    out = np.eye(2**n_qubits, dtype=complex)
    for q, letter in ps.ops:
        out = out @ embed(mats[letter], (q,), n_qubits)
    return out


def check_compiled_exponentials(
    n_strings: int = 20, seed: int = 11, tol: float = 1e-10
) -> tuple[bool, str]:
    """Compiled exp(-i theta/2 P) vs the closed form cos - i sin P, n <= 3."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_strings):
        n = int(rng.integers(1, 4))
        n_ops = int(rng.integers(1, n + 1))
        qubits = rng.choice(n, size=n_ops, replace=False)
        ps = PauliString({int(q): "XYZ"[rng.integers(3)] for q in qubits})
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        gates = compile_pauli_exponential(ps, theta, n)
        compiled = dense_unitary(bind(Circuit(n, tuple(gates), 0), []))
        p_dense = _pauli_dense(ps, n)
        exact = math.cos(theta / 2) * np.eye(2**n) - 1j * math.sin(theta / 2) * p_dense
        worst = max(worst, float(np.max(np.abs(compiled - exact))))
    return worst < tol, f"worst deviation {worst:.3g} over {n_strings} strings"


def run_validation_suite(substeps: int = 64) -> list[tuple[str, bool, str]]:
    checks = [
        ("amplitude_damping_decay", check_amplitude_damping(substeps=substeps)),
        ("dephasing_coherence", check_dephasing(substeps=substeps)),
        ("thermal_steady_state", check_thermal_steady_state()),
        ("rk4_convergence_order", check_rk4_convergence()),
        ("compiled_pauli_exponentials", check_compiled_exponentials()),
    ]
    return [(name, ok, detail) for name, (ok, detail) in checks]
