"""End-to-end H2 run: VQE, then individual-error-reduction at several rates.

Uses the bundled STO-3G Hamiltonian (4 qubits, bond length 0.74 A) and the
bundled UCCSD generator file.  The parameters are optimized once without
noise, then the same circuit is re-run under increasing gamma_1 = gamma_2
noise.  For each rate the corrected estimate

    A_tilde = <A> - sum_i w_i (<A> - <A_i>)

combines the all-noise run with one run per removal group (per qubit).
The table shows how much further the corrected energy stays inside
chemical accuracy (1.6 mHa) than the raw noisy energy does.
"""

import numpy as np

import qemsim as q
from qemsim.experiments import CHEMICAL_ACCURACY, sweep, threshold_ratio

hamiltonian = q.parse_pauli_sum(q.bundled_text("h2"))
spec, n_qubits = q.parse_ansatz_file(q.bundled_text("h2_uccsd"))
ansatz = q.build_ansatz(spec, n_qubits)
print(f"H2 / STO-3G: {n_qubits} qubits, {len(hamiltonian)} Hamiltonian terms, "
      f"{len(ansatz.gates)} gates, {ansatz.n_params} parameters")

exact = q.exact_ground_energy(hamiltonian)
result = q.solve_vqe(
    q.VqeProblem(hamiltonian, ansatz), q.OptimizerSettings(max_evals=2000, seed=3)
)
print(f"exact ground energy  {exact:.8f} Ha")
print(f"VQE energy           {result.energy:.8f} Ha "
      f"({result.evals} evaluations, converged={result.converged})")

circuit = q.bind(ansatz, result.theta_opt)

# single-rate report, with the per-group removed-run values
model = q.build_template_model("gamma1_gamma2", n_qubits, 1e-3)
report = q.run_mitigation(circuit, model, hamiltonian)
print(f"\nat rate 1e-3: noisy {report.a_noisy:.6f}, "
      f"corrected {report.a_corrected:.6f}, ideal {report.a_ideal:.6f}")
for label, value, weight in report.a_removed:
    print(f"  removed {label}: <A_i> = {value:.6f}  (weight {weight})")

# rate sweep and threshold comparison
rates = np.logspace(-6, -2.5, 8)
rows = sweep(circuit, hamiltonian, "gamma1_gamma2", rates)
print(f"\n{'rate':>10} {'raw error':>12} {'corrected':>12}")
for row in rows:
    raw = abs(row["a_noisy"] - row["a_ideal"])
    print(f"{row['rate']:10.2e} {raw:12.3e} {row['residual']:12.3e}")
ratio = threshold_ratio(rows)
print(f"\ncorrection tolerates {ratio:.1f}x larger rates before the error "
      f"crosses {CHEMICAL_ACCURACY * 1e3:.1f} mHa")
