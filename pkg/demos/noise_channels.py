"""Walk through the bundled noise channels against their closed forms.

Each channel has a textbook solution for a single qubit, which makes a
handy sanity check before trusting the integrator on real circuits:

    amplitude damping   rho_11(t) = rho_11(0) exp(-gamma_1 t)
    dephasing           rho_01(t) = rho_01(0) exp(-gamma_2 t / 2)
    thermal             rho_11(inf) = n_th / (2 n_th + 1)

The last section doubles the RK4 substep count and watches the error
drop by ~16x, the signature of a fourth-order integrator.
"""

import math

import numpy as np

import qemsim as q

# --- amplitude damping -----------------------------------------------------

gamma1, t = 0.25, 4.0
rho = q.new_pure_ground(1)
rho = q.apply_gate(rho, q.BoundGate("X", (0,)))  # start in |1>
model = q.NoiseModel((q.LindbladTerm("amplitude_damping", (0,), gamma1),))
out = q.evolve(rho, model, q.PropagatorConfig(tau=t, substeps=256))
print("amplitude damping")
print(f"  simulated rho_11 = {out.data[1, 1].real:.10f}")
print(f"  exp(-gamma t)    = {math.exp(-gamma1 * t):.10f}")

# --- dephasing -------------------------------------------------------------

gamma2 = 0.4
rho = q.apply_gate(q.new_pure_ground(1), q.BoundGate("H", (0,)))  # |+>
model = q.NoiseModel((q.LindbladTerm("dephasing", (0,), gamma2),))
out = q.evolve(rho, model, q.PropagatorConfig(tau=t, substeps=256))
print("dephasing")
print(f"  simulated rho_01     = {out.data[0, 1].real:.10f}")
print(f"  exp(-gamma t / 2)/2  = {0.5 * math.exp(-0.5 * gamma2 * t):.10f}")
print(f"  population rho_11    = {out.data[1, 1].real:.10f}  (unchanged)")

# --- thermal ---------------------------------------------------------------

n_th = 0.5
model = q.NoiseModel((q.LindbladTerm("thermal", (0,), 0.5, n_th=n_th),))
out = q.evolve(q.new_pure_ground(1), model, q.PropagatorConfig(tau=60.0, substeps=960))
print("thermal steady state")
print(f"  simulated rho_11   = {out.data[1, 1].real:.10f}")
print(f"  n_th/(2 n_th + 1)  = {n_th / (2 * n_th + 1):.10f}")

# --- integrator order ------------------------------------------------------

gamma = 0.8
exact = math.exp(-gamma)
model = q.NoiseModel((q.LindbladTerm("amplitude_damping", (0,), gamma),))
print("RK4 convergence (error vs substeps, ratio should approach 16)")
prev = None
for substeps in (2, 4, 8, 16):
    rho = q.apply_gate(q.new_pure_ground(1), q.BoundGate("X", (0,)))
    out = q.evolve(rho, model, q.PropagatorConfig(substeps=substeps))
    err = abs(out.data[1, 1].real - exact)
    ratio = "" if prev is None else f"  ratio {prev / err:6.2f}"
    print(f"  substeps {substeps:3d}  error {err:.3e}{ratio}")
    prev = err
