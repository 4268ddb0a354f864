#!/usr/bin/env python3
"""Generate the bundled H2/STO-3G data files (run once, offline).

Builds the qubit Hamiltonian and UCCSD-style generator list for H2 at
bond length 0.74 Angstrom from first principles:

  1. STO-3G integrals over two 1s contracted Gaussians (closed forms for
     s-type primitives: overlap, kinetic, nuclear attraction, ERIs via
     the Boys F0 function).
  2. Symmetry-determined RHF molecular orbitals (gerade/ungerade), MO
     integral transformation.
  3. Second-quantized Hamiltonian assembled as a dense 16x16 matrix in
     the qubit occupation basis (Jordan-Wigner lowering operators with
     little-endian qubit order; spin-orbital 2p+s on qubit 2p+s, alpha
     first).
  4. Numeric Pauli decomposition c_P = Tr(P H) / 16.
  5. UCCSD singles/doubles generators (anti-Hermitian K = T - T^dag),
     Pauli-decomposed the same way; each excitation's strings mutually
     commute, so exp(theta K) is an exact product of single-string
     exponentials exp(-i * (prefactor * theta) / 2 * P) with
     prefactor = 2 c.

The script cross-checks Hartree-Fock and FCI energies against the
literature and verifies the product form against a dense matrix
exponential before writing anything.
"""

import itertools
import sys
from pathlib import Path

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize
from scipy.special import erf

BOHR_PER_ANGSTROM = 1.0 / 0.529177210903
BOND_ANGSTROM = 0.74

# STO-3G hydrogen 1s: exponents and contraction coefficients
# (coefficients refer to normalized primitives)
ALPHAS = np.array([3.42525091, 0.62391373, 0.16885540])
COEFFS = np.array([0.15432897, 0.53532814, 0.44463454])

I2 = np.eye(2, dtype=complex)
SIGMA = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
Z2 = PAULI["Z"]


def boys_f0(t):
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * np.sqrt(np.pi / t) * erf(np.sqrt(t))


def ao_integrals(r_sep):
    """Overlap, core Hamiltonian, and ERI tensor for the two-AO basis."""
    centers = [0.0, r_sep]
    norms = (2.0 * ALPHAS / np.pi) ** 0.75
    s = np.zeros((2, 2))
    t = np.zeros((2, 2))
    v = np.zeros((2, 2))
    for i, j in itertools.product(range(2), repeat=2):
        for (a, da), (b, db) in itertools.product(zip(ALPHAS, COEFFS * norms), repeat=2):
            p = a + b
            ab = centers[i] - centers[j]
            pre = np.exp(-a * b / p * ab * ab)
            pcen = (a * centers[i] + b * centers[j]) / p
            s[i, j] += da * db * pre * (np.pi / p) ** 1.5
            t[i, j] += (
                da
                * db
                * pre
                * (a * b / p)
                * (3.0 - 2.0 * a * b / p * ab * ab)
                * (np.pi / p) ** 1.5
            )
            for rc in centers:  # both nuclei, Z = 1
                v[i, j] += (
                    -da
                    * db
                    * (2.0 * np.pi / p)
                    * pre
                    * boys_f0(p * (pcen - rc) ** 2)
                )
    eri = np.zeros((2, 2, 2, 2))
    prim = list(zip(ALPHAS, COEFFS * norms))
    for i, j, k, l in itertools.product(range(2), repeat=4):
        for (a, da), (b, db) in itertools.product(prim, repeat=2):
            p = a + b
            ab = centers[i] - centers[j]
            pcen = (a * centers[i] + b * centers[j]) / p
            pre_p = np.exp(-a * b / p * ab * ab)
            for (c, dc), (d, dd) in itertools.product(prim, repeat=2):
                q = c + d
                cd = centers[k] - centers[l]
                qcen = (c * centers[k] + d * centers[l]) / q
                pre_q = np.exp(-c * d / q * cd * cd)
                eri[i, j, k, l] += (
                    da
                    * db
                    * dc
                    * dd
                    * 2.0
                    * np.pi**2.5
                    / (p * q * np.sqrt(p + q))
                    * pre_p
                    * pre_q
                    * boys_f0(p * q / (p + q) * (pcen - qcen) ** 2)
                )
    return s, t + v, eri


def mo_integrals(r_sep):
    """Symmetry-adapted MO integrals (g, u) and the nuclear repulsion."""
    s, hcore, eri = ao_integrals(r_sep)
    s12 = s[0, 1]
    cg = 1.0 / np.sqrt(2.0 * (1.0 + s12))
    cu = 1.0 / np.sqrt(2.0 * (1.0 - s12))
    c = np.array([[cg, cu], [cg, -cu]])
    h_mo = c.T @ hcore @ c
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", c, c, c, c, eri)
    e_nuc = 1.0 / r_sep
    return h_mo, eri_mo, e_nuc


def embed_op(op, qubit, n=4):
    full = np.array([[1.0 + 0j]])
    for j in range(n - 1, -1, -1):
        full = np.kron(full, op if j == qubit else I2)
    return full


def lowering(p, n=4):
    """Jordan-Wigner a_p: Z string on qubits < p, then sigma on p."""
    full = np.eye(2**n, dtype=complex)
    for j in range(p):
        full = full @ embed_op(Z2, j, n)
    return full @ embed_op(SIGMA, p, n)


def build_hamiltonian(h_mo, eri_mo, e_nuc, n_spatial=2):
    n_so = 2 * n_spatial
    a = [lowering(p, n_so) for p in range(n_so)]
    ad = [m.conj().T for m in a]
    dim = 2**n_so
    h = e_nuc * np.eye(dim, dtype=complex)
    for p, q in itertools.product(range(n_spatial), repeat=2):
        for s in range(2):
            h += h_mo[p, q] * ad[2 * p + s] @ a[2 * q + s]
    for p, q, r, t in itertools.product(range(n_spatial), repeat=4):
        for s1, s2 in itertools.product(range(2), repeat=2):
            h += (
                0.5
                * eri_mo[p, q, r, t]
                * ad[2 * p + s1]
                @ ad[2 * r + s2]
                @ a[2 * t + s2]
                @ a[2 * q + s1]
            )
    return h


def pauli_decompose(mat, n=4, tol=1e-10):
    dim = 2**n
    terms = []
    for letters in itertools.product("IXYZ", repeat=n):
        # letters[k] acts on qubit k (little-endian kron below)
        full = np.array([[1.0 + 0j]])
        for k in range(n - 1, -1, -1):
            full = np.kron(full, PAULI[letters[k]])
        coeff = np.trace(full @ mat) / dim
        if abs(coeff) > tol:
            if abs(coeff.imag) > 1e-12:
                raise RuntimeError(f"non-real coefficient {coeff} for {letters}")
            label = " ".join(
                f"{letter}{k}" for k, letter in enumerate(letters) if letter != "I"
            )
            terms.append((coeff.real, label or "I", full))
    return terms


def excitation_ops():
    """UCCSD K = T - T^dag for H2: two spin-conserving singles, one double."""
    a = [lowering(p) for p in range(4)]
    ad = [m.conj().T for m in a]
    single_a = ad[2] @ a[0]
    single_b = ad[3] @ a[1]
    double = ad[2] @ ad[3] @ a[1] @ a[0]
    return [m - m.conj().T for m in (single_a, single_b, double)]


def main():
    r_sep = BOND_ANGSTROM * BOHR_PER_ANGSTROM
    h_mo, eri_mo, e_nuc = mo_integrals(r_sep)
    e_hf = 2.0 * h_mo[0, 0] + eri_mo[0, 0, 0, 0] + e_nuc
    print(f"R = {r_sep:.8f} bohr, E_nuc = {e_nuc:.8f} Ha")
    print(f"E_HF  = {e_hf:.8f} Ha (expect about -1.1167)")

    h = build_hamiltonian(h_mo, eri_mo, e_nuc)
    evals = np.linalg.eigvalsh(h)
    e_fci = evals[0]
    print(f"E_FCI = {e_fci:.8f} Ha (expect about -1.1373)")
    assert -1.125 < e_hf < -1.108, "HF energy off"
    assert -1.145 < e_fci < -1.130, "FCI energy off"

    # HF determinant: qubits 0,1 occupied -> basis index 3
    hf_state = np.zeros(16)
    hf_state[3] = 1.0
    e_hf_check = (hf_state @ h @ hf_state).real
    assert abs(e_hf_check - e_hf) < 1e-10, (e_hf_check, e_hf)

    terms = pauli_decompose(h)
    recon = sum(c * full for c, _, full in terms)
    assert np.max(np.abs(recon - h)) < 1e-10
    print(f"Hamiltonian: {len(terms)} Pauli terms")

    # UCCSD generators, checked against the dense matrix exponential
    ks = excitation_ops()
    gen_lines = []
    rng = np.random.default_rng(7)
    for idx, k in enumerate(ks):
        comps = pauli_decompose(1j * k)
        mats = [full for _, _, full in comps]
        for m1, m2 in itertools.combinations(mats, 2):
            assert np.max(np.abs(m1 @ m2 - m2 @ m1)) < 1e-12, "strings must commute"
        for theta in rng.uniform(-2, 2, size=3):
            exact = expm(theta * k)
            prod = np.eye(16, dtype=complex)
            for c, _, full in comps:
                prod = prod @ expm(-1j * theta * c * full)
            assert np.max(np.abs(exact - prod)) < 1e-10
        for c, label, _ in comps:
            gen_lines.append((idx, 2.0 * c, label))
    print(f"Generators: {len(gen_lines)} Pauli exponentials, 3 parameters")

    # End-to-end: minimizing <HF| prod exp(theta K)^dag H ... over 3 params
    def energy(theta):
        psi = hf_state.astype(complex)
        for t, k in zip(theta, ks):
            psi = expm(t * k) @ psi
        return (psi.conj() @ h @ psi).real

    res = minimize(energy, np.zeros(3), method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
    print(f"UCCSD minimum = {res.fun:.10f} Ha (FCI {e_fci:.10f})")
    assert abs(res.fun - e_fci) < 1e-7, "UCCSD should be exact for H2"

    data_dir = Path(__file__).resolve().parents[1] / "src" / "qemsim" / "data"
    data_dir.mkdir(parents=True, exist_ok=True)

    ham_path = data_dir / "h2_sto3g_0.74.txt"
    with open(ham_path, "w") as fh:
        fh.write("# H2, STO-3G, bond length 0.74 A, Jordan-Wigner qubit Hamiltonian\n")
        fh.write("# spin orbital 2p+s on qubit 2p+s (alpha first); energies in Hartree\n")
        fh.write("qubits 4\n")
        for c, label, _ in terms:
            fh.write(f"{c:.17g} {label}\n")
    print(f"wrote {ham_path}")

    gen_path = data_dir / "h2_uccsd_0.74.txt"
    with open(gen_path, "w") as fh:
        fh.write("# H2 UCCSD generator list: singles (params 0,1), double (param 2)\n")
        fh.write("# reference state |0011> prepared by the X gates below\n")
        fh.write("qubits 4\n")
        fh.write("params 3\n")
        fh.write("x 0\n")
        fh.write("x 1\n")
        for idx, pref, label in gen_lines:
            fh.write(f"{idx} {pref:.17g} {label}\n")
    print(f"wrote {gen_path}")
    print("reference values:")
    print(f"  E_HF  = {e_hf:.12f}")
    print(f"  E_FCI = {e_fci:.12f}")


if __name__ == "__main__":
    sys.exit(main())
