"""Compile a small Pauli sum into a block encoding and look inside it.

SELECT applies the i-th Pauli string when the control register holds |i>.
Here it is built column by column from multiplexed single-qubit gates, so its
CX count is bounded by 2^k (2n+1) - n - 2 instead of growing with k controls
per term.
"""

import numpy as np

from lcu_taylor import (PauliSum, export_qasm, multiplexor_cost, synth_lcu, synth_select, to_dense,
                        unitary_of)
from lcu_taylor.circuit import lower_u2x2
from lcu_taylor.sim import lcu_success_probability, postselect_zero, run
from lcu_taylor.synth import lcu_register_sizes, select_matrix

op = PauliSum({"XZI": 0.5, "ZZY": -0.25j, "IYX": 0.3, "III": 1.0, "YIZ": 0.2})
k, n = lcu_register_sizes(op)
print(f"operator: {len(op)} terms on {n} qubits -> {k} control qubits")

select = synth_select(op)
err = np.abs(unitary_of(select) - select_matrix(op)).max()
print(f"SELECT: {select.two_qubit_count()} cx (bound {multiplexor_cost(k, n)}), "
      f"max deviation from block-diagonal target {err:.1e}")

# The full LCU circuit is PREPARE, SELECT, PREPARE^dagger. With the ancillas
# post-selected on |0...0>, the system register holds op|psi> / ||op||_1.
lcu = synth_lcu(op)
rng = np.random.default_rng(3)
psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
psi /= np.linalg.norm(psi)
p, out = postselect_zero(run(lcu, np.kron(np.eye(1 << k)[0], psi)), range(k))
print(f"success probability: circuit {p:.6f}, closed form {lcu_success_probability(op, psi):.6f}")

phi = to_dense(op) @ psi
phi /= np.linalg.norm(phi)
# ancillas come first, so the system amplitudes are the leading 2^n entries
system = out.amplitudes[: 1 << n]
print(f"post-selected state fidelity: {abs(np.vdot(phi, system)) ** 2:.12f}")

qasm = export_qasm(lower_u2x2(lcu))
print(f"OpenQASM export: {len(qasm.splitlines())} lines, first gates:")
print("\n".join(qasm.splitlines()[:8]))
