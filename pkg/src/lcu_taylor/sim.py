"""Dense statevector simulation, post-selection and shot sampling."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .circuit import Circuit, GuardError, apply_gate
from .pauli import DimensionError, PauliSum, apply_to_state, to_dense
from .synth import lcu_register_sizes, synth_lcu, synth_state_prep

__all__ = [
    "MAX_SIM_QUBITS",
    "StateVector",
    "ShotResult",
    "VacuumResult",
    "run",
    "postselect_zero",
    "lcu_success_probability",
    "vacuum_test",
    "sample",
    "dense_expm_reference",
]

MAX_SIM_QUBITS = 24


class StateVector:
    """Normalised amplitudes; qubit 0 is the most significant index bit."""

    def __init__(self, amplitudes, normalize: bool = False):
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size == 0 or 1 << n != amps.size:
            raise DimensionError("state length must be a power of two")
        norm = np.linalg.norm(amps)
        if normalize:
            if norm == 0:
                raise ValueError("cannot normalise the zero vector")
            amps = amps / norm
        elif abs(norm - 1) > 1e-10:
            raise ValueError(f"state is not normalised (norm {norm})")
        self.amplitudes = amps
        self.n_qubits = n

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        return cls.basis(n_qubits, 0)

    @classmethod
    def basis(cls, n_qubits: int, index) -> "StateVector":
        if isinstance(index, str):
            index = int(index, 2)
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1
        return cls(amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(np.kron(self.amplitudes, other.amplitudes))

    def overlap(self, other) -> complex:
        return complex(np.vdot(self.amplitudes, np.asarray(getattr(other, "amplitudes", other))))

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits})"


def _amps(psi) -> np.ndarray:
    return np.asarray(getattr(psi, "amplitudes", psi), dtype=complex)


def run(circ: Circuit, psi=None) -> StateVector:
    """Apply the unitary circuit (global phase included) to ``psi`` (default |0>)."""
    n = circ.n_qubits
    if n > MAX_SIM_QUBITS:
        raise GuardError(f"{n} qubits exceeds the simulator limit {MAX_SIM_QUBITS}")
    if psi is None:
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1
    else:
        amps = _amps(psi)
        if amps.size != 1 << n:
            raise DimensionError(f"state has {amps.size} amplitudes, circuit acts on {n} qubits")
    tensor = amps.reshape((2,) * n) if n else amps.copy()
    for g in circ.gates:
        if g.kind == "measure":
            raise GuardError("run() only handles unitary circuits; use sample()")
        tensor = apply_gate(tensor, g, n)
    out = tensor.reshape(-1) * np.exp(1j * circ.global_phase)
    return StateVector(out, normalize=True)


def _zero_mask(n: int, register: Sequence[int]) -> np.ndarray:
    idx = np.arange(1 << n)
    mask = np.ones(1 << n, dtype=bool)
    for q in register:
        mask &= ((idx >> (n - 1 - q)) & 1) == 0
    return mask


def postselect_zero(psi, register: Sequence[int]):
    """Project ``register`` onto |0...0>.

    Returns ``(probability, state)``; ``state`` is the renormalised projected
    state on the full register, or ``None`` when the probability is zero.
    """
    amps = _amps(psi)
    n = amps.size.bit_length() - 1
    mask = _zero_mask(n, register)
    kept = np.where(mask, amps, 0)
    p = float(np.vdot(kept, kept).real)
    if p <= 0:
        return 0.0, None
    return p, StateVector(kept / np.sqrt(p))


def lcu_success_probability(op: PauliSum, psi) -> float:
    """Probability of the all-zero ancilla outcome: |op psi|^2 / |alpha|_1^2."""
    phi = apply_to_state(op, _amps(psi))
    return float(np.vdot(phi, phi).real) / op.l1_norm() ** 2


@dataclass(frozen=True)
class VacuumResult:
    p_parallel: float
    joint_zero: float
    sq_overlap: float
    n_ancilla: int
    cx_count: int
    shots: int | None = None


def vacuum_test(op_parallel: PauliSum, psi0, shots: int | None = None, seed: int = 0,
                circuit: Circuit | None = None) -> VacuumResult:
    """Run U_psi, LCU(op), U_psi^† from |0> and read the all-zero statistics.

    ``sq_overlap`` estimates |<psi0|op|psi0>|^2 / |op psi0|^2; with ``shots`` the
    probabilities are replaced by sampled frequencies.
    """
    psi0 = _amps(psi0)
    k, n = lcu_register_sizes(op_parallel)
    if circuit is None:
        circuit = vacuum_circuit(op_parallel, psi0)
    final = run(circuit).amplitudes
    p_par = float(np.sum(np.abs(final[_zero_mask(k + n, range(k))]) ** 2))
    joint = float(abs(final[0]) ** 2)
    if shots is not None:
        counts = _multinomial(np.array([joint, p_par - joint, 1 - p_par]), shots, seed)
        joint = counts[0] / shots
        p_par = (counts[0] + counts[1]) / shots
    sq = joint / p_par if p_par > 0 else float("nan")
    return VacuumResult(p_par, joint, sq, k, circuit.two_qubit_count(), shots)


def vacuum_circuit(op_parallel: PauliSum, psi0) -> Circuit:
    psi0 = _amps(psi0)
    k, n = lcu_register_sizes(op_parallel)
    prep = synth_state_prep(psi0, list(range(k, k + n)), k + n)
    circ = prep.copy()
    circ.compose(synth_lcu(op_parallel))
    circ.compose(prep.inverse())
    return circ


@dataclass
class ShotResult:
    seed: int
    shots: int
    counts: dict = field(default_factory=dict)
    qubits: tuple = ()

    def frequency(self, bitstring: str) -> float:
        return self.counts.get(bitstring, 0) / self.shots

    def to_json(self) -> str:
        return json.dumps({"seed": self.seed, "shots": self.shots, "counts": self.counts}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ShotResult":
        d = json.loads(text)
        return cls(int(d["seed"]), int(d["shots"]), {str(k): int(v) for k, v in d["counts"].items()})

    def save(self, path):
        Path(path).write_text(self.to_json() + "\n")


def _multinomial(probs: np.ndarray, shots: int, seed: int) -> np.ndarray:
    probs = np.clip(np.asarray(probs, dtype=float), 0, None)
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.multinomial(shots, probs / probs.sum())


def sample(circ: Circuit, shots: int, seed: int, psi=None) -> ShotResult:
    """Sample the measured qubits (all qubits when the circuit has no measures).

    Measurements are taken at the end of the circuit. Bitstrings list the
    measured qubits in the order they were first measured.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    measured: list[int] = []
    body = Circuit(circ.n_qubits, global_phase=circ.global_phase)
    for g in circ.gates:
        if g.kind == "measure":
            if g.qubits[0] not in measured:
                measured.append(g.qubits[0])
        else:
            body.append(g)
    if not measured:
        measured = list(range(circ.n_qubits))
    n = circ.n_qubits
    probs = run(body, psi).probabilities().reshape((2,) * n)
    rest = tuple(q for q in range(n) if q not in measured)
    marg = probs.sum(axis=rest) if rest else probs
    # marginal axes follow ascending qubit order; reorder to measurement order
    marg = np.transpose(marg, [sorted(measured).index(q) for q in measured]).reshape(-1)
    counts = _multinomial(marg, shots, seed)
    width = len(measured)
    table = {format(i, f"0{width}b"): int(c) for i, c in enumerate(counts) if c}
    return ShotResult(seed, shots, table, tuple(measured))


def dense_expm_reference(op: PauliSum, t: float, psi0) -> np.ndarray:
    """exp(-i op t) psi0 via a Hermitian eigendecomposition."""
    if not op.is_hermitian():
        raise ValueError("reference evolution needs a Hermitian operator")
    h = to_dense(op)
    h = (h + h.conj().T) / 2
    vals, vecs = np.linalg.eigh(h)
    return vecs @ (np.exp(-1j * vals * t) * (vecs.conj().T @ _amps(psi0)))
