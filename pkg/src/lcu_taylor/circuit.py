"""Gate-level circuit IR with an explicit global phase.

Basis-state indices put qubit 0 in the most significant bit, the same
convention the Pauli and simulator modules use. Circuits apply their gates
left to right.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Gate",
    "Circuit",
    "GuardError",
    "depth",
    "two_qubit_count",
    "unitary_of",
    "export_qasm",
    "import_qasm",
    "lower_u2x2",
    "zyz_angles",
    "gate_matrix",
    "apply_gate",
]

KINDS = ("rx", "ry", "rz", "u2x2", "cx", "x", "h", "measure")
ROTATIONS = ("rx", "ry", "rz")
UNITARY_TOL = 1e-10
MAX_UNITARY_QUBITS = 12

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


class GuardError(ValueError):
    """A size or content guard was exceeded."""


def rotation_matrix(kind: str, angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    if kind == "rx":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "ry":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "rz":
        return np.array([[complex(c, -s), 0], [0, complex(c, s)]], dtype=complex)
    raise ValueError(kind)


@dataclass(frozen=True, eq=False)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: Optional[float] = None
    matrix: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        arity = 2 if self.kind == "cx" else 1
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} acts on {arity} qubit(s), got {self.qubits}")
        if self.kind == "cx" and self.qubits[0] == self.qubits[1]:
            raise ValueError("cx needs two distinct qubits")
        if self.kind in ROTATIONS:
            if self.angle is None:
                raise ValueError(f"{self.kind} needs an angle")
            object.__setattr__(self, "angle", float(self.angle))
        if self.kind == "u2x2":
            m = np.array(self.matrix, dtype=complex)
            if m.shape != (2, 2) or not np.allclose(m @ m.conj().T, np.eye(2), atol=UNITARY_TOL):
                raise ValueError("u2x2 payload must be a 2x2 unitary")
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)

    def to_matrix(self) -> np.ndarray:
        return gate_matrix(self)

    def inverse(self) -> "Gate":
        if self.kind in ROTATIONS:
            return Gate(self.kind, self.qubits, -self.angle)
        if self.kind == "u2x2":
            return Gate("u2x2", self.qubits, matrix=self.matrix.conj().T)
        if self.kind == "measure":
            raise ValueError("measure has no inverse")
        return self

    def remap(self, mapping: Sequence[int]) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.angle, self.matrix)

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        if (self.kind, self.qubits, self.angle) != (other.kind, other.qubits, other.angle):
            return False
        if self.matrix is None or other.matrix is None:
            return self.matrix is None and other.matrix is None
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.kind, self.qubits, self.angle))

    def __repr__(self):
        arg = "" if self.angle is None else f"({self.angle:.6g})"
        return f"{self.kind}{arg}{list(self.qubits)}"


def gate_matrix(g: Gate) -> np.ndarray:
    """Matrix of a single gate on its own qubits (cx: control is the high bit)."""
    if g.kind in ROTATIONS:
        return rotation_matrix(g.kind, g.angle)
    if g.kind == "u2x2":
        return np.array(g.matrix)
    if g.kind == "x":
        return _X.copy()
    if g.kind == "h":
        return _H.copy()
    if g.kind == "cx":
        m = np.eye(4, dtype=complex)
        m[2:, 2:] = _X
        return m
    raise ValueError(f"{g.kind} has no matrix")


def apply_gate(tensor: np.ndarray, g: Gate, n_qubits: int) -> np.ndarray:
    """Apply ``g`` to an array whose first ``n_qubits`` axes are qubit axes."""
    if g.kind == "cx":
        c, t = g.qubits
        out = tensor.copy()
        idx = [slice(None)] * tensor.ndim
        idx[c] = 1
        sub = out[tuple(idx)]
        taxis = t - (1 if t > c else 0)
        out[tuple(idx)] = np.flip(sub, axis=taxis)
        return out
    if g.kind == "x":
        return np.flip(tensor, axis=g.qubits[0]).copy()
    q = g.qubits[0]
    m = gate_matrix(g)
    if g.kind == "rz":
        out = tensor.copy()
        idx = [slice(None)] * tensor.ndim
        idx[q] = 0
        out[tuple(idx)] *= m[0, 0]
        idx[q] = 1
        out[tuple(idx)] *= m[1, 1]
        return out
    out = np.tensordot(m, tensor, axes=([1], [q]))
    return np.moveaxis(out, 0, q)


class Circuit:
    """Ordered gate list on ``n_qubits`` qubits plus a global phase (radians)."""

    def __init__(self, n_qubits: int, gates: Iterable[Gate] = (), global_phase: float = 0.0):
        self.n_qubits = int(n_qubits)
        self.gates: list[Gate] = []
        self.global_phase = float(global_phase)
        for g in gates:
            self.append(g)

    def append(self, g: Gate) -> "Circuit":
        if any(q < 0 or q >= self.n_qubits for q in g.qubits):
            raise ValueError(f"{g} touches a qubit outside 0..{self.n_qubits - 1}")
        self.gates.append(g)
        return self

    def rx(self, angle, q):
        return self.append(Gate("rx", (q,), angle))

    def ry(self, angle, q):
        return self.append(Gate("ry", (q,), angle))

    def rz(self, angle, q):
        return self.append(Gate("rz", (q,), angle))

    def rotation(self, axis, angle, q):
        return self.append(Gate(axis, (q,), angle))

    def u(self, matrix, q):
        return self.append(Gate("u2x2", (q,), matrix=matrix))

    def cx(self, control, target):
        return self.append(Gate("cx", (control, target)))

    def x(self, q):
        return self.append(Gate("x", (q,)))

    def h(self, q):
        return self.append(Gate("h", (q,)))

    def measure(self, q):
        return self.append(Gate("measure", (q,)))

    def add_phase(self, phase: float) -> "Circuit":
        self.global_phase += float(phase)
        return self

    def compose(self, other: "Circuit", qubits: Optional[Sequence[int]] = None) -> "Circuit":
        """Append ``other`` (in place), mapping its qubit ``i`` to ``qubits[i]``."""
        mapping = list(range(other.n_qubits)) if qubits is None else list(qubits)
        if len(mapping) != other.n_qubits:
            raise ValueError("qubit map length must match the appended circuit")
        for g in other.gates:
            self.append(g.remap(mapping))
        self.global_phase += other.global_phase
        return self

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, [g.inverse() for g in reversed(self.gates)], -self.global_phase)

    def copy(self) -> "Circuit":
        return Circuit(self.n_qubits, list(self.gates), self.global_phase)

    def count_ops(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for g in self.gates:
            counts[g.kind] = counts.get(g.kind, 0) + 1
        return counts

    def depth(self) -> int:
        return depth(self)

    def two_qubit_count(self) -> int:
        return two_qubit_count(self)

    def unitary(self) -> np.ndarray:
        return unitary_of(self)

    def __len__(self):
        return len(self.gates)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.n_qubits == other.n_qubits and self.gates == other.gates
                and self.global_phase == other.global_phase)

    __hash__ = None

    def __repr__(self):
        return (f"Circuit(n_qubits={self.n_qubits}, gates={len(self.gates)}, "
                f"cx={two_qubit_count(self)}, global_phase={self.global_phase:.6g})")


def depth(c: Circuit) -> int:
    """Greedy layered depth; measures occupy a layer like any other gate."""
    level = [0] * c.n_qubits
    for g in c.gates:
        layer = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = layer
    return max(level, default=0)


def two_qubit_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.kind == "cx")


def unitary_of(c: Circuit, max_qubits: int = MAX_UNITARY_QUBITS) -> np.ndarray:
    """Exact matrix of the circuit, global phase included."""
    n = c.n_qubits
    if n > max_qubits:
        raise GuardError(f"unitary guard: {n} > {max_qubits} qubits")
    if any(g.kind == "measure" for g in c.gates):
        raise GuardError("unitary_of needs a measurement-free circuit")
    dim = 1 << n
    tensor = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        tensor = apply_gate(tensor, g, n)
    return tensor.reshape(dim, dim) * np.exp(1j * c.global_phase)


def zyz_angles(u: np.ndarray) -> tuple[float, float, float, float]:
    """Return ``(phase, a, b, c)`` with ``u = e^{i phase} Rz(a) Ry(b) Rz(c)``."""
    u = np.asarray(u, dtype=complex)
    phase = np.angle(np.linalg.det(u)) / 2
    v = u * np.exp(-1j * phase)
    b = 2 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    if abs(v[0, 0]) < 1e-14:
        a_plus_c = 0.0
        a_minus_c = 2 * np.angle(v[1, 0])
    elif abs(v[1, 0]) < 1e-14:
        a_plus_c = 2 * np.angle(v[1, 1])
        a_minus_c = 0.0
    else:
        a_plus_c = 2 * np.angle(v[1, 1])
        a_minus_c = 2 * np.angle(v[1, 0])
    a = (a_plus_c + a_minus_c) / 2
    cc = (a_plus_c - a_minus_c) / 2
    # SU(2) has a sign ambiguity; fix it against the target
    rebuilt = rotation_matrix("rz", a) @ rotation_matrix("ry", b) @ rotation_matrix("rz", cc)
    if np.abs(rebuilt * np.exp(1j * phase) - u).max() > 1e-8:
        phase += math.pi
    return float(phase), float(a), float(b), float(cc)


def lower_u2x2(c: Circuit, tol: float = 1e-12) -> Circuit:
    """Replace every u2x2 by rz-ry-rz plus a global phase; near-zero angles are dropped."""
    out = Circuit(c.n_qubits, global_phase=c.global_phase)
    for g in c.gates:
        if g.kind != "u2x2":
            out.append(g)
            continue
        phase, a, b, cc = zyz_angles(g.matrix)
        q = g.qubits[0]
        for kind, ang in (("rz", cc), ("ry", b), ("rz", a)):
            if abs(ang) > tol:
                out.append(Gate(kind, (q,), ang))
        out.global_phase += phase
    return out


QASM_HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def export_qasm(c: Circuit) -> str:
    """OpenQASM 2.0 text; the global phase rides along as a comment."""
    lines = [QASM_HEADER.rstrip("\n"), f"qreg q[{c.n_qubits}];"]
    if any(g.kind == "measure" for g in c.gates):
        lines.append(f"creg c[{c.n_qubits}];")
    phase = math.remainder(c.global_phase, 2 * math.pi)
    if phase != 0.0:
        lines.append(f"// global_phase {phase!r}")
    for g in c.gates:
        if g.kind == "u2x2":
            raise GuardError("lower u2x2 gates before exporting QASM")
        if g.kind in ROTATIONS:
            lines.append(f"{g.kind}({g.angle!r}) q[{g.qubits[0]}];")
        elif g.kind == "cx":
            lines.append(f"cx q[{g.qubits[0]}],q[{g.qubits[1]}];")
        elif g.kind == "measure":
            q = g.qubits[0]
            lines.append(f"measure q[{q}] -> c[{q}];")
        else:
            lines.append(f"{g.kind} q[{g.qubits[0]}];")
    return "\n".join(lines) + "\n"


_QREG = re.compile(r"qreg\s+q\[(\d+)\];")
_PHASE = re.compile(r"//\s*global_phase\s+(\S+)")
_ROT = re.compile(r"(rx|ry|rz)\(([^)]*)\)\s+q\[(\d+)\];")
_CX = re.compile(r"cx\s+q\[(\d+)\]\s*,\s*q\[(\d+)\];")
_ONE = re.compile(r"(x|h)\s+q\[(\d+)\];")
_MEAS = re.compile(r"measure\s+q\[(\d+)\]\s*->\s*c\[(\d+)\];")


def import_qasm(text: str) -> Circuit:
    """Parse the subset written by :func:`export_qasm`."""
    circuit: Optional[Circuit] = None
    phase = 0.0
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        m = _PHASE.match(line)
        if m:
            phase = float(m.group(1))
            continue
        if line.startswith("//") or line.startswith("OPENQASM") or line.startswith("include") \
                or line.startswith("creg"):
            continue
        m = _QREG.fullmatch(line)
        if m:
            circuit = Circuit(int(m.group(1)))
            continue
        if circuit is None:
            raise ValueError("gate before qreg declaration")
        if m := _ROT.fullmatch(line):
            circuit.append(Gate(m.group(1), (int(m.group(3)),), float(m.group(2))))
        elif m := _CX.fullmatch(line):
            circuit.cx(int(m.group(1)), int(m.group(2)))
        elif m := _ONE.fullmatch(line):
            circuit.append(Gate(m.group(1), (int(m.group(2)),)))
        elif m := _MEAS.fullmatch(line):
            circuit.measure(int(m.group(1)))
        else:
            raise ValueError(f"unsupported QASM line: {raw!r}")
    if circuit is None:
        raise ValueError("no qreg declaration found")
    circuit.global_phase = phase
    return circuit
