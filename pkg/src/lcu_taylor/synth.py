"""Lowering of multiplexors, PREPARE/SELECT oracles and friends to gates.

Control registers are listed most-significant first: for controls
``(c0, c1, ..., c_{k-1})`` the pattern index is ``sum(bit(c_i) << (k-1-i))``.
Every routine tracks the global phase, so ``unitary_of`` of the result is
equal, not just equivalent, to the requested operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, GuardError
from .pauli import PauliSum, to_dense

__all__ = [
    "D_MATRIX",
    "DemuxStep",
    "MultiplexorSpec",
    "SynthesisError",
    "demultiplex_pair",
    "synth_multiplexed_rotation",
    "synth_multiplexed_u2",
    "synth_diagonal",
    "synth_prepare",
    "synth_select",
    "select_matrix",
    "synth_lcu",
    "lcu_register_sizes",
    "synth_state_prep",
    "synth_reflection",
    "synth_oaa",
    "synth_trotter_step",
    "synth_trotter",
    "multiplexor_cost",
    "unary_iteration_cost",
    "crossover_report",
    "num_control_qubits",
]

D_MATRIX = np.diag([np.exp(1j * math.pi / 4), np.exp(-1j * math.pi / 4)])
ANGLE_TOL = 1e-12
UNITARY_TOL = 1e-10

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_RZ_MINUS_HALF_PI = np.diag([np.exp(1j * math.pi / 4), np.exp(-1j * math.pi / 4)])
_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}


class SynthesisError(ValueError):
    """Invalid synthesis input (non-unitary payload, bad sizes, ...)."""


def _check_unitary(u, what="matrix"):
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.abs(u @ u.conj().T - np.eye(2)).max() > UNITARY_TOL:
        raise SynthesisError(f"{what} is not a 2x2 unitary")
    return u


def num_control_qubits(n_terms: int) -> int:
    """Smallest k with 2**k >= n_terms."""
    if n_terms < 1:
        raise SynthesisError("need at least one term")
    return max(0, math.ceil(math.log2(n_terms))) if n_terms > 1 else 0


# -- one demultiplexing step ---------------------------------------------------

@dataclass(frozen=True)
class DemuxStep:
    """``V0 = r^† W d L`` and ``V1 = r W d^† L``."""

    L: np.ndarray
    W: np.ndarray
    r: np.ndarray
    d: np.ndarray = D_MATRIX

    def residual(self, v0, v1) -> float:
        r, W, d, L = self.r, self.W, self.d, self.L
        return float(np.abs(r.conj().T @ W @ d @ L - v0).max()
                     + np.abs(r @ W @ d.conj().T @ L - v1).max())


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v * np.exp(-1j * np.angle(v[k]))


def demultiplex_pair(v0, v1) -> DemuxStep:
    """Solve ``V0 ⊕ V1 = (r^† ⊕ r)(I ⊗ W)(d ⊕ d^†)(I ⊗ L)``."""
    v0 = _check_unitary(v0, "V0")
    v1 = _check_unitary(v1, "V1")
    u = v0 @ v1.conj().T
    theta = float(np.angle(np.linalg.det(u)))
    su = u * np.exp(-1j * theta / 2)
    x0 = su[0, 0]
    arg_x0 = float(np.angle(x0)) if abs(x0) > 1e-14 else 0.0
    r = np.diag([
        np.exp(1j * (-arg_x0 - theta / 2 - math.pi / 2) / 2),
        np.exp(1j * (arg_x0 - theta / 2 + math.pi / 2) / 2),
    ])
    m = r @ u @ r
    vals, vecs = np.linalg.eig(m)
    first = vecs[:, int(np.argmin(np.abs(vals - 1j)))]
    first = _fix_phase(first / np.linalg.norm(first))
    second = _fix_phase(np.array([-np.conj(first[1]), np.conj(first[0])]))
    w = np.column_stack([first, second])
    lmat = D_MATRIX.conj().T @ w.conj().T @ r @ v0
    return DemuxStep(L=lmat, W=w, r=r)


# -- multiplexed rotations -------------------------------------------------------

def _rotation_sequence(angles: np.ndarray) -> list:
    """Time-ordered ``('r', angle)`` / ``('cx', level)`` ops with 2^k of each."""
    k = int(round(math.log2(len(angles))))
    if k == 0:
        return [("r", float(angles[0]))]
    half = len(angles) // 2
    gamma = (angles[:half] + angles[half:]) / 2
    beta = (angles[:half] - angles[half:]) / 2
    left = [(op, v if op == "r" else v + 1) for op, v in _rotation_sequence(gamma)]
    right = [(op, v if op == "r" else v + 1) for op, v in reversed(_rotation_sequence(beta))]
    if k == 1:
        return left + [("cx", 0)] + right + [("cx", 0)]
    # the inner cx pair meets across cx(0) and cancels
    return left[:-1] + [("cx", 0)] + right[1:] + [("cx", 0)]


def _emit_rotation_mux(circ: Circuit, axis: str, angles, controls, target):
    for op, v in _rotation_sequence(np.asarray(angles, dtype=float)):
        if op == "r":
            circ.rotation(axis, v, target)
        else:
            circ.cx(controls[v], target)


def synth_multiplexed_rotation(axis: str, angles, controls: Sequence[int], target: int,
                               n_qubits: int | None = None) -> Circuit:
    """Uniformly controlled ry/rz with exactly 2^k cx and 2^k rotations."""
    if axis not in ("ry", "rz"):
        raise SynthesisError("axis must be 'ry' or 'rz'")
    angles = np.asarray(angles, dtype=float)
    controls = list(controls)
    if len(angles) != 1 << len(controls):
        raise SynthesisError(f"need {1 << len(controls)} angles, got {len(angles)}")
    n = n_qubits if n_qubits is not None else max([target, *controls]) + 1
    circ = Circuit(n)
    _emit_rotation_mux(circ, axis, angles, controls, target)
    return circ


def _reduce_controls(angles: np.ndarray, controls: list, tol: float):
    """Drop controls the angle table does not depend on."""
    k = len(controls)
    table = angles.reshape((2,) * k) if k else angles.reshape(())
    kept = []
    for axis in range(k):
        lo = np.take(table, 0, axis=axis)
        hi = np.take(table, 1, axis=axis)
        if np.abs(lo - hi).max() <= tol:
            table = np.expand_dims(lo, axis)
        else:
            kept.append(axis)
    reduced = table
    for axis in reversed(range(k)):
        if axis not in kept:
            reduced = np.take(reduced, 0, axis=axis)
    return np.asarray(reduced, dtype=float).reshape(-1), [controls[a] for a in kept]


def _emit_rotation_mux_simplified(circ, axis, angles, controls, target, tol=ANGLE_TOL):
    angles = np.asarray(angles, dtype=float)
    if np.abs(angles).max(initial=0.0) <= tol:
        return
    angles, controls = _reduce_controls(angles, list(controls), tol)
    if len(controls) == 0:
        circ.rotation(axis, float(angles[0]), target)
        return
    for op, v in _rotation_sequence(angles):
        if op == "r":
            if abs(v) > tol:
                circ.rotation(axis, v, target)
        else:
            circ.cx(controls[v], target)


# -- diagonals ---------------------------------------------------------------------

def _emit_diagonal(circ: Circuit, phases, qubits: Sequence[int], tol=ANGLE_TOL):
    """``diag(exp(i*phases))`` on ``qubits`` (first = most significant)."""
    phases = np.asarray(phases, dtype=float)
    qubits = list(qubits)
    while qubits:
        pairs = phases.reshape(-1, 2)
        _emit_rotation_mux_simplified(circ, "rz", pairs[:, 1] - pairs[:, 0], qubits[:-1], qubits[-1], tol)
        phases = pairs.mean(axis=1)
        qubits = qubits[:-1]
    circ.add_phase(float(phases[0]))


def synth_diagonal(phases, qubits: Sequence[int], n_qubits: int | None = None) -> Circuit:
    """Diagonal unitary as a cascade of multiplexed-rz gates (2^m - 2 cx at most)."""
    qubits = list(qubits)
    if len(phases) != 1 << len(qubits):
        raise SynthesisError("phase table must have 2^m entries")
    circ = Circuit(n_qubits if n_qubits is not None else max(qubits, default=-1) + 1)
    _emit_diagonal(circ, phases, qubits)
    return circ


# -- multiplexed U(2) --------------------------------------------------------------------

@dataclass(frozen=True)
class MultiplexorSpec:
    """``sum_i |i><i|_controls ⊗ V_i`` on one target qubit."""

    targets: tuple
    control_qubits: tuple
    target_qubit: int

    def __post_init__(self):
        mats = tuple(_check_unitary(t, f"target {i}") for i, t in enumerate(self.targets))
        object.__setattr__(self, "targets", mats)
        object.__setattr__(self, "control_qubits", tuple(self.control_qubits))
        if len(mats) != 1 << len(self.control_qubits):
            raise SynthesisError(f"need {1 << len(self.control_qubits)} targets, got {len(mats)}")
        if self.target_qubit in self.control_qubits:
            raise SynthesisError("target qubit doubles as a control")

    @property
    def k(self) -> int:
        return len(self.control_qubits)

    def matrix(self) -> np.ndarray:
        """Block-diagonal matrix on (controls..., target)."""
        dim = 2 * len(self.targets)
        m = np.zeros((dim, dim), dtype=complex)
        for i, v in enumerate(self.targets):
            m[2 * i:2 * i + 2, 2 * i:2 * i + 2] = v
        return m


def _demux_parts(mats: list, k: int):
    """Return (ops, diag): the multiplexor equals ``diag · U(ops)``.

    ``ops`` alternates ('u', matrix) with ('zz', level) entries, the latter
    meaning exp(i pi/4 Z_{control[level]} Z_target). ``diag`` is indexed by
    (controls..., target).
    """
    if k == 0:
        return [("u", mats[0])], np.ones(2, dtype=complex)
    half = len(mats) // 2
    steps = [demultiplex_pair(mats[i], mats[i + half]) for i in range(half)]
    ops_l, diag_l = _demux_parts([s.L for s in steps], k - 1)
    diag_l = diag_l.reshape(half, 2)
    # the left part's trailing diagonal slides past the zz gate into W
    ws = [s.W @ np.diag(diag_l[j]) for j, s in enumerate(steps)]
    ops_w, diag_w = _demux_parts(ws, k - 1)
    shift = lambda ops: [(op, v + 1) if op == "zz" else (op, v) for op, v in ops]  # noqa: E731
    ops = shift(ops_l) + [("zz", 0)] + shift(ops_w)
    r = np.array([np.diag(s.r) for s in steps])
    diag_w = diag_w.reshape(half, 2)
    diag = np.concatenate([(np.conj(r) * diag_w).ravel(), (r * diag_w).ravel()])
    return ops, diag


def _mux_u2_body(mats: list, controls: list, target: int):
    """Gates for the non-diagonal part plus the residual diagonal and phase.

    Returns ``(gates, diag_phases, global_phase)`` where the multiplexor equals
    ``e^{i global_phase} diag(exp(i diag_phases)) · U(gates)``.
    """
    k = len(controls)
    ops, diag = _demux_parts(mats, k)
    phases = np.angle(diag)
    global_phase = 0.0
    gates: list[Gate] = []
    pending = np.eye(2, dtype=complex)
    ctrl_bits = np.arange(1 << (k + 1)) >> 1
    for op, v in ops:
        if op == "u":
            pending = v @ pending
            continue
        # zz = e^{-i pi/4} (H cx H) rz_c(-pi/2) rz_t(-pi/2)
        pending = _H @ _RZ_MINUS_HALF_PI @ pending
        gates.append(Gate("u2x2", (target,), matrix=pending))
        gates.append(Gate("cx", (controls[v], target)))
        pending = _H.copy()
        global_phase -= math.pi / 4
        bit = (ctrl_bits >> (k - 1 - v)) & 1
        phases = phases + np.where(bit == 0, math.pi / 4, -math.pi / 4)
    gates.append(Gate("u2x2", (target,), matrix=pending))
    return gates, phases, global_phase


def _clean_u2(gates: list, tol=1e-12):
    """Drop u2x2 gates that are a pure phase; return (gates, phase)."""
    out, phase = [], 0.0
    for g in gates:
        if g.kind == "u2x2":
            m = g.matrix
            if abs(m[0, 1]) < tol and abs(m[1, 0]) < tol and abs(m[0, 0] - m[1, 1]) < tol:
                phase += float(np.angle(m[0, 0]))
                continue
        out.append(g)
    return out, phase


def _emit_mux_u2(circ: Circuit, mats: list, controls: list, target: int,
                 control_phases: np.ndarray | None = None):
    """Emit a multiplexed U(2). If ``control_phases`` is given, the leftover
    diagonal on the control register is accumulated there instead of being
    synthesised."""
    mats = [np.asarray(m, dtype=complex) for m in mats]
    ref = mats[0]
    rel = [ref.conj().T @ m for m in mats]
    if all(abs(q[0, 1]) < 1e-12 and abs(q[1, 0]) < 1e-12 for q in rel):
        # V_i = V_0 · diag_i: one single-qubit gate plus a diagonal
        body = [Gate("u2x2", (target,), matrix=ref)]
        phases = np.angle(np.array([np.diag(q) for q in rel])).ravel()
        gphase = 0.0
        diag_first = True
    else:
        body, phases, gphase = _mux_u2_body(mats, controls, target)
        diag_first = False
    body, extra = _clean_u2(body)
    gphase += extra
    table = np.asarray(phases, dtype=float).reshape(-1, 2)
    rz_angles = table[:, 1] - table[:, 0]
    common = table.mean(axis=1)
    if diag_first:
        _emit_rotation_mux_simplified(circ, "rz", rz_angles, controls, target)
        for g in body:
            circ.append(g)
    else:
        for g in body:
            circ.append(g)
        _emit_rotation_mux_simplified(circ, "rz", rz_angles, controls, target)
    circ.add_phase(gphase)
    if control_phases is None:
        _emit_diagonal(circ, common, controls)
    else:
        control_phases += common


def synth_multiplexed_u2(spec: MultiplexorSpec, n_qubits: int | None = None) -> Circuit:
    """Demultiplex a k-control single-target multiplexor into cx and 1-qubit gates."""
    qubits = [*spec.control_qubits, spec.target_qubit]
    circ = Circuit(n_qubits if n_qubits is not None else max(qubits) + 1)
    _emit_mux_u2(circ, list(spec.targets), list(spec.control_qubits), spec.target_qubit)
    return circ


# -- state preparation ------------------------------------------------------------------

def _state_prep_angles(psi: np.ndarray):
    """Per level: (ry angles, rz angles); plus the leftover global phase."""
    n = int(round(math.log2(len(psi))))
    levels = []
    vec = np.asarray(psi, dtype=complex)
    for _ in range(n):
        pairs = vec.reshape(-1, 2)
        mags = np.abs(pairs)
        ph = np.angle(pairs)
        # a zero amplitude's phase is free: copy its partner's to avoid an rz
        ph[:, 0] = np.where(mags[:, 0] > 0, ph[:, 0], ph[:, 1])
        ph[:, 1] = np.where(mags[:, 1] > 0, ph[:, 1], ph[:, 0])
        ry = 2 * np.arctan2(mags[:, 1], mags[:, 0])
        rz = ph[:, 1] - ph[:, 0]
        # branches with no weight are don't-cares; copying a live branch's
        # angles lets control reduction shrink the multiplexor
        dead = np.hypot(mags[:, 0], mags[:, 1]) == 0
        if dead.any() and not dead.all():
            live = int(np.flatnonzero(~dead)[0])
            ry[dead] = ry[live]
            rz[dead] = rz[live]
        levels.append((ry, rz))
        vec = np.hypot(mags[:, 0], mags[:, 1]) * np.exp(1j * ph.mean(axis=1))
    levels.reverse()
    return levels, float(np.angle(vec[0]))


def synth_state_prep(psi, qubits: Sequence[int] | None = None, n_qubits: int | None = None) -> Circuit:
    """Circuit mapping |0...0> to ``psi`` exactly (global phase included)."""
    psi = np.asarray(getattr(psi, "amplitudes", psi), dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise SynthesisError("cannot prepare the zero vector")
    if abs(norm - 1) > 1e-10:
        raise SynthesisError(f"state must be normalised (norm {norm})")
    n = int(round(math.log2(len(psi))))
    if 1 << n != len(psi):
        raise SynthesisError("state length must be a power of two")
    qubits = list(range(n)) if qubits is None else list(qubits)
    circ = Circuit(n_qubits if n_qubits is not None else max(qubits, default=-1) + 1)
    levels, phase = _state_prep_angles(psi)
    for j, (ry, rz) in enumerate(levels):
        _emit_rotation_mux_simplified(circ, "ry", ry, qubits[:j], qubits[j])
        _emit_rotation_mux_simplified(circ, "rz", rz, qubits[:j], qubits[j])
    circ.add_phase(phase)
    return circ


def synth_prepare(weights, qubits: Sequence[int] | None = None, n_qubits: int | None = None) -> Circuit:
    """PREPARE: |0> -> sum_l sqrt(w_l / |w|_1) |l>, using multiplexed-ry only."""
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise SynthesisError("weights must be non-negative")
    if not np.any(w > 0):
        raise SynthesisError("weights are all zero")
    k = num_control_qubits(len(w))
    amps = np.zeros(1 << k)
    amps[:len(w)] = np.sqrt(w / w.sum())
    qubits = list(range(k)) if qubits is None else list(qubits)
    if len(qubits) != k:
        raise SynthesisError(f"PREPARE of {len(w)} weights needs {k} qubits")
    circ = Circuit(n_qubits if n_qubits is not None else max(qubits, default=-1) + 1)
    levels, _ = _state_prep_angles(amps)
    for j, (ry, _rz) in enumerate(levels):
        _emit_rotation_mux_simplified(circ, "ry", ry, qubits[:j], qubits[j])
    return circ


# -- SELECT ------------------------------------------------------------------------------

def _select_columns(op: PauliSum, k: int):
    """Per system qubit, the 2^k target matrices; phases ride on column 0."""
    n = op.n_qubits
    ident = _PAULI["I"]
    cols = [[ident] * (1 << k) for _ in range(n)]
    for ell, (label, coeff) in enumerate(op):
        phase = coeff / abs(coeff)
        for j, ch in enumerate(label):
            m = _PAULI[ch]
            cols[j][ell] = m * phase if j == 0 else m
    return cols


def select_matrix(op: PauliSum, k: int | None = None) -> np.ndarray:
    """Dense ``sum_l |l><l| ⊗ e^{i theta_l} P_l`` with identity padding."""
    k = num_control_qubits(len(op)) if k is None else k
    n = op.n_qubits
    dim_s = 1 << n
    mat = np.zeros((dim_s << k, dim_s << k), dtype=complex)
    for ell in range(1 << k):
        mat[ell * dim_s:(ell + 1) * dim_s, ell * dim_s:(ell + 1) * dim_s] = np.eye(dim_s)
    for ell, (label, coeff) in enumerate(op):
        block = to_dense(PauliSum({label: coeff / abs(coeff)}))
        mat[ell * dim_s:(ell + 1) * dim_s, ell * dim_s:(ell + 1) * dim_s] = block
    return mat


def synth_select(op: PauliSum, control_qubits: Sequence[int] | None = None,
                 system_qubits: Sequence[int] | None = None, n_qubits: int | None = None) -> Circuit:
    """SELECT as a product of single-target multiplexors, one per system qubit.

    Each multiplexor leaves a diagonal on the control register; those commute
    with every later multiplexor and are merged and synthesised once.
    """
    if len(op) == 0:
        raise SynthesisError("SELECT needs at least one term")
    k_min = num_control_qubits(len(op))
    controls = list(range(k_min)) if control_qubits is None else list(control_qubits)
    k = len(controls)
    if len(op) > 1 << k:
        raise SynthesisError(f"{len(op)} terms do not fit {k} control qubits")
    system = list(range(k, k + op.n_qubits)) if system_qubits is None else list(system_qubits)
    if len(system) != op.n_qubits:
        raise SynthesisError("system register size does not match the operator")
    circ = Circuit(n_qubits if n_qubits is not None else max([*controls, *system]) + 1)
    control_phases = np.zeros(1 << k)
    for j, mats in enumerate(_select_columns(op, k)):
        _emit_mux_u2(circ, mats, controls, system[j], control_phases)
    _emit_diagonal(circ, control_phases, controls)
    bound = multiplexor_cost(k, op.n_qubits)
    if k >= 1 and circ.two_qubit_count() > bound:
        raise SynthesisError(f"SELECT used {circ.two_qubit_count()} cx, bound is {bound}")
    return circ


# -- LCU, OAA ----------------------------------------------------------------------------

def lcu_register_sizes(op: PauliSum) -> tuple[int, int]:
    """(ancilla qubits, system qubits) used by :func:`synth_lcu`."""
    return num_control_qubits(len(op)), op.n_qubits


def synth_lcu(op: PauliSum) -> Circuit:
    """PREPARE · SELECT · PREPARE^†; ancillas first, then the system register.

    The top-left block (ancillas in |0>) is ``op / |alpha|_1``.
    """
    k, n = lcu_register_sizes(op)
    circ = Circuit(k + n)
    ancillas = list(range(k))
    prep = synth_prepare(np.abs(op.coeffs), ancillas, k + n) if k else Circuit(k + n)
    circ.compose(prep)
    circ.compose(synth_select(op, ancillas, list(range(k, k + n)), k + n))
    circ.compose(prep.inverse())
    return circ


def synth_reflection(qubits: Sequence[int], n_qubits: int) -> Circuit:
    """``I - 2|0..0><0..0|`` on ``qubits``."""
    qubits = list(qubits)
    phases = np.zeros(1 << len(qubits))
    phases[0] = math.pi
    circ = Circuit(n_qubits)
    _emit_diagonal(circ, phases, qubits)
    return circ


def synth_oaa(op: PauliSum, rounds: int) -> Circuit:
    """LCU circuit W followed by ``rounds`` applications of A = -W R W^† R."""
    if rounds < 0:
        raise SynthesisError("rounds must be non-negative")
    w = synth_lcu(op)
    if rounds == 0:
        return w
    k, n = lcu_register_sizes(op)
    refl = synth_reflection(range(k), k + n)
    w_inv = w.inverse()
    circ = w.copy()
    for _ in range(rounds):
        circ.compose(refl).compose(w_inv).compose(refl).compose(w)
        circ.add_phase(math.pi)
    return circ


# -- Trotter baseline ---------------------------------------------------------------------

def synth_trotter_step(op: PauliSum, tau: float, qubits: Sequence[int] | None = None,
                       n_qubits: int | None = None) -> Circuit:
    """First-order product of Pauli-exponential gadgets exp(-i beta_j P_j tau)."""
    if not op.is_hermitian():
        raise SynthesisError("Trotter step needs a Hermitian operator")
    qubits = list(range(op.n_qubits)) if qubits is None else list(qubits)
    circ = Circuit(n_qubits if n_qubits is not None else max(qubits, default=-1) + 1)
    for label, coeff in op:
        theta = float(coeff.real) * tau
        active = [qubits[j] for j, ch in enumerate(label) if ch != "I"]
        if not active:
            circ.add_phase(-theta)
            continue
        letters = [ch for ch in label if ch != "I"]
        for q, ch in zip(active, letters):
            if ch == "X":
                circ.h(q)
            elif ch == "Y":
                circ.rx(math.pi / 2, q)
        for a, b in zip(active, active[1:]):
            circ.cx(a, b)
        circ.rz(2 * theta, active[-1])
        for a, b in reversed(list(zip(active, active[1:]))):
            circ.cx(a, b)
        for q, ch in zip(active, letters):
            if ch == "X":
                circ.h(q)
            elif ch == "Y":
                circ.rx(-math.pi / 2, q)
    return circ


def synth_trotter(op: PauliSum, tau: float, steps: int) -> Circuit:
    step = synth_trotter_step(op, tau)
    circ = Circuit(step.n_qubits)
    for _ in range(steps):
        circ.compose(step)
    return circ


# -- cost models ---------------------------------------------------------------------------

def multiplexor_cost(k: int, n: int) -> int:
    """cx bound for the multiplexor SELECT: 2^k (2n + 1) - n - 2."""
    return (1 << k) * (2 * n + 1) - n - 2


def unary_iteration_cost(k: int, n: int) -> int:
    """Literal unary-iteration cx count 2^(k-1) (4n + 17) - 31 (cost model only)."""
    if k < 2 or n < 1:
        raise ValueError("unary iteration cost model needs k >= 2 and n >= 1")
    return (1 << (k - 1)) * (4 * n + 17) - 31


def crossover_report(k_values=range(2, 13), n_values=range(1, 101), claimed_max_n: int = 12) -> dict:
    """Where the multiplexor SELECT is cheaper than unary iteration.

    Compares both literal formulas over the grid and checks the claim that
    the multiplexor wins exactly when ``n <= claimed_max_n``.
    """
    cheaper = {}
    mismatches = []
    for k in k_values:
        wins = [n for n in n_values if multiplexor_cost(k, n) < unary_iteration_cost(k, n)]
        cheaper[k] = wins
        for n in n_values:
            if (n in wins) != (n <= claimed_max_n):
                mismatches.append((k, n))
    return {
        "multiplexor_cheaper": cheaper,
        "claim_holds": not mismatches,
        "mismatches": mismatches,
        # unary - multiplexor = 7.5 * 2^k + n - 29 > 0 for k >= 2, n >= 1
        "margin_formula": "unary - multiplexor = 15 * 2^(k-1) + n - 29",
    }


def check_bound(circ: Circuit, bound: int, what: str):
    if circ.two_qubit_count() > bound:
        raise GuardError(f"{what}: {circ.two_qubit_count()} cx exceeds bound {bound}")
