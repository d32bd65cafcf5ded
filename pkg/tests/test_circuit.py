import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcu_taylor.circuit import (Circuit, Gate, GuardError, export_qasm, import_qasm, lower_u2x2,
                                unitary_of, zyz_angles)
from oracles import kron_all, random_unitary, rot

H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def test_depth_example():
    c = Circuit(3)
    c.cx(0, 1).cx(1, 2).rz(0.3, 0)
    assert c.depth() == 2


def test_basic_unitaries():
    c = Circuit(1).h(0)
    assert np.allclose(unitary_of(c), H)
    assert np.allclose(unitary_of(Circuit(2).cx(0, 1)), CX)
    # control on the lower-order qubit
    swapped = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])
    assert np.allclose(unitary_of(Circuit(2).cx(1, 0)), swapped)
    assert np.allclose(unitary_of(Circuit(2).cx(0, 1).cx(0, 1)), np.eye(4))


def test_rotation_conventions():
    for kind in ("rx", "ry", "rz"):
        c = Circuit(1).rotation(kind, 0.7, 0)
        assert np.allclose(unitary_of(c), rot(kind, 0.7))


def test_global_phase_is_applied():
    c = Circuit(1).add_phase(math.pi / 2)
    assert np.allclose(unitary_of(c), 1j * np.eye(2))


def test_inverse():
    rng = np.random.default_rng(3)
    c = Circuit(3)
    c.u(random_unitary(2, rng), 1).cx(1, 2).ry(0.3, 0).h(2).x(0).rx(-1.1, 1).add_phase(0.4)
    assert np.allclose(unitary_of(c) @ unitary_of(c.inverse()), np.eye(8), atol=1e-12)


def test_guards():
    c = Circuit(2).measure(0)
    with pytest.raises(GuardError):
        unitary_of(c)
    with pytest.raises(GuardError):
        unitary_of(Circuit(13))
    with pytest.raises(ValueError):
        Circuit(2).cx(0, 0)
    with pytest.raises(ValueError):
        Circuit(2).h(2)


def test_zyz_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        u = random_unitary(2, rng)
        phase, a, b, c = zyz_angles(u)
        rebuilt = np.exp(1j * phase) * rot("rz", a) @ rot("ry", b) @ rot("rz", c)
        assert np.allclose(rebuilt, u, atol=1e-10)


def test_lowering_preserves_unitary():
    rng = np.random.default_rng(11)
    c = Circuit(2)
    c.u(random_unitary(2, rng), 0).cx(0, 1).u(random_unitary(2, rng), 1)
    low = lower_u2x2(c)
    assert "u2x2" not in low.count_ops()
    assert np.allclose(unitary_of(low), unitary_of(c), atol=1e-10)


def test_qasm_round_trip():
    c = Circuit(3)
    c.h(0).cx(0, 1).rz(0.125, 2).ry(-1e-3, 1).rx(math.pi, 0).x(2).add_phase(0.1).measure(0).measure(2)
    text = export_qasm(c)
    assert text.startswith('OPENQASM 2.0;\ninclude "qelib1.inc";\n')
    assert "creg c[3];" in text
    assert import_qasm(text) == c


def test_qasm_refuses_raw_unitaries():
    c = Circuit(1).u(np.eye(2), 0)
    with pytest.raises(GuardError):
        export_qasm(c)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_random_circuit_matches_kron_oracle(seed):
    rng = np.random.default_rng(seed)
    n = 3
    c = Circuit(n)
    ref = np.eye(1 << n, dtype=complex)
    for _ in range(8):
        if rng.random() < 0.4:
            a, b = rng.choice(n, size=2, replace=False)
            c.cx(int(a), int(b))
            full = np.zeros((1 << n, 1 << n))
            for i in range(1 << n):
                bits = [(i >> (n - 1 - q)) & 1 for q in range(n)]
                if bits[a]:
                    bits[b] ^= 1
                full[int("".join(map(str, bits)), 2), i] = 1
        else:
            q = int(rng.integers(n))
            kind = str(rng.choice(["rx", "ry", "rz", "h"]))
            if kind == "h":
                c.h(q)
                m = H
            else:
                theta = float(rng.normal())
                c.rotation(kind, theta, q)
                m = rot(kind, theta)
            full = kron_all([m if j == q else np.eye(2) for j in range(n)])
        ref = full @ ref
    assert np.allclose(unitary_of(c), ref, atol=1e-12)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("rz", (0,))
    with pytest.raises(ValueError):
        Gate("u2x2", (0,), matrix=np.ones((2, 2)))
