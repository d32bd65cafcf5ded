import math

import numpy as np
import pytest
from scipy.linalg import expm

from lcu_taylor.circuit import Circuit, GuardError, unitary_of
from lcu_taylor.pauli import DimensionError, PauliSum
from lcu_taylor.sim import (ShotResult, StateVector, dense_expm_reference, lcu_success_probability,
                            postselect_zero, run, sample, vacuum_test)
from lcu_taylor.synth import synth_lcu
from oracles import random_unitary, sum_matrix

PLUS = np.array([1, 1]) / math.sqrt(2)


def test_identity_and_flip():
    psi = StateVector(np.array([0.6, 0.8j]))
    assert np.allclose(run(Circuit(1), psi).amplitudes, psi.amplitudes)
    out = run(Circuit(3).x(0))
    assert np.allclose(out.amplitudes, np.eye(8)[4])


def test_run_matches_unitary_random_5q():
    rng = np.random.default_rng(1)
    c = Circuit(5)
    for _ in range(40):
        if rng.random() < 0.5:
            a, b = rng.choice(5, 2, replace=False)
            c.cx(int(a), int(b))
        else:
            c.u(random_unitary(2, rng), int(rng.integers(5)))
    c.add_phase(0.3)
    psi = rng.normal(size=32) + 1j * rng.normal(size=32)
    psi /= np.linalg.norm(psi)
    out = run(c, StateVector(psi)).amplitudes
    assert np.allclose(out, unitary_of(c) @ psi, atol=1e-10)
    assert math.isclose(np.linalg.norm(out), 1, abs_tol=1e-10)


def test_run_rejects_bad_inputs():
    with pytest.raises(DimensionError):
        run(Circuit(2), StateVector(PLUS))
    with pytest.raises(GuardError):
        run(Circuit(1).measure(0))


def test_postselect_examples():
    p, st = postselect_zero(StateVector.zero(2), [0, 1])
    assert p == 1 and np.allclose(st.amplitudes, [1, 0, 0, 0])
    p, st = postselect_zero(StateVector.basis(1, 1), [0])
    assert p == 0 and st is None


def test_postselect_lcu_example():
    # [DERIVED] Y = I + Z on |+>: p = <psi|diag(4,0)|psi> / 4 = 1/2
    op = PauliSum({"I": 1, "Z": 1})
    circ = synth_lcu(op)
    psi = StateVector(np.kron([1, 0], PLUS))
    p, _ = postselect_zero(run(circ, psi), [0])
    assert math.isclose(p, 0.5, abs_tol=1e-12)
    assert math.isclose(lcu_success_probability(op, PLUS), 0.5, abs_tol=1e-12)


def test_success_probability_trivial():
    assert math.isclose(lcu_success_probability(PauliSum({"I": 1}), PLUS), 1)
    assert math.isclose(lcu_success_probability(PauliSum({"I": 1, "Z": 1}), [0, 1]), 0, abs_tol=1e-15)


def test_success_probability_matches_circuit():
    rng = np.random.default_rng(8)
    for _ in range(10):
        terms = {lab: complex(rng.normal(), rng.normal())
                 for lab in {"".join(rng.choice(list("IXYZ"), 2)) for _ in range(5)}}
        op = PauliSum(terms)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        circ = synth_lcu(op)
        k = circ.n_qubits - 2
        full = np.kron(np.eye(1 << k)[0], psi)
        p, _ = postselect_zero(run(circ, full), range(k))
        assert math.isclose(p, lcu_success_probability(op, psi), abs_tol=1e-9)


def test_vacuum_trivial_cases():
    r = vacuum_test(PauliSum({"I": 1}), PLUS)
    assert math.isclose(r.p_parallel, 1, abs_tol=1e-12) and math.isclose(r.sq_overlap, 1, abs_tol=1e-12)
    r = vacuum_test(PauliSum({"Z": 1}), PLUS)
    assert math.isclose(r.sq_overlap, 0, abs_tol=1e-12)


def test_vacuum_matches_dense_overlap():
    rng = np.random.default_rng(12)
    terms = {"II": 0.7, "XZ": 0.2j, "ZZ": -0.3, "YI": 0.1}
    op = PauliSum(terms)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    r = vacuum_test(op, psi)
    phi = sum_matrix(terms, 2) @ psi
    assert math.isclose(r.p_parallel, np.vdot(phi, phi).real / op.l1_norm() ** 2, abs_tol=1e-10)
    assert math.isclose(r.sq_overlap, abs(np.vdot(psi, phi)) ** 2 / np.vdot(phi, phi).real, abs_tol=1e-10)


def test_sampling_examples():
    res = sample(Circuit(3), 100, seed=1)
    assert res.counts == {"000": 100}
    plus = sample(Circuit(1).h(0), 20480, seed=42)
    sigma = math.sqrt(20480 * 0.25)
    assert abs(plus.counts["0"] - 10240) < 5 * sigma
    assert sum(plus.counts.values()) == 20480
    assert sample(Circuit(1).h(0), 500, seed=3).counts == sample(Circuit(1).h(0), 500, seed=3).counts


def test_sampling_measured_subset_order():
    c = Circuit(3).x(2).measure(2).measure(0)
    assert sample(c, 10, seed=0).counts == {"10": 10}


def test_sampling_convergence_rate():
    c = Circuit(2).ry(1.0, 0).cx(0, 1).ry(0.4, 1)
    probs = run(c).probabilities()
    for shots in (1000, 16000):
        res = sample(c, shots, seed=shots)
        for i, p in enumerate(probs):
            f = res.counts.get(format(i, "02b"), 0) / shots
            assert abs(f - p) <= 5 * math.sqrt(p * (1 - p) / shots) + 1e-12


def test_shot_result_json(tmp_path):
    res = sample(Circuit(2).h(0), 64, seed=9)
    path = tmp_path / "shots.json"
    res.save(path)
    back = ShotResult.from_json(path.read_text())
    assert back.counts == res.counts and back.seed == 9 and back.shots == 64


def test_dense_reference():
    assert np.allclose(dense_expm_reference(PauliSum({"X": 1.0}), 0.0, PLUS), PLUS)
    w, t = 0.8, 1.3
    out = dense_expm_reference(PauliSum({"Z": w}), t, PLUS)
    assert np.allclose(out, [np.exp(-1j * w * t) / math.sqrt(2), np.exp(1j * w * t) / math.sqrt(2)])
    op = PauliSum({"XY": 0.3, "ZI": -0.5, "IZ": 0.1})
    psi = np.eye(4)[1]
    assert np.allclose(dense_expm_reference(op, 2.0, psi), expm(-2j * sum_matrix(op.terms, 2)) @ psi)


def test_statevector_validation():
    with pytest.raises(ValueError):
        StateVector([1, 1])
    with pytest.raises(DimensionError):
        StateVector([1, 0, 0])
    assert StateVector([1, 1], normalize=True).n_qubits == 1
