import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcu_taylor.circuit import unitary_of
from lcu_taylor.pauli import PauliSum
from lcu_taylor.synth import (MultiplexorSpec, SynthesisError, crossover_report, demultiplex_pair,
                              multiplexor_cost, synth_diagonal, synth_lcu, synth_multiplexed_rotation,
                              synth_multiplexed_u2, synth_oaa, synth_prepare, synth_select,
                              synth_state_prep, synth_trotter, synth_trotter_step, unary_iteration_cost)
from oracles import block_diag, random_terms, random_unitary, rot, select_oracle, sum_matrix

from scipy.linalg import expm


def test_demultiplex_identities():
    rng = np.random.default_rng(0)
    for _ in range(100):
        v0, v1 = random_unitary(2, rng), random_unitary(2, rng)
        s = demultiplex_pair(v0, v1)
        assert s.residual(v0, v1) < 1e-10
        # W diagonalises r U r with eigenvalues +-i
        m = s.r @ v0 @ v1.conj().T @ s.r
        assert np.allclose(s.W.conj().T @ m @ s.W, np.diag([1j, -1j]), atol=1e-10)


def test_demultiplex_equal_and_degenerate_pairs():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    for v0, v1 in [(np.eye(2), np.eye(2)), (x, x), (x, np.eye(2)), (np.eye(2), -np.eye(2))]:
        assert demultiplex_pair(v0, v1).residual(v0, v1) < 1e-10


def test_demultiplex_rejects_non_unitary():
    with pytest.raises(SynthesisError):
        demultiplex_pair(np.ones((2, 2)), np.eye(2))


@pytest.mark.parametrize("k", range(5))
@pytest.mark.parametrize("axis", ["ry", "rz"])
def test_multiplexed_rotation_exact(k, axis):
    rng = np.random.default_rng(k)
    angles = rng.normal(size=1 << k) * 2
    c = synth_multiplexed_rotation(axis, angles, list(range(k)), k)
    assert np.allclose(unitary_of(c), block_diag([rot(axis, a) for a in angles]), atol=1e-10)
    assert c.two_qubit_count() == (1 << k if k else 0)


def test_multiplexed_rotation_control_order():
    # controls listed most significant first, even when out of qubit order
    angles = [0.1, 0.2, 0.3, 0.4]
    c = synth_multiplexed_rotation("ry", angles, [1, 0], 2)
    u = unitary_of(c)
    for c0 in (0, 1):
        for c1 in (0, 1):
            idx = c1 * 4 + c0 * 2
            block = u[idx:idx + 2, idx:idx + 2]
            assert np.allclose(block, rot("ry", angles[c0 * 2 + c1]))


@pytest.mark.parametrize("k", range(5))
def test_multiplexed_u2_exact_and_count(k):
    rng = np.random.default_rng(100 + k)
    mats = [random_unitary(2, rng) for _ in range(1 << k)]
    spec = MultiplexorSpec(tuple(mats), tuple(range(k)), k)
    c = synth_multiplexed_u2(spec)
    assert np.allclose(unitary_of(c), block_diag(mats), atol=1e-9)
    assert c.two_qubit_count() <= (2 ** k - 1) + (2 ** (k + 1) - 2)


def test_diagonal_synthesis():
    rng = np.random.default_rng(5)
    for m in range(1, 5):
        phases = rng.normal(size=1 << m)
        c = synth_diagonal(phases, list(range(m)))
        assert np.allclose(unitary_of(c), np.diag(np.exp(1j * phases)), atol=1e-10)
        assert c.two_qubit_count() <= max(0, 2 ** m - 2)


def test_state_prep_random_and_sparse():
    rng = np.random.default_rng(9)
    for n in range(1, 6):
        psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        psi /= np.linalg.norm(psi)
        assert np.allclose(unitary_of(synth_state_prep(psi))[:, 0], psi, atol=1e-10)
    basis = np.zeros(8)
    basis[5] = 1
    c = synth_state_prep(basis)
    assert c.two_qubit_count() == 0
    assert np.allclose(unitary_of(c)[:, 0], basis)


def test_prepare_amplitudes_and_count():
    rng = np.random.default_rng(2)
    for L in (1, 2, 3, 5, 9, 16):
        w = rng.random(L) + 0.01
        k = max(0, math.ceil(math.log2(L)))
        c = synth_prepare(w, list(range(k)), max(k, 1))
        col = unitary_of(c)[:, 0]
        assert np.allclose(col[:L], np.sqrt(w / w.sum()), atol=1e-10)
        assert c.two_qubit_count() <= max(0, 2 ** k - 2)


def test_select_identity_only():
    c = synth_select(PauliSum({"III": 1.0}))
    assert c.two_qubit_count() == 0
    assert np.allclose(unitary_of(c), np.eye(8))


def test_select_examples():
    # [DERIVED] explicit block matrices
    for terms in ({"X": 1, "Z": -1}, {"XI": 1j, "ZY": 0.5, "YY": -2, "II": 1}):
        op = PauliSum(terms)
        k = max(1, math.ceil(math.log2(len(op))))
        c = synth_select(op)
        ref = select_oracle(list(op), k, op.n_qubits)
        assert np.allclose(unitary_of(c), ref, atol=1e-10)
        assert c.two_qubit_count() <= multiplexor_cost(k, op.n_qubits)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(2, 8), st.integers(0, 2 ** 31 - 1))
def test_select_random(n, L, seed):
    rng = np.random.default_rng(seed)
    L = min(L, 4 ** n)
    terms = random_terms(rng, n, L)
    op = PauliSum(terms)
    k = max(1, math.ceil(math.log2(len(op))))
    c = synth_select(op)
    assert np.allclose(unitary_of(c), select_oracle(list(op), k, n), atol=1e-9)
    assert c.two_qubit_count() <= multiplexor_cost(k, n)


def test_select_bound_value():
    # [PAPER] 4 prepare qubits, 5 system qubits
    assert multiplexor_cost(4, 5) == 169


def test_lcu_block_encoding():
    rng = np.random.default_rng(4)
    terms = random_terms(rng, 2, 5)
    op = PauliSum(terms)
    u = unitary_of(synth_lcu(op))
    assert np.allclose(u[:4, :4], sum_matrix(terms, 2) / op.l1_norm(), atol=1e-10)


def test_oaa_unitary_case():
    # (I + iX + iY + iZ)/2 is unitary with |alpha|_1 = 2, so p = 1/4
    op = PauliSum({"I": 0.5, "X": 0.5j, "Y": 0.5j, "Z": 0.5j})
    u = unitary_of(synth_oaa(op, 1))
    psi = np.array([0.6, 0.8j])
    out = u[:, :2] @ psi
    assert math.isclose(np.vdot(out[:2], out[:2]).real, 1.0, abs_tol=1e-9)


def test_oaa_non_unitary_case():
    op = PauliSum({"I": 0.7, "X": 0.2, "Z": -0.4j})
    a = op.l1_norm()
    y = sum_matrix(op.terms, 1)
    psi = np.array([0.3, 0.4 + np.sqrt(0.75)])
    psi = psi / np.linalg.norm(psi)
    u = unitary_of(synth_oaa(op, 1))
    out = (u[:, :2] @ psi)[:2]
    amp = 3 * y - 4 / a ** 2 * y @ y.conj().T @ y
    expected = np.vdot(amp @ psi, amp @ psi).real / a ** 2
    assert math.isclose(np.vdot(out, out).real, expected, abs_tol=1e-9)


def test_trotter_single_gadgets():
    for label in ("X", "Y", "Z", "XY", "ZIZ", "YXZ"):
        op = PauliSum({label: 0.3})
        c = synth_trotter_step(op, 0.7)
        assert np.allclose(unitary_of(c), expm(-0.7j * sum_matrix(op.terms, op.n_qubits)), atol=1e-12)


def test_trotter_converges():
    op = PauliSum({"XX": 0.4, "ZI": 0.3, "IY": -0.2, "II": 0.1})
    exact = expm(-1j * sum_matrix(op.terms, 2))
    errs = [np.abs(unitary_of(synth_trotter(op, 1 / s, s)) - exact).max() for s in (4, 8, 16)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] / errs[2] == pytest.approx(2, rel=0.2)


def test_cost_models():
    assert unary_iteration_cost(4, 20) == 745
    assert multiplexor_cost(4, 20) == 634
    report = crossover_report()
    # unary minus multiplexor is 15 * 2^(k-1) + n - 29 > 0 for k >= 2
    assert all(wins == list(range(1, 101)) for wins in report["multiplexor_cheaper"].values())
    assert report["claim_holds"] is False
    assert report["mismatches"]
