import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcu_taylor.pauli import (DimensionError, PauliSum, PauliTerm, apply_to_state, embed, expectation,
                              format_pauli_sum, from_dense, multiply, parse_pauli_sum, read_pauli_sum,
                              sum_multiply, sum_power, tensor, to_dense, truncate, write_pauli_sum)
from oracles import string_matrix, sum_matrix


def pauli_sums(n, max_terms=6):
    label = st.text(alphabet="IXYZ", min_size=n, max_size=n)
    coeff = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)
    return st.dictionaries(label, coeff, min_size=1, max_size=max_terms).map(lambda d: PauliSum(d, n))


def test_single_products():
    # [TRIVIAL] Pauli multiplication table
    xy = multiply(PauliTerm.from_label("X"), PauliTerm.from_label("Y"))
    assert xy == PauliTerm.from_label("Z", 1j)
    assert multiply(PauliTerm.from_label("XZ"), PauliTerm.from_label("YI")) == PauliTerm.from_label("ZZ", 1j)
    assert multiply(PauliTerm.from_label("Y"), PauliTerm.from_label("X")) == PauliTerm.from_label("Z", -1j)


def test_dense_examples():
    # [TRIVIAL] known matrices
    assert np.allclose(to_dense(PauliSum({"Y": 1})), [[0, -1j], [1j, 0]])
    xx_yy = to_dense(PauliSum({"XX": 0.5, "YY": 0.5}))
    swap_part = np.zeros((4, 4))
    swap_part[1, 2] = swap_part[2, 1] = 1
    assert np.allclose(xx_yy, swap_part)


def test_square_and_cancellation():
    assert (PauliSum({"X": 1, "Z": 1}) ** 2).terms == {"I": 2}
    assert len(PauliSum({"I": 1, "Z": 1}) @ PauliSum({"I": 1, "Z": -1})) == 0


def test_lexicographic_order():
    s = PauliSum({"ZI": 1, "IX": 2, "YY": 3, "XZ": 4, "II": 5})
    assert s.labels == ["II", "IX", "XZ", "YY", "ZI"]


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        sum_multiply(PauliSum({"X": 1}), PauliSum({"XX": 1}))
    with pytest.raises(DimensionError):
        PauliSum({"X": 1, "XX": 2})


def test_truncate_drops_small():
    s = truncate(PauliSum({"X": 1e-9, "Z": 1.0}), 1e-8)
    assert s.labels == ["Z"]


def test_tensor_and_embed_match_kron():
    a = PauliSum({"X": 0.5, "Z": 1j})
    b = PauliSum({"IY": 2.0, "ZZ": -1})
    assert np.allclose(to_dense(tensor(a, b)), np.kron(to_dense(a), to_dense(b)))
    e = embed(PauliSum({"XY": 1.0}), [2, 0], 3)
    assert e.terms == {"YIX": 1.0}


def test_text_round_trip(tmp_path):
    s = PauliSum({"XYZ": 0.25 - 1e-17j, "III": -3.5, "ZZI": 1j / 3})
    path = tmp_path / "op.txt"
    write_pauli_sum(s, path)
    assert read_pauli_sum(path) == s
    parsed = parse_pauli_sum("# comment\n1.0 0.0 XX\n\n0.5 0 XX  # repeated\n")
    assert parsed.terms == {"XX": 1.5}
    assert format_pauli_sum(parsed) == "1.5 0.0 XX\n"


def test_apply_and_expectation():
    psi = np.array([1, 1], dtype=complex) / np.sqrt(2)
    assert np.isclose(expectation(PauliSum({"X": 1}), psi), 1)
    assert np.isclose(expectation(PauliSum({"Z": 1}), psi), 0)
    assert np.allclose(apply_to_state(PauliSum({"Y": 1}), np.array([1, 0])), [0, 1j])


@settings(max_examples=60, deadline=None)
@given(pauli_sums(3))
def test_dense_matches_kron_oracle(s):
    assert np.allclose(to_dense(s), sum_matrix(s.terms, 3), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(pauli_sums(3))
def test_from_dense_round_trip(s):
    assert from_dense(sum_matrix(s.terms, 3)).approx_equal(s, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(pauli_sums(3), pauli_sums(3))
def test_product_methods_agree(a, b):
    ref = sum_matrix(a.terms, 3) @ sum_matrix(b.terms, 3)
    for method in ("symplectic", "dense"):
        assert np.allclose(to_dense(sum_multiply(a, b, method)), ref, atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(pauli_sums(2), pauli_sums(2), pauli_sums(2))
def test_associative_and_distributive(a, b, c):
    left = sum_multiply(sum_multiply(a, b), c)
    right = sum_multiply(a, sum_multiply(b, c))
    assert left.approx_equal(right, atol=1e-10)
    assert sum_multiply(a, b + c).approx_equal(sum_multiply(a, b) + sum_multiply(a, c), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(pauli_sums(3))
def test_dagger_is_conjugate_transpose(s):
    assert np.allclose(to_dense(s.dagger()), sum_matrix(s.terms, 3).conj().T)
    herm = s + s.dagger()
    assert herm.is_hermitian()


@settings(max_examples=30, deadline=None)
@given(pauli_sums(2, 4), st.integers(0, 5))
def test_power_matches_matrix_power(s, k):
    ref = np.linalg.matrix_power(sum_matrix(s.terms, 2), k)
    assert np.allclose(to_dense(sum_power(s, k)), ref, atol=1e-9 * max(1, np.abs(ref).max()))


def test_diagonal_flag():
    assert PauliSum({"ZI": 1, "IZ": 2, "II": 1}).is_diagonal()
    assert not PauliSum({"XI": 1}).is_diagonal()


def test_string_oracle_sanity():
    assert np.allclose(string_matrix("XY"), np.kron([[0, 1], [1, 0]], [[0, -1j], [1j, 0]]))
