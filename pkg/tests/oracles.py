"""Independent reference constructions used by the tests.

Nothing here imports the library's dense conversion or synthesis code: Pauli
strings are built with np.kron, exponentials with scipy.linalg.expm and
multiplexors as explicit block matrices.
"""

from functools import reduce

import numpy as np
from scipy.linalg import expm

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_all(mats):
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


def string_matrix(label):
    return kron_all([PAULI[ch] for ch in label])


def sum_matrix(terms, n):
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for label, c in terms.items():
        out += c * string_matrix(label)
    return out


def project_pauli(mat, tol=1e-13):
    n = int(np.log2(mat.shape[0]))
    from itertools import product
    out = {}
    for letters in product("IXYZ", repeat=n):
        label = "".join(letters)
        c = np.trace(string_matrix(label).conj().T @ mat) / (1 << n)
        if abs(c) > tol:
            out[label] = complex(c)
    return out


def ladder_matrix(levels, dim):
    a = np.zeros((dim, dim))
    for n in range(1, levels):
        a[n - 1, n] = np.sqrt(n)
    return a


def reorder_bits(mat, n_bits):
    """Conjugate ``mat`` by the bit-reversal permutation on n_bits."""
    perm = [int(format(i, f"0{n_bits}b")[::-1], 2) for i in range(1 << n_bits)]
    return mat[np.ix_(perm, perm)]


def rot(axis, theta):
    return expm(-0.5j * theta * PAULI[{"rx": "X", "ry": "Y", "rz": "Z"}[axis]])


def block_diag(blocks):
    d = sum(b.shape[0] for b in blocks)
    out = np.zeros((d, d), dtype=complex)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def select_oracle(terms, k, n):
    """sum_l |l><l| ⊗ (c_l/|c_l|) P_l with identity on unused patterns."""
    blocks = [np.eye(1 << n, dtype=complex)] * (1 << k)
    blocks = list(blocks)
    for ell, (label, c) in enumerate(terms):
        blocks[ell] = (c / abs(c)) * string_matrix(label)
    return block_diag(blocks)


def random_unitary(dim, rng):
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_terms(rng, n, count, letters="IXYZ"):
    seen = {}
    while len(seen) < count:
        label = "".join(rng.choice(list(letters), size=n))
        seen[label] = complex(rng.normal(), rng.normal())
    return seen
