"""Phased Pauli strings and complex-weighted Pauli sums.

Operators are stored in symplectic form: an ``x`` mask and a ``z`` mask per
string. Bit ``n - 1 - j`` of a mask belongs to qubit ``j``, so masks line up
with basis-state indices where qubit 0 is the most significant bit. The
letter at qubit ``j`` is I/X/Y/Z for (x, z) = (0,0)/(1,0)/(1,1)/(0,1), and a
string denotes ``i**popcount(x & z) * X**x Z**z``, i.e. a plain tensor
product of Pauli matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Union

import numpy as np

__all__ = [
    "DimensionError",
    "PauliTerm",
    "PauliSum",
    "multiply",
    "sum_multiply",
    "sum_power",
    "truncate",
    "tensor",
    "embed",
    "to_dense",
    "from_dense",
    "apply_to_state",
    "expectation",
    "read_pauli_sum",
    "write_pauli_sum",
    "parse_pauli_sum",
    "format_pauli_sum",
]

#: Coefficients smaller than this after like-term collection are dropped.
COLLECT_TOL = 1e-14
PHASE_TOL = 1e-12
MAX_DENSE_QUBITS = 12
MAX_QUBITS = 31

_I_POW = np.array([1, 1j, -1, -1j], dtype=complex)
_LETTER_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
# lexicographic rank of a letter, indexed by (x << 1) | z
_LEX_CODE = np.array([0, 3, 1, 2], dtype=np.int64)
_LETTERS = np.array(["I", "Z", "X", "Y"])


class DimensionError(ValueError):
    """Operands act on different numbers of qubits, or a size guard is exceeded."""


def _popcount(a):
    return np.bitwise_count(np.asarray(a, dtype=np.uint64)).astype(np.int64)


def _masks_from_label(label: str) -> tuple[int, int]:
    n = len(label)
    x = z = 0
    for j, ch in enumerate(label.upper()):
        try:
            xb, zb = _LETTER_TO_XZ[ch]
        except KeyError:
            raise ValueError(f"invalid Pauli letter {ch!r} in {label!r}") from None
        bit = n - 1 - j
        x |= xb << bit
        z |= zb << bit
    return x, z


def _label_from_masks(x: int, z: int, n: int) -> str:
    chars = []
    for j in range(n):
        bit = n - 1 - j
        chars.append(_LETTERS[(((x >> bit) & 1) << 1) | ((z >> bit) & 1)])
    return "".join(chars)


def _lex_keys(x: np.ndarray, z: np.ndarray, n: int) -> np.ndarray:
    key = np.zeros(len(x), dtype=np.int64)
    x = x.astype(np.int64)
    z = z.astype(np.int64)
    for j in range(n):
        bit = n - 1 - j
        code = _LEX_CODE[(((x >> bit) & 1) << 1) | ((z >> bit) & 1)]
        key = key * 4 + code
    return key


@dataclass(frozen=True, eq=False)
class PauliTerm:
    """A single Pauli string with a unit-modulus phase."""

    n_qubits: int
    x_mask: int
    z_mask: int
    phase: complex = 1.0

    def __post_init__(self):
        if abs(abs(self.phase) - 1.0) > PHASE_TOL:
            raise ValueError(f"phase must have unit modulus, got {self.phase!r}")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise ValueError("mask has bits outside the register")
        object.__setattr__(self, "phase", complex(self.phase))

    @classmethod
    def from_label(cls, label: str, phase: complex = 1.0) -> "PauliTerm":
        x, z = _masks_from_label(label)
        return cls(len(label), x, z, phase)

    @property
    def letters(self) -> str:
        return _label_from_masks(self.x_mask, self.z_mask, self.n_qubits)

    def letter(self, qubit: int) -> str:
        return self.letters[qubit]

    def __eq__(self, other):
        if not isinstance(other, PauliTerm):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and self.x_mask == other.x_mask
            and self.z_mask == other.z_mask
            and abs(self.phase - other.phase) <= PHASE_TOL
        )

    def __hash__(self):
        return hash((self.n_qubits, self.x_mask, self.z_mask))

    def __mul__(self, other):
        if isinstance(other, PauliTerm):
            return multiply(self, other)
        return NotImplemented

    def __repr__(self):
        return f"PauliTerm({self.phase!r} * {self.letters})"


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Exact product ``a @ b`` including the accumulated power of i."""
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    x3 = a.x_mask ^ b.x_mask
    z3 = a.z_mask ^ b.z_mask
    e = (
        (a.x_mask & a.z_mask).bit_count()
        + (b.x_mask & b.z_mask).bit_count()
        + 2 * (a.z_mask & b.x_mask).bit_count()
        - (x3 & z3).bit_count()
    ) % 4
    return PauliTerm(a.n_qubits, x3, z3, a.phase * b.phase * _I_POW[e])


class PauliSum:
    """Immutable sum of Pauli strings with complex coefficients.

    Phases are folded into the coefficients, so each letters-string appears
    once. Terms iterate in lexicographic order of their letters (I<X<Y<Z).

    >>> PauliSum({"X": 0.5, "Y": 0.5j}).terms
    {'X': (0.5+0j), 'Y': 0.5j}
    """

    __slots__ = ("n_qubits", "_x", "_z", "_c")
    # let numpy scalars defer to __rmul__
    __array_ufunc__ = None

    def __init__(self, terms: Union[Mapping[str, complex], Iterable], n_qubits: int | None = None):
        if isinstance(terms, Mapping):
            items = list(terms.items())
        else:
            items = list(terms)
        if n_qubits is None:
            if not items:
                raise ValueError("n_qubits is required for an empty PauliSum")
            n_qubits = len(items[0][0])
        xs, zs, cs = [], [], []
        for label, coeff in items:
            if len(label) != n_qubits:
                raise DimensionError(f"label {label!r} does not have {n_qubits} letters")
            x, z = _masks_from_label(label)
            xs.append(x)
            zs.append(z)
            cs.append(complex(coeff))
        self._init_arrays(n_qubits, np.array(xs, dtype=np.int64), np.array(zs, dtype=np.int64),
                          np.array(cs, dtype=complex), drop=0.0)

    def _init_arrays(self, n, x, z, c, drop):
        if n > MAX_QUBITS:
            raise DimensionError(f"at most {MAX_QUBITS} qubits supported")
        self.n_qubits = int(n)
        if len(x):
            keys = x * (1 << n) + z
            uniq, inv = np.unique(keys, return_inverse=True)
            if len(uniq) != len(keys):
                c = (np.bincount(inv, weights=c.real, minlength=len(uniq))
                     + 1j * np.bincount(inv, weights=c.imag, minlength=len(uniq)))
                x = uniq >> n
                z = uniq & ((1 << n) - 1)
            keep = np.abs(c) > drop if drop > 0 else c != 0
            x, z, c = x[keep], z[keep], c[keep]
            order = np.argsort(_lex_keys(x, z, n), kind="stable")
            x, z, c = x[order], z[order], c[order]
        self._x = np.ascontiguousarray(x, dtype=np.int64)
        self._z = np.ascontiguousarray(z, dtype=np.int64)
        self._c = np.ascontiguousarray(c, dtype=complex)
        for arr in (self._x, self._z, self._c):
            arr.setflags(write=False)

    @classmethod
    def from_arrays(cls, n_qubits, x, z, coeffs, drop: float = COLLECT_TOL) -> "PauliSum":
        """Build from mask/coefficient arrays, collecting like terms."""
        obj = cls.__new__(cls)
        obj._init_arrays(n_qubits, np.asarray(x, dtype=np.int64), np.asarray(z, dtype=np.int64),
                         np.asarray(coeffs, dtype=complex), drop)
        return obj

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls.from_arrays(n_qubits, [0], [0], [coeff], drop=0.0)

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls.from_arrays(n_qubits, [], [], [])

    @classmethod
    def from_term(cls, term: PauliTerm, coeff: complex = 1.0) -> "PauliSum":
        return cls.from_arrays(term.n_qubits, [term.x_mask], [term.z_mask],
                               [coeff * term.phase], drop=0.0)

    @classmethod
    def single(cls, label: str, coeff: complex = 1.0) -> "PauliSum":
        return cls({label: coeff})

    # -- views -------------------------------------------------------------
    @property
    def x_masks(self) -> np.ndarray:
        return self._x

    @property
    def z_masks(self) -> np.ndarray:
        return self._z

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def labels(self) -> list[str]:
        return [_label_from_masks(int(x), int(z), self.n_qubits) for x, z in zip(self._x, self._z)]

    @property
    def terms(self) -> dict[str, complex]:
        return dict(zip(self.labels, (complex(c) for c in self._c)))

    def phased_terms(self) -> list[tuple[float, PauliTerm]]:
        """Split each coefficient into magnitude and a unit phase on the string."""
        out = []
        for x, z, c in zip(self._x, self._z, self._c):
            mag = abs(c)
            out.append((mag, PauliTerm(self.n_qubits, int(x), int(z), c / mag)))
        return out

    def __len__(self):
        return len(self._c)

    def __iter__(self) -> Iterator[tuple[str, complex]]:
        return iter(self.terms.items())

    def __contains__(self, label):
        return label in self.terms

    def __getitem__(self, label: str) -> complex:
        return self.terms.get(label, 0j)

    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self._c)))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self._c.imag) <= tol))

    def is_diagonal(self) -> bool:
        return bool(np.all(self._x == 0))

    def dagger(self) -> "PauliSum":
        return PauliSum.from_arrays(self.n_qubits, self._x, self._z, np.conj(self._c), drop=0.0)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other):
        if other.n_qubits != self.n_qubits:
            raise DimensionError(f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}")

    def __add__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        return PauliSum.from_arrays(
            self.n_qubits,
            np.concatenate([self._x, other._x]),
            np.concatenate([self._z, other._z]),
            np.concatenate([self._c, other._c]),
        )

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            return sum_multiply(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return PauliSum.from_arrays(self.n_qubits, self._x, self._z, self._c * other, drop=0.0)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __matmul__(self, other):
        return sum_multiply(self, other)

    def __pow__(self, k: int):
        return sum_power(self, k)

    def approx_equal(self, other: "PauliSum", atol: float = 1e-12) -> bool:
        if other.n_qubits != self.n_qubits:
            return False
        diff = self - other
        return bool(np.all(np.abs(diff._c) <= atol))

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return (self.n_qubits == other.n_qubits and np.array_equal(self._x, other._x)
                and np.array_equal(self._z, other._z) and np.array_equal(self._c, other._c))

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{lab}: {c:.6g}" for lab, c in list(self.terms.items())[:8])
        more = "" if len(self) <= 8 else f", ... ({len(self)} terms)"
        return f"PauliSum({{{body}{more}}}, n_qubits={self.n_qubits})"


def _phase_exp(x, z):
    return _popcount(np.bitwise_and(x, z))


def _collect(n, x, z, c):
    keys = x * (1 << n) + z
    uniq, inv = np.unique(keys, return_inverse=True)
    cc = (np.bincount(inv, weights=c.real, minlength=len(uniq))
          + 1j * np.bincount(inv, weights=c.imag, minlength=len(uniq)))
    return uniq >> n, uniq & ((1 << n) - 1), cc


def _symplectic_product(a: PauliSum, b: PauliSum, chunk: int = 1 << 22) -> PauliSum:
    n = a.n_qubits
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        return PauliSum.zero(n)
    ea = _phase_exp(a._x, a._z)
    eb = _phase_exp(b._x, b._z)
    acc_x = np.zeros(0, dtype=np.int64)
    acc_z = np.zeros(0, dtype=np.int64)
    acc_c = np.zeros(0, dtype=complex)
    rows = max(1, chunk // nb)
    for start in range(0, na, rows):
        sl = slice(start, start + rows)
        xa, za = a._x[sl, None], a._z[sl, None]
        x3 = xa ^ b._x[None, :]
        z3 = za ^ b._z[None, :]
        e = (ea[sl, None] + eb[None, :] + 2 * _popcount(za & b._x[None, :]) - _phase_exp(x3, z3)) % 4
        c = a._c[sl, None] * b._c[None, :] * _I_POW[e]
        # collect per chunk so memory tracks the result size, not na * nb
        acc_x, acc_z, acc_c = _collect(n, np.concatenate([acc_x, x3.ravel()]),
                                       np.concatenate([acc_z, z3.ravel()]),
                                       np.concatenate([acc_c, c.ravel()]))
    return PauliSum.from_arrays(n, acc_x, acc_z, acc_c)


def _dense_product(a: PauliSum, b: PauliSum) -> PauliSum:
    return from_dense(to_dense(a) @ to_dense(b))


def sum_multiply(a: PauliSum, b: PauliSum, method: str = "auto") -> PauliSum:
    """Distributive product of two Pauli sums with like-term collection.

    ``method`` is ``"symplectic"`` (pairwise string products), ``"dense"``
    (multiply 2^n x 2^n matrices and project back onto the Pauli basis) or
    ``"auto"``, which picks whichever is cheaper. Both are exact up to
    floating-point rounding.
    """
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    n = a.n_qubits
    if method == "auto":
        pair_cost = len(a) * len(b)
        dense_cost = (4 ** n) * (n + 2) + 8 ** n
        method = "dense" if n <= 10 and pair_cost > 4 * dense_cost else "symplectic"
    if method == "dense":
        return _dense_product(a, b)
    if method == "symplectic":
        return _symplectic_product(a, b)
    raise ValueError(f"unknown method {method!r}")


def sum_power(a: PauliSum, k: int, method: str = "auto") -> PauliSum:
    """``a**k`` by repeated squaring; ``a**0`` is the identity sum."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    result = PauliSum.identity(a.n_qubits)
    base = a
    first = True
    while k:
        if k & 1:
            result = base if first else sum_multiply(result, base, method)
            first = False
        k >>= 1
        if k:
            base = sum_multiply(base, base, method)
    return result


def truncate(a: PauliSum, eps: float) -> PauliSum:
    """Drop every term whose coefficient magnitude is below ``eps``."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    keep = np.abs(a._c) >= eps
    return PauliSum.from_arrays(a.n_qubits, a._x[keep], a._z[keep], a._c[keep], drop=0.0)


def tensor(a: PauliSum, b: PauliSum) -> PauliSum:
    """Kronecker product; ``a`` occupies the leading qubits."""
    nb = b.n_qubits
    xx = (a._x[:, None] << nb) | b._x[None, :]
    zz = (a._z[:, None] << nb) | b._z[None, :]
    cc = a._c[:, None] * b._c[None, :]
    return PauliSum.from_arrays(a.n_qubits + nb, xx.ravel(), zz.ravel(), cc.ravel(), drop=0.0)


def _spread(masks: np.ndarray, n_in: int, qubits, n_out: int) -> np.ndarray:
    out = np.zeros_like(masks)
    for i, q in enumerate(qubits):
        bit = (masks >> (n_in - 1 - i)) & 1
        out |= bit << (n_out - 1 - q)
    return out


def embed(a: PauliSum, qubits, n_qubits: int) -> PauliSum:
    """Place ``a`` on ``qubits`` of an ``n_qubits`` register (identity elsewhere)."""
    qubits = list(qubits)
    if len(qubits) != a.n_qubits or len(set(qubits)) != len(qubits):
        raise DimensionError("need one distinct target qubit per operator qubit")
    if any(q < 0 or q >= n_qubits for q in qubits):
        raise DimensionError("target qubit out of range")
    return PauliSum.from_arrays(n_qubits, _spread(a._x, a.n_qubits, qubits, n_qubits),
                                _spread(a._z, a.n_qubits, qubits, n_qubits), a._c, drop=0.0)


def _wht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis."""
    a = np.array(a, dtype=complex, copy=True)
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*lead, size // (2 * h), 2, h)
        u0 = v[..., 0, :].copy()
        u1 = v[..., 1, :]
        v[..., 0, :] = u0 + u1
        v[..., 1, :] = u0 - u1
        h *= 2
    return a


def to_dense(a: Union[PauliSum, PauliTerm], max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix of a term or sum."""
    if isinstance(a, PauliTerm):
        a = PauliSum.from_term(a)
    n = a.n_qubits
    if n > max_qubits:
        raise DimensionError(f"dense matrix guard: {n} > {max_qubits} qubits")
    dim = 1 << n
    grid = np.zeros((dim, dim), dtype=complex)
    grid[a._x, a._z] += a._c * _I_POW[_phase_exp(a._x, a._z) % 4]
    xs = np.unique(a._x)
    vals = _wht(grid[xs])
    b = np.arange(dim)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[xs[:, None] ^ b[None, :], np.broadcast_to(b, (len(xs), dim))] = vals
    return mat


def from_dense(mat: np.ndarray, drop: float = COLLECT_TOL) -> PauliSum:
    """Pauli decomposition of a square matrix by Hilbert-Schmidt projection."""
    mat = np.asarray(mat, dtype=complex)
    dim = mat.shape[0]
    n = int(round(math.log2(dim)))
    if mat.shape != (dim, dim) or (1 << n) != dim:
        raise DimensionError(f"expected a 2^n square matrix, got shape {mat.shape}")
    b = np.arange(dim)
    x = b[:, None]
    v = mat[x ^ b[None, :], b[None, :]]
    coeff = _wht(v) / dim
    xx, zz = np.meshgrid(b, b, indexing="ij")
    coeff = coeff / _I_POW[_phase_exp(xx, zz) % 4]
    return PauliSum.from_arrays(n, xx.ravel(), zz.ravel(), coeff.ravel(), drop=drop)


def apply_to_state(a: PauliSum, psi: np.ndarray) -> np.ndarray:
    """Return ``a |psi>`` without forming the dense matrix."""
    psi = np.asarray(psi, dtype=complex)
    dim = 1 << a.n_qubits
    if psi.shape != (dim,):
        raise DimensionError(f"state has {psi.shape} amplitudes, operator needs {dim}")
    b = np.arange(dim)
    out = np.zeros(dim, dtype=complex)
    for x, z, c, e in zip(a._x, a._z, a._c, _phase_exp(a._x, a._z)):
        sign = 1 - 2 * (_popcount(b & z) & 1)
        out[b ^ x] += (c * _I_POW[e % 4]) * sign * psi
    return out


def expectation(a: Union[PauliSum, PauliTerm], psi: np.ndarray) -> complex:
    """``<psi| a |psi>``."""
    if isinstance(a, PauliTerm):
        a = PauliSum.from_term(a)
    psi = np.asarray(psi, dtype=complex)
    return complex(np.vdot(psi, apply_to_state(a, psi)))


# -- text format ---------------------------------------------------------------

def format_pauli_sum(a: PauliSum) -> str:
    """One ``<re> <im> <letters>`` line per term."""
    lines = [f"{c.real!r} {c.imag!r} {lab}" for lab, c in a]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_pauli_sum(text: str, n_qubits: int | None = None) -> PauliSum:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected '<re> <im> <letters>', got {raw!r}")
        re_, im_, label = parts
        entries.append((label, complex(float(re_), float(im_))))
    if n_qubits is None and not entries:
        raise ValueError("empty Pauli-sum file; pass n_qubits")
    # repeated strings are summed, matching the canonical form
    n = n_qubits if n_qubits is not None else len(entries[0][0])
    xs, zs, cs = [], [], []
    for label, c in entries:
        if len(label) != n:
            raise DimensionError(f"label {label!r} does not have {n} letters")
        x, z = _masks_from_label(label)
        xs.append(x)
        zs.append(z)
        cs.append(c)
    return PauliSum.from_arrays(n, xs, zs, cs, drop=0.0)


def read_pauli_sum(path: Union[str, Path]) -> PauliSum:
    return parse_pauli_sum(Path(path).read_text())


def write_pauli_sum(a: PauliSum, path: Union[str, Path]) -> None:
    Path(path).write_text(format_pauli_sum(a))
