"""Jaynes-Cummings and Rabi-Hubbard Hamiltonians on qubits.

Bosonic modes use the binary encoding: Fock level ``n`` of a mode is stored
in ``ceil(log2(levels))`` qubits. Two-level atoms use one qubit with the
excited state ``e = |0>`` and ground state ``g = |1>``, so ``sigma_z = Z``
and ``sigma_+ = |0><1| = (X + iY)/2``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .pauli import PauliSum, embed, sum_multiply, tensor
from .sim import StateVector

__all__ = [
    "BosonEncoding",
    "ModelSpec",
    "ModelError",
    "encode_boson_op",
    "transition_op",
    "build_jc_hamiltonian",
    "build_rh_hamiltonian",
    "build_hamiltonian",
    "build_initial_state",
    "jc_excitation_number",
    "site_qubits",
    "mott_angle",
]

BIT_ORDERS = ("little_endian", "big_endian")
MODELS = ("jaynes_cummings", "rabi_hubbard")
LAYOUTS = ("atom_first", "atom_last")


class ModelError(ValueError):
    """Inconsistent model parameters."""


@dataclass(frozen=True)
class BosonEncoding:
    n_levels: int
    bit_order: str = "big_endian"

    def __post_init__(self):
        if self.n_levels < 2:
            raise ModelError("a boson mode needs at least 2 levels")
        if self.bit_order not in BIT_ORDERS:
            raise ModelError(f"bit_order must be one of {BIT_ORDERS}")

    @property
    def n_qubits(self) -> int:
        return max(1, math.ceil(math.log2(self.n_levels)))

    def bits(self, level: int) -> str:
        """Qubit values (register order) encoding Fock ``level``."""
        s = format(level, f"0{self.n_qubits}b")
        return s if self.bit_order == "big_endian" else s[::-1]

    def index(self, level: int) -> int:
        return int(self.bits(level), 2)


_ONE_QUBIT = {
    ("0", "0"): {"I": 0.5, "Z": 0.5},
    ("0", "1"): {"X": 0.5, "Y": 0.5j},
    ("1", "0"): {"X": 0.5, "Y": -0.5j},
    ("1", "1"): {"I": 0.5, "Z": -0.5},
}


def transition_op(row: str, col: str) -> PauliSum:
    """``|row><col|`` for bit strings of equal length, as a Pauli sum."""
    if len(row) != len(col) or not row:
        raise ModelError("bit strings must be non-empty and of equal length")
    out = None
    for a, b in zip(row, col):
        factor = PauliSum(_ONE_QUBIT[(a, b)])
        out = factor if out is None else tensor(out, factor)
    return out


def encode_boson_op(kind: str, enc: BosonEncoding) -> PauliSum:
    """Truncated ladder/number operator of one mode, zero outside the cutoff."""
    if kind not in ("annihilate", "create", "number"):
        raise ModelError(f"unknown boson operator {kind!r}")
    total = PauliSum.zero(enc.n_qubits)
    for n in range(1, enc.n_levels):
        if kind == "number":
            total = total + n * transition_op(enc.bits(n), enc.bits(n))
        elif kind == "annihilate":
            total = total + math.sqrt(n) * transition_op(enc.bits(n - 1), enc.bits(n))
        else:
            total = total + math.sqrt(n) * transition_op(enc.bits(n), enc.bits(n - 1))
    return total


def mott_angle(g: float, delta: float) -> float:
    """theta with tan(2 theta) = 2g / delta."""
    return 0.5 * math.atan2(2 * g, delta)


@dataclass(frozen=True)
class ModelSpec:
    """Model parameters in units of the cavity frequency."""

    model: str
    omega_c: float = 1.0
    omega_a: float = 1.0
    g: float = 0.1
    J: float = 0.0
    n_cavities: int = 1
    max_photons: int = 3
    N_start: int = 0
    bit_order: str = "big_endian"
    layout: Optional[str] = None
    periodic: bool = False

    def __post_init__(self):
        if self.model not in MODELS:
            raise ModelError(f"model must be one of {MODELS}")
        for name in ("omega_c", "omega_a", "g", "J"):
            if not math.isfinite(getattr(self, name)):
                raise ModelError(f"{name} must be finite")
        if self.max_photons < 1:
            raise ModelError("max_photons must be >= 1")
        if self.n_cavities < 1:
            raise ModelError("n_cavities must be >= 1")
        if not 0 <= self.N_start <= self.max_photons:
            raise ModelError("N_start must lie in [0, max_photons]")
        if self.bit_order not in BIT_ORDERS:
            raise ModelError(f"bit_order must be one of {BIT_ORDERS}")
        if self.layout is None:
            default = "atom_first" if self.model == "rabi_hubbard" else "atom_last"
            object.__setattr__(self, "layout", default)
        if self.layout not in LAYOUTS:
            raise ModelError(f"layout must be one of {LAYOUTS}")

    @property
    def delta(self) -> float:
        return self.omega_a - self.omega_c

    @property
    def theta(self) -> float:
        return mott_angle(self.g, self.delta)

    @property
    def encoding(self) -> BosonEncoding:
        return BosonEncoding(self.max_photons + 1, self.bit_order)

    @property
    def n_sites(self) -> int:
        return 1 if self.model == "jaynes_cummings" else self.n_cavities

    @property
    def n_qubits(self) -> int:
        return self.n_sites * (self.encoding.n_qubits + 1)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        data = dict(data)
        delta = data.pop("delta", None)
        data.pop("theta", None)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ModelError(f"unknown model keys: {sorted(unknown)}")
        if delta is not None:
            implied = data.get("omega_c", 1.0) + delta
            if "omega_a" in data and not math.isclose(data["omega_a"], implied, abs_tol=1e-12):
                raise ModelError("omega_a and delta disagree")
            data["omega_a"] = implied
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ModelSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["delta"] = self.delta
        d["theta"] = self.theta
        return d

    def with_(self, **changes) -> "ModelSpec":
        return replace(self, **changes)


def site_qubits(spec: ModelSpec, site: int) -> tuple[int, list[int]]:
    """(atom qubit, boson qubits) of a site."""
    nb = spec.encoding.n_qubits
    base = site * (nb + 1)
    if spec.layout == "atom_first":
        return base, list(range(base + 1, base + 1 + nb))
    return base + nb, list(range(base, base + nb))


def _site_terms(spec: ModelSpec, site: int):
    n = spec.n_qubits
    atom, bos = site_qubits(spec, site)
    enc = spec.encoding
    ops = {k: embed(encode_boson_op(k, enc), bos, n) for k in ("annihilate", "create", "number")}
    sigma = {
        "z": embed(PauliSum({"Z": 1.0}), [atom], n),
        "x": embed(PauliSum({"X": 1.0}), [atom], n),
        "plus": embed(PauliSum({"X": 0.5, "Y": 0.5j}), [atom], n),
        "minus": embed(PauliSum({"X": 0.5, "Y": -0.5j}), [atom], n),
        "excited": embed(PauliSum({"I": 0.5, "Z": 0.5}), [atom], n),
    }
    return ops, sigma


def _hermitize(h: PauliSum) -> PauliSum:
    # coefficients of a Hermitian sum are real; clear round-off imaginary parts
    return PauliSum.from_arrays(h.n_qubits, h.x_masks, h.z_masks, h.coeffs.real.astype(complex))


def build_jc_hamiltonian(spec: ModelSpec) -> PauliSum:
    """omega_c b^†b + omega_a Z/2 + g (b sigma_+ + b^† sigma_-)."""
    if spec.model != "jaynes_cummings":
        raise ModelError("spec is not a Jaynes-Cummings model")
    b, s = _site_terms(spec, 0)
    h = (spec.omega_c * b["number"] + (spec.omega_a / 2) * s["z"]
         + spec.g * (sum_multiply(b["annihilate"], s["plus"]) + sum_multiply(b["create"], s["minus"])))
    return _hermitize(h)


def jc_excitation_number(spec: ModelSpec) -> PauliSum:
    """b^†b + |e><e|, conserved by the JC Hamiltonian."""
    b, s = _site_terms(spec, 0)
    return b["number"] + s["excited"]


def _neighbour_pairs(n_sites: int, periodic: bool):
    pairs = [(i, i + 1) for i in range(n_sites - 1)]
    if periodic and n_sites > 2:
        pairs.append((n_sites - 1, 0))
    return pairs


def build_rh_hamiltonian(spec: ModelSpec) -> PauliSum:
    """Rabi-Hubbard chain: local Rabi terms plus -J photon hopping.

    Each unordered nearest-neighbour pair contributes ``-J (b_i^† b_j + b_i b_j^†)``
    once.
    """
    if spec.model != "rabi_hubbard":
        raise ModelError("spec is not a Rabi-Hubbard model")
    n = spec.n_qubits
    sites = [_site_terms(spec, i) for i in range(spec.n_cavities)]
    h = PauliSum.zero(n)
    for b, s in sites:
        h = (h + spec.omega_c * b["number"] + spec.omega_a * s["excited"]
             + spec.g * sum_multiply(s["x"], b["annihilate"] + b["create"]))
    for i, j in _neighbour_pairs(spec.n_cavities, spec.periodic):
        bi, bj = sites[i][0], sites[j][0]
        hop = sum_multiply(bi["create"], bj["annihilate"]) + sum_multiply(bi["annihilate"], bj["create"])
        h = h - spec.J * hop
    return _hermitize(h)


def build_hamiltonian(spec: ModelSpec) -> PauliSum:
    if spec.model == "jaynes_cummings":
        return build_jc_hamiltonian(spec)
    return build_rh_hamiltonian(spec)


def _tapered_rh_state(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    amps = np.zeros(32, dtype=complex)
    amps[0b01011] = c * c
    amps[0b00000] = s * s
    amps[0b01000] = -c * s
    amps[0b00011] = -c * s
    return amps


def build_initial_state(spec: ModelSpec, tapered: bool = False) -> StateVector:
    """|N_start, g> for JC; the Mott product state for RH.

    Each RH site starts in ``cos(theta)|0, e> - sin(theta)|1, g>``. With
    ``tapered=True`` the two-cavity state is returned in the 5-qubit tapered
    basis instead.
    """
    if spec.model == "jaynes_cummings":
        atom, bos = site_qubits(spec, 0)
        bits = ["0"] * spec.n_qubits
        for q, v in zip(bos, spec.encoding.bits(spec.N_start)):
            bits[q] = v
        bits[atom] = "1"
        return StateVector.basis(spec.n_qubits, "".join(bits))
    theta = spec.theta
    if tapered:
        if spec.n_cavities != 2:
            raise ModelError("the tapered state is defined for two cavities")
        return StateVector(_tapered_rh_state(theta))
    n = spec.n_qubits
    amps = np.zeros(1 << n, dtype=complex)
    per_site = []
    for i in range(spec.n_cavities):
        atom, bos = site_qubits(spec, i)
        branches = []
        for photons, atom_bit, weight in ((0, "0", math.cos(theta)), (1, "1", -math.sin(theta))):
            assignment = {atom: atom_bit}
            assignment.update(zip(bos, spec.encoding.bits(photons)))
            branches.append((assignment, weight))
        per_site.append(branches)
    for combo in np.ndindex(*(2,) * spec.n_cavities):
        bits = ["0"] * n
        weight = 1.0
        for site, choice in enumerate(combo):
            assignment, w = per_site[site][choice]
            weight *= w
            for q, v in assignment.items():
                bits[q] = v
        amps[int("".join(bits), 2)] += weight
    return StateVector(amps)
