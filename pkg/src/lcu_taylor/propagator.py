"""Collapsed truncated-Taylor propagators and the parallel/perpendicular split.

A segment ``U_{tau,K} = sum_{k<=K} (-i H tau)^k / k!`` is expanded in the
Pauli basis and raised to the ``m``-th power, giving one linear combination
of Pauli strings for the whole evolution time ``t = m tau``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .pauli import (DimensionError, PauliSum, _phase_exp, _popcount, _I_POW, apply_to_state,
                    sum_multiply, sum_power, truncate)

__all__ = [
    "TaylorConfig",
    "SplitOperator",
    "taylor_segment",
    "collapse_propagator",
    "precision",
    "norm_squared",
    "term_expectations",
    "preselect",
    "merge_parallel_terms",
    "reduced_overlap_reconstruct",
    "propagator_record",
    "K_MAX",
]

K_MAX = 20
PARALLEL_TOL = 1e-12
SUPPORT_TOL = 1e-14


@dataclass(frozen=True)
class TaylorConfig:
    K: int
    tau: float
    m: int = 1
    eps_term: float = 0.0

    def __post_init__(self):
        if not 0 <= self.K <= K_MAX:
            raise ValueError(f"K must lie in [0, {K_MAX}]")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not (math.isfinite(self.tau) and self.tau >= 0):
            raise ValueError("tau must be finite and non-negative")
        if self.eps_term < 0:
            raise ValueError("eps_term must be non-negative")

    @property
    def t(self) -> float:
        return self.tau * self.m

    @classmethod
    def for_time(cls, t: float, tau_max: float, K: int, eps_term: float = 0.0) -> "TaylorConfig":
        """Fewest segments of width <= tau_max covering ``t`` exactly."""
        if t <= 0:
            raise ValueError("t must be positive")
        m = max(1, math.ceil(t / tau_max - 1e-9))
        return cls(K=K, tau=t / m, m=m, eps_term=eps_term)


def _taylor_coefficient(k: int, tau: float) -> complex:
    return (-1j) ** k * math.exp(k * math.log(tau) - math.lgamma(k + 1)) if tau > 0 else float(k == 0)


def taylor_segment(h: PauliSum, cfg: TaylorConfig) -> PauliSum:
    """sum_{k=0}^{K} (-i tau)^k / k! H^k, truncated at ``eps_term``."""
    total = PauliSum.identity(h.n_qubits)
    power = PauliSum.identity(h.n_qubits)
    for k in range(1, cfg.K + 1):
        power = sum_multiply(power, h)
        total = total + _taylor_coefficient(k, cfg.tau) * power
    return truncate(total, cfg.eps_term)


def collapse_propagator(h: PauliSum, cfg: TaylorConfig) -> PauliSum:
    """(U_{tau,K})^m as a single Pauli sum, truncated at ``eps_term``.

    Truncation means the result need not be unitary.
    """
    seg = taylor_segment(h, cfg)
    return truncate(sum_power(seg, cfg.m), cfg.eps_term)


def _amps(psi) -> np.ndarray:
    return np.asarray(getattr(psi, "amplitudes", psi), dtype=complex)


def norm_squared(op: PauliSum, psi0, method: str = "pauli") -> float:
    """<psi0| op^† op |psi0>, via the Pauli product or a direct state action."""
    psi = _amps(psi0)
    if psi.size != 1 << op.n_qubits:
        raise DimensionError("state and operator sizes differ")
    if method == "pauli":
        gram = sum_multiply(op.dagger(), op)
        return float(np.vdot(psi, apply_to_state(gram, psi)).real)
    if method == "state":
        phi = apply_to_state(op, psi)
        return float(np.vdot(phi, phi).real)
    raise ValueError(f"unknown method {method!r}")


def precision(op: PauliSum, psi0, method: str = "pauli") -> float:
    """|1 - sqrt(<psi0| op^† op |psi0>)|."""
    return abs(1 - math.sqrt(max(norm_squared(op, psi0, method), 0.0)))


@dataclass(frozen=True)
class SplitOperator:
    parallel: PauliSum
    perpendicular: PauliSum
    l1_parallel: float
    l1_full: float

    @property
    def n_terms_full(self) -> int:
        return len(self.parallel) + len(self.perpendicular)


def term_expectations(op: PauliSum, psi0) -> np.ndarray:
    """<psi0|P_j|psi0> for every string P_j of ``op`` (coefficients excluded).

    Only basis states in the support of ``psi0`` are visited, so for
    basis-supported states the values are exact sums of a few products.
    """
    psi = _amps(psi0)
    if psi.size != 1 << op.n_qubits:
        raise DimensionError("state and operator sizes differ")
    support = np.flatnonzero(np.abs(psi) > SUPPORT_TOL * max(np.abs(psi).max(), 1e-300))
    amps = psi[support]
    out = np.zeros(len(op), dtype=complex)
    for j, (x, z, e) in enumerate(zip(op.x_masks, op.z_masks, _phase_exp(op.x_masks, op.z_masks))):
        images = support ^ x
        hit = np.isin(images, support)
        if not hit.any():
            continue
        sign = 1 - 2 * (_popcount(support & z) & 1)
        out[j] = _I_POW[e % 4] * np.sum(np.conj(psi[images[hit]]) * sign[hit] * amps[hit])
    return out


def preselect(op: PauliSum, psi0, tol: float = PARALLEL_TOL) -> SplitOperator:
    """Split ``op`` into strings with nonzero and zero expectation in ``psi0``."""
    vals = term_expectations(op, psi0)
    par = np.abs(vals) > tol
    x, z, c = op.x_masks, op.z_masks, op.coeffs
    parallel = PauliSum.from_arrays(op.n_qubits, x[par], z[par], c[par], drop=0.0)
    perp = PauliSum.from_arrays(op.n_qubits, x[~par], z[~par], c[~par], drop=0.0)
    return SplitOperator(parallel, perp, parallel.l1_norm(), op.l1_norm())


def merge_parallel_terms(split: SplitOperator, psi0, drop: float = 1e-14) -> PauliSum:
    """Combine strings that act identically (up to a known factor) on psi0's support.

    A string maps support state ``b`` to ``i^e (-1)^{z.b} |b ^ x>``. Two strings
    with the same ``x`` and the same sign pattern ``(-1)^{z.(b ^ b0)}`` over
    the support differ there by a constant factor, so their coefficients can
    be pooled on one representative: the lexicographically smallest string.
    """
    op = split.parallel
    psi = _amps(psi0)
    if psi.size != 1 << op.n_qubits:
        raise DimensionError("state and operator sizes differ")
    if len(op) == 0:
        return op
    support = np.flatnonzero(np.abs(psi) > SUPPORT_TOL * np.abs(psi).max())
    b0 = int(support[0])
    rel = support ^ b0
    groups: dict = {}
    order: list = []
    for x, z, c, e in zip(op.x_masks, op.z_masks, op.coeffs, _phase_exp(op.x_masks, op.z_masks)):
        pattern = tuple((_popcount(rel & z) & 1).tolist())
        key = (int(x), pattern)
        # scalar by which this string multiplies |b0>'s image
        factor = _I_POW[e % 4] * (1 - 2 * (_popcount(np.int64(b0 & z)) & 1))
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append((int(z), complex(c), complex(factor)))
    xs, zs, cs = [], [], []
    n = op.n_qubits
    for key in order:
        members = groups[key]
        # all members share x, so lexicographic order is decided by the letters
        rep = min(members, key=lambda m: _letters_key(key[0], m[0], n))
        total = sum(c * f for _, c, f in members) / rep[2]
        if abs(total) > drop:
            xs.append(key[0])
            zs.append(rep[0])
            cs.append(total)
    return PauliSum.from_arrays(n, xs, zs, cs, drop=0.0)


def _letters_key(x: int, z: int, n: int) -> str:
    rank = {(0, 0): "0", (1, 0): "1", (1, 1): "2", (0, 1): "3"}
    return "".join(rank[((x >> (n - 1 - j)) & 1, (z >> (n - 1 - j)) & 1)] for j in range(n))


def reduced_overlap_reconstruct(sq_overlap_par: float, p_par: float, l1_par: float,
                                denom: float = 1.0) -> float:
    """|<psi0|psi_f>|^2 from the reduced run's statistics.

    ``denom`` is <psi0|op^† op|psi0> for the full operator; pass 1.0 for the
    near-unitary approximation.
    """
    if denom <= 0:
        raise ValueError("denominator must be positive")
    if min(sq_overlap_par, p_par, l1_par) < 0:
        raise ValueError("inputs must be non-negative")
    return p_par * l1_par ** 2 / denom * sq_overlap_par


def propagator_record(t: float, op: PauliSum, split: SplitOperator, psi0) -> dict:
    return {
        "t": float(t),
        "n_terms_full": len(op),
        "n_terms_parallel": len(split.parallel),
        "l1_full": float(split.l1_full),
        "l1_parallel": float(split.l1_parallel),
        "precision": precision(op, psi0),
    }


def record_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True)
