"""Rotating-frame generators of the density-matrix dynamics.

Components are addressed by two-digit labels: ``13`` is rho_13 = <1|rho|3>,
whose expectation-value reading is <|3><1|>.  The closed block uses the order

    11, 33, 13, 31, 22, 44, 24, 42

and the full generator appends

    12, 21, 14, 41, 23, 32, 34, 43.

States 1, 2 are the excited doublet, 3, 4 the ground doublet.  The pi
transitions are 1-3 and 2-4 (antiparallel dipoles), the sigma transitions
1-4 and 2-3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vicsim.params import SystemParams, derive_rates

BLOCK8_LABELS: tuple[int, ...] = (11, 33, 13, 31, 22, 44, 24, 42)
COMPLEMENT_LABELS: tuple[int, ...] = (12, 21, 14, 41, 23, 32, 34, 43)
FULL16_LABELS: tuple[int, ...] = BLOCK8_LABELS + COMPLEMENT_LABELS

SLOT: dict[int, int] = {label: k for k, label in enumerate(FULL16_LABELS)}

# operator |i><j| whose expectation value is each block slot (1-based f-index order)
SLOT_OPERATORS: tuple[str, ...] = (
    "|1><1|", "|3><3|", "|3><1|", "|1><3|", "|2><2|", "|4><4|", "|4><2|", "|2><4|",
)

POPULATION_LABELS: tuple[int, ...] = (11, 22, 33, 44)

# row functional sum(rho_ii); annihilates every trace-preserving generator
TRACE_FUNCTIONAL8 = np.array([1, 1, 0, 0, 1, 1, 0, 0], dtype=float)
TRACE_FUNCTIONAL16 = np.concatenate([TRACE_FUNCTIONAL8, np.zeros(8)])


def _swap(label: int) -> int:
    return (label % 10) * 10 + label // 10


def _index(label: int) -> tuple[int, int]:
    return label // 10 - 1, label % 10 - 1


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    matrix: np.ndarray
    params: SystemParams

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def labels(self) -> tuple[int, ...]:
        return FULL16_LABELS[: self.dim]

    def __matmul__(self, other: np.ndarray) -> np.ndarray:
        return self.matrix @ other


def build_block8(params: SystemParams) -> GeneratorMatrix:
    """Closed 8x8 block for populations and pi-transition coherences.

    Ground-state feeds carry the full decay rates 2*gamma_sigma and
    2*gamma_pi so that population is conserved.  The matrix does not
    depend on ``params.vic``.
    """
    rates = derive_rates(params)
    gs, gp, G = rates.gamma_sigma, rates.gamma_pi, rates.gamma_total
    W, Wc, D = params.omega, params.omega.conjugate(), params.delta

    m = np.zeros((8, 8), dtype=complex)

    def put(lhs: int, rhs: int, value: complex) -> None:
        m[SLOT[lhs], SLOT[rhs]] += value

    put(11, 13, 1j * Wc)
    put(11, 31, -1j * W)
    put(11, 11, -2 * G)

    put(33, 31, 1j * W)
    put(33, 13, -1j * Wc)
    put(33, 22, 2 * gs)
    put(33, 11, 2 * gp)

    put(13, 13, -1j * D - G)
    put(13, 11, 1j * W)
    put(13, 33, -1j * W)

    put(31, 31, 1j * D - G)
    put(31, 11, -1j * Wc)
    put(31, 33, 1j * Wc)

    put(22, 42, 1j * W)
    put(22, 24, -1j * Wc)
    put(22, 22, -2 * G)

    put(44, 24, 1j * Wc)
    put(44, 42, -1j * W)
    put(44, 11, 2 * gs)
    put(44, 22, 2 * gp)

    put(24, 24, -1j * D - G)
    put(24, 22, -1j * W)
    put(24, 44, 1j * W)

    put(42, 42, 1j * D - G)
    put(42, 22, 1j * Wc)
    put(42, 44, -1j * Wc)

    m.setflags(write=False)
    return GeneratorMatrix(m, params)


def build_full16(params: SystemParams) -> GeneratorMatrix:
    """Full 16x16 generator: the closed block plus the remaining coherences.

    Rows for rho_12, rho_14, rho_23 and rho_34 are written out; the rows for
    their conjugate partners follow from Hermiticity.  The interference switch
    only enters the rho_34 <- rho_12 coupling (and its conjugate).
    """
    rates = derive_rates(params)
    gp, G = rates.gamma_pi, rates.gamma_total
    W, Wc, D = params.omega, params.omega.conjugate(), params.delta

    m = np.zeros((16, 16), dtype=complex)
    m[:8, :8] = build_block8(params).matrix

    rows: dict[int, dict[int, complex]] = {
        12: {32: -1j * W, 14: -1j * Wc, 12: -2 * G},
        14: {14: -1j * D - G, 12: -1j * W, 34: -1j * W},
        23: {23: -1j * D - G, 21: 1j * W, 43: 1j * W},
        34: {32: -1j * W, 14: -1j * Wc, 12: -gp * params.q},
    }
    for lhs, terms in rows.items():
        for rhs_label, value in terms.items():
            m[SLOT[lhs], SLOT[rhs_label]] += value
            m[SLOT[_swap(lhs)], SLOT[_swap(rhs_label)]] += np.conj(value)

    m.setflags(write=False)
    return GeneratorMatrix(m, params)


def rhs(state: np.ndarray, params: SystemParams, dim: int = 16) -> np.ndarray:
    """Time derivative ``G @ state`` for the 8- or 16-component generator."""
    state = np.asarray(state, dtype=complex)
    if dim not in (8, 16):
        raise ValueError(f"dim must be 8 or 16, got {dim}")
    if state.shape != (dim,):
        raise ValueError(f"state has shape {state.shape}, expected ({dim},)")
    gen = build_block8(params) if dim == 8 else build_full16(params)
    return gen.matrix @ state


def to_vector(rho: np.ndarray, dim: int = 16) -> np.ndarray:
    """Pack a 4x4 density matrix into generator component order."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    return np.array([rho[_index(label)] for label in FULL16_LABELS[:dim]], dtype=complex)


def from_vector(vec: np.ndarray) -> np.ndarray:
    """Unpack a 16-component vector into a 4x4 density matrix."""
    vec = np.asarray(vec, dtype=complex)
    if vec.shape != (16,):
        raise ValueError(f"expected 16 components, got shape {vec.shape}")
    rho = np.zeros((4, 4), dtype=complex)
    for label, value in zip(FULL16_LABELS, vec):
        rho[_index(label)] = value
    return rho


def slot_vector(label: int, dim: int = 8) -> np.ndarray:
    """Unit vector selecting one component."""
    v = np.zeros(dim, dtype=complex)
    v[SLOT[label]] = 1.0
    return v
