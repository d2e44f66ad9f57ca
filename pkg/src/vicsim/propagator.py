"""Propagator of the closed 8x8 block.

``f(tau) = exp(M tau)`` is evaluated from an eigendecomposition
``M = P diag(lam) P^-1``.  An independent adaptive Dormand-Prince integrator
serves as a cross-check, and a scaling-and-squaring exponential takes over
when the eigenvector matrix is too ill-conditioned to trust.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from vicsim.generator import GeneratorMatrix, build_block8
from vicsim.params import SystemParams

log = logging.getLogger(__name__)

COND_LIMIT = 1e8
RESIDUAL_TOL = 1e-10
ZERO_MODE_TOL = 1e-10


class IntegrationError(RuntimeError):
    """The adaptive integrator could not meet its tolerance."""


@dataclass(frozen=True, eq=False)
class PropagatorDecomposition:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    vectors: np.ndarray | None
    inverse: np.ndarray | None
    residual: float
    condition: float
    method: str = "eig"

    @property
    def uses_fallback(self) -> bool:
        return self.method != "eig"


def decompose(M: GeneratorMatrix | np.ndarray, cond_limit: float = COND_LIMIT) -> PropagatorDecomposition:
    """Diagonalize the 8x8 block.

    If the eigenvector matrix has condition number above ``cond_limit`` the
    decomposition is kept for its eigenvalues only and ``f_elements`` switches
    to the matrix exponential.
    """
    m = np.asarray(M.matrix if isinstance(M, GeneratorMatrix) else M, dtype=complex)
    if m.shape != (8, 8):
        raise ValueError(f"decompose expects the 8x8 block, got shape {m.shape}")

    lam, P = np.linalg.eig(m)
    cond = float(np.linalg.cond(P))
    if not np.isfinite(cond) or cond > cond_limit:
        log.warning("eigenvector matrix condition %.3g exceeds %.3g; using expm fallback", cond, cond_limit)
        return PropagatorDecomposition(m, lam, None, None, float("nan"), cond, method="expm")

    Pinv = np.linalg.inv(P)
    recon = (P * lam) @ Pinv
    norm = max(np.linalg.norm(m, np.inf), 1e-300)
    res = float(np.linalg.norm(recon - m, np.inf) / norm)
    if res > RESIDUAL_TOL:
        log.warning("reconstruction residual %.3g too large; using expm fallback", res)
        return PropagatorDecomposition(m, lam, None, None, res, cond, method="expm")
    return PropagatorDecomposition(m, lam, P, Pinv, res, cond)


def f_elements(decomp: PropagatorDecomposition, tau: float | Sequence[float] | np.ndarray) -> np.ndarray:
    """``exp(M tau)`` for a scalar tau (8x8) or a grid of taus (n x 8 x 8)."""
    taus = np.asarray(tau, dtype=float)
    if np.any(taus < 0) or not np.all(np.isfinite(taus)):
        raise ValueError("tau must be finite and non-negative")
    flat = np.atleast_1d(taus)
    if decomp.method == "eig":
        phases = np.exp(np.multiply.outer(flat, decomp.eigenvalues))
        out = np.einsum("il,tl,lk->tik", decomp.vectors, phases, decomp.inverse)
    else:
        out = np.stack([scipy.linalg.expm(decomp.matrix * t) for t in flat])
    return out[0] if taus.ndim == 0 else out


# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [np.asarray(row) for row in [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _dopri_step(m: np.ndarray, y: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    k = np.empty((7,) + y.shape, dtype=complex)
    k[0] = m @ y
    for s in range(1, 7):
        k[s] = m @ (y + h * np.tensordot(_A[s], k[:s], axes=1))
    return y + h * np.tensordot(_B5, k, axes=1), h * np.tensordot(_E, k, axes=1)


def integrate_linear(
    m: np.ndarray,
    v0: np.ndarray,
    taus: Sequence[float] | np.ndarray,
    tol: float = 1e-10,
    h_min: float = 1e-14,
    max_steps: int = 1_000_000,
) -> np.ndarray:
    """Integrate ``v' = m v`` adaptively and return the state at each tau.

    ``v0`` may be a vector or a matrix whose columns are integrated together.
    ``taus`` must be non-decreasing.  The local error per step is held below
    ``tol * (1 + |v|)`` componentwise (RMS norm).
    """
    m = np.asarray(m, dtype=complex)
    y = np.array(v0, dtype=complex)
    taus = np.asarray(taus, dtype=float)
    if np.any(taus < 0) or np.any(np.diff(taus) < 0):
        raise ValueError("taus must be non-negative and non-decreasing")

    out = np.empty((taus.size,) + y.shape, dtype=complex)
    t = 0.0
    norm = max(np.linalg.norm(m, np.inf), 1e-12)
    h = 0.01 / norm
    steps = 0
    for n, target in enumerate(taus):
        while t < target:
            step = min(h, target - t)
            y_new, err_vec = _dopri_step(m, y, step)
            scale = tol * (1.0 + np.maximum(np.abs(y), np.abs(y_new)))
            with np.errstate(over="ignore"):
                err = float(np.sqrt(np.mean(np.abs(err_vec / scale) ** 2)))
            if err <= 1.0:
                t = target if step == target - t else t + step
                y = y_new
            factor = 0.9 * err ** (-0.2) if err > 0 else 5.0
            h = step * min(5.0, max(0.2, factor))
            steps += 1
            if err > 1.0 and h < h_min * max(1.0, t):
                raise IntegrationError(f"step size underflow at tau={t:.6g}")
            if steps > max_steps:
                raise IntegrationError(f"exceeded {max_steps} steps before tau={target:.6g}")
        out[n] = y
    return out


def expm_oracle(
    M: GeneratorMatrix | np.ndarray,
    v0: np.ndarray,
    tau: float | Sequence[float] | np.ndarray,
    tol: float = 1e-10,
) -> np.ndarray:
    """State ``exp(M tau) v0`` by direct ODE integration (no diagonalization).

    Passing the identity as ``v0`` yields the whole propagator matrix.
    """
    m = M.matrix if isinstance(M, GeneratorMatrix) else np.asarray(M)
    v0 = np.asarray(v0, dtype=complex)
    if v0.ndim not in (1, 2) or v0.shape[0] != m.shape[0]:
        raise ValueError(f"v0 has shape {v0.shape}, expected leading dimension {m.shape[0]}")
    taus = np.asarray(tau, dtype=float)
    flat = np.atleast_1d(taus)
    order = np.argsort(flat, kind="stable")
    result = np.empty((flat.size,) + v0.shape, dtype=complex)
    result[order] = integrate_linear(m, v0, flat[order], tol=tol)
    return result[0] if taus.ndim == 0 else result


def canonical_sort(eigenvalues: np.ndarray, clamp: float = 0.0) -> np.ndarray:
    """Descending |Im|, then descending Re; +Im before -Im within a pair.

    Imaginary parts with modulus <= ``clamp`` are set to zero first.
    """
    lam = np.array(eigenvalues, dtype=complex)
    small = np.abs(lam.imag) <= clamp
    lam[small] = lam[small].real
    key_im = np.round(np.abs(lam.imag), 9)
    key_re = np.round(lam.real, 9)
    order = np.lexsort((-lam.imag, -key_re, -key_im))
    return lam[order]


@dataclass(frozen=True, eq=False)
class EigenReport:
    eigenvalues: np.ndarray
    params: SystemParams
    method: str = "eig"
    residual: float = 0.0
    condition: float = 1.0
    conjugate_pairing_error: float = field(default=0.0)

    def rows(self) -> list[tuple[float, float]]:
        return [(float(z.real), float(z.imag)) for z in self.eigenvalues]

    def as_dict(self) -> dict:
        return {
            "params": self.params.to_json(),
            "eigenvalues": [{"re": re, "im": im} for re, im in self.rows()],
            "method": self.method,
            "reconstruction_residual": self.residual,
            "eigenvector_condition": self.condition,
            "conjugate_pairing_error": self.conjugate_pairing_error,
        }


def report_eigenvalues(params: SystemParams, cond_limit: float = COND_LIMIT) -> EigenReport:
    M = build_block8(params)
    decomp = decompose(M, cond_limit=cond_limit)
    clamp = 1e-9 * np.linalg.norm(M.matrix, np.inf)
    lam = canonical_sort(decomp.eigenvalues, clamp=clamp)
    pairing = match_multisets(lam, np.conj(lam))
    return EigenReport(
        eigenvalues=lam,
        params=params,
        method=decomp.method,
        residual=decomp.residual,
        condition=decomp.condition,
        conjugate_pairing_error=float(pairing.max_delta),
    )


@dataclass(frozen=True, eq=False)
class MultisetMatch:
    computed: np.ndarray
    reference: np.ndarray
    deltas: np.ndarray

    @property
    def max_delta(self) -> float:
        return float(self.deltas.max()) if self.deltas.size else 0.0

    def matches(self, tol: float) -> bool:
        return self.max_delta <= tol


def match_multisets(computed: Sequence[complex], reference: Sequence[complex]) -> MultisetMatch:
    """Pair two equal-size multisets by minimal total distance.

    Output is ordered like ``reference``.
    """
    a = np.asarray(computed, dtype=complex)
    b = np.asarray(reference, dtype=complex)
    if a.shape != b.shape:
        raise ValueError("multisets differ in size")
    cost = np.abs(b[:, None] - a[None, :])
    rows, cols = linear_sum_assignment(cost)
    paired = a[cols[np.argsort(rows)]]
    return MultisetMatch(paired, b, np.abs(paired - b))
