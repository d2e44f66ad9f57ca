"""Driven steady state, in closed form and as the generator's null vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vicsim.generator import (
    FULL16_LABELS,
    TRACE_FUNCTIONAL16,
    GeneratorMatrix,
    build_full16,
    from_vector,
    to_vector,
)
from vicsim.params import SystemParams, derive_rates


class DegenerateSteadyStateError(RuntimeError):
    """The generator kernel is not one-dimensional."""


@dataclass(frozen=True, eq=False)
class SteadyState:
    rho: np.ndarray
    params: SystemParams

    @property
    def rho11(self) -> float:
        return float(self.rho[0, 0].real)

    @property
    def rho22(self) -> float:
        return float(self.rho[1, 1].real)

    @property
    def rho33(self) -> float:
        return float(self.rho[2, 2].real)

    @property
    def rho44(self) -> float:
        return float(self.rho[3, 3].real)

    @property
    def rho13(self) -> complex:
        return complex(self.rho[0, 2])

    @property
    def rho24(self) -> complex:
        return complex(self.rho[1, 3])

    @property
    def vector8(self) -> np.ndarray:
        return to_vector(self.rho, 8)

    @property
    def vector16(self) -> np.ndarray:
        return to_vector(self.rho, 16)

    def components(self, atol: float = 0.0) -> dict[str, complex]:
        """Components in generator order; those with modulus <= atol are dropped."""
        out = {}
        for label, value in zip(FULL16_LABELS, self.vector16):
            if abs(value) > atol:
                out[f"rho{label}"] = complex(value)
        return out


def _denominator(params: SystemParams) -> float:
    G = derive_rates(params).gamma_total
    return 2.0 * abs(params.omega) ** 2 + G**2 + params.delta**2


def steady_analytic(params: SystemParams) -> SteadyState:
    G = derive_rates(params).gamma_total
    W, D = params.omega, params.delta
    den = _denominator(params)
    excited = 0.5 * abs(W) ** 2 / den
    ground = 0.5 * (abs(W) ** 2 + G**2 + D**2) / den
    coherence = -(1j * W / (G + 1j * D)) * 0.5 * (G**2 + D**2) / den

    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[1, 1] = excited
    rho[2, 2] = rho[3, 3] = ground
    rho[0, 2] = coherence
    rho[2, 0] = np.conj(coherence)
    rho[1, 3] = -coherence
    rho[3, 1] = -np.conj(coherence)
    return SteadyState(rho, params)


def steady_numeric(
    generator: GeneratorMatrix | None = None,
    *,
    params: SystemParams | None = None,
    kernel_tol: float = 1e-9,
) -> SteadyState:
    """Null vector of the full generator, normalized to unit trace.

    The kernel dimension is checked from the singular values; the vector
    itself comes from a bordered solve in which the first population
    equation is replaced by the trace condition.
    """
    if generator is None:
        if params is None:
            raise TypeError("pass a generator or params")
        generator = build_full16(params)
    if generator.dim != 16:
        raise ValueError("steady_numeric needs the full 16-component generator")
    m = generator.matrix

    sv = np.linalg.svd(m, compute_uv=False)
    scale = sv[0]
    null_count = int(np.sum(sv <= kernel_tol * scale))
    if null_count != 1:
        raise DegenerateSteadyStateError(
            f"generator kernel has dimension {null_count} (smallest singular values {sv[-3:]})"
        )

    a = np.array(m, dtype=complex)
    a[0, :] = TRACE_FUNCTIONAL16
    b = np.zeros(16, dtype=complex)
    b[0] = 1.0
    vec = np.linalg.solve(a, b)
    # one residual-correction sweep keeps ||G v|| at rounding level
    vec = vec + np.linalg.solve(a, b - a @ vec)

    rho = from_vector(vec)
    rho = 0.5 * (rho + rho.conj().T)
    rho[np.diag_indices(4)] = rho.diagonal().real
    return SteadyState(rho, generator.params)


def residual(state: SteadyState, generator: GeneratorMatrix | None = None) -> float:
    """max |G v| for the steady vector."""
    if generator is None:
        generator = build_full16(state.params)
    return float(np.max(np.abs(generator.matrix @ state.vector16)))
