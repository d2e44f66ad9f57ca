"""Pi-channel intensity and two-time photon-photon correlations.

The regression theorem turns the correlator <B+(t) X(t+tau) B(t)> into
``sum_k F_k(tau) w_k`` where ``w_k = <B+ A_k B>`` in the steady state and
``A_k`` is the operator of block slot k.  With interference the detected
field operator is ``B = |3><1| - |4><2|`` and ``X = |1><1| + |2><2|``; without
it the two pi transitions are detected independently.

Values are in reduced units (correlation prefactor 1) unless a
:class:`GeometryPrefactors` is supplied.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from vicsim.generator import BLOCK8_LABELS, SLOT, build_block8
from vicsim.params import GeometryPrefactors, InvalidParameterError, SystemParams
from vicsim.propagator import PropagatorDecomposition, decompose, f_elements
from vicsim.steady import SteadyState, steady_analytic

IMAG_TOL = 1e-10

ROW_1 = SLOT[11]
ROW_2 = SLOT[22]


def _ket_bra(i: int, j: int) -> np.ndarray:
    op = np.zeros((4, 4), dtype=complex)
    op[i - 1, j - 1] = 1.0
    return op


# operator whose expectation value is component rho_ij, i.e. |j><i|
SLOT_OPERATOR_MATRICES = tuple(_ket_bra(label % 10, label // 10) for label in BLOCK8_LABELS)

LOWER_VIC = _ket_bra(3, 1) - _ket_bra(4, 2)
LOWER_13 = _ket_bra(3, 1)
LOWER_24 = _ket_bra(4, 2)


def regression_weights(steady: SteadyState, lowering: np.ndarray) -> np.ndarray:
    """``w_k = Tr(B+ A_k B rho)`` for each of the eight block slots."""
    b = np.asarray(lowering)
    bd = b.conj().T
    return np.array([np.trace(bd @ a @ b @ steady.rho) for a in SLOT_OPERATOR_MATRICES])


@functools.lru_cache(maxsize=64)
def _decomposition(params: SystemParams) -> PropagatorDecomposition:
    return decompose(build_block8(params.replace(vic=True)))


def decomposition_for(params: SystemParams) -> PropagatorDecomposition:
    return _decomposition(params)


def tau_grid(tmax: float = 20.0, dt: float = 0.02, gamma0: float = 1.0) -> np.ndarray:
    """Uniform grid ``0, dt, ..., tmax`` with tmax and dt in units of 1/gamma0."""
    if dt <= 0 or tmax < 0:
        raise InvalidParameterError("need dt > 0 and tmax >= 0")
    n = int(round(tmax / dt))
    if not np.isclose(n * dt, tmax, rtol=1e-9, atol=1e-12):
        raise InvalidParameterError(f"tmax={tmax} is not a multiple of dt={dt}")
    return np.arange(n + 1) * (dt / gamma0)


def _real(values: np.ndarray, what: str) -> np.ndarray:
    residue = float(np.max(np.abs(np.imag(values)), initial=0.0))
    if residue > IMAG_TOL:
        raise ArithmeticError(f"{what} has imaginary residue {residue:.3g}")
    return np.real(values).copy()


@dataclass(frozen=True)
class PiIntensity:
    reduced: float
    physical: float | None = None


def intensity_pi(params: SystemParams, geometry: GeometryPrefactors | None = None) -> PiIntensity:
    """Steady pi intensity ``|W|^2 / (2|W|^2 + G^2 + D^2)`` (twice rho_11)."""
    value = 2.0 * steady_analytic(params).rho11
    physical = None if geometry is None else geometry.intensity_prefactor * value
    return PiIntensity(value, physical)


def big_F(decomp: PropagatorDecomposition, tau, i: int) -> np.ndarray:
    """``F_i = f_1i + f_5i``: weight flowing into the excited populations from slot i (1-based)."""
    if not 1 <= i <= 8:
        raise IndexError(f"slot index must be in 1..8, got {i}")
    f = f_elements(decomp, tau)
    value = f[..., ROW_1, i - 1] + f[..., ROW_2, i - 1]
    if BLOCK8_LABELS[i - 1] in (11, 33, 22, 44):
        return _real(value, f"F_{i}")
    return value


def _vic_weights(params: SystemParams) -> np.ndarray:
    return regression_weights(steady_analytic(params), LOWER_VIC)


def _prefactor(geometry: GeometryPrefactors | None) -> float:
    return 1.0 if geometry is None else geometry.correlation_prefactor


def G2_vic(params: SystemParams, tau_grid, geometry: GeometryPrefactors | None = None) -> np.ndarray:
    f = f_elements(_decomposition(params), tau_grid)
    F = f[..., ROW_1, :] + f[..., ROW_2, :]
    return _prefactor(geometry) * _real(F @ _vic_weights(params), "G2_vic")


def G2_novic(params: SystemParams, tau_grid, geometry: GeometryPrefactors | None = None) -> np.ndarray:
    steady = steady_analytic(params)
    f = f_elements(_decomposition(params), tau_grid)
    value = f[..., ROW_1, :] @ regression_weights(steady, LOWER_13)
    value = value + f[..., ROW_2, :] @ regression_weights(steady, LOWER_24)
    return _prefactor(geometry) * _real(value, "G2_novic")


def _normalizers(params: SystemParams) -> tuple[float, float]:
    rho11 = steady_analytic(params).rho11
    if rho11 <= 0.0:
        raise InvalidParameterError("g2 is undefined without drive (rho11 = 0)")
    return 4.0 * rho11**2, 2.0 * rho11**2


def g2_normalized(params: SystemParams, tau_grid, vic: bool = True) -> np.ndarray:
    norm_vic, norm_novic = _normalizers(params)
    if vic:
        return G2_vic(params, tau_grid) / norm_vic
    return G2_novic(params, tau_grid) / norm_novic


def pathway_probabilities(params: SystemParams, tau_grid) -> tuple[np.ndarray, np.ndarray]:
    """``f12`` and ``f52``: probability of |1> and of |2> given the atom started in |3>."""
    f = f_elements(_decomposition(params), tau_grid)
    col = SLOT[33]
    return _real(f[..., ROW_1, col], "f12"), _real(f[..., ROW_2, col], "f52")


@dataclass(frozen=True, eq=False)
class CorrelationSeries:
    tau: np.ndarray
    G2_vic: np.ndarray
    G2_novic: np.ndarray
    g2_vic: np.ndarray | None
    g2_novic: np.ndarray | None
    params: SystemParams
    prefactor_mode: str = "reduced"
    method: str = "eig"

    def columns(self, vic: str = "both", normalized: bool = True) -> dict[str, np.ndarray]:
        if vic not in ("both", "on", "off"):
            raise ValueError(f"vic must be both|on|off, got {vic!r}")
        keep_vic, keep_novic = vic in ("both", "on"), vic in ("both", "off")
        cols: dict[str, np.ndarray] = {"tau": self.tau * self.params.gamma0}
        if keep_vic:
            cols["G2_vic"] = self.G2_vic
        if keep_novic:
            cols["G2_novic"] = self.G2_novic
        if normalized:
            if self.g2_vic is None:
                raise InvalidParameterError("g2 is undefined without drive (rho11 = 0)")
            if keep_vic:
                cols["g2_vic"] = self.g2_vic
            if keep_novic:
                cols["g2_novic"] = self.g2_novic
        return cols


def correlation_series(
    params: SystemParams,
    tau_grid,
    geometry: GeometryPrefactors | None = None,
) -> CorrelationSeries:
    tau = np.asarray(tau_grid, dtype=float)
    vic = G2_vic(params, tau)
    novic = G2_novic(params, tau)
    g2v = g2n = None
    if steady_analytic(params).rho11 > 0.0:
        norm_vic, norm_novic = _normalizers(params)
        g2v, g2n = vic / norm_vic, novic / norm_novic
    pref = _prefactor(geometry)
    return CorrelationSeries(
        tau=tau,
        G2_vic=pref * vic,
        G2_novic=pref * novic,
        g2_vic=g2v,
        g2_novic=g2n,
        params=params,
        prefactor_mode="reduced" if geometry is None else "physical",
        method=_decomposition(params).method,
    )


@dataclass(frozen=True)
class AsymptoteReport:
    rho11: float
    tau_max: float
    G2_vic_limit: float
    G2_novic_limit: float
    limit_ratio: float
    printed_vic_limit: float
    printed_novic_limit: float
    printed_ratio: float
    G2_vic_measured: float
    G2_novic_measured: float
    measured_ratio: float
    g2_vic_measured: float
    g2_novic_measured: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def relaxation_time(params: SystemParams) -> float:
    """1/|Re lam| of the slowest decaying mode of the closed block."""
    lam = _decomposition(params).eigenvalues
    decaying = lam[np.abs(lam) > 1e-10 * max(1.0, np.abs(lam).max())]
    return float(1.0 / np.abs(decaying.real).min())


def asymptote_report(params: SystemParams, tau_max: float | None = None) -> AsymptoteReport:
    """Large-delay limits in closed form next to the values reached at ``tau_max``.

    The limits follow from ``f(inf)`` (rank one onto the steady state):
    ``G2_vic -> 4 rho11^2`` and ``G2_novic -> 2 rho11^2``.  The printed
    large-tau expressions (``4 rho11`` and ``2 rho11`` in reduced units) are
    reported alongside; both readings give the ratio 2.
    """
    if tau_max is None:
        tau_max = 60.0 / params.gamma0
    rho11 = steady_analytic(params).rho11
    lim_vic, lim_novic = 4.0 * rho11**2, 2.0 * rho11**2
    printed_vic, printed_novic = 4.0 * rho11, 2.0 * rho11
    tau = np.array([tau_max])
    vic = float(G2_vic(params, tau)[0])
    novic = float(G2_novic(params, tau)[0])
    if rho11 > 0.0:
        g2v, g2n = vic / lim_vic, novic / lim_novic
        ratio, lim_ratio, printed_ratio = vic / novic, lim_vic / lim_novic, printed_vic / printed_novic
    else:
        g2v = g2n = ratio = lim_ratio = printed_ratio = float("nan")
    return AsymptoteReport(
        rho11=rho11,
        tau_max=float(tau_max),
        G2_vic_limit=lim_vic,
        G2_novic_limit=lim_novic,
        limit_ratio=lim_ratio,
        printed_vic_limit=printed_vic,
        printed_novic_limit=printed_novic,
        printed_ratio=printed_ratio,
        G2_vic_measured=vic,
        G2_novic_measured=novic,
        measured_ratio=ratio,
        g2_vic_measured=g2v,
        g2_novic_measured=g2n,
    )


def modal_amplitudes(params: SystemParams, vic: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and the amplitude each contributes to G2(tau) = sum c_l exp(lam_l tau)."""
    decomp = _decomposition(params)
    if decomp.method != "eig":
        raise RuntimeError("modal amplitudes need an eigendecomposition")
    P, Pinv = decomp.vectors, decomp.inverse
    steady = steady_analytic(params)
    if vic:
        left = P[ROW_1] + P[ROW_2]
        amps = left * (Pinv @ regression_weights(steady, LOWER_VIC))
    else:
        amps = P[ROW_1] * (Pinv @ regression_weights(steady, LOWER_13))
        amps = amps + P[ROW_2] * (Pinv @ regression_weights(steady, LOWER_24))
    return decomp.eigenvalues, amps


def predicted_frequency(params: SystemParams, vic: bool = True, min_freq: float = 1e-6) -> float:
    """|Im lam| of the oscillatory mode carrying the largest amplitude."""
    lam, amps = modal_amplitudes(params, vic)
    osc = np.abs(lam.imag) > min_freq * max(1.0, np.abs(lam).max())
    if not osc.any():
        return 0.0
    idx = np.flatnonzero(osc)[np.argmax(np.abs(amps[osc]))]
    return float(abs(lam[idx].imag))


def estimate_frequency(tau: np.ndarray, values: np.ndarray, rank_tol: float = 1e-7, min_freq: float = 1e-3) -> float:
    """Dominant angular frequency of a sampled sum of damped exponentials.

    Matrix-pencil fit on the uniform samples; returns |Im s| of the
    oscillatory pole with the largest fitted amplitude (0 if none).
    """
    tau = np.asarray(tau, dtype=float)
    y = np.asarray(values, dtype=complex)
    dt = tau[1] - tau[0]
    if not np.allclose(np.diff(tau), dt, rtol=1e-9, atol=1e-12):
        raise ValueError("estimate_frequency needs a uniform grid")
    n = y.size
    L = n // 3
    hankel = np.lib.stride_tricks.sliding_window_view(y, L + 1)
    _, s, vh = np.linalg.svd(hankel, full_matrices=False)
    r = int(np.sum(s > rank_tol * s[0]))
    v = vh[:r].conj().T
    z = np.linalg.eigvals(np.linalg.pinv(v[:-1]) @ v[1:])
    vander = z[None, :] ** np.arange(n)[:, None]
    amps, *_ = np.linalg.lstsq(vander, y, rcond=None)
    rates = np.log(z) / dt
    osc = np.abs(rates.imag) > min_freq
    if not osc.any():
        return 0.0
    idx = np.flatnonzero(osc)[np.argmax(np.abs(amps[osc]))]
    return float(abs(rates[idx].imag))
