"""Physical parameters and the decay rates derived from them.

Every rate is expressed in units of ``gamma0``, the total spontaneous decay
rate of an excited level.  The Rabi frequency and detuning are also given in
units of ``gamma0``; the absolute values entering the generator are
``rabi * gamma0`` and ``detuning * gamma0``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping


class InvalidParameterError(ValueError):
    """Raised for parameters outside the physical domain."""


@dataclass(frozen=True)
class SystemParams:
    gamma0: float = 1.0
    rabi: complex = 0.5
    detuning: float = 0.0
    vic: bool = True

    def __post_init__(self) -> None:
        gamma0 = float(self.gamma0)
        if not math.isfinite(gamma0) or gamma0 <= 0.0:
            raise InvalidParameterError(f"gamma0 must be positive, got {self.gamma0!r}")
        rabi = complex(self.rabi)
        if not (math.isfinite(rabi.real) and math.isfinite(rabi.imag)):
            raise InvalidParameterError(f"rabi must be finite, got {self.rabi!r}")
        detuning = float(self.detuning)
        if not math.isfinite(detuning):
            raise InvalidParameterError(f"detuning must be finite, got {self.detuning!r}")
        # interference is either present or absent; no fractional strength
        if isinstance(self.vic, bool):
            vic = self.vic
        elif self.vic in (0, 1):
            vic = bool(self.vic)
        else:
            raise InvalidParameterError(f"vic must be 0 or 1, got {self.vic!r}")
        object.__setattr__(self, "gamma0", gamma0)
        object.__setattr__(self, "rabi", rabi)
        object.__setattr__(self, "detuning", detuning)
        object.__setattr__(self, "vic", vic)

    @property
    def q(self) -> int:
        return int(self.vic)

    @property
    def omega(self) -> complex:
        """Absolute Rabi frequency (rate units)."""
        return self.rabi * self.gamma0

    @property
    def delta(self) -> float:
        """Absolute detuning (rate units)."""
        return self.detuning * self.gamma0

    def replace(self, **changes: Any) -> SystemParams:
        fields = self.as_dict()
        fields.update(changes)
        return SystemParams(**fields)

    def as_dict(self) -> dict[str, Any]:
        return {
            "gamma0": self.gamma0,
            "rabi": self.rabi,
            "detuning": self.detuning,
            "vic": self.vic,
        }

    def to_json(self) -> dict[str, Any]:
        """Config-file representation (keys gamma0, rabi_re, rabi_im, detuning, vic)."""
        return {
            "gamma0": self.gamma0,
            "rabi_re": self.rabi.real,
            "rabi_im": self.rabi.imag,
            "detuning": self.detuning,
            "vic": int(self.vic),
        }

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> SystemParams:
        known = {"gamma0", "rabi_re", "rabi_im", "detuning", "vic"}
        unknown = set(data) - known
        if unknown:
            raise InvalidParameterError(f"unknown config keys: {sorted(unknown)}")
        try:
            rabi = complex(float(data.get("rabi_re", 0.5)), float(data.get("rabi_im", 0.0)))
            return cls(
                gamma0=float(data.get("gamma0", 1.0)),
                rabi=rabi,
                detuning=float(data.get("detuning", 0.0)),
                vic=data.get("vic", 1),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidParameterError):
                raise
            raise InvalidParameterError(str(exc)) from exc


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a JSON parameter file; returns the raw mapping."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParameterError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise InvalidParameterError("config must be a JSON object")
    return payload


@dataclass(frozen=True)
class DerivedRates:
    gamma_sigma: float
    gamma_pi: float
    gamma_total: float


def derive_rates(params: SystemParams) -> DerivedRates:
    """Half-decay rates of the sigma and pi channels and their sum.

    The full decay rates ``2*gamma_sigma = gamma0/3`` and
    ``2*gamma_pi = gamma0/6`` follow from the squared dipole ratios 2:1.
    """
    if not params.gamma0 > 0.0:
        raise InvalidParameterError("gamma0 must be positive")
    gamma_sigma = params.gamma0 / 6.0
    gamma_pi = params.gamma0 / 12.0
    return DerivedRates(gamma_sigma, gamma_pi, gamma_sigma + gamma_pi)


@dataclass(frozen=True)
class GeometryPrefactors:
    """Far-field prefactors for observation perpendicular to the dipoles.

    With all fields at their defaults the intensity prefactor is 1/6 and the
    correlation prefactor 1/36.  Reduced units bypass this class entirely
    (both prefactors exactly 1).
    """

    reduced_dipole: float = 1.0
    frequency: float = 1.0
    distance: float = 1.0
    light_speed: float = 1.0

    def __post_init__(self) -> None:
        for name in ("reduced_dipole", "frequency", "distance", "light_speed"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise InvalidParameterError(f"{name} must be positive, got {value!r}")

    @property
    def intensity_prefactor(self) -> float:
        k0 = self.frequency / self.light_speed
        return k0**4 * self.reduced_dipole**2 / (6.0 * self.distance**2)

    @property
    def correlation_prefactor(self) -> float:
        k0 = self.frequency / self.light_speed
        return k0**8 * self.reduced_dipole**4 / (36.0 * self.distance**4)
