import json

import pytest

from vicsim.params import (
    GeometryPrefactors,
    InvalidParameterError,
    SystemParams,
    derive_rates,
    load_config,
)


@pytest.mark.parametrize(
    "gamma0, expected",
    [(1.0, (1 / 6, 1 / 12, 0.25)), (2.0, (1 / 3, 1 / 6, 0.5))],
)
def test_derive_rates(gamma0, expected):
    r = derive_rates(SystemParams(gamma0=gamma0))
    assert (r.gamma_sigma, r.gamma_pi, r.gamma_total) == pytest.approx(expected, abs=1e-15)
    assert r.gamma_total == r.gamma_sigma + r.gamma_pi
    assert 2 * r.gamma_sigma == pytest.approx(gamma0 / 3)
    assert 2 * r.gamma_pi == pytest.approx(gamma0 / 6)


@pytest.mark.parametrize("gamma0", [0.0, -1.0, float("nan"), float("inf")])
def test_bad_gamma0(gamma0):
    with pytest.raises(InvalidParameterError):
        SystemParams(gamma0=gamma0)


@pytest.mark.parametrize("vic", [0.5, 2, -1, "yes"])
def test_vic_is_binary(vic):
    with pytest.raises(InvalidParameterError):
        SystemParams(vic=vic)


def test_vic_accepts_ints():
    assert SystemParams(vic=0).q == 0
    assert SystemParams(vic=1).q == 1
    assert SystemParams(vic=True).vic is True


def test_absolute_rates_scale_with_gamma0():
    p = SystemParams(gamma0=3.0, rabi=0.5 + 0.25j, detuning=-1.0)
    assert p.omega == pytest.approx(1.5 + 0.75j)
    assert p.delta == pytest.approx(-3.0)


def test_params_are_hashable_and_immutable():
    p = SystemParams(rabi=0.5)
    assert hash(p) == hash(SystemParams(rabi=0.5 + 0j))
    with pytest.raises(AttributeError):
        p.rabi = 1.0


def test_config_roundtrip(tmp_path):
    p = SystemParams(gamma0=2.0, rabi=0.5 - 0.1j, detuning=0.25, vic=0)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(p.to_json()))
    assert SystemParams.from_mapping(load_config(path)) == p


def test_config_rejects_unknown_keys():
    with pytest.raises(InvalidParameterError):
        SystemParams.from_mapping({"gamma0": 1, "omega": 2})


def test_config_rejects_garbage(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("[1, 2]")
    with pytest.raises(InvalidParameterError):
        load_config(path)
    with pytest.raises(InvalidParameterError):
        SystemParams.from_mapping({"rabi_re": "abc"})


def test_geometry_prefactors():
    g = GeometryPrefactors()
    assert g.intensity_prefactor == pytest.approx(1 / 6)
    assert g.correlation_prefactor == pytest.approx(1 / 36)
    g2 = GeometryPrefactors(reduced_dipole=2.0, frequency=3.0, distance=0.5, light_speed=1.5)
    assert g2.intensity_prefactor == pytest.approx(2.0**4 * 4.0 / (6 * 0.25))
    assert g2.correlation_prefactor == pytest.approx(g2.intensity_prefactor**2)
    with pytest.raises(InvalidParameterError):
        GeometryPrefactors(distance=0.0)
