import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tests.conftest import STEADY_GRID, lindblad_generator
from vicsim.generator import build_full16
from vicsim.params import SystemParams
from vicsim.steady import DegenerateSteadyStateError, residual, steady_analytic, steady_numeric


def test_closed_form_values():
    s = steady_analytic(SystemParams(rabi=0.5, detuning=0.0))
    assert s.rho11 == pytest.approx(2 / 9, abs=1e-15)
    assert s.rho33 == pytest.approx(5 / 18, abs=1e-15)
    assert s.rho13 == pytest.approx(-1j / 9, abs=1e-15)
    assert s.rho24 == pytest.approx(1j / 9, abs=1e-15)


def test_undriven_atom_sits_in_ground_doublet():
    s = steady_analytic(SystemParams(rabi=0.0))
    assert (s.rho11, s.rho33, s.rho13) == (0.0, 0.5, 0.0)


def test_saturation():
    s = steady_analytic(SystemParams(rabi=1e4, detuning=0.3))
    assert s.rho11 == pytest.approx(0.25, abs=1e-8)
    assert s.rho33 == pytest.approx(0.25, abs=1e-8)


@pytest.mark.parametrize("rabi, detuning", STEADY_GRID)
def test_numeric_matches_closed_form(rabi, detuning):
    p = SystemParams(rabi=rabi, detuning=detuning)
    exact = steady_analytic(p)
    numeric = steady_numeric(build_full16(p))
    assert np.max(np.abs(numeric.rho - exact.rho)) <= 1e-10
    assert residual(numeric) <= 1e-12


def test_numeric_is_independent_of_vic():
    p = SystemParams(rabi=0.5, detuning=0.5)
    a = steady_numeric(params=p.replace(vic=True))
    b = steady_numeric(params=p.replace(vic=False))
    assert np.max(np.abs(a.rho - b.rho)) <= 1e-12


def test_normalization():
    s = steady_numeric(params=SystemParams(rabi=0.5, detuning=0.5))
    assert 2 * s.rho11 + 2 * s.rho33 == pytest.approx(1.0, abs=1e-12)


def test_true_lindblad_has_same_steady_state():
    # the interference coupling does not reach the steady state even at full strength
    p = SystemParams(rabi=1.0, detuning=0.5)
    L = lindblad_generator(p, interference=True)
    from vicsim.generator import GeneratorMatrix

    s = steady_numeric(GeneratorMatrix(L, p))
    assert np.max(np.abs(s.rho - steady_analytic(p).rho)) <= 1e-10


def test_degenerate_kernel_is_reported():
    from vicsim.generator import GeneratorMatrix

    with pytest.raises(DegenerateSteadyStateError):
        steady_numeric(GeneratorMatrix(np.zeros((16, 16), complex), SystemParams()))


def test_numeric_requires_full_generator():
    from vicsim.generator import build_block8

    with pytest.raises(ValueError):
        steady_numeric(build_block8(SystemParams()))


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=0.01, max_value=20),
    st.floats(min_value=-5, max_value=5),
)
def test_steady_invariants(rabi, detuning):
    s = steady_analytic(SystemParams(rabi=rabi, detuning=detuning))
    assert 2 * s.rho11 + 2 * s.rho33 == pytest.approx(1.0, abs=1e-14)
    assert s.rho11 <= 0.25 <= s.rho33
    assert s.rho13 == -s.rho24
    for i, j in [(0, 1), (0, 3), (2, 1), (2, 3)]:
        assert s.rho[i, j] == 0


def test_coherence_purely_imaginary_on_resonance():
    s = steady_analytic(SystemParams(rabi=1.7, detuning=0.0))
    assert s.rho13.real == 0.0
