import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from giantatom.core import (
    DiscreteCoupling,
    DomainError,
    MarkovCharacterization,
    RegularArray,
    Regime,
    SpectrumTable,
    SystemParams,
    classify_rho,
    detuned_phase,
    expand_regular,
    lorentz_split,
)


def test_detuned_phase_examples():
    p = SystemParams(1000.0)
    assert detuned_phase(p, 0.0, 3.0) == 3.0
    assert detuned_phase(p, 500.0, 2 * math.pi) == pytest.approx(3 * math.pi, rel=1e-15)
    with pytest.raises(DomainError):
        detuned_phase(p, -1000.0, 1.0)


def test_detuned_phase_rejects_nonfinite():
    with pytest.raises(DomainError):
        detuned_phase(SystemParams(10.0), math.nan, 1.0)


@pytest.mark.parametrize("omega", [0.0, -1.0, math.inf, math.nan])
def test_system_params_validation(omega):
    with pytest.raises(DomainError):
        SystemParams(omega)


@given(st.floats(1.0, 1e4), st.floats(-0.99, 10.0), st.floats(0.0, 1e3), st.floats(0.0, 1e3))
def test_detuned_phase_linear_in_phase(omega, frac, a, b):
    p = SystemParams(omega)
    d = frac * omega
    lhs = detuned_phase(p, d, a + b)
    assert lhs == pytest.approx(detuned_phase(p, d, a) + detuned_phase(p, d, b), rel=1e-12, abs=1e-12)


@given(st.floats(1.0, 1e4), st.floats(-0.99, 5.0), st.floats(1e-3, 5.0), st.floats(1e-3, 1e3))
def test_detuned_phase_increasing_in_detuning(omega, frac, step, phi):
    p = SystemParams(omega)
    d = frac * omega
    assert detuned_phase(p, d + step * omega, phi) > detuned_phase(p, d, phi)


def test_expand_regular_examples():
    assert expand_regular(RegularArray(1, 1.0, 5.0)).points == [(0.0, 1.0)]
    pts = expand_regular(RegularArray(3, 2.0, math.pi)).points
    assert pts == [(0.0, 2.0), (math.pi, 2.0), (2 * math.pi, 2.0)]
    assert expand_regular(RegularArray(2, 1.0, 600 * math.pi)).points == [(0.0, 1.0), (600 * math.pi, 1.0)]


def test_discrete_coupling_sorted_and_validated():
    c = DiscreteCoupling((3.0, 1.0, 2.0), (0.3, 0.1, 0.2))
    assert c.phases == (1.0, 2.0, 3.0)
    assert c.gammas == (0.1, 0.2, 0.3)
    assert c.phase_span == 2.0
    with pytest.raises(ValueError):
        DiscreteCoupling((), ())
    with pytest.raises(ValueError):
        DiscreteCoupling((0.0,), (-1.0,))
    with pytest.raises(ValueError):
        DiscreteCoupling((0.0, 1.0), (1.0,))


def test_gamma_dipole():
    c = DiscreteCoupling((0.0, 1.0), (1.0, 4.0))
    assert c.gamma_dipole == pytest.approx(9.0)
    assert RegularArray(5, 2.0, 1.0).gamma_dipole == 50.0


@pytest.mark.parametrize("bad", [dict(n_points=0, gamma=1, theta=0),
                                 dict(n_points=2, gamma=0, theta=0),
                                 dict(n_points=2, gamma=1, theta=-1),
                                 dict(n_points=2.5, gamma=1, theta=0)])
def test_regular_array_validation(bad):
    with pytest.raises(ValueError):
        RegularArray(**bad)


def test_classify_rho_thresholds():
    assert classify_rho(0.05) is Regime.MARKOVIAN
    assert classify_rho(1.0) is Regime.MODERATE
    assert classify_rho(10.0) is Regime.MODERATE
    assert classify_rho(11.0) is Regime.DEEP
    assert classify_rho(1.0, (2.0, 3.0)) is Regime.MARKOVIAN


def test_lorentz_split_decoupled_atom_transmits():
    assert lorentz_split(0.0, 0.0) == (1.0, 0.0)
    t, r = lorentz_split(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    assert list(t) == [1.0, 0.5] and list(r) == [0.0, 0.5]


def test_spectrum_table_shape_check():
    with pytest.raises(ValueError):
        SpectrumTable([0.0, 1.0], [1.0], [0.0])
    tab = SpectrumTable([0.0], [0.25], [0.75])
    assert tab.max_unitarity_violation() == 0.0
    assert len(tab) == 1


def test_markov_characterization_dict():
    m = MarkovCharacterization(0.1, 0.2, 0.3, Regime.DEEP, 12.0)
    assert m.as_dict()["regime"] == "deep_non_markovian"
