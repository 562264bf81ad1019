import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import curve_fit

from giantatom.continuum import markov_characterize_closed, scatter_continuum
from giantatom.core import DiscreteCoupling, SystemParams
from giantatom.discrete import classify_regime, scatter_general
from giantatom.distributions import DoubleExponential, Exponential, Triangular, Uniform
from giantatom.oracle import (
    amplitude_phase_continuum,
    convergence_study,
    matching_system,
    observed_order,
    solve_matching,
)

P = SystemParams(1000.0)

couplings = st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0.0, 300.0), min_size=n, max_size=n, unique=True),
    st.lists(st.floats(0.01, 3.0), min_size=n, max_size=n),
)).map(lambda pg: DiscreteCoupling(tuple(pg[0]), tuple(pg[1])))


def test_single_point_on_resonance_reflects():
    s = solve_matching(P, DiscreteCoupling((0.0,), (1.0,)), 0.0)
    assert s.t == pytest.approx(0.0, abs=1e-15)
    assert s.R == pytest.approx(1.0, rel=1e-14)
    assert len(s.segment_t) == 2 and len(s.segment_r) == 2


def test_decoupled_points_transmit():
    s = solve_matching(P, DiscreteCoupling((0.0, 1.0), (0.0, 0.0)), 0.3)
    assert s.t == pytest.approx(1.0) and abs(s.r) < 1e-15


def test_system_shape():
    mat, rhs = matching_system(DiscreteCoupling((0.0, 1.0, 2.0), (1.0, 1.0, 1.0)), 0.1, 1.0)
    assert mat.shape == (7, 7) and rhs.shape == (7,)


@settings(max_examples=60)
@given(couplings, st.floats(-20.0, 20.0))
def test_oracle_matches_closed_form(c, delta):
    s = solve_matching(P, c, delta)
    t, r = scatter_general(P, c, delta)
    assert s.unitarity_violation() < 1e-10
    assert abs(s.T - t) < 1e-10 and abs(s.R - r) < 1e-10


@given(couplings, st.floats(-100.0, 100.0), st.floats(-5.0, 5.0))
def test_offset_changes_phase_only(c, shift, delta):
    moved = DiscreteCoupling(tuple(p + shift for p in c.phases), c.gammas)
    a, b = solve_matching(P, c, delta), solve_matching(P, moved, delta)
    assert abs(abs(a.r) - abs(b.r)) < 1e-9
    assert abs(abs(a.t) - abs(b.t)) < 1e-9


@given(couplings, st.floats(-5.0, 5.0))
def test_reversal_preserves_magnitudes(c, delta):
    top = max(c.phases)
    rev = DiscreteCoupling(tuple(top - p for p in c.phases), c.gammas)
    a, b = solve_matching(P, c, delta), solve_matching(P, rev, delta)
    assert abs(abs(a.r) - abs(b.r)) < 1e-9


@pytest.mark.parametrize("dist", [Uniform(1.0, 2.0), Triangular(1.0, 3.0),
                                  DoubleExponential(1.0, 0.5, 4.0)])
def test_symmetric_distribution_has_real_transform(dist):
    for delta in (-0.3, 0.0, 0.7):
        # the transform is real, so alpha is 0 or pi
        assert abs(math.sin(amplitude_phase_continuum(P, dist, delta).alpha)) < 1e-12


def test_continuum_amplitudes_consistent():
    dist = Exponential(1.0, 1.5)
    s = amplitude_phase_continuum(P, dist, 0.4)
    t, r = scatter_continuum(P, dist, 0.4)
    assert s.T == pytest.approx(t, rel=1e-12) and s.R == pytest.approx(r, rel=1e-12)
    assert s.unitarity_violation() < 1e-13
    # t - 1 = r e^{-2 i alpha}
    assert abs(s.t - 1 - s.r * np.exp(-2j * s.alpha)) < 1e-13


def test_two_point_markov_lorentzian_fit():
    p = SystemParams(1e6)
    c = DiscreteCoupling((0.0, 1.0), (1.0, 1.0))
    assert classify_regime(p, c)[1] < 1e-3
    grid = np.linspace(-8, 8, 401)
    r = np.array([solve_matching(p, c, d).R for d in grid])

    def lor(d, shift, width):
        return (width / 2) ** 2 / ((d - shift) ** 2 + (width / 2) ** 2)

    (shift, width), _ = curve_fit(lor, grid, r, p0=(0.5, 3.0))
    assert shift == pytest.approx(math.sin(1.0), rel=5e-3)
    assert width == pytest.approx(2 * (1 + math.cos(1.0)), rel=5e-3)


def test_convergence_monotone_and_order():
    tab = convergence_study(Uniform(1.0, 1.0), (8, 16, 32, 64), SystemParams(10.0),
                            np.linspace(-3, 3, 61))
    assert tab.monotone
    assert tab.order == pytest.approx(2.0, abs=0.3)
    assert tab.as_dict()["monotone"]


def test_observed_order_of_power_law():
    ms = [4, 8, 16, 32]
    assert observed_order(ms, [m**-1.5 for m in ms]) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        convergence_study(Uniform(1.0, 1.0), (16, 8), P, [0.0])


def test_markov_limit_of_continuum():
    dist = Triangular(1.0, 2.0)
    m = markov_characterize_closed(dist)
    t, _ = scatter_continuum(SystemParams(1e9), dist, m.lamb_shift)
    assert t == pytest.approx(0.0, abs=1e-12)
