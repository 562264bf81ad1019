import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from giantatom.core import DiscreteCoupling, RegularArray, Regime, SystemParams, expand_regular
from giantatom.discrete import (
    classify_regime,
    markov_characterize,
    markov_characterize_regular,
    regular_ratios,
    scatter_general,
    scatter_markov,
    scatter_regular,
    series_radius,
    triple_peak_threshold,
    x_minus_sin,
)

P1000 = SystemParams(1000.0)

couplings = st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0.0, 1e3), min_size=n, max_size=n),
    st.lists(st.floats(0.0, 3.0), min_size=n, max_size=n),
)).map(lambda pg: DiscreteCoupling(tuple(pg[0]), tuple(pg[1])))


def test_single_point_mirror_and_half_width():
    c = DiscreteCoupling((1.7,), (1.0,))
    assert scatter_general(P1000, c, 0.0) == (0.0, 1.0)
    t, r = scatter_general(P1000, c, 0.5)
    assert t == pytest.approx(0.5, abs=1e-15) and r == pytest.approx(0.5, abs=1e-15)


def test_two_point_transmission_zero():
    c = DiscreteCoupling((0.0, 600 * math.pi), (1.0, 1.0))
    _, r = scatter_general(P1000, c, 5.0 / 3.0)
    assert r < 1e-10


def test_regular_dipole_limit_mirror():
    assert scatter_regular(P1000, RegularArray(2, 1.0, 0.0), 0.0) == (0.0, 1.0)


def test_regular_series_branch_at_two_pi():
    f, g = regular_ratios(4, 2 * math.pi)
    assert abs(f[0]) < 1e-12 and g[0] == pytest.approx(16.0, rel=1e-14)
    # the resonance is a Lorentzian with full width 16 gamma
    p = SystemParams(1e12)
    t, r = scatter_regular(p, RegularArray(4, 1.0, 2 * math.pi), 8.0)
    assert r == pytest.approx(0.5, rel=1e-9)


def test_regular_three_unity_points_600pi():
    from giantatom.features import feature_report
    rep = feature_report(P1000, RegularArray(2, 1.0, 600 * math.pi), (-5.0, 5.0), 4001)
    assert len(rep.reflection_unity_points) == 3


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.5, 7.0, 600 * math.pi + 0.7, 1234.5])
@pytest.mark.parametrize("n", [1, 2, 3, 7, 20])
def test_expand_regular_matches_specialised(theta, n):
    arr = RegularArray(n, 0.7, theta)
    d = np.linspace(-20, 20, 41)
    t1, r1 = scatter_regular(P1000, arr, d)
    t2, r2 = scatter_general(P1000, expand_regular(arr), d)
    # phases of order N*theta lose N*theta*eps absolutely; beyond 1e3 the
    # bound is scaled by that conditioning
    tol = 1e-12 * max(1.0, n * theta / 1e3)
    assert np.max(np.abs(t1 - t2)) < tol
    assert np.max(np.abs(r1 - r2)) < tol


@pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 30, 100])
def test_series_seam_continuity(n):
    r = series_radius(n)
    for sign in (-1, 1):
        x_in, x_out = sign * r * (1 - 1e-12), sign * r * (1 + 1e-12)
        fi, gi = regular_ratios(n, 2 * math.pi + x_in)
        fo, go = regular_ratios(n, 2 * math.pi + x_out)
        assert abs(gi[0] - go[0]) <= 1e-10 * n * n
        assert abs(fi[0] - fo[0]) <= 1e-10 * max(abs(fi[0]), 1.0)


def _x_minus_sin_series(y):
    terms = [(-1) ** k * y ** (2 * k + 3) / math.factorial(2 * k + 3) for k in range(30)]
    return math.fsum(terms)


@pytest.mark.parametrize("y", [1e-8, 1e-3, 0.3, 0.49, 0.51, 2.0, -0.2])
def test_x_minus_sin_small_and_large(y):
    assert x_minus_sin(y) == pytest.approx(_x_minus_sin_series(y), rel=1e-14)
    assert isinstance(x_minus_sin(y), float)
    assert x_minus_sin(np.array([y]))[0] == x_minus_sin(y)


def test_markov_two_points():
    for th in (0.3, 1.0, 2.0, 4.0):
        m = markov_characterize_regular(RegularArray(2, 1.0, th))
        assert m.lamb_shift == pytest.approx(math.sin(th), abs=1e-14)
        assert m.gamma_eff == pytest.approx(2 * (1 + math.cos(th)), abs=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 8])
def test_markov_special_angles(n):
    for k in range(1, 6):
        assert abs(markov_characterize_regular(RegularArray(n, 1.0, k * math.pi)).lamb_shift) < 1e-12
    for k in range(1, n):
        if k % n:
            assert markov_characterize_regular(RegularArray(n, 1.0, 2 * k * math.pi / n)).gamma_eff < 1e-12
    m = markov_characterize_regular(RegularArray(n, 1.0, 2 * math.pi))
    assert m.gamma_eff == pytest.approx(n * n, rel=1e-12)


def test_scatter_markov_examples():
    from giantatom.core import MarkovCharacterization
    m = MarkovCharacterization(0.3, 2.0, 4.0)
    assert scatter_markov(m, 0.3) == (0.0, 1.0)
    t, r = scatter_markov(m, 1.3)
    assert t == pytest.approx(0.5) and r == pytest.approx(0.5)
    assert scatter_markov(MarkovCharacterization(0.0, 0.0, 1.0), 0.0) == (1.0, 0.0)


def test_classify_regime_examples():
    reg, rho = classify_regime(P1000, RegularArray(2, 1.0, 80 * math.pi))
    assert reg is Regime.MODERATE and rho == pytest.approx(4 * 80 * math.pi / 1000)
    reg, rho = classify_regime(P1000, RegularArray(2, 1.0, 600 * math.pi))
    assert rho == pytest.approx(7.5398, rel=1e-4) and reg is Regime.MODERATE
    reg, rho = classify_regime(P1000, RegularArray(2, 1.0, 0.0))
    assert rho == 0.0 and reg is Regime.MARKOVIAN
    reg, _ = classify_regime(P1000, RegularArray(2, 1.0, 600 * math.pi), thresholds=(0.1, 5.0))
    assert reg is Regime.DEEP


def test_triple_peak_threshold():
    assert triple_peak_threshold(RegularArray(2, 1.0, 0.0), P1000) == pytest.approx(1000.0)
    assert triple_peak_threshold(RegularArray(1, 1.0, 0.0), P1000) == math.inf


@given(couplings, st.floats(-0.9, 2.0))
def test_unitarity_general(c, frac):
    t, r = scatter_general(P1000, c, frac * 1000.0)
    assert abs(t + r - 1) < 1e-12
    assert 0 <= t <= 1 and 0 <= r <= 1


@given(couplings, st.floats(-1e3, 1e3), st.floats(-0.5, 0.5))
def test_translation_invariance(c, shift, frac):
    moved = DiscreteCoupling(tuple(p + shift for p in c.phases), c.gammas)
    d = frac * 1000.0
    t1, _ = scatter_general(P1000, c, d)
    t2, _ = scatter_general(P1000, moved, d)
    # phases grow by |shift| ~ 1e3; compare at the roundoff their sines carry
    assert abs(t1 - t2) < 1e-12 + 1e-13 * abs(shift) * sum(c.gammas)


@given(couplings, st.floats(-0.5, 0.5))
def test_point_order_irrelevant(c, frac):
    rev = DiscreteCoupling(tuple(reversed(c.phases)), tuple(reversed(c.gammas)))
    t1, _ = scatter_general(P1000, c, frac * 1e3)
    t2, _ = scatter_general(P1000, rev, frac * 1e3)
    assert abs(t1 - t2) < 1e-12


@given(st.integers(1, 60), st.floats(0.0, 2 * math.pi), st.integers(1, 50))
def test_markov_regular_periodic(n, theta, k):
    a = markov_characterize_regular(RegularArray(n, 1.0, theta))
    b = markov_characterize_regular(RegularArray(n, 1.0, theta + 2 * k * math.pi))
    scale = n * n
    # periodic in exact arithmetic; the shifted angle carries rounding of order k*eps
    tol = 1e-12 * scale * max(1.0, k * 2 * math.pi * n)
    assert abs(a.gamma_eff - b.gamma_eff) <= tol
    assert abs(a.lamb_shift - b.lamb_shift) <= tol


@given(st.integers(1, 60), st.floats(0.0, 100.0))
def test_regular_gamma_eff_nonnegative(n, theta):
    m = markov_characterize_regular(RegularArray(n, 1.0, theta))
    assert 0.0 <= m.gamma_eff <= m.gamma_dipole * (1 + 1e-12)


@given(st.integers(2, 6), st.integers(0, 4), st.floats(0.0, 30.0))
def test_markov_symmetric_when_no_lamb_shift(n, k, d):
    m = markov_characterize_regular(RegularArray(n, 1.0, k * math.pi))
    m = type(m)(0.0, m.gamma_eff, m.gamma_dipole)
    assert scatter_markov(m, d) == scatter_markov(m, -d)


def test_markov_general_equals_regular():
    for th in np.linspace(0.01, 20, 37):
        for n in (2, 3, 6):
            a = markov_characterize(expand_regular(RegularArray(n, 0.4, th)))
            b = markov_characterize_regular(RegularArray(n, 0.4, th))
            assert a.lamb_shift == pytest.approx(b.lamb_shift, abs=1e-12)
            assert a.gamma_eff == pytest.approx(b.gamma_eff, abs=1e-12)


def test_markov_convergence_rate():
    """Sup deviation from the Lorentzian shrinks roughly linearly with rho."""
    errs = []
    for omega in (4e4, 8e4, 1.6e5):
        p = SystemParams(omega)
        arr = RegularArray(2, 1.0, 2 * math.pi * 10 + 0.5)
        m = markov_characterize_regular(arr)
        grid = np.linspace(m.lamb_shift - 5 * m.gamma_eff, m.lamb_shift + 5 * m.gamma_eff, 2001)
        _, r1 = scatter_regular(p, arr, grid)
        _, r2 = scatter_markov(m, grid)
        rho = classify_regime(p, arr)[1]
        errs.append((rho, float(np.max(np.abs(r1 - r2)))))
    assert all(rho < 1e-2 for rho, _ in errs)
    assert all(e < 1e-2 for _, e in errs)
    for (_, e1), (_, e2) in zip(errs, errs[1:]):
        assert 0.4 < e2 / e1 < 0.6
