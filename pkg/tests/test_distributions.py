import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from giantatom.distributions import (
    DoubleExponential,
    Exponential,
    RaisedCosine,
    Tabulated,
    TabulatedFormatError,
    Triangular,
    Uniform,
    UnsupportedVariantError,
    distribution_value,
    load_tabulated,
    make_distribution,
    read_table,
)

NAMED = [Uniform, Exponential, Triangular, RaisedCosine]


def test_uniform_center_value():
    d = Uniform(2.0, 3.0)
    assert distribution_value(d, 0.0) == pytest.approx(1.0 / 3.0)
    assert distribution_value(d, 1.6) == 0.0


def test_triangular_endpoints_vanish():
    d = Triangular(1.0, 2.0)
    assert d(1.0) == 0.0 and d(-1.0) == 0.0


def test_double_exponential_center_value():
    g, T, p0 = 1.0, 0.05, 3.0
    d = DoubleExponential(g, T, p0)
    expect = math.sqrt(g / 2) / (2 * T) * (1 + math.exp(-2 * p0 / T))
    assert d(p0 / 2) == pytest.approx(expect, rel=1e-14)


@pytest.mark.parametrize("cls", NAMED)
@pytest.mark.parametrize("theta", [0.1, 1.0, 2 * math.pi, 20.0])
def test_named_normalisation(cls, theta):
    d = cls(1.7, theta)
    lo, hi = d.support(1e-16)
    pts = sorted(set([lo, hi] + [k for k in d.kinks() if lo < k < hi]))
    total = sum(integrate.quad(d.value, a, b, epsabs=0, epsrel=1e-13)[0]
                for a, b in zip(pts[:-1], pts[1:]))
    assert total == pytest.approx(d.norm, rel=1e-12)
    assert d.mass(-math.inf, math.inf) == pytest.approx(d.norm, rel=1e-14)


@given(st.sampled_from(NAMED + [DoubleExponential]), st.floats(0.01, 30.0),
       st.floats(-50.0, 50.0), st.floats(0.0, 40.0))
def test_nonnegative_and_cdf_monotone(cls, theta, phi, step):
    d = cls(1.0, theta) if cls is not DoubleExponential else cls(1.0, theta, 5.0)
    assert d(phi) >= 0.0
    assert d.cdf(phi + step) >= d.cdf(phi) - 1e-15


@given(st.floats(0.05, 5.0), st.floats(0.0, 100.0), st.floats(-60, 60), st.floats(1e-3, 2.0))
def test_double_exp_cdf_matches_density(theta, p0, lo, width):
    d = DoubleExponential(1.0, theta, p0)
    hi = lo + width
    kinks = sorted(k for k in d.kinks() if lo < k < hi)
    pts = [lo] + kinks + [hi]
    q = sum(integrate.quad(d.value, a, b, epsabs=1e-15, epsrel=1e-12)[0]
            for a, b in zip(pts[:-1], pts[1:]))
    assert d.mass(lo, hi) == pytest.approx(q, rel=1e-9, abs=1e-14)


def test_double_exp_lobes_split_when_far_apart():
    assert len(DoubleExponential(1.0, 0.1, 500 * math.pi).lobes()) == 2
    assert len(DoubleExponential(1.0, 1.0, 0.5).lobes()) == 1


def test_make_distribution_errors():
    with pytest.raises(UnsupportedVariantError):
        make_distribution("gaussian", 1.0, 1.0)
    with pytest.raises(ValueError):
        make_distribution("uniform", 1.0, 1.0, phi_0=1.0)
    assert isinstance(make_distribution("double_exponential", 1.0, 1.0, 2.0), DoubleExponential)


@pytest.mark.parametrize("kw", [dict(gamma_tilde=0, theta_big=1), dict(gamma_tilde=1, theta_big=0),
                                dict(gamma_tilde=1, theta_big=math.nan)])
def test_parameter_validation(kw):
    with pytest.raises(ValueError):
        Uniform(**kw)
    with pytest.raises(ValueError):
        DoubleExponential(1.0, 1.0, -1.0)


def test_tabulated_roundtrip(tmp_path):
    x = np.linspace(-1, 1, 11)
    v = 1 - np.abs(x)
    f = tmp_path / "tri.txt"
    f.write_text("# comment\n" + "\n".join(f"{float(a)!r} {float(b)!r}  # sample" for a, b in zip(x, v)) + "\n")
    xr, vr = read_table(f)
    assert np.array_equal(xr, x) and np.array_equal(vr, v)
    tab = load_tabulated(f, 2.0)
    assert tab.raw_norm_error == pytest.approx(0.0, abs=1e-15)
    assert tab.mass(-5, 5) == pytest.approx(1.0, rel=1e-14)
    assert tab.cdf(0.0) == pytest.approx(0.5, rel=1e-14)
    assert tab(0.05) == pytest.approx(0.95, rel=1e-14)


def test_tabulated_renormalises_with_warning():
    x = np.linspace(-1, 1, 5)
    with pytest.warns(UserWarning, match="renormalised"):
        tab = Tabulated.normalized(x, np.ones(5), 1.0)
    assert tab.raw_norm_error == pytest.approx(2 / math.sqrt(0.5) - 1)
    assert tab.mass(-1, 1) == pytest.approx(math.sqrt(0.5), rel=1e-14)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        Tabulated.normalized(x, np.full(5, math.sqrt(0.5) / 2), 1.0)


@pytest.mark.parametrize("text,match", [
    ("1 2 3\n2 3\n", "two columns"),
    ("0 1\n0 1\n", "increasing"),
    ("0 1\n1 -1\n", "negative"),
    ("0 x\n1 1\n", "could not convert"),
    ("0 1\n", "at least two"),
])
def test_tabulated_format_errors(tmp_path, text, match):
    f = tmp_path / "bad.txt"
    f.write_text(text)
    with pytest.raises(TabulatedFormatError, match=match):
        read_table(f)
