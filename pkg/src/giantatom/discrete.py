"""Scattering coefficients for discrete coupling points.

All spectra share the form

    T = (delta - L)**2 / ((delta - L)**2 + G**2/4),   R = 1 - T,

with the frequency shift ``L`` and width ``G`` built from pairwise phase
delays.  In the exact (non-Markovian) formulas the delays carry the
detuning, ``phi_mn = (1 + delta/omega_a) phi~_mn``; in the Markov limit they
are frozen at ``phi~_mn``.
"""
from __future__ import annotations

import math

import numpy as np

from .core import (
    REGIME_THRESHOLDS,
    DiscreteCoupling,
    MarkovCharacterization,
    RegularArray,
    SystemParams,
    classify_rho,
    lorentz_split,
    phase_scale,
)

# detunings per block when broadcasting over point pairs
_CHUNK = 4096


def _shift_and_width(phases, gammas, scale):
    """Lamb-like shift and width for phase positions scaled by ``scale``.

    ``scale`` is an array of phase factors; returns arrays of the same shape.
    The width uses |sum sqrt(g) e^{i phi}|**2, which equals the pairwise cosine
    sum and is manifestly non-negative.
    """
    ph = np.asarray(phases, dtype=float)
    amp = np.sqrt(np.asarray(gammas, dtype=float))
    s = np.atleast_1d(np.asarray(scale, dtype=float))
    iu, ju = np.triu_indices(len(ph), k=1)
    sep = ph[ju] - ph[iu]  # >= 0, points are sorted
    weight = amp[iu] * amp[ju]
    shift = np.empty_like(s)
    width = np.empty_like(s)
    for start in range(0, s.size, _CHUNK):
        blk = s[start:start + _CHUNK, None]
        # 1/2 sum_{m,n} -> sum_{m<n}; diagonal terms vanish (sin 0)
        shift[start:start + _CHUNK] = np.sin(blk * sep) @ weight if sep.size else 0.0
        z = np.exp(1j * blk * ph) @ amp
        width[start:start + _CHUNK] = z.real**2 + z.imag**2
    return shift, width


def scatter_general(params: SystemParams, coupling: DiscreteCoupling, delta):
    """Exact transmittance and reflectance for arbitrary coupling points.

    Parameters
    ----------
    params : SystemParams
    coupling : DiscreteCoupling
    delta : float or array_like
        Photon-atom detuning(s), must exceed ``-omega_a``.

    Returns
    -------
    (T, R) : floats or arrays shaped like ``delta``
    """
    scale = phase_scale(params, delta)
    shift, width = _shift_and_width(coupling.phases, coupling.gammas, scale)
    d = np.asarray(delta, dtype=float).reshape(shift.shape)
    t, r = lorentz_split(d - shift, 0.5 * width)
    if np.ndim(delta) == 0:
        return float(t[0]), float(r[0])
    return t.reshape(np.shape(delta)), r.reshape(np.shape(delta))


def series_radius(n_points: int) -> float:
    """Half-width around theta = 2n*pi where the regular-array ratios use series."""
    return min(1e-4, 1e-3 / n_points)


_S_SWITCH = 0.5
# y - sin y = sum_k (-1)**k y**(2k+3) / (2k+3)!, k = 0..6
_S_COEF = tuple((-1) ** k / math.factorial(2 * k + 3) for k in range(7))


def x_minus_sin(y):
    """``y - sin(y)`` without cancellation for small ``|y|``."""
    y0 = np.asarray(y, dtype=float)
    y = np.atleast_1d(y0)
    out = y - np.sin(y)
    small = np.abs(y) < _S_SWITCH
    if np.any(small):
        ys = y[small]
        y2 = ys * ys
        acc = np.zeros_like(ys)
        for c in reversed(_S_COEF):
            acc = acc * y2 + c
        out[small] = acc * ys**3
    return out.reshape(y0.shape) if y0.ndim else float(out[0])


def regular_ratios(n_points: int, theta):
    """The two ratios of the regular-array formula.

    Returns ``(f, g)`` with

        f = (N sin(theta) - sin(N theta)) / (1 - cos(theta))
        g = (1 - cos(N theta)) / (1 - cos(theta))

    Near theta = 2n*pi both are 0/0; there a Taylor expansion in the
    reduced angle is used instead.
    """
    n = n_points
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    x = th - 2.0 * np.pi * np.round(th / (2.0 * np.pi))
    near = np.abs(x) < series_radius(n)
    # N sin x - sin Nx = (Nx - sin Nx) - N (x - sin x) avoids the cancellation

    f = np.empty_like(th)
    g = np.empty_like(th)
    far = ~near
    if np.any(far):
        xf = x[far]
        half = np.sin(0.5 * xf)
        den = 2.0 * half * half
        f[far] = (x_minus_sin(n * xf) - n * x_minus_sin(xf)) / den
        sn = np.sin(0.5 * n * xf)
        # below its own rounding error sin(N x/2) is an exact decoupling zero
        sn[np.abs(sn) <= 4.0 * np.finfo(float).eps * (1.0 + 0.5 * n * np.abs(xf))] = 0.0
        g[far] = np.square(sn / half)
    if np.any(near):
        xn = x[near]
        c = n * (n * n - 1)
        x2 = xn * xn
        f[near] = xn * (c / 3.0 - c * (3 * n * n - 2) / 180.0 * x2
                        + c * (n * n - 2) * (2 * n * n - 1) / 5040.0 * x2 * x2)
        g[near] = n * n - n * n * (n * n - 1) / 12.0 * x2 \
            + n * n * (n * n - 1) * (2 * n * n - 3) / 720.0 * x2 * x2
    return f, g


def scatter_regular(params: SystemParams, array: RegularArray, delta):
    """Exact spectrum of a regular array via its closed form."""
    scale = phase_scale(params, delta)
    f, g = regular_ratios(array.n_points, scale * array.theta)
    d = np.atleast_1d(np.asarray(delta, dtype=float))
    t, r = lorentz_split(d - 0.5 * array.gamma * f, 0.5 * array.gamma * g)
    if np.ndim(delta) == 0:
        return float(t[0]), float(r[0])
    return t.reshape(np.shape(delta)), r.reshape(np.shape(delta))


def regime_rho(phase_span: float, gamma_dipole: float, params: SystemParams) -> float:
    return phase_span * gamma_dipole / params.omega_a


def classify_regime(params: SystemParams, coupling, thresholds=REGIME_THRESHOLDS):
    """Classify by ``rho = phase_span * Gamma~ / omega_a``.

    Accepts a DiscreteCoupling or a RegularArray.  Returns ``(regime, rho)``.
    """
    rho = regime_rho(coupling.phase_span, coupling.gamma_dipole, params)
    return classify_rho(rho, thresholds), rho


def markov_characterize(coupling: DiscreteCoupling, params: SystemParams | None = None,
                        thresholds=REGIME_THRESHOLDS) -> MarkovCharacterization:
    """Lamb shift, effective decay and dipole rate with detuning-free phases."""
    shift, width = _shift_and_width(coupling.phases, coupling.gammas, np.array([1.0]))
    regime = rho = None
    if params is not None:
        regime, rho = classify_regime(params, coupling, thresholds)
    return MarkovCharacterization(float(shift[0]), float(width[0]),
                                  coupling.gamma_dipole, regime, rho)


def markov_characterize_regular(array: RegularArray, params: SystemParams | None = None,
                                thresholds=REGIME_THRESHOLDS) -> MarkovCharacterization:
    """Closed-form Lamb shift and effective decay of a regular array."""
    f, g = regular_ratios(array.n_points, array.theta)
    regime = rho = None
    if params is not None:
        regime, rho = classify_regime(params, array, thresholds)
    return MarkovCharacterization(0.5 * array.gamma * float(f[0]), array.gamma * float(g[0]),
                                  array.gamma_dipole, regime, rho)


def scatter_markov(char: MarkovCharacterization, delta):
    """Lorentzian spectrum centred at the Lamb shift with FWHM gamma_eff."""
    d = np.asarray(delta, dtype=float)
    t, r = lorentz_split(d - char.lamb_shift, 0.5 * char.gamma_eff)
    return t, r


def triple_peak_threshold(array: RegularArray, params: SystemParams) -> float:
    """theta~ above which a 2n*pi array shows three total-reflection points."""
    n = array.n_points
    if n < 2:
        return math.inf
    return 6.0 * params.omega_a / (n * (n * n - 1) * array.gamma)
