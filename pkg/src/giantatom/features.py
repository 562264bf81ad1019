"""Spectral feature detection: total transmission/reflection points, band gaps.

Reflection-unity points are the roots of ``a(delta) = delta - L(delta)`` with
non-vanishing width; they are bracketed on a uniform grid and refined with
Brent's method.  Transmission zeros are enumerated analytically and then
checked against the exact spectrum.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .core import RegularArray, SystemParams, lorentz_split, phase_scale
from .continuum import double_exp_parts
from .discrete import regular_ratios, scatter_regular, triple_peak_threshold
from .distributions import DoubleExponential

log = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 4001
DEFAULT_R_GAP = 0.99
ZERO_TOL = 1e-10
UNITY_TOL = 1e-9


class GridResolutionError(ValueError):
    """The detuning grid is too coarse to resolve neighbouring features."""


@dataclass
class FeatureReport:
    transmission_zeros: list[float] = field(default_factory=list)
    transmission_zero_residuals: list[float] = field(default_factory=list)
    reflection_unity_points: list[float] = field(default_factory=list)
    reflection_unity_residuals: list[float] = field(default_factory=list)
    triple_peak: bool = False
    band_gap: tuple[float, float, float] | None = None
    walls: tuple[float, float] | None = None
    gamma_eff_zero_thetas: list[float] = field(default_factory=list)
    gamma_eff_local_max_thetas: list[float] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def wall_separation(self) -> float | None:
        return None if self.walls is None else self.walls[1] - self.walls[0]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["band_gap"] = None if self.band_gap is None else dict(
            zip(("lo", "hi", "threshold"), self.band_gap))
        d["walls"] = None if self.walls is None else dict(zip(("lo", "hi"), self.walls))
        d["wall_separation"] = self.wall_separation
        return d


def detuning_grid(window, resolution: int, feature_spacing: float = math.inf) -> np.ndarray:
    lo, hi = window
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    step = (hi - lo) / (resolution - 1)
    if step > 0.5 * feature_spacing:
        raise GridResolutionError(
            f"grid step {step:g} exceeds half the feature spacing {feature_spacing:g}; "
            f"use at least {int(math.ceil(2 * (hi - lo) / feature_spacing)) + 1} points"
        )
    return np.linspace(lo, hi, resolution)


def regular_feature_spacing(params: SystemParams, array: RegularArray) -> float:
    """Detuning period of ``cos(N theta)``, the finest structure of the spectrum."""
    if array.theta == 0:
        return math.inf
    return 2.0 * math.pi * params.omega_a / (array.n_points * array.theta)


def transmission_zeros(params: SystemParams, array: RegularArray, window) -> list[float]:
    """Detunings with vanishing reflection for a regular array, ascending.

    Solves ``cos(N theta) = 1`` with ``cos(theta) != 1``; writing
    ``theta~ = 2n*pi + d``, the zeros are ``(2n'pi/N - d) omega_a / theta~`` for
    integer n' that are not multiples of N.  Candidates failing the exact
    check ``R < 1e-10`` are dropped with a warning.
    """
    zeros, _ = _regular_zeros_with_residuals(params, array, window)
    return zeros


def _regular_zeros_with_residuals(params, array, window):
    th = array.theta
    n = array.n_points
    if th == 0 or n < 2:
        return [], []
    lo, hi = window
    lo = max(lo, -params.omega_a * (1 - 1e-15))
    d = math.fmod(th, 2.0 * math.pi)
    w = params.omega_a
    k_lo = math.ceil(n * (lo * th / w + d) / (2 * math.pi) - 1e-9)
    k_hi = math.floor(n * (hi * th / w + d) / (2 * math.pi) + 1e-9)
    cands = []
    slack = 1e-12 * max(abs(lo), abs(hi), 1.0)  # zeros on the window edge count as inside
    for k in range(k_lo, k_hi + 1):
        if k % n == 0:
            continue
        delta = (2 * math.pi * k / n - d) * w / th
        if lo - slack <= delta <= hi + slack and delta > -w:
            cands.append(delta)
    if not cands:
        return [], []
    _, r = scatter_regular(params, array, np.array(cands))
    zeros, res = [], []
    for delta, rr in zip(cands, r):
        if rr < ZERO_TOL:
            zeros.append(delta)
            res.append(float(rr))
        else:
            log.warning("dropping candidate transmission zero %r (R=%g)", delta, rr)
    return zeros, res


def find_unity_points(parts: Callable, grid: np.ndarray, reflectance: Callable):
    """Roots of ``a`` (from ``parts(delta) -> (a, b)``) where ``b != 0``.

    Returns ``(points, residuals)`` with residual ``1 - R`` at each root.
    """
    a, b = parts(grid)
    sign = np.sign(a)
    pts, res = [], []
    for i in np.flatnonzero(sign == 0):
        pts.append(float(grid[i]))
    idx = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    scale = max(abs(grid[0]), abs(grid[-1]), 1.0)

    def f(x):
        return float(parts(np.array([x]))[0][0])

    for i in idx:
        pts.append(brentq(f, grid[i], grid[i + 1], xtol=1e-15 * scale, rtol=1e-15, maxiter=200))
    pts.sort()
    keep, out_res = [], []
    for x in pts:
        r = float(np.atleast_1d(reflectance(np.array([x])))[0])
        if 1.0 - r < UNITY_TOL:
            keep.append(x)
            out_res.append(1.0 - r)
        else:
            # a = 0 with b ~ 0: decoupled frequency, not a reflection peak
            log.debug("root %r rejected, R=%r", x, r)
    return keep, out_res


def _runs(mask: np.ndarray):
    edges = np.flatnonzero(np.diff(np.concatenate(([0], mask.astype(np.int8), [0]))))
    return edges.reshape(-1, 2)  # [start, stop) index pairs


def find_band_gap(grid, reflectance, r_gap: float, gamma_dipole: float):
    """Widest contiguous interval with ``R > r_gap`` if it beats a Lorentzian.

    A single Lorentzian of full width Gamma~ stays above ``r_gap`` over a
    width ``Gamma~ sqrt((1 - r_gap)/r_gap)``; only plateaus at least twice
    that wide are reported as a gap.
    """
    runs = _runs(reflectance > r_gap)
    if len(runs) == 0:
        return None
    widths = grid[runs[:, 1] - 1] - grid[runs[:, 0]]
    best = int(np.argmax(widths))
    lorentz = gamma_dipole * math.sqrt((1.0 - r_gap) / r_gap)
    if widths[best] < 2.0 * lorentz:
        return None
    s, e = runs[best]
    return float(grid[s]), float(grid[e - 1]), float(r_gap)


def find_walls(grid, reflectance, center: float, zeros: list[float]):
    """Steepest points of R between the central peak and the flanking zeros."""
    left = [z for z in zeros if z < center]
    right = [z for z in zeros if z > center]
    if not left or not right:
        return None
    slope = np.gradient(reflectance, grid)
    lo_m = (grid > max(left)) & (grid < center)
    hi_m = (grid > center) & (grid < min(right))
    if lo_m.sum() < 3 or hi_m.sum() < 3:
        return None
    lo = grid[lo_m][np.argmax(slope[lo_m])]
    hi = grid[hi_m][np.argmin(slope[hi_m])]
    return float(lo), float(hi)


def gamma_eff_zero_thetas(n_points: int) -> list[float]:
    """theta~ in (0, 2*pi) where the Markov effective decay vanishes."""
    return [2.0 * math.pi * k / n_points for k in range(1, n_points)]


def gamma_eff_local_max_thetas(n_points: int, resolution: int = 20001) -> list[float]:
    """Interior local maxima of the Markov effective decay over (0, 2*pi).

    Roots of N cot(N x/2) = cot(x/2), cleared of denominators as
    N cos(N x/2) sin(x/2) - sin(N x/2) cos(x/2) = 0.
    """
    n = n_points
    if n < 3:
        return []

    def k(x):
        return n * np.cos(0.5 * n * x) * np.sin(0.5 * x) - np.sin(0.5 * n * x) * np.cos(0.5 * x)

    grid = np.linspace(0.0, 2.0 * math.pi, resolution)[1:-1]
    vals = k(grid)
    out = [float(grid[i]) for i in np.flatnonzero(vals == 0)]
    for i in np.flatnonzero(vals[:-1] * vals[1:] < 0):
        out.append(brentq(k, grid[i], grid[i + 1], xtol=1e-15))
    return sorted(out)


def regular_parts(params: SystemParams, array: RegularArray):
    def parts(delta):
        f, g = regular_ratios(array.n_points, phase_scale(params, delta) * array.theta)
        return delta - 0.5 * array.gamma * f, 0.5 * array.gamma * g
    return parts


def is_multiple_of_2pi(theta: float, rtol: float = 1e-12) -> bool:
    if theta == 0:
        return False
    n = round(theta / (2 * math.pi))
    return n >= 1 and abs(theta - 2 * math.pi * n) <= rtol * max(theta, 1.0)


def feature_report(params: SystemParams, array: RegularArray, window,
                   resolution: int = DEFAULT_RESOLUTION, r_gap: float = DEFAULT_R_GAP,
                   grid: np.ndarray | None = None) -> FeatureReport:
    """Collect all regular-array spectral features inside ``window``."""
    if grid is None:
        grid = detuning_grid(window, resolution, regular_feature_spacing(params, array))
    parts = regular_parts(params, array)

    def refl(d):
        return lorentz_split(*parts(d))[1]

    R = refl(grid)
    zeros, zres = _regular_zeros_with_residuals(params, array, window)
    unity, ures = find_unity_points(parts, grid, refl)
    threshold = triple_peak_threshold(array, params)
    report = FeatureReport(
        transmission_zeros=zeros,
        transmission_zero_residuals=zres,
        reflection_unity_points=unity,
        reflection_unity_residuals=ures,
        triple_peak=is_multiple_of_2pi(array.theta) and array.theta > threshold,
        band_gap=find_band_gap(grid, R, r_gap, array.gamma_dipole),
        gamma_eff_zero_thetas=gamma_eff_zero_thetas(array.n_points),
        gamma_eff_local_max_thetas=gamma_eff_local_max_thetas(array.n_points),
        meta={"model": "regular", "n_points": array.n_points, "gamma": array.gamma,
              "theta": array.theta, "omega_a": params.omega_a,
              "window": list(window), "resolution": len(grid), "r_gap": r_gap,
              "triple_peak_threshold": threshold},
    )
    if unity:
        center = min(unity, key=abs)
        report.walls = find_walls(grid, R, center, zeros)
    return report


def double_exp_feature_spacing(params: SystemParams, dist: DoubleExponential) -> float:
    """Detuning period of ``cos(s phi_0)``."""
    if dist.phi_0 == 0:
        return math.inf
    return 2.0 * math.pi * params.omega_a / dist.phi_0


def double_exp_zeros(params: SystemParams, dist: DoubleExponential, window):
    """Detunings where ``cos((1 + delta/omega_a) phi_0) = -1``, with residual R."""
    if dist.phi_0 == 0:
        return [], []
    w, p0 = params.omega_a, dist.phi_0
    lo, hi = max(window[0], -w * (1 - 1e-15)), window[1]
    # s phi_0 = (2n + 1) pi
    n_lo = math.ceil(((1 + lo / w) * p0 / math.pi - 1) / 2 - 1e-9)
    n_hi = math.floor(((1 + hi / w) * p0 / math.pi - 1) / 2 + 1e-9)
    cands = [w * ((2 * n + 1) * math.pi / p0 - 1) for n in range(max(n_lo, 0), n_hi + 1)]
    slack = 1e-12 * max(abs(lo), abs(hi), 1.0)
    cands = [d for d in cands if lo - slack <= d <= hi + slack]
    if not cands:
        return [], []
    parts = double_exp_parts(params, dist.gamma_tilde, dist.theta_big, dist.phi_0)
    _, r = lorentz_split(*parts(np.array(cands)))
    zeros, res = [], []
    for d, rr in zip(cands, r):
        if rr < ZERO_TOL:
            zeros.append(d)
            res.append(float(rr))
        else:
            log.warning("dropping candidate transmission zero %r (R=%g)", d, rr)
    return zeros, res


def double_exp_feature_report(params: SystemParams, dist: DoubleExponential, window,
                              resolution: int = DEFAULT_RESOLUTION,
                              r_gap: float = DEFAULT_R_GAP,
                              grid: np.ndarray | None = None) -> FeatureReport:
    """Transmission zeros and reflection-unity points of the double exponential."""
    if grid is None:
        grid = detuning_grid(window, resolution, double_exp_feature_spacing(params, dist))
    parts = double_exp_parts(params, dist.gamma_tilde, dist.theta_big, dist.phi_0)

    def refl(d):
        return lorentz_split(*parts(d))[1]

    R = refl(grid)
    zeros, zres = double_exp_zeros(params, dist, window)
    unity, ures = find_unity_points(parts, grid, refl)
    report = FeatureReport(
        transmission_zeros=zeros,
        transmission_zero_residuals=zres,
        reflection_unity_points=unity,
        reflection_unity_residuals=ures,
        triple_peak=len(unity) >= 3,
        band_gap=find_band_gap(grid, R, r_gap, dist.gamma_tilde),
        meta={"model": "double_exponential", **dist.params_dict(), "omega_a": params.omega_a,
              "window": list(window), "resolution": len(grid), "r_gap": r_gap},
    )
    if unity:
        report.walls = find_walls(grid, R, min(unity, key=abs), zeros)
    return report
