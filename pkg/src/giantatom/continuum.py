"""Spectra and Markov quantities for continuous coupling distributions.

Two independent routes are provided:

* closed forms for the named distributions (Lamb shift, effective decay and
  the full double-exponential spectrum), with series branches at their
  removable singularities;
* generic quadrature valid for any distribution, including tabulated ones.

The generic route never forms the double integrals on a 2-D grid.  With
``Z(s) = int v(x) exp(i s x) dx``,

    int int v v' cos(s (x - x')) = |Z(s)|**2

and the ordered sine integral is evaluated either as a causal cumulative
integral on Gauss-Legendre panels (default) or through the autocorrelation
``c(u) = int v(x) v(x+u) dx`` as ``2 int_0^inf c(u) sin(s u) du``.  Panels
are split at the kinks of the integrand and at every oscillation period.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate

from .core import (
    REGIME_THRESHOLDS,
    DiscreteCoupling,
    MarkovCharacterization,
    SystemParams,
    check_detuning,
    classify_rho,
    lorentz_split,
    phase_scale,
)
from .discrete import x_minus_sin
from .distributions import (
    DEFAULT_TAIL,
    CouplingDistribution,
    DoubleExponential,
    Exponential,
    RaisedCosine,
    Tabulated,
    Triangular,
    Uniform,
    UnsupportedVariantError,
)

PI = math.pi
QUAD_RTOL = 1e-11


class QuadratureError(RuntimeError):
    def __init__(self, message: str, achieved: float, requested: float):
        super().__init__(f"{message}: achieved error {achieved:.3g} > requested {requested:.3g}")
        self.achieved = achieved
        self.requested = requested


class TruncationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# closed forms (all in units of Gamma~)

def _uniform(T):
    if T < 1e-2:
        t2 = T * T
        lamb = T * (1 / 6 - t2 / 120 + t2 * t2 / 5040 - t2**3 / 362880)
        gam = 1 - t2 / 12 + t2 * t2 / 360 - t2**3 / 20160 + t2**4 / 1814400
        return lamb, gam
    return float(x_minus_sin(T)) / (T * T), 4.0 * math.sin(0.5 * T) ** 2 / (T * T)


def _exponential(T):
    q = T * T + 4.0
    return T * (T * T + 12.0) / (2.0 * q * q), 16.0 / (q * q)


def _sin_tail(y):
    """sin(y) - y + y**3/6 without cancellation."""
    if abs(y) > 1.0:
        return math.sin(y) - y + y**3 / 6
    y2 = y * y
    acc = 0.0
    for k in range(10, -1, -1):
        n = 2 * k + 5
        acc = acc * (-y2) + 1.0 / math.factorial(n)
    return acc * y**5


def _triangular(T):
    if T < 0.1:
        t2 = T * T
        lamb = T * (7 / 60 - 31 * t2 / 10080 + 127 * t2**2 / 2903040
                    - 73 * t2**3 / 182476800 + 2047 * t2**4 / 797058662400)
    else:
        # 12T + T^3 - 48 sin(T/2) + 12 sin T, with the cubic cancellation removed
        lamb = 4.0 / (3.0 * T**4) * (12 * _sin_tail(T) - 48 * _sin_tail(T / 2))
    return lamb, 256.0 * math.sin(T / 4) ** 4 / T**4


# Taylor coefficients in x = Theta - 2 pi, through x**4
_RC_LAMB_2PI = (
    15 / (16 * PI),
    (PI**2 - 15) / (24 * PI**2),
    (105 - 16 * PI**2) / (256 * PI**3),
    (-1995 - 16 * PI**4 + 460 * PI**2) / (7680 * PI**4),
    (3255 - 960 * PI**2 + 64 * PI**4) / (20480 * PI**5),
)
_RC_GAMMA_2PI = (
    0.25,
    -3 / (8 * PI),
    -1 / 48 + 23 / (64 * PI**2),
    (PI**2 - 9) / (32 * PI**3),
    (9045 - 1380 * PI**2 + 32 * PI**4) / (46080 * PI**4),
)
RC_SWITCH = 1e-3


def _raised_cosine(T):
    x = T - 2 * PI
    if abs(x) < RC_SWITCH:
        lamb = sum(c * x**k for k, c in enumerate(_RC_LAMB_2PI))
        gam = sum(c * x**k for k, c in enumerate(_RC_GAMMA_2PI))
        return lamb, gam
    if T < PI:
        den = T**3 - 4 * PI**2 * T
        num = 32 * PI**4 * float(x_minus_sin(T)) - 20 * PI**2 * T**3 + 3 * T**5
    else:
        # near T = 2 pi both factors vanish; in x = T - 2 pi the leading
        # terms cancel exactly instead of numerically
        den = T * x * (4 * PI + x)
        num = (x * x * (120 * PI**3 + x * (100 * PI**2 + x * (30 * PI + 3 * x)))
               + 32 * PI**4 * float(x_minus_sin(x)))
    lamb = num / (2 * den * den)
    gam = 64 * PI**4 * math.sin(T / 2) ** 2 / (den * den)
    return lamb, gam


def double_exp_lamb(T, phi0):
    """Lamb shift / Gamma~ of the double exponential (array-friendly)."""
    T = np.asarray(T, dtype=float)
    phi0 = np.asarray(phi0, dtype=float)
    q = T * T + 4.0
    with np.errstate(over="ignore", under="ignore"):
        decay = np.exp(-2.0 * phi0 / T)
    return ((8 * phi0 + 12 * T + T**3 + 2 * T * T * phi0) * decay
            + 12 * T + T**3 + 16 * np.sin(phi0)) / (4.0 * q * q)


def double_exp_gamma(T, phi0):
    q = np.asarray(T, dtype=float) ** 2 + 4.0
    return 8.0 * (1.0 + np.cos(phi0)) / (q * q)


def _double_exp(T, phi0):
    return float(double_exp_lamb(T, phi0)), float(double_exp_gamma(T, phi0))


def continuum_regime(dist: CouplingDistribution, params: SystemParams,
                     thresholds=REGIME_THRESHOLDS):
    rho = dist.phase_span * dist.gamma_tilde / params.omega_a
    return classify_rho(rho, thresholds), rho


def markov_characterize_closed(dist: CouplingDistribution, params: SystemParams | None = None,
                               thresholds=REGIME_THRESHOLDS) -> MarkovCharacterization:
    """Lamb shift and effective decay of a named distribution in closed form."""
    T = dist.theta_big
    if isinstance(dist, Tabulated):
        raise UnsupportedVariantError("tabulated distributions need the quadrature route")
    if isinstance(dist, DoubleExponential):
        lamb, gam = _double_exp(T, dist.phi_0)
    elif isinstance(dist, Uniform):
        lamb, gam = _uniform(T)
    elif isinstance(dist, Exponential):
        lamb, gam = _exponential(T)
    elif isinstance(dist, Triangular):
        lamb, gam = _triangular(T)
    elif isinstance(dist, RaisedCosine):
        lamb, gam = _raised_cosine(T)
    else:
        raise UnsupportedVariantError(f"no closed form for {type(dist).__name__}")
    regime = rho = None
    if params is not None:
        regime, rho = continuum_regime(dist, params, thresholds)
    g = dist.gamma_tilde
    return MarkovCharacterization(g * lamb, g * gam, g, regime, rho)


def scatter_double_exp(params: SystemParams, gamma_tilde: float, theta_big: float,
                       phi_0: float, delta):
    """Exact double-exponential spectrum with detuning-scaled widths."""
    if theta_big <= 0 or phi_0 < 0:
        raise ValueError("need theta_big > 0 and phi_0 >= 0")
    a, b = double_exp_parts(params, gamma_tilde, theta_big, phi_0)(delta)
    return lorentz_split(a, b)


def double_exp_parts(params, gamma_tilde, theta_big, phi_0):
    """``delta -> (delta - A(delta), B(delta))`` for the double exponential."""
    def parts(delta):
        s = phase_scale(params, delta)
        T, p0 = s * theta_big, s * phi_0
        q = T * T + 4.0
        with np.errstate(over="ignore", under="ignore"):
            decay = np.exp(-2.0 * phi_0 / theta_big)
        A = gamma_tilde / (4.0 * q * q) * ((8 * p0 + 12 * T + T**3 + 2 * T * T * p0) * decay
                                           + 12 * T + T**3 + 16 * np.sin(p0))
        B = gamma_tilde * 4.0 * (1.0 + np.cos(p0)) / (q * q)
        return np.asarray(delta, dtype=float) - A, B
    return parts


# ---------------------------------------------------------------------------
# generic quadrature

GL_ORDER = 20
_GL_T, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)


def _cumulative_matrix(t):
    """Matrix mapping node values to integrals from -1 to each node."""
    p = len(t)
    vander = np.polynomial.legendre.legvander(t, p - 1)
    q = np.empty((p, p))
    for j in range(p):
        coef = np.zeros(p)
        coef[j] = 1.0
        q[:, j] = np.polynomial.legendre.legval(t, np.polynomial.legendre.legint(coef, lbnd=-1))
    return q @ np.linalg.inv(vander)


_GL_S = _cumulative_matrix(_GL_T)


def _breaks(lo, hi, kinks, period=None):
    pts = [lo, hi] + [k for k in kinks if lo < k < hi]
    if period is not None and period < hi - lo:
        n0 = math.floor(lo / period) + 1
        n1 = math.ceil(hi / period)
        pts.extend(n * period for n in range(n0, n1))
    return np.unique(np.asarray(pts, dtype=float))


def _panel_sums(f, a, b):
    half = 0.5 * (b - a)
    x = (0.5 * (a + b))[:, None] + half[:, None] * _GL_T
    return half * (f(x) @ _GL_W)


def _refine(f, edges, rtol, max_panels=2_000_000, phase_extent=0.0):
    """Bisect panels until each panel's integral matches the sum over its halves.

    The accepted discrepancy on a panel is ``rtol`` times its ``int |f|``,
    floored at the roundoff level of the integrand, which grows with the
    largest phase ``|s x|`` (``phase_extent``) entering ``f``.
    """
    rel = max(rtol, 8.0 * np.finfo(float).eps * (1.0 + phase_extent))
    a, b = edges[:-1], edges[1:]
    done = []
    count = a.size
    while a.size:
        m = 0.5 * (a + b)
        diff = np.abs(_panel_sums(f, a, b) - _panel_sums(f, a, m) - _panel_sums(f, m, b))
        bad = diff > rel * _panel_sums(lambda x: np.abs(f(x)), a, b)
        done.append(a[~bad])
        count += int(bad.sum())
        if count > max_panels:
            raise QuadratureError("panel refinement exhausted", float(diff.max()), rtol)
        a = np.concatenate((a[bad], m[bad]))
        b = np.concatenate((m[bad], b[bad]))
    return np.append(np.sort(np.concatenate(done)), edges[-1])


def _bisect_all(edges):
    mids = 0.5 * (edges[1:] + edges[:-1])
    return np.sort(np.concatenate((edges, mids)))


class ContinuumIntegrals:
    """Quadrature of the continuum shift and width for one distribution.

    ``method="cumulative"`` (default) evaluates the ordered double integral

        int int v v' sin(s|x - x'|) = 2 Im int v(x) e^{isx} F(x) dx,
        F(x) = int_{-inf}^{x} v(x') e^{-isx'} dx',

    on Gauss-Legendre panels (split at kinks, at each oscillation period and
    adaptively where v varies fast), with F carried across panels by an exact
    polynomial integration matrix.  ``method="autocorrelation"`` instead
    integrates ``2 int_0^inf c(u) sin(su) du`` with nested adaptive
    quadrature; it is much slower and serves as an independent check.

    ``tail`` is the omitted-mass fraction used to truncate infinite supports.
    """

    def __init__(self, dist: CouplingDistribution, rtol: float = QUAD_RTOL,
                 tail: float = DEFAULT_TAIL, method: str = "cumulative"):
        if method not in ("cumulative", "autocorrelation"):
            raise ValueError(f"unknown quadrature method {method!r}")
        self.dist = dist
        self.rtol = rtol
        self.method = method
        self.lo, self.hi = dist.support(tail)
        self.kinks = sorted(set(dist.kinks()))
        self.scale = dist.norm**2  # Gamma~/2, natural size of every double integral
        self.tail = tail
        self._c_cache: dict[float, float] = {}

    def _panels(self, s):
        period = 2 * PI / s if s > 0 else None
        edges = _breaks(self.lo, self.hi, self.kinks, period)
        v = self.dist.value
        extent = s * max(abs(self.lo), abs(self.hi))
        # the ordered sine integral carries v twice, so it needs the finer partition
        for f in (lambda x: v(x) * np.exp(1j * s * x), lambda x: v(x) ** 2 * np.exp(1j * s * x)):
            edges = _refine(f, edges, 0.01 * self.rtol, phase_extent=extent)
        return edges

    @staticmethod
    def _cumulative(v, s, edges):
        a, b = edges[:-1], edges[1:]
        half = 0.5 * (b - a)
        x = (0.5 * (a + b))[:, None] + half[:, None] * _GL_T
        vx = v(x)
        inward = vx * np.exp(-1j * s * x)
        totals = half * (inward @ _GL_W)
        start = np.concatenate(([0.0], np.cumsum(totals)[:-1]))
        f_nodes = start[:, None] + half[:, None] * (inward @ _GL_S.T)
        outward = vx * np.exp(1j * s * x) * f_nodes
        lamb = 2.0 * float(np.sum(half * (outward @ _GL_W)).imag)
        z = complex(np.conj(np.sum(totals)))
        return lamb, z

    def _cumulative_checked(self, s):
        edges = self._panels(s)
        v = self.dist.value
        lamb, z = self._cumulative(v, s, edges)
        lamb2, z2 = self._cumulative(v, s, _bisect_all(edges))
        err = abs(lamb2 - lamb) + abs(abs(z2) ** 2 - abs(z) ** 2)
        target = 100 * self.rtol * self.scale
        if err > target:
            raise QuadratureError("continuum integrals", err, target)
        return lamb2, z2

    def transforms(self, s: float) -> tuple[float, complex]:
        """(ordered sine integral, ``int v e^{isx}``) at phase scale ``s``."""
        return self._cumulative_checked(s)

    def fourier(self, s: float) -> complex:
        """``int v(x) exp(i s x) dx`` over the truncated support."""
        return self._cumulative_checked(s)[1]

    def autocorrelation(self, u: float) -> float:
        """``c(u) = int v(x) v(x+u) dx`` by adaptive quadrature."""
        u = abs(float(u))
        hit = self._c_cache.get(u)
        if hit is not None:
            return hit
        lo, hi = self.lo, self.hi - u
        if hi <= lo:
            return 0.0
        v = self.dist.value
        pts = _breaks(lo, hi, self.kinks + [k - u for k in self.kinks])
        val, _ = _quad_panels(lambda x: v(x) * v(x + u), pts,
                              0.01 * self.rtol * self.scale / max(len(pts) - 1, 1), self.rtol)
        if len(self._c_cache) < 200_000:
            self._c_cache[u] = val
        return val

    def lamb_autocorrelation(self, s: float) -> float:
        """``int int v v' sin(s |x - x'|)`` as ``2 int_0^inf c(u) sin(su) du``."""
        umax = self.hi - self.lo
        ck = sorted({abs(a - b) for a in self.kinks for b in self.kinks})
        pts = _breaks(0.0, umax, ck, 2 * PI / s if s > 0 else None)
        n = max(len(pts) - 1, 1)
        val, err = _quad_panels(lambda u: self.autocorrelation(u) * math.sin(s * u), pts,
                                self.rtol * self.scale / n, self.rtol)
        if err > 100 * self.rtol * self.scale:
            raise QuadratureError("autocorrelation sine transform", err,
                                  100 * self.rtol * self.scale)
        return 2.0 * val

    def shift_width(self, s: float) -> tuple[float, float]:
        """(shift, half-width) entering the spectrum at phase scale ``s``."""
        lamb, z = self._cumulative_checked(s)
        if self.method == "autocorrelation":
            lamb = self.lamb_autocorrelation(s)
        return lamb, z.real**2 + z.imag**2


def _quad_panels(f, pts, epsabs, epsrel):
    total = 0.0
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(pts[:-1], pts[1:]):
            if b - a <= 0:
                continue
            val, e = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=200)
            total += val
            err += e
    return total, err


def markov_characterize_quadrature(dist: CouplingDistribution,
                                   params: SystemParams | None = None,
                                   rtol: float = QUAD_RTOL,
                                   thresholds=REGIME_THRESHOLDS,
                                   method: str = "cumulative") -> MarkovCharacterization:
    """Lamb shift and effective decay of any distribution by quadrature."""
    shift, half = ContinuumIntegrals(dist, rtol, method=method).shift_width(1.0)
    regime = rho = None
    if params is not None:
        regime, rho = continuum_regime(dist, params, thresholds)
    return MarkovCharacterization(shift, 2.0 * half, dist.gamma_tilde, regime, rho)


def scatter_continuum(params: SystemParams, dist: CouplingDistribution, delta,
                      rtol: float = QUAD_RTOL, integrals: ContinuumIntegrals | None = None):
    """Exact continuum spectrum by quadrature, one detuning at a time."""
    d = np.atleast_1d(check_detuning(params, delta)).astype(float)
    ci = integrals or ContinuumIntegrals(dist, rtol)
    a = np.empty_like(d)
    b = np.empty_like(d)
    for i, dk in enumerate(d):
        shift, half = ci.shift_width(1.0 + dk / params.omega_a)
        a[i] = dk - shift
        b[i] = half
    t, r = lorentz_split(a, b)
    if np.ndim(delta) == 0:
        return float(t[0]), float(r[0])
    return t, r


# ---------------------------------------------------------------------------
# discretisation

def discretize(dist: CouplingDistribution, m: int, tail: float = 1e-12,
               weights: str = "mass") -> DiscreteCoupling:
    """Approximate ``dist`` by ``m`` coupling points at cell midpoints.

    Cells tile the truncated support (each lobe separately for the double
    exponential).  With ``weights="mass"`` each point carries the exact cell
    integral ``w`` of v, with ``"midpoint"`` it carries ``v(mid) * width``;
    either way ``gamma_m = 2 w**2`` so that sum sqrt(gamma_m/2) approximates
    sqrt(Gamma~/2).
    """
    if m < 2:
        raise ValueError("need at least two points")
    if weights not in ("mass", "midpoint"):
        raise ValueError("weights must be 'mass' or 'midpoint'")
    lobes = dist.lobes(tail)
    lengths = np.array([b - a for a, b in lobes])
    counts = np.floor(m * lengths / lengths.sum()).astype(int)
    counts[np.argsort(-lengths)[: m - counts.sum()]] += 1
    phases, amps, captured = [], [], 0.0
    for (a, b), k in zip(lobes, counts):
        if k == 0:
            continue
        edges = np.linspace(a, b, k + 1)
        mids = 0.5 * (edges[1:] + edges[:-1])
        mass = dist.mass(edges[:-1], edges[1:])
        captured += float(np.sum(mass))
        w = mass if weights == "mass" else dist.value(mids) * np.diff(edges)
        phases.extend(mids.tolist())
        amps.extend(np.atleast_1d(w).tolist())
    omitted = 1.0 - captured / dist.norm
    if omitted > 1e-6:
        raise TruncationError(f"truncation omits a mass fraction {omitted:.3g} > 1e-6")
    gam = 2.0 * np.square(amps)
    return DiscreteCoupling(tuple(phases), tuple(gam.tolist()))
