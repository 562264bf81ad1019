"""Shared domain types and phase arithmetic.

Units: every rate (detuning, decay rate, Lamb shift, omega_a) is measured in
one reference rate -- the per-point rate gamma for discrete runs or the
dipole-limit rate Gamma~ for continuum runs.  Positions are stored as
dimensionless phases ``phi~ = omega_a * x / v_g``, so neither the group
velocity nor absolute lengths appear anywhere.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np


class DomainError(ValueError):
    """Raised for inputs outside the physical domain (e.g. k <= 0)."""


class Regime(str, enum.Enum):
    MARKOVIAN = "markovian"
    MODERATE = "moderately_non_markovian"
    DEEP = "deep_non_markovian"


#: default thresholds on rho = phase_span * Gamma~ / omega_a
REGIME_THRESHOLDS = (0.1, 10.0)


def classify_rho(rho: float, thresholds: tuple[float, float] = REGIME_THRESHOLDS) -> Regime:
    lo, hi = thresholds
    if rho < lo:
        return Regime.MARKOVIAN
    if rho > hi:
        return Regime.DEEP
    return Regime.MODERATE


@dataclass(frozen=True)
class SystemParams:
    """Atomic transition frequency in units of the reference rate."""

    omega_a: float

    def __post_init__(self):
        if not math.isfinite(self.omega_a) or self.omega_a <= 0:
            raise DomainError(f"omega_a must be finite and positive, got {self.omega_a!r}")


def check_detuning(params: SystemParams, delta):
    """Validate detuning(s) against k > 0 and return them as float/ndarray."""
    d = np.asarray(delta, dtype=float)
    if not np.all(np.isfinite(d)):
        raise DomainError("detuning must be finite")
    if np.any(d <= -params.omega_a):
        raise DomainError(
            f"detuning must exceed -omega_a = {-params.omega_a} (photon wave vector k > 0)"
        )
    return float(d) if d.ndim == 0 else d


def phase_scale(params: SystemParams, delta):
    """Return ``1 + delta/omega_a``, the factor turning phi~ into k*x."""
    d = check_detuning(params, delta)
    return 1.0 + d / params.omega_a


def detuned_phase(params: SystemParams, delta, phi_tilde):
    """Phase ``k*x = (1 + delta/omega_a) * phi~`` picked up by a detuned photon."""
    out = phase_scale(params, delta) * np.asarray(phi_tilde, dtype=float)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class DiscreteCoupling:
    """Coupling points as (phase position phi~_m, decay rate gamma_m) pairs.

    Point order is irrelevant; ``phases``/``gammas`` are stored sorted by
    position.
    """

    phases: tuple[float, ...]
    gammas: tuple[float, ...]

    def __post_init__(self):
        if len(self.phases) != len(self.gammas):
            raise ValueError("phases and gammas must have equal length")
        if len(self.phases) == 0:
            raise ValueError("at least one coupling point is required")
        ph = np.asarray(self.phases, dtype=float)
        g = np.asarray(self.gammas, dtype=float)
        if not (np.all(np.isfinite(ph)) and np.all(np.isfinite(g))):
            raise ValueError("coupling points must be finite")
        if np.any(g < 0):
            raise ValueError("decay rates must be non-negative")
        order = np.argsort(ph, kind="stable")
        object.__setattr__(self, "phases", tuple(float(p) for p in ph[order]))
        object.__setattr__(self, "gammas", tuple(float(x) for x in g[order]))

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]]) -> "DiscreteCoupling":
        pts = list(points)
        return cls(tuple(p[0] for p in pts), tuple(p[1] for p in pts))

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.phases, self.gammas))

    @property
    def n_points(self) -> int:
        return len(self.phases)

    @property
    def gamma_dipole(self) -> float:
        """Dipole-limit decay rate (sum of sqrt(gamma_m))**2."""
        return float(np.sum(np.sqrt(self.gammas)) ** 2)

    @property
    def phase_span(self) -> float:
        return self.phases[-1] - self.phases[0]


@dataclass(frozen=True)
class RegularArray:
    """N equally spaced points with identical rate gamma and neighbour delay theta~."""

    n_points: int
    gamma: float
    theta: float

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 1:
            raise ValueError("n_points must be an integer >= 1")
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError("gamma must be finite and positive")
        if not (math.isfinite(self.theta) and self.theta >= 0):
            raise ValueError("theta must be finite and non-negative")
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def gamma_dipole(self) -> float:
        return self.n_points**2 * self.gamma

    @property
    def phase_span(self) -> float:
        return (self.n_points - 1) * self.theta


def expand_regular(array: RegularArray) -> DiscreteCoupling:
    """Explicit point list ``phi~_m = (m-1) theta~`` for a regular array."""
    n = array.n_points
    return DiscreteCoupling(
        tuple(m * array.theta for m in range(n)), tuple(array.gamma for _ in range(n))
    )


@dataclass(frozen=True)
class MarkovCharacterization:
    """Lorentzian parameters of the Markov-limit spectrum.

    ``rho`` (phase span times Gamma~ over omega_a) and ``regime`` are only
    known when omega_a was supplied.
    """

    lamb_shift: float
    gamma_eff: float
    gamma_dipole: float
    regime: Regime | None = None
    rho: float | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "lamb_shift": self.lamb_shift,
            "gamma_eff": self.gamma_eff,
            "gamma_dipole": self.gamma_dipole,
            "regime": None if self.regime is None else self.regime.value,
            "rho": self.rho,
        }


def lorentz_split(detuning_minus_shift, half_width):
    """(T, R) from the denominator parts ``a = delta - shift`` and ``b = width/2``.

    Every spectrum in the package reduces to this form.  When ``b == 0`` the
    atom is decoupled and the photon is fully transmitted, including at
    ``a == 0``.
    """
    a2 = np.square(detuning_minus_shift)
    b2 = np.square(half_width)
    den = a2 + b2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(b2 == 0, 1.0, a2 / np.where(den == 0, 1.0, den))
        r = np.where(b2 == 0, 0.0, b2 / np.where(den == 0, 1.0, den))
    if t.ndim == 0:
        return float(t), float(r)
    return t, r


@dataclass
class SpectrumTable:
    """Ordered (delta, T, R) rows plus provenance metadata."""

    delta: np.ndarray
    T: np.ndarray
    R: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)
    extra: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.delta = np.asarray(self.delta, dtype=float)
        self.T = np.asarray(self.T, dtype=float)
        self.R = np.asarray(self.R, dtype=float)
        if not (self.delta.shape == self.T.shape == self.R.shape):
            raise ValueError("delta, T and R must have the same shape")

    def __len__(self) -> int:
        return len(self.delta)

    def max_unitarity_violation(self) -> float:
        return float(np.max(np.abs(self.T + self.R - 1.0))) if len(self) else 0.0
