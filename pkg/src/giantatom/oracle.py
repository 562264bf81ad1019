"""Independent numerical ground truths.

``solve_matching`` builds the wavefunction matching conditions of a photon
crossing N delta-coupled points and solves them densely, without using any
closed-form reduction.  With plane-wave amplitudes ``A_m`` (right-moving) and
``B_m`` (left-moving) on segment m (segment 0 to the left of the first point,
segment N to the right of the last) and the atomic amplitude ``u`` (in units
of sqrt(v_g)), each point contributes

    A_m - A_{m-1} = -i sqrt(gamma_m/2) u exp(-i phi_m)
    B_m - B_{m-1} = +i sqrt(gamma_m/2) u exp(+i phi_m)

and the atom obeys

    delta u = sum_m sqrt(gamma_m/2) [Abar_m exp(i phi_m) + Bbar_m exp(-i phi_m)]

with ``Abar_m``, ``Bbar_m`` the means of the one-sided limits at point m.
Boundary data: ``A_0 = 1`` (incident), ``B_N = 0`` (nothing incoming from the
right); ``t = A_N`` and ``r = B_0``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import DiscreteCoupling, SystemParams, check_detuning, phase_scale
from .continuum import QUAD_RTOL, ContinuumIntegrals, discretize, scatter_continuum
from .discrete import scatter_general
from .distributions import CouplingDistribution

COND_WARN = 1e10


class SingularSystemError(np.linalg.LinAlgError):
    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3g})")
        self.condition = condition


class IllConditionedWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ScatterSolution:
    t: complex
    r: complex
    f_a: complex
    segment_t: tuple[complex, ...] = ()
    segment_r: tuple[complex, ...] = ()
    alpha: float | None = None
    condition: float | None = None

    @property
    def T(self) -> float:
        return abs(self.t) ** 2

    @property
    def R(self) -> float:
        return abs(self.r) ** 2

    def unitarity_violation(self) -> float:
        return abs(self.T + self.R - 1.0)


def matching_system(coupling: DiscreteCoupling, delta: float, scale: float):
    """Matrix and right-hand side of the matching conditions.

    Unknown vector: ``[A_1 .. A_N, B_0 .. B_{N-1}, u]``.
    """
    n = coupling.n_points
    ph = scale * np.asarray(coupling.phases)
    c = np.sqrt(0.5 * np.asarray(coupling.gammas))
    ep, em = np.exp(1j * ph), np.exp(-1j * ph)
    size = 2 * n + 1
    mat = np.zeros((size, size), dtype=complex)
    rhs = np.zeros(size, dtype=complex)
    ia = lambda m: m - 1          # A_m, m = 1..N  # noqa: E731
    ib = lambda m: n + m          # B_m, m = 0..N-1  # noqa: E731
    iu = 2 * n
    for k in range(n):
        m = k + 1
        # right movers: A_m - A_{m-1} + i c u e^{-i phi} = 0
        row = k
        mat[row, ia(m)] += 1.0
        if m - 1 == 0:
            rhs[row] += 1.0
        else:
            mat[row, ia(m - 1)] -= 1.0
        mat[row, iu] += 1j * c[k] * em[k]
        # left movers: B_m - B_{m-1} - i c u e^{+i phi} = 0
        row = n + k
        if m < n:
            mat[row, ib(m)] += 1.0
        mat[row, ib(m - 1)] -= 1.0
        mat[row, iu] -= 1j * c[k] * ep[k]
    # atom: sum c [mean(A) e^{i phi} + mean(B) e^{-i phi}] - delta u = 0
    row = iu
    for k in range(n):
        m = k + 1
        half = 0.5 * c[k]
        mat[row, ia(m)] += half * ep[k]
        if m - 1 == 0:
            rhs[row] -= half * ep[k]
        else:
            mat[row, ia(m - 1)] += half * ep[k]
        if m < n:
            mat[row, ib(m)] += half * em[k]
        mat[row, ib(m - 1)] += half * em[k]
    mat[row, iu] -= delta
    return mat, rhs


def solve_matching(params: SystemParams, coupling: DiscreteCoupling, delta: float) -> ScatterSolution:
    """Amplitudes from a dense solve of the matching conditions."""
    delta = float(check_detuning(params, delta))
    scale = float(phase_scale(params, delta))
    mat, rhs = matching_system(coupling, delta, scale)
    cond = float(np.linalg.cond(mat))
    if not math.isfinite(cond):
        raise SingularSystemError("matching system is singular", cond)
    if cond > COND_WARN:
        warnings.warn(f"matching system condition estimate {cond:.3g}", IllConditionedWarning,
                      stacklevel=2)
    x = np.linalg.solve(mat, rhs)
    n = coupling.n_points
    seg_t = (1.0 + 0j,) + tuple(complex(v) for v in x[:n])
    seg_r = tuple(complex(v) for v in x[n:2 * n]) + (0j,)
    return ScatterSolution(t=seg_t[-1], r=seg_r[0], f_a=complex(x[-1]),
                           segment_t=seg_t, segment_r=seg_r, condition=cond)


def amplitude_phase_continuum(params: SystemParams, dist: CouplingDistribution, delta: float,
                              rtol: float = QUAD_RTOL,
                              integrals: ContinuumIntegrals | None = None) -> ScatterSolution:
    """Complex amplitudes for a continuous coupling density.

    With ``Z = int v e^{i s phi} dphi`` and the ordered sine integral ``L``,

        f_a = i Z / D,  t = i (delta - L) / D,  r = Z**2 / D,
        D = i (delta - L) - |Z|**2.

    ``alpha = arg Z`` satisfies ``tan alpha = int v sin / int v cos`` and is
    the phase the coupling asymmetry imprints on r.
    """
    delta = float(check_detuning(params, delta))
    s = float(phase_scale(params, delta))
    ci = integrals or ContinuumIntegrals(dist, rtol)
    lamb, z = ci.transforms(s)
    a = delta - lamb
    den = 1j * a - (z.real**2 + z.imag**2)
    alpha = math.atan2(z.imag, z.real) if z != 0 else 0.0
    return ScatterSolution(t=1j * a / den, r=z * z / den, f_a=1j * z / den, alpha=alpha)


@dataclass
class ConvergenceTable:
    ms: list[int]
    errors: list[float]
    order: float
    grid: list[float] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.errors, self.errors[1:]))

    def as_dict(self) -> dict:
        return {"ms": self.ms, "errors": self.errors, "order": self.order,
                "monotone": self.monotone}


def observed_order(ms, errors) -> float:
    """Least-squares slope of -log(error) against log(M)."""
    ms = np.asarray(ms, dtype=float)
    e = np.asarray(errors, dtype=float)
    ok = e > 0
    if ok.sum() < 2:
        return math.inf
    slope = np.polyfit(np.log(ms[ok]), np.log(e[ok]), 1)[0]
    return float(-slope)


def convergence_study(dist: CouplingDistribution, m_schedule, params: SystemParams, grid,
                      tail: float = 1e-12) -> ConvergenceTable:
    """Max reflectance error of discretised couplings against the continuum."""
    ms = [int(m) for m in m_schedule]
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise ValueError("M schedule must be increasing")
    grid = np.asarray(grid, dtype=float)
    _, r_ref = scatter_continuum(params, dist, grid)
    errors = []
    for m in ms:
        _, r = scatter_general(params, discretize(dist, m, tail=tail), grid)
        errors.append(float(np.max(np.abs(r - r_ref))))
    return ConvergenceTable(ms, errors, observed_order(ms, errors), grid.tolist())
