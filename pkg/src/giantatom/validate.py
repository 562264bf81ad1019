"""Invariant suite run by ``ga-scatter validate``.

Each check returns its worst residual together with the tolerance it is held
to; the suite passes only when every residual is within tolerance.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Callable

import numpy as np

from .continuum import (
    RC_SWITCH,
    _raised_cosine,
    markov_characterize_closed,
    markov_characterize_quadrature,
    scatter_continuum,
    scatter_double_exp,
)
from .core import DiscreteCoupling, RegularArray, SystemParams, expand_regular
from .discrete import (
    markov_characterize,
    markov_characterize_regular,
    regular_ratios,
    scatter_general,
    scatter_markov,
    scatter_regular,
    series_radius,
    x_minus_sin,
)
from .distributions import (
    DoubleExponential,
    Exponential,
    RaisedCosine,
    Triangular,
    Uniform,
    load_tabulated,
)
from .features import transmission_zeros
from .oracle import convergence_study, solve_matching
from .runspec import ValidateOptions

NORM_TOL = 1e-10


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag}  {self.name:<28} residual={self.residual:.3e} "
                f"tol={self.tolerance:.1e}  {self.detail}").rstrip()


def default_table_path() -> str:
    return str(resources.files("giantatom") / "data" / "raised_cosine_table.txt")


def _random_coupling(rng, n_max=8, phi_max=1e3, g_max=3.0):
    n = int(rng.integers(1, n_max + 1))
    return DiscreteCoupling(tuple(rng.uniform(0, phi_max, n)), tuple(rng.uniform(0, g_max, n)))


def check_unitarity(opts: ValidateOptions):
    rng = np.random.default_rng(opts.seed)
    worst = 0.0
    per = max(opts.samples // 4, 1)
    for _ in range(per):
        c = _random_coupling(rng)
        p = SystemParams(float(rng.uniform(10, 1e4)))
        d = rng.uniform(-0.9 * p.omega_a, 0.9 * p.omega_a, 8)
        t, r = scatter_general(p, c, d)
        worst = max(worst, float(np.max(np.abs(t + r - 1))))
        t, r = scatter_markov(markov_characterize(c), d)
        worst = max(worst, float(np.max(np.abs(t + r - 1))))
    for _ in range(per):
        a = RegularArray(int(rng.integers(1, 60)), float(rng.uniform(0.01, 3)),
                         float(rng.uniform(0, 2e3)))
        p = SystemParams(float(rng.uniform(10, 1e4)))
        d = rng.uniform(-0.9 * p.omega_a, 0.9 * p.omega_a, 8)
        t, r = scatter_regular(p, a, d)
        worst = max(worst, float(np.max(np.abs(t + r - 1))))
    for _ in range(per):
        p = SystemParams(float(rng.uniform(10, 1e3)))
        d = rng.uniform(-0.9 * p.omega_a, 0.9 * p.omega_a, 8)
        t, r = scatter_double_exp(p, 1.0, float(rng.uniform(0.01, 10)),
                                  float(rng.uniform(0, 2e3)), d)
        worst = max(worst, float(np.max(np.abs(t + r - 1))))
    for _ in range(3):
        dist = Uniform(1.0, float(rng.uniform(0.1, 10)))
        p = SystemParams(float(rng.uniform(10, 1e3)))
        t, r = scatter_continuum(p, dist, rng.uniform(-5, 5, 4))
        worst = max(worst, float(np.max(np.abs(t + r - 1))))
    return worst, 1e-12, f"{3 * per + 3} draws"


def check_oracle(opts: ValidateOptions):
    rng = np.random.default_rng(opts.seed + 1)
    p = SystemParams(1e3)
    worst = 0.0
    for _ in range(opts.oracle_samples):
        c = _random_coupling(rng)
        d = float(rng.uniform(-0.5, 0.5) * p.omega_a)
        sol = solve_matching(p, c, d)
        t, _ = scatter_general(p, c, d)
        worst = max(worst, abs(sol.T - t), sol.unitarity_violation())
    return worst, 1e-10, f"{opts.oracle_samples} configs"


CLOSED_THETAS = (0.1, 0.5, 1.0, math.pi, 2 * math.pi - 0.1, 2 * math.pi + 0.1, 6 * math.pi)
CLOSED_PHI0 = (0.0, math.pi / 2, math.pi, 3 * math.pi, 500 * math.pi)


def _rel(a: float, b: float, floor: float = 1e-4) -> float:
    return abs(a - b) / max(abs(b), floor)


def closed_vs_quadrature_cases():
    for cls in (Uniform, Exponential, Triangular, RaisedCosine):
        for th in CLOSED_THETAS:
            yield cls(1.0, th)
    for th in CLOSED_THETAS:
        for p0 in CLOSED_PHI0:
            yield DoubleExponential(1.0, th, p0)


def check_closed_forms(opts: ValidateOptions):
    worst, where = 0.0, ""
    for dist in closed_vs_quadrature_cases():
        c = markov_characterize_closed(dist)
        q = markov_characterize_quadrature(dist)
        e = max(_rel(q.lamb_shift, c.lamb_shift), _rel(q.gamma_eff, c.gamma_eff))
        if e > worst:
            worst, where = e, f"{dist.variant} {dist.params_dict()}"
    return worst, 1e-8, f"worst at {where}" if where else ""


def check_limit_branches(opts: ValidateOptions):
    """Series branches against the direct formulas at their switch points."""
    worst = abs(_raised_cosine(2 * math.pi)[1] - 0.25)
    for sign in (-1, 1):
        x = sign * RC_SWITCH
        inside = _raised_cosine(2 * math.pi + x * (1 - 1e-12))
        outside = _raised_cosine(2 * math.pi + x * (1 + 1e-12))
        worst = max(worst, abs(inside[0] - outside[0]), abs(inside[1] - outside[1]))
    for n in (1, 2, 3, 5, 10, 30, 100):
        r = series_radius(n)
        for sign in (-1, 1):
            x = sign * r * (1 - 1e-9)
            f_s, g_s = regular_ratios(n, 2 * math.pi + x)
            half = math.sin(0.5 * x)
            f_d = (x_minus_sin(n * x) - n * x_minus_sin(x)) / (2 * half * half)
            g_d = (math.sin(0.5 * n * x) / half) ** 2
            # relative to the natural sizes N**2 of g and N**3 r of f
            worst = max(worst, abs(f_s[0] - f_d) / (n**3 * r), abs(g_s[0] - g_d) / n**2)
    return worst, 1e-10, "raised-cosine and regular-array seams"


def check_markov_identities(opts: ValidateOptions):
    """Residuals are divided by their own tolerances, so 1 marks the limit."""
    worst = 0.0
    for n in (2, 3, 4, 5):
        for k in range(1, 7):
            lamb = markov_characterize_regular(RegularArray(n, 1.0, k * math.pi)).lamb_shift
            worst = max(worst, abs(lamb) / 1e-12)
        g = markov_characterize_regular(RegularArray(n, 1.0, 2 * math.pi)).gamma_eff
        worst = max(worst, abs(g / n**2 - 1) / 1e-12)
        ch = markov_characterize_regular(RegularArray(n, 1.0, 2 * math.pi / n))
        _, r = scatter_markov(ch, np.linspace(-20, 20, 401))
        worst = max(worst, float(np.max(r)) / 1e-20)
        gen = markov_characterize(expand_regular(RegularArray(n, 1.0, 1.234)))
        reg = markov_characterize_regular(RegularArray(n, 1.0, 1.234))
        worst = max(worst, abs(gen.lamb_shift - reg.lamb_shift) / 1e-12,
                    abs(gen.gamma_eff - reg.gamma_eff) / 1e-12)
    return worst, 1.0, "N in 2..5, normalised by per-identity tolerance"


def check_transmission_zeros(opts: ValidateOptions):
    p = SystemParams(1e3)
    arr = RegularArray(2, 1.0, 600 * math.pi)
    zeros = transmission_zeros(p, arr, (-6.0, 6.0))
    expect = [-5.0, -5.0 / 3.0, 5.0 / 3.0, 5.0]
    if len(zeros) != len(expect):
        return math.inf, 1e-10, f"found {zeros}"
    _, r = scatter_regular(p, arr, np.array(zeros))
    pos = max(abs(a - b) for a, b in zip(zeros, expect))
    return max(float(np.max(r)), pos), 1e-10, "N=2, theta=600 pi"


def check_convergence(opts: ValidateOptions):
    cases = [
        (Uniform(1.0, 1.0), SystemParams(10.0), np.linspace(-3, 3, 41)),
        (DoubleExponential(1.0, math.pi / 10, 20 * math.pi), SystemParams(50.0),
         np.linspace(-2, 2, 41)),
    ]
    worst_order = math.inf
    detail = []
    ok = True
    for dist, p, grid in cases:
        table = convergence_study(dist, opts.m_schedule, p, grid)
        ok &= table.monotone
        worst_order = min(worst_order, table.order)
        detail.append(f"{dist.variant}: order {table.order:.2f}")
    # residual is the shortfall of the observed order below 1
    residual = max(0.0, 1.0 - worst_order) + (0.0 if ok else math.inf)
    return residual, 0.0, "; ".join(detail)


def check_tabulated(opts: ValidateOptions):
    paths = opts.tabulated if opts.tabulated is not None else (default_table_path(),)
    worst, detail = 0.0, []
    for path in paths:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            tab = load_tabulated(path, 1.0)
        worst = max(worst, tab.raw_norm_error)
        detail.append(f"{path}: {tab.raw_norm_error:.2e}")
    return worst, NORM_TOL, "; ".join(detail)


CHECKS: dict[str, Callable] = {
    "unitarity": check_unitarity,
    "oracle_equivalence": check_oracle,
    "closed_vs_quadrature": check_closed_forms,
    "limit_branches": check_limit_branches,
    "markov_identities": check_markov_identities,
    "transmission_zeros": check_transmission_zeros,
    "convergence_study": check_convergence,
    "tabulated_normalization": check_tabulated,
}


def run_suite(opts: ValidateOptions | None = None, only=None) -> list[CheckResult]:
    opts = opts or ValidateOptions()
    out = []
    for name, fn in CHECKS.items():
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        try:
            residual, tol, detail = fn(opts)
            passed = bool(residual <= tol)
        except Exception as exc:  # a crashing check is a failing check
            residual, tol, detail, passed = math.inf, 0.0, f"{type(exc).__name__}: {exc}", False
        out.append(CheckResult(name, float(residual), float(tol), passed, detail,
                               time.perf_counter() - t0))
    return out


def summary(results: list[CheckResult]) -> dict:
    return {"passed": all(r.passed for r in results),
            "checks": [{k: v for k, v in asdict(r).items() if k != "seconds"} for r in results]}
