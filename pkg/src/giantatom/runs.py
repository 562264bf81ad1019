"""Drivers behind the command-line modes."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .continuum import (
    QUAD_RTOL,
    ContinuumIntegrals,
    markov_characterize_closed,
    markov_characterize_quadrature,
    scatter_continuum,
    scatter_double_exp,
)
from .core import (
    DiscreteCoupling,
    MarkovCharacterization,
    RegularArray,
    SpectrumTable,
    SystemParams,
    expand_regular,
)
from .discrete import (
    markov_characterize,
    markov_characterize_regular,
    scatter_general,
    scatter_markov,
    scatter_regular,
)
from .distributions import (
    DEFAULT_TAIL,
    DoubleExponential,
    Tabulated,
    load_tabulated,
    make_distribution,
)
from .features import double_exp_feature_report, feature_report
from .oracle import amplitude_phase_continuum, solve_matching
from .runspec import ModelSpec, RunSpec
from .serialize import csv_text, json_text

THREADS_ENV = "GA_SCATTER_THREADS"


def resolve_threads(spec_threads: int | None) -> int:
    if spec_threads is not None:
        return spec_threads
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return n
    return 1


def _pmap(func, items, threads: int):
    """Order-preserving map; results do not depend on ``threads``."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _chunks(arr, threads):
    n = max(1, min(len(arr), 4 * threads))
    return np.array_split(np.asarray(arr), n)


# ---------------------------------------------------------------------------
# models

@dataclass(frozen=True)
class Model:
    spec: ModelSpec
    obj: object  # DiscreteCoupling | RegularArray | CouplingDistribution

    @property
    def continuum(self) -> bool:
        return self.spec.kind in ("distribution", "tabulated")


def build_model(spec: ModelSpec, **override) -> Model:
    kind = spec.kind
    if kind == "discrete":
        obj = DiscreteCoupling.from_points(spec.points)
    elif kind == "regular":
        kw = {"n_points": spec.n_points, "gamma": spec.gamma, "theta": spec.theta, **override}
        obj = RegularArray(**kw)
    elif kind == "distribution":
        kw = {"gamma_tilde": spec.gamma_tilde if spec.gamma_tilde is not None else 1.0,
              "theta_big": spec.theta_big,
              "phi_0": spec.phi_0 if spec.phi_0 is not None else 0.0, **override}
        obj = make_distribution(spec.variant, kw["gamma_tilde"], kw["theta_big"], kw["phi_0"])
    else:
        g = spec.gamma_tilde if spec.gamma_tilde is not None else 1.0
        obj = load_tabulated(spec.path, g)
    return Model(spec, obj)


def characterize(model: Model, params: SystemParams | None) -> MarkovCharacterization:
    o = model.obj
    if isinstance(o, RegularArray):
        return markov_characterize_regular(o, params)
    if isinstance(o, DiscreteCoupling):
        return markov_characterize(o, params)
    if isinstance(o, Tabulated):
        return markov_characterize_quadrature(o, params)
    return markov_characterize_closed(o, params)


def exact_spectrum(model: Model, params: SystemParams, delta, formula: str, threads: int = 1):
    """(T, R, formula identifier) for the exact (detuning-dependent) spectrum."""
    o = model.obj
    if isinstance(o, RegularArray):
        if formula == "quadrature":
            return (*scatter_general(params, expand_regular(o), delta), "discrete_general")
        return (*scatter_regular(params, o, delta), "regular_closed_form")
    if isinstance(o, DiscreteCoupling):
        return (*scatter_general(params, o, delta), "discrete_general")
    if isinstance(o, DoubleExponential) and formula == "exact":
        t, r = scatter_double_exp(params, o.gamma_tilde, o.theta_big, o.phi_0, delta)
        return t, r, "double_exponential_closed_form"
    ci = ContinuumIntegrals(o)
    parts = _pmap(lambda d: scatter_continuum(params, o, d, integrals=ci),
                  _chunks(delta, threads), threads)
    t = np.concatenate([p[0] for p in parts])
    r = np.concatenate([p[1] for p in parts])
    return t, r, "continuum_quadrature"


def oracle_spectrum(model: Model, params: SystemParams, delta, threads: int = 1):
    o = model.obj
    if isinstance(o, RegularArray):
        o = expand_regular(o)
    if isinstance(o, DiscreteCoupling):
        sols = _pmap(lambda d: solve_matching(params, o, float(d)), delta, threads)
        name = "matching_linear_solve"
    else:
        ci = ContinuumIntegrals(o)
        sols = _pmap(lambda d: amplitude_phase_continuum(params, o, float(d), integrals=ci),
                     delta, threads)
        name = "continuum_amplitudes"
    return np.array([s.T for s in sols]), np.array([s.R for s in sols]), name


def spectrum_table(spec: RunSpec, threads: int = 1) -> SpectrumTable:
    params = SystemParams(spec.omega_a)
    model = build_model(spec.model)
    delta = spec.grid.values()
    meta = _base_meta(spec)
    if spec.formula == "markov" or spec.mode == "markov":
        char = characterize(model, params)
        t, r = scatter_markov(char, delta)
        meta.update(formula="markov_lorentzian", markov=char.as_dict())
    else:
        t, r, name = exact_spectrum(model, params, delta, spec.formula, threads)
        meta["formula"] = name
        if name == "continuum_quadrature":
            meta["quadrature"] = {"rtol": QUAD_RTOL, "tail_mass_bound": DEFAULT_TAIL}
    table = SpectrumTable(delta, t, r, meta)
    if spec.oracle:
        to, ro, name = oracle_spectrum(model, params, delta, threads)
        table.extra["T_oracle"] = to
        table.extra["R_oracle"] = ro
        meta["oracle"] = name
        meta["oracle_max_abs_dT"] = float(np.max(np.abs(to - t)))
        meta["oracle_max_abs_dR"] = float(np.max(np.abs(ro - r)))
    meta["max_unitarity_violation"] = table.max_unitarity_violation()
    return table


def _base_meta(spec: RunSpec) -> dict:
    meta = {"tool": f"ga-scatter {__version__}", "mode": spec.mode,
            "model": spec.model.to_raw(), "omega_a": spec.omega_a,
            "rate_unit": spec.model.unit}
    if spec.grid is not None:
        meta["grid"] = {"lo": spec.grid.lo, "hi": spec.grid.hi, "count": spec.grid.count}
    return meta


def delta_column(spec: RunSpec) -> str:
    return f"delta_over_{spec.model.unit}"


def render_spectrum(spec: RunSpec, table: SpectrumTable) -> str:
    cols = [delta_column(spec), "T", "R"] + list(table.extra)
    data = [table.delta, table.T, table.R] + list(table.extra.values())
    if spec.format == "json":
        return json_text({"meta": table.meta, "columns": cols,
                          "rows": np.column_stack(data).tolist()})
    return csv_text(cols, zip(*data), table.meta)


def run_spectrum(spec: RunSpec, threads: int = 1) -> tuple[str, SpectrumTable]:
    table = spectrum_table(spec, threads)
    return render_spectrum(spec, table), table


def run_markov(spec: RunSpec, threads: int = 1):
    """Markov characterisation, plus the Lorentzian spectrum when a grid is given."""
    params = SystemParams(spec.omega_a)
    char = characterize(build_model(spec.model), params)
    if spec.grid is None:
        meta = _base_meta(spec)
        meta["markov"] = char.as_dict()
        return json_text(meta), char
    table = spectrum_table(spec, threads)
    return render_spectrum(spec, table), char


def run_map2d(spec: RunSpec, threads: int = 1):
    """Long-form rows (delta, axis value, R), delta varying slowest."""
    params = SystemParams(spec.omega_a)
    delta = spec.grid.values()
    axis = spec.axis.values()

    def column(val):
        model = build_model(spec.model, **{spec.axis.name: float(val)})
        if spec.formula == "markov":
            return scatter_markov(characterize(model, params), delta)[1]
        return exact_spectrum(model, params, delta, spec.formula)[1]

    cols = _pmap(column, axis, threads)
    grid_r = np.column_stack(cols)  # shape (len(delta), len(axis))
    meta = _base_meta(spec)
    meta.update(axis={"name": spec.axis.name, "lo": spec.axis.lo, "hi": spec.axis.hi,
                      "count": spec.axis.count},
                formula="markov_lorentzian" if spec.formula == "markov" else spec.formula,
                layout="row-major over (delta, axis)")
    names = [delta_column(spec), spec.axis.name, "R"]
    dd, aa = np.meshgrid(delta, axis, indexing="ij")
    if spec.format == "json":
        text = json_text({"meta": meta, "columns": names, "delta": delta, "axis": axis,
                          "R": grid_r})
    else:
        text = csv_text(names, zip(dd.ravel(), aa.ravel(), grid_r.ravel()), meta)
    return text, grid_r


def run_features(spec: RunSpec, threads: int = 1):
    params = SystemParams(spec.omega_a)
    model = build_model(spec.model)
    window = (spec.grid.lo, spec.grid.hi)
    res = spec.features.resolution or spec.grid.count
    if isinstance(model.obj, RegularArray):
        report = feature_report(params, model.obj, window, res, spec.features.r_gap)
    else:
        report = double_exp_feature_report(params, model.obj, window, res, spec.features.r_gap)
    payload = {"meta": _base_meta(spec), "report": report.as_dict()}
    return json_text(payload), report
