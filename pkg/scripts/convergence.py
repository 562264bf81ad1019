"""Discretised couplings approaching the continuum: error against M."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from _out import parse_config, save
from giantatom import DoubleExponential, SystemParams, Triangular, Uniform, convergence_study


@dataclass
class Config:
    m_min_log2: int = 3
    m_max_log2: int = 8


CASES = {
    "uniform": (Uniform(1.0, 1.0), SystemParams(10.0), np.linspace(-3, 3, 61)),
    "triangular": (Triangular(1.0, 2.0), SystemParams(10.0), np.linspace(-3, 3, 61)),
    "double_exponential": (DoubleExponential(1.0, math.pi / 10, 20 * math.pi), SystemParams(50.0),
                           np.linspace(-2, 2, 41)),
}


def main():
    cfg, out = parse_config(Config, __doc__.splitlines()[0])
    ms = [2**k for k in range(cfg.m_min_log2, cfg.m_max_log2 + 1)]
    for name, (dist, params, grid) in CASES.items():
        tab = convergence_study(dist, ms, params, grid)
        save(out / f"convergence_{name}.csv", ("M", "max_abs_dR"), zip(tab.ms, tab.errors), cfg,
             observed_order=tab.order, monotone=tab.monotone)
        print(f"{name}: order {tab.order:.2f}, monotone {tab.monotone}")


if __name__ == "__main__":
    main()
