"""Markov reflectance maps R(delta, theta) for small regular arrays.

The ridge of each map follows the Lamb shift; columns at theta = 2 pi k / N
are empty because the atom decouples there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from _out import parse_config, save
from giantatom import RegularArray, markov_characterize_regular, scatter_markov


@dataclass
class Config:
    n_min: int = 2
    n_max: int = 5
    delta_max: float = 10.0
    delta_count: int = 401
    theta_count: int = 401


def main():
    cfg, out = parse_config(Config, __doc__.splitlines()[0])
    deltas = np.linspace(-cfg.delta_max, cfg.delta_max, cfg.delta_count)
    thetas = np.linspace(0.0, 2 * math.pi, cfg.theta_count)
    for n in range(cfg.n_min, cfg.n_max + 1):
        rows = []
        ridge = []
        for th in thetas:
            m = markov_characterize_regular(RegularArray(n, 1.0, float(th)))
            _, r = scatter_markov(m, deltas)
            rows.extend((d, th, rr) for d, rr in zip(deltas, r))
            ridge.append((th, m.lamb_shift, m.gamma_eff))
        save(out / f"markov_map_N{n}.csv", ("delta_over_gamma", "theta", "R"), rows, cfg, n_points=n)
        save(out / f"markov_ridge_N{n}.csv", ("theta", "lamb_shift", "gamma_eff"), ridge, cfg, n_points=n)


if __name__ == "__main__":
    main()
