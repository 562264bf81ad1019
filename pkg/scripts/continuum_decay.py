"""Markov Lamb shift and effective decay of the named coupling densities.

Also writes the double-exponential decay against the lobe separation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from _out import parse_config, save
from giantatom import (
    DoubleExponential,
    Exponential,
    RaisedCosine,
    Triangular,
    Uniform,
    markov_characterize_closed,
)


@dataclass
class Config:
    theta_max: float = 4 * math.pi
    theta_count: int = 400
    de_theta: float = 0.5
    phi0_max: float = 6 * math.pi
    phi0_count: int = 400


def main():
    cfg, out = parse_config(Config, __doc__.splitlines()[0])
    thetas = np.linspace(cfg.theta_max / cfg.theta_count, cfg.theta_max, cfg.theta_count)
    fams = (Uniform, Exponential, Triangular, RaisedCosine)
    rows = []
    for th in thetas:
        ms = [markov_characterize_closed(c(1.0, float(th))) for c in fams]
        rows.append([th] + [m.lamb_shift for m in ms] + [m.gamma_eff for m in ms])
    names = [c.__name__.lower() for c in fams]
    save(out / "decay_named.csv",
         ["theta_big"] + [f"lamb_{n}" for n in names] + [f"gamma_eff_{n}" for n in names], rows, cfg)
    rows = []
    for p0 in np.linspace(0.0, cfg.phi0_max, cfg.phi0_count):
        m = markov_characterize_closed(DoubleExponential(1.0, cfg.de_theta, float(p0)))
        rows.append((p0, m.lamb_shift, m.gamma_eff))
    save(out / "decay_double_exponential.csv", ("phi_0", "lamb_shift", "gamma_eff"), rows, cfg)


if __name__ == "__main__":
    main()
