"""Two-point giant atom beyond the Markov limit (omega_a = 1e3 gamma).

Writes exact and Markov cuts at theta = 80 pi, 600 pi and 601 pi, the
feature report at 600 pi, and exact maps around both cut angles.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from _out import parse_config, save
from giantatom import (
    RegularArray,
    SystemParams,
    feature_report,
    markov_characterize_regular,
    scatter_markov,
    scatter_regular,
)


@dataclass
class Config:
    omega_a: float = 1000.0
    delta_max: float = 10.0
    delta_count: int = 4001
    map_theta_half_width: float = 2 * math.pi
    map_theta_count: int = 201
    map_delta_count: int = 401


def main():
    cfg, out = parse_config(Config, __doc__.splitlines()[0])
    p = SystemParams(cfg.omega_a)
    deltas = np.linspace(-cfg.delta_max, cfg.delta_max, cfg.delta_count)
    for k in (80, 600, 601):
        arr = RegularArray(2, 1.0, k * math.pi)
        m = markov_characterize_regular(arr, p)
        t, r = scatter_regular(p, arr, deltas)
        _, r_m = scatter_markov(m, deltas)
        save(out / f"two_point_cut_{k}pi.csv", ("delta_over_gamma", "T", "R", "R_markov"),
             zip(deltas, t, r, r_m), cfg, theta=arr.theta, regime=m.regime.value, rho=m.rho)
    rep = feature_report(p, RegularArray(2, 1.0, 600 * math.pi), (-5.5, 5.5), 20001)
    (out / "two_point_features_600pi.json").write_text(json.dumps(rep.as_dict(), indent=2, sort_keys=True))
    print(f"wrote {out / 'two_point_features_600pi.json'}")

    dmap = np.linspace(-cfg.delta_max, cfg.delta_max, cfg.map_delta_count)
    for k in (80, 600):
        centre = k * math.pi
        thetas = np.linspace(centre - cfg.map_theta_half_width, centre + cfg.map_theta_half_width,
                             cfg.map_theta_count)
        rows = []
        for th in thetas:
            _, r = scatter_regular(p, RegularArray(2, 1.0, float(th)), dmap)
            rows.extend((d, th, rr) for d, rr in zip(dmap, r))
        save(out / f"two_point_map_{k}pi.csv", ("delta_over_gamma", "theta", "R"), rows, cfg)


if __name__ == "__main__":
    main()
