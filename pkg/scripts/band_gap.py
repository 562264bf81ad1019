"""Band-gap formation for many-point arrays at theta = 2 pi, omega_a = 1e4 gamma."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from _out import parse_config, save
from giantatom import RegularArray, SystemParams, feature_report, scatter_regular


@dataclass
class Config:
    omega_a: float = 1e4
    delta_max: float = 400.0
    delta_count: int = 100_001
    sizes: str = "2,5,10,21,30"


def main():
    cfg, out = parse_config(Config, __doc__.splitlines()[0])
    p = SystemParams(cfg.omega_a)
    deltas = np.linspace(-cfg.delta_max, cfg.delta_max, cfg.delta_count)
    summary = {}
    for n in (int(s) for s in cfg.sizes.split(",")):
        arr = RegularArray(n, 1.0, 2 * math.pi)
        t, r = scatter_regular(p, arr, deltas)
        save(out / f"band_gap_N{n}.csv", ("delta_over_gamma", "T", "R"), zip(deltas, t, r), cfg, n_points=n)
        rep = feature_report(p, arr, (-cfg.delta_max, cfg.delta_max), grid=deltas)
        summary[n] = {"band_gap": rep.as_dict()["band_gap"],
                      "unity_points": rep.reflection_unity_points,
                      "wall_separation": rep.wall_separation,
                      "two_omega_over_n": 2 * cfg.omega_a / n}
    (out / "band_gap_summary.json").write_text(json.dumps(summary, indent=2))
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
