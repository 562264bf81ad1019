"""Double-exponential coupling with phi_0 = 500 pi, omega_a = 250 Gamma~.

Spectra for several lobe widths plus the two-point limit of vanishing width.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from _out import parse_config, save
from giantatom.runspec import parse_number
from giantatom import (
    DiscreteCoupling,
    DoubleExponential,
    SystemParams,
    double_exp_feature_report,
    scatter_double_exp,
    scatter_general,
)


@dataclass
class Config:
    omega_a: float = 250.0
    phi_0: float = 500 * math.pi
    delta_max: float = 3.0
    delta_count: int = 6001
    widths: str = "pi/10,pi/5,pi/4,pi/3,pi/2,pi"


def main():
    cfg, out = parse_config(Config, __doc__.splitlines()[0])
    p = SystemParams(cfg.omega_a)
    deltas = np.linspace(-cfg.delta_max, cfg.delta_max, cfg.delta_count)
    # two points carrying Gamma~/4 each reproduce the zero-width limit
    two = DiscreteCoupling((-cfg.phi_0 / 2, cfg.phi_0 / 2), (0.25, 0.25))
    _, r0 = scatter_general(p, two, deltas)
    cols, data, report = ["delta_over_gamma_tilde", "R_zero_width"], [deltas, r0], {}
    for label in cfg.widths.split(","):
        th = parse_number(label, "widths")
        _, r = scatter_double_exp(p, 1.0, th, cfg.phi_0, deltas)
        cols.append(f"R_{label.replace('/', '_')}")
        data.append(r)
        rep = double_exp_feature_report(p, DoubleExponential(1.0, th, cfg.phi_0),
                                        (-cfg.delta_max, cfg.delta_max), grid=deltas)
        report[label] = {"unity_points": rep.reflection_unity_points,
                         "transmission_zeros": rep.transmission_zeros,
                         "max_R": float(r.max())}
    save(out / "double_exp_spectra.csv", cols, zip(*data), cfg)
    (out / "double_exp_features.json").write_text(json.dumps(report, indent=2))
    print(json.dumps({k: len(v["unity_points"]) for k, v in report.items()}))


if __name__ == "__main__":
    main()
