"""Shared output helper for the experiment scripts."""
from __future__ import annotations

import argparse
from dataclasses import asdict, fields
from pathlib import Path

from giantatom.serialize import csv_text


def parse_config(cls, description: str):
    """Build a dataclass config from command-line overrides of its fields."""
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out-dir", type=Path, default=Path("results"))
    for f in fields(cls):
        if f.type in ("int", "float", "str", int, float, str):
            typ = {"int": int, "float": float, "str": str}.get(f.type, f.type)
            p.add_argument(f"--{f.name.replace('_', '-')}", type=typ, default=None)
    ns = p.parse_args()
    overrides = {f.name: getattr(ns, f.name) for f in fields(cls)
                 if getattr(ns, f.name, None) is not None}
    cfg = cls(**overrides)
    ns.out_dir.mkdir(parents=True, exist_ok=True)
    return cfg, ns.out_dir


def save(path: Path, columns, rows, cfg, **meta):
    path.write_text(csv_text(list(columns), rows, {"config": asdict(cfg), **meta}))
    print(f"wrote {path}")
