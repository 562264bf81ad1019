"""Run specifications for the command-line tool.

Configs are JSON objects whose keys mirror the dataclasses below.  Numeric
fields accept either numbers or short arithmetic strings such as
``"600*pi"`` or ``"2*pi/3"``; unknown keys are rejected.
"""
from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

MODES = ("spectrum", "map2d", "markov", "features", "validate")
MODEL_KINDS = ("discrete", "regular", "distribution", "tabulated")
FORMULAS = ("exact", "markov", "quadrature")
FORMATS = ("csv", "json")
AXES = {"regular": ("theta", "gamma"), "distribution": ("theta_big", "phi_0")}


class SpecError(ValueError):
    """Invalid run specification; ``where`` names the offending field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi, "e": math.e, "inf": math.inf}


def parse_number(value: Any, where: str) -> float:
    """Number or arithmetic expression over literals, ``pi`` and ``e``."""
    if isinstance(value, bool):
        raise SpecError(where, "expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise SpecError(where, f"expected a number, got {type(value).__name__}")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise SpecError(where, f"unsupported expression {value!r}")

    try:
        return float(ev(ast.parse(value.strip(), mode="eval")))
    except SyntaxError:
        raise SpecError(where, f"cannot parse number {value!r}") from None
    except (ZeroDivisionError, OverflowError) as exc:
        raise SpecError(where, f"{value!r}: {exc}") from None


def _int(value, where) -> int:
    x = parse_number(value, where)
    if x != int(x):
        raise SpecError(where, f"expected an integer, got {value!r}")
    return int(x)


def _check_keys(raw: dict, cls, where: str):
    if not isinstance(raw, dict):
        raise SpecError(where, "expected an object")
    allowed = {f.name for f in fields(cls)}
    extra = sorted(set(raw) - allowed)
    if extra:
        raise SpecError(where, f"unknown key(s) {extra}; allowed {sorted(allowed)}")


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise SpecError("grid.count", "must be >= 2")
        if not self.lo < self.hi:
            raise SpecError("grid", "need lo < hi")

    @classmethod
    def from_raw(cls, raw, where="grid") -> "GridSpec":
        _check_keys(raw, cls, where)
        for k in ("lo", "hi", "count"):
            if k not in raw:
                raise SpecError(f"{where}.{k}", "missing")
        return cls(parse_number(raw["lo"], f"{where}.lo"), parse_number(raw["hi"], f"{where}.hi"),
                   _int(raw["count"], f"{where}.count"))

    @classmethod
    def from_string(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise SpecError("--grid", "expected lo:hi:count")
        return cls(parse_number(parts[0], "--grid lo"), parse_number(parts[1], "--grid hi"),
                   _int(parts[2], "--grid count"))

    def values(self):
        import numpy as np
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class AxisSpec:
    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise SpecError("axis.count", "must be >= 2")
        if not self.lo < self.hi:
            raise SpecError("axis", "need lo < hi")

    @classmethod
    def from_raw(cls, raw, where="axis") -> "AxisSpec":
        _check_keys(raw, cls, where)
        for k in ("name", "lo", "hi", "count"):
            if k not in raw:
                raise SpecError(f"{where}.{k}", "missing")
        return cls(str(raw["name"]), parse_number(raw["lo"], f"{where}.lo"),
                   parse_number(raw["hi"], f"{where}.hi"), _int(raw["count"], f"{where}.count"))

    def values(self):
        import numpy as np
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    points: tuple[tuple[float, float], ...] | None = None
    n_points: int | None = None
    gamma: float | None = None
    theta: float | None = None
    variant: str | None = None
    gamma_tilde: float | None = None
    theta_big: float | None = None
    phi_0: float | None = None
    path: str | None = None

    _REQUIRED = {
        "discrete": ("points",),
        "regular": ("n_points", "gamma", "theta"),
        "distribution": ("variant", "theta_big"),
        "tabulated": ("path",),
    }
    _ALLOWED = {
        "discrete": ("points",),
        "regular": ("n_points", "gamma", "theta"),
        "distribution": ("variant", "gamma_tilde", "theta_big", "phi_0"),
        "tabulated": ("path", "gamma_tilde"),
    }

    @classmethod
    def from_raw(cls, raw, where="model") -> "ModelSpec":
        _check_keys(raw, cls, where)
        kind = raw.get("kind")
        if kind not in MODEL_KINDS:
            raise SpecError(f"{where}.kind", f"expected one of {list(MODEL_KINDS)}, got {kind!r}")
        present = set(raw) - {"kind"}
        bad = sorted(present - set(cls._ALLOWED[kind]))
        if bad:
            raise SpecError(where, f"key(s) {bad} do not apply to kind {kind!r}")
        for k in cls._REQUIRED[kind]:
            if k not in raw:
                raise SpecError(f"{where}.{k}", f"required for kind {kind!r}")
        kw: dict[str, Any] = {"kind": kind}
        if "points" in raw:
            pts = raw["points"]
            if not isinstance(pts, list) or not pts:
                raise SpecError(f"{where}.points", "expected a non-empty list of [phi, gamma]")
            out = []
            for i, p in enumerate(pts):
                if not isinstance(p, (list, tuple)) or len(p) != 2:
                    raise SpecError(f"{where}.points[{i}]", "expected [phi, gamma]")
                out.append((parse_number(p[0], f"{where}.points[{i}][0]"),
                            parse_number(p[1], f"{where}.points[{i}][1]")))
            kw["points"] = tuple(out)
        if "n_points" in raw:
            kw["n_points"] = _int(raw["n_points"], f"{where}.n_points")
        for k in ("gamma", "theta", "gamma_tilde", "theta_big", "phi_0"):
            if k in raw:
                kw[k] = parse_number(raw[k], f"{where}.{k}")
        if "variant" in raw:
            kw["variant"] = str(raw["variant"])
        if "path" in raw:
            kw["path"] = str(raw["path"])
        return cls(**kw)

    @property
    def unit(self) -> str:
        return "gamma" if self.kind in ("discrete", "regular") else "gamma_tilde"

    def to_raw(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if v is not None}
        if "points" in d:
            d["points"] = [list(p) for p in d["points"]]
        return d


@dataclass(frozen=True)
class FeatureOptions:
    resolution: int | None = None
    r_gap: float = 0.99

    @classmethod
    def from_raw(cls, raw, where="features") -> "FeatureOptions":
        _check_keys(raw, cls, where)
        kw: dict[str, Any] = {}
        if raw.get("resolution") is not None:
            kw["resolution"] = _int(raw["resolution"], f"{where}.resolution")
        if "r_gap" in raw:
            kw["r_gap"] = parse_number(raw["r_gap"], f"{where}.r_gap")
            if not 0 < kw["r_gap"] < 1:
                raise SpecError(f"{where}.r_gap", "must lie in (0, 1)")
        return cls(**kw)


@dataclass(frozen=True)
class ValidateOptions:
    seed: int = 12345
    samples: int = 2000
    oracle_samples: int = 300
    m_schedule: tuple[int, ...] = (8, 16, 32, 64, 128)
    tabulated: tuple[str, ...] | None = None

    @classmethod
    def from_raw(cls, raw, where="validate") -> "ValidateOptions":
        _check_keys(raw, cls, where)
        kw: dict[str, Any] = {}
        for k in ("seed", "samples", "oracle_samples"):
            if k in raw:
                kw[k] = _int(raw[k], f"{where}.{k}")
        if "m_schedule" in raw:
            kw["m_schedule"] = tuple(_int(m, f"{where}.m_schedule") for m in raw["m_schedule"])
        if "tabulated" in raw:
            tab = raw["tabulated"]
            if not isinstance(tab, list):
                raise SpecError(f"{where}.tabulated", "expected a list of paths")
            kw["tabulated"] = tuple(str(p) for p in tab)
        return cls(**kw)


@dataclass(frozen=True)
class RunSpec:
    mode: str
    model: ModelSpec | None = None
    omega_a: float | None = None
    grid: GridSpec | None = None
    axis: AxisSpec | None = None
    formula: str = "exact"
    format: str = "csv"
    out: str | None = None
    oracle: bool = False
    features: FeatureOptions = field(default_factory=FeatureOptions)
    validate: ValidateOptions = field(default_factory=ValidateOptions)
    threads: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise SpecError("mode", f"expected one of {list(MODES)}, got {self.mode!r}")
        if self.formula not in FORMULAS:
            raise SpecError("formula", f"expected one of {list(FORMULAS)}")
        if self.format not in FORMATS:
            raise SpecError("format", f"expected one of {list(FORMATS)}")
        if self.threads is not None and self.threads < 1:
            raise SpecError("threads", "must be >= 1")
        if self.mode == "validate":
            return
        if self.model is None:
            raise SpecError("model", f"required for mode {self.mode!r}")
        if self.omega_a is None:
            raise SpecError("omega_a", "required")
        if not (math.isfinite(self.omega_a) and self.omega_a > 0):
            raise SpecError("omega_a", "must be finite and positive")
        if self.mode in ("spectrum", "map2d", "features") and self.grid is None:
            raise SpecError("grid", f"required for mode {self.mode!r}")
        if self.mode == "map2d":
            if self.axis is None:
                raise SpecError("axis", "required for map2d")
            names = AXES.get(self.model.kind, ())
            if self.axis.name not in names:
                raise SpecError("axis.name", f"model kind {self.model.kind!r} sweeps {list(names)}")
        if self.mode == "features":
            ok = self.model.kind == "regular" or (
                self.model.kind == "distribution" and self.model.variant == "double_exponential")
            if not ok:
                raise SpecError("model", "features need a regular array or a double exponential")
        if self.model.kind == "tabulated" and self.model.path is not None \
                and not Path(self.model.path).is_file():
            raise SpecError("model.path", f"file not found: {self.model.path}")

    @classmethod
    def from_dict(cls, raw: dict) -> "RunSpec":
        _check_keys(raw, cls, "config")
        if "mode" not in raw:
            raise SpecError("mode", "missing")
        kw: dict[str, Any] = {"mode": raw["mode"]}
        if raw.get("model") is not None:
            kw["model"] = ModelSpec.from_raw(raw["model"])
        if raw.get("omega_a") is not None:
            kw["omega_a"] = parse_number(raw["omega_a"], "omega_a")
        if raw.get("grid") is not None:
            kw["grid"] = GridSpec.from_raw(raw["grid"])
        if raw.get("axis") is not None:
            kw["axis"] = AxisSpec.from_raw(raw["axis"])
        for k in ("formula", "format"):
            if k in raw:
                kw[k] = raw[k]
        if raw.get("out") is not None:
            kw["out"] = str(raw["out"])
        if "oracle" in raw:
            if not isinstance(raw["oracle"], bool):
                raise SpecError("oracle", "expected true or false")
            kw["oracle"] = raw["oracle"]
        if raw.get("features") is not None:
            kw["features"] = FeatureOptions.from_raw(raw["features"])
        if raw.get("validate") is not None:
            kw["validate"] = ValidateOptions.from_raw(raw["validate"])
        if raw.get("threads") is not None:
            kw["threads"] = _int(raw["threads"], "threads")
        return cls(**kw)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"mode": self.mode, "formula": self.formula, "format": self.format,
                             "oracle": self.oracle}
        if self.model is not None:
            d["model"] = self.model.to_raw()
        for k in ("omega_a", "out", "threads"):
            if getattr(self, k) is not None:
                d[k] = getattr(self, k)
        if self.grid is not None:
            d["grid"] = asdict(self.grid)
        if self.axis is not None:
            d["axis"] = asdict(self.axis)
        d["features"] = {k: v for k, v in asdict(self.features).items() if v is not None}
        v = asdict(self.validate)
        v["m_schedule"] = list(v["m_schedule"])
        if v["tabulated"] is None:
            del v["tabulated"]
        else:
            v["tabulated"] = list(v["tabulated"])
        d["validate"] = v
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "RunSpec":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"line {exc.lineno}", exc.msg) from None
        return cls.from_dict(raw)

    @classmethod
    def load(cls, path) -> "RunSpec":
        return cls.loads(Path(path).read_text())
