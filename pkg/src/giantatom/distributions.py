"""Continuous coupling-strength distributions v(phi~).

Every distribution integrates to sqrt(Gamma~/2) over the real line.  The
named shapes are parametrised by a characteristic width ``theta_big``
(Theta~); the double exponential also has a lobe separation ``phi_0``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

#: default omitted-mass fraction when truncating infinite supports
DEFAULT_TAIL = 1e-14


class UnsupportedVariantError(ValueError):
    pass


class TabulatedFormatError(ValueError):
    pass


@dataclass(frozen=True)
class CouplingDistribution:
    gamma_tilde: float
    theta_big: float

    variant = "abstract"

    def __post_init__(self):
        if not (math.isfinite(self.gamma_tilde) and self.gamma_tilde > 0):
            raise ValueError("gamma_tilde must be positive")
        if not (math.isfinite(self.theta_big) and self.theta_big > 0):
            raise ValueError("theta_big must be positive")

    @property
    def norm(self) -> float:
        """Total integral of v, sqrt(Gamma~/2)."""
        return math.sqrt(0.5 * self.gamma_tilde)

    @property
    def phase_span(self) -> float:
        return self.theta_big

    def value(self, phi):
        raise NotImplementedError

    def __call__(self, phi):
        return self.value(phi)

    def cdf(self, phi):
        """Integral of v from -inf to phi."""
        raise NotImplementedError

    def mass(self, lo, hi):
        return self.cdf(hi) - self.cdf(lo)

    def kinks(self) -> list[float]:
        """Points where v or its derivative is discontinuous."""
        return []

    def lobes(self, tail: float = DEFAULT_TAIL) -> list[tuple[float, float]]:
        """Disjoint intervals holding all but a ``tail`` fraction of the mass."""
        h = 0.5 * self.theta_big
        return [(-h, h)]

    def support(self, tail: float = DEFAULT_TAIL) -> tuple[float, float]:
        lb = self.lobes(tail)
        return lb[0][0], lb[-1][1]

    def params_dict(self) -> dict:
        return {"variant": self.variant, "gamma_tilde": self.gamma_tilde,
                "theta_big": self.theta_big}


def _compact(phi, h, inside):
    phi = np.asarray(phi, dtype=float)
    out = np.where(np.abs(phi) <= h, inside(phi), 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Uniform(CouplingDistribution):
    variant = "uniform"

    def value(self, phi):
        h = 0.5 * self.theta_big
        return _compact(phi, h, lambda p: np.full_like(p, self.norm / self.theta_big))

    def cdf(self, phi):
        h = 0.5 * self.theta_big
        p = np.clip(np.asarray(phi, dtype=float), -h, h)
        return self.norm * (p + h) / self.theta_big

    def kinks(self):
        h = 0.5 * self.theta_big
        return [-h, h]


def _exp_half_length(theta_big: float, tail: float) -> float:
    # mass of e^{-2|x|/T}/T beyond |x| > L is e^{-2L/T}
    return 0.5 * theta_big * math.log(1.0 / tail)


@dataclass(frozen=True)
class Exponential(CouplingDistribution):
    variant = "exponential"

    def value(self, phi):
        p = np.asarray(phi, dtype=float)
        out = self.norm / self.theta_big * np.exp(-2.0 * np.abs(p) / self.theta_big)
        return float(out) if out.ndim == 0 else out

    def cdf(self, phi):
        p = np.asarray(phi, dtype=float)
        e = 0.5 * np.exp(-2.0 * np.abs(p) / self.theta_big)
        return self.norm * np.where(p < 0, e, 1.0 - e)

    def kinks(self):
        return [0.0]

    def lobes(self, tail=DEFAULT_TAIL):
        L = _exp_half_length(self.theta_big, tail)
        return [(-L, L)]


@dataclass(frozen=True)
class Triangular(CouplingDistribution):
    variant = "triangular"

    def value(self, phi):
        T = self.theta_big
        return _compact(phi, 0.5 * T,
                        lambda p: self.norm * 2.0 / T * (1.0 - 2.0 * np.abs(p) / T))

    def cdf(self, phi):
        T = self.theta_big
        p = np.clip(np.asarray(phi, dtype=float), -0.5 * T, 0.5 * T)
        y = 1.0 - 2.0 * np.abs(p) / T  # in [0, 1]
        half = 0.5 * y * y
        return self.norm * np.where(p < 0, half, 1.0 - half)

    def kinks(self):
        h = 0.5 * self.theta_big
        return [-h, 0.0, h]


@dataclass(frozen=True)
class RaisedCosine(CouplingDistribution):
    variant = "raised_cosine"

    def value(self, phi):
        T = self.theta_big
        return _compact(phi, 0.5 * T,
                        lambda p: self.norm * 2.0 / T * np.cos(np.pi * p / T) ** 2)

    def cdf(self, phi):
        T = self.theta_big
        p = np.clip(np.asarray(phi, dtype=float), -0.5 * T, 0.5 * T)
        return self.norm * (p / T + 0.5 + np.sin(2.0 * np.pi * p / T) / (2.0 * np.pi))

    def kinks(self):
        h = 0.5 * self.theta_big
        return [-h, h]


@dataclass(frozen=True)
class DoubleExponential(CouplingDistribution):
    phi_0: float = 0.0
    variant = "double_exponential"

    def __post_init__(self):
        super().__post_init__()
        if not (math.isfinite(self.phi_0) and self.phi_0 >= 0):
            raise ValueError("phi_0 must be non-negative")

    @property
    def phase_span(self):
        return self.theta_big + self.phi_0

    def value(self, phi):
        p = np.asarray(phi, dtype=float)
        T, c = self.theta_big, 0.5 * self.phi_0
        out = self.norm / (2.0 * T) * (np.exp(-2.0 / T * np.abs(p + c))
                                       + np.exp(-2.0 / T * np.abs(p - c)))
        return float(out) if out.ndim == 0 else out

    def cdf(self, phi):
        p = np.asarray(phi, dtype=float)
        c = 0.5 * self.phi_0
        one = Exponential(self.gamma_tilde, self.theta_big)
        return 0.5 * (one.cdf(p + c) + one.cdf(p - c))

    def kinks(self):
        c = 0.5 * self.phi_0
        return [-c, c] if c > 0 else [0.0]

    def lobes(self, tail=DEFAULT_TAIL):
        L = _exp_half_length(self.theta_big, tail)
        c = 0.5 * self.phi_0
        if c < L:
            return [(-c - L, c + L)]
        return [(-c - L, -c + L), (c - L, c + L)]

    def params_dict(self):
        d = super().params_dict()
        d["phi_0"] = self.phi_0
        return d


@dataclass(frozen=True)
class Tabulated(CouplingDistribution):
    """Linearly interpolated samples, zero outside the tabulated range.

    ``theta_big`` is informational only (defaults to the table extent).
    ``raw_norm_error`` records the relative normalisation correction that was
    applied when the table was built.
    """

    nodes: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    raw_norm_error: float = 0.0
    source: str = ""
    _cum: np.ndarray = field(default=None, repr=False, compare=False)

    variant = "tabulated"

    def __post_init__(self):
        super().__post_init__()
        x = np.asarray(self.nodes, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or x.size < 2 or x.shape != v.shape:
            raise TabulatedFormatError("need at least two (phi, v) samples")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise TabulatedFormatError("samples must be finite")
        if np.any(np.diff(x) <= 0):
            raise TabulatedFormatError("phi samples must be strictly increasing")
        if np.any(v < 0):
            raise TabulatedFormatError("coupling density must be non-negative")
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * np.diff(x))))
        object.__setattr__(self, "_cum", cum)

    @classmethod
    def normalized(cls, nodes, values, gamma_tilde: float, source: str = "",
                   warn_above: float = 1e-6) -> "Tabulated":
        """Build a table rescaled so that it integrates to sqrt(Gamma~/2)."""
        x = np.asarray(nodes, dtype=float)
        v = np.asarray(values, dtype=float)
        if x.size >= 2 and np.all(np.diff(x) > 0):
            total = float(np.sum(0.5 * (v[1:] + v[:-1]) * np.diff(x)))
        else:
            total = float("nan")
        target = math.sqrt(0.5 * gamma_tilde)
        if not (total > 0):
            raise TabulatedFormatError("tabulated density has no positive mass")
        rel = abs(total / target - 1.0)
        if rel > warn_above:
            warnings.warn(f"tabulated coupling renormalised by relative {rel:.3g}", stacklevel=2)
        v = v * (target / total)
        return cls(gamma_tilde, float(x[-1] - x[0]), tuple(x.tolist()), tuple(v.tolist()),
                   rel, source)

    @property
    def phase_span(self):
        return self.nodes[-1] - self.nodes[0]

    def value(self, phi):
        x = np.asarray(self.nodes)
        out = np.interp(phi, x, np.asarray(self.values), left=0.0, right=0.0)
        return float(out) if np.ndim(out) == 0 else out

    def cdf(self, phi):
        x = np.asarray(self.nodes)
        v = np.asarray(self.values)
        p = np.clip(np.asarray(phi, dtype=float), x[0], x[-1])
        i = np.clip(np.searchsorted(x, p, side="right") - 1, 0, x.size - 2)
        h = x[i + 1] - x[i]
        dx = p - x[i]
        partial = v[i] * dx + 0.5 * (v[i + 1] - v[i]) / h * dx * dx
        return self._cum[i] + partial

    def kinks(self):
        return list(self.nodes)

    def lobes(self, tail=DEFAULT_TAIL):
        return [(self.nodes[0], self.nodes[-1])]

    def params_dict(self):
        return {"variant": self.variant, "gamma_tilde": self.gamma_tilde,
                "source": self.source, "n_samples": len(self.nodes)}


NAMED = {cls.variant: cls for cls in (Uniform, Exponential, Triangular, RaisedCosine,
                                       DoubleExponential)}


def make_distribution(variant: str, gamma_tilde: float, theta_big: float,
                      phi_0: float = 0.0) -> CouplingDistribution:
    try:
        cls = NAMED[variant]
    except KeyError:
        raise UnsupportedVariantError(
            f"unknown distribution {variant!r}; expected one of {sorted(NAMED)}") from None
    if cls is DoubleExponential:
        return cls(gamma_tilde, theta_big, phi_0)
    if phi_0:
        raise ValueError(f"phi_0 only applies to double_exponential, not {variant}")
    return cls(gamma_tilde, theta_big)


def read_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Parse a two-column ``phi v`` text file ('#' starts a comment)."""
    xs, vs = [], []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        cols = line.replace(",", " ").split()
        if len(cols) != 2:
            raise TabulatedFormatError(f"{path}:{lineno}: expected two columns, got {len(cols)}")
        try:
            xs.append(float(cols[0]))
            vs.append(float(cols[1]))
        except ValueError as exc:
            raise TabulatedFormatError(f"{path}:{lineno}: {exc}") from None
    x, v = np.array(xs), np.array(vs)
    if x.size < 2:
        raise TabulatedFormatError(f"{path}: need at least two samples")
    if np.any(np.diff(x) <= 0):
        raise TabulatedFormatError(f"{path}: phi column must be strictly increasing")
    if np.any(v < 0):
        raise TabulatedFormatError(f"{path}: negative coupling density")
    return x, v


def load_tabulated(path, gamma_tilde: float) -> Tabulated:
    x, v = read_table(path)
    return Tabulated.normalized(x, v, gamma_tilde, source=str(path))


def distribution_value(dist: CouplingDistribution, phi_tilde):
    return dist.value(phi_tilde)
