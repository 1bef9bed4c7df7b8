"""Time-dependent coupling schedules g(t) and their running integrals G(t).

Profiles are defined primarily through G(t); g(t) is derived from it.
Every closed-form result downstream consumes G(t), and the
Lindblad-matched schedule has an integrable divergence of g at t = 0
that G avoids entirely.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

__all__ = [
    "CouplingProfile",
    "ExponentialProfile",
    "LindbladMatchedProfile",
    "ConstantProfile",
    "TabulatedProfile",
    "thermalized_exponential",
]


def _check_time(t):
    t = float(t)
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return t


class CouplingProfile:
    """Base class; subclasses implement G(t) and g(t)."""

    def g(self, t):
        raise NotImplementedError

    def G(self, t):
        raise NotImplementedError

    def G_increment(self, t0, t1):
        """Exact increment G(t1) - G(t0); stays finite for singular g."""
        return self.G(t1) - self.G(t0)


@dataclass(frozen=True)
class ExponentialProfile(CouplingProfile):
    """g(t) = g0 * exp(-gamma*t), so G(t) = (g0/gamma) * (1 - exp(-gamma*t))."""

    g0: float
    gamma: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if self.g0 < 0:
            raise ValueError("g0 must be >= 0")

    def g(self, t):
        t = _check_time(t)
        return self.g0 * math.exp(-self.gamma * t)

    def G(self, t):
        t = _check_time(t)
        return (self.g0 / self.gamma) * (-math.expm1(-self.gamma * t))


@dataclass(frozen=True)
class LindbladMatchedProfile(CouplingProfile):
    """Schedule with cos^2 G(t) = exp(-gamma*t), i.e. G = arccos(e^{-gamma t/2}).

    Its populations coincide with the standard Lindblad damped-oscillator
    solution.  g(t) diverges integrably at t = 0.
    """

    gamma: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")

    def g(self, t):
        t = _check_time(t)
        if t == 0:
            raise ValueError("LindbladMatched g(t) is singular at the origin")
        e = math.exp(-self.gamma * t)
        return (self.gamma / 2) * math.sqrt(e) / math.sqrt(1.0 - e)

    def G(self, t):
        t = _check_time(t)
        return math.acos(math.exp(-self.gamma * t / 2))


@dataclass(frozen=True)
class ConstantProfile(CouplingProfile):
    """Constant coupling g(t) = g0."""

    g0: float

    def __post_init__(self):
        if self.g0 < 0:
            raise ValueError("g0 must be >= 0")

    def g(self, t):
        _check_time(t)
        return self.g0

    def G(self, t):
        return self.g0 * _check_time(t)


@dataclass(frozen=True)
class TabulatedProfile(CouplingProfile):
    """Monotone piecewise-cubic interpolation of sampled (t, G) pairs."""

    ts: tuple = ()
    Gs: tuple = ()
    _spline: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=float)
        Gs = np.asarray(self.Gs, dtype=float)
        if ts.ndim != 1 or ts.shape != Gs.shape or ts.size < 2:
            raise ValueError("need matching 1-D samples with at least 2 points")
        if not np.all(np.diff(ts) > 0):
            raise ValueError("sample times must be strictly increasing")
        if np.any(np.diff(Gs) < 0):
            raise ValueError("G samples must be nondecreasing")
        if ts[0] != 0 or Gs[0] != 0:
            raise ValueError("samples must start at t=0 with G(0)=0")
        object.__setattr__(self, "ts", tuple(ts))
        object.__setattr__(self, "Gs", tuple(Gs))
        object.__setattr__(self, "_spline", PchipInterpolator(ts, Gs))

    @classmethod
    def from_csv(cls, path):
        """Load a two-column (t, G) CSV with a header row."""
        ts, Gs = [], []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            next(reader)  # header
            for row in reader:
                if not row:
                    continue
                ts.append(float(row[0]))
                Gs.append(float(row[1]))
        return cls(ts=tuple(ts), Gs=tuple(Gs))

    def g(self, t):
        t = _check_time(t)
        return float(self._spline.derivative()(t))

    def G(self, t):
        t = _check_time(t)
        if t > self.ts[-1]:
            raise ValueError(f"t={t} beyond tabulated range {self.ts[-1]}")
        return float(self._spline(t))


def thermalized_exponential(gamma, mode="single"):
    """Exponential profile satisfying the thermalization condition.

    ``mode='single'`` sets g0/gamma = pi/2 so G(inf) = pi/2; for
    ``mode='two_bath'`` g0/gamma = pi/(2*sqrt(2)) so sqrt(2)*G(inf) = pi/2.
    """
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    if mode == "single":
        g0 = (math.pi / 2) * gamma
    elif mode == "two_bath":
        g0 = (math.pi / (2 * math.sqrt(2))) * gamma
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return ExponentialProfile(g0=g0, gamma=gamma)
