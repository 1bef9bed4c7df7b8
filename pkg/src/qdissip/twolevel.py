"""Dissipative two-level system: amplitude damping through a twin qubit,
pure dephasing through a single bosonic mode, and the trace-distance
Markovianity analysis.

State convention: a qubit density matrix is parametrized as
[[a, conj(c)], [c, b]] with a the excited population and c the
lower-left coherence entry.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .coupling import CouplingProfile, ExponentialProfile

__all__ = [
    "TwoLevelState",
    "QubitBathSpec",
    "DephasingScenario",
    "evolution_matrix",
    "reduced_qubit",
    "trace_distance",
    "evolved_trace_distance",
    "markov_rate",
]


@dataclass(frozen=True)
class TwoLevelState:
    """Qubit state (a, b, c): populations a + b = 1, coherence c."""

    a: float
    b: float
    c: complex = 0.0

    def __post_init__(self):
        if abs(self.a + self.b - 1.0) > 1e-10:
            raise ValueError("populations must satisfy a + b = 1")
        if not (-1e-12 <= self.a <= 1.0 + 1e-12):
            raise ValueError("a must lie in [0, 1]")
        if (self.a - self.b) ** 2 + 4.0 * abs(self.c) ** 2 > 1.0 + 1e-10:
            raise ValueError("state outside the Bloch ball")

    def matrix(self):
        return np.array(
            [[self.a, np.conj(self.c)], [self.c, self.b]], dtype=complex
        )

    @classmethod
    def from_matrix(cls, rho, tol=1e-8):
        rho = np.asarray(rho, dtype=complex)
        if np.max(np.abs(rho - rho.conj().T)) > tol:
            raise ValueError("matrix is not Hermitian")
        return cls(a=rho[0, 0].real, b=rho[1, 1].real, c=complex(rho[1, 0]))


@dataclass(frozen=True)
class QubitBathSpec:
    """Diagonal qubit bath state with excited/ground weights."""

    p_e: float
    p_g: float

    def __post_init__(self):
        if abs(self.p_e + self.p_g - 1.0) > 1e-12:
            raise ValueError("p_e + p_g must equal 1")
        if not (0.0 <= self.p_e <= 1.0):
            raise ValueError("p_e must lie in [0, 1]")


def evolution_matrix(omega0, profile, t):
    """4x4 unitary for qubit + twin-qubit in the standard product basis."""
    G = profile.G(t)
    c, s = math.cos(G), math.sin(G)
    w = np.zeros((4, 4), dtype=complex)
    w[0, 0] = cmath.exp(-1j * omega0 * t)
    w[3, 3] = cmath.exp(1j * omega0 * t)
    w[1, 1] = w[2, 2] = c
    w[1, 2] = w[2, 1] = -1j * s
    return w


def reduced_qubit(initial, bath, omega0, profile, t):
    """Reduced qubit state after coupling to a diagonal qubit bath."""
    G = profile.G(t)
    cos2 = math.cos(G) ** 2
    sin2 = math.sin(G) ** 2
    a = initial.a * cos2 + bath.p_e * sin2
    b = initial.b * cos2 + bath.p_g * sin2
    c = initial.c * cmath.exp(1j * omega0 * t) * math.cos(G)
    return TwoLevelState(a=a, b=b, c=c)


@dataclass(frozen=True)
class DephasingScenario:
    """Qubit with splitting omega0 dephasing against a mode at omega."""

    omega0: float
    omega: float
    profile: CouplingProfile
    beta: float = math.inf

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be > 0")
        if not (self.beta > 0):
            raise ValueError("beta must be > 0 or +inf")

    def xi(self, t):
        """xi(t) = -i * integral_0^t g(t') e^{-i omega t'} dt'."""
        t = float(t)
        if t < 0:
            raise ValueError("t must be >= 0")
        if t == 0:
            return 0.0 + 0.0j
        p = self.profile
        if isinstance(p, ExponentialProfile):
            z = p.gamma + 1j * self.omega
            return -1j * p.g0 * (1.0 - cmath.exp(-z * t)) / z
        re = quad(lambda u: p.g(u) * math.cos(self.omega * u), 0, t,
                  epsabs=1e-12, epsrel=1e-12, limit=500)[0]
        im = quad(lambda u: p.g(u) * math.sin(self.omega * u), 0, t,
                  epsabs=1e-12, epsrel=1e-12, limit=500)[0]
        return -1j * (re - 1j * im)

    def coherence_factor(self, t):
        """exp(-2|xi|^2 coth(beta*omega/2)), the coherence damping factor."""
        coth = 1.0 if self.beta == math.inf else 1.0 / math.tanh(self.beta * self.omega / 2.0)
        return math.exp(-2.0 * abs(self.xi(t)) ** 2 * coth)

    def reduced(self, initial, t):
        """Populations unchanged; coherence damped and rotated."""
        c = initial.c * self.coherence_factor(t) * cmath.exp(1j * self.omega0 * t)
        return TwoLevelState(a=initial.a, b=initial.b, c=c)


def trace_distance(rho1, rho2):
    """Half the trace norm of the difference; closed 2x2 form."""
    da = rho1.a - rho2.a
    dc = rho1.c - rho2.c
    return math.sqrt(da * da + abs(dc) ** 2)


def evolved_trace_distance(rho1_0, rho2_0, bath, omega0, profile, t):
    """Distance between the two amplitude-damped states at time t."""
    G = profile.G(t)
    cos2 = math.cos(G) ** 2
    da2 = (rho1_0.a - rho2_0.a) ** 2
    dc2 = abs(rho1_0.c - rho2_0.c) ** 2
    return math.sqrt(da2 * cos2 * cos2 + dc2 * cos2)


def markov_rate(rho1_0, rho2_0, bath, omega0, profile, t):
    """d/dt of the evolved trace distance (analytic derivative).

    Nonpositive for every nondecreasing G with G <= pi/2, certifying
    Markovianity.  At points where the distance vanishes (identical
    trajectories, or cos G = 0 for population-only pairs) the one-sided
    limit 0 is returned.
    """
    G = profile.G(t)
    g = profile.g(t)
    cosG = math.cos(G)
    da2 = (rho1_0.a - rho2_0.a) ** 2
    dc2 = abs(rho1_0.c - rho2_0.c) ** 2
    dist = math.sqrt(da2 * cosG**4 + dc2 * cosG**2)
    if dist == 0.0:
        return 0.0
    num = g * math.sin(2.0 * G) * (2.0 * da2 * cosG**2 + dc2)
    return -num / (2.0 * dist)
