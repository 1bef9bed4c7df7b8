"""Closed forms for a harmonic oscillator coupled to one thermal bath mode.

Covers the mixing coefficients f(t), h(t), thermal populations, Husimi
distribution, mean position and energy for coherent initial states, and
the heat characteristic function with its discrete-ladder inversion.
Natural units hbar = k_B = 1; the mode frequency is omega0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coupling import CouplingProfile

__all__ = [
    "BathSpec",
    "OscillatorScenario",
    "HeatDistribution",
    "nbar_from_beta",
    "beta_from_nbar",
]


def nbar_from_beta(beta, omega):
    """Mean thermal occupancy 1/(e^{beta*omega} - 1); beta may be +inf."""
    if omega <= 0:
        raise ValueError("omega must be > 0")
    if beta == math.inf:
        return 0.0
    if beta <= 0:
        raise ValueError("beta must be > 0 or +inf")
    return 1.0 / math.expm1(beta * omega)


def beta_from_nbar(nbar, omega):
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    if nbar == 0:
        return math.inf
    return math.log1p(1.0 / nbar) / omega


@dataclass(frozen=True)
class BathSpec:
    """Thermal mode at inverse temperature beta with occupancy nbar.

    The two fields are redundant; use the constructors to keep them
    consistent for the mode frequency in use.
    """

    beta: float
    nbar: float

    @classmethod
    def from_beta(cls, beta, omega):
        return cls(beta=beta, nbar=nbar_from_beta(beta, omega))

    @classmethod
    def from_nbar(cls, nbar, omega):
        return cls(beta=beta_from_nbar(nbar, omega), nbar=float(nbar))


@dataclass(frozen=True)
class HeatDistribution:
    """Probabilities over the discrete heat ladder Q = k * omega0."""

    omega0: float
    kmax: int
    probs: np.ndarray  # index k + kmax, k in [-kmax, kmax]

    def k_values(self):
        return np.arange(-self.kmax, self.kmax + 1)

    def prob(self, k):
        if abs(k) > self.kmax:
            return 0.0
        return float(self.probs[k + self.kmax])

    def mean_heat(self):
        return float(np.sum(self.k_values() * self.omega0 * self.probs))


@dataclass(frozen=True)
class OscillatorScenario:
    """Oscillator at omega0 coupled to one bath mode through a profile.

    ``nbar_a`` describes a thermal initial state of the main oscillator
    (used by populations and heat statistics); ``alpha0`` a coherent one
    (used by Husimi, position, energy).  ``mass`` only enters the
    position observable.
    """

    omega0: float
    profile: CouplingProfile
    bath: BathSpec
    nbar_a: float = 0.0
    alpha0: complex = 0.0
    mass: float = 1.0

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError("omega0 must be > 0")
        if self.mass <= 0:
            raise ValueError("mass must be > 0")
        if self.nbar_a < 0:
            raise ValueError("nbar_a must be >= 0")

    # -- mode mixing ---------------------------------------------------

    def fh(self, t):
        """Coefficients of a(t) = f a + h b; |f|^2 + |h|^2 = 1."""
        G = self.profile.G(t)
        phase = cmath.exp(-1j * self.omega0 * t)
        return phase * math.cos(G), -1j * phase * math.sin(G)

    # -- thermal initial state -----------------------------------------

    def mean_occupation(self, t):
        """lambda(t) = |f|^2 nbar_a + |h|^2 nbar_b."""
        f, h = self.fh(t)
        return abs(f) ** 2 * self.nbar_a + abs(h) ** 2 * self.bath.nbar

    def population(self, n, t):
        """P_n(t) = lambda^n / (lambda+1)^(n+1) for a thermal start."""
        if n < 0:
            raise ValueError("n must be >= 0")
        lam = self.mean_occupation(t)
        return lam**n / (lam + 1.0) ** (n + 1)

    # -- coherent initial state ----------------------------------------

    def husimi(self, alpha, t):
        """Q(alpha, t) of the reduced state for a coherent start."""
        f, h = self.fh(t)
        width = 1.0 + abs(h) ** 2 * self.bath.nbar
        alpha = np.asarray(alpha, dtype=complex)
        q = np.exp(-np.abs(alpha - f * self.alpha0) ** 2 / width) / (math.pi * width)
        return float(q) if q.ndim == 0 else q

    def husimi_peak(self, t):
        """Location of the maximum of Q: alpha0 * e^{-i omega0 t} cos G."""
        f, _ = self.fh(t)
        return f * self.alpha0

    def position(self, t):
        """Mean position for a coherent start (depends on the mass)."""
        f, _ = self.fh(t)
        x0 = math.sqrt(2.0 / (self.mass * self.omega0))
        return 0.5 * x0 * (2.0 * (f * self.alpha0).real)

    def energy(self, t):
        """Mean energy omega0*(1/2 + |alpha0|^2 cos^2 G + nbar_b sin^2 G)."""
        f, h = self.fh(t)
        return self.omega0 * (
            0.5 + abs(self.alpha0) ** 2 * abs(f) ** 2 + self.bath.nbar * abs(h) ** 2
        )

    # -- heat statistics (thermal initial state) -----------------------

    def heat_char_fn(self, mu, t):
        """Characteristic function of the heat distribution at time t.

        Evaluated in a form scaled by e^{-beta1*omega0} so that the
        zero-temperature limit beta1 = +inf (nbar_a = 0) is exact.
        """
        _, h = self.fh(t)
        h2 = abs(h) ** 2
        nb = self.bath.nbar
        # x = e^{-beta1*omega0} = nbar_a / (nbar_a + 1)
        x = self.nbar_a / (self.nbar_a + 1.0)
        e = cmath.exp(1j * mu * self.omega0)
        num = (1.0 - x) * e
        den = e * ((1.0 + h2 * nb) - h2 * nb * e + x * (h2 * (nb + 1.0) - 1.0)) - x * h2 * (
            nb + 1.0
        )
        return num / den

    def heat_distribution(self, t, kmax, boundary_tol=1e-12):
        """Invert the characteristic function on the ladder Q = k*omega0.

        The characteristic function is periodic in mu with period
        2*pi/omega0, so a uniform DFT over one period recovers the ladder
        probabilities exactly up to truncation at |k| = kmax.
        """
        if kmax < 1:
            raise ValueError("kmax must be >= 1")
        M = 2 * kmax + 1
        js = np.arange(M)
        mus = 2.0 * math.pi * js / (M * self.omega0)
        gvals = np.array([self.heat_char_fn(mu, t) for mu in mus])
        ks = np.arange(-kmax, kmax + 1)
        phases = np.exp(-2j * math.pi * np.outer(ks, js) / M)
        probs = (phases @ gvals).real / M
        if max(abs(probs[0]), abs(probs[-1])) > boundary_tol:
            raise ValueError(
                f"boundary probability {max(abs(probs[0]), abs(probs[-1])):.3e}"
                f" above {boundary_tol:.1e}; increase kmax"
            )
        if probs.min() < -1e-10:
            raise ValueError(f"negative probability {probs.min():.3e} beyond tolerance")
        probs = np.clip(probs, 0.0, None)
        probs = probs / probs.sum()
        return HeatDistribution(omega0=self.omega0, kmax=kmax, probs=probs)
