"""Closed forms for one oscillator symmetrically coupled to two thermal baths.

Both bath modes share the frequency omega of the main oscillator and the
same coupling schedule; the schedule enters through sqrt(2)*G(t).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .coupling import CouplingProfile
from .oscillator import BathSpec

__all__ = ["TwoBathScenario"]

SQRT2 = math.sqrt(2.0)


def _coth(x):
    if x == math.inf:
        return 1.0
    return 1.0 / math.tanh(x)


@dataclass(frozen=True)
class TwoBathScenario:
    """Oscillator between two baths at inverse temperatures beta1, beta2.

    ``initial_occupation`` is the initial mean excitation of the main
    oscillator; its initial state is otherwise arbitrary.
    """

    omega: float
    profile: CouplingProfile
    bath1: BathSpec
    bath2: BathSpec
    initial_occupation: float = 0.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be > 0")
        if self.initial_occupation < 0:
            raise ValueError("initial_occupation must be >= 0")

    def mode_coefficients(self, t):
        """(c_a, c_b, c_c) with a(t) = c_a a + c_b b + c_c c.

        |c_a|^2 + |c_b|^2 + |c_c|^2 = 1 (commutator preservation).
        """
        G = self.profile.G(t)
        phase = cmath.exp(-1j * self.omega * t)
        # sign of the sine term follows the single-bath convention
        # h = -i e^{-i w t} sin G applied to the symmetric mode (b+c)/sqrt(2)
        c_a = phase * math.cos(SQRT2 * G)
        c_bc = (-1j * SQRT2 / 2.0) * phase * math.sin(SQRT2 * G)
        return c_a, c_bc, c_bc

    def energy(self, t):
        """Mean excitation energy omega * <a^dag(t) a(t)> (no zero-point term)."""
        G = self.profile.G(t)
        cos2 = math.cos(SQRT2 * G) ** 2
        sin2 = math.sin(SQRT2 * G) ** 2
        coths = _coth(self.bath1.beta * self.omega / 2.0) + _coth(
            self.bath2.beta * self.omega / 2.0
        )
        return self.omega * cos2 * self.initial_occupation + (self.omega / 4.0) * sin2 * coths

    def energy_steady(self):
        """Long-time limit (omega/4) * (coth(b1 w/2) + coth(b2 w/2))."""
        coths = _coth(self.bath1.beta * self.omega / 2.0) + _coth(
            self.bath2.beta * self.omega / 2.0
        )
        return (self.omega / 4.0) * coths
