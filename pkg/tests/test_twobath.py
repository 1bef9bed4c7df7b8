import math

import numpy as np
import pytest

from qdissip.coupling import thermalized_exponential
from qdissip.oscillator import BathSpec
from qdissip.twobath import TwoBathScenario
from qdissip.verify import check_two_bath_oracle

GAMMA = 0.2
OMEGA = 1.0


def make_scenario(beta1=1.0, beta2=2.0, n0=0.0):
    return TwoBathScenario(
        omega=OMEGA,
        profile=thermalized_exponential(GAMMA, mode="two_bath"),
        bath1=BathSpec.from_beta(beta1, OMEGA),
        bath2=BathSpec.from_beta(beta2, OMEGA),
        initial_occupation=n0,
    )


class TestModeCoefficients:
    def test_initial(self):
        c_a, c_b, c_c = make_scenario().mode_coefficients(0.0)
        assert c_a == pytest.approx(1.0)
        assert c_b == c_c == 0.0

    def test_full_transfer(self):
        # sqrt(2) G = pi/2 at long times for the two-bath thermalized profile
        scen = make_scenario()
        c_a, c_b, c_c = scen.mode_coefficients(60.0 / GAMMA)
        assert abs(c_a) < 1e-10
        assert abs(c_b) ** 2 == pytest.approx(0.5, abs=1e-10)
        assert abs(c_c) ** 2 == pytest.approx(0.5, abs=1e-10)

    def test_normalization(self):
        scen = make_scenario()
        for t in np.linspace(0.0, 30.0 / GAMMA, 200):
            c_a, c_b, c_c = scen.mode_coefficients(t)
            total = abs(c_a) ** 2 + abs(c_b) ** 2 + abs(c_c) ** 2
            assert abs(total - 1.0) < 1e-12

    def test_against_three_mode_oracle(self):
        records = check_two_bath_oracle(ncut=6)
        assert all(r["passed"] for r in records)


class TestEnergy:
    def test_initial_value(self):
        scen = make_scenario(n0=1.3)
        assert scen.energy(0.0) == pytest.approx(OMEGA * 1.3, abs=1e-12)

    def test_steady_state(self):
        scen = make_scenario(beta1=1.0, beta2=2.0, n0=0.7)
        expected = (OMEGA / 4.0) * (1.0 / math.tanh(0.5) + 1.0 / math.tanh(1.0))
        assert scen.energy(50.0 / GAMMA) == pytest.approx(expected, abs=1e-9)
        assert scen.energy_steady() == pytest.approx(expected, abs=1e-15)

    def test_equal_temperatures(self):
        beta = 1.5
        scen = make_scenario(beta1=beta, beta2=beta)
        expected = (OMEGA / 2.0) * (1.0 / math.tanh(beta * OMEGA / 2.0))
        assert scen.energy(50.0 / GAMMA) == pytest.approx(expected, abs=1e-9)

    def test_classical_regime(self):
        beta1, beta2 = 1e-4, 2e-4
        scen = make_scenario(beta1=beta1, beta2=beta2)
        classical = 0.5 * (1.0 / beta1 + 1.0 / beta2)
        assert scen.energy_steady() == pytest.approx(classical, rel=1e-3)

    def test_steady_reached_by_50_over_gamma(self):
        scen = make_scenario(beta1=0.7, beta2=3.0, n0=2.0)
        assert abs(scen.energy(50.0 / GAMMA) - scen.energy_steady()) < 1e-9
