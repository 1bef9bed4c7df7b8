import math

import numpy as np
import pytest

from qdissip.coupling import LindbladMatchedProfile, thermalized_exponential
from qdissip.numerics import expm_hermitian, fock_operators, kron, partial_trace, thermal_state
from qdissip.oscillator import BathSpec, OscillatorScenario
from qdissip.verify import oscillator_pair_builder

GAMMA = 0.2
OMEGA0 = 1.0


def make_scenario(profile=None, nbar_a=0.0, nbar_b=0.0, alpha0=0.0):
    if profile is None:
        profile = thermalized_exponential(GAMMA)
    return OscillatorScenario(
        omega0=OMEGA0,
        profile=profile,
        bath=BathSpec.from_nbar(nbar_b, OMEGA0),
        nbar_a=nbar_a,
        alpha0=alpha0,
    )


class TestFH:
    def test_initial_values(self):
        f, h = make_scenario().fh(0.0)
        assert f == pytest.approx(1.0)
        assert h == pytest.approx(0.0)

    def test_lindblad_matched_split(self):
        scen = make_scenario(profile=LindbladMatchedProfile(gamma=GAMMA))
        t = math.log(4.0) / GAMMA  # e^{-gamma t} = 0.25
        f, h = scen.fh(t)
        assert abs(f) ** 2 == pytest.approx(0.25, abs=1e-12)
        assert abs(h) ** 2 == pytest.approx(0.75, abs=1e-12)

    def test_long_time_forgetting(self):
        f, _ = make_scenario().fh(50.0 / GAMMA)
        assert abs(f) ** 2 < 1e-10

    def test_normalization_all_profiles(self):
        for profile in (thermalized_exponential(GAMMA), LindbladMatchedProfile(gamma=GAMMA)):
            scen = make_scenario(profile=profile)
            for t in np.linspace(0.0, 30 / GAMMA, 200):
                f, h = scen.fh(t)
                assert abs(abs(f) ** 2 + abs(h) ** 2 - 1.0) < 1e-12


class TestPopulation:
    def test_ground_state_cooling(self):
        scen = make_scenario(nbar_a=0.8, nbar_b=0.0)
        t = 50.0 / GAMMA
        assert scen.population(0, t) == pytest.approx(1.0, abs=1e-10)
        for n in range(1, 6):
            assert scen.population(n, t) < 1e-10

    def test_direct_arithmetic(self):
        # lambda = 0.5 via nbar_a=1, nbar_b=0, |f|^2 = 1/2
        scen = make_scenario(profile=LindbladMatchedProfile(gamma=GAMMA), nbar_a=1.0)
        t = math.log(2.0) / GAMMA
        assert scen.population(0, t) == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert scen.population(1, t) == pytest.approx(2.0 / 9.0, abs=1e-12)

    def test_normalized(self):
        scen = make_scenario(nbar_a=0.8, nbar_b=0.3)
        for t in (0.0, 1.0 / GAMMA, 5.0 / GAMMA):
            lam = scen.mean_occupation(t)
            nmax = max(60, int(-12 / math.log10(lam / (lam + 1))) + 1) if lam > 0 else 2
            total = sum(scen.population(n, t) for n in range(nmax))
            assert total == pytest.approx(1.0, abs=1e-10)


class TestMeanOccupation:
    def test_endpoints(self):
        scen = make_scenario(nbar_a=0.8, nbar_b=0.3)
        assert scen.mean_occupation(0.0) == pytest.approx(0.8, abs=1e-12)
        assert scen.mean_occupation(80.0 / GAMMA) == pytest.approx(0.3, abs=1e-10)

    def test_lindblad_matched_half_life(self):
        scen = make_scenario(profile=LindbladMatchedProfile(gamma=GAMMA), nbar_a=1.0)
        assert scen.mean_occupation(math.log(2.0) / GAMMA) == pytest.approx(0.5, abs=1e-12)

    def test_rate_equation_residual(self):
        # d<n>/dt = -gamma * (<n> - nbar_b) for the Lindblad-matched profile
        scen = make_scenario(profile=LindbladMatchedProfile(gamma=GAMMA),
                             nbar_a=0.9, nbar_b=0.2)
        for t in (0.5 / GAMMA, 2.0 / GAMMA):
            d = 1e-6 / GAMMA
            deriv = (scen.mean_occupation(t + d) - scen.mean_occupation(t - d)) / (2 * d)
            assert abs(deriv + GAMMA * (scen.mean_occupation(t) - 0.2)) < 1e-9


class TestHusimi:
    def test_peak_value(self):
        scen = make_scenario(alpha0=2.0)
        t = 1.3 / GAMMA
        peak = scen.husimi_peak(t)
        assert scen.husimi(peak, t) == pytest.approx(1.0 / math.pi, abs=1e-12)

    def test_peak_path(self):
        scen = make_scenario(alpha0=2.0, nbar_b=0.4)
        for t in np.linspace(0.0, 5.0 / GAMMA, 50):
            expected = 2.0 * np.exp(-1j * OMEGA0 * t) * math.cos(scen.profile.G(t))
            assert abs(scen.husimi_peak(t) - expected) < 1e-12

    def test_grid_normalization(self):
        scen = make_scenario(alpha0=2.0, nbar_b=0.5)
        t = 1.0 / GAMMA
        r = abs(scen.alpha0) + 6.0
        step = 0.05
        xs = np.arange(-r, r + step / 2, step)
        X, Y = np.meshgrid(xs, xs)
        f, h = scen.fh(t)
        width = 1.0 + abs(h) ** 2 * scen.bath.nbar
        Q = np.exp(-(np.abs(X + 1j * Y - f * scen.alpha0) ** 2) / width) / (math.pi * width)
        assert np.sum(Q) * step * step == pytest.approx(1.0, abs=1e-3)


class TestPosition:
    def test_initial(self):
        scen = make_scenario(alpha0=2.0)
        x0 = math.sqrt(2.0 / (scen.mass * OMEGA0))
        assert scen.position(0.0) / x0 == pytest.approx(2.0, abs=1e-12)

    def test_imaginary_alpha0(self):
        scen = make_scenario(alpha0=2.0j)
        assert scen.position(0.0) == pytest.approx(0.0, abs=1e-12)

    def test_algebraic_identity(self):
        scen = make_scenario(alpha0=1.5 + 0.8j)
        rng = np.random.default_rng(3)
        for t in rng.uniform(0.0, 20.0, 10):
            f, _ = scen.fh(t)
            expected = math.sqrt(1.0 / (2 * scen.mass * OMEGA0)) * 2 * (f * scen.alpha0).real
            assert abs(scen.position(t) - expected) < 1e-12


class TestEnergy:
    def test_initial(self):
        scen = make_scenario(alpha0=2.0)
        assert scen.energy(0.0) == pytest.approx(4.5 * OMEGA0, abs=1e-12)

    def test_thermal_limit(self):
        scen = make_scenario(alpha0=2.0, nbar_b=0.3)
        coth = 1.0 / math.tanh(scen.bath.beta * OMEGA0 / 2)
        assert scen.energy(50.0 / GAMMA) == pytest.approx(OMEGA0 / 2 * coth, abs=1e-9)

    def test_lindblad_matched_decay(self):
        scen = make_scenario(profile=LindbladMatchedProfile(gamma=GAMMA), alpha0=2.0)
        for t in np.linspace(0.0, 5.0 / GAMMA, 40):
            expected = OMEGA0 * (0.5 + 4.0 * math.exp(-GAMMA * t))
            assert scen.energy(t) == pytest.approx(expected, abs=1e-12)


class TestHeatCharFn:
    def test_mu_zero(self):
        scen = make_scenario(nbar_a=0.8, nbar_b=0.3)
        for t in (0.0, 1.0, 12.0):
            assert scen.heat_char_fn(0.0, t) == pytest.approx(1.0, abs=1e-12)

    def test_t_zero(self):
        scen = make_scenario(nbar_a=0.8, nbar_b=0.3)
        for mu in (-3.0, 0.2, 7.0):
            assert scen.heat_char_fn(mu, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_both_zero_temperature(self):
        scen = make_scenario(nbar_a=0.0, nbar_b=0.0)
        for mu in (-1.0, 0.5, 2.0):
            assert scen.heat_char_fn(mu, 3.0 / GAMMA) == pytest.approx(1.0, abs=1e-12)

    def test_hermitian_in_mu(self):
        scen = make_scenario(nbar_a=0.6, nbar_b=0.2)
        t = 1.7 / GAMMA
        for mu in np.linspace(0.1, 6.0, 25):
            g_plus = scen.heat_char_fn(mu, t)
            g_minus = scen.heat_char_fn(-mu, t)
            assert abs(g_plus - np.conj(g_minus)) < 1e-12


class TestHeatDistribution:
    def test_no_evolution(self):
        scen = make_scenario(nbar_a=0.8, nbar_b=0.3)
        dist = scen.heat_distribution(0.0, 10)
        assert dist.prob(0) == pytest.approx(1.0, abs=1e-12)
        assert all(dist.prob(k) < 1e-12 for k in range(1, 11))

    def test_cold_bath_release_only(self):
        # nbar_b = 0, finite beta1: only heat release (k <= 0) in the long run
        scen = make_scenario(nbar_a=0.5, nbar_b=0.0)
        dist = scen.heat_distribution(50.0 / GAMMA, 40)
        for k in range(1, 41):
            assert dist.prob(k) < 1e-10
        # released ladder follows the initial thermal weights
        for k in range(0, 10):
            expected = (0.5 / 1.5) ** k / 1.5
            assert dist.prob(-k) == pytest.approx(expected, abs=1e-9)

    def test_sum_and_nonnegativity(self):
        scen = make_scenario(nbar_a=0.8, nbar_b=0.3)
        for tau in (0.5, 2.0):
            dist = scen.heat_distribution(tau / GAMMA, 40)
            assert np.sum(dist.probs) == pytest.approx(1.0, abs=1e-9)
            assert dist.probs.min() >= 0.0

    def test_kmax_too_small(self):
        scen = make_scenario(nbar_a=0.8, nbar_b=0.3)
        with pytest.raises(ValueError):
            scen.heat_distribution(2.0 / GAMMA, 2)

    def test_moment_matches_finite_difference(self):
        scen = make_scenario(nbar_a=0.8, nbar_b=0.3)
        t = 1.0 / GAMMA
        dist = scen.heat_distribution(t, 40)
        d = 1e-5 / OMEGA0
        deriv = (scen.heat_char_fn(d, t) - scen.heat_char_fn(-d, t)) / (2 * d)
        assert dist.mean_heat() == pytest.approx((-1j * deriv).real, abs=1e-6)


def test_heat_distribution_vs_transition_probability_sum():
    """Double-sum over oracle transition probabilities matches the inversion."""
    gamma, nbar_a, nbar_b, ncut = GAMMA, 0.5, 0.2, 25
    profile = thermalized_exponential(gamma)
    scen = OscillatorScenario(
        omega0=OMEGA0, profile=profile, bath=BathSpec.from_nbar(nbar_b, OMEGA0),
        nbar_a=nbar_a,
    )
    t = 1.0 / gamma
    builder = oscillator_pair_builder(OMEGA0, ncut)
    steps = 16
    u = np.eye(ncut * ncut, dtype=complex)
    t0 = 0.0
    for k in range(steps):
        t1 = (k + 1) * t / steps
        dG = profile.G_increment(t0, t1)
        u = expm_hermitian(builder(0.0, t1 - t0, dG), -1j) @ u
        t0 = t1
    # transition probabilities P_{n->m}: evolve |n><n| (x) thermal_b, read <m|rho_a|m>
    p_bath = np.real(np.diag(thermal_state(ncut, nbar_b, tail_threshold=1e-9)))
    prob_amp = np.abs(u.reshape(ncut, ncut, ncut, ncut)) ** 2  # (m,k),(n,j)
    trans = np.einsum("mknj,j->mn", prob_amp, p_bath)
    r = nbar_a / (nbar_a + 1.0)
    p0 = (1 - r) * r ** np.arange(ncut)
    kmax = ncut - 1
    ladder = np.zeros(2 * kmax + 1)
    for n in range(18):
        for m in range(ncut):
            ladder[m - n + kmax] += trans[m, n] * p0[n]
    dist = scen.heat_distribution(t, 40)
    for k in range(-12, 13):
        assert dist.prob(k) == pytest.approx(ladder[k + kmax], abs=1e-6)


def test_bathspec_constructors():
    b = BathSpec.from_beta(math.inf, OMEGA0)
    assert b.nbar == 0.0
    b = BathSpec.from_nbar(0.5, OMEGA0)
    assert 1.0 / math.expm1(b.beta * OMEGA0) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        BathSpec.from_nbar(-0.1, OMEGA0)
