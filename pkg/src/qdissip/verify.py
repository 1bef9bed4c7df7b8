"""Differential verification suite.

Each check pits a closed-form result against an independent backend
(stepped unitary product, RK4 Lindblad integration, or finite
differences) and emits machine-readable records
{scenario, quantity, t, analytic, oracle, abs_err, tolerance, passed}.
"""

from __future__ import annotations

import math

import numpy as np

from .coupling import (
    ConstantProfile,
    ExponentialProfile,
    LindbladMatchedProfile,
    thermalized_exponential,
)
from .numerics import expm_hermitian, fock_operators, kron, partial_trace, thermal_state
from .oracle import LindbladPlan, SteppedEvolutionPlan, evolve_lindblad, evolve_stepped
from .oscillator import BathSpec, OscillatorScenario
from .twobath import TwoBathScenario
from .twolevel import (
    DephasingScenario,
    QubitBathSpec,
    TwoLevelState,
    evolution_matrix,
    evolved_trace_distance,
    markov_rate,
    reduced_qubit,
)

__all__ = [
    "oscillator_pair_builder",
    "three_mode_builder",
    "qubit_pair_builder",
    "dephasing_builder",
    "run_suite",
    "SUITES",
]

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


# ---------------------------------------------------------------------------
# Hamiltonian step builders for the oracle


def oscillator_pair_builder(omega0, ncut):
    """Main + bath oscillator with number-conserving bilinear coupling."""
    a, ad, n = fock_operators(ncut)
    eye = np.eye(ncut)
    h0 = omega0 * (kron(n, eye) + kron(eye, n))
    coup = kron(a, ad) + kron(ad, a)
    return lambda t, dt, dG: h0 * dt + coup * dG


def three_mode_builder(omega, ncut):
    """One oscillator symmetrically coupled to two bath oscillators."""
    a, ad, n = fock_operators(ncut)
    eye = np.eye(ncut)
    na = kron(kron(n, eye), eye)
    nb = kron(kron(eye, n), eye)
    nc = kron(kron(eye, eye), n)
    coup = (
        kron(kron(a, ad), eye)
        + kron(kron(ad, a), eye)
        + kron(kron(a, eye), ad)
        + kron(kron(ad, eye), a)
    )
    h0 = omega * (na + nb + nc)
    return lambda t, dt, dG: h0 * dt + coup * dG


def qubit_pair_builder(omega0):
    """Qubit + twin-qubit with excitation-exchange coupling."""
    eye = np.eye(2)
    h0 = (omega0 / 2.0) * (kron(SIGMA_Z, eye) + kron(eye, SIGMA_Z))
    sp = SIGMA_MINUS.conj().T
    coup = kron(SIGMA_MINUS, sp) + kron(sp, SIGMA_MINUS)
    return lambda t, dt, dG: h0 * dt + coup * dG


def dephasing_builder(omega0, omega, ncut):
    """Qubit coupled through sigma_z to a single bosonic mode."""
    b, bd, n = fock_operators(ncut)
    eye2 = np.eye(2)
    eyen = np.eye(ncut)
    h0 = (omega0 / 2.0) * kron(SIGMA_Z, eyen) + omega * kron(eye2, n)
    coup = kron(SIGMA_Z, b + bd)
    return lambda t, dt, dG: h0 * dt + coup * dG


# ---------------------------------------------------------------------------
# Individual checks; each returns a list of record dicts.


def _record(scenario, quantity, t, analytic, oracle, tolerance):
    analytic = complex(analytic)
    oracle = complex(oracle)
    err = abs(analytic - oracle)
    return {
        "scenario": scenario,
        "quantity": quantity,
        "t": float(t),
        "analytic": [analytic.real, analytic.imag],
        "oracle": [oracle.real, oracle.imag],
        "abs_err": err,
        "tolerance": tolerance,
        "passed": err <= tolerance,
    }


def check_coefficient_normalization(gamma=0.2, omega0=1.0, n_times=1000, tol=1e-12):
    """|f|^2 + |h|^2 = 1 across all built-in profile kinds."""
    profiles = {
        "exponential": thermalized_exponential(gamma),
        "lindblad_matched": LindbladMatchedProfile(gamma=gamma),
        "constant": ConstantProfile(g0=0.3 * omega0),
    }
    bath = BathSpec.from_nbar(0.5, omega0)
    records = []
    ts = np.linspace(0.0, 10.0 / gamma, n_times)
    for name, profile in profiles.items():
        scen = OscillatorScenario(omega0=omega0, profile=profile, bath=bath)
        worst_t, worst = 0.0, 0.0
        for t in ts:
            f, h = scen.fh(t)
            dev = abs(abs(f) ** 2 + abs(h) ** 2 - 1.0)
            if dev > worst:
                worst_t, worst = t, dev
        records.append(
            _record(f"fh_normalization/{name}", "|f|^2+|h|^2", worst_t, 1.0 + worst, 1.0, tol)
        )
    return records


def check_population_oracle(
    gamma=0.2, omega0=1.0, nbar_a=0.8, nbar_b=0.3, ncut=30, steps=16, nmax=10, tol=1e-6
):
    """Thermal populations vs stepped unitary + partial trace."""
    profile = thermalized_exponential(gamma)
    scen = OscillatorScenario(
        omega0=omega0,
        profile=profile,
        bath=BathSpec.from_nbar(nbar_b, omega0),
        nbar_a=nbar_a,
    )
    taus = (0.25, 0.5, 1.0, 2.0, 4.0)
    rho0 = kron(thermal_state(ncut, nbar_a), thermal_state(ncut, nbar_b))
    plan = SteppedEvolutionPlan(
        builder=oscillator_pair_builder(omega0, ncut),
        profile=profile,
        t_final=max(taus) / gamma,
        steps=steps,
        initial=rho0,
    )
    snapshots = evolve_stepped(plan, checkpoints=[tau / gamma for tau in taus])
    records = []
    for tau in taus:
        t = tau / gamma
        reduced = partial_trace(snapshots[t], [ncut, ncut], 0)
        pops = np.real(np.diag(reduced))
        for n in range(nmax + 1):
            records.append(
                _record(
                    f"oscillator_population/tau={tau}",
                    f"P_{n}",
                    t,
                    scen.population(n, t),
                    pops[n],
                    tol,
                )
            )
    return records


def check_lindblad_consistency(
    gamma=0.2, omega0=1.0, nbar_a=0.8, nbar_b=0.3, ncut=30, steps=4000, tol=1e-6
):
    """Mean occupation with the Lindblad-matched profile vs RK4 backend."""
    profile = LindbladMatchedProfile(gamma=gamma)
    scen = OscillatorScenario(
        omega0=omega0,
        profile=profile,
        bath=BathSpec.from_nbar(nbar_b, omega0),
        nbar_a=nbar_a,
    )
    taus = (0.5, 1.0, 2.0, 4.0)
    a, ad, n = fock_operators(ncut)
    plan = LindbladPlan(
        h0=omega0 * n,
        collapse_ops=((a, gamma * (nbar_b + 1.0)), (ad, gamma * nbar_b)),
        t_final=max(taus) / gamma,
        steps=steps,
        initial=thermal_state(ncut, nbar_a),
    )
    snapshots = evolve_lindblad(plan, checkpoints=[tau / gamma for tau in taus])
    records = []
    for tau in taus:
        t = tau / gamma
        occ = float(np.real(np.trace(n @ snapshots[t])))
        # analytic closed form and its rate-equation solution must agree
        exact = nbar_a * math.exp(-gamma * t) + nbar_b * (1.0 - math.exp(-gamma * t))
        records.append(
            _record(
                f"lindblad_mean_occupation/tau={tau}",
                "closed_form_vs_rate_eq",
                t,
                scen.mean_occupation(t),
                exact,
                1e-12,
            )
        )
        records.append(
            _record(
                f"lindblad_mean_occupation/tau={tau}",
                "closed_form_vs_rk4",
                t,
                scen.mean_occupation(t),
                occ,
                tol,
            )
        )
    return records


def check_two_bath_oracle(gamma=0.2, omega=1.0, ncut=8, steps=16, tol=1e-6):
    """Three-mode Heisenberg coefficients vs stepped propagator."""
    profile = thermalized_exponential(gamma, mode="two_bath")
    scen = TwoBathScenario(
        omega=omega,
        profile=profile,
        bath1=BathSpec.from_nbar(0.4, omega),
        bath2=BathSpec.from_nbar(0.1, omega),
    )
    a, ad, _ = fock_operators(ncut)
    eye = np.eye(ncut)
    a_full = kron(kron(a, eye), eye)
    builder = three_mode_builder(omega, ncut)
    records = []
    for tau in (0.5, 1.0, 2.0):
        t = tau / gamma
        # accumulate the stepped unitary, then read off Heisenberg coefficients
        u = np.eye(ncut**3, dtype=complex)
        t0 = 0.0
        dt = t / steps
        for k in range(steps):
            t1 = (k + 1) * dt
            dG = profile.G_increment(t0, t1)
            phi = builder(t0 + dt / 2.0, dt, dG)
            u = expm_hermitian(phi, -1j) @ u
            t0 = t1
        a_t = u.conj().T @ a_full @ u
        vac = np.zeros(ncut**3)
        vac[0] = 1.0

        def basis(i, j, k):
            v = np.zeros((ncut, ncut, ncut))
            v[i, j, k] = 1.0
            return v.reshape(-1)

        c_a_or = vac @ a_t @ basis(1, 0, 0)
        c_b_or = vac @ a_t @ basis(0, 1, 0)
        c_c_or = vac @ a_t @ basis(0, 0, 1)
        c_a, c_b, c_c = scen.mode_coefficients(t)
        records.append(_record(f"two_bath/tau={tau}", "c_a", t, c_a, c_a_or, tol))
        records.append(_record(f"two_bath/tau={tau}", "c_b", t, c_b, c_b_or, tol))
        records.append(_record(f"two_bath/tau={tau}", "c_c", t, c_c, c_c_or, tol))
    return records


def check_two_level_oracle(gamma=0.2, omega0=1.0, steps=64, tol=1e-8):
    """Reduced qubit and evolution matrix vs 4x4 stepped propagator."""
    profile = thermalized_exponential(gamma)
    initial = TwoLevelState(a=0.7, b=0.3, c=0.3)
    bath = QubitBathSpec(p_e=0.2, p_g=0.8)
    rho0 = kron(initial.matrix(), np.diag([bath.p_e, bath.p_g]).astype(complex))
    builder = qubit_pair_builder(omega0)
    records = []
    for tau in (0.5, 1.0, 2.0):
        t = tau / gamma
        plan = SteppedEvolutionPlan(
            builder=builder, profile=profile, t_final=t, steps=steps, initial=rho0
        )
        rho_t = evolve_stepped(plan)
        red = partial_trace(rho_t, [2, 2], 0)
        analytic = reduced_qubit(initial, bath, omega0, profile, t)
        records.append(
            _record(f"two_level/tau={tau}", "rho_ee", t, analytic.a, red[0, 0].real, tol)
        )
        records.append(
            _record(f"two_level/tau={tau}", "coherence", t, analytic.c, red[1, 0], tol)
        )
        # unitary consistency: W rho W^dag vs stepped evolution of the full pair
        w = evolution_matrix(omega0, profile, t)
        rho_w = w @ rho0 @ w.conj().T
        records.append(
            _record(
                f"two_level/tau={tau}",
                "evolution_matrix_vs_stepped",
                t,
                0.0,
                float(np.max(np.abs(rho_w - rho_t))),
                tol,
            )
        )
    return records


def check_spontaneous_emission(gamma=0.2, omega0=1.0, steps=4000, tol=1e-6):
    """Excited decay e^{-gamma t} vs the sigma_minus Lindblad backend."""
    profile = LindbladMatchedProfile(gamma=gamma)
    initial = TwoLevelState(a=1.0, b=0.0, c=0.0)
    bath = QubitBathSpec(p_e=0.0, p_g=1.0)
    taus = (0.5, 1.0, 2.0, 4.0)
    plan = LindbladPlan(
        h0=(omega0 / 2.0) * SIGMA_Z,
        collapse_ops=((SIGMA_MINUS, gamma),),
        t_final=max(taus) / gamma,
        steps=steps,
        initial=initial.matrix(),
    )
    snapshots = evolve_lindblad(plan, checkpoints=[tau / gamma for tau in taus])
    records = []
    for tau in taus:
        t = tau / gamma
        analytic = reduced_qubit(initial, bath, omega0, profile, t).a
        records.append(
            _record(
                f"spontaneous_emission/tau={tau}",
                "rho_ee_closed_vs_exp",
                t,
                analytic,
                math.exp(-gamma * t),
                1e-12,
            )
        )
        records.append(
            _record(
                f"spontaneous_emission/tau={tau}",
                "rho_ee_closed_vs_rk4",
                t,
                analytic,
                snapshots[t][0, 0].real,
                tol,
            )
        )
    return records


def check_dephasing_oracle(
    gamma=0.2, omega=1.0, omega0=0.5, g0=1.0, betas=(math.inf, 2.0), ncut=20,
    steps_per_tau=8000, tol=1e-6
):
    """Dephasing coherence factor vs qubit (x) Fock stepped oracle."""
    profile = ExponentialProfile(g0=g0, gamma=gamma)
    initial = TwoLevelState(a=0.5, b=0.5, c=0.5)
    records = []
    taus = (0.5, 1.0, 3.0)
    for beta in betas:
        scen = DephasingScenario(omega0=omega0, omega=omega, profile=profile, beta=beta)
        nbar = 0.0 if beta == math.inf else 1.0 / math.expm1(beta * omega)
        rho0 = kron(initial.matrix(), thermal_state(ncut, nbar, tail_threshold=1e-12))
        t_final = max(taus) / gamma
        steps = int(steps_per_tau * max(taus))
        plan = SteppedEvolutionPlan(
            builder=dephasing_builder(omega0, omega, ncut),
            profile=profile,
            t_final=t_final,
            steps=steps,
            initial=rho0,
        )
        snapshots = evolve_stepped(plan, checkpoints=[tau / gamma for tau in taus])
        for tau in taus:
            t = tau / gamma
            red = partial_trace(snapshots[t], [2, ncut], 0)
            analytic = scen.reduced(initial, t)
            label = "inf" if beta == math.inf else f"{beta:g}"
            records.append(
                _record(f"dephasing/beta={label}/tau={tau}", "coherence", t, analytic.c,
                        red[1, 0], tol)
            )
    return records


def check_heat_moment(gamma=0.2, omega0=1.0, nbar_a=0.8, nbar_b=0.3, kmax=40, tol=1e-6):
    """First moment of the inverted heat ladder vs finite differences."""
    profile = thermalized_exponential(gamma)
    scen = OscillatorScenario(
        omega0=omega0, profile=profile, bath=BathSpec.from_nbar(nbar_b, omega0),
        nbar_a=nbar_a,
    )
    records = []
    for tau in (0.5, 1.0, 3.0):
        t = tau / gamma
        dist = scen.heat_distribution(t, kmax)
        delta = 1e-5 / omega0
        deriv = (scen.heat_char_fn(delta, t) - scen.heat_char_fn(-delta, t)) / (2 * delta)
        mean_fd = (-1j * deriv).real
        records.append(
            _record(f"heat/tau={tau}", "mean_heat", t, dist.mean_heat(), mean_fd, tol)
        )
        records.append(
            _record(f"heat/tau={tau}", "normalization", t, float(np.sum(dist.probs)), 1.0, 1e-9)
        )
    return records


def check_markov_rate(gamma=0.2, omega0=1.0, n_pairs=20, seed=20240817, tol=1e-5):
    """Analytic distance rate vs central finite differences (relative)."""
    rng = np.random.default_rng(seed)
    bath = QubitBathSpec(p_e=0.3, p_g=0.7)
    profiles = {
        "exponential": thermalized_exponential(gamma),
        "lindblad_matched": LindbladMatchedProfile(gamma=gamma),
    }
    records = []
    for name, profile in profiles.items():
        worst = 0.0
        worst_t = 0.0
        for _ in range(n_pairs):
            s1 = _random_state(rng)
            s2 = _random_state(rng)
            t = float(rng.uniform(0.3, 4.0)) / gamma
            sigma = markov_rate(s1, s2, bath, omega0, profile, t)
            delta = 1e-6 / gamma
            dp = evolved_trace_distance(s1, s2, bath, omega0, profile, t + delta)
            dm = evolved_trace_distance(s1, s2, bath, omega0, profile, t - delta)
            fd = (dp - dm) / (2 * delta)
            rel = abs(sigma - fd) / max(abs(fd), 1e-12)
            if rel > worst:
                worst, worst_t = rel, t
        records.append(
            _record(f"markov_rate/{name}", "relative_fd_error", worst_t, worst, 0.0, tol)
        )
    return records


def _random_state(rng):
    a = float(rng.uniform(0.0, 1.0))
    cmax = 0.5 * math.sqrt(max(1.0 - (2 * a - 1.0) ** 2, 0.0))
    r = float(rng.uniform(0.0, cmax))
    phi = float(rng.uniform(0.0, 2 * math.pi))
    return TwoLevelState(a=a, b=1.0 - a, c=r * complex(math.cos(phi), math.sin(phi)))


# ---------------------------------------------------------------------------
# Suites

SUITES = {
    "default": {
        "population": dict(ncut=30, steps=16),
        "dephasing": dict(ncut=20, steps_per_tau=8000, betas=(math.inf, 2.0)),
        "two_bath": dict(ncut=8),
    },
    "fast": {
        "population": dict(ncut=16, steps=16, nbar_a=0.3, nbar_b=0.1),
        "dephasing": dict(ncut=16, steps_per_tau=2000, betas=(math.inf,)),
        "two_bath": dict(ncut=6),
    },
}


def run_suite(name="default"):
    """Run every differential check; returns a deterministic report dict."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    cfg = SUITES[name]
    records = []
    records += check_coefficient_normalization()
    records += check_population_oracle(**cfg["population"])
    records += check_lindblad_consistency()
    records += check_two_bath_oracle(**cfg["two_bath"])
    records += check_two_level_oracle()
    records += check_spontaneous_emission()
    records += check_dephasing_oracle(**cfg["dephasing"])
    records += check_heat_moment()
    records += check_markov_rate()
    n_failed = sum(1 for r in records if not r["passed"])
    return {
        "suite": name,
        "n_checks": len(records),
        "n_failed": n_failed,
        "passed": n_failed == 0,
        "records": records,
    }
