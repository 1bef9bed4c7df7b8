"""Figure rendering for the CLI report path.

Each figure id maps to a deterministic time-series set on a tau = gamma*t
grid (step 0.01); the CLI writes the series as CSV and renders a PNG
next to it.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .coupling import thermalized_exponential, ExponentialProfile
from .oscillator import BathSpec, OscillatorScenario
from .twolevel import DephasingScenario

__all__ = ["FIGURE_IDS", "figure_series", "render_figure"]

FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5", "fig8")

_TAU_MAX = 5.0
_TAU_STEP = 0.01


def _oscillator_scenario(gamma=0.2, omega0=1.0, alpha0=2.0, nbar_b=0.0):
    return OscillatorScenario(
        omega0=omega0,
        profile=thermalized_exponential(gamma * omega0),
        bath=BathSpec.from_nbar(nbar_b, omega0),
        alpha0=alpha0,
    )


def figure_series(figure_id):
    """Return (columns, rows) for one of the supported figures."""
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}; choose from {FIGURE_IDS}")
    taus = np.arange(0.0, _TAU_MAX + _TAU_STEP / 2, _TAU_STEP)
    gamma = 0.2  # in units of omega0 (or omega for fig8)
    if figure_id == "fig2":
        cols = ["tau", "g_scaled", "cos2G"]
        rows = [
            (tau, math.exp(-tau), math.sin((math.pi / 2) * math.exp(-tau)) ** 2)
            for tau in taus
        ]
    elif figure_id == "fig3":
        scen = _oscillator_scenario()
        cols = ["tau", "re_alpha", "im_alpha"]
        rows = []
        for tau in taus:
            alpha = scen.husimi_peak(tau / gamma)
            rows.append((tau, alpha.real, alpha.imag))
    elif figure_id == "fig4":
        scen = _oscillator_scenario()
        x0 = math.sqrt(2.0 / (scen.mass * scen.omega0))
        cols = ["tau", "x_over_x0"]
        rows = [(tau, scen.position(tau / gamma) / x0) for tau in taus]
    elif figure_id == "fig5":
        scen = _oscillator_scenario()
        cols = ["tau", "energy_over_omega0"]
        rows = [(tau, scen.energy(tau / gamma) / scen.omega0) for tau in taus]
    else:  # fig8
        scen = DephasingScenario(
            omega0=1.0,
            omega=1.0,
            profile=ExponentialProfile(g0=1.0, gamma=gamma),
            beta=math.inf,
        )
        cols = ["tau", "coherence_norm2"]
        rows = [(tau, scen.coherence_factor(tau / gamma) ** 2) for tau in taus]
    return cols, rows


_LABELS = {
    "g_scaled": r"$g(t)/g(0)$",
    "cos2G": r"$\cos^2 G(t)$",
    "re_alpha": r"Re $\alpha(t)$",
    "im_alpha": r"Im $\alpha(t)$",
    "x_over_x0": r"$x(t)/x_0$",
    "energy_over_omega0": r"$E(t)/\omega_0$",
    "coherence_norm2": r"$|\rho_{12}(t)/\rho_{12}(0)|^2$",
}


def render_figure(figure_id, columns, rows, path):
    """Render a time-series set to a PNG file."""
    data = np.asarray(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    if figure_id == "fig3":
        ax.plot(data[:, 1], data[:, 2], lw=1.2)
        ax.set_xlabel(_LABELS["re_alpha"])
        ax.set_ylabel(_LABELS["im_alpha"])
        ax.set_aspect("equal", adjustable="datalim")
    else:
        for j, col in enumerate(columns[1:], start=1):
            ax.plot(data[:, 0], data[:, j], lw=1.2, label=_LABELS.get(col, col))
        ax.set_xlabel(r"$\tau=\gamma t$")
        if len(columns) > 2:
            ax.legend(frameon=False)
        else:
            ax.set_ylabel(_LABELS.get(columns[1], columns[1]))
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
