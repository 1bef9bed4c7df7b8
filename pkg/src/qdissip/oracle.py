"""Brute-force backends used to differentially test every closed form.

Two independent routes: a stepped time-ordered unitary product on a
truncated product space, and a fixed-step RK4 integrator for the
Lindblad master equation.  The stepped product feeds coupling terms the
exact increment of G over each step, so schedules whose g(t) diverges at
the origin are handled without ever evaluating g there; for Hamiltonian
families that commute at different times this reproduces the exact
time-ordered result at any step count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coupling import CouplingProfile
from .numerics import check_density_matrix, expm_hermitian, is_hermitian

__all__ = [
    "SteppedEvolutionPlan",
    "LindbladPlan",
    "evolve_stepped",
    "evolve_lindblad",
    "Comparison",
    "compare",
    "default_step_count",
]


def default_step_count(t_final, max_freq):
    """Step count keeping phase error per period below ~1e-6."""
    return max(2000, math.ceil(2000.0 * t_final * max_freq / (2.0 * math.pi)))


@dataclass(frozen=True)
class SteppedEvolutionPlan:
    """Stepped unitary evolution of rho under a time-dependent Hamiltonian.

    ``builder(t_mid, dt, dG)`` returns the Hermitian step generator Phi
    (already scaled: free parts times dt, coupling parts times the exact
    G-increment dG); the step unitary is exp(-i * Phi).
    """

    builder: Callable[[float, float, float], np.ndarray]
    profile: CouplingProfile
    t_final: float
    steps: int
    initial: np.ndarray

    def __post_init__(self):
        if self.steps < 10:
            raise ValueError("steps must be >= 10")
        if self.t_final <= 0:
            raise ValueError("t_final must be > 0")


def evolve_stepped(plan, checkpoints=None):
    """Evolve plan.initial to t_final; optionally record at checkpoints.

    Checkpoints must lie on the uniform step grid.  Returns the final
    density matrix, or a dict {time: rho} when checkpoints are given.
    """
    rho = check_density_matrix(plan.initial, trace_tol=1e-9)
    dt = plan.t_final / plan.steps
    grid = {}
    if checkpoints is not None:
        for tc in checkpoints:
            idx = tc / dt
            if abs(idx - round(idx)) > 1e-9:
                raise ValueError(f"checkpoint {tc} not on the step grid (dt={dt})")
            grid[int(round(idx))] = tc
    recorded = {}
    if 0 in grid:
        recorded[grid[0]] = rho.copy()
    t0 = 0.0
    for k in range(plan.steps):
        t1 = (k + 1) * dt
        dG = plan.profile.G_increment(t0, t1)
        phi = np.asarray(plan.builder(t0 + dt / 2.0, dt, dG), dtype=complex)
        if not is_hermitian(phi, 1e-10):
            raise ValueError("step generator is not Hermitian")
        u = expm_hermitian(phi, -1j)
        rho = u @ rho @ u.conj().T
        t0 = t1
        if k + 1 in grid:
            recorded[grid[k + 1]] = rho.copy()
    drift = abs(np.trace(rho) - 1.0)
    if drift > 1e-10:
        raise ValueError(f"trace drift {drift:.3e} beyond 1e-10")
    if checkpoints is not None:
        return recorded
    return rho


@dataclass(frozen=True)
class LindbladPlan:
    """Reference Lindblad evolution with constant H0 and collapse operators."""

    h0: np.ndarray
    collapse_ops: Sequence = field(default_factory=tuple)  # (operator, rate) pairs
    t_final: float = 1.0
    steps: int = 2000
    initial: np.ndarray = None

    def __post_init__(self):
        for _, rate in self.collapse_ops:
            if rate < 0:
                raise ValueError("collapse rates must be >= 0")
        if self.t_final <= 0:
            raise ValueError("t_final must be > 0")


def _lindblad_rhs(rho, h0, ops):
    out = -1j * (h0 @ rho - rho @ h0)
    for op, opd, opd_op, rate in ops:
        out += rate * (op @ rho @ opd - 0.5 * (opd_op @ rho + rho @ opd_op))
    return out


def evolve_lindblad(plan, checkpoints=None):
    """Classic fixed-step RK4 integration of the Lindblad master equation."""
    rho = check_density_matrix(plan.initial, trace_tol=1e-9)
    h0 = np.asarray(plan.h0, dtype=complex)
    ops = []
    for op, rate in plan.collapse_ops:
        op = np.asarray(op, dtype=complex)
        opd = op.conj().T
        ops.append((op, opd, opd @ op, float(rate)))
    dt = plan.t_final / plan.steps
    grid = {}
    if checkpoints is not None:
        for tc in checkpoints:
            idx = tc / dt
            if abs(idx - round(idx)) > 1e-9:
                raise ValueError(f"checkpoint {tc} not on the step grid (dt={dt})")
            grid[int(round(idx))] = tc
    recorded = {}
    if 0 in grid:
        recorded[grid[0]] = rho.copy()
    for k in range(plan.steps):
        k1 = _lindblad_rhs(rho, h0, ops)
        k2 = _lindblad_rhs(rho + 0.5 * dt * k1, h0, ops)
        k3 = _lindblad_rhs(rho + 0.5 * dt * k2, h0, ops)
        k4 = _lindblad_rhs(rho + dt * k3, h0, ops)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if k + 1 in grid:
            recorded[grid[k + 1]] = rho.copy()
    drift = abs(np.trace(rho) - 1.0)
    if drift > 1e-9:
        raise ValueError(f"trace drift {drift:.3e} beyond 1e-9")
    if checkpoints is not None:
        return recorded
    return rho


@dataclass(frozen=True)
class Comparison:
    """Error report between an analytic series and an oracle series."""

    scenario: str
    quantity: str
    max_abs_err: float
    max_rel_err: float
    worst_index: int
    tolerance: float

    @property
    def passed(self):
        return self.max_abs_err <= self.tolerance

    def to_record(self):
        return {
            "scenario": self.scenario,
            "quantity": self.quantity,
            "max_abs_err": self.max_abs_err,
            "max_rel_err": self.max_rel_err,
            "worst_index": self.worst_index,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }

    def to_json(self):
        return json.dumps(self.to_record(), sort_keys=True)


def compare(analytic, oracle, scenario="", quantity="", tolerance=math.inf):
    """Elementwise error report; deterministic and machine-readable."""
    analytic = np.asarray(analytic, dtype=complex)
    oracle = np.asarray(oracle, dtype=complex)
    if analytic.shape != oracle.shape:
        raise ValueError(f"length mismatch {analytic.shape} vs {oracle.shape}")
    abs_err = np.abs(analytic - oracle)
    idx = int(np.argmax(abs_err))
    scale = np.maximum(np.abs(oracle), 1e-300)
    rel = abs_err / scale
    return Comparison(
        scenario=scenario,
        quantity=quantity,
        max_abs_err=float(abs_err[idx]),
        max_rel_err=float(rel.max()),
        worst_index=idx,
        tolerance=tolerance,
    )
