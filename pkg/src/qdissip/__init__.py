"""Open quantum system dynamics through time-dependent bilinear couplings.

Closed-form results for dissipative oscillators, two-bath setups,
amplitude-damped and dephasing two-level systems, each differentially
verified against brute-force truncated-Fock evolution and a reference
Lindblad integrator.
"""

from .coupling import (
    ConstantProfile,
    CouplingProfile,
    ExponentialProfile,
    LindbladMatchedProfile,
    TabulatedProfile,
    thermalized_exponential,
)
from .numerics import (
    TruncationError,
    coherent_state,
    expm_hermitian,
    fock_operators,
    kron,
    partial_trace,
    thermal_state,
)
from .oracle import Comparison, LindbladPlan, SteppedEvolutionPlan, compare, evolve_lindblad, evolve_stepped
from .oscillator import BathSpec, HeatDistribution, OscillatorScenario
from .twobath import TwoBathScenario
from .twolevel import (
    DephasingScenario,
    QubitBathSpec,
    TwoLevelState,
    evolution_matrix,
    evolved_trace_distance,
    markov_rate,
    reduced_qubit,
    trace_distance,
)

__version__ = "0.1.0"
