"""Voyage speed optimization for just-in-time arrival.

Compiles per-sector speed planning under a quadratic arrival-time penalty
into pseudo-Boolean/QUBO/Ising form and solves it with an exhaustive oracle,
simulated annealing, and simulated quantum algorithms (layered phase/mixer
circuits and interpolated adiabatic evolution).
"""

from .scenario import (
    CostBreakdown,
    DecodedPlan,
    DEFAULT_ENCODING,
    EncodingConfig,
    FuelModel,
    RouteScenario,
    Sector,
    decode,
    encode_levels,
    ground_speed_coefficients,
    load_scenario,
    parse_scenario,
    replan,
    scenario_cost,
    validate_scenario,
)
from .polynomial import (
    AuxVar,
    DEFAULT_SPEED_ENCODING,
    IsingModel,
    PlainVar,
    PseudoBooleanPolynomial,
    UBit,
    VariableMap,
    WBit,
    build_linear_qubo,
    build_quadratic_hobo,
    default_reciprocal_penalty,
    default_reduction_weight,
    evaluate_on_integers,
    export_ising,
    export_problem,
    import_problem,
    ising_energy,
    quadratize,
    to_ising,
)
from .solvers import (
    AnnealConfig,
    BRUTE_FORCE_LIMIT,
    SolveResult,
    brute_force,
    flip_delta,
    landscape,
    resolve_temperatures,
    simulated_annealing,
    write_landscape_csv,
)
from .quantum import (
    AdiabaticConfig,
    DiagonalHamiltonian,
    QUBIT_LIMIT,
    QaoaParams,
    StateVector,
    adiabatic_evolve,
    apply_mixer,
    apply_phase,
    build_diagonal,
    expectation_value,
    ground_overlap,
    init_uniform,
    qaoa_expectation,
    qaoa_optimize,
    qaoa_state,
    sample,
)

__all__ = [
    "AdiabaticConfig",
    "AnnealConfig",
    "AuxVar",
    "BRUTE_FORCE_LIMIT",
    "CostBreakdown",
    "DEFAULT_ENCODING",
    "DEFAULT_SPEED_ENCODING",
    "DecodedPlan",
    "DiagonalHamiltonian",
    "EncodingConfig",
    "FuelModel",
    "IsingModel",
    "PlainVar",
    "PseudoBooleanPolynomial",
    "QUBIT_LIMIT",
    "QaoaParams",
    "RouteScenario",
    "Sector",
    "SolveResult",
    "StateVector",
    "UBit",
    "VariableMap",
    "WBit",
    "adiabatic_evolve",
    "apply_mixer",
    "apply_phase",
    "brute_force",
    "build_diagonal",
    "build_linear_qubo",
    "build_quadratic_hobo",
    "decode",
    "default_reciprocal_penalty",
    "default_reduction_weight",
    "encode_levels",
    "evaluate_on_integers",
    "expectation_value",
    "export_ising",
    "export_problem",
    "flip_delta",
    "ground_overlap",
    "ground_speed_coefficients",
    "import_problem",
    "init_uniform",
    "ising_energy",
    "landscape",
    "load_scenario",
    "parse_scenario",
    "qaoa_expectation",
    "qaoa_optimize",
    "qaoa_state",
    "quadratize",
    "replan",
    "resolve_temperatures",
    "sample",
    "scenario_cost",
    "simulated_annealing",
    "to_ising",
    "validate_scenario",
    "write_landscape_csv",
]

__version__ = "0.1.0"
