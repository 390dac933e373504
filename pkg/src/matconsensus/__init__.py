"""Consensus analysis and simulation for time-varying networks whose edges
carry matrix-valued weights.

The package models undirected graphs with symmetric positive
(semi-)definite ``d x d`` edge weights, piecewise-constant switching between
such graphs, and the diffusion dynamics ``x' = -L(t) x`` they induce.  It
decides average consensus for periodic switching exactly, checks
necessary/sufficient conditions over finite horizons with machine-checkable
certificates, and propagates trajectories exactly via spectral
decomposition, with a fixed-step Runge-Kutta integrator as an independent
reference.
"""

from .analysis import (
    ContractionReport,
    Decision,
    HorizonExhausted,
    NullSpaceMatch,
    NullSpaceObstruction,
    PositiveSpanningTree,
    TransitionMatrix,
    UniformContraction,
    Verdict,
    Window,
    contraction_factor,
    necessary_condition_scan,
    periodic_consensus_verdict,
    positive_spanning_tree,
    segment_laplacian_sum,
    sufficient_condition_certificate,
    transition_matrix,
)
from .errors import (
    AsymmetricWeightError,
    BadThresholdError,
    DimensionMismatchError,
    DwellOutOfBoundsError,
    EmptySignalError,
    EmptySpanError,
    IndefiniteWeightError,
    IndexOrderError,
    IndexOutOfRangeError,
    InvalidSignalError,
    ModelError,
    NegativeDurationError,
    NotEigenvectorsError,
    NotPositiveSemidefiniteError,
    NotSymmetricError,
    OracleDivergenceError,
    PeriodMismatchError,
    SelfLoopError,
    TimeOutOfRangeError,
    TooFewPartitionsError,
    ZeroWeightError,
)
from .graphs import (
    BlockLaplacian,
    GraphDimensions,
    MatrixWeightedGraph,
    WeightMatrix,
    adjacency_matrix,
    degree_matrix,
    laplacian,
    new_graph,
    set_edge,
)
from .scenario import (
    RunSettings,
    Scenario,
    ScenarioError,
    load_scenario,
    parse_scenario,
    scenario_to_dict,
)
from .simulator import (
    Trajectory,
    average_consensus_point,
    disagreement_trace,
    max_oracle_deviation,
    propagate_segment,
    rk4_reference,
    simulate,
)
from .spectral import (
    ConsensusSubspace,
    Definiteness,
    NullSpaceReport,
    SpectrumReport,
    classify_definiteness,
    consensus_subspace,
    matrix_exponential_symmetric,
    null_space_basis,
    rayleigh_extremes,
    symmetric_eigen,
)
from .switching import (
    IntegralNetwork,
    PeriodicSignal,
    SwitchingSignal,
    build_periodic_signal,
    build_switching_signal,
    graph_at,
    integral_laplacian,
    integral_network,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances

__version__ = "0.1.0"

__all__ = [
    "AsymmetricWeightError",
    "BadThresholdError",
    "BlockLaplacian",
    "ConsensusSubspace",
    "ContractionReport",
    "DEFAULT_TOLERANCES",
    "Decision",
    "Definiteness",
    "DimensionMismatchError",
    "DwellOutOfBoundsError",
    "EmptySignalError",
    "EmptySpanError",
    "GraphDimensions",
    "HorizonExhausted",
    "IndefiniteWeightError",
    "IndexOrderError",
    "IndexOutOfRangeError",
    "IntegralNetwork",
    "InvalidSignalError",
    "MatrixWeightedGraph",
    "ModelError",
    "NegativeDurationError",
    "NotEigenvectorsError",
    "NotPositiveSemidefiniteError",
    "NotSymmetricError",
    "NullSpaceMatch",
    "NullSpaceObstruction",
    "NullSpaceReport",
    "OracleDivergenceError",
    "PeriodMismatchError",
    "PeriodicSignal",
    "PositiveSpanningTree",
    "RunSettings",
    "Scenario",
    "ScenarioError",
    "SelfLoopError",
    "SpectrumReport",
    "SwitchingSignal",
    "TimeOutOfRangeError",
    "Tolerances",
    "TooFewPartitionsError",
    "Trajectory",
    "TransitionMatrix",
    "UniformContraction",
    "Verdict",
    "WeightMatrix",
    "Window",
    "ZeroWeightError",
    "adjacency_matrix",
    "average_consensus_point",
    "build_periodic_signal",
    "build_switching_signal",
    "classify_definiteness",
    "consensus_subspace",
    "contraction_factor",
    "degree_matrix",
    "disagreement_trace",
    "graph_at",
    "integral_laplacian",
    "integral_network",
    "laplacian",
    "load_scenario",
    "matrix_exponential_symmetric",
    "max_oracle_deviation",
    "necessary_condition_scan",
    "new_graph",
    "null_space_basis",
    "parse_scenario",
    "periodic_consensus_verdict",
    "positive_spanning_tree",
    "propagate_segment",
    "rayleigh_extremes",
    "rk4_reference",
    "scenario_to_dict",
    "segment_laplacian_sum",
    "set_edge",
    "simulate",
    "sufficient_condition_certificate",
    "symmetric_eigen",
    "transition_matrix",
]
