"""Node subsampling and reconstruction for graph signals from a Laplacian-polynomial generator."""

from .errors import (
    ConfigError,
    GraphSubsampleError,
    IsolatedNodeError,
    NumericalError,
    RankDeficientSelectionError,
    SingularOperatorError,
    StageError,
    SvdConvergenceError,
)
from .experiment import ExperimentConfig, run_experiment, run_suite, sweep_alpha
from .generator import (
    GeneratorSpec,
    SignalSpec,
    build_generator,
    generate_signals,
    signal_correlation,
    synthesize_coefficients,
)
from .graph import (
    GraphTemplate,
    WeightedGraph,
    build_graph,
    normalized_laplacian,
    second_smallest_singular_value,
)
from .lowrank import (
    LowRankFactorization,
    RankSelection,
    approx_samp,
    approx_svd,
    compute_f,
    select_rank,
)
from .numerics import SvdResult, solve_square, svd
from .reconstruct import (
    ReconstructionReport,
    SubsamplingOperator,
    error_report,
    reconstruct,
    subsample,
)
from .selection import (
    SelectionResult,
    brute_force_select,
    greedy_select,
    node_correlation_matrix,
)

__version__ = "0.1.0"
