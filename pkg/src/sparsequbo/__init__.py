"""Sparse signal recovery via quadratic unconstrained binary optimization.

Formulates L0-regularized least squares over fixed-point encoded signals
as a QUBO problem, minimizes it with simulated annealing or exhaustive
enumeration, and benchmarks recovery quality against OMP and lasso on
synthetic low-coherence instances.
"""
from .baselines import lasso_ista, omp
from .encoding import (
    FixedPointFormat,
    decode_coordinate,
    decode_vector,
    encode_vector,
    zero_code,
)
from .evaluation import (
    TuneResult,
    oracle_tune,
    oracle_tune_multi,
    reconstruction_error,
    support_error,
    support_vector,
)
from .instances import (
    Instance,
    generate_low_coherence_matrix,
    make_instance,
    mutual_coherence,
    sample_sparse_signal,
    synthesize_measurements,
)
from .qubo import (
    BaseTerms,
    QuboProblem,
    assemble_total,
    build_base_terms,
    build_l0_qubo,
    build_l2_qubo,
)
from .solvers import (
    AnnealSchedule,
    SolveResult,
    default_schedule,
    least_squares,
    sa_backend_name,
    solve_exhaustive_qubo,
    solve_exhaustive_sparse,
    solve_sa,
)

__version__ = "0.1.0"

__all__ = [
    "AnnealSchedule",
    "BaseTerms",
    "FixedPointFormat",
    "Instance",
    "QuboProblem",
    "SolveResult",
    "TuneResult",
    "assemble_total",
    "build_base_terms",
    "build_l0_qubo",
    "build_l2_qubo",
    "decode_coordinate",
    "decode_vector",
    "default_schedule",
    "encode_vector",
    "generate_low_coherence_matrix",
    "lasso_ista",
    "least_squares",
    "make_instance",
    "mutual_coherence",
    "omp",
    "oracle_tune",
    "oracle_tune_multi",
    "reconstruction_error",
    "sa_backend_name",
    "sample_sparse_signal",
    "solve_exhaustive_qubo",
    "solve_exhaustive_sparse",
    "solve_sa",
    "support_error",
    "support_vector",
    "synthesize_measurements",
    "zero_code",
    "__version__",
]
