"""Fault-tolerant error correction for classical linear codes under
circuit-level noise."""

__version__ = "0.1.0"

from .circuit import (
    AccumulatedError,
    CircuitError,
    MeasurementSchedule,
    accumulate,
    clusters,
    is_connected,
    residual,
    simulate_outcome,
)
from .decoder import (
    FaultToleranceReport,
    OutcomeTable,
    PreconditionError,
    TruncatedDecoder,
    build_outcome_table,
    build_truncated_decoder,
    build_untruncated_decoder,
    read_decoder_table,
    verify_fault_tolerance,
    write_decoder_table,
)
from .distance import (
    DistanceReport,
    PreconditionReport,
    Region,
    SearchBudgetError,
    circuit_distance,
    compute_regions,
    dcirc_upper_bound,
    enumerate_errors,
    exclude_propagating_below,
    ft_precondition,
    input_region,
    is_propagating,
    output_region,
    prop1_bound,
    repeat_schedule,
    thm2_expectation_bound,
)
from .gf2 import (
    BitMatrix,
    CosetTable,
    DimensionError,
    LinearCode,
    TableSizeError,
    build_coset_table,
    format_matrix_text,
    kernel_basis,
    min_distance,
    parse_matrix_text,
    rank,
    sample_row_space,
    syndrome,
)
from .search import AttemptRecord, SearchConfig, SearchResult, sample_schedule, search
from .storage import (
    LifetimeStats,
    NoiseParams,
    ThresholdResult,
    TrialResult,
    average_lifetime,
    prop1_empirical_check,
    pseudo_threshold,
    run_trial,
    sample_cycle,
    unencoded_baseline,
)
