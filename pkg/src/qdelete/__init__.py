"""Statevector simulation of single-query deletion of a marked database item."""

from .analytic import (
    SpectralDecomposition,
    TrigRow,
    TwoDState,
    approximate_s_matrix,
    initial_state,
    lift_to_full,
    predict_final,
    project_to_plane,
    s_matrix,
    s_power,
    spectral_decompose,
    trig_period_table,
)
from .deletion import (
    CaseTag,
    DeletionConfig,
    IterationOutcome,
    Mode,
    PhaseOracle,
    PhaseParameters,
    apply_deletion_step,
    approximate_residual,
    classical_average_queries,
    classical_deletion_queries,
    classify,
    matched_phase,
    predicted_global_phase,
    run,
)
from .statevector import (
    DimensionMismatchError,
    QubitCapacityError,
    StateVector,
    apply_global_phase,
    apply_marked_complement_phase,
    apply_walsh_hadamard,
    apply_zero_phase,
    basis_state,
    fidelity,
    qubit_cap,
    uniform_state,
)

__version__ = "0.1.0"
