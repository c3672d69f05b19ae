"""Exact block-level simulation and resource planning for one-shot
compression of N identically prepared mixed states.

The N-copy state of a d-level system never leaves its Schur-Weyl block
decomposition here: weights and block matrices are computed exactly at
desk scale, the encode/decode channels act block by block, and every
closed-form qubit-count or error bound is available next to the exact
simulated error it bounds.
"""

__version__ = "0.1.0"

from .blocksim import (
    Block,
    BlochVector,
    BlockState,
    ErrorReport,
    block_weights,
    decode,
    encode,
    exact_protocol_error,
    product_state,
    qubit_weight,
    trace_distance,
)
from .errors import (
    ContractViolationError,
    NotApplicableError,
    OracleMismatchError,
    ParameterError,
    ResourceLimitError,
    UnsupportedFeatureError,
)
from .planner import (
    CompressionPlan,
    ResourceEstimate,
    circuit_resource_estimate,
    keyl_werner_tail_bound,
    mixed_prep_cost,
    pure_state_lower_bound,
    qubit_approx_plan,
    qubit_error_upper_bound,
    qudit_approx_plan,
    spectrum_estimate,
    truncation_lower_bound,
    zero_error_plan,
)
from .schur_core import (
    Spectrum,
    WignerRotation,
    YoungDiagram,
    clebsch_gordan,
    enumerate_diagrams,
    irrep_dim,
    multiplicity_dim,
    schur_polynomial,
    wigner_d_matrix,
)

__all__ = [
    "Block",
    "BlochVector",
    "BlockState",
    "CompressionPlan",
    "ContractViolationError",
    "ErrorReport",
    "NotApplicableError",
    "OracleMismatchError",
    "ParameterError",
    "ResourceEstimate",
    "ResourceLimitError",
    "Spectrum",
    "UnsupportedFeatureError",
    "WignerRotation",
    "YoungDiagram",
    "block_weights",
    "circuit_resource_estimate",
    "clebsch_gordan",
    "decode",
    "encode",
    "enumerate_diagrams",
    "exact_protocol_error",
    "irrep_dim",
    "keyl_werner_tail_bound",
    "mixed_prep_cost",
    "multiplicity_dim",
    "product_state",
    "pure_state_lower_bound",
    "qubit_approx_plan",
    "qubit_error_upper_bound",
    "qubit_weight",
    "qudit_approx_plan",
    "schur_polynomial",
    "spectrum_estimate",
    "trace_distance",
    "truncation_lower_bound",
    "wigner_d_matrix",
    "zero_error_plan",
]
