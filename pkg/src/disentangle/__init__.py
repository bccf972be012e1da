"""Two-qubit disentanglement: reduced states, Helstrom bounds, channels and no-go sets."""

from .channels import (
    QuantumChannel,
    StinespringData,
    apply,
    channel_from_stinespring,
    compose,
    dephasing_witness,
    swap_disentangler,
    validate,
)
from .distinguish import (
    FamilyParams,
    build_family,
    delta_disent,
    helstrom_pe,
    pe_disent,
    pe_ent,
    pure_pe,
    reduced_pair,
    violation_scan,
)
from .entanglement import is_product, partial_transpose, ppt_verdict, schmidt_decompose
from .feasibility import FeasibilityReport, feasibility_search
from .nogo import (
    Verdict,
    alpha_entanglement,
    bell_set,
    check_disentanglement,
    four_state_set,
    linearity_output,
    product_impossibility_gap,
    three_state_set,
    unitarity_residual,
)
from .qstate import (
    DensityMatrix,
    PureState,
    hermitian_eig,
    ket,
    overlap,
    partial_trace,
    rotated_qubit_basis,
    tensor,
    trace_distance,
    trace_norm,
)

__version__ = "0.1.0"
