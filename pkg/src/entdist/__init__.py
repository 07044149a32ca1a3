"""Entanglement distribution through pairs of noisy qubit channels."""

from .channels import (
    ChoiMatrix,
    QubitChannel,
    TransposeSimulator,
    apply,
    apply_product,
    choi,
    choi_of_composition,
    compose,
    find_transpose_simulator,
    is_eb,
    make_channel,
    parse_channel_spec,
    random_channel,
    transpose_channel,
    unitary_channel,
)
from .entanglement import (
    EntanglementReport,
    PureInputState,
    StateForm,
    build_state,
    report,
    singlet,
)
from .linalg import (
    SystemLayout,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    partial_transpose,
    real_embedding,
)
from .sdp import SdpProblem, SdpResult, SolveStatus, build_problem, certify_gap, solve

__all__ = [
    "ChoiMatrix",
    "EntanglementReport",
    "PureInputState",
    "QubitChannel",
    "SdpProblem",
    "SdpResult",
    "SolveStatus",
    "StateForm",
    "SystemLayout",
    "TransposeSimulator",
    "apply",
    "apply_product",
    "build_problem",
    "build_state",
    "certify_gap",
    "choi",
    "choi_of_composition",
    "compose",
    "find_transpose_simulator",
    "hermitian_eigenvalues",
    "is_eb",
    "kron",
    "make_channel",
    "parse_channel_spec",
    "partial_trace",
    "partial_transpose",
    "random_channel",
    "real_embedding",
    "report",
    "singlet",
    "solve",
    "transpose_channel",
    "unitary_channel",
]

__version__ = "0.1.0"
