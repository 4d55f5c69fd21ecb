"""Bandwidth-efficient MDS code conversion in the split regime.

A library and CLI for the piggybacked convertible codes that split one
[nI, kI] codeword into several [nF, kF] codewords, with exact per-subsymbol
bandwidth accounting, closed-form lower bounds, and an information-flow
max-flow oracle.
"""

from .basecode import (
    ScalarCode,
    build_systematic_code,
    check_prefix_scaling,
    parity_vector,
    search_points,
    verify_mds_scalar,
)
from .bounds import (
    BetaAssignment,
    BoundInputs,
    applicable_bound,
    bound_loose,
    bound_tight,
    curve,
    gamma_read_access_optimal,
    gamma_read_default,
    grid_search_betas,
    optimal_betas,
    savings_possible,
)
from .construction import (
    SPLIT_DOWN,
    SPLIT_UP,
    ConversionParams,
    VectorCode,
    build_final_code,
    build_initial_code,
    derive_params,
    find_code_pair,
    verify_mds_vector,
)
from .conversion import (
    BandwidthReport,
    Codeword,
    DownloadPlan,
    convert,
    convert_default,
    decode,
    encode,
    make_download_plan,
    pack_codeword,
    unpack_codeword,
)
from .errors import (
    BoundRegionError,
    ConstructionInvariantError,
    FormatError,
    NoSavingsError,
    NotSplitRegimeError,
    PlanViolationError,
    PointSearchError,
)
from .field import GF256, SingularMatrixError, default_field
from .flowgraph import (
    FeasibilityResult,
    FlowNetwork,
    build_flow_graph,
    check_feasibility,
    lemma_cut_value,
    max_flow,
)

__version__ = "0.1.0"

__all__ = [
    "BandwidthReport",
    "BetaAssignment",
    "BoundInputs",
    "BoundRegionError",
    "Codeword",
    "ConstructionInvariantError",
    "ConversionParams",
    "DownloadPlan",
    "FeasibilityResult",
    "FlowNetwork",
    "FormatError",
    "GF256",
    "NoSavingsError",
    "NotSplitRegimeError",
    "PlanViolationError",
    "PointSearchError",
    "ScalarCode",
    "SingularMatrixError",
    "SPLIT_DOWN",
    "SPLIT_UP",
    "VectorCode",
    "applicable_bound",
    "bound_loose",
    "bound_tight",
    "build_final_code",
    "build_flow_graph",
    "build_initial_code",
    "build_systematic_code",
    "check_feasibility",
    "check_prefix_scaling",
    "convert",
    "convert_default",
    "curve",
    "decode",
    "default_field",
    "derive_params",
    "encode",
    "find_code_pair",
    "gamma_read_access_optimal",
    "gamma_read_default",
    "grid_search_betas",
    "lemma_cut_value",
    "make_download_plan",
    "max_flow",
    "optimal_betas",
    "pack_codeword",
    "parity_vector",
    "savings_possible",
    "search_points",
    "unpack_codeword",
    "verify_mds_scalar",
    "verify_mds_vector",
]
