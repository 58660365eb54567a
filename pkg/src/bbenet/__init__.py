"""Reduction of synchronous Boolean networks by backward equivalence.

Variables that are updated identically whenever they start equal can be
collapsed into one, shrinking the state space exponentially while
keeping, exactly, the part of the dynamics where the collapsed variables
agree.  The equivalence is found directly on the update functions with a
SAT-backed partition refinement, so no state graph is ever built for the
reduction itself.
"""

from .errors import (
    BbenetError,
    CapExceededError,
    MissingVariableError,
    NotABbeError,
    ParseError,
    PartitionError,
    UnknownVariableError,
)
from .expr import (
    And,
    BoolExpr,
    Const,
    Not,
    Or,
    Var,
    evaluate,
    free_vars,
    parse_expr,
    serialize_expr,
    substitute,
)
from .network import (
    BooleanNetwork,
    InputKind,
    Partition,
    State,
    detect_inputs,
    format_state,
    initial_partition,
    is_constant_state,
    is_refinement,
    pack_state,
    parse_bnet,
    parse_partition_file,
    serialize_bnet,
    step,
    unpack_state,
)
from .sat import CnfFormula, SatResult, build_negated_phi, solve, to_dimacs, tseitin
from .bbe import (
    BbeCheck,
    RefinementTrace,
    TraceStep,
    brute_check_bbe,
    brute_maximal_bbe,
    check_bbe,
    format_trace,
    maximal_bbe,
    split_by_witness,
)
from .reduction import (
    ReductionReport,
    ReductionResult,
    format_mapping,
    lift,
    project,
    reduce_network,
)
from .stg import (
    DEFAULT_CAP,
    Attractor,
    CheckReport,
    RestrictedStg,
    Stg,
    attractors,
    build_stg,
    export_dot,
    format_attractors,
    restrict_constant,
    stg_attractors,
    verify_attractor_preservation,
    verify_isomorphism,
)

__version__ = "0.1.0"
