"""Turning d-multi-allocations into allocations, with exact certificates."""

from .allocation import MultiAllocation, widths_ok
from .errors import (
    DomainError,
    GenerationError,
    InstanceFormatError,
    MalformedValuationError,
    MultiallocError,
    PreconditionError,
    ProviderError,
    ResourceLimitError,
    StateError,
)
from .game import GameQuery, GameResult, PickSequence, best_pick, omega, omega_alternating
from .kernels import BACKEND
from .mms import (
    FileProvider,
    brute_multi_provider,
    guarantee_for_n,
    mms,
    mms_partition,
    mms_removal_monotone,
    n_sequence,
    sampling_pipeline,
)
from .multigraph import (
    Edge,
    MultiGraph,
    TokenTrace,
    allocate_graph,
    certify_graph_allocation,
    from_two_multi,
    pad_even,
    token_game,
)
from .reduction import halve, split_copies, transform, transform_vector
from .valuations import (
    Additive,
    Conjugate,
    Explicit,
    Marginal,
    Pullback,
    Restriction,
    Valuation,
    Xos,
    check_axioms,
    conjugate,
    marginal,
    marginal_delta,
    max_item_value,
    restrict,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Additive",
    "Conjugate",
    "DomainError",
    "Edge",
    "Explicit",
    "FileProvider",
    "GameQuery",
    "GameResult",
    "GenerationError",
    "InstanceFormatError",
    "MalformedValuationError",
    "Marginal",
    "MultiAllocation",
    "MultiGraph",
    "MultiallocError",
    "PickSequence",
    "PreconditionError",
    "ProviderError",
    "Pullback",
    "ResourceLimitError",
    "Restriction",
    "StateError",
    "TokenTrace",
    "Valuation",
    "Xos",
    "allocate_graph",
    "best_pick",
    "brute_multi_provider",
    "certify_graph_allocation",
    "check_axioms",
    "conjugate",
    "from_two_multi",
    "guarantee_for_n",
    "halve",
    "marginal",
    "marginal_delta",
    "max_item_value",
    "mms",
    "mms_partition",
    "mms_removal_monotone",
    "n_sequence",
    "omega",
    "omega_alternating",
    "pad_even",
    "restrict",
    "sampling_pipeline",
    "split_copies",
    "token_game",
    "transform",
    "transform_vector",
    "widths_ok",
]
