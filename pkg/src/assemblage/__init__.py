"""Assembly indices of strings, integers, vectors, pixel assemblages and graphs."""

from .chains import (
    AdditionChain,
    IntegerSpace,
    VectorChain,
    VectorSpace,
    min_chain_length,
    min_chain_lengths_upto,
    min_vector_chain_length,
    vector_to_scalar_bound,
)
from .core import (
    AssemblyMap,
    AssemblySpace,
    IndexResult,
    JoinStep,
    Pathway,
    SearchBudget,
    assembly_index,
    check_assembly_map,
    lower_bound_by_map,
    naive_upper_bound,
    split_branched_index,
    verify_pathway,
)
from .errors import (
    AssemblyError,
    BudgetExceeded,
    DomainError,
    EmptyTarget,
    NoSuchIndex,
    NotConstructible,
    TooLarge,
)
from .graphs import GraphObject, GraphSpace, graph_assembly_index, graph_splits
from .grid2d import Assemblage, GridSpace, grid_assembly_index, grid_lower_bounds, grid_splits
from .strings import StringSpace, shannon_entropy, string_assembly_index, string_splits

__version__ = "0.1.0"
