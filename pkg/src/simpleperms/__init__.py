"""Simple permutations: blocks, substitution decomposition, exact counts,
2-adic and 3-adic congruences, and certified asymptotic comparisons."""

from .errors import SimplePermsError, VerificationError
from .perm import (
    Block,
    Decomposition,
    MarkedDecomposition,
    Permutation,
    blocks,
    decompose,
    inflate,
    is_minus_indecomposable,
    is_plus_indecomposable,
    is_simple,
    marked_compose,
    marked_decompose,
    minimal_blocks,
    parse_permutation,
)
from .series import (
    BivariatePoly,
    TruncSeries,
    bivariate_F_m,
    check_ode_identities,
    check_structure_identities,
    comtet_series,
    f_m_series,
    lagrange_com,
    revert,
    simple_series,
)
from .sequences import (
    SequenceTable,
    brute_count_simple,
    brute_F_m,
    com_sequence,
    enumerate_simple,
    random_simple,
    s_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "BivariatePoly", "Block", "Decomposition", "MarkedDecomposition", "Permutation",
    "SequenceTable", "SimplePermsError", "TruncSeries", "VerificationError",
    "bivariate_F_m", "blocks", "brute_F_m", "brute_count_simple", "check_ode_identities",
    "check_structure_identities", "com_sequence", "comtet_series", "decompose",
    "enumerate_simple", "f_m_series", "inflate", "is_minus_indecomposable",
    "is_plus_indecomposable", "is_simple", "lagrange_com", "marked_compose",
    "marked_decompose", "minimal_blocks", "parse_permutation", "random_simple",
    "revert", "s_sequence", "simple_series",
]
