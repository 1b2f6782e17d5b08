"""Hitting times of permuted random walks and Eulerian digraphs."""

from .chain import (
    HittingResult,
    MarkovChain,
    expected_hitting,
    expected_return,
    from_graph,
    hitting_matrix,
    simulate_hitting,
    stationary,
)
from .digraph import (
    DegreeProfile,
    DirectedMultigraph,
    build_ldn,
    is_connected_undirected,
    is_isomorphic_to_ldn,
    is_strongly_connected,
    random_eulerian,
)
from .permwalk import (
    Permutation,
    build_perm_chain,
    build_perm_chain_variant,
    build_signed_chain,
)

__version__ = "0.1.0"
