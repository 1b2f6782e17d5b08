import numpy as np
import pytest

from permuted_walks.chain import expected_hitting, hitting_vector
from permuted_walks.digraph import (
    build_ldn,
    is_isomorphic_to_ldn,
    is_strongly_connected,
    undirected_components,
)
from permuted_walks.permwalk import (
    Permutation,
    all_permutations,
    build_perm_chain,
    build_perm_chain_variant,
    build_signed_chain,
    signed_vertex,
)


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    with pytest.raises(ValueError):
        Permutation((1, 2, 3))
    with pytest.raises(ValueError):
        Permutation.signed((0, 1))


def test_parse():
    s = Permutation.parse("2,0,1")
    assert (s(0), s(1), s(2)) == (2, 0, 1)
    t = Permutation.parse("2,1,0,-1,-2", signed=True)
    assert t(-2) == 2 and t(2) == -2 and t.offset == -2
    with pytest.raises(ValueError):
        Permutation.parse("a,b")


def test_identity_is_line():
    g = build_perm_chain(Permutation.identity(4))
    assert is_isomorphic_to_ldn(g, 2, 4)
    assert g == build_ldn(2, 4)


def test_three_state_example():
    g = build_perm_chain(Permutation((1, 0, 2)))
    assert g.out_edges == ((0, 1), (1, 2), (0, 2))
    assert expected_hitting(g, 0, [2]).value == 4


def test_builders_reject_wrong_domain():
    with pytest.raises(ValueError):
        build_perm_chain(Permutation.identity(2, signed=True))
    with pytest.raises(ValueError):
        build_perm_chain(Permutation((0,)))


@pytest.mark.parametrize("n", range(1, 8))
def test_every_perm_strongly_connected(n):
    for sigma in all_permutations(n):
        g = build_perm_chain(sigma)
        assert g.degree_profile().is_regular(2)
        assert is_strongly_connected(g)


def test_random_large_perms_strongly_connected():
    rng = np.random.default_rng(31)
    for _ in range(200):
        n = int(rng.integers(8, 51))
        g = build_perm_chain(Permutation(tuple(int(v) for v in rng.permutation(n + 1))))
        assert is_strongly_connected(g)


def test_parity_structure():
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(2, 20))
        sigma = Permutation(tuple(int(v) for v in rng.permutation(n + 1)))
        g = build_perm_chain(sigma)
        for k in range(1, n):
            assert sigma(k) in g.out_edges[k - 1] and sigma(k) in g.out_edges[k + 1]
        assert len(undirected_components(g)) == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_variant_identity_same_graph(n):
    ident = Permutation.identity(n)
    assert build_perm_chain_variant(ident) == build_perm_chain(ident)


def test_variant_identity_value():
    assert hitting_vector(build_perm_chain_variant(Permutation.identity(3)), [3])[0] == 12


@pytest.mark.parametrize("n", range(1, 7))
def test_variant_bound(n):
    for sigma in all_permutations(n):
        g = build_perm_chain_variant(sigma)
        assert hitting_vector(g, [n])[0] <= n * n + n


def test_signed_identity():
    g = build_signed_chain(Permutation.identity(2, signed=True))
    assert expected_hitting(g, signed_vertex(0, 2), [0, 4]).value == 4


@pytest.mark.parametrize("n", range(1, 6))
def test_signed_identity_exit_time(n):
    g = build_signed_chain(Permutation.identity(n, signed=True))
    assert hitting_vector(g, [0, 2 * n])[n] == n * n


def test_signed_negation_n3():
    sigma = Permutation(tuple(-x for x in range(-3, 4)), -3)
    assert hitting_vector(build_signed_chain(sigma), [0, 6])[3] == 9


def test_signed_swap01_n3():
    sigma = Permutation.transposition(3, 0, 1, signed=True)
    assert hitting_vector(build_signed_chain(sigma), [0, 6])[3] == 9


@pytest.mark.parametrize("n", range(1, 4))
def test_signed_all_balanced_and_strong(n):
    for sigma in all_permutations(n, signed=True):
        g = build_signed_chain(sigma)
        assert g.degree_profile().is_regular(2)
        assert is_strongly_connected(g)


def test_enumeration_is_lexicographic():
    perms = [p.images for p in all_permutations(3)]
    assert perms == sorted(perms) and len(perms) == 24
