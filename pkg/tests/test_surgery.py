from fractions import Fraction

import pytest

from permuted_walks.chain import expected_return, stationary
from permuted_walks.digraph import (
    DirectedMultigraph,
    build_ldn,
    is_isomorphic_to_ldn,
    is_strongly_connected,
)
from permuted_walks.surgery import (
    PreconditionError,
    add_fictitious_edges,
    build_ai,
    build_gi,
    build_gpp,
    check_degree_sum_identity,
    check_set_a_claims,
    verify_excursion_bound,
    verify_gpp,
    verify_return_bound,
)

from conftest import three_vertex_unbalanced


def test_fictitious_noop_on_balanced():
    g = build_ldn(2, 3)
    out = add_fictitious_edges(g, 1)
    assert out.added_edges == () and out.graph == g


def test_fictitious_three_vertex():
    g = three_vertex_unbalanced()
    assert g.in_degree(0) == 3 and g.out_degree(0) == 2 and g.in_degree(2) == 1
    out = add_fictitious_edges(g, 0)
    assert out.added_edges == ((0, 2),)
    assert out.graph.degree_profile().is_balanced()


def test_fictitious_precondition():
    g = three_vertex_unbalanced()
    with pytest.raises(PreconditionError, match="vertex 2"):
        add_fictitious_edges(g, 2)


def test_return_bound_balanced_equality(small_corpus):
    for g in small_corpus[:30]:
        for i in g.vertices:
            cert = verify_return_bound(g, i)
            assert cert.value == cert.bound == 1 / stationary(g)[i]


def test_return_bound_three_vertex():
    cert = verify_return_bound(three_vertex_unbalanced(), 0)
    assert cert.bound == Fraction(5, 2)
    assert cert.value == expected_return(three_vertex_unbalanced(), 0).value
    assert cert.holds


def test_gi_ldn():
    out = build_gi(build_ldn(2, 3), u=3, i=2)
    assert out.graph.num_vertices == 3
    assert out.vertex_map == (0, 1, 2)
    assert out.graph.out_degree(2) == 1
    assert out.added_edges == ()


def test_gi_single_in_neighbor():
    g = DirectedMultigraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    out = build_gi(g, u=0, i=2)
    assert out.added_edges == ()
    assert out.graph.edges() == [(0, 1)]  # old 1 -> 2, relabeled


def test_gi_reroutes_other_in_neighbors():
    # u=0 has in-neighbours 1 and 2; building G_1 sends 2's edge onto 1
    g = DirectedMultigraph.from_edges(3, [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)])
    out = build_gi(g, u=0, i=1)
    assert out.added_edges == ((1, 0),)  # new labels: 1->0 is old 2->1
    assert out.graph.out_degree(1) == g.out_degree(2)


def test_gi_rejections():
    g = build_ldn(2, 3)
    with pytest.raises(PreconditionError):
        build_gi(g, 3, 3)
    with pytest.raises(PreconditionError):
        build_gi(g, 3, 0)


def test_ai_whole_when_strong():
    gi = build_gi(build_ldn(2, 4), u=4, i=3)
    a = build_ai(gi, 3)
    assert a.vertices == {0, 1, 2, 3}
    assert len(a.vertices) < 5


def _set_a_instances(corpus):
    for g in corpus:
        for u in g.vertices:
            for i in g.in_neighbors(u):
                if i != u:
                    yield g, u, i


def test_lemma_25_and_22_on_corpus(small_corpus):
    count = 0
    for g, u, i in _set_a_instances(small_corpus[:60]):
        a = build_ai(build_gi(g, u, i), i)
        assert a.vertices
        assert len(a.vertices) < g.num_vertices
        claims = check_set_a_claims(g, u, i, a)
        assert all(claims.values()), claims
        if a.graph.out_degree(a.root_label) > 0:
            cert = verify_return_bound(a.graph, a.root_label)
            assert cert.holds
        count += 1
    assert count > 100


def test_excursion_ldn():
    for n in range(1, 8):
        cert = verify_excursion_bound(build_ldn(2, n), n)
        assert set(cert.values) == {n - 1, n}
        assert cert.values[n - 1] == 2 * n
        assert cert.values[n] == 0
        assert cert.bound == 2 * (n + 1) - 2
        assert cert.holds


def test_excursion_single_vertex():
    cert = verify_excursion_bound(DirectedMultigraph(1, ((0, 0),)), 0)
    assert cert.maximum == 0 and cert.bound == 0 and cert.holds


def test_excursion_corpus(small_corpus):
    for g in small_corpus:
        for u in g.vertices:
            assert verify_excursion_bound(g, u).holds


def test_gpp_ldn():
    for n in range(2, 8):
        out = build_gpp(build_ldn(2, n), n)
        assert out.info["I"] == [n - 1] and out.info["J"] == [n - 1]
        assert is_isomorphic_to_ldn(out.graph, 2, n - 1)


def test_gpp_corpus(small_corpus):
    for g in small_corpus[:60]:
        d = g.out_degree(0)
        for y in g.vertices:
            cert = verify_gpp(g, y)
            out = cert.outcome.graph
            assert out.num_vertices == g.num_vertices - 1
            assert out.degree_profile().is_regular(d)
            assert is_strongly_connected(out)
            assert cert.preserved
            assert cert.max_hitting <= cert.bound
            check_degree_sum_identity(out)


def test_gpp_multiple_components():
    # removing 0 splits {1,2} from {3,4}; the cyclic wiring must rejoin them
    g = DirectedMultigraph.from_edges(5, [
        (0, 1), (0, 3), (1, 2), (2, 1), (1, 0), (2, 2), (3, 4), (4, 3), (3, 0), (4, 4),
    ])
    assert g.degree_profile().is_regular(2) and is_strongly_connected(g)
    out = build_gpp(g, 0)
    assert len(out.info["classes"]) == 2
    assert is_strongly_connected(out.graph)
    assert set(out.added_edges) == {(0, 2), (2, 0)}


def test_gpp_precondition():
    with pytest.raises(PreconditionError):
        build_gpp(DirectedMultigraph(1, ((0, 0),)), 0)
    with pytest.raises(PreconditionError):
        build_gpp(three_vertex_unbalanced(), 0)


def test_degree_sum_identity_on_unbalanced():
    check_degree_sum_identity(three_vertex_unbalanced())


def test_certificates_serialize(small_corpus):
    import json
    g = small_corpus[0]
    json.dumps(verify_excursion_bound(g, 0).to_dict())
    json.dumps(verify_gpp(g, 0).to_dict())
    json.dumps(verify_return_bound(g, 0).to_dict())
