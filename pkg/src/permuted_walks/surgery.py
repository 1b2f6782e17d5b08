"""Graph surgeries used in the extremal hitting-time argument, plus checkers.

Every constructor returns a SurgeryOutcome whose ``vertex_map`` sends the
new dense labels back to labels of the input graph, so degree claims can be
compared vertex by vertex against the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chain import expected_return, hitting_vector, max_hitting, rational_json
from .digraph import (
    DirectedMultigraph,
    is_connected_undirected,
    is_isomorphic_to_ldn,
    is_strongly_connected,
    reachable_from,
    undirected_components,
)


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SurgeryOutcome:
    graph: DirectedMultigraph
    added_edges: tuple[tuple[int, int], ...]
    removed_vertex: int | None
    vertex_map: tuple[int, ...]
    info: dict = field(default_factory=dict, compare=False)

    def new_label(self, original: int) -> int:
        return self.vertex_map.index(original)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.to_dict(),
            "added_edges": [list(e) for e in self.added_edges],
            "removed_vertex": self.removed_vertex,
            "vertex_map": list(self.vertex_map),
        }


def check_degree_sum_identity(g: DirectedMultigraph) -> None:
    """in(i) - out(i) == sum over x != i of (out(x) - in(x)), for every i."""
    prof = g.degree_profile()
    total = sum(o - i for i, o in prof)
    for i, (ind, outd) in enumerate(prof):
        if ind - outd != total - (outd - ind):
            raise AssertionError(f"degree-sum identity fails at {i}")


def _check_return_preconditions(g: DirectedMultigraph, i: int) -> None:
    if not is_strongly_connected(g):
        raise PreconditionError("graph is not strongly connected")
    prof = g.degree_profile()
    if prof.in_degrees[i] < prof.out_degrees[i]:
        raise PreconditionError(f"vertex {i}: in-degree below out-degree")
    for x, (ind, outd) in enumerate(prof):
        if x != i and ind > outd:
            raise PreconditionError(f"vertex {x}: in-degree {ind} exceeds out-degree {outd}")


def add_fictitious_edges(g: DirectedMultigraph, i: int) -> SurgeryOutcome:
    """Balance g by adding edges i -> j for every j with a shortfall of in-edges."""
    _check_return_preconditions(g, i)
    check_degree_sum_identity(g)
    prof = g.degree_profile()
    added = []
    for j, (ind, outd) in enumerate(prof):
        if ind < outd:
            added.extend([(i, j)] * (outd - ind))
    out = DirectedMultigraph.from_edges(g.num_vertices, g.edges() + added)
    new_prof = out.degree_profile()
    assert new_prof.is_balanced(), "fictitious edges failed to balance the graph"
    assert new_prof.in_degrees[i] == prof.in_degrees[i]
    assert len(added) == prof.imbalance(i)
    return SurgeryOutcome(out, tuple(added), None, tuple(g.vertices))


@dataclass(frozen=True)
class ReturnCertificate:
    vertex: int
    value: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.value <= self.bound

    def to_dict(self) -> dict:
        return {
            "lemma": "return",
            "vertex": self.vertex,
            "value": rational_json(self.value),
            "bound": rational_json(self.bound),
            "holds": self.holds,
        }


def return_bound(g: DirectedMultigraph, i: int) -> Fraction:
    prof = g.degree_profile()
    return Fraction(
        sum(prof.out_degrees) + prof.out_degrees[i] - prof.in_degrees[i], prof.out_degrees[i]
    )


def verify_return_bound(g: DirectedMultigraph, i: int) -> ReturnCertificate:
    _check_return_preconditions(g, i)
    if g.out_degree(i) == 0:
        raise PreconditionError(f"vertex {i} has out-degree 0")
    value = expected_return(g, i).value
    return ReturnCertificate(i, value, return_bound(g, i))


# -- G_i and A_i --------------------------------------------------------------


def _require_balanced_strong(g: DirectedMultigraph) -> None:
    if not g.degree_profile().is_balanced():
        raise PreconditionError("graph is not degree-balanced")
    if not is_strongly_connected(g):
        raise PreconditionError("graph is not strongly connected")


def build_gi(g: DirectedMultigraph, u: int, i: int) -> SurgeryOutcome:
    """Delete u; reroute every other in-neighbour j's edges to u onto i.

    Out-degrees of all j != i survive; i loses its r_i edges to u. The loop
    multiplicity of u itself is discarded with u.
    """
    _require_balanced_strong(g)
    if u == i:
        raise PreconditionError("u and i must differ")
    if g.multiplicity(i, u) == 0:
        raise PreconditionError(f"{i} has no edge to {u}")
    keep = [x for x in g.vertices if x != u]
    new_of = {x: k for k, x in enumerate(keep)}
    edges, added = [], []
    for x in keep:
        for h in g.out_edges[x]:
            if h != u:
                edges.append((new_of[x], new_of[h]))
            elif x != i:
                edges.append((new_of[x], new_of[i]))
                added.append((new_of[x], new_of[i]))
    out = DirectedMultigraph.from_edges(len(keep), edges)
    return SurgeryOutcome(
        out, tuple(added), u, tuple(keep), info={"u": u, "i": i, "r_i": g.multiplicity(i, u)}
    )


@dataclass(frozen=True)
class ReachableSet:
    """A_i (in labels of the original graph) and the induced graph (A_i, E_i)."""

    vertices: frozenset[int]
    graph: DirectedMultigraph | None
    vertex_map: tuple[int, ...]
    root: int

    @property
    def root_label(self) -> int:
        return self.vertex_map.index(self.root)


def build_ai(gi: SurgeryOutcome, i: int) -> ReachableSet:
    """Directed reachability closure of i in G_i (i included) and its induced subgraph.

    `i` is a label of the original graph.
    """
    if i not in gi.vertex_map:
        return ReachableSet(frozenset(), None, (), i)
    root = gi.new_label(i)
    reach = reachable_from(gi.graph, root)
    sub, local = gi.graph.induced(reach)
    vmap = tuple(gi.vertex_map[v] for v in local)
    return ReachableSet(frozenset(vmap), sub, vmap, i)


def check_set_a_claims(g: DirectedMultigraph, u: int, i: int, a: ReachableSet) -> dict[str, bool]:
    """The five structural claims about (A_i, E_i) against the original graph g."""
    prof_g = g.degree_profile()
    prof_a = a.graph.degree_profile()
    r_i = g.multiplicity(i, u)
    root = a.root_label
    others = [k for k, v in enumerate(a.vertex_map) if v != i]
    return {
        "strongly_connected": is_strongly_connected(a.graph),
        "contains_i": i in a.vertices,
        "out_preserved": all(
            prof_a.out_degrees[k] == prof_g.out_degrees[a.vertex_map[k]] for k in others
        ),
        "in_not_increased": all(
            prof_a.in_degrees[k] <= prof_g.in_degrees[a.vertex_map[k]] for k in others
        ),
        "root_out_drops_by_r": prof_a.out_degrees[root] == prof_g.out_degrees[i] - r_i,
        "root_in_at_least_out": prof_a.in_degrees[root] >= prof_a.out_degrees[root],
    }


# -- excursion bound ----------------------------------------------------------


@dataclass(frozen=True)
class ExcursionCertificate:
    u: int
    d: int
    num_vertices: int
    values: dict[int, Fraction]
    bound: int

    @property
    def maximum(self) -> Fraction:
        return max(self.values.values(), default=Fraction(0))

    @property
    def holds(self) -> bool:
        return self.maximum <= self.bound

    def to_dict(self) -> dict:
        return {
            "lemma": "excursion",
            "u": self.u,
            "d": self.d,
            "num_vertices": self.num_vertices,
            "values": {str(i): rational_json(v) for i, v in self.values.items()},
            "max": rational_json(self.maximum),
            "bound": self.bound,
            "holds": self.holds,
        }


def _regular_degree(g: DirectedMultigraph) -> int:
    d = g.out_degree(0)
    if not g.degree_profile().is_regular(d):
        raise PreconditionError("graph is not d-in/d-out for a single d")
    return d


def verify_excursion_bound(g: DirectedMultigraph, u: int) -> ExcursionCertificate:
    """max over in-neighbours i of u of E_i[tau_u], against N*d - d.

    Any starting law on the in-neighbours averages these point values, so
    the maximum is the worst case.
    """
    d = _regular_degree(g)
    if not is_strongly_connected(g):
        raise PreconditionError("graph is not strongly connected")
    h = hitting_vector(g, [u])
    values = {i: h[i] for i in g.in_neighbors(u)}
    return ExcursionCertificate(u, d, g.num_vertices, values, g.num_vertices * d - d)


# -- G'' ----------------------------------------------------------------------


def build_gpp(g: DirectedMultigraph, y: int) -> SurgeryOutcome:
    """Delete y and rewire its in-neighbours I to its out-neighbours J.

    J is split into classes by undirected reachability (avoiding y) to
    i_1, i_2, ... in ascending order; nonempty classes are chained in a
    cycle by one edge each, then the remaining supply/demand is filled
    greedily with lowest indices first.
    """
    d = _regular_degree(g)
    if not is_strongly_connected(g):
        raise PreconditionError("graph is not strongly connected")
    if g.num_vertices < 2:
        raise PreconditionError("need at least two vertices")

    big_i = [x for x in g.in_neighbors(y) if x != y]
    big_j = [x for x in g.out_neighbors(y) if x != y]
    supply = {i: g.multiplicity(i, y) for i in big_i}
    demand = {j: g.multiplicity(y, j) for j in big_j}
    assert sum(supply.values()) == sum(demand.values())

    comp_of = {}
    for comp in undirected_components(g, avoid=[y]):
        for v in comp:
            comp_of[v] = id(comp)
    classes: list[tuple[int, list[int]]] = []
    assigned: set[int] = set()
    for i in big_i:
        cls = [j for j in big_j if j not in assigned and comp_of[j] == comp_of[i]]
        assigned.update(cls)
        if cls:
            classes.append((i, cls))
    assert assigned == set(big_j), "J classes do not cover J"

    new_edges: list[tuple[int, int]] = []

    def connect(i: int, j: int) -> None:
        supply[i] -= 1
        demand[j] -= 1
        new_edges.append((i, j))

    m = len(classes)
    for k in range(m):
        i_k = classes[k][0]
        connect(i_k, min(classes[(k + 1) % m][1]))
    for i in big_i:
        for j in big_j:
            while supply[i] > 0 and demand[j] > 0:
                connect(i, j)
    assert not any(supply.values()) and not any(demand.values())

    keep = [x for x in g.vertices if x != y]
    new_of = {x: k for k, x in enumerate(keep)}
    edges = [(new_of[x], new_of[h]) for x in keep for h in g.out_edges[x] if h != y]
    added = [(new_of[i], new_of[j]) for i, j in new_edges]
    out = DirectedMultigraph.from_edges(len(keep), edges + added)

    if not out.degree_profile().is_regular(d):
        raise AssertionError("rewired graph lost degree balance")
    if not is_connected_undirected(out):
        raise AssertionError("rewired graph is disconnected")
    if not is_strongly_connected(out):
        raise AssertionError("balanced connected graph is not strongly connected")
    return SurgeryOutcome(
        out,
        tuple(added),
        y,
        tuple(keep),
        info={"I": big_i, "J": big_j, "classes": classes},
    )


@dataclass(frozen=True)
class GppCertificate:
    y: int
    outcome: SurgeryOutcome
    preserved: bool
    checked_sources: int
    max_hitting: Fraction
    bound: Fraction
    isomorphic_to_line: bool

    @property
    def holds(self) -> bool:
        return self.preserved and self.max_hitting <= self.bound

    def to_dict(self) -> dict:
        return {
            "lemma": "gpp",
            "y": self.y,
            "outcome": self.outcome.to_dict(),
            "hitting_preserved": self.preserved,
            "checked_sources": self.checked_sources,
            "max_hitting": rational_json(self.max_hitting),
            "bound": rational_json(self.bound),
            "isomorphic_to_ldn": self.isomorphic_to_line,
            "holds": self.holds,
        }


def verify_gpp(g: DirectedMultigraph, y: int) -> GppCertificate:
    """Build G'' and check that E_x[tau_I] is unchanged for every x outside I and y."""
    outcome = build_gpp(g, y)
    big_i = outcome.info["I"]
    before = hitting_vector(g, big_i)
    after = hitting_vector(outcome.graph, [outcome.new_label(i) for i in big_i])
    sources = [x for x in g.vertices if x != y and x not in big_i]
    preserved = all(before[x] == after[outcome.new_label(x)] for x in sources)
    d = g.out_degree(0)
    n = outcome.graph.num_vertices - 1
    top = max_hitting(outcome.graph)[0] if n >= 1 else Fraction(0)
    return GppCertificate(
        y,
        outcome,
        preserved,
        len(sources),
        top,
        Fraction(d * n * (n + 1), 2),
        n >= 1 and is_isomorphic_to_ldn(outcome.graph, d, n),
    )
