"""Directed multigraphs on dense vertex labels 0..N-1.

Parallel edges and self-loops are stored by repetition in a sorted
per-vertex tuple of heads, so two graphs with the same edge multiset
compare equal and serialize identically.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "DirectedMultigraph",
    "DegreeProfile",
    "build_ldn",
    "is_strongly_connected",
    "is_connected_undirected",
    "strongly_connected_components",
    "is_isomorphic_to_ldn",
    "ldn_isomorphism",
    "random_eulerian",
    "random_strongly_connected_eulerian",
]


@dataclass(frozen=True)
class DegreeProfile:
    in_degrees: tuple[int, ...]
    out_degrees: tuple[int, ...]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(zip(self.in_degrees, self.out_degrees))

    def is_balanced(self) -> bool:
        return self.in_degrees == self.out_degrees

    def is_regular(self, d: int) -> bool:
        return all(i == d and o == d for i, o in self)

    def imbalance(self, x: int) -> int:
        """in_degree(x) - out_degree(x)."""
        return self.in_degrees[x] - self.out_degrees[x]


@dataclass(frozen=True)
class DirectedMultigraph:
    num_vertices: int
    out_edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("a graph needs at least one vertex")
        if len(self.out_edges) != self.num_vertices:
            raise ValueError(
                f"expected {self.num_vertices} out-edge lists, got {len(self.out_edges)}"
            )
        canon = []
        for x, heads in enumerate(self.out_edges):
            heads = tuple(sorted(int(h) for h in heads))
            for h in heads:
                if not 0 <= h < self.num_vertices:
                    raise ValueError(f"edge {x}->{h} leaves the vertex set")
            canon.append(heads)
        object.__setattr__(self, "out_edges", tuple(canon))

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[Sequence[int]]) -> "DirectedMultigraph":
        out: list[list[int]] = [[] for _ in range(num_vertices)]
        for tail, head in edges:
            if not 0 <= tail < num_vertices:
                raise ValueError(f"edge {tail}->{head} leaves the vertex set")
            out[tail].append(head)
        return cls(num_vertices, tuple(tuple(h) for h in out))

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (tail, head) pairs in lexicographic order."""
        return [(x, h) for x, heads in enumerate(self.out_edges) for h in heads]

    @property
    def num_edges(self) -> int:
        return sum(len(h) for h in self.out_edges)

    def out_degree(self, x: int) -> int:
        return len(self.out_edges[x])

    def in_degree(self, x: int) -> int:
        return self.degree_profile().in_degrees[x]

    def degree_profile(self) -> DegreeProfile:
        indeg = [0] * self.num_vertices
        for heads in self.out_edges:
            for h in heads:
                indeg[h] += 1
        return DegreeProfile(tuple(indeg), tuple(len(h) for h in self.out_edges))

    def multiplicity(self, x: int, y: int) -> int:
        return self.out_edges[x].count(y)

    def out_multiplicities(self, x: int) -> dict[int, int]:
        return dict(Counter(self.out_edges[x]))

    def in_neighbors(self, y: int) -> list[int]:
        """Distinct tails of edges into y, ascending (y itself included if it has a loop)."""
        return sorted({x for x, heads in enumerate(self.out_edges) if y in heads})

    def out_neighbors(self, x: int) -> list[int]:
        return sorted(set(self.out_edges[x]))

    def loops(self, x: int) -> int:
        return self.out_edges[x].count(x)

    def relabel(self, mapping: Sequence[int]) -> "DirectedMultigraph":
        """Graph with vertex x renamed to mapping[x]; mapping must be a bijection."""
        if sorted(mapping) != list(range(self.num_vertices)):
            raise ValueError("relabeling must be a permutation of the vertex set")
        return DirectedMultigraph.from_edges(
            self.num_vertices, ((mapping[x], mapping[h]) for x, h in self.edges())
        )

    def induced(self, keep: Iterable[int]) -> tuple["DirectedMultigraph", list[int]]:
        """Induced subgraph on `keep`, densely relabeled; returns (graph, new->old map)."""
        old = sorted(set(keep))
        if not old:
            raise ValueError("cannot induce on an empty vertex set")
        new_of = {v: k for k, v in enumerate(old)}
        edges = [
            (new_of[x], new_of[h]) for x in old for h in self.out_edges[x] if h in new_of
        ]
        return DirectedMultigraph.from_edges(len(old), edges), old

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {"vertices": self.num_vertices, "edges": [list(e) for e in self.edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "DirectedMultigraph":
        try:
            n = int(data["vertices"])
            edges = [(int(t), int(h)) for t, h in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed graph JSON: {exc}") from exc
        return cls.from_edges(n, edges)

    @classmethod
    def from_json(cls, text: str) -> "DirectedMultigraph":
        return cls.from_dict(json.loads(text))


def build_ldn(d: int, n: int) -> DirectedMultigraph:
    """The line 0..n with d-1 loops at both ends, d-2 loops inside, and both line directions."""
    if d < 2:
        raise ValueError(f"L(d,n) needs d >= 2, got d={d}")
    if n < 1:
        raise ValueError(f"L(d,n) needs n >= 1, got n={n}")
    out = []
    for k in range(n + 1):
        heads = [k] * (d - 1 if k in (0, n) else d - 2)
        if k != 0:
            heads.append(k - 1)
        if k != n:
            heads.append(k + 1)
        out.append(tuple(heads))
    return DirectedMultigraph(n + 1, tuple(out))


# -- connectivity -----------------------------------------------------------


def strongly_connected_components(g: DirectedMultigraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative so deep graphs don't hit the recursion limit."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    succ = [g.out_neighbors(x) for x in g.vertices]

    for root in g.vertices:
        if root in index:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, pos = work[-1]
            if pos < len(succ[v]):
                work[-1] = (v, pos + 1)
                w = succ[v][pos]
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def is_strongly_connected(g: DirectedMultigraph) -> bool:
    return len(strongly_connected_components(g)) == 1


def reachable_from(g: DirectedMultigraph, source: int) -> set[int]:
    seen = {source}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for h in g.out_edges[x]:
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return seen


def undirected_components(g: DirectedMultigraph, avoid: Iterable[int] = ()) -> list[set[int]]:
    """Components of the undirected collapse, ignoring the vertices in `avoid`."""
    avoid = set(avoid)
    adj: list[set[int]] = [set() for _ in g.vertices]
    for x, h in g.edges():
        if x in avoid or h in avoid:
            continue
        adj[x].add(h)
        adj[h].add(x)
    comps, seen = [], set()
    for v in g.vertices:
        if v in avoid or v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for w in adj[x]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def is_connected_undirected(g: DirectedMultigraph) -> bool:
    return len(undirected_components(g)) == 1


# -- L(d,n) recognition -----------------------------------------------------


def ldn_isomorphism(g: DirectedMultigraph, d: int, n: int) -> list[int] | None:
    """Relabeling `phi` with g.relabel(phi) == build_ldn(d, n), or None.

    L(d,n) is a line, so once an endpoint is fixed the labeling is forced:
    follow the unique non-loop edge away from the previous vertex.
    """
    if d < 2 or n < 1 or g.num_vertices != n + 1:
        return None
    if not g.degree_profile().is_regular(d):
        return None
    target = build_ldn(d, n)
    for start in g.vertices:
        if g.loops(start) != d - 1:
            continue
        phi = [-1] * g.num_vertices
        phi[start] = 0
        prev, cur = None, start
        ok = True
        for k in range(1, n + 1):
            forward = [h for h in g.out_edges[cur] if h != cur and h != prev]
            if len(forward) != 1 or phi[forward[0]] != -1:
                ok = False
                break
            prev, cur = cur, forward[0]
            phi[cur] = k
        if ok and g.relabel(phi) == target:
            return phi
    return None


def is_isomorphic_to_ldn(g: DirectedMultigraph, d: int, n: int) -> bool:
    return ldn_isomorphism(g, d, n) is not None


# -- random instances -------------------------------------------------------


def random_eulerian(num_vertices: int, d: int, seed) -> DirectedMultigraph:
    """Superpose d uniform permutations: x -> perm_j(x) for j < d.

    Every vertex gets exactly one in- and one out-edge per permutation, so
    the result is d-in/d-out by construction. `seed` is anything accepted by
    numpy.random.default_rng.
    """
    if num_vertices < 1 or d < 1:
        raise ValueError("need num_vertices >= 1 and d >= 1")
    rng = np.random.default_rng(seed)
    edges = []
    for _ in range(d):
        perm = rng.permutation(num_vertices)
        edges.extend((x, int(perm[x])) for x in range(num_vertices))
    return DirectedMultigraph.from_edges(num_vertices, edges)


def random_strongly_connected_eulerian(
    num_vertices: int, d: int, rng: np.random.Generator, max_tries: int = 10_000
) -> tuple[DirectedMultigraph, int]:
    """Rejection-sample a strongly connected d-regular instance; returns (graph, rejections)."""
    for rejected in range(max_tries):
        g = random_eulerian(num_vertices, d, rng)
        if is_strongly_connected(g):
            return g, rejected
    raise RuntimeError(
        f"no strongly connected sample in {max_tries} tries (N={num_vertices}, d={d})"
    )
