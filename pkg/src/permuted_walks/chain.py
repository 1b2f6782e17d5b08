"""Simple random walk on a directed multigraph.

From x the walk follows a uniformly chosen out-edge, so P(x, y) is the
multiplicity of x->y divided by out_degree(x).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .digraph import DirectedMultigraph, is_strongly_connected
from .linalg import SingularSystemError, solve_exact, solve_exact_multi, solve_float

DEFAULT_MAX_EXACT_STATES = 2000
SIM_CHUNK = 10_000


def max_exact_states() -> int:
    raw = os.environ.get("PERMWALK_MAX_STATES")
    return int(raw) if raw else DEFAULT_MAX_EXACT_STATES


def resolve_mode(mode: str, num_states: int) -> str:
    if mode == "auto":
        return "exact" if num_states <= max_exact_states() else "float"
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


def rational_json(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


@dataclass(frozen=True)
class MarkovChain:
    states: int
    rows: tuple[tuple[tuple[int, Fraction], ...], ...]
    graph: DirectedMultigraph = field(repr=False, compare=False)

    def prob(self, x: int, y: int) -> Fraction:
        return dict(self.rows[x]).get(y, Fraction(0))

    def dense(self) -> list[list[Fraction]]:
        p = [[Fraction(0)] * self.states for _ in range(self.states)]
        for x, row in enumerate(self.rows):
            for y, q in row:
                p[x][y] = q
        return p

    def dense_float(self) -> np.ndarray:
        p = np.zeros((self.states, self.states))
        for x, row in enumerate(self.rows):
            for y, q in row:
                p[x, y] = float(q)
        return p


@dataclass(frozen=True)
class HittingResult:
    source: int
    targets: tuple[int, ...]
    value: Fraction | float
    method: str
    trials: int | None = None
    stderr: float | None = None

    def to_dict(self) -> dict:
        out = {"source": self.source, "targets": list(self.targets), "method": self.method}
        if isinstance(self.value, Fraction):
            out["value"] = rational_json(self.value)
            out["decimal"] = float(self.value)
        else:
            out["value"] = float(self.value)
        if self.trials is not None:
            out["trials"] = self.trials
            out["stderr"] = self.stderr
        return out


def from_graph(g: DirectedMultigraph) -> MarkovChain:
    rows = []
    for x in g.vertices:
        deg = g.out_degree(x)
        if deg == 0:
            raise ValueError(f"vertex {x} has out-degree 0; the walk is undefined there")
        rows.append(
            tuple(sorted((y, Fraction(m, deg)) for y, m in g.out_multiplicities(x).items()))
        )
    return MarkovChain(g.num_vertices, tuple(rows), g)


def _require_strong(g: DirectedMultigraph) -> None:
    if not is_strongly_connected(g):
        raise ValueError("graph is not strongly connected")


def _check_states(g: DirectedMultigraph, states: Iterable[int]) -> None:
    for s in states:
        if not 0 <= s < g.num_vertices:
            raise ValueError(f"state {s} out of range 0..{g.num_vertices - 1}")


def stationary(g: DirectedMultigraph) -> list[Fraction]:
    """Exact stationary distribution of the walk on a strongly connected graph."""
    _require_strong(g)
    profile = g.degree_profile()
    chain = from_graph(g)
    if profile.is_balanced():
        total = sum(profile.out_degrees)
        pi = [Fraction(o, total) for o in profile.out_degrees]
    else:
        # pi (P - I) = 0 with one equation swapped for sum(pi) = 1
        n = g.num_vertices
        p = chain.dense()
        a = [[p[x][y] - (1 if x == y else 0) for x in range(n)] for y in range(n)]
        a[-1] = [Fraction(1)] * n
        rhs = [Fraction(0)] * (n - 1) + [Fraction(1)]
        pi = solve_exact(a, rhs)
    flow = [Fraction(0)] * g.num_vertices
    for x, row in enumerate(chain.rows):
        for z, q in row:
            flow[z] += pi[x] * q
    if flow != pi or sum(pi) != 1:
        raise AssertionError("stationary check failed: pi P != pi")
    return pi


def hitting_vector(g: DirectedMultigraph, targets: Iterable[int], mode: str = "exact"):
    """E_x[tau_targets] for every x, as a list (exact) or ndarray (float)."""
    targets = sorted(set(targets))
    if not targets:
        raise ValueError("target set is empty")
    _check_states(g, targets)
    tset = set(targets)
    free = [x for x in g.vertices if x not in tset]
    pos = {x: k for k, x in enumerate(free)}
    mode = resolve_mode(mode, len(free))
    # scaled by out-degree: deg(x) h(x) - sum_y m(x,y) h(y) = deg(x)
    a = [[0] * len(free) for _ in free]
    b = []
    for x in free:
        row = a[pos[x]]
        row[pos[x]] += g.out_degree(x)
        for y in g.out_edges[x]:
            if y in pos:
                row[pos[y]] -= 1
        b.append(g.out_degree(x))
    try:
        sol = solve_exact(a, b) if mode == "exact" else solve_float(a, b)
    except SingularSystemError as exc:
        raise ValueError("targets are unreachable from some state") from exc
    if mode == "exact":
        h = [Fraction(0)] * g.num_vertices
    else:
        h = np.zeros(g.num_vertices)
    for x in free:
        h[x] = sol[pos[x]]
    return h


def expected_hitting(
    g: DirectedMultigraph, source: int, targets: Iterable[int], mode: str = "exact"
) -> HittingResult:
    targets = tuple(sorted(set(targets)))
    _check_states(g, (source, *targets))
    if source in targets:
        zero = Fraction(0) if resolve_mode(mode, 0) == "exact" else 0.0
        return HittingResult(source, targets, zero, resolve_mode(mode, 0))
    resolved = resolve_mode(mode, g.num_vertices - len(targets))
    h = hitting_vector(g, targets, resolved)
    value = h[source] if resolved == "exact" else float(h[source])
    return HittingResult(source, targets, value, resolved)


def expected_return(g: DirectedMultigraph, i: int, mode: str = "exact") -> HittingResult:
    """E_i[tau_i^+] = 1 + sum_y P(i,y) E_y[tau_i]."""
    _check_states(g, (i,))
    if g.out_degree(i) == 0:
        raise ValueError(f"vertex {i} has out-degree 0")
    resolved = resolve_mode(mode, g.num_vertices - 1)
    h = hitting_vector(g, [i], resolved)
    deg = g.out_degree(i)
    if resolved == "exact":
        value = 1 + sum((h[y] for y in g.out_edges[i]), Fraction(0)) / deg
    else:
        value = 1.0 + float(sum(h[y] for y in g.out_edges[i])) / deg
    return HittingResult(i, (i,), value, resolved)


def absorption_distribution(g: DirectedMultigraph, source: int, targets: Iterable[int]) -> dict[int, Fraction]:
    """P_source(X_{tau_targets} = t) for each t, one absorbing solve per target."""
    targets = sorted(set(targets))
    _check_states(g, (source, *targets))
    if source in targets:
        return {t: Fraction(int(t == source)) for t in targets}
    tset = set(targets)
    free = [x for x in g.vertices if x not in tset]
    pos = {x: k for k, x in enumerate(free)}
    a = [[0] * len(free) for _ in free]
    for x in free:
        a[pos[x]][pos[x]] += g.out_degree(x)
        for y in g.out_edges[x]:
            if y in pos:
                a[pos[x]][pos[y]] -= 1
    out = {}
    for t in targets:
        b = [g.out_edges[x].count(t) for x in free]
        out[t] = solve_exact(a, b)[pos[source]]
    return out


def hitting_matrix(g: DirectedMultigraph, mode: str = "exact"):
    """All-pairs H[x][y] = E_x[tau_y] from one fundamental-matrix solve.

    With Z = (I - P + 1 pi^T)^{-1}, E_x[tau_y] = (Z[y][y] - Z[x][y]) / pi(y).
    """
    pi = stationary(g)
    n = g.num_vertices
    resolved = resolve_mode(mode, n)
    p = from_graph(g).dense()
    a = [[(1 if x == y else 0) - p[x][y] + pi[y] for y in range(n)] for x in range(n)]
    if resolved == "exact":
        ident = [[Fraction(int(x == y)) for y in range(n)] for x in range(n)]
        z = solve_exact_multi(a, ident)
        return [[(z[y][y] - z[x][y]) / pi[y] for y in range(n)] for x in range(n)]
    af = np.array([[float(v) for v in row] for row in a])
    z = solve_float(af, np.eye(n))
    pif = np.array([float(v) for v in pi])
    return (np.diag(z)[None, :] - z) / pif[None, :]


def max_hitting(g: DirectedMultigraph, mode: str = "exact"):
    """(max_{x,y} E_x[tau_y], x, y) with ties broken by lowest (x, y)."""
    h = hitting_matrix(g, mode)
    best = (h[0][0], 0, 0)
    for x in g.vertices:
        for y in g.vertices:
            if h[x][y] > best[0]:
                best = (h[x][y], x, y)
    return best


# -- Monte Carlo ------------------------------------------------------------


def _padded_heads(g: DirectedMultigraph) -> tuple[np.ndarray, np.ndarray]:
    width = max(g.out_degree(x) for x in g.vertices)
    heads = np.zeros((g.num_vertices, width), dtype=np.int64)
    for x in g.vertices:
        heads[x, : g.out_degree(x)] = g.out_edges[x]
    return heads, np.array([g.out_degree(x) for x in g.vertices], dtype=np.int64)


def _simulate_chunk(args) -> np.ndarray:
    g, source, targets, trials, seed_seq, step_cap = args
    rng = np.random.default_rng(seed_seq)
    heads, deg = _padded_heads(g)
    is_target = np.zeros(g.num_vertices, dtype=bool)
    is_target[list(targets)] = True
    pos = np.full(trials, source, dtype=np.int64)
    lengths = np.zeros(trials, dtype=np.int64)
    active = np.flatnonzero(~is_target[pos])
    steps = 0
    while active.size:
        if steps >= step_cap:
            raise RuntimeError(
                f"{active.size} walk(s) exceeded the step cap of {step_cap}; "
                "targets may be unreachable"
            )
        cur = pos[active]
        pick = (rng.random(active.size) * deg[cur]).astype(np.int64)
        nxt = heads[cur, pick]
        pos[active] = nxt
        lengths[active] += 1
        active = active[~is_target[nxt]]
        steps += 1
    return lengths


def simulate_hitting(
    g: DirectedMultigraph,
    source: int,
    targets: Iterable[int],
    trials: int,
    seed: int,
    step_cap: int | None = None,
    jobs: int = 1,
) -> HittingResult:
    """Monte Carlo estimate of E_source[tau_targets].

    Trials are split into fixed chunks with RNG streams spawned from `seed`,
    so the estimate does not depend on `jobs`.
    """
    targets = tuple(sorted(set(targets)))
    _check_states(g, (source, *targets))
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if step_cap is None:
        step_cap = 10**6 * g.num_vertices
    sizes = [SIM_CHUNK] * (trials // SIM_CHUNK)
    if trials % SIM_CHUNK:
        sizes.append(trials % SIM_CHUNK)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    tasks = [(g, source, targets, s, ss, step_cap) for s, ss in zip(sizes, streams)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_simulate_chunk, tasks))
    else:
        parts = [_simulate_chunk(t) for t in tasks]
    lengths = np.concatenate(parts)
    mean = float(lengths.mean())
    stderr = float(lengths.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return HittingResult(source, targets, mean, "monte_carlo", trials=trials, stderr=stderr)
