"""Extremal searches over permutation walks and random Eulerian graphs.

All values are exact. Work is split into chunks whose results are merged
in a fixed order, so reports do not depend on the number of workers.
"""

from __future__ import annotations

import csv
import io
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable, Sequence

import numpy as np

from .chain import hitting_vector, max_hitting, rational_json
from .digraph import is_isomorphic_to_ldn, ldn_isomorphism, random_strongly_connected_eulerian
from .permwalk import (
    Permutation,
    build_perm_chain,
    build_perm_chain_variant,
    build_signed_chain,
)

MAX_N_UNSIGNED = 8
MAX_N_SIGNED_EXHAUSTIVE = 3
MAX_N_SIGNED_SAMPLED = 10


class GuardError(ValueError):
    """Requested search size is beyond the configured guard."""


@dataclass
class SearchReport:
    kind: str
    params: dict
    max_value: Fraction
    argmax: list[str]
    bound: Fraction
    evaluated: int
    records: list[tuple[str, Fraction]] | None = None
    counterexamples: list[dict] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "params": self.params,
            "max_value": rational_json(self.max_value),
            "max_decimal": float(self.max_value),
            "argmax": self.argmax,
            "bound": rational_json(self.bound),
            "evaluated": self.evaluated,
            "checks": self.checks,
            "counterexamples": self.counterexamples,
            "notes": self.notes,
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    def to_text(self) -> str:
        rows = [("kind", self.kind)]
        rows += [(k, str(v)) for k, v in self.params.items()]
        rows += [
            ("evaluated", str(self.evaluated)),
            ("max", f"{self.max_value} ({float(self.max_value):.6g})"),
            ("bound", f"{self.bound} ({float(self.bound):.6g})"),
            ("argmax", "; ".join(self.argmax[:20]) + (" ..." if len(self.argmax) > 20 else "")),
            ("argmax size", str(len(self.argmax))),
        ]
        rows += [(f"check {k}", "pass" if v else "FAIL") for k, v in self.checks.items()]
        rows.append(("counterexamples", str(len(self.counterexamples))))
        width = max(len(k) for k, _ in rows)
        lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)

    def records_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["perm", "value_num", "value_den", "is_max"])
        for name, v in self.records or []:
            w.writerow([name, v.numerator, v.denominator, int(v == self.max_value)])
        return buf.getvalue()


def _run_chunks(func: Callable, tasks: Sequence, jobs: int) -> list:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, tasks))
    return [func(t) for t in tasks]


def _guard(n: int, limit: int, override: int | None, what: str) -> None:
    if override is not None and override != limit:
        warnings.warn(f"{what} guard overridden: {limit} -> {override}", stacklevel=3)
        limit = override
    if not 1 <= n <= limit:
        raise GuardError(f"{what}: n={n} is outside the guard range 1..{limit}")


# -- unsigned permutations ----------------------------------------------------

_UNSIGNED_BUILDERS = {"main": build_perm_chain, "remark3": build_perm_chain_variant}


def _unsigned_chunk(task) -> list[tuple[tuple[int, ...], Fraction]]:
    n, variant, first = task
    build = _UNSIGNED_BUILDERS[variant]
    rest = [v for v in range(n + 1) if v != first]
    out = []
    for tail in permutations(rest):
        images = (first, *tail)
        g = build(Permutation(images))
        out.append((images, hitting_vector(g, [n])[0]))
    return out


def exhaustive_perm_search(
    n: int,
    variant: str = "main",
    jobs: int = 1,
    keep_records: bool = False,
    max_n: int | None = None,
) -> SearchReport:
    """Evaluate E_0[tau_n] for every permutation of 0..n."""
    if variant not in _UNSIGNED_BUILDERS:
        raise ValueError(f"unknown variant {variant!r}")
    _guard(n, MAX_N_UNSIGNED, max_n, "exhaustive permutation search")
    parts = _run_chunks(_unsigned_chunk, [(n, variant, f) for f in range(n + 1)], jobs)
    values = [item for part in parts for item in part]
    best = max(v for _, v in values)
    argmax = [",".join(map(str, p)) for p, v in values if v == best]
    bound = Fraction(n * n + n)
    identity = ",".join(map(str, range(n + 1)))

    report = SearchReport(
        kind="perm",
        params={"n": n, "variant": variant},
        max_value=best,
        argmax=argmax,
        bound=bound,
        evaluated=len(values),
    )
    if keep_records:
        report.records = [(",".join(map(str, p)), v) for p, v in values]
    report.counterexamples = [
        {"perm": ",".join(map(str, p)), "value": rational_json(v)} for p, v in values if v > bound
    ]
    report.checks["max_equals_bound"] = best == bound
    report.checks["identity_in_argmax"] = identity in argmax
    if best != bound:
        report.counterexamples.append({"reason": "maximum differs from n^2+n", "max": rational_json(best)})
    if variant == "main" and n >= 2:
        report.checks["unique_identity_argmax"] = argmax == [identity]
        for p in argmax:
            if p != identity:
                g = build_perm_chain(Permutation.parse(p))
                phi = ldn_isomorphism(g, 2, n)
                order = None if phi is None else sorted(g.vertices, key=phi.__getitem__)
                report.counterexamples.append({
                    "perm": p,
                    "reason": "non-identity maximizer",
                    "value": rational_json(best),
                    "graph": g.to_dict(),
                    "line_order": order,
                })
                shape = "not a copy of L(2,n)" if order is None else (
                    "a relabelled L(2,n) along " + "-".join(map(str, order))
                )
                report.notes.append(f"{p} also attains {best}; its walk graph is {shape}")
    elif len(argmax) > 1:
        report.notes.append(
            f"maximum {best} is attained by {len(argmax)} permutations: {'; '.join(argmax)}"
        )
    if n == 1 and variant == "main":
        report.notes.append(
            "n=1 is degenerate: the swap walk graph is also a copy of L(2,1), so uniqueness is not claimed"
        )
    return report


# -- random Eulerian graphs ---------------------------------------------------


def _sweep_chunk(task):
    n, d, streams, offset = task
    out = []
    for t, ss in enumerate(streams):
        g, rejected = random_strongly_connected_eulerian(n + 1, d, np.random.default_rng(ss))
        value, x, y = max_hitting(g)
        out.append((offset + t, g, rejected, value, x, y))
    return out


def random_graph_sweep(
    n: int, d: int, trials: int, seed: int = 0, jobs: int = 1, chunk: int = 100
) -> SearchReport:
    """max_{x,y} E_x[tau_y] on random strongly connected d-regular graphs with n+1 vertices."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    streams = np.random.SeedSequence(seed).spawn(trials)
    tasks = [(n, d, streams[s : s + chunk], s) for s in range(0, trials, chunk)]
    results = [r for part in _run_chunks(_sweep_chunk, tasks, jobs) for r in part]

    bound = Fraction(d * n * (n + 1), 2)
    best = max(r[3] for r in results)
    report = SearchReport(
        kind="sweep",
        params={"n": n, "d": d, "trials": trials, "seed": seed},
        max_value=best,
        argmax=[f"trial{r[0]}" for r in results if r[3] == best],
        bound=bound,
        evaluated=trials,
    )
    equal = 0
    for idx, g, _, value, x, y in results:
        iso = value == bound and is_isomorphic_to_ldn(g, d, n)
        if value == bound:
            equal += 1
        if value > bound or (value == bound and not iso):
            report.counterexamples.append(
                {"trial": idx, "graph": g.to_dict(), "value": rational_json(value), "x": x, "y": y}
            )
    report.extra = {
        "equality_instances": equal,
        "rejections": sum(r[2] for r in results),
    }
    report.checks["bound_respected"] = best <= bound
    report.checks["equality_only_on_line"] = not report.counterexamples
    return report


# -- signed permutations ------------------------------------------------------


def _signed_value(sigma: Permutation) -> Fraction:
    n = sigma.n
    return hitting_vector(build_signed_chain(sigma), [0, 2 * n])[n]


def _signed_chunk(task):
    n, images_list = task
    return [(imgs, _signed_value(Permutation(imgs, -n))) for imgs in images_list]


def _signed_exhaustive_tasks(n):
    domain = list(range(-n, n + 1))
    tasks = []
    for first in domain:
        rest = [v for v in domain if v != first]
        tasks.append((n, [(first, *t) for t in permutations(rest)]))
    return tasks


def signed_perm_search(
    n: int,
    samples: int | None = None,
    seed: int = 0,
    jobs: int = 1,
    keep_records: bool = False,
    max_n: int | None = None,
) -> SearchReport:
    """E_0[tau_{-n,n}] over permutations of -n..n.

    Exhaustive when `samples` is None, otherwise `samples` uniform random
    permutations plus the identity and the two known co-maximizers. Only
    the ceiling 4n^2+6n+2 is treated as a hard claim.
    """
    if samples is None:
        _guard(n, MAX_N_SIGNED_EXHAUSTIVE, max_n, "exhaustive signed search")
        tasks = _signed_exhaustive_tasks(n)
    else:
        _guard(n, MAX_N_SIGNED_SAMPLED, max_n, "sampled signed search")
        rng = np.random.default_rng(seed)
        domain = np.arange(-n, n + 1)
        drawn = [tuple(int(v) for v in rng.permutation(domain)) for _ in range(samples)]
        tasks = [(n, drawn[s : s + 1000]) for s in range(0, samples, 1000)]
    values = [r for part in _run_chunks(_signed_chunk, tasks, jobs) for r in part]

    identity = Permutation.identity(n, signed=True)
    negation = Permutation(tuple(-x for x in range(-n, n + 1)), -n)
    swap01 = Permutation.transposition(n, 0, 1, signed=True)
    special = {
        "identity": _signed_value(identity),
        "negation": _signed_value(negation),
        "swap01": _signed_value(swap01),
    }
    for sigma in (identity, negation, swap01):
        values.append((sigma.images, _signed_value(sigma)))

    seen, unique = set(), []
    for imgs, v in values:
        if imgs not in seen:
            seen.add(imgs)
            unique.append((imgs, v))
    ceiling = Fraction(4 * n * n + 6 * n + 2)
    best = max(v for _, v in unique)
    report = SearchReport(
        kind="signed",
        params={"n": n, "mode": "exhaustive" if samples is None else "sampled", "samples": samples, "seed": seed},
        max_value=best,
        argmax=[",".join(map(str, p)) for p, v in unique if v == best],
        bound=ceiling,
        evaluated=len(unique),
    )
    if keep_records:
        report.records = [(",".join(map(str, p)), v) for p, v in unique]
    report.counterexamples = [
        {"perm": ",".join(map(str, p)), "value": rational_json(v)} for p, v in unique if v > ceiling
    ]
    report.extra = {k: rational_json(v) for k, v in special.items()}
    report.checks["ceiling_respected"] = best <= ceiling
    report.checks["identity_is_n_squared"] = special["identity"] == n * n
    identity_max = special["identity"] == best
    report.checks["conjecture_identity_attains_max"] = identity_max
    if n >= 2:
        report.checks["negation_is_n_squared"] = special["negation"] == n * n
        report.checks["swap01_is_n_squared"] = special["swap01"] == n * n
        for name in ("negation", "swap01"):
            if special[name] != n * n:
                report.counterexamples.append({"perm": name, "reason": "expected n^2"})
    if not identity_max:
        report.notes.append(
            f"identity gives {special['identity']} but {best} is attained by "
            f"{len(report.argmax)} permutation(s), e.g. {report.argmax[0]}"
        )
    return report


def transposition_value(n: int, k: int) -> Fraction:
    return _signed_value(Permutation.transposition(n, k, k + 1, signed=True))


def transposition_formula(n: int, k: int) -> Fraction:
    return Fraction(n * (2 * n - 3 - 2 * k), n - 1) + n * (n - 2)


def transposition_formula_check(n: int) -> SearchReport:
    """Exact solver against the closed form for swapping k and k+1, 1 <= k <= n-2."""
    if n < 3:
        raise ValueError("need n >= 3")
    rows = []
    for k in range(1, n - 1):
        rows.append((k, transposition_value(n, k), transposition_formula(n, k)))
    negative = {str(k): rational_json(transposition_value(n, k)) for k in range(-n + 1, 0)}
    best = max(v for _, v, _ in rows)
    report = SearchReport(
        kind="transposition",
        params={"n": n},
        max_value=best,
        argmax=[f"k={k}" for k, v, _ in rows if v == best],
        bound=Fraction(n * n),
        evaluated=len(rows),
        records=[(f"k={k}", v) for k, v, _ in rows],
    )
    report.counterexamples = [
        {"k": k, "solver": rational_json(v), "formula": rational_json(f)} for k, v, f in rows if v != f
    ]
    report.checks["formula_matches"] = not report.counterexamples
    report.extra = {"negative_k": negative}
    report.notes.append("negative k is reported without a reference formula")
    return report
