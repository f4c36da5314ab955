"""Brute-force oracle: paths, circuits and cycles of small graphs, counted directly.

Nothing in this module goes through the transformed-label machinery, so
its numbers can be compared against :mod:`pathseries.transfer` and the
closed forms in :mod:`pathseries.catalog`.

A path is a sequence of half-edge ids ``(p_1, ..., p_n)`` with
``target(p_i) == source(p_{i+1})``.  Position ``i`` is a bump when
``partner(p_i) == p_{i+1}``; a self-inverse half-edge followed by itself
is a bump.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exceptions import BudgetError, GraphValidationError
from .graph import Graph, MarkedGraph, distances
from .series import BivariateSeries, PowerSeries, UPoly, format_rational

__all__ = [
    "DEFAULT_BUDGET",
    "PathCensus",
    "CycleCensus",
    "path_census",
    "cycle_census",
    "periods",
    "bump_count",
    "cyclic_bump_count",
    "bump_scheme_sum",
    "all_paths",
    "walk_distance_census",
]

DEFAULT_BUDGET = 10**8


def bump_count(g: Graph, path) -> int:
    return sum(1 for a, b in zip(path, path[1:]) if g.partner[a] == b)


def cyclic_bump_count(g: Graph, cycle) -> int:
    n = len(cycle)
    return sum(1 for i in range(n) if g.partner[cycle[i]] == cycle[(i + 1) % n])


@dataclass
class PathCensus:
    """Counts ``f[m, n]`` of birth-to-death paths of length ``n`` with ``m`` bumps."""

    max_len: int
    counts: dict
    birth: int = 0
    death: int = 0
    weighted: bool = False

    def count(self, m: int, n: int):
        return self.counts.get((m, n), 0)

    def as_bivariate(self) -> BivariateSeries:
        return BivariateSeries.from_terms(self.counts, self.max_len)

    def green(self) -> PowerSeries:
        """Row sums: the path series at ``u = 1``."""
        c = [0] * (self.max_len + 1)
        for (m, n), v in self.counts.items():
            c[n] += v
        return PowerSeries(c, self.max_len)

    def proper(self) -> PowerSeries:
        """The ``m = 0`` row: proper (bump-free) paths."""
        return PowerSeries([self.count(0, n) for n in range(self.max_len + 1)], self.max_len)

    def to_rows(self):
        return sorted(((n, m, v) for (m, n), v in self.counts.items()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "m", "numerator", "denominator"])
        for n, m, v in self.to_rows():
            v = Fraction(v)
            w.writerow([n, m, v.numerator, v.denominator])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "max_len": self.max_len,
            "birth": self.birth,
            "death": self.death,
            "counts": [{"n": n, "m": m, "count": format_rational(v)} for n, m, v in self.to_rows()],
        }


@dataclass
class CycleCensus:
    """Primitive cycle representatives by length, each with its cyclic bump count."""

    max_len: int
    cycles: dict = field(default_factory=dict)

    def count(self, length: int, cbc: int | None = None) -> int:
        reps = self.cycles.get(length, [])
        return len(reps) if cbc is None else sum(1 for _, c in reps if c == cbc)

    def all(self):
        for length in sorted(self.cycles):
            yield from self.cycles[length]

    def to_json(self) -> dict:
        return {
            "max_len": self.max_len,
            "cycles": [
                {"length": len(rep), "cbc": c, "half_edges": list(rep)} for rep, c in self.all()
            ],
        }


def _guard(g: Graph, max_len: int, budget: int, starts: int = 1) -> None:
    d = max(g.degrees(), default=0)
    est = starts * (d**max_len if d > 1 else max_len + 1)
    if est > budget:
        raise BudgetError(
            f"enumeration would visit about {est:.3g} nodes (budget {budget:.3g}); "
            "lower the length or raise the budget"
        )


def path_census(
    mg: MarkedGraph, max_len: int, method: str = "dp", weighted: bool = False, budget: int = DEFAULT_BUDGET
) -> PathCensus:
    """Count birth-to-death paths by length and bump count.

    ``method="dp"`` sweeps lengths keeping, for every final half-edge, the
    bump-count distribution of the paths ending there.  ``method="dfs"``
    lists the paths one by one and is subject to ``budget``.  With
    ``weighted=True`` each path counts the product of its half-edge weights.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    g = mg.graph
    if method == "dfs":
        return _census_dfs(mg, max_len, weighted, budget)
    if method != "dp":
        raise ValueError(f"unknown method {method!r}")
    counts: dict = {}
    if mg.birth == mg.death:
        counts[(0, 0)] = 1
    out = g._out()
    part, src, w = g.partner, g.source, g.weights
    # state[e] = list indexed by bump count
    state = {}
    for e in out[mg.birth]:
        state[e] = [w[e] if weighted else 1]
    for n in range(1, max_len + 1):
        for e, dist in state.items():
            if src[part[e]] == mg.death:
                for m, c in enumerate(dist):
                    if c:
                        counts[(m, n)] = counts.get((m, n), 0) + c
        if n == max_len:
            break
        nxt = {}
        for e, dist in state.items():
            pe = part[e]
            for f in out[src[pe]]:
                wf = w[f] if weighted else 1
                shift = 1 if f == pe else 0
                acc = nxt.get(f)
                need = len(dist) + shift
                if acc is None:
                    acc = nxt[f] = [0] * need
                elif len(acc) < need:
                    acc.extend([0] * (need - len(acc)))
                for m, c in enumerate(dist):
                    if c:
                        acc[m + shift] += c * wf
        state = nxt
    counts = {k: v for k, v in counts.items() if v != 0}
    return PathCensus(max_len, counts, mg.birth, mg.death, weighted)


def all_paths(g: Graph, start: int, length: int, end: int | None = None, budget: int = DEFAULT_BUDGET):
    """Yield every path of exactly ``length`` from ``start`` (ending at ``end`` if given)."""
    _guard(g, length, budget)
    out = g._out()
    part, src = g.partner, g.source
    stack = [(start, ())]
    while stack:
        v, path = stack.pop()
        if len(path) == length:
            if end is None or v == end:
                yield path
            continue
        for e in reversed(out[v]):
            stack.append((src[part[e]], path + (e,)))


def _census_dfs(mg: MarkedGraph, max_len: int, weighted: bool, budget: int) -> PathCensus:
    g = mg.graph
    _guard(g, max_len, budget)
    out = g._out()
    part, src, w = g.partner, g.source, g.weights
    counts: dict = {}

    def walk(v, last, n, m, weight):
        if v == mg.death:
            counts[(m, n)] = counts.get((m, n), 0) + weight
        if n == max_len:
            return
        for e in out[v]:
            walk(src[part[e]], e, n + 1, m + (1 if last is not None and part[last] == e else 0),
                 weight * w[e] if weighted else 1)

    walk(mg.birth, None, 0, 0, 1)
    counts = {k: v for k, v in counts.items() if v != 0}
    return PathCensus(max_len, counts, mg.birth, mg.death, weighted)


def _is_primitive_min_rotation(seq: tuple) -> bool:
    n = len(seq)
    for k in range(1, n):
        rot = seq[k:] + seq[:k]
        if rot < seq:
            return False
        if rot == seq:
            return False  # proper power
    return True


def cycle_census(
    g: Graph, max_len: int, exclude_wrapped: bool = False, budget: int = DEFAULT_BUDGET
) -> CycleCensus:
    """One representative per primitive cycle up to ``max_len``.

    The representative is the lexicographically least rotation of the
    half-edge sequence; proper powers are dropped.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    _guard(g, max_len - 1, budget, starts=g.half_edge_count)
    out = g._out()
    part, src = g.partner, g.source
    skip = g.wrapped if exclude_wrapped else frozenset()
    found: dict = {}
    for e0 in range(g.half_edge_count):
        if e0 in skip:
            continue
        home = src[e0]
        stack = [(src[part[e0]], (e0,))]
        while stack:
            v, path = stack.pop()
            if v == home and _is_primitive_min_rotation(path):
                found.setdefault(len(path), []).append((path, cyclic_bump_count(g, path)))
            if len(path) == max_len:
                continue
            for e in out[v]:
                if e >= e0 and e not in skip:
                    stack.append((src[part[e]], path + (e,)))
    for reps in found.values():
        reps.sort()
    return CycleCensus(max_len, found)


def periods(g: Graph, bound: int) -> dict:
    """gcd of proper-cycle lengths (``p``) and of circuit lengths (``q``) up to ``bound``.

    Wrapped half-edges are truncation artifacts and are left out of both
    searches.  ``math.inf`` stands for the gcd of an empty set.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    keep = [e for e in range(g.half_edge_count) if e not in g.wrapped]
    pos = {e: i for i, e in enumerate(keep)}
    h = len(keep)
    nb = np.zeros((h, h), dtype=bool)
    for e in keep:
        for f in g.out_edges(g.target(e)):
            if f in pos and f != g.partner[e]:
                nb[pos[e], pos[f]] = True
    a = np.zeros((g.vertex_count, g.vertex_count), dtype=bool)
    for e in keep:
        a[g.source[e], g.target(e)] = True
    p = q = 0
    pn, an = np.eye(h, dtype=bool), np.eye(g.vertex_count, dtype=bool)
    for n in range(1, bound + 1):
        pn = (pn.astype(np.int64) @ nb.astype(np.int64)) > 0
        an = (an.astype(np.int64) @ a.astype(np.int64)) > 0
        if h and pn.diagonal().any():
            p = math.gcd(p, n)
        if an.diagonal().any():
            q = math.gcd(q, n)
    return {"p": p or math.inf, "q": q or math.inf}


def _check_path(g: Graph, path) -> None:
    for i, e in enumerate(path):
        if not isinstance(e, int) or not 0 <= e < g.half_edge_count:
            raise GraphValidationError(f"position {i}: unknown half-edge {e!r}", i)
    for i in range(len(path) - 1):
        if g.target(path[i]) != g.source[path[i + 1]]:
            raise GraphValidationError(
                f"half-edges {path[i]} and {path[i + 1]} are not consecutive", i + 1
            )


def bump_scheme_sum(g: Graph, path) -> UPoly:
    """Sum of ``(u - 1)^{|B|}`` over all ways to write ``path`` as a path with a bump scheme inserted.

    The path is parsed left to right.  At a vertex one may read a squiggle
    ``(x, x', ..., x, x')`` of even length ``2k >= 2`` (weight ``2k - 1``)
    and stay at the vertex, or read a kept edge ``e`` preceded by a
    squiggle along ``e`` of even length ``2k >= 0`` (weight ``2k``).
    """
    path = tuple(path)
    _check_path(g, path)
    n = len(path)
    part = g.partner
    um1 = UPoly((-1, 1))

    # alt[i] = length of the longest alternating run x, x', x, ... starting at i
    alt = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        alt[i] = 1 + alt[i + 1] if i + 1 < n and part[path[i]] == path[i + 1] else 1

    @lru_cache(maxsize=None)
    def rest(pos: int) -> UPoly:
        total = UPoly((1,)) if pos == n else UPoly(())
        run = alt[pos] if pos < n else 0
        for length in range(2, run + 1, 2):
            total = total + um1 ** (length - 1) * rest(pos + length)
        for length in range(1, run + 1, 2):
            total = total + um1 ** (length - 1) * rest(pos + length)
        return total

    return rest(0)


def walk_distance_census(mg: MarkedGraph, max_len: int) -> dict:
    """Counts of walks from birth to any vertex keyed by ``(m, n, distance)``.

    ``distance`` is the graph distance from birth to the endpoint.  On a
    wrapped ball of radius ``r`` about birth the counts are exact for
    ``n <= r``.
    """
    g = mg.graph
    dist = distances(g, mg.birth)
    out = g._out()
    part, src = g.partner, g.source
    counts = {(0, 0, 0): 1}
    state = {e: [1] for e in out[mg.birth]}
    for n in range(1, max_len + 1):
        for e, row in state.items():
            k = dist[src[part[e]]]
            for m, c in enumerate(row):
                if c:
                    counts[(m, n, k)] = counts.get((m, n, k), 0) + c
        if n == max_len:
            break
        nxt = {}
        for e, row in state.items():
            pe = part[e]
            for f in out[src[pe]]:
                shift = 1 if f == pe else 0
                acc = nxt.setdefault(f, [])
                need = len(row) + shift
                if len(acc) < need:
                    acc.extend([0] * (need - len(acc)))
                for m, c in enumerate(row):
                    if c:
                        acc[m + shift] += c
        state = nxt
    return counts
