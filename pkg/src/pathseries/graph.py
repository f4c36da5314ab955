"""Half-edge graphs, marked graphs and the graph families used throughout.

A graph is a set of half-edges, each with a source vertex and a partner
under an involution; fixed points of the involution are self-inverse
edges.  The target of a half-edge is the source of its partner.

Infinite graphs only ever appear as finite truncations that record a
*faithful horizon*: walk counts up to that length agree with the infinite
graph.  ``Graph.horizon`` is ``None`` for a graph that is exact as given.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .exceptions import GraphValidationError, ParameterError
from .series import Rational, as_rational, format_rational
from .exceptions import SeriesError

__all__ = [
    "Graph",
    "MarkedGraph",
    "build_from_spec",
    "marked_from_spec",
    "named_family",
    "FAMILIES",
    "ball",
    "free_product_truncate",
    "triangle_contract",
    "add_loops",
    "direct_first",
    "direct_second",
    "adjacency_matrix",
    "distances",
]


@dataclass(frozen=True)
class Graph:
    """Finite half-edge graph.

    Half-edge ids are ``0 .. len(source) - 1``.  ``wrapped`` lists the
    half-edges made self-inverse by truncation.  ``horizon``/``center``
    describe faithfulness: circuits at ``center`` of length at most
    ``horizon`` are counted exactly as in the graph being approximated.
    """

    vertex_count: int
    source: tuple
    partner: tuple
    weights: tuple = None
    wrapped: frozenset = frozenset()
    horizon: int | None = None
    center: int | None = None
    name: str = ""
    edge_names: tuple | None = None

    def __post_init__(self):
        if self.weights is None:
            object.__setattr__(self, "weights", (1,) * len(self.source))
        _validate(self)

    # -- structure -------------------------------------------------------
    @property
    def half_edge_count(self) -> int:
        return len(self.source)

    def target(self, e: int) -> int:
        return self.source[self.partner[e]]

    def is_self_inverse(self, e: int) -> bool:
        return self.partner[e] == e

    def out_edges(self, x: int) -> list[int]:
        return self._out()[x]

    def _out(self):
        cache = self.__dict__.get("_out_cache")
        if cache is None:
            cache = [[] for _ in range(self.vertex_count)]
            for e, s in enumerate(self.source):
                cache[s].append(e)
            object.__setattr__(self, "_out_cache", cache)
        return cache

    def degree(self, x: int) -> int:
        return len(self._out()[x])

    def degrees(self) -> list[int]:
        return [len(o) for o in self._out()]

    def regular_degree(self) -> int | None:
        ds = set(self.degrees())
        return ds.pop() if len(ds) == 1 else None

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        return len(distances(self, 0)) == self.vertex_count

    def with_weights(self, weights) -> "Graph":
        if isinstance(weights, Mapping):
            w = list(self.weights)
            for e, c in weights.items():
                w[e] = as_rational(c)
        else:
            w = [as_rational(c) for c in weights]
        return _replace(self, weights=tuple(w))

    def is_unweighted(self) -> bool:
        return all(w == 1 for w in self.weights)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        doc = {
            "vertices": self.vertex_count,
            "half_edges": [
                {"id": e, "source": self.source[e], "partner": self.partner[e]}
                | ({} if self.weights[e] == 1 else {"weight": format_rational(self.weights[e])})
                for e in range(self.half_edge_count)
            ],
        }
        if self.horizon is not None:
            doc["horizon"] = self.horizon
            doc["center"] = self.center
        return doc

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<Graph{tag}: {self.vertex_count} vertices, {self.half_edge_count} half-edges>"


def _replace(g: Graph, **changes) -> Graph:
    fields_ = dict(
        vertex_count=g.vertex_count,
        source=g.source,
        partner=g.partner,
        weights=g.weights,
        wrapped=g.wrapped,
        horizon=g.horizon,
        center=g.center,
        name=g.name,
        edge_names=g.edge_names,
    )
    fields_.update(changes)
    return Graph(**fields_)


def _validate(g: Graph) -> None:
    n = g.vertex_count
    if not isinstance(n, int) or n < 0:
        raise GraphValidationError("vertex count must be a nonnegative integer", "vertices")
    h = len(g.source)
    if len(g.partner) != h or len(g.weights) != h:
        raise GraphValidationError("source, partner and weight tables differ in length")
    for e in range(h):
        s = g.source[e]
        if not isinstance(s, int) or not 0 <= s < n:
            raise GraphValidationError(f"half-edge {e} has source {s!r} outside 0..{n - 1}", e)
        p = g.partner[e]
        if not isinstance(p, int) or not 0 <= p < h:
            raise GraphValidationError(f"half-edge {e} has unknown partner {p!r}", e)
        if g.partner[p] != e:
            raise GraphValidationError(
                f"involution is not self-inverse: {e} -> {p} -> {g.partner[p]}", e
            )
    if g.center is not None and not 0 <= g.center < max(n, 1):
        raise GraphValidationError("center vertex out of range", "center")


@dataclass(frozen=True)
class MarkedGraph:
    """A graph with a birth and a death vertex (equal for circuits)."""

    graph: Graph
    birth: int = 0
    death: int = 0

    def __post_init__(self):
        for role in ("birth", "death"):
            v = getattr(self, role)
            if not isinstance(v, int) or not 0 <= v < self.graph.vertex_count:
                raise GraphValidationError(f"{role} vertex {v!r} does not exist", role)

    @property
    def faithful_horizon(self) -> int | None:
        """Largest length up to which birth-to-death walks are exact (``None``: all lengths)."""
        g = self.graph
        if g.horizon is None:
            return None
        c = g.center if g.center is not None else self.birth
        dist = distances(g, c)
        return g.horizon - dist.get(self.birth, 0) - dist.get(self.death, 0)

    def reversed(self) -> "MarkedGraph":
        return MarkedGraph(self.graph, self.death, self.birth)


def distances(g: Graph, x: int) -> dict[int, int]:
    """BFS distances from ``x`` to every reachable vertex."""
    out = g._out()
    dist = {x: 0}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        for e in out[v]:
            w = g.source[g.partner[e]]
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def adjacency_matrix(g: Graph, weighted: bool = False) -> np.ndarray:
    """``A[x, y]`` = number (or total weight) of half-edges from x to y."""
    if weighted and not g.is_unweighted():
        a = np.zeros((g.vertex_count, g.vertex_count), dtype=object)
        a[:, :] = 0
    else:
        a = np.zeros((g.vertex_count, g.vertex_count), dtype=np.int64)
        weighted = False
    for e in range(g.half_edge_count):
        a[g.source[e], g.target(e)] += g.weights[e] if weighted else 1
    return a


# ---------------------------------------------------------------------------
# Construction from documents
# ---------------------------------------------------------------------------


def build_from_spec(document) -> Graph:
    """Validate a graph document (dict or JSON string) and build the graph.

    Half-edge ids may be arbitrary distinct integers or strings; they are
    renumbered in order of appearance.  A ``{"family": ..., "params": ...}``
    document is forwarded to :func:`named_family`.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphValidationError(f"not valid JSON: {exc}", "document") from exc
    if not isinstance(document, Mapping):
        raise GraphValidationError("graph document must be an object", "document")
    if "family" in document:
        return named_family(document["family"], document.get("params", {}))
    n = document.get("vertices")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise GraphValidationError("'vertices' must be a nonnegative integer", "vertices")
    records = document.get("half_edges", [])
    if not isinstance(records, list):
        raise GraphValidationError("'half_edges' must be a list", "half_edges")
    index: dict = {}
    for pos, rec in enumerate(records):
        if not isinstance(rec, Mapping) or not {"id", "source", "partner"} <= rec.keys():
            raise GraphValidationError(
                f"half-edge record {pos} needs 'id', 'source' and 'partner'", pos
            )
        hid = rec["id"]
        if not isinstance(hid, (int, str)) or isinstance(hid, bool):
            raise GraphValidationError(f"half-edge id {hid!r} must be an integer or string", hid)
        if hid in index:
            raise GraphValidationError(f"duplicate half-edge id {hid!r}", hid)
        index[hid] = pos
    source, partner, weights = [], [], []
    for rec in records:
        hid = rec["id"]
        s = rec["source"]
        if isinstance(s, bool) or not isinstance(s, int) or not 0 <= s < n:
            raise GraphValidationError(f"half-edge {hid!r} has dangling source vertex {s!r}", hid)
        p = rec["partner"]
        if p not in index:
            raise GraphValidationError(f"half-edge {hid!r} has unknown partner {p!r}", hid)
        source.append(s)
        partner.append(index[p])
        try:
            weights.append(as_rational(rec.get("weight", 1)))
        except SeriesError as exc:
            raise GraphValidationError(f"half-edge {hid!r}: {exc}", hid) from exc
    ids = list(index)
    for pos, p in enumerate(partner):
        if partner[p] != pos:
            raise GraphValidationError(
                f"involution is not self-inverse at {ids[pos]!r}: "
                f"{ids[pos]!r} -> {ids[p]!r} -> {ids[partner[p]]!r}",
                ids[pos],
            )
    return Graph(n, tuple(source), tuple(partner), tuple(weights), name=str(document.get("name", "")))


def marked_from_spec(document, birth: int | None = None, death: int | None = None) -> MarkedGraph:
    """Build a :class:`MarkedGraph`; explicit marks override the document's ``marks``."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphValidationError(f"not valid JSON: {exc}", "document") from exc
    g = build_from_spec(document)
    marks = document.get("marks", {}) if isinstance(document, Mapping) else {}
    default = g.center if g.center is not None else 0
    b = birth if birth is not None else marks.get("birth", default)
    d = death if death is not None else marks.get("death", b)
    return MarkedGraph(g, b, d)


# ---------------------------------------------------------------------------
# Local-rule ball builder
# ---------------------------------------------------------------------------

# A local rule maps a vertex to a list of (key, target, partner_key): the
# half-edge (v, key) goes to `target` and its partner is (target, partner_key).
LocalRule = Callable[[Hashable], list]


def _ball_from_rule(rule: LocalRule, root: Hashable, radius: int, name: str) -> Graph:
    dist = {root: 0}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        if dist[v] == radius:
            continue
        for _key, w, _pk in rule(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                order.append(w)
                queue.append(w)
    vid = {v: i for i, v in enumerate(order)}
    hid = {}
    source, names = [], []
    for v in order:
        for key, _w, _pk in rule(v):
            hid[(v, key)] = len(source)
            source.append(vid[v])
            names.append(key)
    partner = [0] * len(source)
    wrapped = set()
    for v in order:
        for key, w, pk in rule(v):
            e = hid[(v, key)]
            if w in vid:
                partner[e] = hid[(w, pk)]
            else:
                partner[e] = e
                wrapped.add(e)
    horizon = 2 * radius if wrapped else None
    return Graph(
        len(order),
        tuple(source),
        tuple(partner),
        wrapped=frozenset(wrapped),
        horizon=horizon,
        center=0 if horizon is not None else None,
        name=name,
        edge_names=tuple(names),
    )


def _tree_rule(d: int, loops_at_root: int = 0) -> LocalRule:
    def rule(v):
        out = []
        if v == ():
            for j in range(loops_at_root):
                out.append((("loop", j), (), ("loop", j)))
            for i in range(d - loops_at_root):
                out.append((("c", i), (i,), "p"))
        else:
            out.append(("p", v[:-1], ("c", v[-1])))
            for i in range(d - 1):
                out.append((("c", i), v + (i,), "p"))
        return out

    return rule


def _ladder_rule(v):
    j, i = v
    return [("U", (j, i + 1), "D"), ("D", (j, i - 1), "U"), ("L", (1 - j, i), "L")]


def _z12_rule(v):
    return [(s, v + s, -s) for s in (1, -1, 2, -2)]


# ---------------------------------------------------------------------------
# Named families
# ---------------------------------------------------------------------------


def _int_param(params: Mapping, key: str, low: int, *aliases) -> int:
    for k in (key, *aliases):
        if k in params:
            val = params[k]
            break
    else:
        raise ParameterError(f"missing parameter '{key}'", key)
    if isinstance(val, bool) or not isinstance(val, int):
        try:
            val = int(val)
        except (TypeError, ValueError):
            raise ParameterError(f"parameter '{key}' must be an integer", key) from None
    if val < low:
        raise ParameterError(f"parameter '{key}' must be >= {low}, got {val}", key)
    return val


def _complete(p):
    v = _int_param(p, "v", 2)
    source, partner, hid = [], [], {}
    for x in range(v):
        for y in range(v):
            if x != y:
                hid[(x, y)] = len(source)
                source.append(x)
    partner = [hid[(y, x)] for (x, y) in hid]
    return Graph(v, tuple(source), tuple(partner), name=f"complete({v})")


def _cycle(p):
    k = _int_param(p, "k", 1)
    # Schreier graph of Z/k for the generators +1 and -1
    source = [x for x in range(k) for _ in (0, 1)]
    partner = []
    for x in range(k):
        partner.append(2 * ((x + 1) % k) + 1)
        partner.append(2 * ((x - 1) % k))
    return Graph(k, tuple(source), tuple(partner), name=f"cycle({k})", edge_names=("+1", "-1") * k)


def _tree_ball(p):
    d = _int_param(p, "d", 2)
    r = _int_param(p, "r", 0)
    return _ball_from_rule(_tree_rule(d), (), r, f"tree_ball({d},{r})")


def _loop_tree(p):
    d = _int_param(p, "d", 2)
    e = _int_param(p, "e", 1)
    r = _int_param(p, "r", 0)
    if e > d:
        raise ParameterError(f"loop count e={e} exceeds degree d={d}", "e")
    return _ball_from_rule(_tree_rule(d, e), (), r, f"loop_tree({d},{e},{r})")


def _ladder(p):
    r = _int_param(p, "r", 0, "len", "n")
    return _ball_from_rule(_ladder_rule, (0, 0), r, f"ladder({r})")


def _z12(p):
    r = _int_param(p, "r", 0, "len", "n")
    return _ball_from_rule(_z12_rule, 0, r, f"z12({r})")


def _edge(_p):
    return Graph(2, (0, 1), (1, 0), name="edge")


def _point(_p):
    return Graph(1, (), (), name="point")


def _schreier(p):
    """Coset action table: ``table[c][j]`` is the coset reached from ``c`` by generator ``j``.

    ``inverse[j]`` is the index (or name) of the inverse generator; a
    generator equal to its own inverse that fixes a coset yields a
    self-inverse half-edge.
    """
    table = p.get("table")
    if not isinstance(table, list) or not table:
        raise ParameterError("schreier needs a nonempty 'table'", "table")
    ngen = len(table[0])
    gens = list(p.get("generators", range(ngen)))
    if len(gens) != ngen:
        raise ParameterError("generator list does not match table width", "generators")
    inv_raw = p.get("inverse")
    if inv_raw is None:
        raise ParameterError("schreier needs an 'inverse' map on generators", "inverse")
    pos = {g: i for i, g in enumerate(gens)}
    if isinstance(inv_raw, Mapping):
        try:
            inv = [pos[inv_raw[g] if g in inv_raw else inv_raw[str(g)]] for g in gens]
        except KeyError as exc:
            raise ParameterError(f"inverse map misses generator {exc}", "inverse") from None
    else:
        inv = [pos[g] if g in pos else g for g in inv_raw]
    if len(inv) != ngen or any(not isinstance(j, int) or not 0 <= j < ngen for j in inv):
        raise ParameterError("inverse map must name valid generators", "inverse")
    if any(inv[inv[j]] != j for j in range(ngen)):
        raise ParameterError("inverse map on generators is not an involution", "inverse")
    n = len(table)
    for c, row in enumerate(table):
        if len(row) != ngen:
            raise ParameterError(f"row {c} has {len(row)} entries, expected {ngen}", c)
        for j, tgt in enumerate(row):
            if not isinstance(tgt, int) or not 0 <= tgt < n:
                raise ParameterError(f"coset {c}, generator {gens[j]!r}: bad target {tgt!r}", c)
            if table[tgt][inv[j]] != c:
                raise ParameterError(
                    f"coset {c} --{gens[j]!r}--> {tgt} is not undone by the inverse generator", c
                )
    source = [c for c in range(n) for _ in range(ngen)]
    partner = [table[c][j] * ngen + inv[j] for c in range(n) for j in range(ngen)]
    names = tuple(str(g) for _ in range(n) for g in gens)
    return Graph(n, tuple(source), tuple(partner), name=p.get("name", "schreier"), edge_names=names)


FAMILIES = {
    "complete": _complete,
    "cycle": _cycle,
    "tree_ball": _tree_ball,
    "loop_tree": _loop_tree,
    "ladder": _ladder,
    "z12": _z12,
    "schreier": _schreier,
    "edge": _edge,
    "point": _point,
}


def named_family(name: str, params: Mapping | None = None, **kwargs) -> Graph:
    """Build a graph family by name, e.g. ``named_family("tree_ball", d=3, r=2)``."""
    builder = FAMILIES.get(name)
    if builder is None:
        raise ParameterError(f"unknown family {name!r}; known: {sorted(FAMILIES)}", "family")
    merged = dict(params or {})
    merged.update(kwargs)
    return builder(merged)


# ---------------------------------------------------------------------------
# Graph operations
# ---------------------------------------------------------------------------


def ball(g: Graph, x: int, n: int) -> Graph:
    """Vertices within distance ``n`` of ``x``; boundary half-edges become self-inverse."""
    if not isinstance(x, int) or not 0 <= x < g.vertex_count:
        raise GraphValidationError(f"unknown vertex {x!r}", x)
    if n < 0:
        raise ParameterError("ball radius must be >= 0", "n")
    dist = distances(g, x)
    keep = sorted((v for v, dv in dist.items() if dv <= n), key=lambda v: (dist[v], v))
    vid = {v: i for i, v in enumerate(keep)}
    old_edges = [e for v in keep for e in g.out_edges(v)]
    eid = {e: i for i, e in enumerate(old_edges)}
    partner, wrapped = [], set()
    for e in old_edges:
        p = g.partner[e]
        if g.source[p] in vid:
            partner.append(eid[p])
            if e in g.wrapped:
                wrapped.add(eid[e])
        else:
            partner.append(eid[e])
            wrapped.add(eid[e])
    cut = any(g.source[g.partner[e]] not in vid for e in old_edges)
    if cut:
        horizon = 2 * n
        if g.horizon is not None:
            cdist = distances(g, g.center).get(x, 0) if g.center is not None else 0
            horizon = min(horizon, g.horizon - 2 * cdist)
        center = 0
    elif g.horizon is not None:
        horizon = g.horizon
        center = vid.get(g.center, 0) if g.center is not None else 0
        if g.center not in vid:
            horizon = min(2 * n, g.horizon - 2 * distances(g, g.center).get(x, 0))
            center = 0
    else:
        horizon, center = None, None
    names = tuple(g.edge_names[e] for e in old_edges) if g.edge_names else None
    return Graph(
        len(keep),
        tuple(vid[g.source[e]] for e in old_edges),
        tuple(partner),
        tuple(g.weights[e] for e in old_edges),
        frozenset(wrapped),
        horizon,
        center,
        f"ball({g.name},{x},{n})" if g.name else "",
        names,
    )


def free_product_truncate(E: MarkedGraph, F: MarkedGraph, depth: int) -> MarkedGraph:
    """Breadth-first truncation of the free product of two pointed graphs.

    Every vertex of the product lies in one copy of each factor.  Round 1
    glues one copy of each factor at the base point; round ``k`` glues the
    missing copy at every vertex created in round ``k - 1``.  After
    ``depth`` rounds, missing copies are replaced by self-inverse
    half-edges so degrees are preserved; circuits at the base of length at
    most ``2 * depth`` are then exact.
    """
    if depth < 0:
        raise ParameterError("depth must be >= 0", "depth")
    for label, m in (("E", E), ("F", F)):
        if not m.graph.is_connected():
            raise GraphValidationError(f"factor {label} is disconnected", label)
    factors = (E, F)
    source, partner, weights, names = [], [], [], []
    wrapped: set = set()
    # vertex -> which factor copy it still lacks (None if complete)
    missing: list = [None]
    vertex_count = 1
    frontier = [(0, 0), (0, 1)]  # (vertex, factor to glue)
    pending_wrap = []
    for rnd in range(1, depth + 1):
        nxt = []
        for v, which in frontier:
            fac = factors[which]
            g = fac.graph
            if g.half_edge_count == 0:
                continue
            # map factor vertices into the product
            vmap = {}
            for fv in range(g.vertex_count):
                if fv == fac.birth:
                    vmap[fv] = v
                else:
                    vmap[fv] = vertex_count
                    vertex_count += 1
                    missing.append(1 - which)
                    nxt.append((vmap[fv], 1 - which))
            base = len(source)
            for e in range(g.half_edge_count):
                source.append(vmap[g.source[e]])
                partner.append(base + g.partner[e])
                weights.append(g.weights[e])
                names.append((which, e))
                if e in g.wrapped:
                    wrapped.add(base + e)
        frontier = nxt
    if depth == 0:
        frontier = [(0, 0), (0, 1)]
    for v, which in frontier:
        g = factors[which].graph
        b = factors[which].birth
        for e in g.out_edges(b):
            idx = len(source)
            source.append(v)
            partner.append(idx)
            weights.append(g.weights[e])
            names.append((which, e))
            wrapped.add(idx)
            pending_wrap.append(idx)
    horizon = 2 * depth if pending_wrap else None
    for m in factors:
        if m.graph.horizon is not None:
            fh = m.faithful_horizon
            horizon = fh if horizon is None else min(horizon, fh)
    g = Graph(
        vertex_count,
        tuple(source),
        tuple(partner),
        tuple(weights),
        frozenset(wrapped),
        horizon,
        0 if horizon is not None else None,
        f"free({E.graph.name or 'E'},{F.graph.name or 'F'},{depth})",
        tuple(names),
    )
    return MarkedGraph(g, 0, 0)


def triangle_contract(g: Graph, triples: Iterable[Iterable[int]]) -> Graph:
    """Identify each vertex triple to one vertex, deleting its triangle edges.

    Half-edges joining two distinct vertices of the same triple are the
    triangle edges and are removed; every other half-edge is projected.
    """
    triples = [tuple(t) for t in triples]
    owner = {}
    for i, t in enumerate(triples):
        if len(t) != 3 or len(set(t)) != 3:
            raise GraphValidationError(f"part {t} is not a set of three vertices", t)
        for v in t:
            if not isinstance(v, int) or not 0 <= v < g.vertex_count:
                raise GraphValidationError(f"unknown vertex {v!r}", v)
            if v in owner:
                raise GraphValidationError(f"vertex {v} appears in two parts", v)
            owner[v] = i
    if len(owner) != g.vertex_count:
        absent = sorted(set(range(g.vertex_count)) - owner.keys())
        raise GraphValidationError(f"partition misses vertices {absent}", absent[0])
    for t in triples:
        a, b, c = t
        for x, y in ((a, b), (b, c), (c, a)):
            if not any(g.target(e) == y for e in g.out_edges(x)):
                raise GraphValidationError(f"triple {t} does not span a triangle (no {x}->{y})", t)
    keep = [
        e
        for e in range(g.half_edge_count)
        if not (owner[g.source[e]] == owner[g.target(e)] and g.source[e] != g.target(e))
    ]
    eid = {e: i for i, e in enumerate(keep)}
    for e in keep:
        if g.partner[e] not in eid:
            raise GraphValidationError(f"half-edge {e} pairs with a deleted triangle edge", e)
    horizon = g.horizon // 2 if g.horizon is not None else None
    center = owner[g.center] if g.center is not None and horizon is not None else None
    return Graph(
        len(triples),
        tuple(owner[g.source[e]] for e in keep),
        tuple(eid[g.partner[e]] for e in keep),
        tuple(g.weights[e] for e in keep),
        frozenset(eid[e] for e in keep if e in g.wrapped),
        horizon,
        center,
        f"contract({g.name})" if g.name else "",
    )


def add_loops(g: Graph) -> Graph:
    """Add one self-inverse loop at every vertex."""
    h = g.half_edge_count
    return Graph(
        g.vertex_count,
        g.source + tuple(range(g.vertex_count)),
        g.partner + tuple(range(h, h + g.vertex_count)),
        g.weights + (1,) * g.vertex_count,
        g.wrapped,
        g.horizon,
        g.center,
        f"loops({g.name})" if g.name else "",
    )


def _product_horizon(E: Graph, F: Graph, nf: int):
    hs = [x.horizon for x in (E, F) if x.horizon is not None]
    if not hs:
        return None, None
    ce = E.center if E.center is not None else 0
    cf = F.center if F.center is not None else 0
    return min(hs), ce * nf + cf


def direct_first(E: Graph, F: Graph) -> Graph:
    """Cartesian product: a step moves in exactly one factor (adjacency ``A_E (x) I + I (x) A_F``)."""
    nf = F.vertex_count
    source, partner, weights = [], [], []
    he, hf = E.half_edge_count, F.half_edge_count
    # E-moves first: id = e * nf + y ; then F-moves: id = he*nf + x * hf + f
    for e in range(he):
        for y in range(nf):
            source.append(E.source[e] * nf + y)
            partner.append(E.partner[e] * nf + y)
            weights.append(E.weights[e])
    off = he * nf
    for x in range(E.vertex_count):
        for f in range(hf):
            source.append(x * nf + F.source[f])
            partner.append(off + x * hf + F.partner[f])
            weights.append(F.weights[f])
    wrapped = {e * nf + y for e in E.wrapped for y in range(nf)}
    wrapped |= {off + x * hf + f for x in range(E.vertex_count) for f in F.wrapped}
    horizon, center = _product_horizon(E, F, nf)
    return Graph(
        E.vertex_count * nf, tuple(source), tuple(partner), tuple(weights),
        frozenset(wrapped), horizon, center, f"{E.name}x{F.name}",
    )


def _has_loop_everywhere(g: Graph):
    for x in range(g.vertex_count):
        if not any(g.target(e) == x for e in g.out_edges(x)):
            return x
    return None


def direct_second(E: Graph, F: Graph) -> Graph:
    """Tensor product: a step moves in both factors at once (adjacency ``A_E (x) A_F``).

    Both factors need a loop at every vertex, otherwise the product
    cannot stay put in one coordinate.
    """
    for label, g in (("E", E), ("F", F)):
        bad = _has_loop_everywhere(g)
        if bad is not None:
            raise GraphValidationError(f"factor {label} has no loop at vertex {bad}", bad)
    nf, hf = F.vertex_count, F.half_edge_count
    source, partner, weights = [], [], []
    for e in range(E.half_edge_count):
        for f in range(hf):
            source.append(E.source[e] * nf + F.source[f])
            partner.append(E.partner[e] * hf + F.partner[f])
            weights.append(E.weights[e] * F.weights[f])
    wrapped = {e * hf + f for e in range(E.half_edge_count) for f in range(hf) if e in E.wrapped or f in F.wrapped}
    wrapped = {i for i in wrapped if partner[i] == i}
    horizon, center = _product_horizon(E, F, nf)
    return Graph(
        E.vertex_count * nf, tuple(source), tuple(partner), tuple(weights),
        frozenset(wrapped), horizon, center, f"{E.name}(x){F.name}",
    )
