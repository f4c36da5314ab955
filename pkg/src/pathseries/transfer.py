"""Path series by linear algebra, and the identities relating F and G.

``green_series`` counts walks by iterating the adjacency operator on a
vector.  ``enriched_series`` obtains the bump-counting series without
ever looking at bumps: every half-edge ``e`` gets the transformed label

    c_e t K_{target(e)} / (1 - (u-1)^2 w_e t^2),      w_e = c_e c_{partner(e)},

every vertex ``x`` the correction

    K_x = 1 / (1 - sum_{e from x} (u-1) w_e t^2 / (1 - (u-1)^2 w_e t^2)),

and the walk series of the relabelled graph, multiplied by ``K_birth``,
is the enriched series.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .enumeration import path_census
from .exceptions import CompositionError, HorizonError, SeriesError
from .graph import Graph, MarkedGraph
from .series import (
    BivariateSeries,
    PowerSeries,
    UPoly,
    as_rational,
    format_rational,
    ps_compose,
    ps_reciprocal,
    ps_sqrt,
)

__all__ = [
    "LabelAssignment",
    "TransformedLabels",
    "LabelledTransform",
    "RecurrenceReport",
    "green_series",
    "enriched_series",
    "transformed_labels",
    "labelled_transform",
    "f_from_g",
    "g_from_f",
    "eqb_sides",
    "linear_recurrence_check",
    "first_discrepancy",
    "charpoly",
]


@dataclass(frozen=True)
class LabelAssignment:
    """Weight ``c_e`` per half-edge; the effective label of ``e`` is ``c_e * t``."""

    weights: tuple

    @classmethod
    def from_mapping(cls, g: Graph, mapping: Mapping) -> "LabelAssignment":
        w = list(g.weights)
        for e, c in mapping.items():
            w[int(e)] = as_rational(c)
        return cls(tuple(w))

    @classmethod
    def unit(cls, g: Graph) -> "LabelAssignment":
        return cls((1,) * g.half_edge_count)

    def apply(self, g: Graph) -> Graph:
        if len(self.weights) != g.half_edge_count:
            raise SeriesError(
                f"{len(self.weights)} weights given for {g.half_edge_count} half-edges"
            )
        return g.with_weights(self.weights)


@dataclass
class TransformedLabels:
    """``K[x]`` per vertex and the transformed label per half-edge."""

    K: dict
    edge_labels: dict


def _labelled(mg: MarkedGraph, labels) -> MarkedGraph:
    if labels is None:
        return mg
    if isinstance(labels, LabelAssignment):
        g = labels.apply(mg.graph)
    elif isinstance(labels, Mapping):
        g = LabelAssignment.from_mapping(mg.graph, labels).apply(mg.graph)
    else:
        g = LabelAssignment(tuple(as_rational(c) for c in labels)).apply(mg.graph)
    return MarkedGraph(g, mg.birth, mg.death)


def _check_horizon(mg: MarkedGraph, N: int, strict: bool) -> int | None:
    fh = mg.faithful_horizon
    if strict and fh is not None and N > fh:
        raise HorizonError(N, fh)
    return fh


def _horizon_note(fh, N):
    if fh is None:
        return ()
    if N > fh:
        return (f"coefficients beyond {fh} describe the truncated graph only",)
    return (f"faithful horizon {fh}",)


def green_series(mg: MarkedGraph, N: int, labels=None, strict: bool = True) -> PowerSeries:
    """Weighted count of birth-to-death walks by length, up to ``t^N``.

    On a truncated graph, ``N`` may not exceed the faithful horizon unless
    ``strict=False`` (the truncation is then treated as a finite graph in
    its own right).
    """
    fh = _check_horizon(mg, N, strict)
    mg = _labelled(mg, labels)
    g = mg.graph
    src, part, w = g.source, g.partner, g.weights
    tgt = [src[part[e]] for e in range(g.half_edge_count)]
    vec = {mg.birth: 1}
    coeffs = [vec.get(mg.death, 0)]
    out = g._out()
    for _ in range(N):
        nxt: dict = {}
        for x, c in vec.items():
            for e in out[x]:
                y = tgt[e]
                nxt[y] = nxt.get(y, 0) + c * w[e]
        vec = {y: c for y, c in nxt.items() if c != 0}
        coeffs.append(vec.get(mg.death, 0))
    return PowerSeries(coeffs, N, _horizon_note(fh, N))


# ---------------------------------------------------------------------------
# The transformed system
# ---------------------------------------------------------------------------

_UM1 = UPoly((-1, 1))  # u - 1


def _bump_geometric(wt, N: int) -> BivariateSeries:
    """``1 / (1 - (u-1)^2 w t^2)``."""
    base = _UM1 * _UM1 * wt
    coeffs = [UPoly(())] * (N + 1)
    p = UPoly((1,))
    for k in range(0, N // 2 + 1):
        coeffs[2 * k] = p
        p = p * base
    return BivariateSeries._make(coeffs, N)


def _vertex_K(ws: tuple, N: int, cache: dict) -> BivariateSeries:
    key = ("K", ws, N)
    if key not in cache:
        acc = BivariateSeries.one(N)
        for wt in ws:
            term = _bump_geometric(wt, N).mul_t(2) * (_UM1 * wt)
            acc = acc - term
        cache[key] = ps_reciprocal(acc)
    return cache[key]


def transformed_labels(g: Graph, N: int) -> TransformedLabels:
    """``K_x`` for every vertex and the transformed label of every half-edge, to order ``N``."""
    cache: dict = {}
    wpair = [g.weights[e] * g.weights[g.partner[e]] for e in range(g.half_edge_count)]
    K = {}
    for x in range(g.vertex_count):
        ws = tuple(sorted((wpair[e] for e in g.out_edges(x)), key=Fraction))
        K[x] = _vertex_K(ws, N, cache)
    labels = {}
    for e in range(g.half_edge_count):
        y = g.target(e)
        key = ("L", g.weights[e], wpair[e], id(K[y]))
        if key not in cache:
            cache[key] = (K[y] * _bump_geometric(wpair[e], N)).mul_t(1) * g.weights[e]
        labels[e] = cache[key]
    return TransformedLabels(K, labels)


def _relabelled_walks(g: Graph, death: int, labels: dict, N: int) -> list:
    """``H[x]`` = sum over walks x -> death of the product of transformed labels, as coefficient lists."""
    zero = UPoly(())
    H = [[zero] * (N + 1) for _ in range(g.vertex_count)]
    H[death][0] = UPoly((1,))
    # group parallel half-edges carrying the same label object
    groups = []
    for x in range(g.vertex_count):
        bucket: dict = {}
        for e in g.out_edges(x):
            key = (id(labels[e]), g.target(e))
            if key in bucket:
                bucket[key][2] += 1
            else:
                bucket[key] = [labels[e].coeffs, g.target(e), 1]
        groups.append(list(bucket.values()))
    for n in range(1, N + 1):
        for x in range(g.vertex_count):
            acc = zero
            for lab, y, mult in groups[x]:
                hy = H[y]
                part = zero
                for j in range(1, n + 1):
                    lj = lab[j]
                    if lj.coeffs:
                        hv = hy[n - j]
                        if hv.coeffs:
                            part = part + lj * hv
                if part.coeffs:
                    acc = acc + (part if mult == 1 else part * mult)
            H[x][n] = acc
    return H


def enriched_series(mg: MarkedGraph, N: int, labels=None, strict: bool = True) -> BivariateSeries:
    """The bump-enriched path series ``F(u, t)`` to order ``N`` via the transformed labels."""
    fh = _check_horizon(mg, N, strict)
    mg = _labelled(mg, labels)
    g = mg.graph
    tl = transformed_labels(g, N)
    H = _relabelled_walks(g, mg.death, tl.edge_labels, N)
    walk = BivariateSeries._make(H[mg.birth], N)
    out = tl.K[mg.birth] * walk
    return BivariateSeries._make(out.coeffs, N, _horizon_note(fh, N))


@dataclass
class LabelledTransform:
    """Both sides of the labelled identity, computed independently."""

    K: TransformedLabels
    lhs: BivariateSeries
    rhs: BivariateSeries

    @property
    def agree(self) -> bool:
        return self.lhs == self.rhs

    def first_discrepancy(self):
        return first_discrepancy(self.lhs, self.rhs)


def labelled_transform(mg: MarkedGraph, labels, N: int, strict: bool = True) -> LabelledTransform:
    """Weighted oracle census (lhs) against ``K_birth * G(transformed labels)`` (rhs)."""
    _check_horizon(mg, N, strict)
    lm = _labelled(mg, labels)
    lhs = path_census(lm, N, weighted=True).as_bivariate()
    rhs = enriched_series(lm, N, strict=False)
    return LabelledTransform(transformed_labels(lm.graph, N), lhs, BivariateSeries._make(rhs.coeffs, N))


def first_discrepancy(expected, got):
    """``(n, m, expected, got)`` at the first differing coefficient, or ``None``."""
    n_max = min(expected.order, got.order)
    for n in range(n_max + 1):
        a, b = expected.coeffs[n], got.coeffs[n]
        if a != b:
            if isinstance(a, UPoly):
                for m in range(max(len(a.coeffs), len(b.coeffs))):
                    if a[m] != b[m]:
                        return (n, m, format_rational(a[m]), format_rational(b[m]))
            return (n, None, format_rational(a), format_rational(b))
    return None


# ---------------------------------------------------------------------------
# F <-> G for regular graphs
# ---------------------------------------------------------------------------


def eqb_sides(F: BivariateSeries, G: PowerSeries, d: int, N: int):
    """Both sides of the regular-graph identity, as bivariate series in ``(u, t)``.

    left  = F(1-u, t) / (1 - u^2 t^2)
    right = G(t / (1 + u(d-u) t^2)) / (1 + u(d-u) t^2)
    """
    F = F.truncate(N)
    G = G.truncate(N)
    one_minus_u2t2 = BivariateSeries._make([UPoly((1,)), UPoly(()), UPoly((0, 0, -1))], N)
    left = F.flip_u() * ps_reciprocal(one_minus_u2t2)
    q = BivariateSeries._make([UPoly((1,)), UPoly(()), UPoly((0, d, -1))], N)
    qinv = ps_reciprocal(q)
    right = ps_compose(G, qinv.mul_t(1)) * qinv
    return left, right


def f_from_g(G: PowerSeries, d: int, N: int | None = None) -> BivariateSeries:
    """Recover ``F(u, t)`` of a ``d``-regular graph from its path series ``G``."""
    N = G.order if N is None else N
    if N > G.order:
        raise SeriesError(f"requested order {N} exceeds the series order {G.order}")
    G = G.truncate(N)
    q = BivariateSeries._make([UPoly((1,)), UPoly(()), UPoly((0, d, -1))], N)
    qinv = ps_reciprocal(q)
    right = ps_compose(G, qinv.mul_t(1)) * qinv
    one_minus_u2t2 = BivariateSeries._make([UPoly((1,)), UPoly(()), UPoly((0, 0, -1))], N)
    return (right * one_minus_u2t2).flip_u()


def g_from_f(F, d: int, u0=0, N: int | None = None) -> PowerSeries:
    """Recover ``G`` from ``F`` at a fixed rational ``u0``.

    With ``c = (1-u0)(d-1+u0)`` and ``s = sqrt(1 - 4 c z^2)``:

        G(z) = 2(d-1+u0) / (d-2+2 u0 + d s) * F(u0, (1-s)/(2 c z)).

    The prefactor is ``(1 + c t^2) / (1 - (1-u0)^2 t^2)`` at the substituted ``t``.

    ``F`` may be bivariate, or a univariate series already specialised at ``u0``.
    """
    u0 = as_rational(u0)
    Fu = F.at_u(u0) if isinstance(F, BivariateSeries) else F
    N = Fu.order if N is None else N
    if N > Fu.order:
        raise SeriesError(f"requested order {N} exceeds the series order {Fu.order}")
    if u0 == 1:
        return Fu.truncate(N)
    c = (1 - u0) * (d - 1 + u0)
    if c == 0:
        raise CompositionError(f"substitution is singular at u0={u0}, d={d}")
    M = N + 1
    s = ps_sqrt(PowerSeries([1, 0, -4 * c], M))
    sigma = (PowerSeries.one(M) - s).div_t(1) * Fraction(1, 2) / c
    denom = PowerSeries([d - 2 + 2 * u0], N) + s.truncate(N) * d
    pref = ps_reciprocal(denom) * (2 * (d - 1 + u0))
    return pref * ps_compose(Fu.truncate(N), sigma)


# ---------------------------------------------------------------------------
# Rationality
# ---------------------------------------------------------------------------


def charpoly(matrix) -> list:
    """Characteristic polynomial ``det(x I - M)`` of a square rational matrix, low degree first.

    Reduction to Hessenberg form over the rationals, then the usual
    three-term recurrence on leading principal minors.
    """
    n = len(matrix)
    H = [[Fraction(matrix[i][j]) for j in range(n)] for i in range(n)]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        inv = 1 / H[m][m - 1]
        for i in range(m + 1, n):
            f = H[i][m - 1] * inv
            if f:
                ri, rm = H[i], H[m]
                for j in range(n):
                    if rm[j]:
                        ri[j] -= f * rm[j]
                for row in H:
                    if row[i]:
                        row[m] += f * row[i]
    polys = [[Fraction(1)]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        p = [Fraction(0)] + prev  # x * p_{m-1}
        for k, c in enumerate(prev):
            p[k] -= H[m - 1][m - 1] * c
        prod = Fraction(1)
        for i in range(1, m):
            prod *= H[m - i][m - i - 1]
            if prod == 0:
                break
            coef = prod * H[m - i - 1][m - 1]
            if coef:
                for k, c in enumerate(polys[m - i - 1]):
                    p[k] -= coef * c
        polys.append(p)
    return [_n(c) for c in polys[n]]


def _n(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _polydivmod(a, b):
    a = [Fraction(x) for x in a]
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        k = len(a) - len(b)
        f = a[-1] / b[-1]
        q[k] = f
        for i, y in enumerate(b):
            a[i + k] -= f * y
        a = _trim(a)
        if not a:
            break
    return _trim(q), _trim(a)


def _polygcd(a, b):
    a, b = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    while b:
        _, r = _polydivmod(a, b)
        a, b = b, r
    return a


@dataclass
class RecurrenceReport:
    """Result of checking that a walk series is rational with the expected denominator."""

    determinant: list  # det(I - A t), low degree first
    numerator: list
    denominator: list  # reduced, constant term 1
    order: int
    vertex_count: int
    first_failure: int | None
    series: PowerSeries = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def recurrence(self) -> list:
        """Coefficients ``r_k`` with ``c_n = sum_k r_k c_{n-k}`` for large ``n``."""
        return [_n(-c) for c in self.denominator[1:]]

    def to_json(self) -> dict:
        f = lambda p: [format_rational(_n(c)) for c in p]  # noqa: E731
        return {
            "passed": self.passed,
            "determinant": f(self.determinant),
            "numerator": f(self.numerator),
            "denominator": f(self.denominator),
            "order": self.order,
            "first_failure": self.first_failure,
            "series": self.series.to_json() if self.series is not None else None,
        }


def linear_recurrence_check(mg: MarkedGraph, N: int | None = None) -> RecurrenceReport:
    """Check that ``G * det(I - A t)`` is a polynomial of degree below ``|V|``.

    The graph is taken as a finite graph (truncation horizons are ignored).
    ``N`` defaults to ``2 |V| + 4`` so every coefficient of the product
    from ``|V|`` to ``N`` is tested.
    """
    g = mg.graph
    nv = g.vertex_count
    N = 2 * nv + 4 if N is None else N
    A = [[0] * nv for _ in range(nv)]
    for e in range(g.half_edge_count):
        A[g.source[e]][g.target(e)] += g.weights[e]
    chi = charpoly(A)  # det(xI - A), degree nv
    det = list(reversed(chi))  # det(I - A t) = t^nv chi(1/t)
    G = green_series(mg, N, strict=False)
    prod = [sum(det[k] * G.coeffs[n - k] for k in range(len(det)) if n - k >= 0) for n in range(N + 1)]
    failure = next((n for n in range(nv, N + 1) if prod[n] != 0), None)
    numerator = _trim(prod[: nv])
    if numerator:
        gcd = _polygcd(numerator, det)
        den, _ = _polydivmod(det, gcd)
        num, _ = _polydivmod(numerator, gcd)
        scale = den[0]
        den = [c / scale for c in den]
        num = [c / scale for c in num]
    else:
        den, num = [Fraction(1)], []
    return RecurrenceReport(
        [_n(c) for c in det],
        [_n(c) for c in num],
        [_n(c) for c in den],
        N,
        nv,
        failure,
        G,
    )
