"""Generalized Ihara-Selberg zeta function, computed three ways.

1. ``det(I - (B - (1-u) J) t)`` over half-edges (fraction-free elimination).
2. ``(1 + (1-u)t)^n (1 - (1-u)^2 t^2)^(m - |V|) det(I - A t + (1-u)(D - (1-u) I) t^2)``
   over vertices, ``n`` self-inverse half-edges and ``m`` edge pairs.
3. ``prod_cycles 1 / (1 - u^cbc t^len)`` over primitive cycles (as a series).

The first two are polynomials and must agree exactly; the reciprocal of
either expands to the third.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .enumeration import DEFAULT_BUDGET, cycle_census
from .exceptions import ConsistencyError
from .graph import Graph
from .series import BivariateSeries, UPoly, as_rational, format_rational

__all__ = [
    "EdgeMatrices",
    "BivariatePoly",
    "edge_matrices",
    "bareiss_det",
    "zeta_inverse_det",
    "zeta_inverse_factored",
    "zeta_from_cycles",
]


@dataclass(frozen=True)
class EdgeMatrices:
    B: np.ndarray  # B[e, f] = 1 iff target(e) == source(f)
    J: np.ndarray  # involution as a permutation matrix
    A: np.ndarray  # vertex adjacency counts
    D: np.ndarray  # diagonal degree matrix
    n_selfinv: int
    m_pairs: int


def edge_matrices(g: Graph) -> EdgeMatrices:
    h, nv = g.half_edge_count, g.vertex_count
    B = np.zeros((h, h), dtype=np.int64)
    J = np.zeros((h, h), dtype=np.int64)
    A = np.zeros((nv, nv), dtype=np.int64)
    out = g._out()
    for e in range(h):
        tgt = g.target(e)
        for f in out[tgt]:
            B[e, f] = 1
        J[e, g.partner[e]] = 1
        A[g.source[e], tgt] += 1
    D = np.diag(np.array(g.degrees(), dtype=np.int64)) if nv else np.zeros((0, 0), dtype=np.int64)
    n_self = sum(1 for e in range(h) if g.partner[e] == e)
    return EdgeMatrices(B, J, A, D, n_self, (h - n_self) // 2)


class BivariatePoly:
    """Polynomial in ``u`` and ``t``: a dict ``{(u_deg, t_deg): coeff}`` without zero entries."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: as_rational(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def _raw(cls, terms: dict) -> "BivariatePoly":
        p = object.__new__(cls)
        p.terms = {k: (v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v)
                   for k, v in terms.items() if v != 0}
        return p

    @classmethod
    def const(cls, c) -> "BivariatePoly":
        return cls({(0, 0): c})

    @classmethod
    def u(cls) -> "BivariatePoly":
        return cls({(1, 0): 1})

    @classmethod
    def t(cls) -> "BivariatePoly":
        return cls({(0, 1): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def t_degree(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def _coerce(self, other):
        if isinstance(other, BivariatePoly):
            return other
        return BivariatePoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BivariatePoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for (a, b), x in self.terms.items():
            for (c, d), y in other.terms.items():
                k = (a + c, b + d)
                out[k] = out.get(k, 0) + x * y
        return BivariatePoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out, base = BivariatePoly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _lead(self):
        # lex order with t before u
        return max(self.terms, key=lambda k: (k[1], k[0]))

    def exact_div(self, other: "BivariatePoly") -> "BivariatePoly":
        """Quotient of an exact division; :class:`ConsistencyError` if a remainder is left."""
        if other.is_zero():
            raise ConsistencyError("division by the zero polynomial")
        lu, lt = other._lead()
        lc = other.terms[(lu, lt)]
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            a, b = max(rem, key=lambda k: (k[1], k[0]))
            if a < lu or b < lt:
                raise ConsistencyError("polynomial division is not exact")
            c = Fraction(rem[(a, b)]) / lc
            c = c.numerator if c.denominator == 1 else c
            mono = (a - lu, b - lt)
            quot[mono] = quot.get(mono, 0) + c
            for (x, y), v in other.terms.items():
                k = (x + mono[0], y + mono[1])
                nv_ = rem.get(k, 0) - c * v
                if nv_ == 0:
                    rem.pop(k, None)
                else:
                    rem[k] = nv_
        return BivariatePoly._raw(quot)

    def __eq__(self, other):
        if isinstance(other, BivariatePoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == BivariatePoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def at_u(self, u0) -> dict:
        """Substitute ``u = u0``; returns ``{t_deg: coeff}``."""
        out: dict = {}
        for (a, b), v in self.terms.items():
            out[b] = out.get(b, 0) + v * u0**a
        return {k: v for k, v in out.items() if v != 0}

    def to_series(self, N: int) -> BivariateSeries:
        rows = [[] for _ in range(N + 1)]
        for (a, b), v in self.terms.items():
            if b <= N:
                r = rows[b]
                if len(r) <= a:
                    r.extend([0] * (a + 1 - len(r)))
                r[a] += v
        return BivariateSeries([UPoly(r) for r in rows], N)

    def to_json(self) -> list:
        return [
            {"u": a, "t": b, "coeff": format_rational(v)}
            for (a, b), v in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ]

    def __repr__(self):
        parts = [f"{format_rational(v)}*u^{a}*t^{b}" for (a, b), v in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
        return "BivariatePoly(" + (" + ".join(parts) or "0") + ")"


def bareiss_det(M: list) -> BivariatePoly:
    """Determinant of a square matrix of :class:`BivariatePoly` by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return BivariatePoly.const(1)
    M = [list(row) for row in M]
    sign = 1
    prev = BivariatePoly.const(1)
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return BivariatePoly()
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            for j in range(k + 1, n):
                num = pivot * M[i][j] - mik * M[k][j]
                M[i][j] = num.exact_div(prev) if not num.is_zero() else num
            M[i][k] = BivariatePoly()
        prev = pivot
    det = M[n - 1][n - 1]
    return det if sign == 1 else -det


_ONE_MINUS_U = BivariatePoly({(0, 0): 1, (1, 0): -1})


def zeta_inverse_det(g: Graph) -> BivariatePoly:
    """``det(I - (B - (1-u) J) t)`` as an exact polynomial."""
    em = edge_matrices(g)
    h = g.half_edge_count
    t = BivariatePoly.t()
    cache = {}

    def entry(b, j, diag):
        key = (b, j, diag)
        if key not in cache:
            val = BivariatePoly.const(1 if diag else 0) - t * b + _ONE_MINUS_U * t * j
            cache[key] = val
        return cache[key]

    M = [[entry(int(em.B[e, f]), int(em.J[e, f]), e == f) for f in range(h)] for e in range(h)]
    return bareiss_det(M)


def zeta_inverse_factored(g: Graph) -> BivariatePoly:
    """The vertex-indexed factored form; negative exponents are divided out exactly."""
    em = edge_matrices(g)
    nv = g.vertex_count
    t = BivariatePoly.t()
    a = _ONE_MINUS_U
    P = []
    for x in range(nv):
        row = []
        for y in range(nv):
            p = BivariatePoly.const(1 if x == y else 0) - t * int(em.A[x, y])
            if x == y:
                p = p + a * (BivariatePoly.const(int(em.D[x, x])) - a) * t * t
            row.append(p)
        P.append(row)
    detP = bareiss_det(P)
    out = detP * (BivariatePoly.const(1) + a * t) ** em.n_selfinv
    q = BivariatePoly.const(1) - a * a * t * t
    k = em.m_pairs - nv
    if k >= 0:
        return out * q**k
    return out.exact_div(q ** (-k))


def zeta_from_cycles(g: Graph, L: int, budget: int = DEFAULT_BUDGET) -> BivariateSeries:
    """``prod 1/(1 - u^cbc t^len)`` over primitive cycles of length at most ``L``, to order ``L``."""
    census = cycle_census(g, L, budget=budget)
    coeffs = [UPoly(())] * (L + 1)
    coeffs[0] = UPoly((1,))
    tally: dict = {}
    for rep, cbc in census.all():
        tally[(len(rep), cbc)] = tally.get((len(rep), cbc), 0) + 1
    for (length, cbc), count in sorted(tally.items()):
        shift = UPoly([0] * cbc + [1])
        for _ in range(count):
            for n in range(length, L + 1):
                if coeffs[n - length].coeffs:
                    coeffs[n] = coeffs[n] + coeffs[n - length] * shift
    return BivariateSeries(coeffs, L)
