"""Closed-form series for specific graphs, expanded exactly.

These are independent oracles: each is computed from a formula (square
roots and reciprocals of explicit series), never from the graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .enumeration import walk_distance_census
from .exceptions import ParameterError
from .graph import MarkedGraph, named_family
from .series import (
    BivariateSeries,
    PowerSeries,
    UPoly,
    ps_compose,
    ps_even,
    ps_reciprocal,
    ps_sqrt,
)

__all__ = [
    "CycleSeries",
    "TreeSeries",
    "HChecks",
    "complete_series",
    "cycle_series",
    "cycle_count",
    "tree_series",
    "tree_h_series",
    "loop_tree_series",
    "loop_tree_radius",
    "ladder_series",
    "z12_series",
    "z12_closed_form",
    "psl2_series",
]


def _bv(rows, N, u_excess=0) -> BivariateSeries:
    """Bivariate series from a list of u-coefficient tuples, one per t-degree."""
    return BivariateSeries._make([UPoly(r) for r in rows], N, (), u_excess)


def complete_series(v: int, N: int) -> BivariateSeries:
    """Enriched circuit series of the complete graph on ``v`` vertices."""
    if v < 3:
        raise ParameterError(f"complete_series needs v >= 3, got {v}", "v")
    p = (UPoly((1, -1)) * UPoly((v - 2, 1))).coeffs  # (1-u)(v-2+u)
    num1 = _bv([(1,), (1, -1)], N)
    den1 = _bv([(1,), (-(v - 2), -1)], N)
    num2 = _bv([(1,), (-(v - 2),), p], N)
    den2 = _bv([(1,), (1,), p], N)
    return num1 * num2 * ps_reciprocal(den1 * den2)


class CycleSeries(NamedTuple):
    G: PowerSeries
    F0: PowerSeries


def cycle_series(k: int, N: int) -> CycleSeries:
    """Circuit series of the ``k``-cycle and its proper-circuit series."""
    if k < 1:
        raise ParameterError(f"cycle_series needs k >= 1, got {k}", "k")
    q = PowerSeries([1, 0, -4], N)
    num = PowerSeries([0] * k + [2**k], max(N, k)).truncate(N)
    den = PowerSeries.zero(N)
    qm = PowerSeries.one(N)
    for m in range(0, k + 1):
        if 2 * m <= k:
            num = num + qm * math.comb(k, 2 * m)
        if m >= 1 and 2 * m - 1 <= k:
            den = den + qm * math.comb(k, 2 * m - 1)
        qm = qm * q
    G = num * ps_reciprocal(den)
    tk = [0] * (N + 1)
    if k <= N:
        tk[k] = 1
    tkp = PowerSeries(tk, N)
    F0 = (PowerSeries.one(N) + tkp) * ps_reciprocal(PowerSeries.one(N) - tkp)
    return CycleSeries(G, F0)


def cycle_count(k: int, n: int) -> int:
    """Closed walks of length ``n`` at a vertex of the ``k``-cycle, as a binomial sum."""
    return sum(
        math.comb(n, (n + i) // 2)
        for i in range(-n, n + 1)
        if i % k == 0 and (n + i) % 2 == 0
    )


class TreeSeries(NamedTuple):
    F_flip: BivariateSeries  # F(1-u, t)
    G: PowerSeries
    Fprime_flip: BivariateSeries  # F'(1-u, t); its empty circuit is weighted u


def _tree_radical(d: int, N: int) -> BivariateSeries:
    """``sqrt((1 + u(d-u)t^2)^2 - 4(d-1)t^2)``."""
    q = _bv([(1,), (), (0, d, -1)], N)
    return ps_sqrt(q * q - _bv([(), (), (4 * (d - 1),)], N))


def tree_series(d: int, N: int) -> TreeSeries:
    """Closed forms for the ``d``-regular tree rooted at a vertex."""
    if d < 1:
        raise ParameterError(f"tree_series needs d >= 1, got {d}", "d")
    if d == 1:
        # the single edge: returns after 2k steps carry 2k-1 bumps
        G = ps_reciprocal(PowerSeries([1, 0, -1], N))
        F = BivariateSeries.one(N) + _bv([(), (), (0, 1)], N) * ps_reciprocal(_bv([(1,), (), (0, 0, -1)], N))
        Fp = BivariateSeries._make([UPoly((0, 1))], N, (), 1)
        return TreeSeries(F.flip_u(), G, Fp.flip_u())
    q = _bv([(1,), (), (0, d, -1)], N)
    root = _tree_radical(d, N)
    F_flip = (
        _bv([(2 * (d - 1),), (), (0, 0, -2 * (d - 1))], N)
        * ps_reciprocal(q * (d - 2) + root * d)
    )
    Fp_den = _bv([(1,), (), (0, -d, 1)], N) + root
    Fprime_flip = ps_reciprocal(Fp_den) * UPoly((2, -2))
    s = ps_sqrt(PowerSeries([1, 0, -4 * (d - 1)], N))
    G = ps_reciprocal(PowerSeries([d - 2], N) + s * d) * (2 * (d - 1))
    return TreeSeries(F_flip, G, Fprime_flip)


@dataclass
class HChecks:
    """Specialisations of the tree's distance-enriched series against a walk census."""

    d: int
    order: int
    growth_ok: bool  # H(0,1,t) = (1+t)/(1-(d-1)t)
    all_paths_ok: bool  # H(1,1,t) = 1/(1-dt)
    circuits_ok: bool  # H(u,0,t) = F(u,t)
    h1v_ok: bool  # H(1,v,t) from F and F'
    h1v: BivariateSeries  # in the variable v

    @property
    def passed(self) -> bool:
        return self.growth_ok and self.all_paths_ok and self.circuits_ok and self.h1v_ok


def tree_h_series(d: int, N: int) -> HChecks:
    """Check the three specialisations of ``H(u, v, t)`` and the ``H(1, v, t)`` formula.

    The census runs on the wrapped ball of radius ``N`` around the root,
    where walks of length at most ``N`` are exact.
    """
    if d < 2:
        raise ParameterError(f"tree_h_series needs d >= 2, got {d}", "d")
    g = named_family("tree_ball", d=d, r=N)
    counts = walk_distance_census(MarkedGraph(g, 0, 0), N)

    grow = [0] * (N + 1)
    allp = [0] * (N + 1)
    circ: dict = {}
    hv = [[0] * (N + 1) for _ in range(N + 1)]
    for (m, n, k), c in counts.items():
        allp[n] += c
        if m == 0:
            grow[n] += c
        if k == 0:
            circ[(m, n)] = circ.get((m, n), 0) + c
        hv[n][k] += c
    ts = tree_series(d, N)
    F = ts.F_flip.flip_u()
    growth_cf = PowerSeries([1, 1], N) * ps_reciprocal(PowerSeries([1, -(d - 1)], N))
    allp_cf = PowerSeries.geometric(d, N)
    circ_ok = BivariateSeries.from_terms(circ, N) == F
    # H(1, v, t) = (1 + X) / (1 - (d-1) X) * F(1, t) with X = F'(1,t) t v
    Fp1 = ts.Fprime_flip.at_u(0)
    X = BivariateSeries._make(
        [UPoly(())] + [UPoly((0, Fp1.coeffs[n - 1])) for n in range(1, N + 1)], N
    )
    one = BivariateSeries.one(N)
    h1v_cf = (one + X) * ps_reciprocal(one - X * (d - 1)) * BivariateSeries.lift(ts.G)
    h1v_census = BivariateSeries([UPoly(r) for r in hv], N)
    return HChecks(
        d,
        N,
        PowerSeries(grow, N) == growth_cf,
        PowerSeries(allp, N) == allp_cf,
        circ_ok,
        h1v_census == h1v_cf,
        h1v_cf,
    )


def loop_tree_series(d: int, e: int, N: int) -> PowerSeries:
    """Circuit series at a vertex of the ``d``-regular tree where ``e`` branches became self-inverse loops."""
    if d < 2 or not 1 <= e <= d:
        raise ParameterError(f"loop_tree_series needs d >= 2 and 1 <= e <= d, got d={d}, e={e}", "e")
    s = ps_sqrt(PowerSeries([1, 0, -4 * (d - 1)], N))
    den = PowerSeries([d + e - 2, -2 * e * (d - 1)], N) + s * (d - e)
    return ps_reciprocal(den) * (2 * (d - 1))


def loop_tree_radius(d: int, e: int) -> float:
    """Radius of convergence of :func:`loop_tree_series`.

    The candidate pole ``(e-1)/(d+e^2-2e)`` only counts when the principal
    square-root branch vanishes there; otherwise the branch point
    ``1/(2 sqrt(d-1))`` is the nearest singularity.
    """
    if d < 2 or not 1 <= e <= d:
        raise ParameterError(f"loop_tree_radius needs d >= 2 and 1 <= e <= d, got d={d}, e={e}", "e")
    branch = 1 / (2 * math.sqrt(d - 1))
    if e == 1:
        return branch
    t0 = Fraction(e - 1, d + e * e - 2 * e)
    # pole is genuine iff (d-e) s = 2e(d-1)t0 - (d+e-2) has a nonnegative right side
    rhs = 2 * e * (d - 1) * t0 - (d + e - 2)
    if rhs >= 0 and 4 * (d - 1) * t0 * t0 <= 1:
        return min(branch, float(t0))
    return branch


def ladder_series(N: int) -> PowerSeries:
    """Circuit series of the two-poled ladder."""
    gz = ps_reciprocal(ps_sqrt(PowerSeries([1, 0, -4], N)))
    geo = PowerSeries([1] * (N + 1), N)
    return ps_even(ps_compose(gz, geo.mul_t(1)) * geo)


def z12_series(N: int) -> PowerSeries:
    """Circuit series of Z generated by +-1 and +-2, by fixed-point iteration.

    ``f``, ``g``, ``h`` count walks 0->0, 0->1 and 1->1 confined to the
    nonnegative integers; ``G`` and ``e`` count walks 0->0 and 0->1 in Z.
    Every step contributes one factor ``t``.  A walk 0->1 is split at its
    last visit to a nonpositive site, which is 0 or -1; walks 0->-1 are
    counted by ``e`` again, by symmetry.
    """
    one = PowerSeries.one(N)
    zero = PowerSeries.zero(N)
    f = g = h = zero
    for _ in range(N + 2):
        f = one + (f + g * 2 + h).mul_t(2) * f
        g = (f * (f + g)).mul_t(1)
        h = f + (g * (f + g)).mul_t(1)
    G = e = zero
    for _ in range(N + 2):
        G = one + (f * G + g * G + f * e + g * e + g * G + h * G).mul_t(2) * 2
        e = (G * (f + g) + e * f).mul_t(1)
    return G


def z12_closed_form(N: int) -> PowerSeries:
    """The same series from its quartic: ``delta`` is the root with ``delta(0) = 1``."""
    t = PowerSeries.t(N)
    one = PowerSeries.one(N)
    delta = one
    for _ in range(N + 2):
        d2 = delta * delta
        d3 = d2 * delta
        delta = (
            one
            - (t * 2) * delta
            + t * (PowerSeries([2, 3], N)) * d2
            - t * t * PowerSeries([1, 2], N) * d3
            + (t ** 4) * d2 * d2
        )
    d2 = delta * delta
    d3 = d2 * delta
    num = (
        PowerSeries([4, 3, -6], N)
        - t * PowerSeries([1, 2], N) * delta * 10
        + t * t * PowerSeries([3, 8], N) * d2 * 2
        - (t ** 4) * PowerSeries([1, 1], N) * d3 * 6
    )
    return num * ps_reciprocal(PowerSeries([4, -7, -36], N))


def psl2_series(N: int) -> PowerSeries:
    """Circuit series of the Cayley graph of PSL2(Z) for an involution and an order-three generator."""
    root = ps_sqrt(PowerSeries([1, -2, -5, 6, 1], N))
    num = PowerSeries([2, -1], N) * root + PowerSeries([0, -1, 1, 1], N)
    return num * ps_reciprocal(PowerSeries([2, -4, -10, 12], N))
