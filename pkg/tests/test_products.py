import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathseries.catalog import cycle_series, psl2_series, tree_series
from pathseries.exceptions import InversionError
from pathseries.graph import MarkedGraph, add_loops, direct_first, direct_second, named_family
from pathseries.products import (
    direct_first_series,
    direct_second_series,
    free_product_series,
    loops_series,
    radius_additivity_report,
)
from pathseries.series import PowerSeries, ps_reciprocal, ps_sqrt
from pathseries.transfer import green_series

N = 16


def tree_G(d, n=N):
    return tree_series(d, n).G


def triangle_G(n=N):
    return cycle_series(3, n).G


# --- free product ------------------------------------------------------------


@pytest.mark.parametrize("d, e", [(1, 1), (1, 2), (2, 2), (2, 3), (1, 4)])
def test_trees_add_degrees(d, e):
    assert free_product_series(tree_G(d), tree_G(e)) == tree_G(d + e)


def test_psl2_closed_form():
    G1 = ps_reciprocal(PowerSeries([1, 0, -1], N))
    assert free_product_series(G1, triangle_G()) == psl2_series(N)


def test_z_star_z_closed_form():
    Z = tree_G(2)
    s = ps_sqrt(PowerSeries([1, 0, -12], N))
    assert free_product_series(Z, Z) == ps_reciprocal(PowerSeries([1], N) + s * 2) * 3


def test_unit_law():
    G = triangle_G()
    assert free_product_series(G, PowerSeries.one(N)) == G


def test_associativity_via_trees():
    a, b, c = tree_G(1), tree_G(2), tree_G(3)
    left = free_product_series(free_product_series(a, b), c)
    right = free_product_series(a, free_product_series(b, c))
    assert left == right == tree_G(6)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.sampled_from([3, 4, 5]))
def test_commutative_and_integral(d, k):
    a, b = tree_G(d, 12), cycle_series(k, 12).G
    ab = free_product_series(a, b)
    assert ab == free_product_series(b, a)
    assert all(isinstance(c, int) and c >= 0 for c in ab.coeffs)


def test_free_product_needs_circuit_series():
    with pytest.raises(InversionError):
        free_product_series(PowerSeries([2, 1], 4), PowerSeries.one(4))


# --- direct products -----------------------------------------------------------


def test_z_times_z():
    Z = tree_G(2, 8)
    Z2 = direct_first_series(Z, Z)
    assert (Z2[2], Z2[4], Z2[6]) == (4, 36, 400)
    seg = named_family("tree_ball", d=2, r=4)
    grid = direct_first(seg, seg)
    assert green_series(MarkedGraph(grid, grid.center, grid.center), 8) == Z2


def test_direct_first_unit_and_finite_oracle():
    G = triangle_G(10)
    assert direct_first_series(G, PowerSeries.one(10)) == G
    edge = named_family("edge")
    prod = direct_first(named_family("complete", v=3), edge)
    oracle = green_series(MarkedGraph(prod), 10)
    assert direct_first_series(G, tree_G(1, 10)) == oracle


def test_direct_second():
    seg = add_loops(named_family("tree_ball", d=2, r=4))
    king = direct_second(seg, seg)
    Zl = loops_series(tree_G(2, 8))
    assert direct_second_series(Zl, Zl) == green_series(MarkedGraph(king, king.center, king.center), 8)
    f = PowerSeries([1, 2, 5, 7], 3)
    assert direct_second_series(f, PowerSeries([1, 1, 1, 1], 3)) == f
    assert direct_second_series(PowerSeries.geometric(2, 6), PowerSeries.geometric(5, 6)) == PowerSeries.geometric(10, 6)


def test_loops_series():
    assert loops_series(PowerSeries.one(6)) == PowerSeries([1] * 7, 6)
    seg = named_family("tree_ball", d=2, r=5)
    Zl = loops_series(tree_G(2, 10))
    assert Zl == green_series(MarkedGraph(add_loops(seg)), 10)
    assert loops_series(Zl) == green_series(MarkedGraph(add_loops(add_loops(seg))), 10)


# --- radius additivity -----------------------------------------------------------


def test_additivity_finite_factors():
    G = triangle_G(60)
    rep = radius_additivity_report(G, G)
    assert rep.growth_E == pytest.approx(2, rel=0.01)
    assert rep.additive  # within 5%
    # but the product falls strictly short: its growth tends to 1 + 2 sqrt(2)
    assert rep.growth_product < 3.9
    assert rep.to_json()["tolerance"] == 0.05


def test_additivity_fails_for_z():
    Z = tree_G(2, 60)
    rep = radius_additivity_report(Z, Z)
    assert rep.growth_product == pytest.approx(math.sqrt(12), rel=0.05)
    assert rep.growth_E == pytest.approx(2, rel=0.02)
    assert not rep.additive
    assert rep.notes


def test_additivity_unit():
    G = triangle_G(40)
    rep = radius_additivity_report(G, PowerSeries.one(40))
    assert rep.growth_F == 0 and rep.additive
    assert rep.growth_product == pytest.approx(rep.growth_E)
