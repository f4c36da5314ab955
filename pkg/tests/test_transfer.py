import random
from fractions import Fraction

import pytest

from pathseries.catalog import tree_series
from pathseries.enumeration import path_census
from pathseries.exceptions import CompositionError, HorizonError
from pathseries.graph import Graph, MarkedGraph, named_family
from pathseries.series import BivariateSeries, PowerSeries, UPoly, ps_reciprocal, ps_sqrt
from pathseries.transfer import (
    LabelAssignment,
    charpoly,
    enriched_series,
    eqb_sides,
    f_from_g,
    first_discrepancy,
    g_from_f,
    green_series,
    labelled_transform,
    linear_recurrence_check,
    transformed_labels,
)

K3 = named_family("complete", v=3)
K4 = named_family("complete", v=4)
C4 = named_family("cycle", k=4)


def test_green_examples():
    assert green_series(MarkedGraph(K4), 4).coeffs == (1, 0, 3, 6, 21)
    assert green_series(MarkedGraph(named_family("tree_ball", d=4, r=3)), 6).coeffs == (1, 0, 4, 0, 28, 0, 232)
    assert green_series(MarkedGraph(K3, 0, 1), 5).coeffs == (0, 1, 1, 3, 5, 11)


def test_horizon_is_enforced():
    mg = MarkedGraph(named_family("tree_ball", d=3, r=2))
    with pytest.raises(HorizonError):
        green_series(mg, 5)
    G = green_series(mg, 5, strict=False)
    assert G.diagnostics


def test_enriched_examples():
    F = enriched_series(MarkedGraph(named_family("edge")), 8)
    # every return of length 2k has 2k-1 bumps
    assert F == BivariateSeries.from_terms({(0, 0): 1, (1, 2): 1, (3, 4): 1, (5, 6): 1, (7, 8): 1}, 8)
    seg = MarkedGraph(named_family("tree_ball", d=2, r=3))
    assert enriched_series(seg, 4).coeffs[4] == UPoly((0, 2, 2, 2))
    for mg in (MarkedGraph(K4), MarkedGraph(K3, 0, 2)):
        assert enriched_series(mg, 9).at_u(1) == green_series(mg, 9)


@pytest.mark.parametrize("g", [K3, K4, C4, named_family("loop_tree", d=3, e=1, r=3), named_family("ladder", r=3)])
def test_enriched_matches_census(g):
    for death in (0, 1):
        mg = MarkedGraph(g, 0, death)
        assert enriched_series(mg, 9, strict=False) == path_census(mg, 9).as_bivariate()


def test_vertex_K_on_regular_graph():
    d = 3
    tl = transformed_labels(K4, 8)
    u = UPoly((0, 1))
    one_minus_u = UPoly((1, -1))
    num = BivariateSeries._make([UPoly((1,)), UPoly(()), -(one_minus_u * one_minus_u)], 8)
    den = BivariateSeries._make([UPoly((1,)), UPoly(()), (UPoly((d - 1,)) + u) * one_minus_u], 8)
    expected = num * ps_reciprocal(den)
    assert all(K == expected for K in tl.K.values())


# --- labelled identity -------------------------------------------------------


def test_labelled_unit_weights():
    mg = MarkedGraph(K3)
    lt = labelled_transform(mg, LabelAssignment.unit(K3), 8)
    assert lt.agree and lt.rhs == enriched_series(mg, 8)


@pytest.mark.parametrize("g", [K3, C4])
def test_labelled_random_weights(g):
    rnd = random.Random(7)
    for _ in range(5):
        w = [Fraction(rnd.randint(-5, 5), rnd.randint(1, 5)) for _ in range(g.half_edge_count)]
        lt = labelled_transform(MarkedGraph(g, 0, 1), w, 8)
        assert lt.agree, lt.first_discrepancy()


def test_labelled_zero_pair_deletes_edge():
    e = next(e for e in K3.out_edges(0) if K3.target(e) == 1)
    labels = {e: 0, K3.partner[e]: 0}
    lt = labelled_transform(MarkedGraph(K3), labels, 8)
    keep = [x for x in range(K3.half_edge_count) if x not in labels]
    path = Graph(3, tuple(K3.source[x] for x in keep),
                 tuple(keep.index(K3.partner[x]) for x in keep))
    assert lt.lhs == lt.rhs == enriched_series(MarkedGraph(path), 8)


# --- F <-> G -----------------------------------------------------------------


def test_f_from_g_examples():
    tree_G = green_series(MarkedGraph(named_family("tree_ball", d=4, r=6)), 12)
    assert f_from_g(tree_G, 4).at_u(0) == PowerSeries.one(12)
    F0 = f_from_g(green_series(MarkedGraph(K3), 12), 2).at_u(0)
    t3 = PowerSeries([0, 0, 0, 1], 12)
    assert F0 == (PowerSeries.one(12) + t3) * ps_reciprocal(PowerSeries.one(12) - t3)
    G = green_series(MarkedGraph(K4), 10)
    assert f_from_g(G, 3).at_u(1) == G


def test_g_from_f_examples():
    G = g_from_f(PowerSeries.one(6), 4, 0)
    assert G.coeffs == (1, 0, 4, 0, 28, 0, 232)
    s = ps_sqrt(PowerSeries([1, 0, -12], 6))
    assert G == ps_reciprocal(PowerSeries([2], 6) + s * 4) * 6
    G4 = green_series(MarkedGraph(K4), 16)
    assert g_from_f(f_from_g(G4, 3), 3, 0) == G4
    assert g_from_f(f_from_g(G4, 3), 3, Fraction(1, 2)) == G4


def test_g_from_f_loop_tree():
    d, e, N = 4, 2, 10
    F0 = PowerSeries([1, 1], N) * ps_reciprocal(PowerSeries([1, -(e - 1)], N))
    s = ps_sqrt(PowerSeries([1, 0, -4 * (d - 1)], N))
    closed = ps_reciprocal(PowerSeries([d + e - 2, -2 * e * (d - 1)], N) + s * (d - e)) * (2 * (d - 1))
    assert g_from_f(F0, d, 0) == closed


def test_g_from_f_singular():
    with pytest.raises(CompositionError):
        g_from_f(PowerSeries.one(4), 1, 0)


@pytest.mark.parametrize("mg", [
    MarkedGraph(K3), MarkedGraph(K4), MarkedGraph(named_family("cycle", k=5)),
    MarkedGraph(named_family("tree_ball", d=3, r=4)), MarkedGraph(named_family("edge")),
    MarkedGraph(named_family("z12", r=3)),
])
def test_eqb_identity(mg):
    N = 12
    F = path_census(mg, N).as_bivariate()
    G = path_census(mg, N).green()
    left, right = eqb_sides(F, G, mg.graph.regular_degree(), N)
    assert first_discrepancy(left, right) is None


def test_tree_eqb_closed_form_d1():
    ts = tree_series(1, 10)
    left, right = eqb_sides(ts.F_flip.flip_u(), ts.G, 1, 10)
    assert left == right


# --- rationality -------------------------------------------------------------


def test_charpoly():
    assert charpoly([[0, 1], [1, 0]]) == [-1, 0, 1]
    assert charpoly([[2]]) == [-2, 1]


def test_recurrence_examples():
    r = linear_recurrence_check(MarkedGraph(K3))
    assert r.passed and r.denominator == [1, -1, -2] and r.recurrence() == [1, 2]
    r = linear_recurrence_check(MarkedGraph(K4))
    assert r.passed and r.denominator == [1, -2, -3]  # (1+t)(1-3t)
    r = linear_recurrence_check(MarkedGraph(named_family("cycle", k=1)))
    assert r.passed and r.determinant == [1, -2]


@pytest.mark.parametrize("g", [C4, named_family("loop_tree", d=3, e=2, r=2), named_family("ladder", r=2)])
def test_recurrence_various(g):
    r = linear_recurrence_check(MarkedGraph(g, 0, g.vertex_count - 1))
    assert r.passed
    assert len(r.numerator) <= g.vertex_count
    assert r.to_json()["passed"] is True
