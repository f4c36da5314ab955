"""The ten acceptance criteria.

Each criterion prints one ``PASS``/``FAIL`` line.  Run directly with
``python tests/test_acceptance.py`` or through pytest, where the lines are
also repeated in the terminal summary.
"""
import math
import random
import sys
from fractions import Fraction

import pytest

from pathseries.catalog import cycle_series, psl2_series, tree_series
from pathseries.cogrowth import grigorchuk_nu, psl2_domain, psl2_nu, psl2_phi
from pathseries.enumeration import all_paths, bump_count, bump_scheme_sum, path_census
from pathseries.graph import (
    Graph,
    MarkedGraph,
    add_loops,
    direct_first,
    direct_second,
    free_product_truncate,
    named_family,
)
from pathseries.products import direct_first_series, direct_second_series, free_product_series, loops_series
from pathseries.series import BivariateSeries, PowerSeries, UPoly, estimate_radius, ps_reciprocal, ps_sqrt
from pathseries.transfer import (
    enriched_series,
    eqb_sides,
    first_discrepancy,
    g_from_f,
    green_series,
    labelled_transform,
    linear_recurrence_check,
)
from pathseries.zeta import zeta_from_cycles, zeta_inverse_det, zeta_inverse_factored

RESULTS: dict = {}


def _record(num, title, ok, detail=""):
    line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    RESULTS[num] = line
    print(line)
    return ok


def _centered(g):
    c = g.center if g.center is not None else 0
    return MarkedGraph(g, c, c)


def _cubic_multigraph(seed=3):
    rnd = random.Random(seed)
    stubs = [v for v in range(4) for _ in range(3)]
    rnd.shuffle(stubs)
    return Graph(4, tuple(stubs), tuple(i ^ 1 for i in range(12)), name="cubic-multigraph")


# ---------------------------------------------------------------------------


def criterion_1():
    graphs = [
        named_family("complete", v=3), named_family("complete", v=4),
        named_family("cycle", k=5), named_family("cycle", k=6),
        named_family("tree_ball", d=3, r=5), named_family("loop_tree", d=4, e=2, r=5),
        named_family("ladder", r=6), named_family("z12", r=6),
    ]
    bad = []
    for g in graphs:
        mg = _centered(g)
        F = enriched_series(mg, 12, strict=False)
        if first_discrepancy(path_census(mg, 12).as_bivariate(), F) is not None:
            bad.append(g.name)
    return _record(1, "oracle equivalence, 8 graphs, n <= 12", not bad, ", ".join(bad))


def criterion_2():
    N = 16
    graphs = [
        named_family("complete", v=3), named_family("complete", v=4), named_family("cycle", k=5),
        named_family("cycle", k=6), named_family("tree_ball", d=3, r=8), named_family("loop_tree", d=4, e=2, r=8),
        named_family("ladder", r=8), named_family("z12", r=8), named_family("edge"), _cubic_multigraph(),
    ]
    bad = []
    for g in graphs:
        c = path_census(_centered(g), N)
        left, right = eqb_sides(c.as_bivariate(), c.green(), g.regular_degree(), N)
        if first_discrepancy(left, right) is not None:
            bad.append(g.name)
    return _record(2, f"regular-graph identity on {len(graphs)} graphs, order 16", not bad, ", ".join(bad))


def criterion_3():
    G = g_from_f(PowerSeries.one(6), 4, 0)
    s = ps_sqrt(PowerSeries([1, 0, -12], 6))
    closed = ps_reciprocal(PowerSeries([2], 6) + s * 4) * 6
    ok = G.coeffs == (1, 0, 4, 0, 28, 0, 232) and G == closed and G == tree_series(4, 6).G
    return _record(3, "tree reconstruction from F(0,t) = 1, d = 4", ok, " ".join(map(str, G.coeffs)))


def criterion_4():
    loop_bearing = Graph(3, (0, 1, 1, 2, 2, 0, 1), (1, 0, 3, 2, 5, 4, 6), name="triangle+half-loop")
    graphs = [named_family("complete", v=3), named_family("complete", v=4), named_family("cycle", k=5),
              loop_bearing, _cubic_multigraph()]
    bad = []
    for g in graphs:
        det = zeta_inverse_det(g)
        if det != zeta_inverse_factored(g):
            bad.append(f"{g.name}: det != factored")
        elif ps_reciprocal(det.to_series(10)) != zeta_from_cycles(g, 10):
            bad.append(f"{g.name}: cycle product")
    return _record(4, "determinant = factored form, 1/det = cycle product to order 10", not bad, "; ".join(bad))


def criterion_5():
    N = 16
    notes = []
    ok = True
    for d, e in ((1, 1), (1, 2), (2, 2), (2, 3), (3, 3)):
        if free_product_series(tree_series(d, N).G, tree_series(e, N).G) != tree_series(d + e, N).G:
            ok = False
            notes.append(f"tree({d})*tree({e})")
    G1 = ps_reciprocal(PowerSeries([1, 0, -1], N))
    P = free_product_series(G1, cycle_series(3, N).G)
    mg = free_product_truncate(MarkedGraph(named_family("edge")), MarkedGraph(named_family("cycle", k=3)), 8)
    if P != psl2_series(N) or green_series(mg, N) != P:
        ok = False
        notes.append("edge*triangle")
    Z = tree_series(2, 60).G
    growth = estimate_radius(free_product_series(Z, Z)).growth
    if abs(growth - math.sqrt(12)) / math.sqrt(12) > 0.05 or abs(growth - 8) < 1:
        ok = False
    notes.append(f"Z*Z growth {growth:.4f}, sqrt(12) = {math.sqrt(12):.4f}")
    return _record(5, "free products", ok, "; ".join(notes))


def criterion_6():
    Z = tree_series(2, 8).G
    Z2 = direct_first_series(Z, Z)
    seg = named_family("tree_ball", d=2, r=4)
    grid = direct_first(seg, seg)
    ok1 = (Z2[2], Z2[4], Z2[6]) == (4, 36, 400) and green_series(_centered(grid), 8) == Z2
    lseg = add_loops(seg)
    king = direct_second(lseg, lseg)
    Zl = loops_series(Z)
    ok2 = direct_second_series(Zl, Zl) == green_series(_centered(king), 8)
    return _record(6, "direct products vs grid and king-graph enumeration", ok1 and ok2,
                   f"binomial {'ok' if ok1 else 'bad'}, hadamard {'ok' if ok2 else 'bad'}")


def criterion_7():
    count = 0
    bad = 0
    for g in (named_family("complete", v=3), named_family("cycle", k=4)):
        for n in range(7):
            for x in range(g.vertex_count):
                for p in all_paths(g, x, n):
                    count += 1
                    if bump_scheme_sum(g, p) != UPoly([0] * bump_count(g, p) + [1]):
                        bad += 1
    return _record(7, "bump-scheme lemma, all paths of length <= 6 in K3 and C4", bad == 0,
                   f"{count} paths, {bad} failures")


def criterion_8():
    rnd = random.Random(2024)
    trials = 0
    bad = 0
    for g in (named_family("complete", v=3), named_family("cycle", k=4)):
        for i in range(20):
            w = [Fraction(rnd.randint(-7, 7), rnd.randint(1, 7)) for _ in range(g.half_edge_count)]
            mg = MarkedGraph(g, 0, i % g.vertex_count)
            trials += 1
            if not labelled_transform(mg, w, 10).agree:
                bad += 1
    return _record(8, "labelled identity, random rational weights, order 10", bad == 0,
                   f"{trials} assignments, {bad} failures")


def criterion_9():
    errs = []
    target = 2 * math.sqrt(3) / 4
    e1 = max(abs(grigorchuk_nu(a, 4).nu - target) for a in (0, 0.5, 1, 1.5, math.sqrt(3)))
    errs.append(e1 <= 1e-12)
    est = estimate_radius(tree_series(4, 60).G)
    rel = abs(est.radius - 1 / (2 * math.sqrt(3))) * 2 * math.sqrt(3)
    errs.append(rel <= 0.01)
    cont = max(abs(grigorchuk_nu(math.sqrt(d - 1), d).nu - (math.sqrt(d - 1) + (d - 1) / math.sqrt(d - 1)) / d)
               for d in (3, 4, 5))
    errs.append(cont <= 1e-12)
    lo, hi = psl2_domain()
    rec = max(abs(psl2_nu(a) * psl2_phi(1 / a) - 1) for a in (lo + (hi - lo) * i / 99 for i in range(100)))
    errs.append(rec <= 1e-12)
    return _record(9, "numerics", all(errs),
                   f"subcritical err {e1:.1e}, radius rel err {rel:.2e}, continuity {cont:.1e}, reciprocity {rec:.1e}")


def criterion_10():
    graphs = [
        named_family("complete", v=3), named_family("complete", v=4), named_family("cycle", k=1),
        named_family("cycle", k=5), named_family("cycle", k=6), named_family("edge"), _cubic_multigraph(),
        add_loops(named_family("complete", v=3)), named_family("tree_ball", d=3, r=3),
        named_family("loop_tree", d=4, e=2, r=3), named_family("ladder", r=4), named_family("z12", r=4),
    ]
    bad = []
    for g in graphs:
        for death in {0, g.vertex_count - 1}:
            rep = linear_recurrence_check(MarkedGraph(g, 0, death))
            if not rep.passed or len(rep.numerator) > g.vertex_count:
                bad.append(f"{g.name}->{death}")
    return _record(10, f"rationality on {len(graphs)} finite graphs", not bad, ", ".join(bad))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i + 1:02d}" for i in range(10)])
def test_criterion(criterion):
    assert criterion(), RESULTS.get(int(criterion.__name__.split("_")[1]))


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
