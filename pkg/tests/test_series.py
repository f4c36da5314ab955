import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathseries.exceptions import (
    CompositionError,
    EstimationError,
    InvariantError,
    SeriesDivisionError,
    SeriesError,
    SqrtError,
)
from pathseries.series import (
    BivariateSeries,
    PowerSeries,
    UPoly,
    as_rational,
    estimate_radius,
    flip_u,
    ps_binomial_product,
    ps_borel,
    ps_comp_inverse,
    ps_compose,
    ps_even,
    ps_hadamard,
    ps_laplace,
    ps_reciprocal,
    ps_sqrt,
)

N = 12
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def series(order=N, const=None):
    coeffs = st.lists(rationals, min_size=order + 1, max_size=order + 1)
    if const is None:
        return coeffs.map(lambda c: PowerSeries(c, order))
    return coeffs.map(lambda c: PowerSeries([const] + c[1:], order))


def central_binomial(N):
    return PowerSeries([math.comb(n, n // 2) if n % 2 == 0 else 0 for n in range(N + 1)], N)


# --- scalars and polynomials ------------------------------------------------


def test_as_rational_rejects_floats():
    assert as_rational(Fraction(4, 2)) == 2 and isinstance(as_rational(Fraction(4, 2)), int)
    assert as_rational("3/4") == Fraction(3, 4)
    with pytest.raises(SeriesError):
        as_rational(0.5)


def test_upoly_flip_and_eval():
    p = UPoly((1, 2, 3))
    assert p.flip()(Fraction(1, 3)) == p(Fraction(2, 3))
    assert p.flip().flip() == p
    assert UPoly(()).degree == -1


# --- basic arithmetic --------------------------------------------------------


def test_reciprocal_examples():
    assert ps_reciprocal(PowerSeries([1, -1], 8)).coeffs == (1,) * 9
    assert ps_reciprocal(PowerSeries.one(5)) == PowerSeries.one(5)
    assert ps_reciprocal(PowerSeries([1, -1, -2], 4)).coeffs == (1, 1, 3, 5, 11)


def test_reciprocal_needs_unit():
    with pytest.raises(SeriesDivisionError):
        ps_reciprocal(PowerSeries([0, 1], 4))


def test_compose_examples():
    geo = PowerSeries([1] * 9, 8)
    t2 = PowerSeries([0, 0, 1], 8)
    assert ps_compose(geo, t2).coeffs == (1, 0, 1, 0, 1, 0, 1, 0, 1)
    f = PowerSeries([3, 1, 4, 1, 5], 8)
    assert ps_compose(f, PowerSeries.t(8)) == f
    with pytest.raises(CompositionError):
        ps_compose(f, PowerSeries([1, 1], 8))


def test_compose_tree_substitution_constant_term():
    s = ps_sqrt(PowerSeries([1, 0, -12], 10))
    G = ps_reciprocal(PowerSeries([2], 10) + s * 4) * 6
    sub = PowerSeries.t(10) * ps_reciprocal(PowerSeries([1, 0, 3], 10))
    assert ps_compose(G, sub)[0] == 1


def test_sqrt_examples():
    assert ps_sqrt(PowerSeries.one(6)) == PowerSeries.one(6)
    assert ps_sqrt(PowerSeries([1, 0, -4], 6)).coeffs == (1, 0, -2, 0, -2, 0, -4)
    with pytest.raises(SqrtError):
        ps_sqrt(PowerSeries([2, 1], 4))


def test_sqrt_tree_radicand_squares_back():
    q = BivariateSeries._make([UPoly((1,)), UPoly(()), UPoly((0, 3, -1))], 10)
    rad = q * q - BivariateSeries._make([UPoly(()), UPoly(()), UPoly((8,))], 10)
    r = ps_sqrt(rad.at_u(0))
    assert r * r == rad.at_u(0)
    rb = ps_sqrt(rad)
    assert rb * rb == rad


def test_comp_inverse_examples():
    f = PowerSeries([0] + [1] * 10, 10)
    assert ps_comp_inverse(f).coeffs == tuple([0] + [(-1) ** (n - 1) for n in range(1, 11)])
    assert ps_comp_inverse(PowerSeries.t(6)) == PowerSeries.t(6)
    tG = PowerSeries([0] + list(ps_reciprocal(ps_sqrt(PowerSeries([1, 0, -4], 16))).coeffs), 16)
    inv = ps_comp_inverse(tG)
    assert ps_compose(tG, inv) == PowerSeries.t(16)
    assert ps_compose(inv, tG) == PowerSeries.t(16)


def test_borel_laplace():
    b = ps_borel(PowerSeries([1] * 7, 6))
    assert b.coeffs == tuple(Fraction(1, math.factorial(n)) for n in range(7))
    f = PowerSeries([2, -1, 3, 0, 5], 4)
    assert ps_laplace(ps_borel(f)) == f


def test_binomial_product():
    one = PowerSeries.one(8)
    assert ps_binomial_product(one, one) == one
    Z = central_binomial(8)
    Z2 = ps_binomial_product(Z, Z)
    assert (Z2[2], Z2[4], Z2[6], Z2[8]) == (4, 36, 400, 4900)
    f = PowerSeries([1, 2, 3, 4], 3)
    assert ps_binomial_product(f, PowerSeries.one(3)) == f
    assert Z2 == ps_laplace(ps_borel(Z) * ps_borel(Z))


def test_hadamard_and_even():
    h = ps_hadamard(PowerSeries.geometric(2, 8), PowerSeries.geometric(3, 8))
    assert h == PowerSeries.geometric(6, 8)
    f = PowerSeries([5, 1, 2, 7], 3)
    assert ps_hadamard(f, PowerSeries([1] * 4, 3)) == f
    assert ps_even(PowerSeries([1] * 9, 8)).coeffs == (1, 0, 1, 0, 1, 0, 1, 0, 1)
    trinomial = ps_reciprocal(ps_sqrt(PowerSeries([1, -2, -3], 6)))
    assert ps_even(trinomial).coeffs == (1, 0, 3, 0, 19, 0, 141)
    assert ps_even(ps_even(trinomial)) == ps_even(trinomial)


def test_mixed_orders_record_loss():
    s = PowerSeries([1, 1, 1], 5) + PowerSeries([1, 2], 3)
    assert s.order == 3
    assert s.diagnostics


def test_mul_t_div_t():
    f = PowerSeries([1, 2, 3], 4)
    assert f.mul_t(2).coeffs == (0, 0, 1, 2, 3)
    assert f.mul_t(2).div_t(2).order == 2


# --- bivariate ---------------------------------------------------------------


def test_bivariate_invariant_enforced():
    with pytest.raises(InvariantError):
        BivariateSeries([UPoly((0, 1))], 3)
    b = BivariateSeries([UPoly((1,)), UPoly((0, 1))], 3)
    assert b.coefficient(1, 1) == 1


def test_bivariate_flip_and_at_u():
    f = BivariateSeries.from_terms({(0, 0): 1, (1, 2): 2, (2, 2): 3}, 4)
    assert flip_u(flip_u(f)) == f
    assert f.flip_u().at_u(0) == f.at_u(1)


def test_json_round_trip():
    f = PowerSeries([1, Fraction(-3, 7), 2], 4)
    assert PowerSeries.from_json(f.to_json()) == f
    assert f.to_json()["coeffs"][1] == "-3/7"
    b = BivariateSeries.from_terms({(0, 0): 1, (1, 2): Fraction(1, 2)}, 3)
    assert BivariateSeries.from_json(b.to_json()) == b


# --- properties --------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(series(), series(), series())
def test_distributive(f, g, h):
    assert (f + g) * h == f * h + g * h


@settings(max_examples=50, deadline=None)
@given(series(8, 0), series(8, 0), series(8))
def test_compose_associative(g, h, f):
    assert ps_compose(f, ps_compose(g, h)) == ps_compose(ps_compose(f, g), h)


@settings(max_examples=50, deadline=None)
@given(series(10, 1))
def test_sqrt_and_reciprocal_round_trip(f):
    r = ps_sqrt(f)
    assert r * r == f
    assert ps_reciprocal(f) * f == PowerSeries.one(10)


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=9, max_size=9), st.fractions(min_value=1, max_value=4, max_denominator=3))
def test_comp_inverse_round_trip(c, lead):
    f = PowerSeries([0, lead] + c, 10)
    g = ps_comp_inverse(f)
    assert ps_compose(f, g) == PowerSeries.t(10)
    assert ps_compose(g, f) == PowerSeries.t(10)


@settings(max_examples=40, deadline=None)
@given(series(8), series(8))
def test_binomial_product_is_borel_laplace(f, g):
    assert ps_binomial_product(f, g) == ps_laplace(ps_borel(f) * ps_borel(g))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), max_size=3), min_size=6, max_size=6))
def test_bivariate_products_keep_invariant(rows):
    rows = [r[: n + 1] for n, r in enumerate(rows)]
    a = BivariateSeries([UPoly(r) for r in rows], 5)
    b = a * a + a
    for n, p in enumerate(b.coeffs):
        assert p.degree <= n


# --- radius estimation -------------------------------------------------------


def test_estimate_radius_examples():
    assert estimate_radius(central_binomial(40)).radius == pytest.approx(0.5, rel=0.01)
    assert estimate_radius(PowerSeries.geometric(3, 20)).radius == pytest.approx(1 / 3, rel=1e-9)
    s = ps_sqrt(PowerSeries([1, 0, -12], 60))
    G = ps_reciprocal(PowerSeries([2], 60) + s * 4) * 6
    est = estimate_radius(G)
    assert est.radius == pytest.approx(1 / (2 * math.sqrt(3)), rel=0.01)
    assert any("odd" in n for n in est.notes)
    assert estimate_radius(central_binomial(40), "root").radius == pytest.approx(0.5, rel=0.1)


def test_estimate_radius_errors():
    with pytest.raises(EstimationError):
        estimate_radius(PowerSeries([1, 1, 1], 2))
    with pytest.raises(EstimationError):
        estimate_radius(PowerSeries([1, -1] * 10, 19))
