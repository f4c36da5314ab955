"""Circuit series of free and direct products, from the factors' series alone."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import EstimationError, InversionError
from .series import (
    PowerSeries,
    estimate_radius,
    ps_binomial_product,
    ps_comp_inverse,
    ps_compose,
    ps_hadamard,
    ps_reciprocal,
)

__all__ = [
    "free_product_series",
    "direct_first_series",
    "direct_second_series",
    "loops_series",
    "AdditivityReport",
    "radius_additivity_report",
]


def _inverse_over_t(G: PowerSeries) -> PowerSeries:
    """``(t G)^{<-1>} / t`` for ``G(0) = 1``: constant term 1, same order as ``G``."""
    N = G.order
    tG = PowerSeries([0] + list(G.coeffs), N + 1)
    return ps_comp_inverse(tG).div_t(1)


def free_product_series(G_E: PowerSeries, G_F: PowerSeries, N: int | None = None) -> PowerSeries:
    """Circuit series of the free product at the glued base point.

    With ``psi_X = (t G_X)^{<-1>} / t`` the factors combine as
    ``1/psi = 1/psi_E + 1/psi_F - 1``; then ``t G = (t psi)^{<-1>}``.
    """
    N = min(G_E.order, G_F.order) if N is None else N
    G_E, G_F = G_E.truncate(N), G_F.truncate(N)
    for label, G in (("G_E", G_E), ("G_F", G_F)):
        if G.coeffs[0] != 1:
            raise InversionError(f"{label} must have constant term 1 (a circuit series)")
    inv = ps_reciprocal(_inverse_over_t(G_E)) + ps_reciprocal(_inverse_over_t(G_F)) - 1
    psi = ps_reciprocal(inv)
    t_psi = PowerSeries([0] + list(psi.coeffs), N + 1)
    return ps_comp_inverse(t_psi).div_t(1)


def direct_first_series(G_E: PowerSeries, G_F: PowerSeries, N: int | None = None) -> PowerSeries:
    """Cartesian product: binomial convolution of the coefficients."""
    N = min(G_E.order, G_F.order) if N is None else N
    return ps_binomial_product(G_E.truncate(N), G_F.truncate(N))


def direct_second_series(G_E: PowerSeries, G_F: PowerSeries, N: int | None = None) -> PowerSeries:
    """Tensor product of loop-carrying graphs: coefficient-wise product."""
    N = min(G_E.order, G_F.order) if N is None else N
    return ps_hadamard(G_E.truncate(N), G_F.truncate(N))


def loops_series(g_series: PowerSeries, N: int | None = None) -> PowerSeries:
    """Series after adding one loop at every vertex: ``g(t/(1-t)) / (1-t)``."""
    N = g_series.order if N is None else N
    geo = PowerSeries([1] * (N + 1), N)
    return ps_compose(g_series.truncate(N), geo.mul_t(1)) * geo


@dataclass
class AdditivityReport:
    """Numeric check of ``1/rho(E*F) = 1/rho(E) + 1/rho(F)``."""

    growth_E: float
    growth_F: float
    growth_product: float
    predicted: float
    relative_error: float
    tolerance: float
    additive: bool
    notes: list = field(default_factory=list)
    product: PowerSeries = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "growth_E": self.growth_E,
            "growth_F": self.growth_F,
            "growth_product": self.growth_product,
            "predicted_sum": self.predicted,
            "relative_error": self.relative_error,
            "tolerance": self.tolerance,
            "additive": self.additive,
            "notes": list(self.notes),
            "product": self.product.to_json() if self.product is not None else None,
        }


def _growth(G: PowerSeries, label: str, notes: list) -> float:
    nonzero = sum(1 for c in G.coeffs[1:] if c != 0)
    if nonzero == 0:
        notes.append(f"{label} is constant; growth 0")
        return 0.0
    even_nonzero = sum(1 for n, c in enumerate(G.coeffs) if n and n % 2 == 0 and c != 0)
    if even_nonzero < 12:
        raise EstimationError(f"{label}: only {even_nonzero} nonzero even coefficients; need 12")
    return estimate_radius(G, "ratio").growth


def radius_additivity_report(
    G_E: PowerSeries, G_F: PowerSeries, N: int | None = None, tolerance: float = 0.05
) -> AdditivityReport:
    """Estimate the three growth rates and compare the product's with the sum.

    The identity is only claimed when all three series blow up at their
    radius; a shortfall of the product is the signature of a transient
    product (the free product of two copies of Z is the standard example).
    The verdict is numeric, not a proof.
    """
    notes: list = []
    prod = free_product_series(G_E, G_F, N)
    gE = _growth(G_E.truncate(prod.order), "G_E", notes)
    gF = _growth(G_F.truncate(prod.order), "G_F", notes)
    gP = _growth(prod, "product", notes)
    predicted = gE + gF
    rel = abs(gP - predicted) / predicted if predicted else abs(gP)
    additive = rel <= tolerance
    if not additive and gP < predicted:
        notes.append(
            "product grows slower than the sum: the product series is not recurrent at its radius, "
            "so additivity is not expected"
        )
    return AdditivityReport(gE, gF, gP, predicted, rel, tolerance, additive, notes, prod)
