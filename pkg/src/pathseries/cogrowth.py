"""Numeric maps between cogrowth and spectral radius on regular graphs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .enumeration import PathCensus
from .exceptions import DomainError, EstimationError
from .series import PowerSeries, ps_compose, ps_reciprocal

__all__ = [
    "BRANCH_BAND",
    "CogrowthReport",
    "grigorchuk_nu",
    "phi",
    "phi_max",
    "quasi_free_extended",
    "psl2_phi",
    "psl2_nu",
    "psl2_domain",
    "estimate_cogrowth",
]

BRANCH_BAND = 1e-9


@dataclass
class CogrowthReport:
    alpha: float
    nu: float
    d: int
    branch: str  # "supercritical" or "subcritical"
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "nu": self.nu,
            "d": self.d,
            "branch": self.branch,
            "circuit_growth": self.d * self.nu,
            "notes": list(self.notes),
        }


def _subcritical(alpha, d: int, notes: list) -> bool:
    if isinstance(alpha, Rational):
        return Fraction(alpha) ** 2 <= d - 1
    crit = math.sqrt(d - 1)
    if abs(alpha - crit) <= BRANCH_BAND:
        notes.append(f"alpha within {BRANCH_BAND:g} of the branch point; treated as subcritical")
        return True
    return alpha < crit


def grigorchuk_nu(alpha, d: int) -> CogrowthReport:
    """Spectral radius of the simple random walk from the cogrowth ``alpha``.

    Below ``sqrt(d-1)`` the value is pinned at the tree's ``2 sqrt(d-1)/d``;
    above it, ``nu = (alpha + (d-1)/alpha) / d``.
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float, Fraction)):
        raise DomainError(f"alpha must be a real number, got {alpha!r}")
    if isinstance(alpha, float) and not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    if alpha < 0 or alpha > d - 1:
        raise DomainError(f"alpha must lie in [0, {d - 1}], got {alpha!r}")
    notes: list = []
    if _subcritical(alpha, d, notes):
        return CogrowthReport(float(alpha), 2 * math.sqrt(d - 1) / d, d, "subcritical", notes)
    a = float(alpha)
    return CogrowthReport(a, (a + (d - 1) / a) / d, d, "supercritical", notes)


def phi(t: float, d: int) -> float:
    """``t / (1 + (d-1) t^2)``; increasing on ``[0, 1/sqrt(d-1)]``."""
    if t < 0:
        raise DomainError(f"phi needs t >= 0, got {t!r}")
    return t / (1 + (d - 1) * t * t)


def phi_max(d: int) -> tuple[float, float]:
    """Location and value of the maximum of :func:`phi`."""
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d!r}")
    r = math.sqrt(d - 1)
    return 1 / r, 1 / (2 * r)


def quasi_free_extended(G: PowerSeries, s: int, tcount: int, N: int | None = None) -> PowerSeries:
    """Proper-circuit series from the circuit series over ``s`` paired and ``tcount`` trivial generators.

    ``F = (1 - t^2) G(t/Q) / Q`` with ``Q = 1 + tcount t + (s-1) t^2``.
    """
    if s < 1 or tcount < 0:
        raise DomainError(f"need s >= 1 and tcount >= 0, got s={s}, tcount={tcount}")
    N = G.order if N is None else N
    G = G.truncate(N)
    inv_q = ps_reciprocal(PowerSeries([1, tcount, s - 1], N))
    sub = ps_compose(G, PowerSeries.t(N) * inv_q)
    return PowerSeries([1, 0, -1], N) * sub * inv_q


def psl2_phi(t: float) -> float:
    """Growth-transfer function for PSL2(Z) with generators ``a, b, b^-1``."""
    if t < 0:
        raise DomainError(f"psl2_phi needs t >= 0, got {t!r}")
    t2 = t * t
    return (t * math.sqrt(4 + 13 * t2 + 8 * t2 * t2) - t2) / (2 * (1 + t2) * (1 + 2 * t2))


def psl2_domain() -> tuple[float, float]:
    """Cogrowth interval on which :func:`psl2_nu` applies: ``[sqrt(rho), rho]`` with ``rho = sqrt(2)``."""
    rho = math.sqrt(2)
    return math.sqrt(rho), rho


def psl2_nu(alpha: float) -> float:
    """Circuit growth ``1/psl2_phi(1/alpha)`` in closed form."""
    lo, hi = psl2_domain()
    if not (lo - 1e-12 <= alpha <= hi + 1e-12):
        raise DomainError(f"alpha={alpha!r} outside the valid range [{lo!r}, {hi!r}]")
    a2 = alpha * alpha
    return 0.5 * math.sqrt(8 / a2 + 13 + 4 * a2) + 0.5


def estimate_cogrowth(census: PathCensus, min_len: int = 12) -> float:
    """Growth rate of proper circuits from the ``m = 0`` row of a census.

    Fits ``log f_n = n log(alpha) + c`` over the later half of the nonzero
    terms, which removes the constant that slows a plain root test.  When
    only even (or every k-th) lengths occur, the fit runs over that support.
    """
    if census.birth != census.death:
        raise EstimationError("cogrowth needs a circuit census (birth == death)")
    if census.max_len < min_len:
        raise EstimationError(f"census reaches length {census.max_len}; need at least {min_len}")
    pts = [(n, census.count(0, n)) for n in range(1, census.max_len + 1) if census.count(0, n) > 0]
    if not pts:
        return 0.0
    if len(pts) == 1:
        n, c = pts[0]
        return float(c) ** (1 / n)
    tail = pts[len(pts) // 2 :] if len(pts) >= 4 else pts
    xs = [n for n, _ in tail]
    ys = [math.log(c) for _, c in tail]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    return math.exp(slope)
