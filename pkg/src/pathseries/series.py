"""Exact truncated formal power series.

Two value types live here: :class:`PowerSeries` (rational coefficients in
``t``) and :class:`BivariateSeries` (coefficients are polynomials in ``u``,
see :class:`UPoly`).  Every series carries its truncation order ``N`` and
holds exactly ``N + 1`` coefficients.  Binary operations on series of
different orders re-truncate to the smaller order and say so in
``diagnostics``.

Coefficients are Python ints or :class:`fractions.Fraction`; integral
fractions are normalised to ``int`` so integer workloads stay fast.
Floating point is used only by :func:`estimate_radius`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

from .exceptions import (
    CompositionError,
    EstimationError,
    InvariantError,
    InversionError,
    SeriesDivisionError,
    SeriesError,
    SqrtError,
)

Rational = Union[int, Fraction]

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "UPoly",
    "PowerSeries",
    "BivariateSeries",
    "ps_compose",
    "ps_reciprocal",
    "ps_sqrt",
    "ps_comp_inverse",
    "ps_borel",
    "ps_laplace",
    "ps_binomial_product",
    "ps_hadamard",
    "ps_even",
    "flip_u",
    "RadiusEstimate",
    "estimate_radius",
]


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def as_rational(x) -> Rational:
    """Coerce ``x`` to an exact rational (int or Fraction).

    Accepts ints, Fractions and strings such as ``"3/4"``.  Floats are
    rejected: nothing in the exact layer may silently round.
    """
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _norm(x)
    if isinstance(x, str):
        try:
            return _norm(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise SeriesError(f"not an exact rational: {x!r}") from exc
    if isinstance(x, _RationalABC):
        return _norm(Fraction(x.numerator, x.denominator))
    raise SeriesError(f"expected an exact rational, got {type(x).__name__} {x!r}")


def format_rational(x: Rational) -> str:
    """Render a rational as ``"p/q"`` (or ``"p"`` when integral)."""
    x = _norm(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return _norm(Fraction(a) / b)


# ---------------------------------------------------------------------------
# Polynomials in u
# ---------------------------------------------------------------------------


class UPoly:
    """Polynomial in ``u`` with exact rational coefficients (trailing zeros trimmed)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, coeffs: list) -> "UPoly":
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        return p

    @classmethod
    def const(cls, c) -> "UPoly":
        return cls((c,))

    @classmethod
    def u(cls) -> "UPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant(self) -> Rational:
        return self.coeffs[0] if self.coeffs else 0

    def __getitem__(self, i: int) -> Rational:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return _norm(acc) if not isinstance(acc, float) else acc

    def __add__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly.const(as_rational(other))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = _norm(out[i] + y)
        return UPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return UPoly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly.const(as_rational(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            if isinstance(other, (int, Fraction)):
                if other == 0:
                    return _UZERO
                return UPoly._raw([_norm(c * other) for c in self.coeffs])
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _UZERO
        if len(b) == 1:
            y = b[0]
            return UPoly._raw([_norm(x * y) for x in a])
        if len(a) == 1:
            x = a[0]
            return UPoly._raw([_norm(x * y) for y in b])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UPoly._raw([_norm(c) for c in out])

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise SeriesError("negative power of a polynomial")
        out, base = _UONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def flip(self) -> "UPoly":
        """Substitute ``u -> 1 - u``."""
        out = _UZERO
        one_minus_u = UPoly((1, -1))
        for c in reversed(self.coeffs):
            out = out * one_minus_u + c
        return out

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == ((other,) if other != 0 else ())
        return NotImplemented

    def __hash__(self):
        return hash(("UPoly", self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "UPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            s = format_rational(c)
            terms.append(s if i == 0 else f"{s}*u^{i}" if i > 1 else f"{s}*u")
        return "UPoly(" + " + ".join(terms) + ")"

    def to_json(self) -> list:
        return [format_rational(c) for c in self.coeffs]


_UZERO = UPoly(())
_UONE = UPoly((1,))


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------


def _mul_trunc(a: Sequence, b: Sequence, n: int, zero):
    """First ``n + 1`` coefficients of the product of two coefficient lists."""
    out = [zero] * (n + 1)
    # skip leading zeros of b once, then walk the triangle
    nzb = [(j, y) for j, y in enumerate(b[: n + 1]) if y != 0]
    for i, x in enumerate(a[: n + 1]):
        if x == 0:
            continue
        lim = n - i
        for j, y in nzb:
            if j > lim:
                break
            out[i + j] = out[i + j] + x * y
    return out


class _Series:
    __slots__ = ("coeffs", "order", "diagnostics")

    _zero: object = 0
    _one: object = 1

    # -- construction ---------------------------------------------------
    def _new(self, coeffs, order, diagnostics=()):
        raise NotImplementedError

    def _coerce(self, other):
        raise NotImplementedError

    # -- basic protocol --------------------------------------------------
    def __getitem__(self, n):
        if isinstance(n, slice):
            return self.coeffs[n]
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient {n} outside 0..{self.order}")
        return self.coeffs[n]

    def __len__(self):
        return self.order + 1

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if type(other) is type(self):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, self.order, self.coeffs))

    def truncate(self, order: int):
        if order > self.order:
            raise SeriesError(f"cannot extend a series of order {self.order} to {order}")
        return self._new(self.coeffs[: order + 1], order, self.diagnostics)

    def _align(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented, NotImplemented, None
        diag = self.diagnostics + other.diagnostics
        if self.order != other.order:
            n = min(self.order, other.order)
            diag = diag + (f"re-truncated from orders ({self.order}, {other.order}) to {n}",)
            return self.coeffs[: n + 1], other.coeffs[: n + 1], (n, diag, other)
        return self.coeffs, other.coeffs, (self.order, diag, other)

    def __add__(self, other):
        a, b, info = self._align(other)
        if info is None:
            return NotImplemented
        n, diag, other = info
        return self._new([x + y for x, y in zip(a, b)], n, diag, other=other, op="add")

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return self._new([-x for x in self.coeffs], self.order, self.diagnostics, other=self, op="add")

    def __sub__(self, other):
        a, b, info = self._align(other)
        if info is None:
            return NotImplemented
        n, diag, other = info
        return self._new([x - y for x, y in zip(a, b)], n, diag, other=other, op="add")

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._new([x * other for x in self.coeffs], self.order, self.diagnostics, other=self, op="add")
        a, b, info = self._align(other)
        if info is None:
            return NotImplemented
        n, diag, other = info
        return self._new(_mul_trunc(a, b, n, self._zero), n, diag, other=other, op="mul")

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise SeriesDivisionError("division of a series by zero")
            inv = Fraction(1) / other
            return self * _norm(inv)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * ps_reciprocal(other)

    def __rtruediv__(self, other):
        return self._coerce(other) * ps_reciprocal(self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ps_reciprocal(self) ** (-k)
        out = self._new([self._one] + [self._zero] * self.order, self.order, self.diagnostics)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_t(self, k: int = 1):
        """Multiply by ``t**k`` (k >= 0), keeping the order."""
        if k < 0:
            raise SeriesError("mul_t needs k >= 0; use div_t to divide by t")
        coeffs = [self._zero] * k + list(self.coeffs[: self.order + 1 - k])
        return self._new(coeffs[: self.order + 1], self.order, self.diagnostics, other=self, op="add")

    def div_t(self, k: int = 1):
        """Divide by ``t**k``; the first ``k`` coefficients must vanish.  Order drops by ``k``."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise SeriesError(f"series is not divisible by t^{k}")
        return self._new(self.coeffs[k:], self.order - k, self.diagnostics, other=self, op="add")

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None


class PowerSeries(_Series):
    """Univariate truncated power series with exact rational coefficients."""

    __slots__ = ()

    def __init__(self, coeffs: Iterable = (), order: int | None = None, diagnostics=()):
        c = [as_rational(x) for x in coeffs]
        if order is None:
            order = max(len(c) - 1, 0)
        if order < 0:
            raise SeriesError("truncation order must be >= 0")
        c = (c + [0] * (order + 1 - len(c)))[: order + 1]
        self.coeffs = tuple(c)
        self.order = order
        self.diagnostics = tuple(diagnostics)

    @classmethod
    def _make(cls, coeffs, order, diagnostics=()):
        s = object.__new__(cls)
        c = [_norm(x) for x in coeffs]
        if len(c) < order + 1:
            c += [0] * (order + 1 - len(c))
        s.coeffs = tuple(c[: order + 1])
        s.order = order
        s.diagnostics = tuple(diagnostics)
        return s

    def _new(self, coeffs, order, diagnostics=(), other=None, op=None):
        return PowerSeries._make(coeffs, order, diagnostics)

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return PowerSeries._make([other], self.order)
        return NotImplemented

    # -- constructors ------------------------------------------------------
    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls._make([1], order)

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls._make([], order)

    @classmethod
    def t(cls, order: int) -> "PowerSeries":
        return cls._make([0, 1], order)

    @classmethod
    def polynomial(cls, coeffs: Iterable, order: int) -> "PowerSeries":
        c = list(coeffs)
        if any(as_rational(x) != 0 for x in c[order + 1 :]):
            pass  # higher terms are simply truncated away
        return cls(c[: order + 1], order)

    @classmethod
    def geometric(cls, ratio, order: int) -> "PowerSeries":
        """``1 / (1 - ratio*t)``."""
        r = as_rational(ratio)
        return cls._make([r**n for n in range(order + 1)], order)

    # -- conveniences -------------------------------------------------------
    def __call__(self, x):
        """Evaluate the truncated polynomial at a number (float or exact)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        shown = ", ".join(format_rational(c) for c in self.coeffs[:10])
        more = ", ..." if self.order >= 10 else ""
        return f"PowerSeries([{shown}{more}], order={self.order})"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc: dict) -> "PowerSeries":
        try:
            return cls(doc["coeffs"], doc["order"])
        except (KeyError, TypeError) as exc:
            raise SeriesError(f"malformed series document: {exc}") from exc


class BivariateSeries(_Series):
    """Truncated series in ``t`` whose coefficients are :class:`UPoly` in ``u``.

    Invariant: ``deg_u(coeffs[n]) <= n + u_excess``.  ``u_excess`` is 0 for
    every enriched path series; a few auxiliary closed forms (a tree branch
    series whose empty circuit is weighted ``u``) need slack 1.
    """

    __slots__ = ("u_excess",)

    _zero = _UZERO
    _one = _UONE

    def __init__(self, coeffs: Iterable = (), order: int | None = None, diagnostics=(), u_excess: int = 0):
        c = []
        for x in coeffs:
            if isinstance(x, UPoly):
                c.append(x)
            elif isinstance(x, (list, tuple)):
                c.append(UPoly(x))
            else:
                c.append(UPoly.const(as_rational(x)))
        if order is None:
            order = max(len(c) - 1, 0)
        if order < 0:
            raise SeriesError("truncation order must be >= 0")
        c = (c + [_UZERO] * (order + 1 - len(c)))[: order + 1]
        self.coeffs = tuple(c)
        self.order = order
        self.diagnostics = tuple(diagnostics)
        self.u_excess = u_excess
        self._check()

    @classmethod
    def _make(cls, coeffs, order, diagnostics=(), u_excess=0):
        s = object.__new__(cls)
        c = list(coeffs)
        if len(c) < order + 1:
            c += [_UZERO] * (order + 1 - len(c))
        s.coeffs = tuple(c[: order + 1])
        s.order = order
        s.diagnostics = tuple(diagnostics)
        s.u_excess = u_excess
        s._check()
        return s

    def _check(self):
        ex = self.actual_excess()
        if ex > self.u_excess:
            raise InvariantError(
                f"deg_u exceeds t-degree by {ex} (allowed {self.u_excess})"
            )

    def actual_excess(self) -> int:
        """``max_n (deg_u(coeffs[n]) - n)`` over nonzero coefficients (very negative if none)."""
        ex = -(10**9)
        for n, p in enumerate(self.coeffs):
            if p.coeffs:
                ex = max(ex, p.degree - n)
        return ex

    def _new(self, coeffs, order, diagnostics=(), other=None, op=None):
        slack = self.u_excess
        if isinstance(other, BivariateSeries):
            slack = slack + other.u_excess if op == "mul" else max(slack, other.u_excess)
        return BivariateSeries._make(coeffs, order, diagnostics, slack)

    def _coerce(self, other):
        if isinstance(other, BivariateSeries):
            return other
        if isinstance(other, PowerSeries):
            return BivariateSeries.lift(other)
        if isinstance(other, UPoly):
            return BivariateSeries._make([other], self.order, (), max(other.degree, 0))
        if isinstance(other, (int, Fraction)):
            return BivariateSeries._make([UPoly.const(other)], self.order)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, UPoly):
            slack = self.u_excess + max(other.degree, 0)
            return BivariateSeries._make([c * other for c in self.coeffs], self.order, self.diagnostics, slack)
        return super().__mul__(other)

    def __rmul__(self, other):
        return self.__mul__(other)

    # -- constructors ------------------------------------------------------
    @classmethod
    def lift(cls, ps: PowerSeries) -> "BivariateSeries":
        """View a univariate series as constant in ``u``."""
        return cls._make([UPoly.const(c) for c in ps.coeffs], ps.order, ps.diagnostics)

    @classmethod
    def one(cls, order: int) -> "BivariateSeries":
        return cls._make([_UONE], order)

    @classmethod
    def t(cls, order: int) -> "BivariateSeries":
        return cls._make([_UZERO, _UONE], order)

    @classmethod
    def from_terms(cls, terms: dict, order: int, u_excess: int = 0) -> "BivariateSeries":
        """Build from ``{(m, n): coeff}`` meaning ``coeff * u^m t^n``."""
        rows = [[0] * (order + 1 + u_excess + 1) for _ in range(order + 1)]
        for (m, n), c in terms.items():
            if n <= order:
                if m >= len(rows[n]):
                    rows[n] += [0] * (m + 1 - len(rows[n]))
                rows[n][m] += as_rational(c)
        return cls._make([UPoly(r) for r in rows], order, (), u_excess)

    # -- conveniences -------------------------------------------------------
    def coefficient(self, m: int, n: int) -> Rational:
        return self.coeffs[n][m]

    def terms(self) -> dict:
        """Nonzero coefficients as ``{(m, n): coeff}``."""
        out = {}
        for n, p in enumerate(self.coeffs):
            for m, c in enumerate(p.coeffs):
                if c != 0:
                    out[(m, n)] = c
        return out

    def at_u(self, u0) -> PowerSeries:
        """Substitute a number for ``u``."""
        u0 = as_rational(u0)
        return PowerSeries._make([p(u0) for p in self.coeffs], self.order, self.diagnostics)

    def flip_u(self) -> "BivariateSeries":
        """Substitute ``u -> 1 - u`` (the only u-substitution the algebra needs)."""
        return BivariateSeries._make([p.flip() for p in self.coeffs], self.order, self.diagnostics, self.u_excess)

    def __repr__(self):
        return f"BivariateSeries(order={self.order}, coeffs={[p.coeffs for p in self.coeffs[:6]]}{'...' if self.order >= 6 else ''})"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [p.to_json() for p in self.coeffs]}

    @classmethod
    def from_json(cls, doc: dict) -> "BivariateSeries":
        try:
            return cls([UPoly(row) for row in doc["coeffs"]], doc["order"], u_excess=doc.get("u_excess", 0))
        except (KeyError, TypeError) as exc:
            raise SeriesError(f"malformed series document: {exc}") from exc


def flip_u(f: BivariateSeries) -> BivariateSeries:
    """``f(u, t) -> f(1 - u, t)``."""
    return f.flip_u()


# ---------------------------------------------------------------------------
# Series operations
# ---------------------------------------------------------------------------


def _is_zero_coeff(c) -> bool:
    return c == 0 if not isinstance(c, UPoly) else c.is_zero()


def _scalar_constant(c):
    """Rational constant term, or None if it depends on u."""
    if isinstance(c, UPoly):
        return c.constant() if c.is_constant() else None
    return c


def ps_compose(f, g):
    """``f(g(t))`` truncated to the common order.

    ``g`` must have zero constant term.  A univariate ``f`` may be composed
    with a bivariate ``g`` (substitution into the t-slot); ``u`` is never
    substituted here.
    """
    if not _is_zero_coeff(g.coeffs[0]):
        raise CompositionError("inner series has a nonzero constant term")
    if isinstance(g, BivariateSeries) and isinstance(f, PowerSeries):
        f = BivariateSeries.lift(f)
    if isinstance(f, BivariateSeries) and isinstance(g, PowerSeries):
        g = BivariateSeries.lift(g)
    n = min(f.order, g.order)
    diag = f.diagnostics + g.diagnostics
    if f.order != g.order:
        diag += (f"re-truncated from orders ({f.order}, {g.order}) to {n}",)
    zero = f._zero
    gc = list(g.coeffs[: n + 1])
    acc = [zero] * (n + 1)
    # Horner; since val(g) >= 1, the term f_k g^k only matters for k <= n
    for k in range(n, -1, -1):
        acc = _mul_trunc(acc, gc, n, zero)
        acc[0] = acc[0] + f.coeffs[k]
    if isinstance(f, BivariateSeries):
        return BivariateSeries._make(acc, n, diag, f.u_excess)
    return PowerSeries._make(acc, n, diag)


def ps_reciprocal(f):
    """``1 / f``; the constant term must be a nonzero rational."""
    c0 = _scalar_constant(f.coeffs[0])
    if c0 is None:
        raise SeriesDivisionError("constant term depends on u; not a unit")
    if c0 == 0:
        raise SeriesDivisionError("reciprocal of a series with zero constant term")
    if isinstance(f, BivariateSeries) and f.actual_excess() > 0:
        raise InvariantError("reciprocal needs a series with deg_u <= t-degree")
    n = f.order
    inv0 = _div(1, c0)
    a = f.coeffs
    zero = f._zero
    b = [zero] * (n + 1)
    b[0] = UPoly.const(inv0) if isinstance(f, BivariateSeries) else inv0
    nz = [(k, a[k]) for k in range(1, n + 1) if not _is_zero_coeff(a[k])]
    for m in range(1, n + 1):
        acc = zero
        for k, ak in nz:
            if k > m:
                break
            acc = acc + ak * b[m - k]
        b[m] = acc * (-inv0) if isinstance(f, BivariateSeries) else _norm(-acc * inv0)
    return f._new(b, n, f.diagnostics)


def ps_sqrt(f):
    """Principal square root (constant term 1), by Newton iteration on series."""
    c0 = _scalar_constant(f.coeffs[0])
    if c0 != 1:
        raise SqrtError("square root needs constant term exactly 1")
    n = f.order
    s = f._new([f._one], 0, ())
    prec = 1
    while prec < n + 1:
        prec = min(2 * prec, n + 1)
        fp = f.truncate(prec - 1)
        s_ext = s._new(list(s.coeffs), prec - 1, ())
        s = (s_ext + fp * ps_reciprocal(s_ext)) * Fraction(1, 2)
    out = s._new(list(s.coeffs), n, f.diagnostics)
    return out


def ps_comp_inverse(f: PowerSeries) -> PowerSeries:
    """Compositional inverse ``g`` with ``f(g(t)) = g(f(t)) = t`` (Lagrange inversion)."""
    if not isinstance(f, PowerSeries):
        raise InversionError("compositional inversion is univariate only")
    if f.order < 1 or f.coeffs[0] != 0 or f.coeffs[1] == 0:
        raise InversionError("need f(0) = 0 and f'(0) != 0")
    n = f.order
    phi = PowerSeries._make(f.coeffs[1:], n - 1)
    psi = ps_reciprocal(phi)
    out = [0, psi.coeffs[0]]
    power = psi
    for k in range(2, n + 1):
        power = power * psi
        out.append(_div(power.coeffs[k - 1], k))
    return PowerSeries._make(out, n, f.diagnostics)


def ps_borel(f: PowerSeries) -> PowerSeries:
    """Divide coefficient ``n`` by ``n!`` (ordinary -> exponential)."""
    out, fact = [], 1
    for n, c in enumerate(f.coeffs):
        if n:
            fact *= n
        out.append(_div(c, fact) if isinstance(c, int) else _norm(c / fact))
    return PowerSeries._make(out, f.order, f.diagnostics)


def ps_laplace(f: PowerSeries) -> PowerSeries:
    """Multiply coefficient ``n`` by ``n!`` (exponential -> ordinary)."""
    out, fact = [], 1
    for n, c in enumerate(f.coeffs):
        if n:
            fact *= n
        out.append(_norm(c * fact))
    return PowerSeries._make(out, f.order, f.diagnostics)


def _aligned_pair(f: PowerSeries, g: PowerSeries):
    n = min(f.order, g.order)
    diag = f.diagnostics + g.diagnostics
    if f.order != g.order:
        diag += (f"re-truncated from orders ({f.order}, {g.order}) to {n}",)
    return n, diag


def ps_binomial_product(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """``c_n = sum_k binom(n, k) a_k b_{n-k}`` (product of exponential generating functions)."""
    n, diag = _aligned_pair(f, g)
    a, b = f.coeffs, g.coeffs
    out = []
    for m in range(n + 1):
        out.append(sum(math.comb(m, k) * a[k] * b[m - k] for k in range(m + 1)))
    return PowerSeries._make(out, n, diag)


def ps_hadamard(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Coefficient-wise product."""
    n, diag = _aligned_pair(f, g)
    return PowerSeries._make([x * y for x, y in zip(f.coeffs[: n + 1], g.coeffs[: n + 1])], n, diag)


def ps_even(f: PowerSeries) -> PowerSeries:
    """``(f(t) + f(-t)) / 2``: odd coefficients zeroed."""
    return PowerSeries._make([c if n % 2 == 0 else 0 for n, c in enumerate(f.coeffs)], f.order, f.diagnostics)


# ---------------------------------------------------------------------------
# Numeric radius estimation
# ---------------------------------------------------------------------------


@dataclass
class RadiusEstimate:
    """Numeric estimate of the radius of convergence of a nonnegative series."""

    radius: float
    growth: float
    method: str
    even_growth: float | None
    odd_growth: float | None
    terms_used: int
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "growth": self.growth,
            "method": self.method,
            "even_growth": self.even_growth,
            "odd_growth": self.odd_growth,
            "terms_used": self.terms_used,
            "notes": list(self.notes),
        }


def _log(c) -> float:
    c = Fraction(c)
    return math.log(c.numerator) - math.log(c.denominator)


def _ratio_growth(points: list[tuple[int, Rational]]) -> float | None:
    """Extrapolated ratio estimate on an arithmetic subsequence ``(n, a_n)``.

    With ``r_n = a_n / a_{n-s}`` assumed to behave like ``mu^s (1 + c/n)``,
    the combination ``(n r_n - (n - s) r_{n-s}) / s`` cancels the ``1/n``
    term.
    """
    if len(points) < 3:
        return None
    s = points[-1][0] - points[-2][0]
    (n0, a0), (n1, a1), (n2, a2) = points[-3:]
    r1 = Fraction(a1) / Fraction(a0)
    r2 = Fraction(a2) / Fraction(a1)
    mu_s = (n2 * r2 - n1 * r1) / s
    if mu_s <= 0:
        mu_s = r2
    return float(mu_s) ** (1.0 / s)


def _root_growth(points: list[tuple[int, Rational]]) -> float | None:
    if not points:
        return None
    tail = points[len(points) // 2 :] or points
    return max(math.exp(_log(a) / n) for n, a in tail)


def _parity_points(coeffs, parity: int, step: int = 2):
    pts = [(n, c) for n, c in enumerate(coeffs) if n >= 1 and n % step == parity and c != 0]
    # keep the longest trailing run without gaps so ratios compare neighbours
    run = []
    for n, c in pts:
        if run and n - run[-1][0] != step:
            run = []
        run.append((n, c))
    return run


def estimate_radius(f: PowerSeries, method: str = "ratio") -> RadiusEstimate:
    """Estimate ``1 / limsup a_n^{1/n}`` for a series with nonnegative coefficients.

    ``method`` is ``"ratio"`` (extrapolated coefficient ratios) or ``"root"``
    (n-th root test).  Even- and odd-indexed subsequences are treated
    separately so bipartite circuit series (odd coefficients all zero) are
    handled; the overall growth is the larger of the two.
    """
    if method not in ("ratio", "root"):
        raise EstimationError(f"unknown method {method!r}; use 'ratio' or 'root'")
    coeffs = f.coeffs
    if any(c < 0 for c in coeffs):
        raise EstimationError("radius estimation needs nonnegative coefficients")
    nonzero = [n for n, c in enumerate(coeffs) if n >= 1 and c != 0]
    if len(nonzero) < 8:
        raise EstimationError(
            f"only {len(nonzero)} nonzero coefficients beyond the constant term; need at least 8 "
            "(raise the truncation order)"
        )
    est = _ratio_growth if method == "ratio" else _root_growth
    notes = []
    even = est(_parity_points(coeffs, 0))
    odd = est(_parity_points(coeffs, 1))
    if even is None and odd is None:
        step = 0
        for n in nonzero:
            step = math.gcd(step, n)
        sub = _parity_points(coeffs, 0, step) if step > 1 else []
        growth = est(sub) if sub else None
        if growth is None:
            growth = _root_growth([(n, coeffs[n]) for n in nonzero])
            notes.append("irregular support; fell back to the root test")
        else:
            notes.append(f"support has period {step}; used that subsequence")
    else:
        growth = max(g for g in (even, odd) if g is not None)
        if odd is None:
            notes.append("odd coefficients vanish; even subsequence used")
        if even is None:
            notes.append("even coefficients too sparse; odd subsequence used")
    radius = math.inf if growth == 0 else 1.0 / growth
    return RadiusEstimate(radius, growth, method, even, odd, len(nonzero), notes)
