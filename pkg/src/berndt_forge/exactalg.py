"""Exact arithmetic on rational polynomials and truncated power series.

Everything here works over :class:`fractions.Fraction`.  A :class:`RatPoly`
is a dense univariate polynomial in the modulus parameter ``x``; a
:class:`PolySeries` is a truncated power series in ``u`` whose coefficients
are ``RatPoly`` values.  Both types are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .errors import DivisorNotUnit, DomainError, NonPolynomialResult

Rational = Fraction


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class RatPoly:
    """Dense polynomial with exact rational coefficients, lowest degree first."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_as_fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def constant(cls, value) -> "RatPoly":
        return cls([value])

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree of the polynomial; ``-1`` for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._c)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == RatPoly([other])._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"RatPoly({[str(c) for c in self._c]})"

    def __str__(self) -> str:
        return self.to_text()

    def __add__(self, other) -> "RatPoly":
        other = _coerce(other)
        n = max(len(self._c), len(other._c))
        return RatPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self._c)

    def __sub__(self, other) -> "RatPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RatPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            return RatPoly(c * other for c in self._c)
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatPoly":
        if n < 0:
            raise DomainError("negative powers are not polynomials")
        result = RatPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, t):
        """Horner evaluation; exact for rationals, also accepts mpmath numbers."""
        if isinstance(t, int):
            t = Fraction(t)
        acc = 0 * t if not isinstance(t, Fraction) else Fraction(0)
        for c in reversed(self._c):
            acc = acc * t + (c if isinstance(t, Fraction) else _to_number(c, t))
        return acc

    def diff(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self._c) if k > 0)

    def compose(self, inner: "RatPoly") -> "RatPoly":
        """Return ``self(inner(x))``."""
        acc = RatPoly()
        for c in reversed(self._c):
            acc = acc * inner + RatPoly([c])
        return acc

    def reflect(self) -> "RatPoly":
        """Return ``self(1 - x)``."""
        return self.compose(RatPoly([1, -1]))

    def to_text(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self._c):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_latex(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        out = ""
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if c == 0:
                continue
            mag = abs(c)
            if mag.denominator != 1:
                num = rf"\frac{{{mag.numerator}}}{{{mag.denominator}}}"
            else:
                num = str(mag.numerator)
            if k == 0:
                body = num
            else:
                mono = var if k == 1 else f"{var}^{{{k}}}"
                body = mono if mag == 1 else num + mono
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out


def _coerce(value) -> RatPoly:
    if isinstance(value, RatPoly):
        return value
    return RatPoly([_as_fraction(value)])


def _to_number(c: Fraction, like):
    # Convert an exact coefficient into the numeric type of ``like`` (mpf/mpc).
    ctx = getattr(like, "context", None)
    if ctx is not None:
        return ctx.mpf(c.numerator) / c.denominator
    return c.numerator / c.denominator


def poly_arith(a: RatPoly, b: RatPoly, kind: str) -> RatPoly:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise DomainError(f"unknown polynomial operation {kind!r}")


def poly_diff(a: RatPoly) -> RatPoly:
    return a.diff()


def poly_eval(a: RatPoly, t) -> Fraction:
    return a(_as_fraction(t))


def poly_compose_moebius(a: RatPoly, p: int) -> RatPoly:
    """Compute ``(-x)^((p-3)/2) * a((1-x)/(-x)) / (p-1)!``.

    Each monomial ``a_k t^k`` becomes ``a_k (1-x)^k (-x)^(h-k)`` with
    ``h = (p-3)/2``; a nonzero ``a_k`` with ``k > h`` would leave a power of
    ``x`` in the denominator, which is reported as :class:`NonPolynomialResult`.
    """
    if p < 3 or p % 2 == 0:
        raise DomainError(f"p must be odd and >= 3, got {p}")
    h = (p - 3) // 2
    one_minus_x = RatPoly([1, -1])
    minus_x = RatPoly([0, -1])
    acc = RatPoly()
    for k, c in enumerate(a.coeffs):
        if c == 0:
            continue
        if k > h:
            raise NonPolynomialResult(
                f"coefficient of t^{k} survives with denominator x^{k - h}"
            )
        acc = acc + (one_minus_x ** k) * (minus_x ** (h - k)) * c
    return acc * Fraction(1, factorial(p - 1))


class PolySeries:
    """Truncated power series in ``u`` with :class:`RatPoly` coefficients.

    Only the coefficients of ``u^0 .. u^(order-1)`` are known; everything
    from ``u^order`` on is unknown rather than zero.
    """

    __slots__ = ("_t", "_order")

    def __init__(self, terms: Sequence, order: int):
        if order < 1:
            raise DomainError("truncation order must be positive")
        terms = [_coerce(t) for t in list(terms)[:order]]
        terms += [RatPoly()] * (order - len(terms))
        self._t = tuple(terms)
        self._order = order

    @property
    def order(self) -> int:
        return self._order

    @property
    def terms(self) -> tuple[RatPoly, ...]:
        return self._t

    def __getitem__(self, k: int) -> RatPoly:
        if k >= self._order:
            raise IndexError(f"u^{k} is beyond truncation order {self._order}")
        return self._t[k] if k >= 0 else RatPoly()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolySeries):
            return NotImplemented
        return self._order == other._order and self._t == other._t

    def __repr__(self) -> str:
        return f"PolySeries(order={self._order}, terms={list(map(str, self._t))})"

    def __add__(self, other: "PolySeries") -> "PolySeries":
        n = min(self._order, other._order)
        return PolySeries([self._t[k] + other._t[k] for k in range(n)], n)

    def __neg__(self) -> "PolySeries":
        return PolySeries([-t for t in self._t], self._order)

    def __sub__(self, other: "PolySeries") -> "PolySeries":
        return self + (-other)

    def __mul__(self, other: "PolySeries") -> "PolySeries":
        n = min(self._order, other._order)
        out = []
        for k in range(n):
            acc = RatPoly()
            for i in range(k + 1):
                a, b = self._t[i], other._t[k - i]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return PolySeries(out, n)

    def __truediv__(self, other: "PolySeries") -> "PolySeries":
        lead = other._t[0]
        if lead.degree != 0:
            raise DivisorNotUnit("constant term of the divisor is not a nonzero constant")
        inv = 1 / lead[0]
        n = min(self._order, other._order)
        out: list[RatPoly] = []
        for k in range(n):
            acc = self._t[k]
            for j in range(1, k + 1):
                b = other._t[j]
                if not b.is_zero() and not out[k - j].is_zero():
                    acc = acc - b * out[k - j]
            out.append(acc * inv)
        return PolySeries(out, n)

    def truncate(self, order: int) -> "PolySeries":
        if order > self._order:
            raise DomainError("cannot extend a truncated series")
        return PolySeries(self._t[:order], order)


def series_arith(a: PolySeries, b: PolySeries, kind: str) -> PolySeries:
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise DomainError(f"unknown series operation {kind!r}")
