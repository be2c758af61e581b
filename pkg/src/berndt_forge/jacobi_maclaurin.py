"""Exact Maclaurin coefficient polynomials of Jacobi elliptic functions.

The base series of sn, cn, dn are generated by integrating

    sn' = cn dn,   cn' = -sn dn,   dn' = -x sn cn

term by term, with every coefficient a :class:`RatPoly` in ``x = k^2``.
The derived families are

* ``S_2n``:  cd(u) = sum S_2n(x) (-1)^n u^2n / (2n)!
* ``A_2n``:  nd(u) = sum A_2n(x) (-1)^n u^2n / (2n)!
* ``P_n``:   sd(u) = sum P_n(x) u^n / n!            (n odd)
* ``q_n``:   sn(u)^2 = sum q_n(x) u^n / n!           (n even)
* ``R_(p-1)(x)``, obtained from ``q_(p-1)`` by a Moebius substitution.

The P and q normalizations are not fixed by the Jacobi functions alone; they
are pinned by matching the hyperbolic series identities they feed, see
:func:`calibrate_P` and :func:`calibrate_Q`.  The frozen results live in
``P_NORMALIZATION`` and ``Q_NORMALIZATION``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

from .errors import CalibrationFailure, DomainError, IntegralityViolation
from .exactalg import PolySeries, RatPoly, poly_compose_moebius


@dataclass(frozen=True)
class Normalization:
    """Scale rule ``sign * (n!)^factorial_power * (-1)^(n // 2 if alternating)``."""

    sign: int
    factorial_power: int
    alternating: bool

    def factor(self, n: int) -> Fraction:
        f = Fraction(factorial(n)) ** self.factorial_power * self.sign
        if self.alternating and (n // 2) % 2:
            f = -f
        return f


# Frozen outcome of calibrate_P / calibrate_Q (covered by golden tests).
P_NORMALIZATION = Normalization(sign=1, factorial_power=1, alternating=False)
Q_NORMALIZATION = Normalization(sign=1, factorial_power=1, alternating=False)
# Power of (y z / pi) on the right side of the sinh-series identity for X_{p,1}.
RUI_ONE_Z_POWER = "p+1"


@dataclass(frozen=True)
class CoefficientTable:
    family: str
    entries: dict[int, RatPoly]
    max_index: int
    normalization: Normalization | None = field(default=None)

    def __getitem__(self, n: int) -> RatPoly:
        return self.entries[n]

    def to_json(self) -> str:
        return json.dumps(table_to_dict(self), indent=2)


def table_to_dict(table: CoefficientTable) -> dict:
    return {
        "family": table.family,
        "max_index": table.max_index,
        "entries": [
            {"index": n, "coefficients": [str(c) for c in poly.coeffs]}
            for n, poly in sorted(table.entries.items())
        ],
    }


def table_from_dict(data: dict) -> CoefficientTable:
    entries = {int(e["index"]): RatPoly(Fraction(c) for c in e["coefficients"]) for e in data["entries"]}
    return CoefficientTable(family=data["family"], entries=entries, max_index=int(data["max_index"]))


@lru_cache(maxsize=8)
def _base_coefficients(order: int) -> tuple[tuple[RatPoly, ...], ...]:
    sn = [RatPoly()] * order
    cn = [RatPoly()] * order
    dn = [RatPoly()] * order
    cn[0] = dn[0] = RatPoly([1])
    minus_x = RatPoly([0, -1])

    def conv(a, b, k):
        acc = RatPoly()
        for i in range(k + 1):
            if not a[i].is_zero() and not b[k - i].is_zero():
                acc = acc + a[i] * b[k - i]
        return acc

    for k in range(order - 1):
        scale = Fraction(1, k + 1)
        sn[k + 1] = conv(cn, dn, k) * scale
        cn[k + 1] = -conv(sn, dn, k) * scale
        dn[k + 1] = minus_x * conv(sn, cn, k) * scale
    return tuple(sn), tuple(cn), tuple(dn)


def jacobi_base_series(order: int) -> tuple[PolySeries, PolySeries, PolySeries]:
    """Truncated (sn, cn, dn) series; coefficients of u^0 .. u^(order-1)."""
    if order < 2:
        raise DomainError("order must be at least 2")
    sn, cn, dn = _base_coefficients(order)
    return PolySeries(sn, order), PolySeries(cn, order), PolySeries(dn, order)


def _derived_series(name: str, order: int) -> PolySeries:
    sn, cn, dn = jacobi_base_series(order)
    if name == "cd":
        return cn / dn
    if name == "nd":
        return PolySeries([RatPoly([1])], order) / dn
    if name == "sd":
        return sn / dn
    if name == "sn2":
        return sn * sn
    raise DomainError(name)


@lru_cache(maxsize=32)
def _even_table(name: str, max_n: int) -> dict[int, RatPoly]:
    series = _derived_series(name, max_n + 2)
    out = {}
    for n in range(0, max_n + 1, 2):
        sign = -1 if (n // 2) % 2 else 1
        out[n] = series[n] * (sign * factorial(n))
    return out


def _integral_table(family: str, name: str, max_n: int) -> CoefficientTable:
    if max_n < 0:
        raise DomainError("max_n must be nonnegative")
    entries = _even_table(name, max_n)
    for n, poly in entries.items():
        if not poly.is_integral():
            raise IntegralityViolation(f"{family}_{n} = {poly} is not in Z[x]")
    return CoefficientTable(family, dict(entries), max_n)


def table_S(max_n: int) -> CoefficientTable:
    """S_0, S_2, ..., up to index ``max_n``; integrality is enforced."""
    return _integral_table("S", "cd", max_n)


def table_A(max_n: int) -> CoefficientTable:
    """A_0, A_2, ..., up to index ``max_n``; integrality is enforced."""
    return _integral_table("A", "nd", max_n)


def _raw_family(name: str, max_n: int, parity: int) -> dict[int, RatPoly]:
    series = _derived_series(name, max_n + 2)
    start = 1 if parity else 2
    return {n: series[n] for n in range(start, max_n + 1, 2)}


@lru_cache(maxsize=32)
def _normalized(name: str, max_n: int, parity: int, norm: Normalization) -> dict[int, RatPoly]:
    raw = _raw_family(name, max_n, parity)
    return {n: poly * norm.factor(n) for n, poly in raw.items()}


def table_P(max_n: int, normalization: Normalization = P_NORMALIZATION) -> CoefficientTable:
    """Odd-index sd coefficients P_1, P_3, ..., up to ``max_n``."""
    if max_n < 1:
        raise DomainError("table_P needs max_n >= 1")
    entries = _normalized("sd", max_n, 1, normalization)
    return CoefficientTable("P", dict(entries), max_n, normalization)


def table_Q(max_n: int, normalization: Normalization = Q_NORMALIZATION) -> CoefficientTable:
    """Even-index sn^2 coefficients q_2, q_4, ..., up to ``max_n``."""
    if max_n < 2:
        raise DomainError("table_Q needs max_n >= 2")
    entries = _normalized("sn2", max_n, 0, normalization)
    return CoefficientTable("Q", dict(entries), max_n, normalization)


def table_R(p: int, normalization: Normalization = Q_NORMALIZATION) -> RatPoly:
    """R_(p-1)(x) with ``R_(p-1)(1-x) = (-x)^((p-3)/2) q_(p-1)((1-x)/(-x)) / (p-1)!``.

    The substitution yields ``R_(p-1)(1-x)``; the returned polynomial is
    reflected back so that it is ``R_(p-1)`` as a function of its argument.
    """
    if p < 3 or p % 2 == 0:
        raise DomainError(f"p must be odd and >= 3, got {p}")
    q = table_Q(p - 1, normalization)[p - 1]
    return poly_compose_moebius(q, p).reflect()


def table_R_family(max_p: int) -> CoefficientTable:
    entries = {p - 1: table_R(p) for p in range(3, max_p + 1, 2)}
    return CoefficientTable("R", entries, max_p - 1, Q_NORMALIZATION)


def sd_degree_zero_at_half(m: int) -> tuple[Fraction, Fraction]:
    """(P_{4m-1}(1/2), P'_{4m-3}(1/2)), both of which vanish."""
    tab = table_P(4 * m - 1)
    half = Fraction(1, 2)
    return tab[4 * m - 1](half), tab[4 * m - 3].diff()(half)


# -- calibration --------------------------------------------------------------

CALIBRATION_DPS = 50
CALIBRATION_MATCH_DIGITS = 40

_CANDIDATES = [
    Normalization(sign, power, alt)
    for sign, power, alt in product((1, -1), (1, 0, -1), (False, True))
]


def _close(a, b, digits: int) -> bool:
    from mpmath import mpf

    scale = max(abs(a), abs(b), mpf(1))
    return abs(a - b) <= mpf(10) ** (-digits) * scale


def calibrate_P(points=((3, "pi"), (3, "2"), (5, "pi"))) -> Normalization:
    """Pick the sd normalization under which the cosh-series identity

        X'_{p,1}(y) = -(-1)^((p-1)/2) z^(p+1) sqrt(x(1-x)) P_p(x) / 2

    holds at every calibration point.  Exactly one candidate must survive.
    """
    import mpmath
    from mpmath import mp

    from .elliptic_core import modular_point_from_y
    from .hyperseries import SeriesSpec, eval_series

    prec = int(CALIBRATION_DPS * 3.33) + 16
    survivors = list(_CANDIDATES)
    with mp.workprec(prec):
        for p, y_text in points:
            y = mp.pi if y_text == "pi" else mpmath.mpf(y_text)
            mpnt = modular_point_from_y(y, prec)
            lhs = eval_series(SeriesSpec("Xprime", p, 1, y), prec)
            raw = _raw_family("sd", p, 1)[p]
            base = -(-1) ** ((p - 1) // 2) * mpnt.z ** (p + 1) * mpmath.sqrt(mpnt.x * (1 - mpnt.x)) / 2
            survivors = [
                c for c in survivors
                if _close(lhs, base * (raw * c.factor(p))(mpnt.x), CALIBRATION_MATCH_DIGITS)
            ]
    survivors = _prefer_simplest(survivors, lambda c: c)
    if len(survivors) != 1:
        raise CalibrationFailure(f"P normalization ambiguous or impossible: {survivors}")
    return survivors[0]


def calibrate_Q(points=((3, "pi"), (5, "2"), (7, "2"))) -> tuple[Normalization, str]:
    """Pick the sn^2 normalization and the power of ``y z / pi`` in

        X_{p,1}(pi^2/y) = -((p-1)!/2^(p+1)) (y z/pi)^e x (1-x) R_{p-1}(1-x)

    where the left side is summed directly.  Returns (normalization, e-rule).
    """
    import mpmath
    from mpmath import mp

    from .elliptic_core import modular_point_from_y
    from .hyperseries import SeriesSpec, eval_series

    prec = int(CALIBRATION_DPS * 3.33) + 16
    rules = {"2": lambda p: 2, "p+1": lambda p: p + 1}
    survivors = [(c, r) for c in _CANDIDATES for r in rules]
    with mp.workprec(prec):
        for p, y_text in points:
            y = mp.pi if y_text == "pi" else mpmath.mpf(y_text)
            mpnt = modular_point_from_y(y, prec)
            lhs = eval_series(SeriesSpec("X", p, 1, mp.pi ** 2 / y), prec)
            w = y * mpnt.z / mp.pi
            keep = []
            for c, r in survivors:
                r_poly = table_R(p, c)
                rhs = -mpmath.mpf(factorial(p - 1)) / 2 ** (p + 1) * w ** rules[r](p)
                rhs *= mpnt.x * (1 - mpnt.x) * r_poly(1 - mpnt.x)
                if _close(lhs, rhs, CALIBRATION_MATCH_DIGITS):
                    keep.append((c, r))
            survivors = keep
    survivors = _prefer_simplest(survivors, lambda cr: cr[0])
    if len(survivors) != 1:
        raise CalibrationFailure(f"Q normalization ambiguous or impossible: {survivors}")
    return survivors[0]


def _prefer_simplest(survivors, key):
    # An alternating sign is only adopted when no non-alternating rule fits.
    plain = [s for s in survivors if not key(s).alternating]
    return plain if plain else survivors
