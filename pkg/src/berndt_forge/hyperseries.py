"""Ramanujan-type hyperbolic series and the residual checks built from them.

Every family is an alternating sum over ``n >= 1``.  Integer-argument
families use ``t = n y``; the half-odd families use ``t = (2n-1) y / 2``.
Reciprocal hyperbolic factors are formed from ``e^(-t)`` so that large ``t``
never produces overflow or cancellation.  The truncation index comes from a
geometric majorant of the tail, not from watching terms get small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from .elliptic_core import DEFAULT_PREC, GUARD_BITS, working
from .errors import DomainError, ImaginaryResidue

# family -> (half_odd, power offset on the index, sinh power, cosh power as fn of m)
#   term = (-1)^n * idx^(p + offset) * sinh(t)^a * cosh(t)^b
_FAMILIES = {
    "G": (False, 0, lambda m: (-1, -m)),
    "X": (False, 0, lambda m: (-m, 0)),
    "B": (False, -1, lambda m: (0, -m)),
    "DB": (False, 0, lambda m: (1, -m)),
    "Gprime": (True, -1, lambda m: (-1, -m)),
    "Gbar": (True, 0, lambda m: (-m, -1)),
    "Y": (True, -1, lambda m: (-m, 0)),
    "DY": (True, 0, lambda m: (-m, 1)),
    "Xprime": (True, 0, lambda m: (0, -m)),
    "DXprime": (True, 1, lambda m: (1, -m)),
}

FAMILIES = tuple(_FAMILIES)


@dataclass(frozen=True)
class SeriesSpec:
    """Selects one series ``family_{p,m}(y)``."""

    family: str
    p: int
    m: int
    y: object

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown series family {self.family!r}")
        if self.m < 1:
            raise DomainError("m must be a positive integer")


def cutoff(power: float, rate: float, eps_log2: float, scale: float = 1.0, step: float = 1.0) -> int:
    """Smallest N with  sum_{n>N} scale * (step*n)^power * e^(-rate*n) < 2^(-eps_log2).

    For n beyond the peak of ``n^power e^(-rate n)`` consecutive terms shrink
    by at least ``r = ((N+1)/N)^power e^(-rate)``, so the tail is bounded by
    the first omitted term divided by ``1 - r``.
    """
    if rate <= 0:
        raise DomainError("series does not converge (nonpositive decay rate)")
    log_target = -eps_log2 * math.log(2)
    n = max(1, int(math.ceil(max(power, 0) / rate)) + 1)
    while True:
        m = n + 1
        r = math.exp(power * math.log1p(1 / m) - rate) if power > 0 else math.exp(-rate)
        if r < 1:
            log_term = math.log(scale) + power * math.log(step * m) - rate * m
            if log_term - math.log1p(-r) < log_target:
                return n
        n = max(n + 1, int(n * 1.25))


def _hyper_factor(t, a: int, b: int):
    """sinh(t)^a cosh(t)^b written through e = exp(-t)."""
    e = mpmath.exp(-t)
    e2 = e * e
    # sinh = (1 - e^2) / (2e), cosh = (1 + e^2) / (2e)
    return (1 - e2) ** a * (1 + e2) ** b * (2 * e) ** (-(a + b))


def eval_series(spec: SeriesSpec, prec: int = DEFAULT_PREC):
    """Value of the infinite series, truncated below 2^-(prec+10)."""
    half_odd, offset, powers = _FAMILIES[spec.family]
    a, b = powers(spec.m)
    with working(prec):
        y = mpf(spec.y)
        if y <= 0:
            raise DomainError("y must be positive")
        rate_per_t = -(a + b)
        if rate_per_t <= 0:
            raise DomainError(f"{spec.family}_{{p,{spec.m}}} diverges")
        power = spec.p + offset
        # |sinh^a cosh^b| <= 2^(-a-b) e^(-(a+b) t) / (1 - e^(-2 t_1))^|a|
        t1 = float(y) / 2 if half_odd else float(y)
        scale = 2.0 ** rate_per_t / (-math.expm1(-2 * t1)) ** max(-a, 0)
        step = 2.0 if half_odd else 1.0
        # t = n*y for integer families, (2n-1)y/2 <= n*y for half-odd ones;
        # the latter also carries an extra factor e^(+y/2) per rate unit.
        if half_odd:
            scale *= math.exp(rate_per_t * float(y) / 2)
        n_max = cutoff(max(power, 0), rate_per_t * float(y), prec + 10, scale, step)
        total = mpf(0)
        for n in range(1, n_max + 1):
            if half_odd:
                idx = 2 * n - 1
                t = idx * y / 2
            else:
                idx = n
                t = n * y
            term = mpf(idx) ** power * _hyper_factor(t, a, b)
            total += -term if n % 2 else term
        return +total


def series_value(family: str, p: int, m: int, y, prec: int = DEFAULT_PREC):
    return eval_series(SeriesSpec(family, p, m, y), prec)


# -- residue identities -------------------------------------------------------

def _alt_sum(term, rate: float, power: float, prec: int, scale: float = 1.0):
    n_max = cutoff(power, rate, prec + 10, scale)
    total = mpf(0)
    for n in range(1, n_max + 1):
        v = term(n)
        total += -v if n % 2 else v
    return total


def _csch(t):
    e = mpmath.exp(-abs(t))
    v = 2 * e / (1 - e * e)
    return v if t > 0 else -v


def _sech(t):
    e = mpmath.exp(-abs(t))
    return 2 * e / (1 + e * e)


def residue_identity_residual(which: str, a, b, theta, prec: int = DEFAULT_PREC):
    """Left side of the Z1/Z2/Z3 residue identity, which vanishes identically."""
    with working(prec):
        a, b, theta = mpf(a), mpf(b), mpf(theta)
        if a == 0 or b == 0:
            raise DomainError("a and b must be nonzero")
        pi = mp.pi
        if abs(theta) >= 2 * abs(b) * pi:
            raise DomainError("|theta| must be below 2 b pi")
        fa, fb, ft = abs(float(a)), abs(float(b)), abs(float(theta))
        r_ab = math.pi * fa / fb  # decay of the a*pi/b families per unit n
        r_ba = math.pi * fb / fa
        if which == "Z1":
            s1 = _alt_sum(
                lambda n: mpmath.sinh(n * theta / a) * _csch(b * n * pi / a) * _sech(b * n * pi / a) ** 2,
                3 * r_ba - ft / fa, 0, prec, 8.0)
            s2 = _alt_sum(lambda n: mpmath.sin(n * theta / b) * _csch(a * n * pi / b), r_ab, 0, prec, 4.0)
            s3 = _alt_sum(
                lambda n: mpmath.cos((2 * n - 1) * theta / (2 * b)) * _csch((2 * n - 1) * a * pi / (2 * b)),
                r_ab, 0, prec, 4.0)
            s4 = _alt_sum(
                lambda n: mpmath.sin((2 * n - 1) * theta / (2 * b))
                * mpmath.cosh((2 * n - 1) * a * pi / (2 * b)) * _csch((2 * n - 1) * a * pi / (2 * b)) ** 2,
                r_ab, 0, prec, 16.0)
            return b * b * pi * s1 + a * b * pi * s2 - a * theta * s3 + a * a * pi * s4 + theta * b / 2
        if which == "Z2":
            s1 = _alt_sum(
                lambda n: mpmath.cosh((2 * n - 1) * theta / (2 * a))
                * _csch((2 * n - 1) * b * pi / (2 * a)) * _sech((2 * n - 1) * b * pi / (2 * a)) ** 2,
                3 * r_ba - ft / fa, 0, prec, 8.0 * math.exp(3 * r_ba))
            s2 = _alt_sum(
                lambda n: mpmath.sin((2 * n - 1) * theta / (2 * b)) * _sech((2 * n - 1) * a * pi / (2 * b)),
                r_ab, 0, prec, 2.0 * math.exp(r_ab))
            s3 = _alt_sum(
                lambda n: mpmath.cos((2 * n - 1) * theta / (2 * b))
                * mpmath.sinh((2 * n - 1) * a * pi / (2 * b)) * _sech((2 * n - 1) * a * pi / (2 * b)) ** 2,
                r_ab, 0, prec, 4.0 * math.exp(r_ab))
            s4 = _alt_sum(lambda n: mpmath.cos(n * theta / b) * _sech(a * n * pi / b), r_ab, 0, prec, 2.0)
            return b * b * pi * s1 + a * theta * s2 + a * a * pi * s3 + a * b * pi * s4 + a * b * pi / 2
        if which == "Z3":
            s1 = _alt_sum(
                lambda n: mpmath.sinh((2 * n - 1) * theta / (2 * a))
                * _csch((2 * n - 1) * b * pi / (2 * a)) ** 2 * _sech((2 * n - 1) * b * pi / (2 * a)),
                3 * r_ba - ft / fa, 0, prec, 16.0 * math.exp(3 * r_ba))
            s2 = _alt_sum(lambda n: mpmath.cos(n * theta / b) * _sech(a * n * pi / b), r_ab, 0, prec, 2.0)
            s3 = _alt_sum(
                lambda n: mpmath.sin(n * theta / b) * mpmath.sinh(a * n * pi / b) * _sech(a * n * pi / b) ** 2,
                r_ab, 0, prec, 4.0)
            s4 = _alt_sum(
                lambda n: mpmath.sin((2 * n - 1) * theta / (2 * b)) * _sech((2 * n - 1) * a * pi / (2 * b)),
                r_ab, 0, prec, 2.0 * math.exp(r_ab))
            return b * b * pi * s1 + a * theta * s2 - a * a * pi * s3 + a * b * pi * s4 + a * theta / 2
        raise DomainError(f"unknown residue identity {which!r}")


# -- modular transformation identities ---------------------------------------

def transform_sides(which: str, p: int, y, prec: int = DEFAULT_PREC):
    """(left, right) of the js1/js2/js3 identity relating y and pi^2/y."""
    if p < 3 or p % 2 == 0:
        raise DomainError("p must be an odd integer >= 3")
    with working(prec):
        y = mpf(y)
        if y <= 0:
            raise DomainError("y must be positive")
        pi = mp.pi
        yd = pi * pi / y
        eps = -1 if ((p - 1) // 2) % 2 else 1
        wp = prec + GUARD_BITS

        def s(family, pp, m, at):
            return eval_series(SeriesSpec(family, pp, m, at), wp)

        if which == "js1":
            lhs = s("G", p, 2, y)
            rhs = eps * (
                -(pi / y) ** (p + 1) * s("X", p, 1, yd)
                + p * pi ** p / (2 ** (p - 1) * y ** (p + 1)) * s("Y", p, 1, yd)
                - pi ** (p + 2) / (2 ** p * y ** (p + 2)) * s("DY", p, 2, yd)
            )
        elif which == "js2":
            lhs = s("Gprime", p, 2, y)
            rhs = eps * (
                -(2 ** (p - 1)) * pi ** p / y ** p * s("B", p, 1, yd)
                + 2 * (p - 1) * pi ** (p - 1) / y ** p * s("Xprime", p - 2, 1, yd)
                - pi ** (p + 1) / y ** (p + 1) * s("DXprime", p - 2, 2, yd)
            )
        elif which == "js3":
            lhs = s("Gbar", p, 2, y)
            rhs = eps * (
                -(pi / y) ** (p + 1) * s("Xprime", p, 1, yd)
                - p * 2 ** p * pi ** p / y ** (p + 1) * s("B", p, 1, yd)
                + 2 ** p * pi ** (p + 2) / y ** (p + 2) * s("DB", p, 2, yd)
            )
        else:
            raise DomainError(f"unknown transformation {which!r}")
        return lhs, rhs


def transform_residual(which: str, p: int, y, prec: int = DEFAULT_PREC):
    lhs, rhs = transform_sides(which, p, y, prec)
    return lhs - rhs


# -- contour identity ---------------------------------------------------------

def contour_prefactors(p: int) -> dict[str, tuple]:
    """Exact Gaussian-rational prefactors (re, im) and pi powers of the four series.

    Keys: ``Gprime`` -> G'_{p,2}(pi), ``G`` -> G_{p,2}(pi), ``Xprime3`` ->
    X'_{p,3}(pi), ``Gbar`` -> Gbar_{p,2}(pi).  Values are ((re, im), pi_power).
    """
    from fractions import Fraction

    def gpow(base, k):
        re, im = Fraction(1), Fraction(0)
        for _ in range(k):
            re, im = re * base[0] - im * base[1], re * base[1] + im * base[0]
        return re, im

    def times_i(c, k=Fraction(1)):
        return (-c[1] * k, c[0] * k)

    one_minus_i = (Fraction(1), Fraction(-1))
    w = gpow(one_minus_i, p - 1)
    w2 = gpow(one_minus_i, p + 1)
    a = times_i(w, Fraction(p, 2 ** (p + 1)))
    b = (w2[0] / 8, w2[1] / 8)
    c = times_i(w, Fraction(-1, 2 ** (p + 1)))
    d = times_i(w, Fraction(-1, 2 ** (p + 2)))
    return {"Gprime": (a, p), "G": (b, p + 1), "Xprime3": (c, p + 1), "Gbar": (d, p + 1)}


def contour_identity_rhs(p: int, prec: int = DEFAULT_PREC):
    """Right side of the contour identity; equals twice the Berndt integral.

    Only ``p = 3 (mod 4)`` is supported, where the two integrals on the left
    coincide.  The complex assembly must come out real.
    """
    with working(prec):
        total = contour_identity_complex(p, prec)
        scale = max(abs(total), mpf(1))
        if abs(total.imag) > mpf(2) ** (-prec // 2) * scale:
            raise ImaginaryResidue(f"imaginary part {total.imag} survives")
        return total.real


def contour_identity_complex(p: int, prec: int = DEFAULT_PREC):
    """Complex assembly of the contour right side, before dropping Im."""
    if p < 3 or p % 4 != 3:
        raise DomainError("contour identity is implemented for p = 3 (mod 4) only")
    pref = contour_prefactors(p)
    with working(prec):
        pi = mp.pi
        wp = prec + GUARD_BITS
        values = {
            "Gprime": eval_series(SeriesSpec("Gprime", p, 2, pi), wp),
            "G": eval_series(SeriesSpec("G", p, 2, pi), wp),
            "Xprime3": eval_series(SeriesSpec("Xprime", p, 3, pi), wp),
            "Gbar": eval_series(SeriesSpec("Gbar", p, 2, pi), wp),
        }
        total = mpmath.mpc(0)
        for key, ((re, im), k) in pref.items():
            coef = mpmath.mpc(mpf(re.numerator) / re.denominator, mpf(im.numerator) / im.denominator)
            total += coef * pi ** k * values[key]
        return total
