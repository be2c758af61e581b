"""Signed Barnes multiple zeta values with complex periods.

    zeta_N(s, w | a; sigma) = sum_{n >= 0} prod(sigma_j^n_j) / (w + n.a)^s

Two independent routes are provided.  The integral route goes through

    Gamma(s) zeta_N = int_0^inf u^(s-1) e^(-w u) prod (1 - sigma_j e^(-a_j u))^-1 du

and is the primary one.  The lattice route first merges periods that are
positive integer multiples of a common direction; the multiplicity of each
merged index is a quasi-polynomial, so the innermost direction is summed in
closed form with Hurwitz zeta values.  With at most two directions left the
outer index is summed by ``mpmath.nsum``; otherwise a plain truncated lattice
sum is used, subject to a term budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath
from mpmath import mp, mpf

from .closedform import ClosedForm, berndt_closed_form
from .elliptic_core import DEFAULT_PREC, GUARD_BITS, working
from .errors import DomainError, SlowConvergence
from .quadrature import IntegrandSpec, integrate

DEFAULT_BUDGET = 2_000_000

C4 = (complex(2, 2), complex(2, -2), complex(1, 1), complex(1, -1))
SIGMA4 = (1, 1, -1, -1)


@dataclass(frozen=True)
class BarnesSpec:
    s: int
    w: complex
    periods: tuple
    signs: tuple

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(complex(a) for a in self.periods))
        object.__setattr__(self, "signs", tuple(int(v) for v in self.signs))
        if len(self.periods) != len(self.signs):
            raise DomainError("periods and signs differ in length")
        if any(v not in (1, -1) for v in self.signs):
            raise DomainError("signs must be +1 or -1")
        if complex(self.w).real <= 0:
            raise DomainError("Re(w) must be positive")
        if any(a.real <= 0 for a in self.periods):
            raise DomainError("every period needs a positive real part")


def berndt_spec(m: int) -> BarnesSpec:
    """The spec (4m, 3, c4, sigma4) tied to the m-th Berndt integral."""
    return BarnesSpec(4 * m, 3, C4, SIGMA4)


# -- integral route ------------------------------------------------------------


def barnes_integral(spec: BarnesSpec, prec: int = DEFAULT_PREC):
    sinh_p = [a for a, sg in zip(spec.periods, spec.signs) if sg == 1]
    cosh_p = [a for a, sg in zip(spec.periods, spec.signs) if sg == -1]
    with working(prec):
        wp = prec + GUARD_BITS
        val = integrate(IntegrandSpec("exp_kernel", spec.s, spec.w, tuple(sinh_p), tuple(cosh_p)), wp)
        return val / factorial(spec.s - 1)


# -- lattice route --------------------------------------------------------------


@dataclass(frozen=True)
class _Direction:
    base: complex
    period: int  # weights are a quasi-polynomial in the index with this period
    polys: tuple  # per residue class r: coefficients c_e of sum_e c_e j^e


def _int_ratio(a: complex, b: complex) -> int:
    """k if a = k b for a positive integer k, else 0."""
    ratio = a / b
    k = round(ratio.real)
    return k if k >= 1 and abs(ratio - k) < 1e-12 else 0


def _group_periods(periods, signs):
    """Split periods into groups of positive integer multiples of a base."""
    groups: list[tuple[complex, list[tuple[int, int]]]] = []
    for a, sg in zip(periods, signs):
        for idx, (base, members) in enumerate(groups):
            k = _int_ratio(a, base)
            if k:
                members.append((k, sg))
                break
            k = _int_ratio(base, a)
            if k:
                groups[idx] = (a, [(mult * k, s2) for mult, s2 in members] + [(1, sg)])
                break
        else:
            groups.append((a, [(1, sg)]))
    return groups


def _direction_weights(members) -> tuple[int, tuple]:
    """Quasi-polynomial for the coefficients of prod 1/(1 - sigma t^k)."""
    period = 1
    for k, sg in members:
        period = math.lcm(period, k * (1 if sg == 1 else 2))
    degree = len(members) - 1
    n_terms = period * (degree + 1)
    coeffs = [Fraction(0)] * n_terms
    coeffs[0] = Fraction(1)
    for k, sg in members:
        # multiply by 1/(1 - sg t^k): c[n] += sg * c[n-k]
        for n in range(k, n_terms):
            coeffs[n] += sg * coeffs[n - k]
    polys = []
    for r in range(period):
        xs = list(range(degree + 1))
        ys = [coeffs[r + period * j] for j in xs]
        polys.append(tuple(_interpolate(xs, ys)))
    return period, tuple(polys)


def _interpolate(xs, ys) -> list[Fraction]:
    # Newton-free Lagrange in monomial basis; tiny sizes only.
    n = len(xs)
    out = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for e in range(len(basis) - 1):
                basis[e] -= xs[j] * basis[e + 1]
            denom *= xs[i] - xs[j]
        for e, c in enumerate(basis):
            out[e] += ys[i] * c / denom
    return out


def _directions(spec: BarnesSpec) -> list[_Direction]:
    out = []
    for base, members in _group_periods(spec.periods, spec.signs):
        period, polys = _direction_weights(members)
        out.append(_Direction(base, period, polys))
    return out


def _shifted_poly(coeffs, shift):
    # sum_e c_e j^e rewritten as sum_e d_e (j + shift)^e
    n = len(coeffs)
    d = [mpf(0)] * n
    for e, c in enumerate(coeffs):
        if c == 0:
            continue
        # j^e = ((j+shift) - shift)^e
        for k in range(e + 1):
            d[k] += mpf(c.numerator) / c.denominator * mpmath.binomial(e, k) * (-shift) ** (e - k)
    return d


def _hurwitz_direction(d: _Direction, offset, s: int):
    """sum_{a >= 0} weight(a) / (offset + a * base)^s, in closed form."""
    base = mpmath.mpc(d.base)
    total = mpmath.mpc(0)
    step = base * d.period
    for r, coeffs in enumerate(d.polys):
        if all(c == 0 for c in coeffs):
            continue
        alpha = (offset + r * base) / step
        # (offset + (r + P j) base) = step * (j + alpha); integer s, no branch issue
        shifted = _shifted_poly(coeffs, alpha)
        part = mpmath.mpc(0)
        for e, c in enumerate(shifted):
            if c != 0:
                part += c * mpmath.zeta(s - e, alpha)
        total += part * step ** (-s)
    return total


def _weight(d: _Direction, a: int) -> Fraction:
    j, r = divmod(a, d.period)
    return sum((c * j ** e for e, c in enumerate(d.polys[r])), Fraction(0))


def barnes_lattice(spec: BarnesSpec, prec: int = DEFAULT_PREC, budget: int = DEFAULT_BUDGET):
    """Lattice value; needs s > N for absolute convergence."""
    n = len(spec.periods)
    if spec.s <= n:
        raise DomainError("lattice sum needs s > number of periods")
    dirs = _directions(spec)
    with working(prec):
        w = mpmath.mpc(spec.w)
        s = spec.s
        for d in dirs:
            for coeffs in d.polys:
                if len(coeffs) > s - 1:
                    raise DomainError("direction multiplicity too high for a convergent Hurwitz sum")
        if len(dirs) == 1:
            return _hurwitz_direction(dirs[0], w, s)
        if len(dirs) == 2:
            outer, inner = dirs
            base = mpmath.mpc(outer.base)
            total = mpmath.mpc(0)
            for r in range(outer.period):
                def term(j, r=r):
                    j = int(j)
                    a = r + outer.period * j
                    wt = _weight(outer, a)
                    if wt == 0:
                        return mpmath.mpc(0)
                    return mpf(wt.numerator) / wt.denominator * _hurwitz_direction(inner, w + a * base, s)

                total += mpmath.nsum(term, [0, mpmath.inf], method="richardson")
            return total
        return _brute_lattice(spec, prec, budget)


def _brute_lattice(spec: BarnesSpec, prec: int, budget: int):
    # tail of sum over |n|_inf > M is bounded by comparison with int r^(N-1-s)
    n = len(spec.periods)
    s = spec.s
    min_re = min(a.real for a in spec.periods)
    bits = prec + 4
    # count of points on shell r ~ N r^(N-1); |term| <= (min_re r)^-s
    log_m = (bits * math.log(2) + math.log(n) - s * math.log(min_re) - math.log(s - n)) / (s - n)
    m_max = int(math.ceil(math.exp(log_m)))
    if (m_max + 1) ** n > budget:
        raise SlowConvergence(f"lattice needs about {(m_max + 1) ** n} terms")
    w = mpmath.mpc(spec.w)
    periods = [mpmath.mpc(a) for a in spec.periods]
    total = mpmath.mpc(0)

    def rec(idx, acc, sign):
        nonlocal total
        if idx == n:
            total += sign * acc ** (-s)
            return
        for k in range(m_max + 1):
            rec(idx + 1, acc + k * periods[idx], sign * (spec.signs[idx] ** k))

    rec(0, w, 1)
    return total


# -- closed form -----------------------------------------------------------------


def zeta4_closed_form(m: int) -> ClosedForm:
    """zeta_4(4m, 3 | c4; sigma4) = berndt_closed_form(m) / (4 (4m-1)!)."""
    if m < 1:
        raise DomainError("m must be positive")
    return berndt_closed_form(m).scale(Fraction(1, 4 * factorial(4 * m - 1)))


def prefactor_ratio(m: int, prec: int = DEFAULT_PREC):
    """Berndt integral / (Gamma(4m) zeta_4) computed numerically; expected 4."""
    from .quadrature import berndt_integral

    with working(prec):
        integral = berndt_integral(4 * m - 1, prec)
        zeta = barnes_integral(berndt_spec(m), prec)
        return integral / (factorial(4 * m - 1) * zeta)
