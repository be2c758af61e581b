"""Composite Gauss-Legendre quadrature for Berndt-type and exponential-kernel integrals.

The half line is cut at ``X0``, chosen from an analytic tail bound, and
``[0, X0]`` is covered by unit-width panels.  Each panel uses a
Gauss-Legendre rule whose node count doubles until two successive levels
agree.  Node tables come from mpmath's Gauss-Legendre implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
from mpmath import mp, mpf
from mpmath.calculus.quadrature import GaussLegendre

from .elliptic_core import DEFAULT_PREC, GUARD_BITS, working
from .errors import DomainError, NonConvergence, SingularIntegrand

MAX_DOUBLINGS = 20
PANEL_WIDTH = 1


@dataclass(frozen=True)
class IntegrandSpec:
    """``berndt_mixed``: x^p / [(cosh 2x - cos 2x)(cosh x + cos x)].

    ``exp_kernel``: u^(s-1) e^(-w u) / prod(1 - e^(-a u)) / prod(1 + e^(-b u))
    with ``a`` running over ``sinh_periods`` and ``b`` over ``cosh_periods``.
    """

    kind: str
    p_or_s: object
    w: object = 0
    sinh_periods: tuple = field(default_factory=tuple)
    cosh_periods: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in ("berndt_mixed", "exp_kernel"):
            raise DomainError(f"unknown integrand kind {self.kind!r}")
        object.__setattr__(self, "sinh_periods", tuple(self.sinh_periods))
        object.__setattr__(self, "cosh_periods", tuple(self.cosh_periods))


@lru_cache(maxsize=64)
def _gl_nodes(level: int, prec: int):
    # mpmath level k has 3 * 2^(k-1) nodes on [-1, 1]
    with mp.workprec(prec):
        return tuple(GaussLegendre(mp).calc_nodes(level, prec))


def tail_cutoff(power: float, rate: float, log_const: float, bits: int, floor: float = 2.0) -> float:
    """X0 >= floor with  e^log_const * X0^power * e^(-rate X0) / (rate - power/X0) < 2^-bits.

    A few Newton steps on the log of the leading factor, then a safety loop
    on the exact bound.
    """
    if rate <= 0:
        raise DomainError("integrand does not decay")
    target = -bits * math.log(2)

    def log_bound(x):
        margin = rate - power / x
        if margin <= 0:
            return math.inf
        return log_const + power * math.log(x) - rate * x - math.log(margin)

    x = max(floor, 2 * power / rate + 1, (log_const - target) / rate)
    for _ in range(8):
        g = log_const + power * math.log(x) - rate * x - target
        dg = power / x - rate
        if dg >= 0:
            break
        x = max(x - g / dg, floor)
    while log_bound(x) >= target:
        x += 1
    return x


def _berndt_integrand(p):
    def f(x):
        if x == 0:
            return mpf(0)
        # cosh 2x - cos 2x = 2 (sinh^2 x + sin^2 x), free of cancellation near 0
        d1 = 2 * (mpmath.sinh(x) ** 2 + mpmath.sin(x) ** 2)
        d2 = mpmath.cosh(x) + mpmath.cos(x)
        if d1 <= 0 or d2 <= 0:
            raise SingularIntegrand(f"denominator vanishes at x = {x}")
        return x ** p / (d1 * d2)

    return f


def _exp_kernel_integrand(s, w, sinh_periods, cosh_periods):
    def f(u):
        if u == 0:
            return mpf(0) if s > 1 + len(sinh_periods) else _limit_at_zero(s, sinh_periods, cosh_periods)
        val = u ** (s - 1) * mpmath.exp(-w * u)
        for a in sinh_periods:
            den = -mpmath.expm1(-a * u)
            if den == 0:
                raise SingularIntegrand("sinh factor vanishes on the path")
            val /= den
        for b in cosh_periods:
            val /= 1 + mpmath.exp(-b * u)
        return val

    return f


def _limit_at_zero(s, sinh_periods, cosh_periods):
    if s == 1 + len(sinh_periods):
        val = mpf(1)
        for a in sinh_periods:
            val /= a
        return val / 2 ** len(cosh_periods)
    raise SingularIntegrand("kernel is not integrable at 0")


def _panel_sum(f, x0: int, level: int, prec: int, start: int = 0):
    nodes = _gl_nodes(level, prec)
    total = mpf(0)
    for k in range(start, x0):
        mid = mpf(k) + mpf(1) / 2
        acc = 0
        for t, wt in nodes:
            acc += wt * f(mid + t / 2)
        total += acc / 2
    return total


def _integrate_panels(f, x_end: float, prec: int, tol_bits: int, rough_at_zero: bool = False):
    x0 = int(math.ceil(x_end / PANEL_WIDTH))
    head = mpf(0)
    start = 0
    if rough_at_zero:
        # fractional power at 0: tanh-sinh copes with the endpoint singularity
        with mp.workprec(prec):
            head = mpmath.quad(f, [0, 1], method="tanh-sinh")
        start = 1
    prev = None
    level = 3
    for _ in range(MAX_DOUBLINGS):
        cur = head + _panel_sum(f, x0, level, prec, start)
        if prev is not None:
            scale = max(abs(cur), mpf(1))
            if abs(cur - prev) <= mpf(2) ** (-tol_bits) * scale:
                return cur
        prev = cur
        level += 1
    raise NonConvergence("Gauss-Legendre refinement did not settle")


def integrate(spec: IntegrandSpec, prec: int = DEFAULT_PREC):
    """Value of the integral over (0, inf) with error below 2^(-prec+16)."""
    wp = prec + GUARD_BITS
    with working(prec):
        if spec.kind == "berndt_mixed":
            p = mpf(spec.p_or_s)
            if p < 3:
                raise DomainError("berndt_mixed needs p >= 3")
            # denominator >= e^(3x)/16 for x >= 2
            x_end = tail_cutoff(float(p), 3.0, math.log(16), prec + 10)
            f = _berndt_integrand(p)
            rough = not mpmath.isint(p)
        else:
            s = mpmath.mpmathify(spec.p_or_s)
            w = mpmath.mpmathify(spec.w)
            sinh_p = [mpmath.mpmathify(a) for a in spec.sinh_periods]
            cosh_p = [mpmath.mpmathify(b) for b in spec.cosh_periods]
            rho = float(mpmath.re(w))
            if rho <= 0 or any(mpmath.re(a) <= 0 for a in sinh_p + cosh_p):
                raise DomainError("exp_kernel needs Re(w) > 0 and periods with positive real part")
            if mpmath.re(s) <= len(sinh_p):
                raise DomainError("kernel is not integrable at 0")
            # each factor |1 -+ e^(-a u)|^-1 <= 2 once u >= ln 2 / min Re(a)
            min_re = min([float(mpmath.re(a)) for a in sinh_p + cosh_p], default=1.0)
            floor = max(2.0, math.log(2) / min_re)
            n_fac = len(sinh_p) + len(cosh_p)
            x_end = tail_cutoff(max(float(mpmath.re(s)) - 1, 0.0), rho, n_fac * math.log(2), prec + 10, floor)
            f = _exp_kernel_integrand(s, w, sinh_p, cosh_p)
            rough = not mpmath.isint(s)
        return _integrate_panels(f, x_end, wp, prec + 4, rough)


def berndt_integral(p, prec: int = DEFAULT_PREC):
    return integrate(IntegrandSpec("berndt_mixed", p), prec)


def berndt_sinh_cosh_factorization_check(p: int, prec: int = DEFAULT_PREC, samples: int = 60):
    """Largest relative gap between the two factorizations of the denominator.

    (cosh 2x - cos 2x)(cosh x + cos x)
        = 4 sinh((1+i)x) sinh((1-i)x) cosh((1+i)x/2) cosh((1-i)x/2)

    sampled on a uniform grid in (0, 30].  ``p`` only fixes the domain check.
    """
    if p < 3:
        raise DomainError("p must be at least 3")
    with working(prec):
        one_i = mpmath.mpc(1, 1)
        one_mi = mpmath.mpc(1, -1)
        worst = mpf(0)
        for k in range(1, samples + 1):
            x = mpf(30) * k / samples
            lhs = (mpmath.cosh(2 * x) - mpmath.cos(2 * x)) * (mpmath.cosh(x) + mpmath.cos(x))
            rhs = 4 * mpmath.sinh(one_i * x) * mpmath.sinh(one_mi * x) * mpmath.cosh(one_i * x / 2) * mpmath.cosh(one_mi * x / 2)
            worst = max(worst, abs(lhs - rhs) / abs(lhs))
        return worst
