"""Multiprecision elliptic machinery.

Scalars are :mod:`mpmath` ``mpf``/``mpc`` values.  Every public routine takes
a target precision in bits and works internally with ``GUARD_BITS`` extra
bits.  The modular point ``(x, y, q, z, z')`` is obtained from ``y`` by
theta-quotient nome inversion, so ``z'`` comes out analytically from the
termwise-differentiated theta series instead of by numerical differentiation.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, NonConvergence, PrecisionLoss

GUARD_BITS = 32
DEFAULT_PREC = 256


def working(prec: int):
    """Context manager that sets the working precision to ``prec`` + guard bits."""
    return mp.workprec(int(prec) + GUARD_BITS)


def agm(a, b, prec: int = DEFAULT_PREC):
    """Arithmetic-geometric mean of two positive reals."""
    with working(prec):
        a, b = mpf(a), mpf(b)
        if a <= 0 or b <= 0:
            raise DomainError("agm requires positive arguments")
        tol = mpf(2) ** (-(prec + GUARD_BITS // 2))
        for _ in range(200):
            if abs(a - b) <= tol * a:
                return (a + b) / 2
            a, b = (a + b) / 2, mpmath.sqrt(a * b)
        raise NonConvergence("agm iteration did not settle")


def complete_elliptic_K(x, prec: int = DEFAULT_PREC):
    """K(x) for parameter ``x = k^2`` in (0, 1), via ``pi / (2 agm(1, sqrt(1-x)))``."""
    with working(prec):
        x = mpf(x)
        if not 0 < x < 1:
            raise DomainError(f"K(x) needs 0 < x < 1, got {x}")
        return mp.pi / (2 * agm(1, mpmath.sqrt(1 - x), prec + GUARD_BITS))


_gamma_cache: dict[int, mpf] = {}
_gamma_lock = threading.Lock()

# Reduced precision for the independent Euler-integral route.
_CROSSCHECK_DPS = 70
_CROSSCHECK_DIGITS = 60


def _gamma_quarter_euler(dps: int = _CROSSCHECK_DPS):
    # Gamma(1/4) = int_0^inf t^(-3/4) e^(-t) dt = 4 int_0^inf exp(-v^4) dv  (t = v^4)
    with mp.workdps(dps + 10):
        return 4 * mpmath.quad(lambda v: mpmath.exp(-(v ** 4)), [0, 1, 2, 3, mpmath.inf])


def gamma_quarter(prec: int = DEFAULT_PREC):
    """Gamma(1/4) from the lemniscatic AGM identity, cached per precision.

    ``Gamma(1/4)^2 = (2 pi)^(3/2) / agm(1, sqrt 2)``.  The first computation
    at each precision is checked against a quadrature of the Euler integral.
    """
    if prec < 64:
        raise DomainError("gamma_quarter needs at least 64 bits")
    with _gamma_lock:
        cached = _gamma_cache.get(prec)
    if cached is not None:
        return cached
    with working(prec):
        g2 = (2 * mp.pi) ** mpf(1.5) / agm(1, mpmath.sqrt(2), prec + GUARD_BITS)
        value = mpmath.sqrt(g2)
    reference = _gamma_quarter_euler()
    digits = min(_CROSSCHECK_DIGITS, int(prec * 0.30103) - 5)
    with mp.workdps(_CROSSCHECK_DPS):
        if abs(value - reference) > mpf(10) ** (-digits) * value:
            raise NonConvergence("Gamma(1/4) routes disagree; AGM identity is wrong")
    with _gamma_lock:
        _gamma_cache[prec] = value
    return value


def theta_series(which: int, q, prec: int = DEFAULT_PREC):
    """Jacobi theta constant theta_2, theta_3 or theta_4 at nome ``q`` in (0, 1)."""
    if which not in (2, 3, 4):
        raise DomainError(f"unknown theta function theta_{which}")
    with working(prec):
        q = mpf(q)
        if not 0 < q < 1:
            raise DomainError("nome must lie in (0, 1)")
        eps = mpf(2) ** (-(prec + 10))
        if which == 2:
            total, n = mpf(0), 0
            while True:
                term = q ** ((n + mpf(0.5)) ** 2)
                total += term
                if term < eps * total:
                    return 2 * total
                n += 1
        total, n, sign = mpf(0), 1, 1
        while True:
            if which == 4:
                sign = -sign
            term = q ** (n * n)
            total += sign * term
            if term < eps:
                return 1 + 2 * total
            n += 1


def _theta3_and_dy(q, eps):
    # theta_3(q) and d theta_3 / dy with q = e^(-y), i.e. -sum 2 n^2 q^(n^2)
    t3, d3, n = mpf(1), mpf(0), 1
    while True:
        term = q ** (n * n)
        t3 += 2 * term
        d3 -= 2 * n * n * term
        if term * n * n < eps:
            return t3, d3
        n += 1


@dataclass(frozen=True)
class ModularPoint:
    """The tuple (x, y, q, z, z') for one value of y; ``zprime`` is dz/dx."""

    x: mpf
    y: mpf
    q: mpf
    z: mpf
    zprime: mpf
    prec: int

    def dual(self) -> "ModularPoint":
        """The point at ``pi^2 / y``: x -> 1-x, z -> y z / pi, z' -> (1/(x(1-x)z) - y z') / pi."""
        with working(self.prec):
            x, y, z, zp = self.x, self.y, self.z, self.zprime
            return ModularPoint(
                x=1 - x,
                y=mp.pi ** 2 / y,
                q=mpmath.exp(-mp.pi ** 2 / y),
                z=y * z / mp.pi,
                zprime=(1 / (x * (1 - x) * z) - y * zp) / mp.pi,
                prec=self.prec,
            )


def modular_point_from_y(y, prec: int = DEFAULT_PREC) -> ModularPoint:
    """Invert the nome: x = (theta_2/theta_3)^4, z = theta_3^2, z' = (dz/dy)/(dx/dy)."""
    with working(prec):
        y = mpf(y)
        if y <= 0:
            raise DomainError("y must be positive")
        q = mpmath.exp(-y)
        eps = mpf(2) ** (-(prec + GUARD_BITS))
        t2 = theta_series(2, q, prec + GUARD_BITS)
        t3, dt3 = _theta3_and_dy(q, eps)
        t4 = theta_series(4, q, prec + GUARD_BITS)
        x = (t2 / t3) ** 4
        xc = (t4 / t3) ** 4
        floor = mpf(2) ** (-prec)
        if xc < floor or x < floor:
            raise PrecisionLoss(f"x is indistinguishable from an endpoint at y = {y}")
        z = t3 ** 2
        dz_dy = 2 * t3 * dt3
        dx_dy = -x * xc * z ** 2
        return ModularPoint(x=x, y=y, q=q, z=z, zprime=dz_dy / dx_dy, prec=prec)


def y_from_x(x, prec: int = DEFAULT_PREC):
    """y(x) = pi K(1-x) / K(x)."""
    with working(prec):
        x = mpf(x)
        return mp.pi * complete_elliptic_K(1 - x, prec + GUARD_BITS) / complete_elliptic_K(
            x, prec + GUARD_BITS
        )


def _poch(a: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for j in range(n):
        out *= a + j
    return out


def z_derivative_at_half(n: int):
    """Exact d^n z / dx^n at x = 1/2 as a ClosedForm in Gamma(1/4), pi and sqrt 2.

    Uses ``(1/2)_n^2 sqrt(pi) / Gamma(n/2 + 3/4)^2`` and reduces the Gamma
    factor through ``Gamma(3/4) = pi sqrt 2 / Gamma(1/4)`` (n even) or
    ``Gamma(5/4) = Gamma(1/4) / 4`` (n odd).
    """
    from .closedform import ClosedForm

    if n < 0:
        raise DomainError("derivative order must be nonnegative")
    half_sq = _poch(Fraction(1, 2), n) ** 2
    k = n // 2
    if n % 2 == 0:
        # Gamma(k+3/4)^2 = (3/4)_k^2 * 2 pi^2 / Gamma^2
        coef = half_sq / (2 * _poch(Fraction(3, 4), k) ** 2)
        return ClosedForm.monomial(coef, gamma=2, pi_half=-3)
    # Gamma(k+5/4)^2 = (5/4)_k^2 * Gamma^2 / 16
    coef = 16 * half_sq / _poch(Fraction(5, 4), k) ** 2
    return ClosedForm.monomial(coef, gamma=-2, pi_half=1)
