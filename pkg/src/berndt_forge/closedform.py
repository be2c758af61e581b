"""Exact closed forms over the Gamma(1/4), pi, sqrt(2) monomial basis.

A :class:`ClosedForm` is a finite sum ``c * G^a * pi^(b/2) * 2^(f/2)`` with
rational ``c``, where ``G = Gamma(1/4)``.  Even powers of sqrt(2) are folded
into the coefficient so that ``f`` is 0 or -1, matching displays such as
``G^10 / (2048 sqrt(2) pi^(15/2))``.

An :class:`EllipticExpr` is a polynomial expression in ``z``, ``z'``,
``sqrt(x)`` and ``sqrt(1-x)`` with :class:`RatPoly` coefficients.  It is
closed under ``x(1-x) d/dx`` thanks to the hypergeometric equation

    x(1-x) z'' = z/4 - (1-2x) z'

so the right sides of the modular identities can be built and differentiated
exactly, then evaluated at any modular point or specialized to ``x = 1/2``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import factorial

import mpmath
from mpmath import mp, mpf

from .elliptic_core import DEFAULT_PREC, ModularPoint, gamma_quarter, working, z_derivative_at_half
from .errors import DomainError
from .exactalg import RatPoly
from .jacobi_maclaurin import table_A, table_P, table_R, table_S

# -- ClosedForm ----------------------------------------------------------------


def _canon_key(coef: Fraction, g: int, ph: int, th: int) -> tuple[Fraction, tuple[int, int, int]]:
    # 2^(th/2) with th even moves into the coefficient; odd th becomes -1.
    if th % 2 == 0:
        shift = th // 2
        th = 0
    else:
        shift = (th + 1) // 2
        th = -1
    coef = coef * (Fraction(2) ** shift)
    return coef, (g, ph, th)


class ClosedForm:
    """Immutable sum of monomials ``coef * Gamma^g * pi^(ph/2) * 2^(th/2)``."""

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        acc: dict[tuple[int, int, int], Fraction] = {}
        for coef, g, ph, th in terms:
            c, key = _canon_key(Fraction(coef), int(g), int(ph), int(th))
            acc[key] = acc.get(key, Fraction(0)) + c
        self._terms = tuple(sorted(((k, c) for k, c in acc.items() if c != 0), key=lambda kc: (-kc[0][0], kc[0][1], kc[0][2])))

    @classmethod
    def monomial(cls, coef, gamma: int = 0, pi_half: int = 0, two_half: int = 0) -> "ClosedForm":
        return cls([(coef, gamma, pi_half, two_half)])

    @classmethod
    def zero(cls) -> "ClosedForm":
        return cls()

    @property
    def terms(self) -> tuple[tuple[Fraction, int, int, int], ...]:
        """Canonical ``(coef, gamma_exp, pi_half_exp, two_half_exp)`` tuples."""
        return tuple((c, g, ph, th) for (g, ph, th), c in self._terms)

    def coefficient(self, gamma: int, pi_half: int, two_half: int = 0) -> Fraction:
        c, key = _canon_key(Fraction(1), gamma, pi_half, two_half)
        return dict(self._terms).get(key, Fraction(0)) / c

    def is_zero(self) -> bool:
        return not self._terms

    def canonical(self) -> "ClosedForm":
        return ClosedForm(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClosedForm):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"ClosedForm({self.to_text()})"

    def __add__(self, other: "ClosedForm") -> "ClosedForm":
        return ClosedForm(self.terms + other.terms)

    def __neg__(self) -> "ClosedForm":
        return ClosedForm((-c, g, ph, th) for c, g, ph, th in self.terms)

    def __sub__(self, other: "ClosedForm") -> "ClosedForm":
        return self + (-other)

    def __mul__(self, other) -> "ClosedForm":
        if isinstance(other, (int, Fraction)):
            return ClosedForm((c * other, g, ph, th) for c, g, ph, th in self.terms)
        return ClosedForm(
            (c1 * c2, g1 + g2, p1 + p2, t1 + t2)
            for c1, g1, p1, t1 in self.terms
            for c2, g2, p2, t2 in other.terms
        )

    __rmul__ = __mul__

    def scale(self, factor) -> "ClosedForm":
        return self * Fraction(factor)

    def __pow__(self, n: int) -> "ClosedForm":
        out = ClosedForm.monomial(1)
        for _ in range(n):
            out = out * self
        return out

    # -- output

    def to_dicts(self) -> list[dict]:
        return [
            {"coef_num": c.numerator, "coef_den": c.denominator, "gamma_exp": g, "pi_half_exp": ph, "two_half_exp": th}
            for c, g, ph, th in self.terms
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_dicts())

    @classmethod
    def from_dicts(cls, items) -> "ClosedForm":
        return cls(
            (Fraction(int(d["coef_num"]), int(d["coef_den"])), d["gamma_exp"], d["pi_half_exp"], d["two_half_exp"])
            for d in items
        )

    @classmethod
    def from_json(cls, text: str) -> "ClosedForm":
        return cls.from_dicts(json.loads(text))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for c, g, ph, th in self.terms:
            factors = [str(abs(c))]
            if g:
                factors.append(f"G^{g}")
            if ph:
                factors.append(f"pi^({Fraction(ph, 2)})")
            if th:
                factors.append(f"2^({Fraction(th, 2)})")
            parts.append(("-" if c < 0 else "+", "*".join(factors)))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return text + "".join(f" {s} {b}" for s, b in parts[1:])

    def to_latex(self) -> str:
        """Display style ``\\frac{n \\Gamma^{a}}{d \\sqrt{2} \\pi^{b}}`` per term."""
        if not self._terms:
            return "0"
        out = ""
        for c, g, ph, th in self.terms:
            mag = abs(c)
            num, den = [], []
            if mag.numerator != 1 or (g <= 0):
                num.append(str(mag.numerator))
            if mag.denominator != 1:
                den.append(str(mag.denominator))
            if g > 0:
                num.append(rf"\Gamma^{{{g}}}" if g != 1 else r"\Gamma")
            elif g < 0:
                den.append(rf"\Gamma^{{{-g}}}" if g != -1 else r"\Gamma")
            if th < 0:
                den.append(r"\sqrt{2}")
            if ph:
                e = Fraction(abs(ph), 2)
                e_txt = str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
                power = r"\pi" if e == 1 else rf"\pi^{{{e_txt}}}"
                (num if ph > 0 else den).append(power)
            body = " ".join(num) if num else "1"
            if den:
                body = rf"\frac{{{body}}}{{{' '.join(den)}}}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out


def cf_arith(a: ClosedForm, b, kind: str) -> ClosedForm:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "scale":
        return a.scale(b)
    raise DomainError(f"unknown closed-form operation {kind!r}")


def cf_eval(a: ClosedForm, prec: int = DEFAULT_PREC):
    """Numerical value of a closed form at ``prec`` bits."""
    g_val = gamma_quarter(max(prec, 64) + 32)
    with working(prec):
        pi = mp.pi
        sqrt_pi = mpmath.sqrt(pi)
        sqrt2 = mpmath.sqrt(2)
        total = mpf(0)
        for c, g, ph, th in a.terms:
            total += mpf(c.numerator) / c.denominator * g_val ** g * sqrt_pi ** ph * sqrt2 ** th
        return +total


# -- EllipticExpr --------------------------------------------------------------

_ONE = RatPoly([1])
_X = RatPoly([0, 1])
_ONE_MINUS_X = RatPoly([1, -1])
_XX1 = _X * _ONE_MINUS_X


class EllipticExpr:
    """Sum of ``poly(x) z^a z'^b sqrt(x)^s sqrt(1-x)^t`` with s, t in {0, 1}."""

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        acc: dict[tuple[int, int, int, int], RatPoly] = {}
        for poly, a, b, s, t in terms:
            poly = poly if isinstance(poly, RatPoly) else RatPoly([poly])
            if s >= 2:
                poly, s = poly * (_X ** (s // 2)), s % 2
            if t >= 2:
                poly, t = poly * (_ONE_MINUS_X ** (t // 2)), t % 2
            if b < 0:
                raise DomainError("negative powers of z' are not supported")
            key = (a, b, s, t)
            acc[key] = acc.get(key, RatPoly()) + poly
        self._terms = tuple(sorted((k, p) for k, p in acc.items() if not p.is_zero()))

    @classmethod
    def term(cls, poly, z: int = 0, zprime: int = 0, sqrt_x: int = 0, sqrt_1mx: int = 0) -> "EllipticExpr":
        return cls([(poly, z, zprime, sqrt_x, sqrt_1mx)])

    @property
    def terms(self):
        """``(poly, z_exp, zprime_exp, sqrt_x, sqrt_1mx)`` tuples in canonical order."""
        return tuple((p, a, b, s, t) for (a, b, s, t), p in self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EllipticExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"EllipticExpr({self.to_text()})"

    def __add__(self, other: "EllipticExpr") -> "EllipticExpr":
        return EllipticExpr(self.terms + other.terms)

    def __neg__(self) -> "EllipticExpr":
        return EllipticExpr((-p, a, b, s, t) for p, a, b, s, t in self.terms)

    def __sub__(self, other: "EllipticExpr") -> "EllipticExpr":
        return self + (-other)

    def __mul__(self, other) -> "EllipticExpr":
        if isinstance(other, (int, Fraction, RatPoly)):
            return EllipticExpr((p * other, a, b, s, t) for p, a, b, s, t in self.terms)
        return EllipticExpr(
            (p1 * p2, a1 + a2, b1 + b2, s1 + s2, t1 + t2)
            for p1, a1, b1, s1, t1 in self.terms
            for p2, a2, b2, s2, t2 in other.terms
        )

    __rmul__ = __mul__

    def theta(self) -> "EllipticExpr":
        """Apply ``x(1-x) d/dx``."""
        out = []
        for p, a, b, s, t in self.terms:
            out.append((p.diff() * _XX1, a, b, s, t))
            if a:
                out.append((p * _XX1 * a, a - 1, b + 1, s, t))
            if b:
                out.append((p * Fraction(b, 4), a + 1, b - 1, s, t))
                out.append((p * RatPoly([-b, 2 * b]), a, b, s, t))
            if s or t:
                radical = RatPoly([Fraction(s, 2), -Fraction(s, 2) - Fraction(t, 2)])
                out.append((p * radical, a, b, s, t))
        return EllipticExpr(out)

    def d_dy(self) -> "EllipticExpr":
        """Apply ``d/dy = -z^2 x(1-x) d/dx``."""
        return self.theta() * EllipticExpr.term(-1, z=2)

    def reflect(self) -> "EllipticExpr":
        """Substitute ``x -> 1 - x`` in the polynomial parts and swap the radicals (z untouched)."""
        return EllipticExpr((p.reflect(), a, b, t, s) for p, a, b, s, t in self.terms)

    def evaluate(self, point: ModularPoint, prec: int | None = None):
        prec = point.prec if prec is None else prec
        with working(prec):
            x, z, zp = point.x, point.z, point.zprime
            sx, s1 = mpmath.sqrt(x), mpmath.sqrt(1 - x)
            total = mpf(0)
            for p, a, b, s, t in self.terms:
                total += p(x) * z ** a * zp ** b * sx ** s * s1 ** t
            return +total

    def at_half(self) -> ClosedForm:
        """Exact value at x = 1/2, where y = pi."""
        z0 = z_derivative_at_half(0)
        z1 = z_derivative_at_half(1)
        out = ClosedForm.zero()
        for p, a, b, s, t in self.terms:
            c = p(Fraction(1, 2))
            if c == 0:
                continue
            term = ClosedForm.monomial(c, two_half=-(s + t))
            term = term * _cf_power(z0, a) * _cf_power(z1, b)
            out = out + term
        return out

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for p, a, b, s, t in self.terms:
            f = [f"({p.to_text()})"]
            if a:
                f.append(f"z^{a}")
            if b:
                f.append(f"z'^{b}")
            if s:
                f.append("sqrt(x)")
            if t:
                f.append("sqrt(1-x)")
            parts.append("*".join(f))
        return " + ".join(parts)


def _cf_power(form: ClosedForm, n: int) -> ClosedForm:
    # Monomials only (z and z' at 1/2), so negative powers are exact.
    if n >= 0:
        return form ** n
    (c, g, ph, th), = form.terms
    return ClosedForm.monomial(Fraction(1) / c, -g, -ph, -th) ** (-n)


def elliptic_expr_eval(e: EllipticExpr, point: ModularPoint, prec: int | None = None):
    return e.evaluate(point, prec)


def _eps(p: int) -> int:
    return -1 if ((p - 1) // 2) % 2 else 1


def _check_p(p: int) -> None:
    if p < 3 or p % 2 == 0:
        raise DomainError(f"p must be odd and >= 3, got {p}")


def _T(poly, **kw) -> EllipticExpr:
    return EllipticExpr.term(poly, **kw)


def _elliptic_G2(p: int) -> EllipticExpr:
    eps = _eps(p)
    S = table_S(p - 1)[p - 1].reflect()
    W = _T(S, sqrt_1mx=1)
    first = _T(table_R(p).reflect() * _XX1 * Fraction(factorial(p - 1), 2 ** (p + 1)), z=p + 1)
    second = W * _T(_XX1 * Fraction(-p, 2 ** p), z=p + 1, zprime=1)
    third = W.theta() * _T(Fraction(-1, 2 ** p), z=p + 2)
    return (first + second + third) * eps


def _elliptic_Gprime2(p: int) -> EllipticExpr:
    eps = _eps(p)
    A = table_A(p - 1)[p - 1].reflect()
    V = _T(table_P(p - 2)[p - 2].reflect(), sqrt_x=1, sqrt_1mx=1)
    first = _T(A * Fraction(-eps, 2), z=p, sqrt_x=1)
    second = V * _T(_XX1 * (p - 1), z=p, zprime=1)
    third = V.theta() * _T(1, z=p + 1)
    return first + second + third


def _elliptic_Gbar2(p: int) -> EllipticExpr:
    eps = _eps(p)
    U = _T(table_A(p - 1)[p - 1].reflect(), sqrt_x=1)
    first = _T(table_P(p)[p].reflect() * Fraction(1, 2), z=p + 1, sqrt_x=1, sqrt_1mx=1)
    second = U * _T(_XX1 * (-eps * p), z=p + 1, zprime=1)
    third = U.theta() * _T(-eps, z=p + 2)
    return first + second + third


def _elliptic_Xprime1(p: int) -> EllipticExpr:
    return _T(table_P(p)[p] * Fraction(-_eps(p), 2), z=p + 1, sqrt_x=1, sqrt_1mx=1)


def _elliptic_X1(p: int) -> EllipticExpr:
    # sinh-series identity evaluated at y (its dual point is handled by the caller)
    return _T(table_R(p) * _XX1 * Fraction(-factorial(p - 1), 2 ** (p + 1)), z=p + 1)


def _elliptic_Y1(p: int) -> EllipticExpr:
    return _T(table_S(p - 1)[p - 1] * Fraction(-1, 2), z=p, sqrt_x=1)


def _elliptic_B1(p: int) -> EllipticExpr:
    return _T(table_A(p - 1)[p - 1] * Fraction(1, 2 ** p), z=p, sqrt_1mx=1)


def _elliptic_Xprime3(p: int) -> EllipticExpr:
    # cosh^-3 from cosh^-1: X'_{p,3} = X'_{p,1}/2 - 2 d^2/dy^2 X'_{p-2,1}
    if p < 3:
        raise DomainError("Xprime3 needs p >= 3")
    return _elliptic_Xprime1(p) * Fraction(1, 2) + _elliptic_Xprime1(p - 2).d_dy().d_dy() * (-2)


_BUILDERS = {
    "G2": _elliptic_G2,
    "Gprime2": _elliptic_Gprime2,
    "Gbar1": _elliptic_Gbar2,
    "Xprime1": _elliptic_Xprime1,
    "Xprime3": _elliptic_Xprime3,
    "X1dual": _elliptic_X1,
    "Y1": _elliptic_Y1,
    "B1": _elliptic_B1,
}

# elliptic family -> (series family, m) summed directly at the same y
SERIES_OF = {
    "G2": ("G", 2),
    "Gprime2": ("Gprime", 2),
    "Gbar1": ("Gbar", 2),
    "Xprime1": ("Xprime", 1),
    "Xprime3": ("Xprime", 3),
    "Y1": ("Y", 1),
    "B1": ("B", 1),
}


def elliptic_expr_for(family: str, p: int) -> EllipticExpr:
    """Right side of the modulus identity for ``family`` at odd ``p``.

    ``G2``, ``Gprime2`` and ``Gbar1`` give G_{p,2}, G'_{p,2} and Gbar_{p,2};
    the remaining keys are the single-power building blocks.  ``X1dual`` is
    X_{p,1} at the dual argument pi^2/y after removing the ``(y z/pi)^(p+1)``
    factor, i.e. ``X_{p,1}(pi^2/y) = (y/pi)^(p+1) * X1dual(x, z)``.
    """
    if family not in _BUILDERS:
        raise DomainError(f"unknown elliptic family {family!r}")
    _check_p(p)
    return _BUILDERS[family](p)


# -- closed forms at y = pi ------------------------------------------------------


def closed_form_at_pi(family: str, m: int) -> ClosedForm:
    """Exact value at y = pi of G_{4m-1,2}, G'_{4m-1,2} or Gbar_{4m-1,2}."""
    if m < 1:
        raise DomainError("m must be positive")
    if family not in ("G2", "Gprime2", "Gbar1"):
        raise DomainError(f"no closed form at pi for {family!r}")
    return elliptic_expr_for(family, 4 * m - 1).at_half()


def closed_form_cosh3(m: int) -> ClosedForm:
    """sum (-1)^n (2n-1)^(4m-1) / cosh^3((2n-1) pi/2), from the P table at 1/2.

    With ``P = P_{4m-3}(1/2)`` and ``P'' = P''_{4m-3}(1/2)`` this is

        G^(8m-4) / (2^(4m+7) pi^(6m+3)) * {128(8m^2-6m+1) pi^4 P + G^8 ((4m-6) P + P'')}

    See :func:`cosh3_from_elliptic` for an independent derivation.
    """
    if m < 1:
        raise DomainError("m must be positive")
    n = 4 * m - 3
    P = table_P(n)[n]
    Pv = P(Fraction(1, 2))
    Pdd = P.diff().diff()(Fraction(1, 2))
    head = ClosedForm.monomial(Fraction(128 * (8 * m * m - 6 * m + 1)) * Pv, gamma=0, pi_half=8)
    tail = ClosedForm.monomial((4 * m - 6) * Pv + Pdd, gamma=8)
    pref = ClosedForm.monomial(Fraction(1, 2 ** (4 * m + 7)), gamma=8 * m - 4, pi_half=-2 * (6 * m + 3))
    return pref * (head + tail)


def cosh3_from_elliptic(m: int) -> ClosedForm:
    """Same series as :func:`closed_form_cosh3`, via the cosh^-3 elliptic expression."""
    if m < 1:
        raise DomainError("m must be positive")
    return elliptic_expr_for("Xprime3", 4 * m - 1).at_half()


# -- Berndt integral -------------------------------------------------------------


def _gauss_cf(re: Fraction, im: Fraction, pi_power: int, form: ClosedForm) -> tuple[ClosedForm, ClosedForm]:
    scale = ClosedForm.monomial(1, pi_half=2 * pi_power)
    return (form * scale).scale(re), (form * scale).scale(im)


def berndt_closed_form(m: int) -> ClosedForm:
    """Exact value of  int_0^inf x^(4m-1) / [(cosh 2x - cos 2x)(cosh x + cos x)] dx.

    Assembled from the four series at y = pi with exact Gaussian-rational
    prefactors; the imaginary part cancels identically and the real part is
    halved (the left side of the contour identity is twice the integral).
    """
    from .hyperseries import contour_prefactors

    if m < 1:
        raise DomainError("m must be positive")
    p = 4 * m - 1
    pref = contour_prefactors(p)
    values = {
        "Gprime": closed_form_at_pi("Gprime2", m),
        "G": closed_form_at_pi("G2", m),
        "Xprime3": cosh3_from_elliptic(m),
        "Gbar": closed_form_at_pi("Gbar1", m),
    }
    real, imag = ClosedForm.zero(), ClosedForm.zero()
    for key, ((re, im), k) in pref.items():
        r, i = _gauss_cf(re, im, k, values[key])
        real, imag = real + r, imag + i
    if not imag.is_zero():
        raise DomainError(f"imaginary part does not cancel: {imag.to_text()}")
    return real.scale(Fraction(1, 2))


def berndt_basis(m: int) -> list[tuple[int, int, int]]:
    """The five (gamma, pi_half, two_half) monomials of the m-th integral."""
    return [
        (8 * m - 4, -2 * (2 * m - 1), 0),
        (8 * m - 2, -(4 * m - 1), -1),
        (8 * m, -4 * m, 0),
        (8 * m + 2, -(4 * m + 3), -1),
        (8 * m + 4, -2 * (2 * m + 3), 0),
    ]


def berndt_coefficients(m: int) -> list[Fraction]:
    """c_{1,m} .. c_{5,m} read off :func:`berndt_closed_form` in the five-term basis."""
    form = berndt_closed_form(m)
    coeffs = [form.coefficient(*key) for key in berndt_basis(m)]
    rebuilt = ClosedForm([(c, *key) for c, key in zip(coeffs, berndt_basis(m))])
    if rebuilt != form:
        raise DomainError("closed form has terms outside the five-term basis")
    return coeffs


def printed_berndt_coefficients(m: int, corrected: bool = False) -> list[Fraction]:
    """The c_{i,m} formulas in terms of table values at 1/2.

    With ``corrected=False`` the formulas are taken as printed; c_2 and c_4
    then disagree with :func:`berndt_coefficients`.  ``corrected=True``
    uses ``(A - S)`` in c_2 and ``(S' + S + A' - A)`` in c_4, which
    reproduces the derived values.
    """
    from .jacobi_maclaurin import table_Q

    half = Fraction(1, 2)
    n = 4 * m - 3
    P = table_P(n)[n]
    S = table_S(4 * m - 2)[4 * m - 2]
    A = table_A(4 * m - 2)[4 * m - 2]
    q = table_Q(4 * m - 2)[4 * m - 2]
    sgn = (-1) ** (m - 1)
    Pv, Pdd = P(half), P.diff().diff()(half)
    Sv, Sd, Av, Ad = S(half), S.diff()(half), A(half), A.diff()(half)
    if corrected:
        c2_core, c4_core = Av - Sv, Sd + Sv + Ad - Av
    else:
        c2_core, c4_core = Sv - Av, Sd - Sv + Ad + Av
    return [
        sgn * Fraction(1, 2 ** (6 * m + 2)) * (8 * m * m - 6 * m + 1) * Pv,
        sgn * Fraction(1, 2 ** (6 * m + 3)) * (4 * m - 1) * c2_core,
        sgn * Fraction(1, 2 ** (8 * m + 4)) * q(Fraction(-1)),
        sgn * Fraction(1, 2 ** (6 * m + 6)) * c4_core,
        -sgn * Fraction(1, 2 ** (6 * m + 9)) * ((4 * m - 6) * Pv + Pdd),
    ]
