import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from berndt_forge.closedform import (
    ClosedForm,
    EllipticExpr,
    berndt_closed_form,
    berndt_coefficients,
    cf_arith,
    cf_eval,
    closed_form_at_pi,
    closed_form_cosh3,
    cosh3_from_elliptic,
    elliptic_expr_eval,
    elliptic_expr_for,
    printed_berndt_coefficients,
)
from berndt_forge.elliptic_core import modular_point_from_y
from berndt_forge.errors import DomainError
from berndt_forge.exactalg import RatPoly
from berndt_forge.hyperseries import SeriesSpec, eval_series
from berndt_forge.verification import PRINTED_AT_PI, PRINTED_INTEGRALS

F = Fraction
X = RatPoly([0, 1])
ONE_MINUS_X = RatPoly([1, -1])


def T(poly, **kw):
    return EllipticExpr.term(poly, **kw)


monomials = st.builds(
    ClosedForm.monomial,
    st.fractions(min_value=-50, max_value=50, max_denominator=20),
    st.integers(-6, 12),
    st.integers(-12, 6),
    st.integers(-3, 3),
)


def test_arith_examples():
    a = ClosedForm.monomial(1, gamma=4, pi_half=-2)
    assert cf_arith(a, a, "sub").is_zero()
    assert cf_arith(a, 3, "scale") == ClosedForm.monomial(3, gamma=4, pi_half=-2)
    z = ClosedForm.monomial(F(1, 2), gamma=2, pi_half=-3)
    assert cf_arith(z, z, "mul") == ClosedForm.monomial(F(1, 4), gamma=4, pi_half=-6)


def test_sqrt2_canonical_form():
    # 2^(1/2) is stored as 2 * 2^(-1/2)
    assert ClosedForm.monomial(1, two_half=1) == ClosedForm.monomial(2, two_half=-1)
    assert ClosedForm.monomial(1, two_half=-2) == ClosedForm.monomial(F(1, 2))


def test_eval_basics():
    assert cf_eval(ClosedForm.zero()) == 0
    with mp.workprec(200):
        k = mpmath.ellipk(mpf(1) / 2)
        z = cf_eval(ClosedForm.monomial(F(1, 2), gamma=2, pi_half=-3), 200)
        assert abs(z - 2 * k / mp.pi) < mpf(10) ** -55


@given(monomials, monomials)
def test_canonicalization_idempotent_and_commutative(a, b):
    s = a + b
    assert s.canonical() == s
    assert s == b + a
    assert ClosedForm.from_json(s.to_json()) == s


@given(monomials, monomials, monomials)
def test_distributive(a, b, c):
    assert (a + b) * c == a * c + b * c


def test_latex_style():
    assert PRINTED_INTEGRALS[1].to_latex().startswith(r"\frac{\Gamma^{12}}{16384 \pi^{5}} - \frac{\Gamma^{10}}{4096 \sqrt{2} \pi^{7/2}}")


def test_json_layout():
    row = json.loads(ClosedForm.monomial(F(-3, 512), 6, -3, -1).to_json())[0]
    assert row == {"coef_num": -3, "coef_den": 512, "gamma_exp": 6, "pi_half_exp": -3, "two_half_exp": -1}


def test_golden_G2_p3():
    printed = (T(X * X * ONE_MINUS_X * F(6, 16), z=4, zprime=1, sqrt_1mx=1)
               + T(X * RatPoly([-2, 3]) * F(-1, 16), z=5, sqrt_1mx=1)
               + T(X * RatPoly([-1, 1]) * F(2, 16), z=4))
    assert elliptic_expr_for("G2", 3) == printed


def test_golden_Gprime2_p3():
    printed = (T(X * ONE_MINUS_X * 2, z=3, zprime=1, sqrt_x=1, sqrt_1mx=1)
               + T(RatPoly([1, -2]) * F(1, 2), z=4, sqrt_x=1, sqrt_1mx=1)
               + T(ONE_MINUS_X * F(-1, 2), z=3, sqrt_x=1))
    assert elliptic_expr_for("Gprime2", 3) == printed


def test_golden_Gbar1_p3():
    xm1 = RatPoly([-1, 1])
    printed = (T(xm1 * xm1 * X * -3, z=4, zprime=1, sqrt_x=1)
               + T(xm1 * RatPoly([-1, 3]) * F(-1, 2), z=5, sqrt_x=1)
               + T(RatPoly([1, -2]) * F(1, 2), z=4, sqrt_x=1, sqrt_1mx=1))
    assert elliptic_expr_for("Gbar1", 3) == printed


def test_theta_operator_against_finite_difference():
    e = elliptic_expr_for("Gprime2", 5)
    de = e.theta()
    with mp.workprec(200):
        y, h = mpf("1.4"), mpf(2) ** -60
        pt = modular_point_from_y(y, 200)
        lo, hi = modular_point_from_y(y - h, 200), modular_point_from_y(y + h, 200)
        fd = (e.evaluate(hi) - e.evaluate(lo)) / (hi.x - lo.x) * pt.x * (1 - pt.x)
        assert abs(fd - de.evaluate(pt)) < mpf(10) ** -30 * abs(fd)


@pytest.mark.parametrize("family,series", [("G2", "G"), ("Gprime2", "Gprime"), ("Gbar1", "Gbar")])
@pytest.mark.parametrize("y", ["2", "pi"])
def test_elliptic_eval_matches_series(family, series, y):
    with mp.workprec(200):
        yv = mp.pi if y == "pi" else mpf(y)
        pt = modular_point_from_y(yv, 200)
        for p in (3, 5):
            lhs = eval_series(SeriesSpec(series, p, 2, yv), 200)
            assert abs(elliptic_expr_eval(elliptic_expr_for(family, p), pt) - lhs) < mpf(10) ** -40 * abs(lhs)


def test_radical_factors_vanish_as_x_to_zero():
    from berndt_forge.elliptic_core import ModularPoint

    pt = ModularPoint(x=mpf(0), y=mpf(0), q=mpf(0), z=mpf(1), zprime=mpf(1) / 4, prec=64)
    assert elliptic_expr_eval(T(RatPoly([1]), z=2, sqrt_x=1), pt) == 0


@pytest.mark.parametrize("family", ["G2", "Gprime2", "Gbar1"])
def test_closed_form_at_pi_m1_golden(family):
    assert closed_form_at_pi(family, 1) == PRINTED_AT_PI[family]


def test_cosh3_printed_formula_and_elliptic_route_agree():
    for m in (1, 2, 3):
        form = closed_form_cosh3(m)
        assert form == cosh3_from_elliptic(m)
        assert len(form.terms) == 2
    with mp.workprec(200):
        # 50-digit direct summation, frozen
        assert abs(cf_eval(closed_form_cosh3(1), 200) - mpf("-0.063143745108430877958")) < mpf(10) ** -20


def test_berndt_closed_forms_match_printed_blocks():
    assert berndt_closed_form(1) == PRINTED_INTEGRALS[1]
    assert berndt_closed_form(3) == PRINTED_INTEGRALS[3]
    assert berndt_closed_form(4) == PRINTED_INTEGRALS[4]
    # m = 2: identical except the last printed term reads Gamma^11 instead of Gamma^12
    diff = berndt_closed_form(2) - PRINTED_INTEGRALS[2]
    assert diff == (ClosedForm.monomial(F(63, 16384), 12, -6) - ClosedForm.monomial(F(63, 16384), 11, -6))


def test_coefficients_versus_printed_formulas():
    for m in (1, 2, 3, 4):
        derived = berndt_coefficients(m)
        printed = printed_berndt_coefficients(m)
        assert [derived[i] == printed[i] for i in range(5)] == [True, False, True, False, True]
        assert derived == printed_berndt_coefficients(m, corrected=True)


def test_closed_form_domain_errors():
    with pytest.raises(DomainError):
        closed_form_at_pi("X1", 1)
    with pytest.raises(DomainError):
        berndt_closed_form(0)
    with pytest.raises(DomainError):
        elliptic_expr_for("G2", 4)
