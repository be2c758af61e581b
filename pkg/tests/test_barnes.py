from fractions import Fraction
from math import factorial

import mpmath
import pytest
from mpmath import mp, mpf

from berndt_forge.barnes import (
    BarnesSpec,
    _direction_weights,
    _group_periods,
    barnes_integral,
    barnes_lattice,
    berndt_spec,
    zeta4_closed_form,
)
from berndt_forge.closedform import berndt_closed_form, cf_eval
from berndt_forge.errors import DomainError, SlowConvergence
from berndt_forge.verification import PRINTED_ZETA4


def test_riemann_and_alternating_reductions():
    with mp.workprec(128):
        for route in (barnes_lattice, barnes_integral):
            assert abs(route(BarnesSpec(4, 1, [1], [1]), 128) - mp.pi ** 4 / 90) < mpf(10) ** -30
            assert abs(route(BarnesSpec(2, 1, [1], [-1]), 128) - mp.pi ** 2 / 12) < mpf(10) ** -30


def test_collinear_grouping_of_c4():
    groups = _group_periods(berndt_spec(1).periods, berndt_spec(1).signs)
    assert [(g[0], sorted(g[1])) for g in groups] == [(1 + 1j, [(1, -1), (2, 1)]), (1 - 1j, [(1, -1), (2, 1)])]
    period, polys = _direction_weights([(2, 1), (1, -1)])
    # weight(a) = (-1)^a (floor(a/2) + 1)
    for a in range(12):
        j, r = divmod(a, period)
        w = sum(c * j ** e for e, c in enumerate(polys[r]))
        assert w == (-1) ** a * (a // 2 + 1)


def test_zeta4_closed_forms_match_printed():
    assert zeta4_closed_form(1) == PRINTED_ZETA4[1]
    assert zeta4_closed_form(2) == PRINTED_ZETA4[2]
    for m in (1, 2, 3):
        assert zeta4_closed_form(m).scale(4 * factorial(4 * m - 1)) == berndt_closed_form(m)


def test_integral_route_m1():
    with mp.workprec(128):
        val = barnes_integral(berndt_spec(1), 128)
        ref = cf_eval(zeta4_closed_form(1), 128)
        assert abs(val.real - ref) < mpf(10) ** -32 * ref
        assert abs(val.imag) < mpf(2) ** -64


def test_brute_force_budget():
    spec = BarnesSpec(5, 1, [1, 2 ** 0.5, 3 ** 0.5], [1, -1, 1])
    with pytest.raises(SlowConvergence):
        barnes_lattice(spec, 128, budget=1000)


def test_brute_force_small_case():
    # three independent directions, small precision: compare with the integral route
    spec = BarnesSpec(9, 1, [1, 1 + 1j, 1 - 1j], [-1, -1, -1])
    with mp.workprec(40):
        lat = barnes_lattice(spec, 20, budget=10 ** 6)
        integ = barnes_integral(spec, 40)
        assert abs(lat - integ) < mpf(10) ** -5 * abs(integ)


def test_spec_validation():
    with pytest.raises(DomainError):
        BarnesSpec(4, 0, [1], [1])
    with pytest.raises(DomainError):
        BarnesSpec(4, 1, [-1], [1])
    with pytest.raises(DomainError):
        BarnesSpec(4, 1, [1], [2])
    with pytest.raises(DomainError):
        barnes_lattice(BarnesSpec(4, 3, (2 + 2j, 2 - 2j, 1 + 1j, 1 - 1j), (1, 1, -1, -1)))
