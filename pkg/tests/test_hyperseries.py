import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from berndt_forge.elliptic_core import gamma_quarter
from berndt_forge.errors import DomainError
from berndt_forge.hyperseries import (
    FAMILIES,
    SeriesSpec,
    contour_identity_rhs,
    cutoff,
    eval_series,
    residue_identity_residual,
    transform_residual,
)


def test_G32_at_pi_matches_printed_value():
    g = gamma_quarter(200)
    with mp.workprec(200):
        pi = mp.pi
        ref = g ** 10 / (2048 * mpmath.sqrt(2) * pi ** 7.5) - g ** 8 / (512 * pi ** 6) + 3 * g ** 6 / (256 * mpmath.sqrt(2) * pi ** 5.5)
        assert abs(eval_series(SeriesSpec("G", 3, 2, pi), 200) - ref) < mpf(10) ** -55


def test_Gprime32_at_pi_matches_printed_value():
    g = gamma_quarter(200)
    with mp.workprec(200):
        pi = mp.pi
        ref = g ** 4 / (8 * pi ** 4) - g ** 6 / (32 * mpmath.sqrt(2) * pi ** 4.5)
        assert abs(eval_series(SeriesSpec("Gprime", 3, 2, pi), 200) - ref) < mpf(10) ** -55


@pytest.mark.parametrize("family", FAMILIES)
def test_single_term_dominance_at_large_y(family):
    with mp.workprec(128):
        # m = 3: with m = 2 the DXprime second term is already 81 e^-50 ~ 1.6e-20 relative
        full = eval_series(SeriesSpec(family, 3, 3, 50), 128)
        from berndt_forge.hyperseries import _FAMILIES, _hyper_factor

        half_odd, offset, powers = _FAMILIES[family]
        a, b = powers(3)
        t = mpf(25) if half_odd else mpf(50)
        first = -_hyper_factor(t, a, b)
        assert abs(full - first) < mpf(10) ** -20 * abs(first)


def test_domain_errors():
    with pytest.raises(DomainError):
        eval_series(SeriesSpec("G", 3, 2, 0))
    with pytest.raises(DomainError):
        SeriesSpec("nope", 3, 2, 1)
    with pytest.raises(DomainError):
        eval_series(SeriesSpec("DY", 3, 1, 1))  # cosh in the numerator outgrows sinh^-1
    with pytest.raises(DomainError):
        residue_identity_residual("Z1", 1, 1, 7)
    with pytest.raises(DomainError):
        transform_residual("js1", 4, 1)
    with pytest.raises(DomainError):
        contour_identity_rhs(5)


def test_residue_examples():
    assert residue_identity_residual("Z1", 1, 1, 0, 200) == 0
    assert abs(residue_identity_residual("Z1", 1, 1, 1, 200)) < mpf(10) ** -40
    with mp.workprec(200):
        assert abs(residue_identity_residual("Z2", 2, 1, mp.pi, 200)) < mpf(10) ** -40


@pytest.mark.parametrize("which,p,y", [("js1", 3, 2), ("js3", 5, 1.3), ("js2", 7, 0.9)])
def test_transform_examples(which, p, y):
    assert abs(transform_residual(which, p, y, 200)) < mpf(10) ** -40


def test_transform_at_fixed_point():
    with mp.workprec(200):
        for which in ("js1", "js2", "js3"):
            assert abs(transform_residual(which, 3, mp.pi, 200)) < mpf(10) ** -50


def test_contour_identity_p3_matches_printed_integral():
    g = gamma_quarter(200)
    with mp.workprec(200):
        pi, r2 = mp.pi, mpmath.sqrt(2)
        printed = (g ** 12 / (16384 * pi ** 5) - g ** 10 / (4096 * r2 * pi ** 3.5) + g ** 8 / (2048 * pi ** 2)
                   - 3 * g ** 6 / (512 * r2 * pi ** 1.5) + 3 * g ** 4 / (256 * pi))
        assert abs(contour_identity_rhs(3, 200) - 2 * printed) < mpf(10) ** -50


def test_cutoff_is_monotone_in_precision():
    assert cutoff(3, 1.0, 100) <= cutoff(3, 1.0, 200)
    with pytest.raises(DomainError):
        cutoff(3, 0.0, 100)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(FAMILIES), st.integers(1, 9), st.integers(1, 3), st.floats(0.4, 6.0))
def test_tail_bound_soundness(family, p, m, y):
    # doubling the cutoff must not move the value beyond the promised bound
    from berndt_forge import hyperseries

    if family in ("DY", "DXprime", "DB") and m == 1:
        m = 2
    spec = SeriesSpec(family, p, m, y)
    prec = 128
    with mp.workprec(prec + 40):
        base = eval_series(spec, prec)
        orig = hyperseries.cutoff
        try:
            hyperseries.cutoff = lambda *a, **k: 2 * orig(*a, **k)
            doubled = eval_series(spec, prec)
        finally:
            hyperseries.cutoff = orig
        assert abs(base - doubled) <= mpf(2) ** (-prec - 8) * max(1, abs(base)) + abs(base) * mpf(2) ** (-prec)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(FAMILIES), st.integers(1, 7), st.floats(0.5, 5.0))
def test_monotone_precision(family, p, y):
    m = 2
    with mp.workprec(300):
        lo = eval_series(SeriesSpec(family, p, m, y), 128)
        hi = eval_series(SeriesSpec(family, p, m, y), 256)
        assert abs(lo - hi) <= mpf(2) ** -120 * max(abs(hi), mpf(2) ** -60)
