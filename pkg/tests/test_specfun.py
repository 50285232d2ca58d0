import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edp.errors import ConvergenceError, DomainError, PoleError
from edp.specfun import SeriesParams, hyp1f1, hyp2f1, series_terms


def test_hyp1f1_a_zero_is_constant():
    assert hyp1f1(0, 1.5, 2.7) == 1.0


def test_hyp1f1_two_term_polynomial():
    assert hyp1f1(-1, 2, 3) == pytest.approx(-0.5, abs=1e-15)


@pytest.mark.parametrize("x", [0.1, 1.0, -2.5, 7.0])
def test_hyp1f1_unit_parameters_is_exponential(x):
    assert hyp1f1(1, 1, x) == pytest.approx(math.exp(x), rel=1e-12)


# hand-expanded 1F1(-m; c; x) for m = 1..4
HAND = {
    1: lambda c, x: 1 - x / c,
    2: lambda c, x: 1 - 2 * x / c + x**2 / (c * (c + 1)),
    3: lambda c, x: 1 - 3 * x / c + 3 * x**2 / (c * (c + 1)) - x**3 / (c * (c + 1) * (c + 2)),
    4: lambda c, x: (
        1
        - 4 * x / c
        + 6 * x**2 / (c * (c + 1))
        - 4 * x**3 / (c * (c + 1) * (c + 2))
        + x**4 / (c * (c + 1) * (c + 2) * (c + 3))
    ),
}


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("c", [0.5, 1.5, 2.0, 3.5])
@pytest.mark.parametrize("x", [-3.0, 0.7, 4.2, 20.0])
def test_hyp1f1_terminating_matches_hand_expansion(m, c, x):
    assert hyp1f1(-m, c, x) == pytest.approx(HAND[m](c, x), rel=1e-13, abs=1e-13)


def test_hyp2f1_at_zero():
    assert hyp2f1(0.3, -1.7, 2.2, 0.0) == 1.0


def test_hyp2f1_two_term_polynomial():
    assert hyp2f1(-1, 2, 3, 0.5) == pytest.approx(2 / 3, rel=1e-15)


def test_hyp2f1_log_identity():
    x = 0.25
    assert hyp2f1(1, 1, 2, x) == pytest.approx(-math.log1p(-x) / x, rel=1e-12)


def test_hyp2f1_terminating_outside_unit_disc():
    # 2F1(-2, b; c; x) = 1 - 2bx/c + b(b+1)x^2/(c(c+1))
    b, c, x = 1.5, 2.5, 3.0
    expected = 1 - 2 * b * x / c + b * (b + 1) * x**2 / (c * (c + 1))
    assert hyp2f1(-2, b, c, x) == pytest.approx(expected, rel=1e-14)


def test_hyp2f1_domain_error():
    with pytest.raises(DomainError):
        hyp2f1(0.5, 0.5, 1.5, 1.0)
    with pytest.raises(DomainError):
        hyp2f1(0.5, 0.5, 1.5, -1.2)


def test_pole_parameter():
    with pytest.raises(PoleError):
        hyp1f1(0.5, -2, 1.0)
    with pytest.raises(PoleError):
        hyp1f1(-3, -1, 1.0)
    # terminates before reaching the pole
    assert hyp1f1(-1, -2, 1.0) == pytest.approx(1.5)


def test_non_convergence():
    with pytest.raises(ConvergenceError):
        hyp1f1(0.5, 1.5, 30.0, SeriesParams(max_terms=5))


def test_complex_rejected():
    with pytest.raises(TypeError):
        hyp1f1(1j, 1, 0.5)


def test_params_validation():
    with pytest.raises(ValueError):
        SeriesParams(max_terms=0)
    with pytest.raises(ValueError):
        SeriesParams(tol=0.0)


@settings(max_examples=60, deadline=None)
@given(
    m=st.integers(0, 12),
    c=st.floats(0.25, 8.0),
    x=st.floats(-40.0, 40.0),
    terms=st.integers(1, 50),
    tol=st.floats(1e-16, 1e-3),
)
def test_terminating_is_independent_of_cutoffs(m, c, x, terms, tol):
    assert hyp1f1(-m, c, x, SeriesParams(terms, tol)) == hyp1f1(-m, c, x)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(-5, 5), c=st.floats(0.3, 6), x=st.floats(-10, 10))
def test_term_ratio_recurrence(a, c, x):
    terms = list(series_terms((a,), c, x, max_terms=30))
    for k, (t0, t1) in enumerate(zip(terms, terms[1:])):
        expected = t0 * (a + k) * x / ((c + k) * (k + 1))
        assert t1 == pytest.approx(expected, rel=1e-14, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-5, 5), b=st.floats(-5, 5), c=st.floats(0.3, 6))
def test_value_at_origin(a, b, c):
    assert hyp1f1(a, c, 0.0) == 1.0
    assert hyp2f1(a, b, c, 0.0) == 1.0
