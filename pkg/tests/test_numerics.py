import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from sf_herald import QuadratureGrid, db_from_r, hermite, hyp2f1_terminating, integrate_line, r_from_db
from sf_herald.errors import ConvergenceError, DomainError
from sf_herald.numerics import POINTS_ENV_VAR, default_points


def test_hermite_examples():
    assert hermite(0, 3.7) == 1
    assert hermite(0, 1 + 2j) == 1
    assert hermite(2, 1.0) == 2
    assert hermite(3, 1.0) == -4


def test_hermite_matches_scipy():
    x = np.linspace(-4, 4, 41)
    for n in range(15):
        assert np.allclose(hermite(n, x), special.eval_hermite(n, x), rtol=1e-12, atol=1e-12)


def test_hermite_complex_argument():
    z = 0.3 - 1.1j
    assert np.isclose(hermite(3, z), 8 * z ** 3 - 12 * z)


def test_hermite_rejects_bad_input():
    with pytest.raises(DomainError):
        hermite(-1, 0.5)
    with pytest.raises(DomainError):
        hermite(2, float("nan"))


def test_hermite_generating_function():
    rng = np.random.default_rng(0)
    t = 0.1
    for x in rng.uniform(-3, 3, size=20):
        series = sum(hermite(k, x) * t ** k / math.factorial(k) for k in range(31))
        assert abs(series - math.exp(2 * x * t - t * t)) <= 1e-8


def test_hyp2f1_examples():
    for n in range(8):
        assert hyp2f1_terminating(n, 0.0) == 1
    assert hyp2f1_terminating(0, 5.0) == 1


def _naive(n, z):
    # direct factorial form of the terminating sum
    return sum(
        Fraction(math.factorial(n), math.factorial(n - 2 * l) * math.factorial(l) ** 2)
        * (z / 4) ** l
        for l in range(n // 2 + 1)
    )


def test_hyp2f1_n4_exact():
    z = Fraction(3, 10)
    assert hyp2f1_terminating(4, z) == _naive(4, z)
    assert hyp2f1_terminating(4, 0.3) == pytest.approx(float(_naive(4, z)), rel=1e-15)


@pytest.mark.parametrize("n", range(13))
def test_hyp2f1_exact_rationals(n):
    for z in (Fraction(0), Fraction(1, 7), Fraction(5, 2), Fraction(13)):
        assert hyp2f1_terminating(n, z) == _naive(n, z)


@given(st.integers(0, 12), st.floats(0, 20))
@settings(max_examples=200, deadline=None)
def test_hyp2f1_matches_scipy(n, z):
    expected = special.hyp2f1((1 - n) / 2, -n / 2, 1, z)
    assert math.isclose(hyp2f1_terminating(n, z), expected, rel_tol=1e-10, abs_tol=1e-12)


def test_hyp2f1_rejects_negative_n():
    with pytest.raises(DomainError):
        hyp2f1_terminating(-1, 0.5)


def test_integrate_gaussian():
    grid = QuadratureGrid.for_envelope(1.0)
    assert abs(integrate_line(lambda x: np.exp(-x * x), grid) - math.sqrt(math.pi)) <= 1e-10
    assert abs(integrate_line(lambda x: x * np.exp(-x * x), grid)) <= 1e-12


def test_integrate_h2_norm():
    grid = QuadratureGrid.for_envelope(1.0)
    value = integrate_line(lambda x: hermite(2, x) ** 2 * np.exp(-x * x), grid)
    assert abs(value - 8 * math.sqrt(math.pi)) <= 1e-10


def test_hermite_orthogonality():
    grid = QuadratureGrid.for_envelope(1.0)
    for n in range(7):
        for m in range(7):
            value = integrate_line(lambda x: hermite(n, x) * hermite(m, x) * np.exp(-x * x), grid)
            expected = 2 ** n * math.factorial(n) * math.sqrt(math.pi) if n == m else 0.0
            assert abs(value - expected) <= 1e-9


def test_integrate_vector_valued():
    grid = QuadratureGrid.for_envelope(1.0)
    values = integrate_line(lambda x: np.stack([np.exp(-x * x), x * x * np.exp(-x * x)], axis=1),
                            grid)
    assert np.allclose(values, [math.sqrt(math.pi), math.sqrt(math.pi) / 2], atol=1e-12)


def test_integrate_widens_narrow_window():
    # the window is sized for a much narrower Gaussian than the integrand
    grid = QuadratureGrid(half_width=3.0, points=512)
    assert abs(integrate_line(lambda x: np.exp(-x * x / 4), grid) - 2 * math.sqrt(math.pi)) < 1e-10


def test_integrate_reports_non_convergence():
    grid = QuadratureGrid(half_width=5.0, points=64)
    with pytest.raises(ConvergenceError):
        integrate_line(lambda x: np.cos(400 * x) * np.exp(-x * x / 100), grid, max_refinements=1)


def test_db_conversion():
    assert db_from_r(0) == 0
    assert abs(db_from_r(0.5) - 4.3) <= 0.05
    assert abs(db_from_r(1.19) - 10.3) <= 0.05
    assert math.isclose(r_from_db(db_from_r(0.731)), 0.731)


def test_grid_validation():
    with pytest.raises(DomainError):
        QuadratureGrid(half_width=-1.0)
    with pytest.raises(DomainError):
        QuadratureGrid.for_envelope(0.0)


def test_points_env_var(monkeypatch):
    monkeypatch.setenv(POINTS_ENV_VAR, "512")
    assert default_points() == 512
    assert QuadratureGrid.for_envelope(1.0).points == 512
    monkeypatch.setenv(POINTS_ENV_VAR, "lots")
    with pytest.raises(DomainError):
        default_points()
