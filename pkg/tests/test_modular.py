"""
Tests for exact q-series, fundamental-domain reduction and theta/λ/J evaluation.
"""

import logging
import math
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mpf

from perturbed_interp.errors import InvalidArgumentError
from perturbed_interp.modular import (
    QSeries,
    ThetaKind,
    UpperHalfPoint,
    d0_eval,
    d0_vanishing_check,
    lambda_J_eval,
    modular_series,
    modular_sign_check,
    reduce_to_fundamental,
    theta4_series,
    theta_eval,
    theta_imaginary_axis,
    transformation_residuals,
)

logger = logging.getLogger(__name__)


def test_lambda_coefficients():
    """λ = 16q − 128q² + 704q³ + …"""
    lam = modular_series(8).lam
    assert [lam.coefficient(k) for k in range(0, 4)] == [0, 16, -128, 704]
    logger.info("✓ λ q-expansion")


def test_theta_and_J_coefficients():
    """θ = 1 + 2q + 2q⁴ + …, J = q − 24q² + …, 1/J = q⁻¹ + 24 + …"""
    series = modular_series(10)
    assert [series.theta.coefficient(k) for k in range(6)] == [1, 2, 0, 0, 2, 0]
    assert series.J.coefficient(1) == 1
    assert series.J.coefficient(2) == -24
    assert series.inv_J.lead == -1
    assert series.inv_J.coefficient(-1) == 1
    assert series.inv_J.coefficient(0) == 24

    # Θ3⁴ = Θ2⁴ + Θ4⁴ ⇔ λ + Θ4⁴/θ⁴ = 1
    rest = theta4_series(10) ** 4 * (series.theta**4).invert()
    total = series.lam + rest
    assert total.coefficient(0) == 1
    assert all(total.coefficient(k) == 0 for k in range(1, 9))
    logger.info("✓ θ, J and Jacobi identity as q-series")


def test_qseries_arithmetic():
    """Exact inversion, powers and substitution."""
    one_minus_q = QSeries.from_terms({0: 1, 1: -1}, 6)
    geometric = one_minus_q.invert()
    assert all(geometric.coefficient(k) == 1 for k in range(7))
    assert (one_minus_q**-1).coefficient(5) == 1
    assert (one_minus_q**2).coefficient(1) == -2

    halved = one_minus_q.scale(Fraction(1, 2))
    assert halved.coefficient(1) == Fraction(-1, 2)
    assert (one_minus_q * Fraction(1, 3)).coefficient(0) == Fraction(1, 3)
    assert QSeries.from_terms({}, 4).is_zero
    logger.info("✓ q-series arithmetic")

    with pytest.raises(InvalidArgumentError):
        one_minus_q.coefficient(7)
    with pytest.raises(InvalidArgumentError):
        one_minus_q.scale(0)
    with pytest.raises(InvalidArgumentError):
        QSeries.from_terms({}, 4).invert()
    with pytest.raises(InvalidArgumentError):
        QSeries(0, [1, 2], 5)


def test_reduction():
    """Reduction lands in {|z| ≥ 1, |Re z| ≤ 1} and replays to the start."""
    for tau in (0.3 + 0.01j, -0.77 + 0.05j, 5.2 + 0.4j, 0.1 + 2.0j):
        result = reduce_to_fundamental(tau)
        image = result.tau_prime.to_complex()
        assert abs(image) >= 1.0 - 1e-12
        assert abs(image.real) <= 1.0 + 1e-12
        assert result.replay() == pytest.approx(tau, abs=1e-10)
        assert result.I == pytest.approx(image.imag)
        assert result.steps == len(result.word) - 1
    assert reduce_to_fundamental(0.1 + 2.0j).steps == 0
    logger.info("✓ Fundamental-domain reduction")

    with pytest.raises(InvalidArgumentError):
        UpperHalfPoint(0.0, -1.0)


def test_special_values():
    """Θ3(i) = π^{1/4}/Γ(3/4), λ(i) = 1/2, J(i) = 1/64."""
    assert theta_eval(ThetaKind.THETA3, 1j).real == pytest.approx(
        math.pi**0.25 / math.gamma(0.75), abs=1e-14
    )
    lam, J = lambda_J_eval(1j)
    assert abs(lam - 0.5) < 1e-12
    assert abs(J - 1.0 / 64.0) < 1e-12
    logger.info("✓ Special values at i")


@pytest.mark.parametrize("z", [-0.95 + 0.6j, -1.0 + 0.4j, 0.97 + 0.5j, 0.2 + 1.1j, 0.4 + 0.05j])
def test_theta_branch(z):
    """Θ2 carries e^{iπz/4} for any real part, matching the two-sided sums."""
    n = np.arange(-60, 61)
    expected = {
        ThetaKind.THETA2: np.sum(np.exp(1j * np.pi * z * (n + 0.5) ** 2)),
        ThetaKind.THETA3: np.sum(np.exp(1j * np.pi * z * n**2)),
        ThetaKind.THETA4: np.sum((-1.0) ** n * np.exp(1j * np.pi * z * n**2)),
    }
    for kind, value in expected.items():
        assert abs(theta_eval(kind, z) - value) < 1e-12 * max(1.0, abs(value))
    logger.info(f"✓ Theta values at {z}")


def test_theta_imaginary_axis():
    """Real values on the imaginary axis, with Θ2(i) = Θ4(i)."""
    t2, t3, t4 = theta_imaginary_axis(1)
    assert isinstance(t3, mpf)
    assert float(t3) == pytest.approx(math.pi**0.25 / math.gamma(0.75), abs=1e-14)
    assert float(t2) == pytest.approx(float(t4), abs=1e-14)
    assert float(t3**4) == pytest.approx(float(t2**4 + t4**4), abs=1e-13)


def test_theta_identity_random_points():
    """Θ3⁴ = Θ2⁴ + Θ4⁴ at 20 points with Im z ∈ [0.3, 3]."""
    rng = np.random.default_rng(2)
    points = rng.uniform(-1.0, 1.0, 20) + 1j * rng.uniform(0.3, 3.0, 20)
    assert transformation_residuals(list(points))["jacobi"] < 1e-12
    logger.info("✓ Jacobi identity at random points")


def test_transformation_laws_near_real_axis():
    """Points with small imaginary part go through reduction."""
    residuals = transformation_residuals([0.2 + 0.1j, -0.45 + 0.08j, 0.93 + 0.2j])
    for law, value in residuals.items():
        assert value < 1e-8, law
    logger.info("✓ Transformation laws near the real axis")


def test_sign_check():
    """θ³ ≥ 0, 1 − 2λ ≥ 1 and 1/J < 0 decreasing along 1 + it."""
    report = modular_sign_check([0.25, 0.5, 1.0, 2.0, 4.0, 8.0])
    assert report.passed, report.violations
    assert all(v < 0 for v in report.inv_J)
    logger.info("✓ Sign facts along 1 + it")

    with pytest.raises(InvalidArgumentError):
        modular_sign_check([1.0, 0.5])
    with pytest.raises(InvalidArgumentError):
        modular_sign_check([])


def test_odd_special_function():
    """d_0^+ vanishes at √n and has slope 1 at the origin."""
    report = d0_vanishing_check(32)
    assert report["passed"]
    assert d0_eval(0.0) == 0.0
    assert d0_eval(np.array([1.0, 2.0])).shape == (2,)
    logger.info("✓ Odd special function")
