"""
Tests for the basis functions of the √n interpolation formula.
"""

import logging
import math

import numpy as np
import pytest

from perturbed_interp.errors import InvalidArgumentError
from perturbed_interp.rvbasis import (
    BasisSign,
    RVBasis,
    decay_profile,
    fourier_check,
    gn_construct,
    kernel_coefficients,
    origin_values,
    verify_generating,
    working_dps,
)

logger = logging.getLogger(__name__)


def test_g0():
    """g_0^+ = θ³ and g_0^− = 0."""
    plus = gn_construct(0, BasisSign.PLUS, order=8)
    assert [plus.g_series.coefficient(k) for k in range(5)] == [1, 6, 12, 8, 6]
    assert plus.poly == (1,)

    minus = gn_construct(0, "minus", order=8)
    assert minus.g_series.is_zero
    assert minus.poly == (0,)
    logger.info("✓ g_0^±")


def test_normalization():
    """g_n^± = q^{−n} + O(q), with no q⁰ term for the plus sign."""
    for n in range(1, 6):
        plus = gn_construct(n, "plus", order=n + 12)
        assert plus.g_series.lead == -n
        assert plus.g_series.coefficient(-n) == 1
        assert all(plus.g_series.coefficient(k) == 0 for k in range(-n + 1, 1))

        minus = gn_construct(n, "minus", order=n + 12)
        assert minus.g_series.lead == -n
        assert all(minus.g_series.coefficient(k) == 0 for k in range(-n + 1, 0))
    logger.info("✓ Normalization of g_n^± for n ≤ 5")

    # b_n^−(0) = a_n(0) − â_n(0) = −2 at nonzero squares
    for n in (1, 4):
        assert gn_construct(n, "minus", order=n + 12).g_series.coefficient(0) == -2
    logger.info("✓ Constant term of g_n^− at squares")


def test_polynomials_match_kernels():
    """The polynomials in 1/J agree with the expansion of the generating kernels."""
    for sign in BasisSign:
        for n in range(0, 5):
            assert kernel_coefficients(n, sign) == gn_construct(n, sign).poly, (n, sign)
    logger.info("✓ Kernel coefficients reproduce P_n^±")


def test_basis_serialization():
    """A basis object survives to_dict/from_dict with exact coefficients."""
    basis = gn_construct(3, "plus", order=16)
    restored = RVBasis.from_dict(basis.to_dict())
    assert restored.poly == basis.poly
    assert restored.g_series.lead == -3
    assert list(restored.g_series.coeffs) == list(basis.g_series.coeffs)

    with pytest.raises(InvalidArgumentError):
        RVBasis.from_dict({"n": 3})


def test_construction_errors():
    """Bad indices and orders are rejected."""
    with pytest.raises(InvalidArgumentError):
        gn_construct(5, "plus", order=8)
    with pytest.raises(InvalidArgumentError):
        gn_construct(-1, "plus")
    with pytest.raises(ValueError):
        gn_construct(1, "neutral")
    with pytest.raises(InvalidArgumentError):
        kernel_coefficients(-2, "minus")
    logger.info("✓ Construction errors")


def test_origin_values():
    assert origin_values(0) == (0.5, 0.5)
    assert origin_values(4) == (-1.0, 1.0)
    assert origin_values(9) == (-1.0, 1.0)
    assert origin_values(3) == (0.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        origin_values(-1)


def test_working_precision():
    assert working_dps(0) == 30
    assert working_dps(10) == 30 + 14


@pytest.mark.slow
def test_interpolation_property(small_basis):
    """a_n(√m) = δ_{nm}, â_n(√m) = 0 for m ≥ 1, and the origin table at m = 0."""
    for m in range(0, small_basis.n_max + 1):
        values = small_basis.values_at_s(float(m))
        for n in range(small_basis.n_max + 1):
            expected = origin_values(n) if m == 0 else (float(n == m), 0.0)
            assert abs(values.a[n] - expected[0]) < 1e-6, (n, m)
            assert abs(values.a_hat[n] - expected[1]) < 1e-6, (n, m)
    logger.info("✓ Interpolation property at √m")


@pytest.mark.slow
def test_routes_agree(small_basis):
    """Contour and Laplace routes give the same values where both apply."""
    contour = small_basis.values_at_s(20.3, route="contour")
    laplace = small_basis.values_at_s(20.3, route="laplace")
    np.testing.assert_allclose(laplace.plus, contour.plus, atol=1e-6)
    np.testing.assert_allclose(laplace.minus, contour.minus, atol=1e-6)

    near = small_basis.values_at_s(4.2, route="laplace")
    assert np.isnan(near.plus[4]) and np.isfinite(near.plus[3])
    logger.info("✓ Contour and Laplace routes agree")


@pytest.mark.slow
def test_gaussian_interpolation(small_basis):
    """f(x) = Σ a_n(x) f(√n) + â_n(x) f̂(√n) for f = e^{−πx²}."""
    n = np.arange(small_basis.n_max + 1)
    samples = np.exp(-np.pi * n)
    for x in (0.0, 0.7, 1.9):
        values = small_basis.values_at(x)
        approx = float(values.a @ samples + values.a_hat @ samples)
        assert approx == pytest.approx(math.exp(-math.pi * x * x), abs=1e-6)
    logger.info("✓ Gaussian reproduced from its samples")


def test_evaluation_errors(small_basis):
    with pytest.raises(InvalidArgumentError):
        small_basis.values_at_s(-1.0)
    with pytest.raises(InvalidArgumentError):
        small_basis.values_at_s(1.0, route="simpson")
    with pytest.raises(InvalidArgumentError):
        small_basis.basis(small_basis.n_max + 1, "plus")


@pytest.mark.slow
def test_fourier_eigenrelation(small_basis):
    """b_n^± are eigenfunctions of the Fourier transform with eigenvalue ±1."""
    report = fourier_check(n_max=3, xi_max=3.0, xi_step=0.5, evaluator=small_basis)
    assert report.passed, report.residuals
    logger.info(f"✓ Fourier residual {report.max_residual:.2e}")


@pytest.mark.slow
def test_decay_profile(small_basis):
    """Normalized decay ratios stay within a factor of ten of their median."""
    report = decay_profile(range(1, 13), c=0.5, evaluator=small_basis)
    assert report.passed, report.detail
    assert len(report.ratios) == 12
    logger.info(f"✓ Decay ratios, median {report.median:.3g}")

    with pytest.raises(InvalidArgumentError):
        decay_profile([0, 1])
    with pytest.raises(InvalidArgumentError):
        decay_profile([1, 2], c=0.0)


@pytest.mark.slow
def test_generating_identity(small_basis):
    """Σ b_n^±(x) e^{iπnτ} matches the contour integral of the kernel for Im τ > 1."""
    for sign in BasisSign:
        residual = verify_generating(sign, 0.3 + 2.0j, 0.8, 12, evaluator=small_basis)
        assert residual < 1e-6, sign
    logger.info("✓ Generating identity at τ = 0.3 + 2i")

    with pytest.raises(InvalidArgumentError):
        verify_generating("plus", 0.5j, 0.8, 12, evaluator=small_basis)
