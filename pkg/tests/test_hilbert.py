"""
Tests for the discrete Hilbert kernels and their norm constants.
"""

import logging
import math

import numpy as np
import pytest

from perturbed_interp.errors import (
    InvalidArgumentError,
    NotImplementedKindError,
    RangeViolationError,
)
from perturbed_interp.hilbert import (
    HilbertKernelSpec,
    comparison_bound,
    gamma_p,
    heps_assemble,
    hp0_norm,
    sq_assemble,
    sq_norm,
    zeta_direct,
)
from perturbed_interp.linop import op_norm_power
from perturbed_interp.seqspace import DecayClass, IndexWindow, make_profile

logger = logging.getLogger(__name__)


def test_closed_form_norms():
    """‖H^p_0‖ for p = 1, 2, 3 and ‖S^q‖ = 2ζ(q)."""
    assert abs(hp0_norm(1) - math.pi) < 1e-14
    assert abs(hp0_norm(2) - math.pi**2 / 3.0) < 1e-14
    assert abs(hp0_norm(3) - math.pi**3 / (9.0 * math.sqrt(3.0))) < 1e-14
    logger.info("✓ ‖H^p_0‖ closed forms")

    assert abs(sq_norm(2) - math.pi**2 / 3.0) < 1e-12
    assert abs(sq_norm(4) - math.pi**4 / 45.0) < 1e-12
    assert zeta_direct(3.0) == pytest.approx(1.2020569031595942, rel=1e-13)
    logger.info("✓ ‖S^q‖ closed forms")

    with pytest.raises(NotImplementedKindError):
        hp0_norm(4)
    with pytest.raises(InvalidArgumentError):
        sq_norm(1)
    with pytest.raises(InvalidArgumentError):
        zeta_direct(1.0)


def test_kernel_entries():
    """H^1_ε(a)_n = Σ_{k≠n} a_k/(n + ε_n − k); the diagonal is empty."""
    w = IndexWindow.symmetric(2)
    profile = make_profile(DecayClass.constant(0.1), w)
    H = heps_assemble(HilbertKernelSpec(1, profile), w)
    assert not np.any(np.diag(H.entries))
    # row n = −2 (ε = +0.1), column k = 0
    assert H.entries[0, 2] == pytest.approx(1.0 / (-2.0 + 0.1))

    alternating = heps_assemble(HilbertKernelSpec(1, profile, alternating=True), w)
    assert alternating.entries[0, 1] == pytest.approx(-H.entries[0, 1])
    assert alternating.entries[0, 2] == pytest.approx(H.entries[0, 2])

    S = sq_assemble(2, w)
    assert S.entries[0, 4] == pytest.approx(1.0 / 16.0)
    logger.info("✓ Kernel entries")

    with pytest.raises(RangeViolationError):
        heps_assemble(HilbertKernelSpec(1, make_profile(DecayClass.constant(1.0), w)), w)
    with pytest.raises(InvalidArgumentError):
        HilbertKernelSpec(0, profile)


def test_finite_sections_below_closed_forms():
    """Finite sections of H^2_0 approach π²/3 from below."""
    w = IndexWindow.symmetric(200)
    spec = HilbertKernelSpec(2, make_profile(DecayClass.constant(0.0), w))
    estimate = op_norm_power(heps_assemble(spec, w), tol=1e-12, max_iter=5000).bound
    ratio = estimate / hp0_norm(2)
    assert 0.98 <= ratio <= 1.0 + 1e-12
    logger.info(f"✓ Finite-section ratio for p=2: {ratio:.4f}")


def test_perturbed_norm_within_gamma():
    """‖H^p_ε‖ ≤ γ_p(L) on a truncation."""
    w = IndexWindow.symmetric(100)
    profile = make_profile(DecayClass.constant(0.1), w)
    for p in (1, 2, 3):
        H = heps_assemble(HilbertKernelSpec(p, profile), w)
        assert np.linalg.norm(H.entries, 2) <= gamma_p(p, 0.1)
    assert comparison_bound(2, 0.0) == 0.0
    assert gamma_p(1, 0.0) == pytest.approx(math.pi)
    logger.info("✓ Perturbed norms within γ_p(L)")

    with pytest.raises(RangeViolationError):
        gamma_p(1, 1.0)
