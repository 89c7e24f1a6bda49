"""
Tests for truncated operators, norm certificates and the residual-checked solver.
"""

import logging

import numpy as np
import pytest

from perturbed_interp.errors import ConvergenceFailure, InvalidArgumentError, SolveFailure
from perturbed_interp.linop import (
    NormMethod,
    TruncatedOperator,
    apply,
    hs_norm,
    neumann_certificate,
    op_norm_power,
    schur_bound,
    solve,
    solve_with_residual,
)
from perturbed_interp.seqspace import IndexWindow, RealSequence

logger = logging.getLogger(__name__)


def _operator(entries) -> TruncatedOperator:
    entries = np.asarray(entries, dtype=float)
    w = IndexWindow(0, entries.shape[0] - 1)
    return TruncatedOperator(w, w, entries)


def test_shape_checks():
    """Entry arrays must match the windows; A − I needs a square truncation."""
    w = IndexWindow.symmetric(1)
    with pytest.raises(InvalidArgumentError):
        TruncatedOperator(w, w, np.zeros((2, 3)))
    rect = TruncatedOperator(w, IndexWindow.symmetric(2), np.zeros((3, 5)))
    with pytest.raises(InvalidArgumentError):
        rect.minus_identity()
    block = TruncatedOperator.identity(w, blocks=2)
    assert block.shape == (6, 6)
    assert not np.any(block.minus_identity().entries)
    logger.info("✓ Shape checks")


def test_to_frame():
    """Only nonzero entries are listed, with their indices."""
    A = TruncatedOperator.identity(IndexWindow.symmetric(2))
    frame = A.to_frame()
    assert len(frame) == 5
    assert list(frame["row"]) == list(frame["col"]) == [-2, -1, 0, 1, 2]
    logger.info("✓ Operator frame")


def test_power_iteration():
    """Largest singular value of a diagonal matrix."""
    A = _operator(np.diag([3.0, 1.0, 0.5]))
    certificate = op_norm_power(A)
    assert certificate.method == NormMethod.POWER_ITERATION
    assert certificate.bound == pytest.approx(3.0, rel=1e-8)
    assert op_norm_power(_operator(np.zeros((2, 2)))).bound == 0.0
    logger.info("✓ Power iteration")

    with pytest.raises(InvalidArgumentError):
        op_norm_power(A, tol=0.0)
    with pytest.raises(ConvergenceFailure) as excinfo:
        op_norm_power(A, max_iter=1)
    assert 0.0 < excinfo.value.best_estimate <= 3.0
    logger.info("✓ Power iteration failure modes")


def test_norm_bounds_dominate_spectral_norm():
    """Hilbert–Schmidt and Schur bounds sit above ‖A‖₂."""
    rng = np.random.default_rng(3)
    A = _operator(rng.standard_normal((6, 6)))
    spectral = np.linalg.norm(A.entries, 2)

    hs = hs_norm(A)
    assert hs.bound == pytest.approx(np.linalg.norm(A.entries, "fro"))
    assert hs.bound >= spectral

    ones = np.ones(6)
    schur = schur_bound(A, ones, ones)
    column_sum = np.max(np.sum(np.abs(A.entries), axis=0))
    row_sum = np.max(np.sum(np.abs(A.entries), axis=1))
    assert schur.bound == pytest.approx(np.sqrt(column_sum * row_sum))
    assert schur.bound >= spectral
    assert set(schur.detail) >= {"lambda", "mu", "argmax_col", "argmax_row"}
    logger.info("✓ Norm bounds dominate the spectral norm")

    with pytest.raises(InvalidArgumentError):
        schur_bound(A, -ones, ones)
    with pytest.raises(InvalidArgumentError):
        schur_bound(A, np.ones(5), ones)


def test_neumann_certificate():
    """Bound below 1 certifies invertibility with ‖A⁻¹‖ ≤ 1/(1 − bound)."""
    A = _operator(np.eye(2))
    ok = neumann_certificate(A, hs_norm(_operator(0.25 * np.eye(2))))
    assert ok.invertible
    assert ok.inverse_norm_bound == pytest.approx(1.0 / (1.0 - np.sqrt(0.125)))

    failed = neumann_certificate(A, hs_norm(_operator(np.eye(2))))
    assert not failed.invertible
    assert failed.inverse_norm_bound is None
    logger.info("✓ Neumann certificate")


def test_solve():
    """Solutions keep the column window and report a small residual."""
    w = IndexWindow.symmetric(1)
    A = TruncatedOperator(w, w, [[2.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 4.0]])
    b = RealSequence(w, [2.0, 3.0, 8.0])
    solution = solve_with_residual(A, b)
    assert solution.x.window == w
    np.testing.assert_allclose(solution.x.values, [1.0, 2.0, 2.0])
    assert solution.residual < 1e-14
    np.testing.assert_allclose(apply(A, solution.x).values, b.values)
    logger.info("✓ Residual-checked solve")

    with pytest.raises(SolveFailure):
        solve(_operator([[1.0, 1.0], [1.0, 1.0]]), np.array([1.0, 0.0]))
    logger.info("✓ Singular system reported")
