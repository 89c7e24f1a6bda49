"""
Truncated dense operators on sequence spaces.

A ``TruncatedOperator`` is a finite window of an infinite matrix. Block operators
(the 2×2 systems of the Vaaler and Fourier-interpolation problems) keep the
window of a single block and a ``blocks`` count; their vectors are the blocks
stacked one after the other.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
import scipy.linalg

from .errors import ConvergenceFailure, InvalidArgumentError, SolveFailure
from .seqspace import IndexWindow, RealSequence

logger = logging.getLogger(__name__)


class NormMethod(str, Enum):
    """How a norm bound was obtained."""

    CLOSED_FORM = "closed_form"
    POWER_ITERATION = "power_iteration"
    SCHUR = "schur"
    HILBERT_SCHMIDT = "hilbert_schmidt"


@dataclass
class NormCertificate:
    """A bound on an operator norm, tagged with the method that produced it."""

    method: NormMethod
    bound: float
    detail: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.method = NormMethod(self.method)
        if not self.bound >= 0:
            raise InvalidArgumentError(f"Norm bound must be nonnegative, got {self.bound}")

    def to_dict(self) -> Dict[str, Any]:
        return {"method": self.method.value, "bound": float(self.bound), "detail": self.detail}


@dataclass
class NeumannCertificate:
    """Invertibility of A from a bound on ‖I − A‖."""

    invertible: bool
    inverse_norm_bound: Optional[float]
    bound: float
    method: NormMethod

    def to_dict(self) -> Dict[str, Any]:
        return {
            "invertible": self.invertible,
            "inverse_norm_bound": self.inverse_norm_bound,
            "bound": float(self.bound),
            "method": self.method.value,
        }


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Finite section of an infinite matrix.

    ``entries[i, j]`` couples row ``row_window.lo + i`` to column ``col_window.lo + j``
    inside each block.
    """

    row_window: IndexWindow
    col_window: IndexWindow
    entries: np.ndarray
    blocks: int = 1

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", entries)
        expected = (self.blocks * self.row_window.size, self.blocks * self.col_window.size)
        if entries.shape != expected:
            raise InvalidArgumentError(
                f"Entry array has shape {entries.shape}, windows require {expected}"
            )

    @classmethod
    def identity(cls, window: IndexWindow, blocks: int = 1) -> "TruncatedOperator":
        return cls(window, window, np.eye(blocks * window.size), blocks)

    @classmethod
    def zeros(cls, row_window: IndexWindow, col_window: IndexWindow) -> "TruncatedOperator":
        return cls(row_window, col_window, np.zeros((row_window.size, col_window.size)))

    @classmethod
    def from_blocks(cls, window: IndexWindow, blocks: List[List[np.ndarray]]) -> "TruncatedOperator":
        """Assemble a square block operator from an n×n nested list of arrays."""
        return cls(window, window, np.block(blocks), len(blocks))

    @property
    def shape(self):
        return self.entries.shape

    @property
    def is_square(self) -> bool:
        return self.row_window == self.col_window

    def minus_identity(self) -> "TruncatedOperator":
        """A − I; requires a square truncation."""
        if not self.is_square:
            raise InvalidArgumentError("A − I needs row_window == col_window")
        return TruncatedOperator(
            self.row_window, self.col_window, self.entries - np.eye(self.shape[0]), self.blocks
        )

    def to_frame(self, drop_zeros: bool = True) -> pd.DataFrame:
        """(row, col, value) triples; block operators also carry row_block/col_block."""
        rows, cols = np.indices(self.shape)
        frame = pd.DataFrame(
            {
                "row": rows.ravel() % self.row_window.size + self.row_window.lo,
                "col": cols.ravel() % self.col_window.size + self.col_window.lo,
                "row_block": rows.ravel() // self.row_window.size,
                "col_block": cols.ravel() // self.col_window.size,
                "value": self.entries.ravel(),
            }
        )
        if drop_zeros:
            frame = frame[frame["value"] != 0.0].reset_index(drop=True)
        if self.blocks == 1:
            frame = frame.drop(columns=["row_block", "col_block"])
        return frame


def _column_vector(A: TruncatedOperator, a: Union[RealSequence, np.ndarray]) -> np.ndarray:
    if isinstance(a, RealSequence):
        if A.blocks != 1:
            raise InvalidArgumentError("Block operators take stacked arrays")
        values = np.zeros(A.col_window.size)
        for j, n in enumerate(A.col_window.indices()):
            values[j] = a[int(n)]
        return values
    values = np.asarray(a, dtype=float)
    if values.shape != (A.shape[1],):
        raise InvalidArgumentError(f"Vector of shape {values.shape} for operator {A.shape}")
    return values


def apply(
    A: TruncatedOperator, a: Union[RealSequence, np.ndarray]
) -> Union[RealSequence, np.ndarray]:
    """Matrix-vector product on the row window (missing entries of ``a`` read as 0)."""
    product = A.entries @ _column_vector(A, a)
    if isinstance(a, RealSequence):
        return RealSequence(A.row_window, product)
    return product


def op_norm_power(A: TruncatedOperator, tol: float = 1e-10, max_iter: int = 1000) -> NormCertificate:
    """Largest singular value by power iteration on AᵀA from the all-ones vector.

    Args:
        A: Operator to estimate
        tol: Relative change of the estimate that stops the iteration
        max_iter: Iteration cap

    Returns:
        Certificate with method=power_iteration

    Raises:
        ConvergenceFailure: if ``max_iter`` is exhausted; carries the best estimate
    """
    if tol <= 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    M = A.entries
    if not np.any(M):
        return NormCertificate(NormMethod.POWER_ITERATION, 0.0, {"iterations": 0, "residual": 0.0})

    v = np.ones(M.shape[1])
    if not np.any(M @ v):
        # all-ones lies in the kernel; fall back to a deterministic ramp
        v = np.linspace(1.0, 2.0, M.shape[1])
    v /= np.linalg.norm(v)

    sigma = 0.0
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        w = M @ v
        u = M.T @ w
        sigma_new = float(np.linalg.norm(w))
        u_norm = float(np.linalg.norm(u))
        residual = float(np.linalg.norm(u - sigma_new**2 * v))
        v = u / u_norm
        if abs(sigma_new - sigma) <= tol * sigma_new:
            logger.debug(f"Power iteration converged after {iteration} steps: {sigma_new:.12g}")
            return NormCertificate(
                NormMethod.POWER_ITERATION,
                sigma_new,
                {"iterations": iteration, "residual": residual},
            )
        sigma = sigma_new

    raise ConvergenceFailure(
        f"Power iteration did not reach tol={tol} in {max_iter} steps",
        {"best_estimate": sigma, "iterations": max_iter, "residual": residual},
    )


def hs_norm(A: TruncatedOperator) -> NormCertificate:
    """Hilbert–Schmidt norm: square root of the sum of squared entries."""
    bound = float(np.sqrt(np.sum(A.entries**2)))
    return NormCertificate(NormMethod.HILBERT_SCHMIDT, bound, {"shape": list(A.shape)})


def _weights(w: Union[RealSequence, np.ndarray], size: int, name: str) -> np.ndarray:
    values = w.values if isinstance(w, RealSequence) else np.asarray(w, dtype=float)
    if values.shape != (size,):
        raise InvalidArgumentError(f"Weight {name} has shape {values.shape}, expected ({size},)")
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise InvalidArgumentError(f"Schur weight {name} must be strictly positive")
    return values


def schur_bound(
    A: TruncatedOperator,
    p: Union[RealSequence, np.ndarray],
    q: Union[RealSequence, np.ndarray],
) -> NormCertificate:
    """Schur test with column weights ``p`` and row weights ``q``.

    λ = max_j (Σ_i |a_ij| q_i)/p_j, μ = max_i (Σ_j |a_ij| p_j)/q_i, bound √(λμ).
    """
    M = np.abs(A.entries)
    p = _weights(p, M.shape[1], "p")
    q = _weights(q, M.shape[0], "q")

    column_ratios = (q @ M) / p
    row_ratios = (M @ p) / q
    lam = float(np.max(column_ratios))
    mu = float(np.max(row_ratios))
    detail = {
        "lambda": lam,
        "mu": mu,
        "argmax_col": int(np.argmax(column_ratios)),
        "argmax_row": int(np.argmax(row_ratios)),
    }
    return NormCertificate(NormMethod.SCHUR, float(np.sqrt(lam * mu)), detail)


def neumann_certificate(A: TruncatedOperator, norm_bound: NormCertificate) -> NeumannCertificate:
    """Invertibility of ``A`` from a certificate for ‖I − A‖ (Neumann series)."""
    bound = norm_bound.bound
    if bound < 1:
        return NeumannCertificate(True, 1.0 / (1.0 - bound), bound, norm_bound.method)
    logger.info(f"Neumann series not certified: ‖I − A‖ ≤ {bound:.6g}")
    return NeumannCertificate(False, None, bound, norm_bound.method)


@dataclass
class Solution:
    """Result of a direct solve with its relative residual."""

    x: Union[RealSequence, np.ndarray]
    residual: float


def solve_with_residual(
    A: TruncatedOperator, b: Union[RealSequence, np.ndarray], tol: float = 1e-10
) -> Solution:
    """Solve A x = b by pivoted LU and report ‖Ax − b‖₂/‖b‖₂."""
    if not A.is_square:
        raise InvalidArgumentError("solve needs a square truncation")
    rhs = _column_vector(A, b)
    rhs_norm = float(np.linalg.norm(rhs))
    try:
        lu, piv = scipy.linalg.lu_factor(A.entries, check_finite=True)
        x = scipy.linalg.lu_solve((lu, piv), rhs)
    except (ValueError, np.linalg.LinAlgError) as e:
        raise SolveFailure(f"Factorization failed: {e}", {"residual": None}) from e

    residual = float(np.linalg.norm(A.entries @ x - rhs))
    relative = residual / rhs_norm if rhs_norm > 0 else residual
    if not np.isfinite(relative) or relative > tol:
        raise SolveFailure(
            f"Residual {relative:.3g} exceeds tol={tol}", {"residual": relative, "tol": tol}
        )
    logger.debug(f"Solved {A.shape[0]}×{A.shape[1]} system, relative residual {relative:.3g}")
    if isinstance(b, RealSequence):
        return Solution(RealSequence(A.col_window, x), relative)
    return Solution(x, relative)


def solve(
    A: TruncatedOperator, b: Union[RealSequence, np.ndarray], tol: float = 1e-10
) -> Union[RealSequence, np.ndarray]:
    """Solve A x = b by pivoted LU; residual above ``tol`` raises SolveFailure."""
    return solve_with_residual(A, b, tol).x

