"""
Discrete Hilbert-transform kernels and their closed-form norm constants.

H^p_ε(a)_n = Σ_{k≠n} σ(n,k) a_k / (n + ε_n − k)^p, with σ = (−1)^{n−k} when the
alternating factor is on, and the comparison kernels S^q(a)_n = Σ_{k≠n} a_k/|n−k|^q.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NotImplementedKindError, RangeViolationError
from .linop import TruncatedOperator
from .seqspace import IndexWindow, PerturbationProfile

logger = logging.getLogger(__name__)

# max_{[0,1]} |B_p| for the Bernoulli polynomials B_1, B_2, B_3
BERNOULLI_MAXIMA = {1: 0.5, 2: 1.0 / 6.0, 3: 1.0 / (12.0 * math.sqrt(3.0))}

ZETA_TERMS = 1000


@dataclass(frozen=True)
class HilbertKernelSpec:
    """Order, jitter and sign convention of a perturbed Hilbert kernel."""

    order: int
    profile: PerturbationProfile
    alternating: bool = False

    def __post_init__(self):
        if self.order < 1:
            raise InvalidArgumentError(f"Kernel order must be ≥ 1, got {self.order}")


def heps_assemble(spec: HilbertKernelSpec, w: IndexWindow) -> TruncatedOperator:
    """Truncate H^p_ε to the window ``w``.

    Raises:
        RangeViolationError: if sup|ε_n| ≥ 1, where denominators may vanish
    """
    if spec.profile.L >= 1:
        raise RangeViolationError(
            f"Hilbert kernels need sup|ε_n| < 1, got L={spec.profile.L}", {"L": spec.profile.L}
        )
    eps = spec.profile.on(w)
    n = w.indices()
    diff = (n[:, None] - n[None, :]).astype(float)
    off_diagonal = diff != 0
    denominator = np.where(off_diagonal, diff + eps[:, None], 1.0)
    entries = np.where(off_diagonal, 1.0 / denominator**spec.order, 0.0)
    if spec.alternating:
        entries *= np.where(diff.astype(int) % 2 == 0, 1.0, -1.0)
    logger.debug(f"Assembled H^{spec.order} on [{w.lo}, {w.hi}] (L={spec.profile.L:.3g})")
    return TruncatedOperator(w, w, entries)


def sq_assemble(q: int, w: IndexWindow) -> TruncatedOperator:
    """Truncate S^q, entries 1/|n−k|^q off the diagonal."""
    if q <= 0:
        raise InvalidArgumentError(f"S^q needs q > 0, got {q}")
    if q == 1:
        logger.warning("S^1 is unbounded on ℓ²(ℤ); only its truncations are finite")
    n = w.indices()
    diff = np.abs(n[:, None] - n[None, :]).astype(float)
    entries = np.where(diff > 0, 1.0 / np.where(diff > 0, diff, 1.0) ** q, 0.0)
    return TruncatedOperator(w, w, entries)


def hp0_norm(p: int) -> float:
    """‖H^p_0‖ = (2π)^p b_p / p! with b_p the maximum of |B_p| on [0, 1]."""
    if p not in BERNOULLI_MAXIMA:
        raise NotImplementedKindError(f"Closed-form norm only for p ∈ {{1, 2, 3}}, got {p}")
    return (2.0 * math.pi) ** p * BERNOULLI_MAXIMA[p] / math.factorial(p)


def zeta_direct(q: float, terms: int = ZETA_TERMS) -> float:
    """ζ(q) by direct summation with an Euler–Maclaurin tail."""
    if q <= 1:
        raise InvalidArgumentError(f"ζ(q) diverges for q ≤ 1, got {q}")
    k = np.arange(1, terms, dtype=float)
    K = float(terms)
    head = float(np.sum(k ** (-q)))
    tail = (
        K ** (1.0 - q) / (q - 1.0)
        + 0.5 * K ** (-q)
        + q * K ** (-q - 1.0) / 12.0
        - q * (q + 1.0) * (q + 2.0) * K ** (-q - 3.0) / 720.0
    )
    return head + tail


def sq_norm(q: int) -> float:
    """‖S^q‖ = 2ζ(q)."""
    if q < 2:
        raise InvalidArgumentError(f"S^q is bounded only for q ≥ 2, got {q}")
    return 2.0 * zeta_direct(q)


def comparison_bound(p: int, L: float) -> float:
    """Bound on ‖H^p_0 − H^p_ε‖: ((1+L)^p − 1)/(1−L)^p · ‖S^{p+1}‖."""
    if not 0 <= L < 1:
        raise RangeViolationError(f"L must lie in [0, 1), got {L}", {"L": L})
    return ((1.0 + L) ** p - 1.0) / (1.0 - L) ** p * sq_norm(p + 1)


def gamma_p(p: int, L: float) -> float:
    """γ_p(L) = ‖H^p_0‖ + ((1+L)^p − 1)/(1−L)^p ‖S^{p+1}‖, a bound on ‖H^p_ε‖."""
    if not 0 <= L < 1:
        raise RangeViolationError(f"L must lie in [0, 1), got {L}", {"L": L})
    return hp0_norm(p) + comparison_bound(p, L)
