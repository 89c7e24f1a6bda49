"""
Shannon–Whittaker and Vaaler interpolation from jittered samples.

PW_π functions are recovered from f(n + ε_n) by inverting A_ε (sinc kernel);
PW_2π functions are recovered from values and derivatives at n + ε_n by
inverting the 2×2 block system built from Vaaler's kernels

    g(x) = sin²(πx)/(π²x²),   h(x) = sin²(πx)/(π²x).

Both inversions are certified by closed-form bounds on ‖A_ε − I‖.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Optional, Union

import numpy as np
import scipy.optimize
import scipy.special

from .errors import (
    InvalidArgumentError,
    NotCertifiedError,
    PoleError,
    RangeViolationError,
)
from .hilbert import gamma_p
from .linop import (
    NeumannCertificate,
    NormCertificate,
    NormMethod,
    TruncatedOperator,
    neumann_certificate,
    solve_with_residual,
)
from .seqspace import IndexWindow, PerturbationProfile, RealSequence

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# below this |x| the derivative kernels switch to their Taylor series
TAYLOR_RADIUS = 1e-4
TAYLOR_TERMS = 6

# half-width of the extended window carrying b_k in the Shannon→Vaaler conversion
CONVERSION_HALF_WIDTH = 4096


class Band(str, Enum):
    """Paley–Wiener class of the sampled function."""

    PW_PI = "pw_pi"
    PW_2PI = "pw_2pi"


def sinc(x: ArrayLike) -> ArrayLike:
    """Normalized sinc, sin(πx)/(πx), with sinc(0) = 1."""
    return np.sinc(x)


def _sinc_prime(x: np.ndarray) -> np.ndarray:
    small = np.abs(x) < TAYLOR_RADIUS
    safe = np.where(small, 1.0, x)
    out = (np.cos(np.pi * safe) - np.sinc(safe)) / safe
    if np.any(small):
        xs = x[small]
        series = np.zeros_like(xs)
        for k in range(1, TAYLOR_TERMS + 1):
            term = 2 * k * np.pi ** (2 * k) * xs ** (2 * k - 1) / math.factorial(2 * k + 1)
            series += (-1) ** k * term
        out[small] = series
    return out


class VaalerBasis:
    """Vaaler's interpolation kernels for PW_2π and their derivatives.

    g(n) = δ_{n0}, g′(n) = 0, h(n) = 0, h′(n) = δ_{n0} for every integer n.
    """

    @staticmethod
    def g(x: ArrayLike) -> ArrayLike:
        return np.sinc(x) ** 2

    @staticmethod
    def h(x: ArrayLike) -> ArrayLike:
        return np.asarray(x, dtype=float) * np.sinc(x) ** 2

    @staticmethod
    def g_prime(x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        out = 2.0 * np.sinc(x) * _sinc_prime(np.atleast_1d(x)).reshape(x.shape)
        return out if out.ndim else float(out)

    @staticmethod
    def h_prime(x: ArrayLike) -> ArrayLike:
        # h = x·g
        x = np.asarray(x, dtype=float)
        out = np.sinc(x) ** 2 + x * VaalerBasis.g_prime(x)
        return out if np.ndim(out) else float(out)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Samples f(n + ε_n), and f′(n + ε_n) for PW_2π, on the profile window."""

    profile: PerturbationProfile
    values: RealSequence
    derivs: Optional[RealSequence] = None
    band: Band = Band.PW_PI

    def __post_init__(self):
        object.__setattr__(self, "band", Band(self.band))
        if (self.derivs is not None) != (self.band == Band.PW_2PI):
            raise InvalidArgumentError("Derivative samples are required for pw_2pi and only for it")
        if self.values.window != self.profile.window:
            raise InvalidArgumentError("Sample values and profile must share a window")
        if self.derivs is not None and self.derivs.window != self.profile.window:
            raise InvalidArgumentError("Derivative samples and profile must share a window")

    @property
    def window(self) -> IndexWindow:
        return self.profile.window

    @classmethod
    def from_function(
        cls,
        f: Callable[[np.ndarray], np.ndarray],
        profile: PerturbationProfile,
        f_prime: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ) -> "SampleSet":
        """Sample ``f`` (and ``f_prime``) at the jittered nodes n + ε_n."""
        nodes = profile.window.indices() + profile.eps
        values = RealSequence(profile.window, f(nodes))
        if f_prime is None:
            return cls(profile, values)
        derivs = RealSequence(profile.window, f_prime(nodes))
        return cls(profile, values, derivs, Band.PW_2PI)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "band": self.band.value,
            "profile": self.profile.to_dict(),
            "values": [float(v) for v in self.values.values],
        }
        if self.derivs is not None:
            data["derivs"] = [float(v) for v in self.derivs.values]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SampleSet":
        try:
            profile = PerturbationProfile.from_dict(data["profile"])
            values = RealSequence(profile.window, np.asarray(data["values"], dtype=float))
            derivs = None
            if data.get("derivs") is not None:
                derivs = RealSequence(profile.window, np.asarray(data["derivs"], dtype=float))
            band = data.get("band", Band.PW_2PI.value if derivs is not None else Band.PW_PI.value)
            return cls(profile, values, derivs, Band(band))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"Malformed sample set: {e}") from e


@dataclass
class ReconstructionResult:
    """Integer samples recovered from jittered data, with the certificate used."""

    values: RealSequence
    derivs: Optional[RealSequence]
    certificate: NeumannCertificate
    bound: NormCertificate
    residual: float

    def interior(self) -> IndexWindow:
        """Central half of the window, where truncation error is negligible."""
        w = self.values.window
        quarter = w.size // 4
        return IndexWindow(w.lo + quarter, w.hi - quarter, w.kind)


# Shannon sampling ---------------------------------------------------------


def shannon_matrix(profile: PerturbationProfile, w: IndexWindow) -> TruncatedOperator:
    """A_ε on ``w``: entries sinc(n + ε_n − k)."""
    eps = profile.on(w)
    n = w.indices()
    entries = np.sinc(n[:, None] + eps[:, None] - n[None, :])
    return TruncatedOperator(w, w, entries)


def _check_L(L: float, limit: float) -> None:
    if L < 0:
        raise InvalidArgumentError(f"L must be nonnegative, got {L}")
    if L >= limit:
        raise RangeViolationError(f"L must lie below {limit}, got {L}", {"L": L, "limit": limit})


def kadec_bound(L: float) -> float:
    """1 − sinc(L) + (π/3)·L sin(πL)/(1−L) + sin(πL), a bound on ‖A_ε − I‖."""
    _check_L(L, 0.5)
    s = math.sin(math.pi * L)
    return 1.0 - float(np.sinc(L)) + (math.pi / 3.0) * L * s / (1.0 - L) + s


def kadec_bound_complex(L: float) -> float:
    """Experimental variant of ``kadec_bound`` for complex jitter |ε_n| ≤ L.

    On the disc the suprema of |sin πε| and |sinc ε − 1| sit on the imaginary
    axis, so sin πL becomes sinh πL and 1 − sinc L becomes sinh(πL)/(πL) − 1.
    """
    _check_L(L, 0.5)
    if L == 0:
        return 0.0
    sh = math.sinh(math.pi * L)
    return sh / (math.pi * L) - 1.0 + (math.pi / 3.0) * L * sh / (1.0 - L) + sh


def _threshold(bound: Callable[[float], float], upper: float, tol: float, name: str) -> float:
    if tol <= 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    # a quarter of tol keeps bound(root − tol) < 1 < bound(root + tol)
    root = scipy.optimize.brentq(lambda L: bound(L) - 1.0, 0.0, upper, xtol=tol / 4.0)
    logger.info(f"{name} threshold: L* = {root:.9f}")
    return float(root)


def kadec_threshold(tol: float = 1e-6, complex_shifts: bool = False) -> float:
    """Root of kadec_bound(L) = 1 on (0, 1/2)."""
    if complex_shifts:
        return _threshold(kadec_bound_complex, 0.45, tol, "Complex Kadec-range")
    return _threshold(kadec_bound, 0.49, tol, "Kadec-range")


def _certify(A: TruncatedOperator, bound: float, L: float) -> tuple:
    norm = NormCertificate(NormMethod.CLOSED_FORM, bound, {"L": L})
    certificate = neumann_certificate(A, norm)
    if not certificate.invertible:
        raise NotCertifiedError(
            f"Perturbation bound {bound:.6g} ≥ 1 at L={L:.6g}", {"bound": bound, "L": L}
        )
    return norm, certificate


def shannon_reconstruct(samples: SampleSet, tol: float = 1e-10) -> ReconstructionResult:
    """Recover f(k) on the window from f(n + ε_n) for f ∈ PW_π.

    Raises:
        NotCertifiedError: if kadec_bound(L) ≥ 1
        SolveFailure: if the truncated system cannot be solved to ``tol``
    """
    if samples.band != Band.PW_PI:
        raise InvalidArgumentError("shannon_reconstruct takes pw_pi samples")
    L = samples.profile.L
    A = shannon_matrix(samples.profile, samples.window)
    norm, certificate = _certify(A, kadec_bound(L), L)
    solution = solve_with_residual(A, samples.values, tol)
    logger.info(
        f"Shannon reconstruction on {samples.window.size} nodes: L={L:.4g}, "
        f"bound={norm.bound:.4g}, residual={solution.residual:.3g}"
    )
    return ReconstructionResult(solution.x, None, certificate, norm, solution.residual)


def eval_pw(
    coeffs: RealSequence,
    band: Band,
    x: ArrayLike,
    derivs: Optional[RealSequence] = None,
) -> ArrayLike:
    """Evaluate the truncated cardinal series at ``x``.

    pw_pi: Σ_k c_k sinc(x − k). pw_2pi: Σ_k c_k g(x − k) + d_k h(x − k).
    """
    band = Band(band)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    offsets = x_arr[:, None] - coeffs.window.indices()[None, :]
    if band == Band.PW_PI:
        out = np.sinc(offsets) @ coeffs.values
    else:
        if derivs is None:
            raise InvalidArgumentError("pw_2pi evaluation needs derivative coefficients")
        if derivs.window != coeffs.window:
            raise InvalidArgumentError("Values and derivatives must share a window")
        out = VaalerBasis.g(offsets) @ coeffs.values + VaalerBasis.h(offsets) @ derivs.values
    return float(out[0]) if np.ndim(x) == 0 else out


# Shannon → Vaaler ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class VaalerConversion:
    """Vaaler-form representation of a PW_π function given by Shannon data.

    f(x) = (4 sin²(πx/2)/π²) Σ_k [a_{2k}/(x−2k)² + b_{2k}/(x−2k)].

    ``b`` is carried on an extended window; the remainder of the b-sum is
    closed with digamma functions using b_k ≈ (−1)^k A/k, A = Σ_j (−1)^j a_j.
    """

    a: RealSequence
    b: RealSequence
    tail_amplitude: float

    def __call__(self, x: ArrayLike) -> ArrayLike:
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([self._evaluate(float(xi)) for xi in x_arr])
        return float(out[0]) if np.ndim(x) == 0 else out

    def _evaluate(self, x: float) -> float:
        half = x / 2.0
        if half == round(half):
            return self.a[int(round(x))]

        a_even = np.arange(self.a.window.lo + (self.a.window.lo % 2), self.a.window.hi + 1, 2)
        b_even = np.arange(self.b.window.lo + (self.b.window.lo % 2), self.b.window.hi + 1, 2)
        a_vals = self.a.values[a_even - self.a.window.lo]
        b_vals = self.b.values[b_even - self.b.window.lo]
        total = float(np.sum(a_vals / (x - a_even) ** 2) + np.sum(b_vals / (x - b_even)))

        M = int(b_even[-1]) // 2
        if self.tail_amplitude != 0.0:
            psi_M = scipy.special.digamma(M + 1.0)
            right = scipy.special.digamma(M + 1.0 - half) - psi_M
            left = scipy.special.digamma(M + 1.0 + half) - psi_M
            total += self.tail_amplitude / (2.0 * x) * (right - left)
        return 4.0 * math.sin(math.pi * half) ** 2 / math.pi**2 * total


def shannon_to_vaaler(a: RealSequence, half_width: int = CONVERSION_HALF_WIDTH) -> VaalerConversion:
    """Compute b_k = Σ_{j≠k} a_j (−1)^{k−j}/(k−j) and the Vaaler-form evaluator."""
    half_width = max(half_width, abs(a.window.lo), abs(a.window.hi))
    # keep an even symmetric window so the digamma tails pair up
    half_width += half_width % 2
    w = IndexWindow.symmetric(half_width)
    k = w.indices()
    j = a.window.indices()
    diff = (k[:, None] - j[None, :]).astype(float)
    sign = np.where(np.abs(k[:, None] - j[None, :]) % 2 == 0, 1.0, -1.0)
    kernel = np.where(diff != 0, sign / np.where(diff != 0, diff, 1.0), 0.0)
    b = RealSequence(w, kernel @ a.values)
    amplitude = float(np.sum(np.where(j % 2 == 0, 1.0, -1.0) * a.values))
    logger.debug(f"Shannon→Vaaler conversion on |k| ≤ {half_width}, tail amplitude {amplitude:.3g}")
    return VaalerConversion(a, b, amplitude)


def digamma_pair_sum(z: float) -> float:
    """Σ_{j≠0} 1/(j(j+z)) = (ψ(1+z) − ψ(1−z))/z, equal to π²/3 at z = 0."""
    if z != 0 and z == round(z):
        raise PoleError(f"Pole at integer z={z}", {"z": z})
    if abs(z) < TAYLOR_RADIUS:
        return 2.0 * float(scipy.special.zeta(2.0)) + 2.0 * float(scipy.special.zeta(4.0)) * z * z
    return float((scipy.special.digamma(1.0 + z) - scipy.special.digamma(1.0 - z)) / z)


# Vaaler sampling with derivatives ----------------------------------------


def vaaler_matrix(profile: PerturbationProfile, w: IndexWindow) -> TruncatedOperator:
    """Block operator [[g, h], [g′, h′]] at n + ε_n − k on ℓ²(w) × ℓ²(w)."""
    _check_L(profile.L, 0.25)
    eps = profile.on(w)
    n = w.indices()
    offsets = n[:, None] + eps[:, None] - n[None, :]
    blocks = [
        [VaalerBasis.g(offsets), VaalerBasis.h(offsets)],
        [VaalerBasis.g_prime(offsets), VaalerBasis.h_prime(offsets)],
    ]
    return TruncatedOperator.from_blocks(w, blocks)


def vaaler_bound(L: float) -> float:
    """Closed-form bound on ‖𝒜_ε − I‖ for 0 ≤ L < 1/4.

    1 − h′(L) + |g′(L)| + (sin²πL/π²)·γ₂(L)·√(2(1 + ((2πL cos πL − sin πL)/sin πL)²))
    """
    _check_L(L, 0.25)
    if L == 0:
        return 0.0
    s = math.sin(math.pi * L)
    c = math.cos(math.pi * L)
    pl = math.pi * L
    one_minus_h_prime = 1.0 - s * (2.0 * pl * c - s) / pl**2
    g_prime = 2.0 * s * (s - pl * c) / (math.pi**2 * L**3)
    ratio = (2.0 * pl * c - s) / s
    coupling = s**2 / math.pi**2 * gamma_p(2, L) * math.sqrt(2.0 * (1.0 + ratio**2))
    return one_minus_h_prime + g_prime + coupling


def vaaler_threshold(tol: float = 1e-6) -> float:
    """Root of vaaler_bound(L) = 1 on (0, 1/4)."""
    return _threshold(vaaler_bound, 0.2, tol, "Vaaler")


def vaaler_reconstruct(samples: SampleSet, tol: float = 1e-10) -> ReconstructionResult:
    """Recover f(k) and f′(k) from f and f′ at n + ε_n for f ∈ PW_2π."""
    if samples.band != Band.PW_2PI:
        raise InvalidArgumentError("vaaler_reconstruct takes pw_2pi samples")
    L = samples.profile.L
    w = samples.window
    A = vaaler_matrix(samples.profile, w)
    norm, certificate = _certify(A, vaaler_bound(L), L)
    rhs = np.concatenate([samples.values.values, samples.derivs.values])
    solution = solve_with_residual(A, rhs, tol)
    logger.info(
        f"Vaaler reconstruction on {w.size} nodes: L={L:.4g}, "
        f"bound={norm.bound:.4g}, residual={solution.residual:.3g}"
    )
    return ReconstructionResult(
        RealSequence(w, solution.x[: w.size]),
        RealSequence(w, solution.x[w.size :]),
        certificate,
        norm,
        solution.residual,
    )


def vaaler_gram(w: IndexWindow) -> np.ndarray:
    """Gram matrix of {g(·−k)} ∪ {h(·−k)} in L²(ℝ), k ∈ w.

    ⟨g_k, g_l⟩ = 2/3 or 1/(π²m²), ⟨h_k, h_l⟩ = δ_{kl}/(2π²), ⟨g_k, h_l⟩ = 1/(2π²m), m = k − l.
    """
    n = w.indices()
    m = (n[:, None] - n[None, :]).astype(float)
    off = m != 0
    safe = np.where(off, m, 1.0)
    gg = np.where(off, 1.0 / (np.pi**2 * safe**2), 2.0 / 3.0)
    hh = np.eye(w.size) / (2.0 * np.pi**2)
    gh = np.where(off, 1.0 / (2.0 * np.pi**2 * safe), 0.0)
    return np.block([[gg, gh], [gh.T, hh]])


@dataclass
class FrameReport:
    """Sample energy of a PW_2π function against its integer data and L² norm."""

    sample_energy: float
    integer_energy: float
    l2_norm_sq: float
    ratio: float
    lower: float
    upper: float
    within: bool
    l2_ratio: float
    l2_lower: float
    l2_upper: float


def frame_ratio(
    values: RealSequence, derivs: RealSequence, profile: PerturbationProfile
) -> FrameReport:
    """Compare Σ(|f(n+ε_n)|² + |f′(n+ε_n)|²) with the integer data of f.

    ``values`` and ``derivs`` are f(k), f′(k) on the profile window. With B the
    Vaaler bound at L, the ratio to Σ(f(k)² + f′(k)²) lies in [(1−B)², (1+B)²];
    the ratio to ‖f‖₂² is widened by the extreme Gram eigenvalues.
    """
    B = vaaler_bound(profile.L)
    w = values.window
    v = np.concatenate([values.values, derivs.values])
    A = vaaler_matrix(profile, w)
    sample_energy = float(np.sum((A.entries @ v) ** 2))
    integer_energy = float(np.sum(v**2))
    gram = vaaler_gram(w)
    l2_norm_sq = float(v @ gram @ v)
    if integer_energy == 0:
        raise InvalidArgumentError("frame_ratio needs a nonzero function")
    eig = np.linalg.eigvalsh(gram)
    ratio = sample_energy / integer_energy
    lower, upper = (1.0 - B) ** 2, (1.0 + B) ** 2
    return FrameReport(
        sample_energy=sample_energy,
        integer_energy=integer_energy,
        l2_norm_sq=l2_norm_sq,
        ratio=ratio,
        lower=lower,
        upper=upper,
        within=bool(lower <= ratio <= upper),
        l2_ratio=sample_energy / l2_norm_sq,
        l2_lower=lower / float(eig[-1]),
        l2_upper=upper / float(eig[0]),
    )
