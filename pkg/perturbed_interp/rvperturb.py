"""
Recovery of f(√k), f̂(√k) from f and f̂ sampled at jittered nodes √(k + ε_k).

With x_j = f(√j) and y_j = f̂(√j) the samples are

    f(√(i+ε_i)) = Σ_j a_j(√(i+ε_i)) x_j + â_j(√(i+ε_i)) y_j,
    f̂(√(i+ε_i)) = Σ_j â_j(√(i+ε_i)) x_j + a_j(√(i+ε_i)) y_j,

for i ≥ 1, and the index-0 row of T̃ returns (x_0, y_0). Certificates bound
I − T̃ on ℓ²_s(ℕ) × ℓ²_s(ℕ), conjugated into unweighted coordinates by the
ratios ((1+i)/(1+j))^s.
"""

import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.integrate
import scipy.linalg
import scipy.optimize
from mpmath import mp
from tqdm import tqdm

from .errors import InvalidArgumentError, NotCertifiedError, RangeViolationError, SolveFailure
from .linop import (
    NormMethod,
    TruncatedOperator,
    hs_norm,
    schur_bound,
    solve_with_residual,
)
from .modular import modular_sign_check
from .rvbasis import BasisSet, basis_set
from .seqspace import (
    DecayClass,
    IndexWindow,
    PerturbationProfile,
    RealSequence,
    WeightedSeqPair,
    make_profile,
)

logger = logging.getLogger(__name__)

DEFAULT_S = 2.0
DEFAULT_THETA = 0.05

# sup_n |ε_n|(1+n)^p exponent of the uniqueness criterion
UNIQUENESS_EXPONENT = 1.25

SIGN_CHECK_GRID = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)


@dataclass(frozen=True, eq=False)
class RVOperatorConfig:
    """Weight exponent s, Schur exponent θ, truncation 0…N and node jitter."""

    profile: PerturbationProfile
    N: int
    s: float = DEFAULT_S
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        if self.N < 8:
            raise InvalidArgumentError(f"N must be ≥ 8, got {self.N}")
        window = IndexWindow.one_sided(self.N)
        if not self.profile.covers(window):
            raise InvalidArgumentError(f"Profile does not cover indices 0..{self.N}")
        self.profile.check_sqrt_nodes()

    @classmethod
    def power_law(
        cls, delta: float, exponent: float, N: int, s: float = DEFAULT_S, theta: float = DEFAULT_THETA
    ) -> "RVOperatorConfig":
        profile = make_profile(
            DecayClass.power_law(delta, exponent), IndexWindow.one_sided(N), sqrt_nodes=True
        )
        return cls(profile, N, s, theta)

    @property
    def window(self) -> IndexWindow:
        return IndexWindow.one_sided(self.N)

    @property
    def eps(self) -> np.ndarray:
        return self.profile.on(self.window)

    @property
    def delta(self) -> float:
        """sup_n |ε_n|(1+n)^{5/4} on the truncation."""
        return self.profile.weighted_sup(UNIQUENESS_EXPONENT)

    def check_schur(self) -> None:
        if not (self.s - self.theta > 1.75 and self.s + self.theta > 0.75):
            raise InvalidArgumentError(
                f"Schur test needs s − θ > 7/4 and s + θ > 3/4, got s={self.s}, θ={self.theta}"
            )


@dataclass
class RVCertificate:
    """A bound on ‖I − T̃‖ on the truncation, with a tail estimate for j > N."""

    method: NormMethod
    bound: float
    s: float
    theta: float
    N: int
    delta: float
    tail_term: float
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.bound < 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": NormMethod(self.method).value,
            "bound": float(self.bound),
            "s": self.s,
            "theta": self.theta,
            "N": self.N,
            "delta": self.delta,
            "tail_term": float(self.tail_term),
            "certified": self.certified,
            "detail": self.detail,
        }


# Assembly -----------------------------------------------------------------


@functools.lru_cache(maxsize=8)
def _node_values(N: int, eps: Tuple[float, ...]) -> Tuple[np.ndarray, np.ndarray]:
    """a_j(√(i+ε_i)) and â_j(√(i+ε_i)) for 0 ≤ i, j ≤ N; row 0 is left at zero."""
    evaluator = basis_set(N)
    A = np.zeros((N + 1, N + 1))
    A_hat = np.zeros((N + 1, N + 1))
    for i in tqdm(range(1, N + 1), desc="Basis at nodes", disable=not evaluator.show_progress):
        values = evaluator.values_at_s(i + eps[i])
        A[i] = values.a
        A_hat[i] = values.a_hat
    logger.debug(f"Evaluated a_j, â_j at {N} perturbed nodes")
    return A, A_hat


def _eps_key(cfg: RVOperatorConfig) -> Tuple[float, ...]:
    return tuple(float(e) for e in cfg.eps)


def _recovery_matrix_from(N: int, eps: Tuple[float, ...]) -> np.ndarray:
    A, A_hat = _node_values(N, eps)
    A = A.copy()
    A[0, 0] = 1.0
    return np.block([[A, A_hat], [A_hat, A]])


def _recovery_matrix(cfg: RVOperatorConfig) -> np.ndarray:
    return _recovery_matrix_from(cfg.N, _eps_key(cfg))


def _weight_ratio(rows: int, cols: int, s: float) -> np.ndarray:
    i = np.arange(rows, dtype=float)
    j = np.arange(cols, dtype=float)
    return ((1.0 + i)[:, None] / (1.0 + j)[None, :]) ** s


def build_T_tilde(cfg: RVOperatorConfig) -> TruncatedOperator:
    """I − T̃ conjugated by the ℓ²_s weights, as a 2×2 block operator on 0..N.

    Row 0 of each block is zero; column 0 carries a_0, â_0 at the perturbed nodes.
    """
    T = _recovery_matrix(cfg)
    size = cfg.N + 1
    ratio = np.tile(_weight_ratio(size, size, cfg.s), (2, 2))
    B = (np.eye(2 * size) - T) * ratio
    return TruncatedOperator(cfg.window, cfg.window, B, blocks=2)


def recovery_operator(cfg: RVOperatorConfig) -> TruncatedOperator:
    """T̃ itself in unweighted coordinates, the matrix solved by ``recover_values``."""
    return TruncatedOperator(cfg.window, cfg.window, _recovery_matrix(cfg), blocks=2)


def _tail_term(column_ratios: np.ndarray, cfg: RVOperatorConfig, exponent: float) -> float:
    """Columns j > N extrapolated from the last one with the weight decay ((1+N)/(1+j))^exponent."""
    last = float(max(column_ratios[cfg.N], column_ratios[2 * cfg.N + 1]))
    j = np.arange(cfg.N + 1, 4 * cfg.N + 1, dtype=float)
    return last * float(np.sum(((1.0 + cfg.N) / (1.0 + j)) ** exponent))


def schur_certificate(cfg: RVOperatorConfig) -> RVCertificate:
    """Schur test on the weighted I − T̃ with p_i = q_i = (1+i)^θ in both blocks.

    Column 0 stays in the sums. Dropping it would still certify invertibility, since row 0
    fixes x_0 and y_0, but the bound kept here is the conservative one over the whole block.
    """
    cfg.check_schur()
    B = build_T_tilde(cfg)
    weights = np.tile((1.0 + cfg.window.indices()) ** cfg.theta, 2)
    certificate = schur_bound(B, weights, weights)
    column_ratios = (weights @ np.abs(B.entries)) / weights
    tail = _tail_term(column_ratios, cfg, cfg.s - cfg.theta)
    detail = dict(certificate.detail)
    for key in ("argmax_col", "argmax_row"):
        index = detail[key]
        detail[key] = {"block": index // (cfg.N + 1), "index": index % (cfg.N + 1)}
    logger.info(f"Schur certificate: ‖I − T̃‖ ≤ {certificate.bound:.4g} (N={cfg.N}, s={cfg.s})")
    return RVCertificate(
        NormMethod.SCHUR, certificate.bound, cfg.s, cfg.theta, cfg.N, cfg.delta, tail, detail
    )


def hs_certificate(cfg: RVOperatorConfig) -> RVCertificate:
    """Hilbert–Schmidt norm of the weighted I − T̃, column 0 included as in the Schur test."""
    B = build_T_tilde(cfg)
    certificate = hs_norm(B)
    column_norms = np.sqrt(np.sum(B.entries**2, axis=0))
    tail = math.sqrt(_tail_term(column_norms**2, cfg, 2.0 * cfg.s))
    logger.info(f"Hilbert–Schmidt certificate: ‖I − T̃‖ ≤ {certificate.bound:.4g} (N={cfg.N})")
    return RVCertificate(
        NormMethod.HILBERT_SCHMIDT,
        certificate.bound,
        cfg.s,
        cfg.theta,
        cfg.N,
        cfg.delta,
        tail,
        dict(certificate.detail),
    )


def best_certificate(cfg: RVOperatorConfig) -> RVCertificate:
    """The smaller of the Schur and Hilbert–Schmidt bounds."""
    candidates = [hs_certificate(cfg)]
    try:
        candidates.append(schur_certificate(cfg))
    except InvalidArgumentError:
        logger.debug("Schur exponents out of range; using the Hilbert–Schmidt bound only")
    return min(candidates, key=lambda c: c.bound)


# Recovery -----------------------------------------------------------------


@dataclass
class RecoveryResult:
    """Recovered (f(√k), f̂(√k)) with the certificate and solver residual."""

    pair: WeightedSeqPair
    certificate: RVCertificate
    residual: float


def _certified(cfg: RVOperatorConfig) -> RVCertificate:
    certificate = best_certificate(cfg)
    if not certificate.certified:
        raise NotCertifiedError(
            f"‖I − T̃‖ ≤ {certificate.bound:.6g} is not below 1", certificate.to_dict()
        )
    return certificate


def recover_values(
    cfg: RVOperatorConfig, samples: WeightedSeqPair, tol: float = 1e-10
) -> RecoveryResult:
    """Solve T̃(x, y) = samples on the truncation.

    Raises:
        NotCertifiedError: if neither certificate is below 1
        SolveFailure: if the solve misses ``tol``
    """
    if samples.window != cfg.window:
        raise InvalidArgumentError(f"Samples must live on indices 0..{cfg.N}")
    certificate = _certified(cfg)
    solution = solve_with_residual(recovery_operator(cfg), samples.stacked(), tol)
    size = cfg.N + 1
    pair = WeightedSeqPair(
        RealSequence(cfg.window, solution.x[:size]),
        RealSequence(cfg.window, solution.x[size:]),
        cfg.s,
    )
    logger.info(f"Recovered {size} values, residual {solution.residual:.3g}")
    return RecoveryResult(pair, certificate, solution.residual)


def sample_pair(
    cfg: RVOperatorConfig,
    f: Callable[[np.ndarray], np.ndarray],
    f_hat: Callable[[np.ndarray], np.ndarray],
) -> WeightedSeqPair:
    """(f(√(k+ε_k)), f̂(√(k+ε_k))) on 0..N."""
    nodes = np.sqrt(cfg.window.indices() + cfg.eps)
    return WeightedSeqPair(
        RealSequence(cfg.window, f(nodes)), RealSequence(cfg.window, f_hat(nodes)), cfg.s
    )


@dataclass
class PerturbedBasisValues:
    """θ_j(x), η_j(x) for 0 ≤ j ≤ N, and the size of the last coefficient as a tail indicator."""

    x: float
    theta: np.ndarray
    eta: np.ndarray
    tail: float


@functools.lru_cache(maxsize=8)
def _factorized(N: int, eps: Tuple[float, ...]):
    return scipy.linalg.lu_factor(_recovery_matrix_from(N, eps))


def perturbed_basis(
    cfg: RVOperatorConfig, x: float, evaluator: Optional[BasisSet] = None
) -> PerturbedBasisValues:
    """θ_j(x) = Σ_k γ_{j,k} a_k(x) + γ̂_{j,k} â_k(x), η_j likewise, from T̃^{−1}."""
    _certified(cfg)
    evaluator = evaluator if evaluator is not None else basis_set(cfg.N)
    values = evaluator.values_at(x)
    v = np.concatenate([values.a[: cfg.N + 1], values.a_hat[: cfg.N + 1]])
    try:
        w = scipy.linalg.lu_solve(_factorized(cfg.N, _eps_key(cfg)), v, trans=1)
    except (ValueError, np.linalg.LinAlgError) as e:
        raise SolveFailure(f"Transposed solve failed: {e}") from e
    size = cfg.N + 1
    tail = float(max(abs(w[size - 1]), abs(w[-1])))
    return PerturbedBasisValues(float(x), w[:size], w[size:], tail)


def perturbed_basis_eval(cfg: RVOperatorConfig, j: int, x: float) -> Tuple[float, float]:
    """(θ_j(x), η_j(x))."""
    if not 0 <= j <= cfg.N:
        raise InvalidArgumentError(f"j={j} outside 0..{cfg.N}")
    values = perturbed_basis(cfg, x)
    return float(values.theta[j]), float(values.eta[j])


def interpolate(cfg: RVOperatorConfig, samples: WeightedSeqPair, x: float) -> float:
    """Σ_j f(√(j+ε_j))θ_j(x) + f̂(√(j+ε_j))η_j(x)."""
    values = perturbed_basis(cfg, x)
    return float(values.theta @ samples.x.values + values.eta @ samples.y.values)


# Poisson summation --------------------------------------------------------


def _as_values(seq: Union[RealSequence, Sequence[float], np.ndarray]) -> np.ndarray:
    if isinstance(seq, RealSequence):
        if seq.window.lo != 0:
            raise InvalidArgumentError("Poisson checks take sequences indexed from 0")
        return seq.values
    return np.asarray(seq, dtype=float)


def _square_sum(values: np.ndarray) -> float:
    """Σ_{n ≥ 1} values[n²] over the available squares."""
    roots = np.arange(1, math.isqrt(len(values) - 1) + 1)
    return float(np.sum(values[roots**2]))


def poisson_check(x, y) -> float:
    """|Σ_{n∈ℤ} x_{n²} − Σ_{n∈ℤ} y_{n²}| on the truncation."""
    xv, yv = _as_values(x), _as_values(y)
    if xv.shape != yv.shape or xv.size == 0:
        raise InvalidArgumentError("x and y must be nonempty and of equal length")
    return abs((xv[0] + 2.0 * _square_sum(xv)) - (yv[0] + 2.0 * _square_sum(yv)))


def poisson_row(x, y) -> float:
    """Index-0 row of the unperturbed operator: (x_0+y_0)/2 − Σ_{n≥1} x_{n²} + Σ_{n≥1} y_{n²}."""
    xv, yv = _as_values(x), _as_values(y)
    if xv.shape != yv.shape or xv.size == 0:
        raise InvalidArgumentError("x and y must be nonempty and of equal length")
    return float((xv[0] + yv[0]) / 2.0 - _square_sum(xv) + _square_sum(yv))


def gaussian_pair(scale: float, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Samples at √k of f(x) = e^{−π·scale·x²} and f̂(ξ) = scale^{−1/2}e^{−πξ²/scale}."""
    if scale <= 0:
        raise InvalidArgumentError(f"scale must be positive, got {scale}")
    k = np.arange(count, dtype=float)
    return np.exp(-np.pi * scale * k), np.exp(-np.pi * k / scale) / math.sqrt(scale)


# Origin perturbation ------------------------------------------------------


@dataclass
class OriginProbe:
    eps0: float
    N: int
    min_singular: float


def origin_probe(cfg: RVOperatorConfig, eps0: float) -> OriginProbe:
    """Smallest singular value of the truncated operator that also moves the origin to √ε_0."""
    if not 0 <= eps0 < 0.5:
        raise RangeViolationError(f"ε_0 must lie in [0, 1/2), got {eps0}", {"eps0": eps0})
    evaluator = basis_set(cfg.N)
    T = _recovery_matrix(cfg).copy()
    size = cfg.N + 1
    origin = evaluator.values_at_s(eps0)
    T[0, :size] = origin.a
    T[0, size:] = origin.a_hat
    T[size, :size] = origin.a_hat
    T[size, size:] = origin.a
    sigma = float(scipy.linalg.svdvals(T)[-1])
    logger.info(f"Origin probe ε_0={eps0}: smallest singular value {sigma:.3g}")
    return OriginProbe(eps0, cfg.N, sigma)


# Uniqueness for small powers ----------------------------------------------


@dataclass(frozen=True, eq=False)
class UniquenessConfig:
    """2·K0 extra evaluation points t_j replacing the coordinates 1..K0."""

    K0: int
    t: np.ndarray
    alpha: float = 0.2
    c: float = 0.05

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        object.__setattr__(self, "t", t)
        if self.K0 < 1:
            raise InvalidArgumentError(f"K0 must be ≥ 1, got {self.K0}")
        if t.shape != (2 * self.K0,):
            raise InvalidArgumentError(f"Need {2 * self.K0} points, got {t.size}")
        if np.any(np.diff(t) <= 0):
            raise InvalidArgumentError("Points t_j must be strictly increasing")
        if t[0] <= math.sqrt(self.K0):
            raise InvalidArgumentError(f"t_1 must exceed √K0 = {math.sqrt(self.K0):.6g}")
        squares = t**2
        near = np.abs(squares - np.round(squares)) < 1e-9
        if np.any(near):
            raise InvalidArgumentError(
                f"Points {t[near].tolist()} are square roots of integers"
            )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "UniquenessConfig":
        try:
            return cls(
                int(data["K0"]),
                np.asarray(data["t"], dtype=float),
                float(data.get("alpha", 0.2)),
                float(data.get("c", 0.05)),
            )
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"Malformed uniqueness config: {e}") from e


@dataclass
class UniquenessProbe:
    operator: TruncatedOperator
    matrix: np.ndarray
    min_singular: float


def build_TK0(cfg: UniquenessConfig, s: float = DEFAULT_S, N: int = 16) -> UniquenessProbe:
    """T_{K0} on the truncation 0..N and the 4K0×2K0 matrix A_{K0}.

    T_{K0} keeps (x_0, y_0), writes 𝔊(t_j), 𝔊̂(t_j) into coordinates 1..2K0 and
    shifts x_i, y_i (i > K0) up by K0; 𝔊 = Σ_i x_i a_i + y_i â_i.
    """
    if N <= cfg.K0:
        raise InvalidArgumentError(f"N must exceed K0={cfg.K0}, got {N}")
    evaluator = basis_set(N)
    samples = [evaluator.values_at(t) for t in cfg.t]
    a = np.array([v.a[: N + 1] for v in samples])
    a_hat = np.array([v.a_hat[: N + 1] for v in samples])

    rows, cols = N + cfg.K0 + 1, N + 1
    top = np.zeros((rows, 2 * cols))
    bottom = np.zeros((rows, 2 * cols))
    top[0, 0] = 1.0
    bottom[0, cols] = 1.0
    top[1 : 2 * cfg.K0 + 1, :cols] = a
    top[1 : 2 * cfg.K0 + 1, cols:] = a_hat
    bottom[1 : 2 * cfg.K0 + 1, :cols] = a_hat
    bottom[1 : 2 * cfg.K0 + 1, cols:] = a
    for i in range(cfg.K0 + 1, N + 1):
        top[i + cfg.K0, i] = 1.0
        bottom[i + cfg.K0, cols + i] = 1.0
    ratio = np.tile(_weight_ratio(rows, cols, s), (2, 2))
    operator = TruncatedOperator(
        IndexWindow.one_sided(rows - 1),
        IndexWindow.one_sided(cols - 1),
        np.vstack([top, bottom]) * ratio,
        blocks=2,
    )

    k = slice(1, cfg.K0 + 1)
    matrix = np.vstack(
        [
            np.hstack([a[:, k], a_hat[:, k]]),
            np.hstack([a_hat[:, k], a[:, k]]),
        ]
    )
    sigma = float(scipy.linalg.svdvals(matrix)[-1])
    logger.info(f"A_{cfg.K0}: smallest singular value {sigma:.3g}")
    return UniquenessProbe(operator, matrix, sigma)


@dataclass
class PowersReport:
    """Node map m(n) = ⌊(n/c²)^{1/(2α)}⌋ and the jitter ε_n = c²m^{2α} − n it induces."""

    alpha: float
    c: float
    N: int
    exponent: float
    weighted_sup: float
    certified_delta: float
    exponent_ok: bool
    bound_ok: bool
    sign_check_ok: bool
    passed: bool
    eps: List[float]


def powers_jitter(alpha: float, c: float, N: int) -> np.ndarray:
    """ε_n = c²·m(n)^{2α} − n for 0 ≤ n ≤ N, computed at 30 digits."""
    if not 0 < alpha < 0.5:
        raise InvalidArgumentError(f"alpha must lie in (0, 1/2), got {alpha}")
    if c <= 0:
        raise InvalidArgumentError(f"c must be positive, got {c}")
    eps = np.zeros(N + 1)
    with mp.workdps(30):
        a, cc = mp.mpf(alpha), mp.mpf(c)
        for n in range(1, N + 1):
            m = mp.floor((n / cc**2) ** (1 / (2 * a)))
            eps[n] = float(cc**2 * m ** (2 * a) - n)
    return eps


def powers_experiment(
    alpha: float, c: float, N: int, certified_delta: float = 0.01
) -> PowersReport:
    """Does the uniqueness pipeline apply to the nodes c·m^α?

    Passes iff (α−1)/(2α) < −7/4 strictly, sup_n |ε_n|(1+n)^{5/4} < ``certified_delta``
    and the sign facts along 1 + it hold.
    """
    eps = powers_jitter(alpha, c, N)
    exponent = (alpha - 1.0) / (2.0 * alpha)
    n = np.arange(N + 1, dtype=float)
    weighted = float(np.max(np.abs(eps) * (1.0 + n) ** UNIQUENESS_EXPONENT))
    sign_ok = modular_sign_check(SIGN_CHECK_GRID).passed
    # (α−1)/(2α) < −7/4 ⇔ α < 2/9, compared exactly
    exponent_ok = Fraction(alpha).limit_denominator(10**6) < Fraction(2, 9)
    bound_ok = weighted < certified_delta and bool(np.all(np.abs(eps) < 0.5))
    report = PowersReport(
        alpha=alpha,
        c=c,
        N=N,
        exponent=exponent,
        weighted_sup=weighted,
        certified_delta=certified_delta,
        exponent_ok=exponent_ok,
        bound_ok=bound_ok,
        sign_check_ok=sign_ok,
        passed=exponent_ok and bound_ok and sign_ok,
        eps=[float(e) for e in eps],
    )
    logger.info(f"Powers experiment α={alpha}, c={c}: {'pass' if report.passed else 'fail'}")
    return report


# Descartes rule for Laplace transforms ------------------------------------


@dataclass(frozen=True)
class LaplaceSample:
    """φ on (0, ∞), tabulated on (0, T] for counting its sign changes."""

    phi: Callable[[np.ndarray], np.ndarray]
    s0: float
    T: float = 50.0
    points: int = 20001


@dataclass
class DescartesReport:
    sign_changes: int
    zeros_found: int
    zeros: List[float]

    @property
    def consistent(self) -> bool:
        return self.zeros_found <= self.sign_changes


def _count_sign_changes(values: np.ndarray) -> int:
    signs = np.sign(values)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def laplace_transform(sample: LaplaceSample, s: float) -> float:
    """∫_0^∞ φ(t)e^{−st} dt by adaptive quadrature."""
    value, _ = scipy.integrate.quad(
        lambda t: float(sample.phi(np.asarray(t))) * math.exp(-s * t),
        0.0,
        np.inf,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=200,
    )
    return value


def descartes_count(sample: LaplaceSample, s_grid: Sequence[float]) -> DescartesReport:
    """Sign changes of φ against zeros of ℒ[φ] found on ``s_grid``.

    Each sign change of ℒ[φ] between grid points is refined with brentq.
    """
    grid = np.asarray(s_grid, dtype=float)
    if grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise InvalidArgumentError("s_grid must be increasing with at least two points")
    if grid[0] <= sample.s0:
        raise InvalidArgumentError(f"s_grid must lie above s0={sample.s0}")

    t = np.linspace(sample.T / sample.points, sample.T, sample.points)
    changes = _count_sign_changes(sample.phi(t))
    transform = np.array([laplace_transform(sample, s) for s in grid])
    zeros = [float(s) for s, v in zip(grid, transform) if v == 0.0]
    for (s_a, v_a), (s_b, v_b) in zip(zip(grid, transform), zip(grid[1:], transform[1:])):
        if v_a * v_b < 0:
            zeros.append(
                float(
                    scipy.optimize.brentq(lambda s: laplace_transform(sample, s), s_a, s_b, xtol=1e-12)
                )
            )
    report = DescartesReport(changes, len(zeros), sorted(zeros))
    if not report.consistent:
        logger.warning(f"Found {report.zeros_found} zeros but only {changes} sign changes")
    return report
