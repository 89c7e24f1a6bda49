"""
Jacobi theta functions, the modular invariants λ and J, and exact q-series.

Nome convention q = e^{iπz}. Theta null values:

    Θ2(z) = Σ_n q^{(n+1/2)²},  Θ3(z) = Σ_n q^{n²},  Θ4(z) = Σ_n (−1)^n q^{n²},

λ = Θ2⁴/Θ3⁴ and J = λ(1−λ)/16. θ denotes Θ3 throughout.

Points with small imaginary part are moved into the fundamental domain of Γ_θ
(generated by z ↦ −1/z and z ↦ z+2) before any series is summed, and the
theta values are pulled back along the recorded word with the laws

    Θ2(z+1) = e^{iπ/4}Θ2(z),   Θ3(z+1) = Θ4(z),   Θ4(z+1) = Θ3(z),
    Θ2(−1/z) = √(−iz)Θ4(z),    Θ3(−1/z) = √(−iz)Θ3(z),  Θ4(−1/z) = √(−iz)Θ2(z).
"""

import functools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np
from mpmath import mp

from .errors import InvalidArgumentError, ReductionFailure

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]

# nome series are evaluated only when Im z is at least this
DIRECT_SUM_MIN_IM = 0.3

REDUCTION_MAX_STEPS = 10**6

# working precision (decimal digits) of the public evaluators
EVAL_DPS = 30


# Exact q-series -----------------------------------------------------------


def _unit_inverse(a0: Number) -> Number:
    if a0 == 1:
        return 1
    if a0 == -1:
        return -1
    return Fraction(1) / Fraction(a0)


@dataclass(frozen=True, eq=False)
class QSeries:
    """Truncated expansion Σ_{k=lead}^{order} c_k q^k, exact through q^order.

    ``coeffs[i]`` is the coefficient of q^{lead+i}; entries are Python ints or
    Fractions held in an object array. The zero series has no coefficients and
    lead = order + 1.
    """

    lead: int
    coeffs: np.ndarray
    order: int

    def __post_init__(self):
        coeffs = np.empty(len(self.coeffs), dtype=object)
        coeffs[:] = list(self.coeffs)
        if len(coeffs) != self.order - self.lead + 1:
            raise InvalidArgumentError(
                f"{len(coeffs)} coefficients do not span q^{self.lead}..q^{self.order}"
            )
        # strip leading zeros so coeffs[0] ≠ 0
        nonzero = np.flatnonzero(coeffs != 0)
        start = int(nonzero[0]) if nonzero.size else len(coeffs)
        object.__setattr__(self, "coeffs", coeffs[start:])
        object.__setattr__(self, "lead", self.lead + start)

    @classmethod
    def from_terms(cls, terms: Dict[int, Number], order: int) -> "QSeries":
        """Series with the given {exponent: coefficient} terms, exact through ``order``."""
        lead = min([k for k in terms if k <= order], default=order + 1)
        coeffs = [terms.get(k, 0) for k in range(lead, order + 1)]
        return cls(lead, coeffs, order)

    @classmethod
    def constant(cls, c: Number, order: int) -> "QSeries":
        return cls.from_terms({0: c}, order)

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coefficient(self, k: int) -> Number:
        if k > self.order:
            raise InvalidArgumentError(f"q^{k} lies beyond the known order {self.order}")
        if k < self.lead:
            return 0
        return self.coeffs[k - self.lead]

    def _window(self, lo: int, hi: int) -> np.ndarray:
        out = np.empty(hi - lo + 1, dtype=object)
        out[:] = 0
        start = max(lo, self.lead)
        stop = min(hi, self.lead + len(self.coeffs) - 1)
        if start <= stop:
            out[start - lo : stop - lo + 1] = self.coeffs[start - self.lead : stop - self.lead + 1]
        return out

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other) -> "QSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        lo = min(self.lead, other.lead, order + 1)
        return QSeries(lo, self._window(lo, order) + other._window(lo, order), order)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries(self.lead, -self.coeffs, self.order)

    def __sub__(self, other) -> "QSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            return QSeries(self.lead, self.coeffs * other, self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.order + other.lead, other.order + self.lead)
        lead = self.lead + other.lead
        if self.is_zero or other.is_zero or order < lead:
            return QSeries(order + 1, [], order)
        full = np.convolve(self.coeffs, other.coeffs)
        count = order - lead + 1
        out = np.empty(count, dtype=object)
        out[:] = 0
        out[: min(count, len(full))] = full[:count]
        return QSeries(lead, out, order)

    __rmul__ = __mul__

    def invert(self) -> "QSeries":
        """1/a through q^{order − 2·lead}."""
        if self.is_zero:
            raise InvalidArgumentError("Cannot invert the zero series")
        inv0 = _unit_inverse(self.coeffs[0])
        size = self.order - self.lead + 1
        a = self.coeffs
        b = np.empty(size, dtype=object)
        b[0] = inv0
        for k in range(1, size):
            b[k] = -np.dot(a[1 : k + 1], b[k - 1 :: -1][:k]) * inv0
        return QSeries(-self.lead, b, self.order - 2 * self.lead)

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            return self.invert() ** (-k)
        result = QSeries.constant(1, self.order - (k - 1) * self.lead if k else self.order)
        base = self
        first = True
        while k:
            if k & 1:
                result = base if first else result * base
                first = False
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, m: int) -> "QSeries":
        """Multiply by q^m."""
        return QSeries(self.lead + m, self.coeffs, self.order + m)

    def scale(self, c: Number) -> "QSeries":
        """Substitute q ↦ c·q."""
        if c == 0:
            raise InvalidArgumentError("q ↦ 0·q collapses the series")
        powers = np.empty(len(self.coeffs), dtype=object)
        powers[:] = [_exact(Fraction(c) ** (self.lead + i)) for i in range(len(self.coeffs))]
        return QSeries(self.lead, self.coeffs * powers, self.order)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise InvalidArgumentError(f"Cannot extend a series known through q^{self.order}")
        lead = min(self.lead, order + 1)
        return QSeries(lead, self._window(lead, order), order)

    def evaluate(self, q) -> Any:
        """Σ c_k q^k at the current mpmath precision."""
        total = mp.zero
        power = q ** self.lead
        for c in self.coeffs:
            total += _to_mp(c) * power
            power *= q
        return total

    def to_dict(self) -> Dict[str, Any]:
        return {"lead": self.lead, "coeffs": [str(c) for c in self.coeffs], "order": self.order}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "QSeries":
        try:
            coeffs = [Fraction(c) if "/" in str(c) else int(c) for c in data["coeffs"]]
            return cls(int(data["lead"]), coeffs, int(data["order"]))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"Malformed q-series: {e}") from e


def _exact(c: Fraction) -> Number:
    return c.numerator if c.denominator == 1 else c


def _to_mp(c: Number):
    if isinstance(c, Fraction):
        return mp.mpf(c.numerator) / c.denominator
    return mp.mpf(c)


@dataclass(frozen=True, eq=False)
class ModularSeries:
    """θ, λ, J and 1/J as exact q-series, all valid through ``order``."""

    order: int
    theta: QSeries
    lam: QSeries
    J: QSeries
    inv_J: QSeries


@functools.lru_cache(maxsize=8)
def modular_series(order: int) -> ModularSeries:
    """Build θ = Θ3, λ = 16q·R⁴/θ⁴ (R = Σ_{n≥0} q^{n(n+1)}), J and 1/J through q^order."""
    if order < 2:
        raise InvalidArgumentError(f"order must be ≥ 2, got {order}")
    work = order + 2
    root = math.isqrt(work)
    theta_terms = {0: 1}
    for n in range(1, root + 1):
        theta_terms[n * n] = 2
    theta = QSeries.from_terms(theta_terms, work)
    r_terms = {n * (n + 1): 1 for n in range(0, root + 1) if n * (n + 1) <= work}
    R = QSeries.from_terms(r_terms, work)

    ratio = (R**4 * (theta**4).invert()).shift(1)
    lam = ratio * 16
    J = ratio * (1 - lam)
    inv_J = J.invert()
    logger.debug(f"Built modular q-series through q^{order}")
    return ModularSeries(
        order, theta.truncate(order), lam.truncate(order), J.truncate(order), inv_J.truncate(order)
    )


def theta4_series(order: int) -> QSeries:
    """Θ4 = Σ (−1)^n q^{n²}."""
    terms = {0: 1}
    for n in range(1, math.isqrt(order) + 1):
        terms[n * n] = 2 * (-1) ** n
    return QSeries.from_terms(terms, order)


# Upper half-plane and fundamental-domain reduction ------------------------


@dataclass(frozen=True)
class UpperHalfPoint:
    re: float
    im: float

    def __post_init__(self):
        if not self.im > 0:
            raise InvalidArgumentError(f"Point must lie in the upper half-plane, got im={self.im}")

    @classmethod
    def from_complex(cls, z: complex) -> "UpperHalfPoint":
        return cls(float(z.real), float(z.imag))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


PointLike = Union[UpperHalfPoint, complex]


def _as_mpc(z) -> Any:
    if isinstance(z, UpperHalfPoint):
        z = mp.mpc(z.re, z.im)
    else:
        z = mp.mpc(z)
    if not z.imag > 0:
        raise InvalidArgumentError(f"Point must lie in the upper half-plane, got {z}")
    return z


@dataclass
class ReductionResult:
    """Image τ′ of τ in the closed fundamental domain of Γ_θ.

    The word [n_0, …, n_m] records γ_0 = τ − 2n_0 and γ_i = −1/γ_{i−1} − 2n_i;
    τ′ = γ_m and ``steps`` = m counts the inversions.
    """

    tau_prime: UpperHalfPoint
    steps: int
    word: List[int]
    I: float

    def moves(self) -> List[Tuple[str, int]]:
        """The word as elementary moves ("T", k): z ↦ z + k and ("S", 0): z ↦ −1/z."""
        moves = [("T", -2 * self.word[0])]
        for n in self.word[1:]:
            moves.extend([("S", 0), ("T", -2 * n)])
        return moves

    def replay(self) -> complex:
        """Map τ′ back through the word; reproduces τ."""
        with mp.workdps(EVAL_DPS):
            gamma = mp.mpc(self.tau_prime.re, self.tau_prime.im)
            for n in reversed(self.word[1:]):
                gamma = -1 / (gamma + 2 * n)
            return complex(gamma + 2 * self.word[0])


def _half_floor(x) -> int:
    return int(mp.floor((x + 1) / 2))


def _reduce_mp(z) -> Tuple[Any, List[int]]:
    n0 = _half_floor(z.real)
    gamma = z - 2 * n0
    word = [n0]
    while abs(gamma) < 1:
        if len(word) > REDUCTION_MAX_STEPS:
            raise ReductionFailure(
                f"No fundamental-domain image after {REDUCTION_MAX_STEPS} steps",
                {"tau": [float(z.real), float(z.imag)]},
            )
        inv = -1 / gamma
        n = _half_floor(inv.real)
        gamma = inv - 2 * n
        word.append(n)
    return gamma, word


def reduce_to_fundamental(tau: PointLike) -> ReductionResult:
    """Move τ into {|z| ≥ 1, |Re z| ≤ 1} by z ↦ −1/z and even translations.

    Raises:
        ReductionFailure: if the iteration cap is exceeded
    """
    with mp.workdps(max(EVAL_DPS, mp.dps)):
        gamma, word = _reduce_mp(_as_mpc(tau))
        result = ReductionResult(
            UpperHalfPoint(float(gamma.real), float(gamma.imag)),
            len(word) - 1,
            word,
            float(gamma.imag),
        )
    logger.debug(f"Reduced {tau} to {result.tau_prime} in {result.steps} steps")
    return result


# Theta functions ----------------------------------------------------------


class ThetaKind(str, Enum):
    THETA2 = "theta2"
    THETA3 = "theta3"
    THETA4 = "theta4"


def _theta_series_values(z) -> Tuple[Any, Any, Any]:
    """(Θ2, Θ3, Θ4) at z from mpmath's nome series; Im z bounded below."""
    ipi = mp.mpc(0, 1) * mp.pi
    q = mp.exp(ipi * z)
    # jtheta(2, ...) carries the principal q^{1/4}; rotate it onto e^{iπz/4}
    branch = mp.exp(ipi * z / 4 - mp.log(q) / 4)
    return branch * mp.jtheta(2, 0, q), mp.jtheta(3, 0, q), mp.jtheta(4, 0, q)


def _theta_path(z) -> Tuple[Any, List[Tuple[str, int, Any]]]:
    """Moves taking z to a point where the nome series converges fast.

    Each entry is (kind, k, point after the move).
    """
    path: List[Tuple[str, int, Any]] = []
    if z.imag >= DIRECT_SUM_MIN_IM:
        return z, path
    w = z
    n0 = _half_floor(w.real)
    gamma, word = _reduce_mp(w)
    w = w - 2 * n0
    path.append(("T", -2 * n0, w))
    for n in word[1:]:
        w = -1 / w
        path.append(("S", 0, w))
        w = w - 2 * n
        path.append(("T", -2 * n, w))
    if w.imag < DIRECT_SUM_MIN_IM:
        # near a cusp ±1: z ↦ −1/(z ∓ 1), then recentre
        c = 1 if w.real > 0 else -1
        w = w - c
        path.append(("T", -c, w))
        w = -1 / w
        path.append(("S", 0, w))
        k = int(mp.nint(w.real))
        w = w - k
        path.append(("T", -k, w))
    return w, path


def _pull_back(values: Tuple[Any, Any, Any], path) -> Tuple[Any, Any, Any]:
    t2, t3, t4 = values
    for kind, k, after in reversed(path):
        if kind == "T":
            t2 = t2 * mp.exp(-mp.mpc(0, 1) * mp.pi * k / 4)
            if k % 2:
                t3, t4 = t4, t3
        else:
            factor = mp.sqrt(-mp.mpc(0, 1) * after)
            t2, t3, t4 = factor * t4, factor * t3, factor * t2
    return t2, t3, t4


def theta_values(z) -> Tuple[Any, Any, Any]:
    """(Θ2, Θ3, Θ4) at an mpc point, at the current mpmath precision."""
    w, path = _theta_path(z)
    return _pull_back(_theta_series_values(w), path)


def theta_imaginary_axis(t) -> Tuple[Any, Any, Any]:
    """(Θ2, Θ3, Θ4) at z = it for real t ≥ 1, as real mpf values."""
    return tuple(mp.re(v) for v in _theta_series_values(mp.mpc(0, t)))


def theta_eval(which: Union[ThetaKind, str], z: PointLike) -> complex:
    """Θ2, Θ3 or Θ4 at z, accurate to well below 1e−14."""
    index = {ThetaKind.THETA2: 0, ThetaKind.THETA3: 1, ThetaKind.THETA4: 2}[ThetaKind(which)]
    with mp.workdps(EVAL_DPS):
        return complex(theta_values(_as_mpc(z))[index])


def _lambda_J(z) -> Tuple[Any, Any]:
    t2, t3, _ = theta_values(z)
    lam = (t2 / t3) ** 4
    return lam, lam * (1 - lam) / 16


def lambda_J_eval(z: PointLike) -> Tuple[complex, complex]:
    """λ(z) = Θ2⁴/Θ3⁴ and J(z) = λ(1−λ)/16."""
    with mp.workdps(EVAL_DPS):
        lam, J = _lambda_J(_as_mpc(z))
        return complex(lam), complex(J)


def transformation_residuals(points: Sequence[PointLike]) -> Dict[str, float]:
    """Largest residual of each theta, λ and J transformation law over ``points``."""
    laws = [
        "jacobi",
        "theta3_inversion",
        "theta3_translation",
        "lambda_translation",
        "lambda_inversion",
        "J_period",
        "J_inversion",
    ]
    worst = {law: 0.0 for law in laws}
    with mp.workdps(EVAL_DPS):
        for point in points:
            z = _as_mpc(point)
            t2, t3, t4 = theta_values(z)
            inv = -1 / z
            lam, J = _lambda_J(z)
            lam_inv, J_inv = _lambda_J(inv)
            lam_1, _ = _lambda_J(z + 1)
            _, J_2 = _lambda_J(z + 2)
            residuals = {
                "jacobi": abs(t3**4 - t2**4 - t4**4),
                "theta3_inversion": abs(
                    theta_values(inv)[1] / mp.sqrt(-mp.mpc(0, 1) * z) - t3
                ),
                "theta3_translation": abs(theta_values(z + 1)[1] - t4),
                "lambda_translation": abs(lam_1 - lam / (lam - 1)),
                "lambda_inversion": abs(lam_inv - (1 - lam)),
                "J_period": abs(J_2 - J),
                "J_inversion": abs(J_inv - J),
            }
            for law, value in residuals.items():
                worst[law] = max(worst[law], float(value))
    return worst


# Sign and monotonicity along 1 + it ---------------------------------------


@dataclass
class SignCheckReport:
    """θ(1+it)³ ≥ 0, 1 − 2λ(1+it) ≥ 1 and 1/J(1+it) ≤ 0 decreasing on a grid."""

    passed: bool
    t_grid: List[float]
    theta_cubed: List[float]
    one_minus_two_lambda: List[float]
    inv_J: List[float]
    lam: List[float]
    max_imag: float
    violations: List[str] = field(default_factory=list)


def modular_sign_check(t_grid: Sequence[float]) -> SignCheckReport:
    """Check the sign facts behind the Laplace-transform arguments on a t-grid."""
    grid = [float(t) for t in t_grid]
    if not grid or any(t <= 0 for t in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidArgumentError("t_grid must be positive and strictly increasing")

    theta_cubed, one_minus, inv_J, lams = [], [], [], []
    max_imag = 0.0
    with mp.workdps(EVAL_DPS):
        for t in grid:
            z = mp.mpc(1, t)
            _, t3, _ = theta_values(z)
            lam, J = _lambda_J(z)
            values = (t3**3, 1 - 2 * lam, 1 / J, lam)
            max_imag = max(max_imag, *(float(abs(v.imag)) for v in values))
            theta_cubed.append(float(values[0].real))
            one_minus.append(float(values[1].real))
            inv_J.append(float(values[2].real))
            lams.append(float(values[3].real))

    violations = []
    for t, a, b, c, d in zip(grid, theta_cubed, one_minus, inv_J, lams):
        if a < 0:
            violations.append(f"θ(1+{t}i)³ = {a:.3g} < 0")
        if b < 1:
            violations.append(f"1 − 2λ(1+{t}i) = {b:.3g} < 1")
        if c > 0:
            violations.append(f"1/J(1+{t}i) = {c:.3g} > 0")
        if d > 0:
            violations.append(f"λ(1+{t}i) = {d:.3g} > 0")
    for (t0, a), (t1, b) in zip(zip(grid, inv_J), zip(grid[1:], inv_J[1:])):
        if not b < a:
            violations.append(f"1/J(1+it) not decreasing between t={t0} and t={t1}")
    if max_imag >= 1e-12:
        violations.append(f"Imaginary parts reach {max_imag:.3g}")

    report = SignCheckReport(
        passed=not violations,
        t_grid=grid,
        theta_cubed=theta_cubed,
        one_minus_two_lambda=one_minus,
        inv_J=inv_J,
        lam=lams,
        max_imag=max_imag,
        violations=violations,
    )
    logger.info(f"Sign check on {len(grid)} points: {'pass' if report.passed else 'fail'}")
    return report


# Odd special function -----------------------------------------------------


def d0_eval(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """d_0^+(x) = sin(πx²)/sinh(πx), with d_0^+(0) = 0 and slope 1 at the origin."""
    x_arr = np.asarray(x, dtype=float)
    small = np.abs(x_arr) < 1e-8
    safe = np.where(small, 1.0, x_arr)
    with np.errstate(over="ignore"):
        out = np.where(small, x_arr, np.sin(np.pi * safe**2) / np.sinh(np.pi * safe))
    return float(out) if out.ndim == 0 else out


def d0_vanishing_check(n_max: int = 64, tol: float = 1e-12) -> Dict[str, Any]:
    """d_0^+(√n) = 0 for 1 ≤ n ≤ n_max and d_0^+(x)/x → 1 at the origin."""
    if n_max < 1:
        raise InvalidArgumentError(f"n_max must be ≥ 1, got {n_max}")
    roots = np.sqrt(np.arange(1, n_max + 1, dtype=float))
    max_at_roots = float(np.max(np.abs(d0_eval(roots))))
    h = 1e-6
    slope = float(d0_eval(h)) / h
    return {
        "n_max": n_max,
        "max_abs_at_roots": max_at_roots,
        "slope_at_zero": slope,
        "passed": bool(max_at_roots < tol and abs(slope - 1.0) < 1e-6),
    }
