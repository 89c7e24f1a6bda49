"""
The even Fourier-interpolation basis at the square roots of the integers.

g_n^+ = θ³·P_n^+(1/J) and g_n^− = θ³(1−2λ)·P_n^−(1/J) are built as exact q-series
with P_n^± monic of degree n, normalized so g_n^± = q^{−n} + O(q) (plus) and
q^{−n} + 0·q^{−n+1} + … + 0·q^{−1} + c_0 + O(q) with P_n^−(0) = 0 (minus).

b_n^±(x) = ½∫_{−1}^{1} g_n^±(z) e^{iπx²z} dz along −1 → −1+i → 1+i → 1, and
a_n = (b_n^+ + b_n^−)/2, â_n = (b_n^+ − b_n^−)/2.
"""

import functools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from mpmath import mp
from tqdm import tqdm

from .errors import (
    ConstructionFailure,
    InvalidArgumentError,
    KernelPoleError,
    QuadratureFailure,
)
from .modular import (
    EVAL_DPS,
    QSeries,
    UpperHalfPoint,
    _as_mpc,
    modular_series,
    theta_imaginary_axis,
    theta_values,
)

logger = logging.getLogger(__name__)

# extra q-series terms beyond 4n kept for the top leg of the contour
SERIES_MARGIN = 60

# the contour route's vertical legs are mapped to u = 1/t ∈ [1, ∞); panels grow by this ratio
PANEL_RATIO = 2.0 ** 0.25

# Laplace route applies for x² > n + LAPLACE_MARGIN
LAPLACE_MARGIN = 0.5


class BasisSign(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


def working_dps(n_max: int) -> int:
    """Decimal digits needed to absorb the e^{π(n−x²)} cancellation for n ≤ n_max."""
    return EVAL_DPS + math.ceil(1.37 * n_max)


def series_order(n: int) -> int:
    return 4 * n + SERIES_MARGIN


# Construction -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RVBasis:
    """g_n^± as an exact q-series together with its polynomial P_n^± in 1/J."""

    n: int
    sign: BasisSign
    g_series: QSeries
    poly: Tuple[int, ...]
    order: int

    def __post_init__(self):
        object.__setattr__(self, "sign", BasisSign(self.sign))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "sign": self.sign.value,
            "lead": self.g_series.lead,
            "coeffs": [str(c) for c in self.g_series.coeffs],
            "order": self.order,
            "poly": [str(p) for p in self.poly],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RVBasis":
        try:
            series = QSeries.from_dict(
                {"lead": data["lead"], "coeffs": data["coeffs"], "order": data["order"]}
            )
            poly = tuple(int(p) for p in data.get("poly", []))
            return cls(int(data["n"]), BasisSign(data["sign"]), series, poly, int(data["order"]))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"Malformed basis object: {e}") from e


@functools.lru_cache(maxsize=16)
def _building_blocks(n_max: int, sign: BasisSign, order: int) -> Tuple[QSeries, ...]:
    """V_k = θ³·(1/J)^k (plus) or θ³(1−2λ)·(1/J)^k (minus) for 0 ≤ k ≤ n_max, through q^order."""
    base = modular_series(order + n_max + 2)
    block = base.theta**3
    if sign == BasisSign.MINUS:
        block = block * (1 - base.lam * 2)
    blocks = [block.truncate(order)]
    for _ in range(n_max):
        block = block * base.inv_J
        blocks.append(block.truncate(order))
    return tuple(blocks)


def _assemble(n: int, sign: BasisSign, blocks: Sequence[QSeries]) -> Tuple[QSeries, Tuple[int, ...]]:
    """Back-substitute the lower coefficients of P_n from the unit-triangular block system."""
    poly = [0] * (n + 1)
    poly[n] = 1
    g = blocks[n]
    lowest = 0 if sign == BasisSign.PLUS else 1
    for j in range(n - 1, lowest - 1, -1):
        e = g.coefficient(-j)
        if e:
            poly[j] = -e
            g = g + blocks[j] * poly[j]
    return g, tuple(int(p) for p in poly)


def _check_normalization(g: QSeries, n: int, sign: BasisSign) -> None:
    if g.lead != -n or g.coefficient(-n) != 1:
        raise ConstructionFailure(
            f"g_{n}^{sign.value} does not start with q^{-n}", {"lead": g.lead}
        )
    top = 0 if sign == BasisSign.PLUS else -1
    stray = [k for k in range(-n + 1, top + 1) if g.coefficient(k) != 0]
    if stray:
        raise ConstructionFailure(
            f"g_{n}^{sign.value} keeps nonzero coefficients at q^{stray}", {"exponents": stray}
        )


def gn_construct(n: int, sign: Union[BasisSign, str], order: Optional[int] = None) -> RVBasis:
    """Build g_n^± exactly as a q-series through ``order`` (default 4n + 60).

    g_0^+ = θ³ and g_0^− = 0.

    Raises:
        ConstructionFailure: if the assembled series misses the normalization
    """
    sign = BasisSign(sign)
    if n < 0:
        raise InvalidArgumentError(f"n must be ≥ 0, got {n}")
    order = series_order(n) if order is None else order
    if order < n + 4:
        raise InvalidArgumentError(f"order must be ≥ n + 4 = {n + 4}, got {order}")

    if n == 0 and sign == BasisSign.MINUS:
        return RVBasis(0, sign, QSeries(order + 1, [], order), (0,), order)
    g, poly = _assemble(n, sign, _building_blocks(n, sign, order))
    _check_normalization(g, n, sign)
    logger.debug(f"Constructed g_{n}^{sign.value} through q^{order}")
    return RVBasis(n, sign, g, poly, order)


def kernel_coefficients(n: int, sign: Union[BasisSign, str]) -> Tuple[int, ...]:
    """Coefficients of P_n^± read off the generating kernels.

    Plus: the coefficient of (1/J)^k is [q^n](θ(1−2λ)J^k), 0 ≤ k ≤ n.
    Minus: [q^n](θJ^k) for 1 ≤ k ≤ n, and 0 for k = 0.
    """
    sign = BasisSign(sign)
    if n < 0:
        raise InvalidArgumentError(f"n must be ≥ 0, got {n}")
    base = modular_series(n + 2)
    factor = base.theta * (1 - base.lam * 2) if sign == BasisSign.PLUS else base.theta
    coefficients = []
    power = QSeries.constant(1, n + 2)
    for k in range(n + 1):
        if k == 0 and sign == BasisSign.MINUS:
            coefficients.append(0)
        else:
            coefficients.append(int((factor * power).coefficient(n)))
        power = power * base.J
    return tuple(coefficients)


# Quadrature rules ---------------------------------------------------------


@functools.lru_cache(maxsize=32)
def _gauss_legendre(points: int, dps: int) -> Tuple[Tuple[Any, ...], Tuple[Any, ...]]:
    """Gauss–Legendre nodes and weights on [−1, 1] at ``dps`` digits."""
    with mp.workdps(dps):
        X, W = mp.gauss_quadrature(points, "legendre")
        return tuple(X[i] for i in range(points)), tuple(W[i] for i in range(points))


@dataclass(frozen=True, eq=False)
class PanelRule:
    """Composite Gauss–Legendre rule on geometric panels of [lo, hi]."""

    nodes: Tuple[Any, ...]
    weights: Tuple[Any, ...]
    points: int

    @classmethod
    def geometric(cls, lo: float, hi: float, points: int, dps: int) -> "PanelRule":
        X, W = _gauss_legendre(points, dps)
        with mp.workdps(dps):
            count = max(1, math.ceil(math.log(hi / lo) / math.log(PANEL_RATIO)))
            edges = [mp.mpf(lo) * (mp.mpf(hi) / lo) ** (mp.mpf(i) / count) for i in range(count + 1)]
            nodes, weights = [], []
            for a, b in zip(edges, edges[1:]):
                half = (b - a) / 2
                mid = (a + b) / 2
                nodes.extend(mid + half * x for x in X)
                weights.extend(half * w for w in W)
        return cls(tuple(nodes), tuple(weights), points)


def _rule_points(n_max: int) -> int:
    return 16 + (3 * n_max) // 2


def _cusp_extent(dps: int) -> float:
    """Where e^{−3πu/4} falls below 10^{−dps−5}."""
    return max(16.0, 2.0 ** math.ceil(math.log2((dps + 5) * math.log(10) / (0.75 * math.pi))))


# Evaluation ---------------------------------------------------------------


def _horner(poly: Sequence[Any], x) -> Any:
    acc = mp.zero
    for p in reversed(poly):
        acc = acc * x + p
    return acc


@dataclass
class _NodeValues:
    """g_n^± at the nodes of one rule, pre-multiplied by the rule weights."""

    rule: PanelRule
    inv_nodes: List[Any]
    weighted: Dict[BasisSign, List[List[Any]]] = field(default_factory=dict)


@dataclass
class BasisValues:
    """b_n^± at one point for all 0 ≤ n ≤ n_max, with an optional error estimate."""

    x: float
    plus: np.ndarray
    minus: np.ndarray
    error: Optional[float] = None

    @property
    def a(self) -> np.ndarray:
        return (self.plus + self.minus) / 2.0

    @property
    def a_hat(self) -> np.ndarray:
        return (self.plus - self.minus) / 2.0


class BasisSet:
    """g_n^± for 0 ≤ n ≤ n_max and the evaluation of b_n^±, a_n, â_n.

    Quadrature nodes and the g-values on them are computed once and shared by
    every evaluation point, at the working precision of ``n_max``.
    """

    def __init__(self, n_max: int, show_progress: bool = False):
        if n_max < 0:
            raise InvalidArgumentError(f"n_max must be ≥ 0, got {n_max}")
        self.n_max = n_max
        self.dps = working_dps(n_max)
        self.order = series_order(n_max)
        self.show_progress = show_progress
        self.forms: Dict[BasisSign, List[RVBasis]] = {}

        signs = list(BasisSign)
        for sign in tqdm(signs, desc="Constructing g_n", disable=not show_progress):
            blocks = _building_blocks(n_max, sign, self.order)
            forms = []
            for n in range(n_max + 1):
                if n == 0 and sign == BasisSign.MINUS:
                    forms.append(gn_construct(0, sign, self.order))
                    continue
                g, poly = _assemble(n, sign, blocks)
                _check_normalization(g, n, sign)
                forms.append(RVBasis(n, sign, g, poly, self.order))
            self.forms[sign] = forms

        with mp.workdps(self.dps):
            self._coeffs = {
                sign: [[mp.mpf(int(c)) for c in form.g_series.coeffs] for form in forms]
                for sign, forms in self.forms.items()
            }
            self._polys = {
                sign: [[mp.mpf(p) for p in form.poly] for form in forms]
                for sign, forms in self.forms.items()
            }
        self._cusp_rules: Dict[int, _NodeValues] = {}
        self._laplace_rules: Dict[int, _NodeValues] = {}
        logger.info(f"Built basis set n ≤ {n_max} (order {self.order}, {self.dps} digits)")

    def basis(self, n: int, sign: Union[BasisSign, str]) -> RVBasis:
        self._check_index(n)
        return self.forms[BasisSign(sign)][n]

    def _check_index(self, n: int) -> None:
        if not 0 <= n <= self.n_max:
            raise InvalidArgumentError(f"n={n} outside the basis set 0..{self.n_max}")

    # values of g along 1 + it

    def _g_from_invariants(self, theta_cubed, inv_J, minus_factor) -> Dict[BasisSign, List[Any]]:
        plus = [theta_cubed * _horner(p, inv_J) for p in self._polys[BasisSign.PLUS]]
        minus = [
            theta_cubed * minus_factor * _horner(p, inv_J) for p in self._polys[BasisSign.MINUS]
        ]
        return {BasisSign.PLUS: plus, BasisSign.MINUS: minus}

    def _cusp_values(self, points: int) -> _NodeValues:
        """Nodes u ≥ 1 for t = 1/u ∈ (0, 1]: θ(1+i/u) = √u·Θ2(iu), 1/J = 16μ²/(μ−1)."""
        if points in self._cusp_rules:
            return self._cusp_rules[points]
        with mp.workdps(self.dps):
            rule = PanelRule.geometric(1.0, _cusp_extent(self.dps), points, self.dps)
            table = _NodeValues(rule, [1 / u for u in rule.nodes])
            columns: Dict[BasisSign, List[List[Any]]] = {s: [] for s in BasisSign}
            for u, w in zip(rule.nodes, rule.weights):
                t2, t3, _ = theta_imaginary_axis(u)
                mu = (t2 / t3) ** 4
                theta_cubed = (mp.sqrt(u) * t2) ** 3
                values = self._g_from_invariants(theta_cubed, 16 * mu**2 / (mu - 1), 2 / mu - 1)
                scale = w / u**2
                for sign in BasisSign:
                    columns[sign].append([scale * v for v in values[sign]])
            table.weighted = {sign: list(map(list, zip(*cols))) for sign, cols in columns.items()}
        self._cusp_rules[points] = table
        logger.debug(f"Tabulated g at {len(rule.nodes)} cusp nodes")
        return table

    def _laplace_values(self, points: int) -> _NodeValues:
        """Nodes t ≥ 1: θ(1+it) = Θ4(it), λ(1+it) = −Θ2(it)⁴/Θ4(it)⁴."""
        if points in self._laplace_rules:
            return self._laplace_rules[points]
        with mp.workdps(self.dps):
            extent = (self.dps + 5) * math.log(10) / (math.pi * LAPLACE_MARGIN)
            rule = PanelRule.geometric(1.0, extent, points, self.dps)
            table = _NodeValues(rule, list(rule.nodes))
            columns: Dict[BasisSign, List[List[Any]]] = {s: [] for s in BasisSign}
            for t, w in zip(rule.nodes, rule.weights):
                t2, _, t4 = theta_imaginary_axis(t)
                lam = -((t2 / t4) ** 4)
                values = self._g_from_invariants(t4**3, 16 / (lam * (1 - lam)), 1 - 2 * lam)
                for sign in BasisSign:
                    columns[sign].append([w * v for v in values[sign]])
            table.weighted = {sign: list(map(list, zip(*cols))) for sign, cols in columns.items()}
        self._laplace_rules[points] = table
        return table

    # the three pieces of b_n^±(x) at s = x²

    def _cusp_integrals(self, s, points: int) -> Dict[BasisSign, List[Any]]:
        """∫_0^1 g_n(1+it) e^{−πst} dt for every n, via t = 1/u."""
        table = self._cusp_values(points)
        kernel = [mp.exp(-mp.pi * s * v) for v in table.inv_nodes]
        return {
            sign: [mp.fdot(row, kernel) for row in rows] for sign, rows in table.weighted.items()
        }

    def _laplace_integrals(self, s, points: int) -> Dict[BasisSign, List[Any]]:
        """∫_1^∞ g_n(1+it) e^{−πst} dt for every n."""
        table = self._laplace_values(points)
        kernel = [mp.exp(-mp.pi * s * t) for t in table.inv_nodes]
        return {
            sign: [mp.fdot(row, kernel) for row in rows] for sign, rows in table.weighted.items()
        }

    def _top_leg(self, s) -> Dict[BasisSign, List[Any]]:
        """½∫_{−1}^{1} g_n(u+i) e^{iπs(u+i)} du = Σ_k c_k e^{−π(k+s)} sinc(k+s)."""
        lo = -self.n_max
        factors = [
            mp.exp(-mp.pi * (k + s)) * mp.sincpi(k + s) for k in range(lo, self.order + 1)
        ]
        out: Dict[BasisSign, List[Any]] = {}
        for sign, forms in self.forms.items():
            values = []
            for form, coeffs in zip(forms, self._coeffs[sign]):
                if not coeffs:
                    values.append(mp.zero)
                    continue
                start = form.g_series.lead - lo
                values.append(mp.fdot(coeffs, factors[start : start + len(coeffs)]))
            out[sign] = values
        return out

    def _contour(self, s, points: int) -> Dict[BasisSign, List[Any]]:
        sin_part = mp.sinpi(s)
        top = self._top_leg(s)
        if sin_part == 0:
            return top
        side = self._cusp_integrals(s, points)
        return {
            sign: [t + sin_part * v for t, v in zip(top[sign], side[sign])] for sign in BasisSign
        }

    def _laplace(self, s, points: int) -> Dict[BasisSign, List[Any]]:
        sin_part = mp.sinpi(s)
        if sin_part == 0:
            return {sign: [mp.zero] * (self.n_max + 1) for sign in BasisSign}
        near = self._cusp_integrals(s, points)
        far = self._laplace_integrals(s, points)
        return {
            sign: [sin_part * (a + b) for a, b in zip(near[sign], far[sign])] for sign in BasisSign
        }

    def values_at_s(
        self, s: float, route: str = "contour", estimate_error: bool = False
    ) -> BasisValues:
        """b_n^±(√s) for all n ≤ n_max from the squared argument s = x² ≥ 0.

        ``route`` is "contour" or "laplace"; the Laplace route is valid only for
        indices with s > n + 1/2, other entries are left as NaN.
        """
        if s < 0:
            raise InvalidArgumentError(f"s = x² must be ≥ 0, got {s}")
        if route not in ("contour", "laplace"):
            raise InvalidArgumentError(f"Unknown route {route!r}")
        evaluate = self._contour if route == "contour" else self._laplace
        points = _rule_points(self.n_max)
        valid = np.ones(self.n_max + 1, dtype=bool)
        if route == "laplace":
            valid = np.arange(self.n_max + 1) + LAPLACE_MARGIN < s
        with mp.workdps(self.dps):
            s_mp = mp.mpf(s)
            values = evaluate(s_mp, points)
            error = None
            if estimate_error:
                coarse = evaluate(s_mp, points - 6)
                gaps = [
                    float(abs(a - b))
                    for sign in BasisSign
                    for n, (a, b) in enumerate(zip(values[sign], coarse[sign]))
                    if valid[n]
                ]
                error = max(gaps, default=0.0)
            plus = np.array([float(v) for v in values[BasisSign.PLUS]])
            minus = np.array([float(v) for v in values[BasisSign.MINUS]])
        plus[~valid] = np.nan
        minus[~valid] = np.nan
        return BasisValues(math.sqrt(s), plus, minus, error)

    def values_at(self, x: float, route: str = "contour", estimate_error: bool = False) -> BasisValues:
        return self.values_at_s(float(x) ** 2, route, estimate_error)

    def table(self, n: int, xs: Sequence[float]) -> Dict[str, np.ndarray]:
        """Columns x, a_n(x), â_n(x) over a grid."""
        self._check_index(n)
        rows = [self.values_at(x) for x in tqdm(xs, desc=f"a_{n}", disable=not self.show_progress)]
        return {
            "x": np.asarray(xs, dtype=float),
            "a": np.array([r.a[n] for r in rows]),
            "a_hat": np.array([r.a_hat[n] for r in rows]),
        }


@functools.lru_cache(maxsize=4)
def basis_set(n_max: int) -> BasisSet:
    """Shared basis set for 0 ≤ n ≤ n_max."""
    return BasisSet(n_max)


def _checked_values(
    evaluator: BasisSet, n: int, x: float, tol: float, route: str
) -> BasisValues:
    if tol <= 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    s = float(x) ** 2
    if route == "auto":
        route = "laplace" if s > n + LAPLACE_MARGIN else "contour"
    if route == "laplace" and s <= n + LAPLACE_MARGIN:
        raise InvalidArgumentError(f"Laplace route needs x² > n + 1/2, got x²={s:.6g}, n={n}")
    values = evaluator.values_at_s(s, route, estimate_error=True)
    if values.error > tol:
        raise QuadratureFailure(
            f"Quadrature error {values.error:.3g} exceeds tol={tol} at x={x}",
            {"achieved": values.error, "tol": tol, "n": n, "x": float(x), "route": route},
        )
    return values


def bn_eval(
    basis: RVBasis,
    x: float,
    tol: float = 1e-8,
    route: str = "auto",
    evaluator: Optional[BasisSet] = None,
) -> float:
    """b_n^±(x).

    ``route="auto"`` takes the Laplace route for x² > n + 1/2 and the contour
    route otherwise.

    Raises:
        QuadratureFailure: if the estimated quadrature error exceeds ``tol``
    """
    evaluator = evaluator if evaluator is not None else basis_set(basis.n)
    values = _checked_values(evaluator, basis.n, x, tol, route)
    column = values.plus if basis.sign == BasisSign.PLUS else values.minus
    return float(column[basis.n])


def an_eval(
    n: int, x: float, tol: float = 1e-8, evaluator: Optional[BasisSet] = None
) -> Tuple[float, float]:
    """(a_n(x), â_n(x)) = ((b_n^+ + b_n^−)/2, (b_n^+ − b_n^−)/2)."""
    if n < 0:
        raise InvalidArgumentError(f"n must be ≥ 0, got {n}")
    evaluator = evaluator if evaluator is not None else basis_set(n)
    values = _checked_values(evaluator, n, x, tol, "auto")
    return float(values.a[n]), float(values.a_hat[n])


def origin_values(n: int) -> Tuple[float, float]:
    """(a_n(0), â_n(0)): 1/2 and 1/2 at n = 0, −1 and +1 at nonzero squares, else 0."""
    if n < 0:
        raise InvalidArgumentError(f"n must be ≥ 0, got {n}")
    if n == 0:
        return 0.5, 0.5
    if math.isqrt(n) ** 2 == n:
        return -1.0, 1.0
    return 0.0, 0.0


# Checks on the basis ------------------------------------------------------


@dataclass
class FourierReport:
    """Sup-norm distance between the numerical Fourier transform of b_n^± and ±b_n^±."""

    n_max: int
    xi_max: float
    residuals: Dict[str, List[float]]
    max_residual: float
    tol: float
    passed: bool


def fourier_check(
    n_max: int = 4,
    xi_max: float = 6.0,
    xi_step: float = 0.25,
    x_max: float = 8.0,
    panels: int = 8,
    points: int = 64,
    tol: float = 1e-4,
    evaluator: Optional[BasisSet] = None,
) -> FourierReport:
    """Transform b_n^± by Gauss–Legendre quadrature on [0, x_max] and compare with ±b_n^±.

    Both functions are even, so b̂(ξ) = 2∫_0^∞ b(x) cos(2πxξ) dx.
    """
    evaluator = evaluator if evaluator is not None else basis_set(n_max)
    nodes, weights = np.polynomial.legendre.leggauss(points)
    edges = np.linspace(0.0, x_max, panels + 1)
    xs = np.concatenate([(b - a) / 2 * nodes + (a + b) / 2 for a, b in zip(edges, edges[1:])])
    ws = np.concatenate([(b - a) / 2 * weights for a, b in zip(edges, edges[1:])])

    samples = [evaluator.values_at(x) for x in xs]
    plus = np.array([v.plus[: n_max + 1] for v in samples])
    minus = np.array([v.minus[: n_max + 1] for v in samples])

    xis = np.arange(0.0, xi_max + xi_step / 2, xi_step)
    cosines = 2.0 * np.cos(2.0 * np.pi * np.outer(xis, xs)) * ws
    direct = [evaluator.values_at(xi) for xi in xis]
    residuals = {}
    for label, table, sign in (("plus", plus, 1.0), ("minus", minus, -1.0)):
        transformed = cosines @ table
        target = np.array([(v.plus if sign > 0 else v.minus)[: n_max + 1] for v in direct])
        residuals[label] = [float(r) for r in np.max(np.abs(transformed - sign * target), axis=0)]
    worst = max(max(r) for r in residuals.values())
    logger.info(f"Fourier eigenrelation residual {worst:.3g} for n ≤ {n_max}")
    return FourierReport(n_max, xi_max, residuals, worst, tol, worst <= tol)


@dataclass
class DecayReport:
    """Normalized decay ratios R(n) of b_n^± and the spread test on them."""

    c: float
    n_values: List[int]
    ratios: List[float]
    gaussian_ratios: List[float]
    median: float
    a0_weighted_max: float
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)


def _spread_ok(ratios: Sequence[float], factor: float = 10.0) -> Tuple[bool, float]:
    """No ratio from the median index on exceeds ``factor`` times the median."""
    median = float(np.median(ratios))
    tail = ratios[len(ratios) // 2 :]
    return bool(max(tail) <= factor * median), median


def decay_profile(
    n_values: Sequence[int],
    c: float = 0.5,
    step: float = 0.1,
    evaluator: Optional[BasisSet] = None,
    a0_rate: float = 1.2,
    a0_extent: float = 12.0,
) -> DecayReport:
    """R(n) = max_{|x| ≤ 4√n} |b_n^±(x)|·e^{c|x|/√n} / (n^{1/4} log^{3/2}(1+n)).

    Also records the Gaussian-regime ratio max_{|x|<n} |b_n^±(x)|e^{cx²/n} and
    max_{[0, a0_extent]} |a_0(x)|e^{a0_rate·x}.
    """
    if c <= 0:
        raise InvalidArgumentError(f"c must be positive, got {c}")
    n_values = sorted(int(n) for n in n_values)
    if not n_values or n_values[0] < 1:
        raise InvalidArgumentError("decay_profile needs indices n ≥ 1")
    n_top = n_values[-1]
    evaluator = evaluator if evaluator is not None else basis_set(n_top)
    extent = max(4.0 * math.sqrt(n_top), a0_extent)
    xs = np.arange(0.0, extent + step / 2, step)
    samples = [evaluator.values_at(x) for x in xs]
    plus = np.array([v.plus for v in samples])
    minus = np.array([v.minus for v in samples])
    envelope = np.maximum(np.abs(plus), np.abs(minus))

    ratios, gaussian = [], []
    for n in n_values:
        window = xs <= 4.0 * math.sqrt(n)
        scale = n**0.25 * math.log1p(n) ** 1.5
        ratios.append(
            float(np.max(envelope[window, n] * np.exp(c * xs[window] / math.sqrt(n)))) / scale
        )
        inner = xs < n
        gaussian.append(float(np.max(envelope[inner, n] * np.exp(c * xs[inner] ** 2 / n))))

    a0 = np.abs((plus[:, 0] + minus[:, 0]) / 2.0)
    a0_window = xs <= a0_extent
    a0_weighted = a0[a0_window] * np.exp(a0_rate * xs[a0_window])
    half = a0_weighted.size // 2
    a0_ok = bool(np.max(a0_weighted[half:]) <= 10.0 * max(np.max(a0_weighted[:half]), 1e-300))

    ratios_ok, median = _spread_ok(ratios)
    gaussian_ok, _ = _spread_ok(gaussian)
    report = DecayReport(
        c=c,
        n_values=n_values,
        ratios=ratios,
        gaussian_ratios=gaussian,
        median=median,
        a0_weighted_max=float(np.max(a0_weighted)),
        passed=ratios_ok and a0_ok,
        detail={"gaussian_bounded": gaussian_ok, "a0_bounded": a0_ok},
    )
    logger.info(f"Decay profile for n ∈ [{n_values[0]}, {n_top}]: median R = {median:.3g}")
    return report


# Generating functions -----------------------------------------------------


def _tau_invariants(tau) -> Tuple[Any, Any, Any]:
    t2, t3, _ = theta_values(tau)
    lam = (t2 / t3) ** 4
    return t3, lam, lam * (1 - lam) / 16


def _kernel(sign: BasisSign, tau_inv, theta_z, lam_z, J_z) -> Any:
    theta_t, lam_t, J_t = tau_inv
    gap = J_z - J_t
    if abs(gap) < mp.mpf(10) ** (-8) * max(abs(J_z), 1):
        raise KernelPoleError(
            "τ lies on the Γ_θ-orbit of a contour point", {"gap": float(abs(gap))}
        )
    if sign == BasisSign.PLUS:
        return theta_t * (1 - 2 * lam_t) * theta_z**3 * J_z / gap
    return theta_t * J_t * theta_z**3 * (1 - 2 * lam_z) / gap


def kernel_eval(sign: Union[BasisSign, str], tau: Union[UpperHalfPoint, complex], z) -> complex:
    """K_±(τ, z), the generating kernel of the g_n^±.

    K_+ = θ(τ)(1−2λ(τ))θ(z)³J(z)/(J(z)−J(τ)),  K_− = θ(τ)J(τ)θ(z)³(1−2λ(z))/(J(z)−J(τ)).
    """
    sign = BasisSign(sign)
    with mp.workdps(EVAL_DPS):
        zz = _as_mpc(z)
        t2, t3, _ = theta_values(zz)
        lam = (t2 / t3) ** 4
        return complex(_kernel(sign, _tau_invariants(_as_mpc(tau)), t3, lam, lam * (1 - lam) / 16))


def generating_series(sign: Union[BasisSign, str], tau, z, n_max: int) -> complex:
    """Σ_{n ≤ n_max} g_n^±(z) e^{iπnτ} from the q-series of the g_n."""
    sign = BasisSign(sign)
    with mp.workdps(EVAL_DPS):
        tt = _as_mpc(tau)
        zz = _as_mpc(z)
        q_tau = mp.exp(mp.mpc(0, 1) * mp.pi * tt)
        q_z = mp.exp(mp.mpc(0, 1) * mp.pi * zz)
        total = mp.zero
        for n in range(n_max + 1):
            total += gn_construct(n, sign).g_series.evaluate(q_z) * q_tau**n
        return complex(total)


def verify_generating(
    sign: Union[BasisSign, str],
    tau: Union[UpperHalfPoint, complex],
    x: float,
    N: int,
    points: int = 24,
    evaluator: Optional[BasisSet] = None,
) -> float:
    """|Σ_{n ≤ N} b_n^±(x) e^{iπnτ} − ½∫ K_±(τ, z) e^{iπx²z} dz| along the same contour.

    Raises:
        KernelPoleError: if a contour point is numerically on the pole set of K_±
    """
    sign = BasisSign(sign)
    tt = complex(tau.to_complex() if isinstance(tau, UpperHalfPoint) else tau)
    if tt.imag <= 1:
        raise InvalidArgumentError(f"Generating identity needs Im τ > 1, got {tt.imag}")
    if N < 1:
        raise InvalidArgumentError(f"N must be ≥ 1, got {N}")
    evaluator = evaluator if evaluator is not None else basis_set(N)
    values = evaluator.values_at(x)
    column = values.plus if sign == BasisSign.PLUS else values.minus
    q_tau = np.exp(1j * np.pi * tt)
    series_side = complex(np.sum(column[: N + 1] * q_tau ** np.arange(N + 1)))

    s = float(x) ** 2
    with mp.workdps(EVAL_DPS):
        tau_inv = _tau_invariants(mp.mpc(tt))
        s_mp = mp.mpf(s)
        i = mp.mpc(0, 1)

        # top leg z = u + i
        X, W = _gauss_legendre(points, EVAL_DPS)
        top = mp.zero
        for a in range(-4, 4):
            lo, hi = mp.mpf(a) / 4, mp.mpf(a + 1) / 4
            for xk, wk in zip(X, W):
                u = (lo + hi) / 2 + (hi - lo) / 2 * xk
                z = u + i
                t2, t3, _ = theta_values(z)
                lam = (t2 / t3) ** 4
                K = _kernel(sign, tau_inv, t3, lam, lam * (1 - lam) / 16)
                top += (hi - lo) / 2 * wk * K * mp.exp(i * mp.pi * s_mp * z)
        top /= 2

        # vertical legs folded: sin(πs)∫_0^1 K(τ, 1+it) e^{−πst} dt with t = 1/u
        side = mp.zero
        sin_part = mp.sinpi(s_mp)
        if sin_part != 0:
            rule = PanelRule.geometric(1.0, _cusp_extent(EVAL_DPS), points, EVAL_DPS)
            for u, w in zip(rule.nodes, rule.weights):
                t2, t3, _ = theta_imaginary_axis(u)
                mu = (t2 / t3) ** 4
                K = _kernel(
                    sign, tau_inv, mp.sqrt(u) * t2, (mu - 1) / mu, (mu - 1) / (16 * mu**2)
                )
                side += w / u**2 * K * mp.exp(-mp.pi * s_mp / u)
            side *= sin_part
        kernel_side = complex(top + side)

    residual = abs(series_side - kernel_side)
    logger.info(f"Generating identity ({sign.value}) at τ={tt}, x={x}: residual {residual:.3g}")
    return residual
