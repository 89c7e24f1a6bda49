"""
Sequence containers shared by every operator in the package.

Index windows truncate the infinite index sets ℤ and ℕ; real sequences live on a
window; perturbation profiles hold the node jitter ε_n together with the decay
class they were generated from.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from .errors import InvalidArgumentError, RangeViolationError

logger = logging.getLogger(__name__)


class WindowKind(str, Enum):
    """Whether a window truncates ℤ or ℕ."""

    TWO_SIDED = "two_sided"
    ONE_SIDED = "one_sided"


class DecayKind(str, Enum):
    CONSTANT = "constant"
    POWER_LAW = "power_law"


@dataclass(frozen=True)
class IndexWindow:
    """Inclusive index range [lo, hi]."""

    lo: int
    hi: int
    kind: WindowKind = WindowKind.TWO_SIDED

    def __post_init__(self):
        object.__setattr__(self, "kind", WindowKind(self.kind))
        if self.lo > self.hi:
            raise InvalidArgumentError(f"Empty window [{self.lo}, {self.hi}]")
        if self.kind == WindowKind.ONE_SIDED and self.lo != 0:
            raise InvalidArgumentError(f"One-sided window must start at 0, got lo={self.lo}")

    @classmethod
    def one_sided(cls, n_max: int) -> "IndexWindow":
        return cls(0, n_max, WindowKind.ONE_SIDED)

    @classmethod
    def symmetric(cls, half_width: int) -> "IndexWindow":
        return cls(-half_width, half_width, WindowKind.TWO_SIDED)

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def contains(self, other: "IndexWindow") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def to_dict(self) -> Dict[str, Any]:
        return {"lo": self.lo, "hi": self.hi, "kind": self.kind.value}


@dataclass(frozen=True, eq=False)
class RealSequence:
    """Real values indexed by a window; ``values[i]`` is the entry at ``window.lo + i``."""

    window: IndexWindow
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if values.shape != (self.window.size,):
            raise InvalidArgumentError(
                f"Sequence length {values.shape} does not match window size {self.window.size}"
            )

    @classmethod
    def zeros(cls, window: IndexWindow) -> "RealSequence":
        return cls(window, np.zeros(window.size))

    @classmethod
    def unit(cls, window: IndexWindow, k: int) -> "RealSequence":
        values = np.zeros(window.size)
        values[k - window.lo] = 1.0
        return cls(window, values)

    def __getitem__(self, n: int) -> float:
        if n < self.window.lo or n > self.window.hi:
            return 0.0
        return float(self.values[n - self.window.lo])

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True, eq=False)
class WeightedSeqPair:
    """A pair (x, y) in ℓ²_s(ℕ) × ℓ²_s(ℕ)."""

    x: RealSequence
    y: RealSequence
    s: float = 0.0

    def __post_init__(self):
        if self.x.window != self.y.window:
            raise InvalidArgumentError("x and y must share a window")
        if self.x.window.kind != WindowKind.ONE_SIDED:
            raise InvalidArgumentError("Weighted pairs live on one-sided windows")

    @property
    def window(self) -> IndexWindow:
        return self.x.window

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.x.values, self.y.values])


@dataclass(frozen=True)
class DecayClass:
    """Constant(L) or power law |ε_n| ≤ δ(1+n)^{-p}."""

    kind: DecayKind
    amplitude: float
    exponent: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", DecayKind(self.kind))

    @classmethod
    def constant(cls, L: float) -> "DecayClass":
        return cls(DecayKind.CONSTANT, L)

    @classmethod
    def power_law(cls, delta: float, exponent: float) -> "DecayClass":
        return cls(DecayKind.POWER_LAW, delta, exponent)


@dataclass(frozen=True, eq=False)
class PerturbationProfile:
    """Node jitter ε_n on a window."""

    window: IndexWindow
    eps: np.ndarray
    decay_class: Optional[DecayClass] = None
    L: float = field(init=False)

    def __post_init__(self):
        eps = np.asarray(self.eps, dtype=float).copy()
        eps.setflags(write=False)
        object.__setattr__(self, "eps", eps)
        if eps.shape != (self.window.size,):
            raise InvalidArgumentError(
                f"Profile length {eps.shape} does not match window size {self.window.size}"
            )
        object.__setattr__(self, "L", float(np.max(np.abs(eps))) if eps.size else 0.0)

    def __getitem__(self, n: int) -> float:
        return float(self.eps[n - self.window.lo])

    def covers(self, w: IndexWindow) -> bool:
        return self.window.contains(w)

    def on(self, w: IndexWindow) -> np.ndarray:
        """Jitter restricted to ``w``."""
        if not self.covers(w):
            raise InvalidArgumentError(
                f"Profile window [{self.window.lo}, {self.window.hi}] does not cover "
                f"[{w.lo}, {w.hi}]"
            )
        start = w.lo - self.window.lo
        return self.eps[start : start + w.size]

    def check_sqrt_nodes(self) -> None:
        """Validate the profile for perturbing the nodes √n."""
        if self.window.kind != WindowKind.ONE_SIDED:
            raise RangeViolationError("√n-node profiles need a one-sided window")
        if self.eps[0] != 0.0:
            raise RangeViolationError("√n-node profiles need ε_0 = 0", {"eps_0": float(self.eps[0])})
        if np.any(np.abs(self.eps) >= 0.5):
            raise RangeViolationError(
                "√n-node jitter must lie in (-1/2, 1/2)", {"L": self.L}
            )

    def weighted_sup(self, exponent: float) -> float:
        """sup_n |ε_n| (1+n)^p over a one-sided window."""
        n = self.window.indices()
        return float(np.max(np.abs(self.eps) * (1.0 + n) ** exponent))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "kind": self.window.kind.value,
            "lo": self.window.lo,
            "hi": self.window.hi,
            "eps": [float(e) for e in self.eps],
        }
        if self.decay_class is not None:
            data["decay"] = {
                "kind": self.decay_class.kind.value,
                "amplitude": self.decay_class.amplitude,
                "exponent": self.decay_class.exponent,
            }
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PerturbationProfile":
        try:
            window = IndexWindow(int(data["lo"]), int(data["hi"]), WindowKind(data["kind"]))
            decay = data.get("decay")
            decay_class = (
                DecayClass(decay["kind"], float(decay["amplitude"]), float(decay["exponent"]))
                if decay
                else None
            )
            return cls(window, np.asarray(data["eps"], dtype=float), decay_class)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"Malformed profile object: {e}") from e


def make_profile(
    decay: DecayClass, window: IndexWindow, sqrt_nodes: bool = False
) -> PerturbationProfile:
    """Populate a jitter profile deterministically from its decay class.

    Constant profiles alternate sign, ε_n = (-1)^n L. Power-law profiles use
    ε_n = δ(1+n)^{-p}, with ε_0 = 0 on one-sided windows.

    Args:
        decay: Decay class with amplitude L or δ
        window: Index window to populate
        sqrt_nodes: Validate the profile for √n-node use

    Returns:
        The populated profile
    """
    if decay.amplitude < 0:
        raise InvalidArgumentError(f"Amplitude must be nonnegative, got {decay.amplitude}")

    n = window.indices()
    if decay.kind == DecayKind.CONSTANT:
        eps = np.where(n % 2 == 0, 1.0, -1.0) * decay.amplitude
    else:
        if window.kind != WindowKind.ONE_SIDED and window.lo < 0:
            raise InvalidArgumentError("Power-law profiles are defined on one-sided windows")
        weights = (1.0 + n) ** decay.exponent
        eps = decay.amplitude / weights
        # keep sup |ε_n|(1+n)^p ≤ δ exact in floating point
        over = eps * weights > decay.amplitude
        eps[over] = np.nextafter(eps[over], 0.0)
    if window.kind == WindowKind.ONE_SIDED and (
        decay.kind == DecayKind.POWER_LAW or sqrt_nodes
    ):
        eps[0] = 0.0

    profile = PerturbationProfile(window, eps, decay)
    if sqrt_nodes:
        profile.check_sqrt_nodes()
    logger.debug(
        f"Built {decay.kind.value} profile on [{window.lo}, {window.hi}] with L={profile.L:.3g}"
    )
    return profile


def weighted_norm(pair: WeightedSeqPair) -> float:
    """‖(x, y)‖_(s,s) = (Σ(1+n)^{2s} x_n² + Σ(1+n)^{2s} y_n²)^{1/2}."""
    weights = (1.0 + pair.window.indices()) ** pair.s
    return float(np.sqrt(np.sum((weights * pair.x.values) ** 2 + (weights * pair.y.values) ** 2)))


def restrict(seq: RealSequence, w: IndexWindow) -> RealSequence:
    """Copy ``seq`` onto ``w``; entries outside the source window become 0."""
    values = np.zeros(w.size)
    lo = max(w.lo, seq.window.lo)
    hi = min(w.hi, seq.window.hi)
    if lo <= hi:
        values[lo - w.lo : hi - w.lo + 1] = seq.values[lo - seq.window.lo : hi - seq.window.lo + 1]
    return RealSequence(w, values)
