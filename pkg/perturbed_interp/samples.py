"""
Deterministic sample sets with known answers, and loaders for the shipped fixtures.
"""

import json
import logging
from dataclasses import dataclass
from importlib import resources
from typing import Any, Dict, Optional

import numpy as np

from .bandlimited import Band, SampleSet, VaalerBasis, eval_pw
from .seqspace import DecayClass, IndexWindow, RealSequence, make_profile

logger = logging.getLogger(__name__)

FIXTURE_DIR = "fixtures"


@dataclass
class SampleCase:
    """Samples together with the integer data they should reconstruct to."""

    samples: SampleSet
    truth: RealSequence
    truth_derivs: Optional[RealSequence] = None

    def to_dict(self) -> Dict[str, Any]:
        data = self.samples.to_dict()
        data["truth"] = {"values": [float(v) for v in self.truth.values]}
        if self.truth_derivs is not None:
            data["truth"]["derivs"] = [float(v) for v in self.truth_derivs.values]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SampleCase":
        """Samples with an optional ``truth`` object; without it ``truth`` is NaN."""
        samples = SampleSet.from_dict(data)
        w = samples.window
        truth = data.get("truth") or {}
        values = np.asarray(truth.get("values", np.full(w.size, np.nan)), dtype=float)
        derivs = truth.get("derivs")
        return cls(
            samples,
            RealSequence(w, values),
            RealSequence(w, np.asarray(derivs, dtype=float)) if derivs is not None else None,
        )

    @property
    def has_truth(self) -> bool:
        return bool(np.all(np.isfinite(self.truth.values)))


def random_sinc_coefficients(half_width: int = 50, seed: int = 0) -> RealSequence:
    """Standard normal coefficients c_j for |j| ≤ ``half_width``."""
    rng = np.random.default_rng(seed)
    w = IndexWindow.symmetric(half_width)
    return RealSequence(w, rng.standard_normal(w.size))


def jittered_sinc_case(
    L: float = 0.2, half_width: int = 200, signal_half_width: int = 50, seed: int = 0
) -> SampleCase:
    """f = Σ_j c_j sinc(x − j) sampled at n + (−1)^n L on |n| ≤ ``half_width``."""
    coeffs = random_sinc_coefficients(signal_half_width, seed)
    w = IndexWindow.symmetric(half_width)
    profile = make_profile(DecayClass.constant(L), w)
    samples = SampleSet.from_function(lambda x: eval_pw(coeffs, Band.PW_PI, x), profile)
    truth = np.zeros(w.size)
    truth[coeffs.window.indices() - w.lo] = coeffs.values
    logger.debug(f"Jittered sinc case: L={L}, {coeffs.window.size} coefficients, seed {seed}")
    return SampleCase(samples, RealSequence(w, truth))


def vaaler_sinc2_case(L: float = 0.1, half_width: int = 200) -> SampleCase:
    """f = sinc², with f and f′ sampled at n + (−1)^n L; f(k) = δ_{k0}, f′(k) = 0."""
    w = IndexWindow.symmetric(half_width)
    profile = make_profile(DecayClass.constant(L), w)
    samples = SampleSet.from_function(VaalerBasis.g, profile, VaalerBasis.g_prime)
    return SampleCase(samples, RealSequence.unit(w, 0), RealSequence.zeros(w))


def load_fixture(name: str) -> Dict[str, Any]:
    """Parsed JSON of a shipped fixture, e.g. ``"zero_jitter"``."""
    path = resources.files(__package__).joinpath(FIXTURE_DIR).joinpath(f"{name}.json")
    return json.loads(path.read_text(encoding="utf-8"))
