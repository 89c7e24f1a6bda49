"""
Tests for recovery from perturbed √n nodes, Poisson checks and the uniqueness tools.
"""

import logging
import math

import numpy as np
import pytest

from perturbed_interp.errors import InvalidArgumentError, RangeViolationError
from perturbed_interp.linop import NormMethod, op_norm_power
from perturbed_interp.rvperturb import (
    LaplaceSample,
    RVOperatorConfig,
    UniquenessConfig,
    best_certificate,
    build_T_tilde,
    build_TK0,
    descartes_count,
    gaussian_pair,
    hs_certificate,
    interpolate,
    laplace_transform,
    origin_probe,
    poisson_check,
    poisson_row,
    powers_experiment,
    powers_jitter,
    recover_values,
    sample_pair,
    schur_certificate,
)
from perturbed_interp.samples import load_fixture
from perturbed_interp.seqspace import DecayClass, IndexWindow, make_profile

logger = logging.getLogger(__name__)


def gaussian(x):
    return np.exp(-np.pi * np.asarray(x) ** 2)


def polynomial_sample(roots):
    """φ(t) = Π (t − r) · e^{−t}."""
    roots = tuple(roots)
    return LaplaceSample(
        lambda t: np.prod([np.asarray(t) - r for r in roots], axis=0) * np.exp(-t), s0=-1.0
    )


def test_config_validation():
    """Truncation size, coverage and the Schur exponent range."""
    cfg = RVOperatorConfig.power_law(0.01, 1.25, 12)
    assert cfg.eps[0] == 0.0
    assert cfg.delta <= 0.01
    cfg.check_schur()
    logger.info("✓ Power-law configuration")

    with pytest.raises(InvalidArgumentError):
        RVOperatorConfig.power_law(0.01, 1.25, 4)
    with pytest.raises(InvalidArgumentError):
        short = make_profile(DecayClass.power_law(0.01, 1.25), IndexWindow.one_sided(8))
        RVOperatorConfig(short, 12)
    with pytest.raises(RangeViolationError):
        RVOperatorConfig.power_law(0.6, 0.0, 12)
    with pytest.raises(InvalidArgumentError):
        RVOperatorConfig.power_law(0.01, 1.25, 12, s=1.0).check_schur()
    logger.info("✓ Invalid configurations rejected")


def test_poisson_summation():
    """Σ f(n) = Σ f̂(n) for Gaussians, and the index-0 row returns x_0 = 1."""
    for scale in (0.5, 1.0, 2.0):
        x, y = gaussian_pair(scale, 400)
        assert poisson_check(x, y) < 1e-12
        assert poisson_row(x, y) == pytest.approx(1.0, abs=1e-12)
    logger.info("✓ Poisson summation for Gaussians")

    with pytest.raises(InvalidArgumentError):
        gaussian_pair(0.0, 10)
    with pytest.raises(InvalidArgumentError):
        poisson_check([1.0, 2.0], [1.0])


def test_powers_of_integers():
    """Nodes c·m^α are covered for α < 2/9 and not at or above it."""
    eps = powers_jitter(0.2, 0.05, 50)
    assert eps[0] == 0.0
    assert np.all(eps <= 0.0) and np.all(eps > -0.5)

    assert powers_experiment(0.2, 0.05, 200).passed
    assert not powers_experiment(0.3, 0.05, 200).exponent_ok
    assert not powers_experiment(2 / 9, 0.05, 200).passed
    logger.info("✓ Powers-of-integers experiment")

    with pytest.raises(InvalidArgumentError):
        powers_jitter(0.5, 0.05, 10)
    with pytest.raises(InvalidArgumentError):
        powers_jitter(0.2, -1.0, 10)


def test_uniqueness_config():
    """Evaluation points must be increasing, beyond √K0 and away from √n."""
    cfg = UniquenessConfig.from_dict(load_fixture("uniqueness_k0_2"))
    assert cfg.K0 == 2 and cfg.t.shape == (4,)

    with pytest.raises(InvalidArgumentError):
        UniquenessConfig(1, [1.3])
    with pytest.raises(InvalidArgumentError):
        UniquenessConfig(1, [1.7, 1.3])
    with pytest.raises(InvalidArgumentError):
        UniquenessConfig(1, [0.9, 1.3])
    with pytest.raises(InvalidArgumentError):
        UniquenessConfig(1, [1.2, math.sqrt(2)])
    with pytest.raises(InvalidArgumentError):
        UniquenessConfig.from_dict({"t": [1.3, 1.7]})
    logger.info("✓ Uniqueness configuration checks")


def test_descartes_rule():
    """ℒ[φ] has no more zeros than φ has sign changes."""
    sample = LaplaceSample(lambda t: np.exp(-t), s0=-1.0)
    assert laplace_transform(sample, 1.0) == pytest.approx(0.5, abs=1e-10)

    # ℒ[(t−1)e^{−t}](s) = −s/(s+1)², zero at s = 0
    sample = LaplaceSample(lambda t: (t - 1.0) * np.exp(-t), s0=-1.0)
    report = descartes_count(sample, np.linspace(-0.85, 6.0, 41))
    assert report.sign_changes == 1
    assert report.zeros_found == 1
    assert report.zeros[0] == pytest.approx(0.0, abs=1e-9)
    assert report.consistent
    logger.info("✓ Descartes rule for (t − 1)e^{−t}")

    sample = LaplaceSample(lambda t: np.exp(-t), s0=-1.0)
    assert descartes_count(sample, np.linspace(-0.85, 6.0, 41)).zeros_found == 0

    # ℒ[(t−1)(t−2)e^{−t}](s) = (2u² − 3u + 2)/u³ with u = s + 1
    report = descartes_count(polynomial_sample([1.0, 2.0]), np.linspace(-0.85, 10.0, 63))
    assert report.sign_changes == 2
    assert report.zeros_found <= 2
    logger.info("✓ Descartes rule for e^{−t} and (t − 1)(t − 2)e^{−t}")

    with pytest.raises(InvalidArgumentError):
        descartes_count(sample, [-2.0, 1.0])
    with pytest.raises(InvalidArgumentError):
        descartes_count(sample, [1.0])


@pytest.mark.slow
def test_descartes_random_polynomials():
    """zeros_found ≤ sign_changes for 50 random polynomial-times-e^{−t} inputs."""
    rng = np.random.default_rng(7)
    grid = np.linspace(-0.85, 6.0, 41)
    for _ in range(50):
        roots = np.sort(rng.uniform(0.2, 5.0, rng.integers(1, 4)))
        report = descartes_count(polynomial_sample(roots), grid)
        assert report.zeros_found <= report.sign_changes, roots
    logger.info("✓ Descartes rule on 50 random inputs")


@pytest.mark.slow
def test_certificates_shrink_with_delta():
    """Schur and Hilbert–Schmidt bounds decrease toward 0 as δ halves."""
    schur, hs = [], []
    for delta in (0.02, 0.01, 0.005):
        cfg = RVOperatorConfig.power_law(delta, 1.25, 12)
        schur.append(schur_certificate(cfg).bound)
        hs.append(hs_certificate(cfg).bound)
    for bounds in (schur, hs):
        assert bounds[0] > 0.0
        assert bounds[1] < 0.75 * bounds[0]
        assert bounds[2] < 0.75 * bounds[1]
    logger.info(f"✓ Schur {schur}, Hilbert–Schmidt {hs}")


@pytest.mark.slow
def test_hs_dominates_operator_norm():
    """‖I − T̃‖_HS ≥ the power-iteration norm on 5 random power-law profiles."""
    rng = np.random.default_rng(11)
    for _ in range(5):
        delta = float(rng.uniform(0.002, 0.02))
        exponent = float(rng.uniform(1.25, 2.0))
        cfg = RVOperatorConfig.power_law(delta, exponent, 12)
        block = build_T_tilde(cfg)
        bound = hs_certificate(cfg).bound
        assert bound >= op_norm_power(block).bound - 1e-12
        assert bound >= np.linalg.norm(block.entries, 2) - 1e-12
        # column 0 of each block is part of the sum
        assert np.any(block.entries[1:, 0] != 0.0)
        assert bound == pytest.approx(np.linalg.norm(block.entries), rel=1e-12)
    logger.info("✓ Hilbert–Schmidt bound dominates the operator norm")


@pytest.mark.slow
def test_zero_jitter_certificate():
    """Unperturbed nodes make I − T̃ vanish on the truncation."""
    cfg = RVOperatorConfig(
        make_profile(DecayClass.power_law(0.0, 1.25), IndexWindow.one_sided(12), sqrt_nodes=True),
        12,
    )
    certificate = best_certificate(cfg)
    assert certificate.certified
    assert certificate.bound < 1.0
    logger.info(f"✓ Zero-jitter certificate {certificate.bound:.3g}")


@pytest.mark.slow
def test_recovery_of_gaussian():
    """Recover e^{−πk} from jittered samples of the Gaussian and its transform."""
    cfg = RVOperatorConfig.power_law(0.01, 1.25, 12)
    schur, hs = schur_certificate(cfg), hs_certificate(cfg)
    assert schur.method == NormMethod.SCHUR
    assert hs.method == NormMethod.HILBERT_SCHMIDT
    assert min(schur.bound, hs.bound) < 1.0
    assert set(schur.detail["argmax_col"]) == {"block", "index"}

    result = recover_values(cfg, sample_pair(cfg, gaussian, gaussian))
    truth = np.exp(-np.pi * np.arange(13))
    np.testing.assert_allclose(result.pair.x.values[:9], truth[:9], atol=1e-4)
    np.testing.assert_allclose(result.pair.y.values[:9], truth[:9], atol=1e-4)
    logger.info(f"✓ Gaussian recovered, residual {result.residual:.2e}")

    samples = sample_pair(cfg, gaussian, gaussian)
    for x in (0.3, 1.1):
        assert interpolate(cfg, samples, x) == pytest.approx(math.exp(-math.pi * x * x), abs=1e-3)
    logger.info("✓ Interpolation through the perturbed basis")


@pytest.mark.slow
def test_origin_probe():
    cfg = RVOperatorConfig.power_law(0.01, 1.25, 12)
    assert origin_probe(cfg, 0.0).min_singular > 0.0
    with pytest.raises(RangeViolationError):
        origin_probe(cfg, 0.5)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["uniqueness_k0_1", "uniqueness_k0_2"])
def test_uniqueness_probe(name):
    """A_{K0} is nonsingular on the shipped evaluation points."""
    cfg = UniquenessConfig.from_dict(load_fixture(name))
    probe = build_TK0(cfg, N=16)
    assert probe.matrix.shape == (4 * cfg.K0, 2 * cfg.K0)
    assert probe.min_singular > 1e-8
    logger.info(f"✓ {name}: σ_min = {probe.min_singular:.3g}")

    with pytest.raises(InvalidArgumentError):
        build_TK0(cfg, N=cfg.K0)
