"""Shared fixtures: one small basis set for the whole session."""

import logging

import pytest

from perturbed_interp.rvbasis import BasisSet

logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")


@pytest.fixture(scope="session")
def small_basis() -> BasisSet:
    """Basis functions a_n, â_n for n ≤ 12."""
    return BasisSet(12)
