"""Shared fixtures: small reference instances used across test modules."""
import pytest

from valucb.distributions import Bernoulli, Gaussian
from valucb.instance import BanditInstance, derive_ground_truth


@pytest.fixture
def inline_instance():
    """Three Bernoulli arms (0.9, 0.5, 0.1) with variance threshold 0.2.

    Arms 0 and 2 are feasible, arm 1 is not; the best feasible arm is
    arm 0.  Used as the worked reference instance throughout.
    """
    return BanditInstance(
        arms=(Bernoulli(0.9), Bernoulli(0.5), Bernoulli(0.1)), sigma_bar_sq=0.2
    )


@pytest.fixture
def inline_gt(inline_instance):
    return derive_ground_truth(inline_instance)


@pytest.fixture
def gaussian_instance():
    """Two well-separated Gaussian arms, both feasible, proxy 0.5."""
    return BanditInstance(
        arms=(Gaussian(0.9, 0.1), Gaussian(0.1, 0.1)),
        sigma_bar_sq=0.04,
        subg_proxy=0.5,
    )
