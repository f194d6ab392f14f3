import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from abelian_coh import DualMeasure, GroupDescriptor, build_nontrivial_cocycle
from abelian_coh.measure import poisson_density, uniform_arc_density

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow])
settings.load_profile("default")

Z = GroupDescriptor(1)
Z6 = GroupDescriptor(0, (6,))
THETA0 = 2.0


@pytest.fixture(scope="session")
def poisson_fine():
    mu, _ = DualMeasure.from_parts(Z, (), poisson_density(0.5), 2 ** 16).normalized()
    return mu


@pytest.fixture(scope="session")
def shell_cocycle(poisson_fine):
    return build_nontrivial_cocycle(poisson_fine, 8)


@pytest.fixture(scope="session")
def arc_measure():
    mu, _ = DualMeasure.from_parts(Z, (), uniform_arc_density([1.0, 2.0]), 4096).normalized()
    return mu


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
