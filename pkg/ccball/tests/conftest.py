
import numpy as np
import pytest

from ccball.metric import MetricContext
from ccball.potentials import DensityGridField, DiscArrayField, QuadraticField


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: sweeps that take several seconds")


@pytest.fixture(autouse=True)
def ccball_home(tmp_path, monkeypatch):
    """Isole les logs de chaque test dans un CCBALL_HOME temporaire."""
    home = tmp_path / "ccball_home"
    monkeypatch.setenv("CCBALL_HOME", str(home))
    return home


@pytest.fixture(scope="session")
def quadratic():
    return QuadraticField(c=1.0)


@pytest.fixture(scope="session")
def disc_array():
    return DiscArrayField()


@pytest.fixture(scope="session")
def bump_grid():
    """Bosse lisse à support compact sur [-2, 2]², nulle au bord."""
    def bump(x, y):
        r2 = x * x + y * y
        return np.where(r2 < 1.0, (1.0 - r2) ** 2, 0.0)
    return DensityGridField.from_function(bump, (-2.0, -2.0, 2.0, 2.0), 41)


@pytest.fixture
def quad_ctx(quadratic):
    return MetricContext(field=quadratic, delta0=1.0, strategy="single_circle", mc_samples=0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
