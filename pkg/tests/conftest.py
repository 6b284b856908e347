import pytest

from gkzint.cayley import gauss_2f1, hyp3f2
from gkzint.config import ToolConfig
from gkzint.pfaffian import GkzSystem, full_pfaffian
from gkzint.presets import (GAUSS_BASIS, HYP3F2_BASIS, gauss_pipeline,
                            hyp3f2_pipeline)


@pytest.fixture(scope="session")
def cfg():
    return ToolConfig()


@pytest.fixture(scope="session")
def gauss_system():
    return GkzSystem(gauss_2f1())


@pytest.fixture(scope="session")
def gauss_psys(gauss_system):
    return full_pfaffian(gauss_system, GAUSS_BASIS)


@pytest.fixture(scope="session")
def gauss_bundle():
    return gauss_pipeline()


@pytest.fixture(scope="session")
def hyp3f2_system():
    return GkzSystem(hyp3f2())


@pytest.fixture(scope="session")
def hyp3f2_psys(hyp3f2_system):
    return full_pfaffian(hyp3f2_system, HYP3F2_BASIS)


@pytest.fixture(scope="session")
def hyp3f2_bundle():
    return hyp3f2_pipeline()
