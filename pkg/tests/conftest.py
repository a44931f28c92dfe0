import numpy as np
import pytest

from qdual.qcore import PrecisionContext


@pytest.fixture(scope="session")
def ctx():
	return PrecisionContext.standard()


@pytest.fixture(scope="session")
def ext_ctx():
	return PrecisionContext.extended()


@pytest.fixture
def rng():
	return np.random.default_rng(42)


def rel(x, y):
	return abs(complex(x) - complex(y)) / max(abs(complex(x)), abs(complex(y)), 1e-300)
