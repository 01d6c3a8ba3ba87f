import warnings
import numpy as np
import pytest
from qisim.exceptions import RegimeWarning
from qisim.models import ModePairMoments, ScenarioParams


@pytest.fixture()
def reference_params():
    """N_S = 1e-4, kappa = 0.01, N_B = 20, eta = 0.002, K = 42, M = 1e7"""
    return ScenarioParams()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture()
def weak_pair_moments():
    return ModePairMoments(n_s=0.0025, n_i=0.002, C_si=-0.0015)


@pytest.fixture()
def quiet_regime():
    """Silence RegimeWarning for tests that deliberately leave the weak-signal regime"""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        yield
