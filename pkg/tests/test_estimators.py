import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from lindosc.core import fock_state, gibbs_state
from lindosc.estimators import (
    PROPAGATORS, DisentangledPropagator, ExpmPropagator, LadderPropagator, SpectralPropagator,
)
from lindosc.validation import DimensionError, ParameterError

from conftest import random_state


@pytest.fixture(scope="module")
def stack():
    return np.array([random_state(36, seed=s) for s in range(2)] + [fock_state(2, 36)])


class TestContract:
    @pytest.mark.parametrize("cls", list(PROPAGATORS.values()))
    def test_params_roundtrip(self, cls):
        est = cls(dim=20, times=(0.5, 1.0))
        assert est.get_params()["dim"] == 20
        copy = clone(est).set_params(omega=2.0)
        assert copy.omega == 2.0 and est.omega == 1.0

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            SpectralPropagator(dim=10).transform(np.eye(10)[None] / 10)

    def test_bad_hyperparameters(self):
        with pytest.raises(ParameterError):
            SpectralPropagator(gamma=-1.0).fit()
        with pytest.raises(ParameterError):
            DisentangledPropagator(form="exact").fit()
        with pytest.raises(ParameterError):
            SpectralPropagator(times=(1.0, 0.5)).fit()
        with pytest.raises(DimensionError):
            ExpmPropagator(dim=65).fit()
        with pytest.raises(ParameterError):
            LadderPropagator(dim=20, order_max=6).fit()

    def test_fit_checks_shape(self):
        with pytest.raises(DimensionError):
            SpectralPropagator(dim=10).fit(np.zeros((2, 9, 9)))


class TestTransform:
    def test_shape(self, stack):
        out = DisentangledPropagator(dim=36, times=(0.0, 1.0)).fit(stack).transform(stack)
        assert out.shape == (3, 2, 36, 36)
        np.testing.assert_array_equal(out[:, 0], stack)

    def test_fit_transform(self, stack):
        est = SpectralPropagator(dim=36, times=(0.5,))
        np.testing.assert_array_equal(est.fit_transform(stack), est.transform(stack))

    def test_agreement(self, stack):
        times = (0.5, 2.0)
        ref = ExpmPropagator(dim=36, times=times).fit().transform(stack)
        for cls in (SpectralPropagator, DisentangledPropagator):
            assert np.abs(cls(dim=36, times=times).fit().transform(stack) - ref).max() <= 1e-9, cls.__name__

    def test_ladder_on_gibbs(self, params):
        rho = gibbs_state(params, 40)[None]
        out = LadderPropagator(dim=40, times=(1.0, 3.0)).fit().transform(rho)
        assert np.abs(out - rho[:, None]).max() <= 1e-12
