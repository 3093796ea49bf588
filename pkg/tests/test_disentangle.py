import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lindosc.core import fock_state, gibbs_state, make_params, trace_distance
from lindosc.disentangle import TruncationWarning, disentangled_propagate, f_functions, riccati_residual
from lindosc.oracle import expm_propagate
from lindosc.validation import ParameterError, TruncationError

from conftest import random_state


class TestCoefficients:
    def test_at_zero(self, params):
        c = f_functions(0.0, params)
        assert (c.f1, c.f2, c.f3) == (0.0, 0.0, 0.0)

    def test_long_time_limits(self, params):
        c = f_functions(200.0, params)
        assert c.f1 == pytest.approx(1.0, abs=1e-15)
        # f3 grows like gamma' t + ln(1 - xi)
        assert c.f3 - params.gamma_prime * 200 == pytest.approx(math.log(1 - params.xi), abs=1e-12)

    def test_f2_overflow_is_inf(self, params):
        assert f_functions(1e4, params).f2 == math.inf

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_riccati(self, params, t):
        residual, scale = riccati_residual(t, params)
        assert residual <= 1e-6 * scale

    @settings(max_examples=25, deadline=None)
    @given(
        gamma=st.floats(0.1, 3.0),
        beta=st.floats(0.1, 5.0),
        t=st.floats(0.01, 5.0),
    )
    def test_riccati_any_params(self, gamma, beta, t):
        p = make_params(1.0, gamma, beta)
        residual, scale = riccati_residual(t, p, h=1e-6)
        f2 = f_functions(t, p).f2
        assert residual <= 1e-5 * max(scale, p.gamma * math.exp(-2 * p.gamma_bar * t) * f2**2, 1e-12)

    def test_residual_needs_room(self, params):
        with pytest.raises(ParameterError):
            riccati_residual(1e-7, params)


class TestPropagate:
    def test_t0_identity(self, params):
        rho = random_state(30, seed=4)
        np.testing.assert_array_equal(disentangled_propagate(rho, 0.0, params, 30), rho)

    def test_gibbs_stationary(self, params):
        rho = gibbs_state(params, 50)
        with pytest.warns(TruncationWarning):
            out = disentangled_propagate(rho, 1.5, params, 50)
        assert trace_distance(out, rho) <= 1e-10

    @pytest.mark.parametrize("t", [0.3, 1.0, 3.0])
    def test_matches_oracle(self, params, t):
        rho = random_state(36, seed=11)
        assert np.abs(disentangled_propagate(rho, t, params, 36) - expm_propagate(rho, t, params, 36)).max() <= 1e-9

    def test_auto_switches_before_overflow(self, params):
        # f2 ~ 1.5e8 at t = 13, so f2**39 is out of range for the direct form
        out = disentangled_propagate(random_state(40, seed=0), 13.0, params, 40)
        assert np.all(np.isfinite(out))

    @pytest.mark.parametrize("t", [0.2, 2.0, 10.0])
    def test_forms_agree(self, params, t):
        rho = random_state(40, seed=12)
        direct = disentangled_propagate(rho, t, params, 40, form="direct")
        rescaled = disentangled_propagate(rho, t, params, 40, form="rescaled")
        assert np.abs(direct - rescaled).max() <= 1e-12

    def test_long_time_rescaled(self, params):
        rho = random_state(40, seed=13)
        out = disentangled_propagate(rho, 500.0, params, 40)
        assert np.all(np.isfinite(out))
        assert trace_distance(out, gibbs_state(params, 40)) <= 1e-10

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), t=st.floats(0.0, 20.0))
    def test_trace_hermitian(self, params, seed, t):
        out = disentangled_propagate(random_state(40, seed=seed), t, params, 40)
        assert abs(np.trace(out) - 1) <= 1e-10
        assert np.abs(out - out.conj().T).max() <= 1e-12

    def test_top_level_error(self, params):
        with pytest.raises(TruncationError, match="increase D"):
            disentangled_propagate(fock_state(1, 20), 2.0, params, 20, buffer=4)

    def test_support_warning(self, params):
        with pytest.warns(TruncationWarning):
            disentangled_propagate(fock_state(25, 60), 0.1, params, 60, buffer=40)

    def test_no_warning_inside(self, params):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            disentangled_propagate(fock_state(2, 40), 0.5, params, 40)

    @pytest.mark.parametrize("kw", [{"form": "exact"}, {"buffer": -1}, {"buffer": 40}])
    def test_bad_args(self, params, kw):
        with pytest.raises(ParameterError):
            disentangled_propagate(fock_state(0, 40), 1.0, params, 40, **kw)
