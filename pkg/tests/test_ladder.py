import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lindosc.core import gibbs_state, trace_distance
from lindosc.ladder import (
    LADDERS, apply_ladder, build_eigenstate, collinearity_defect, commutator_defects, commutator_table, dual_vector,
    ground_dual, ground_state, ladder_eigenvalue, ladder_matrix, ladder_modes, ladder_pairing_matrix, ladder_propagate,
    ladder_rows, ladder_weights, raised_ket,
)
from lindosc.spectral import eigenvalue, pairing, spectral_propagate
from lindosc.superop import vectorize
from lindosc.validation import DimensionError, ParameterError

from conftest import random_interior, random_state


class TestOperators:
    @pytest.mark.parametrize("which", LADDERS)
    def test_matrix_matches_action(self, params, rng, which):
        A = random_interior(8, 0, rng)
        np.testing.assert_allclose(
            ladder_matrix(which, params, 8).matrix @ vectorize(A), vectorize(apply_ladder(which, A, params)), atol=1e-13
        )

    @pytest.mark.parametrize("which", ["X-", "Y-"])
    def test_lowering_annihilates_ground(self, params, which):
        out = apply_ladder(which, ground_state(params, 30), params)
        assert np.abs(out[:28, :28]).max() <= 1e-15

    def test_unknown(self, params):
        with pytest.raises(ParameterError):
            apply_ladder("Z+", np.eye(3), params)
        with pytest.raises(ParameterError):
            ladder_matrix("Z+", params, 3)

    def test_commutators(self, params):
        defects = commutator_defects(params, 12)
        assert len(defects) == 10
        assert max(defects.values()) <= 1e-10

    def test_commutator_table_values(self, params):
        t = commutator_table(params)
        assert t["[X-,X+]"][3] == -params.kappa
        assert t["[L,X+]"][3] == eigenvalue(1, 1, params)
        assert t["[L,Y+]"][3] == eigenvalue(1, -1, params)


class TestEigenstates:
    def test_mu(self, params):
        assert ladder_eigenvalue(0, 0, params) == 0
        assert ladder_eigenvalue(1, 0, params) == -0.25 - 1j
        assert ladder_eigenvalue(2, 1, params) == -0.75 - 1j

    @given(m=st.integers(0, 20), n=st.integers(0, 20))
    def test_mu_matches_lambda(self, m, n):
        from lindosc.core import std_params

        p = std_params()
        assert ladder_eigenvalue(m, n, p) == eigenvalue(m + n, m - n, p)

    def test_mode_order(self):
        assert ladder_modes(2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]

    def test_guard(self, params):
        with pytest.raises(DimensionError, match="D >= 12"):
            raised_ket(2, 1, params, 11)

    def test_residuals_and_collinearity(self, params):
        rows = ladder_rows(6, params, 60)
        assert len(rows) == 28
        assert max(r[3] for r in rows) <= 1e-10
        assert max(r[4] for r in rows) <= 1e-9

    def test_ground_pairing(self, params):
        b = ground_dual(params, 60)
        assert abs(pairing(b, ground_state(params, 60)) - 1) <= 1e-15

    @pytest.mark.parametrize(
        "bra,ket,expected", [((0, 0), (0, 0), 1), ((1, 0), (0, 1), 0), ((0, 1), (1, 0), 0), ((1, 1), (1, 1), 1)]
    )
    def test_pairings(self, params, bra, ket, expected):
        value = pairing(dual_vector(*bra, params, 60), raised_ket(*ket, params, 60))
        assert abs(value - expected) <= 1e-10

    def test_pairing_matrix(self, params):
        P = ladder_pairing_matrix(4, params, 60)
        assert np.abs(P - np.eye(len(ladder_modes(4)))).max() <= 1e-9

    def test_bundle(self, params):
        s = build_eigenstate(1, 2, params, 60)
        assert s.mu == ladder_eigenvalue(1, 2, params)
        assert abs(pairing(s.bra, s.ket) - 1) <= 1e-10


class TestCollinearity:
    def test_phase_invariant(self, rng):
        u = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        assert collinearity_defect(u, 3j * u) <= 1e-15

    def test_orthogonal(self):
        assert collinearity_defect([1, 0], [0, 1]) == pytest.approx(np.sqrt(2))


class TestPropagate:
    def test_gibbs(self, params):
        rho = gibbs_state(params, 60)
        assert trace_distance(ladder_propagate(rho, 3.0, 4, params, 60), rho) <= 1e-12

    def test_matches_spectral(self, params):
        rho = random_state(60, support=4, seed=8)
        ladder = ladder_propagate(rho, 1.0, 8, params, 60)
        spectral = spectral_propagate(rho, 1.0, 8, params, 60)
        assert np.abs(ladder - spectral).max() <= 1e-10

    def test_coherence_sector(self, params):
        # |1><0| lives in the k = +1 sector: only m - n = 1 weights survive
        rho = np.zeros((60, 60))
        rho[1, 0] = 1.0
        w = ladder_weights(rho, 7, params)
        for (m, n), value in w.items():
            if m - n != 1:
                assert value == 0
        assert abs(w[(1, 0)]) > 0
        t = 2.0
        out = ladder_propagate(rho, t, 7, params, 60)
        assert np.abs(out - spectral_propagate(rho, t, 7, params, 60)).max() <= 1e-10

    @settings(max_examples=10, deadline=None)
    @given(t=st.floats(0.0, 5.0))
    def test_trace(self, params, t):
        out = ladder_propagate(random_state(60, support=3, seed=1), t, 6, params, 60)
        assert abs(np.trace(out) - 1) <= 1e-10
