"""Acceptance criteria, each checked at its stated tolerance.

Every test marked ``criterion`` prints one PASS/FAIL line in the terminal
summary ("acceptance criteria" section), together with the measured values.
Some criteria cannot be met as stated at the stated truncation; those tests
fail on purpose.  The companion tests at the end of the file show what does
hold (a larger ``D``, a larger cutoff, or the valid index range).
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from lindosc.combinatorics import alt_sum, claim1_sum, factorial, identity_I, trace_moment, trace_moment_fock_sum
from lindosc.core import corpus, fock_state, gibbs_state, trace_distance, trace_norm
from lindosc.disentangle import disentangled_propagate
from lindosc.ladder import commutator_defects, ladder_eigenvalue, ladder_propagate, ladder_rows
from lindosc.observables import closed_form_values, state_values
from lindosc.oracle import expm_trajectory, numerical_spectrum, propagate_stack
from lindosc.spectral import (
    _basis, biorthogonality_defect, completeness_partial_sum, eigenvalue, left_residual, mode_indices,
    right_residual, spectral_propagate, vacuum_reconstruction,
)

D = 40
TIMES = (0.1, 0.5, 1.0, 2.0, 5.0)
XIS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5))


@pytest.fixture(scope="module")
def states(params):
    return corpus(params, D)


def _spectral_states(states, params, j_max):
    basis = _basis(params, D, j_max)
    out = {}
    for name, rho in states.items():
        coeffs = basis.coefficients(rho)
        out[name] = np.array([basis.propagate(rho, t, coeffs) for t in TIMES])
    return out


@pytest.fixture(scope="module")
def propagated(states, params):
    """States of the corpus at every time in ``TIMES`` for the three propagators, plus the wall time."""
    start = time.perf_counter()
    names = list(states)
    stack = np.array([states[n] for n in names])
    oracle = np.stack([propagate_stack(stack, t, params, D) for t in TIMES], axis=1)
    result = {
        "oracle": dict(zip(names, oracle)),
        "spectral": _spectral_states(states, params, 2 * D),
        "disentangled": {
            n: np.array([disentangled_propagate(states[n], t, params, D) for t in TIMES]) for n in names
        },
    }
    return result, time.perf_counter() - start


@pytest.mark.criterion("1", "eigenvalue law at D=20, j <= 4 within 1e-6, lambda_00 within 1e-10, < 5 s")
def test_criterion_1_eigenvalues(params, measure):
    start = time.perf_counter()
    report = numerical_spectrum(params, 20, j_cut=4, tol=1e-6)
    elapsed = measure("seconds", time.perf_counter() - start)
    measure("max_error", report.max_error)
    measure("lambda00_error", abs(report.nearest_zero))
    assert abs(report.nearest_zero) <= 1e-10
    assert report.max_error <= 1e-6
    assert elapsed < 5


@pytest.mark.criterion("2", "biorthonormality over j, j' <= 8 at D=60 within 1e-9, < 30 s")
def test_criterion_2_biorthonormality(params, measure):
    start = time.perf_counter()
    defect = measure("defect", biorthogonality_defect(8, params, 60))
    elapsed = measure("seconds", time.perf_counter() - start)
    assert defect <= 1e-9
    assert elapsed < 30


@pytest.mark.criterion("3", "eigen-residuals for j <= 6 at D=60: right <= 1e-9, left <= 1e-8")
def test_criterion_3_residuals(params, measure):
    modes = mode_indices(6)
    right = measure("right", max(right_residual(j, k, params, 60) for j, k in modes))
    left = measure("left", max(left_residual(j, k, params, 60) for j, k in modes))
    assert right <= 1e-9
    assert left <= 1e-8


@pytest.mark.criterion("4", "exact identities: identity_I and alt_sum for p <= 30, claim1_sum for k,l,n <= 8")
def test_criterion_4_identities(measure):
    start = time.perf_counter()
    bad_I = sum(
        identity_I(p, q, r) != (1 if r == 0 else 0) for p in range(31) for q in range(p + 1) for r in range(q + 1)
    )
    bad_alt = sum(
        alt_sum(p, r) != ((-1) ** r * factorial(r) if p == r else 0) for p in range(31) for r in range(p + 1)
    )
    bad_claim = sum(
        claim1_sum(k, l, n, xi) != (Fraction((-1) ** l, factorial(l)) if l == n else 0)
        for xi in XIS for k in range(9) for l in range(9) for n in range(9)
    )
    measure("identity_I_failures", bad_I)
    measure("alt_sum_failures", bad_alt)
    measure("claim1_failures", bad_claim)
    elapsed = measure("seconds", time.perf_counter() - start)
    assert bad_I == 0 and bad_alt == 0
    assert bad_claim == 0
    assert elapsed < 60


@pytest.mark.criterion("5", "trace moments: closed form inside the Fock-sum tail bracket, m,n <= 10, xi in {1/2, 1/3}")
def test_criterion_5_trace_moments(measure):
    misses = 0
    for xi in XIS[:2]:
        for m in range(11):
            for n in range(11):
                exact = trace_moment(m, n, xi)
                misses += not trace_moment_fock_sum(m, n, xi).brackets(exact)
                misses += not trace_moment_fock_sum(m, n, xi, levels=60).brackets(exact)
    measure("misses", misses)
    assert misses == 0


@pytest.mark.criterion("6", "spectral (j_max=2D), disentangled, oracle pairwise within 1e-7 trace distance, D=40, < 2 min")
def test_criterion_6_three_propagators(propagated, measure):
    result, elapsed = propagated
    measure("seconds", elapsed)
    worst = {}
    for a, b in (("spectral", "oracle"), ("disentangled", "oracle"), ("spectral", "disentangled")):
        worst[(a, b)] = max(
            trace_distance(x, y) for n in result[a] for x, y in zip(result[a][n], result[b][n])
        )
        measure(f"{a}-{b}", worst[(a, b)])
    assert max(worst.values()) <= 1e-7
    assert elapsed < 120


@pytest.mark.criterion("7", "closed-form observables vs oracle within 1e-8 over t in [0,10]; motion and flat energy examples")
def test_criterion_7_observables(states, params, measure):
    times = np.linspace(0.0, 10.0, 21)
    worst = 0.0
    for rho in states.values():
        closed = closed_form_values(rho, times, params, ("E", "x", "p", "var_x", "var_p"))
        oracle = state_values(expm_trajectory(rho, times, params, D), params, ("E", "x", "p", "var_x", "var_p"))
        worst = max(worst, max(float(np.abs(closed[k] - oracle[k]).max()) for k in closed))
    measure("closed_vs_oracle", worst)

    motion = closed_form_values(states["superposition"], times, params, ("x", "p"))
    env = np.exp(-times / 4) / np.sqrt(2)
    motion_err = measure(
        "motion", float(max(np.abs(motion["x"] - env * np.cos(times)).max(), np.abs(motion["p"] + env * np.sin(times)).max()))
    )
    flat = closed_form_values(states["fock:1"], times, params, ("E",))["E"]
    flat_oracle = state_values(expm_trajectory(states["fock:1"], times, params, D), params, ("E",))["E"]
    flat_err = measure("fock1_energy", float(max(np.abs(flat - 1).max(), np.abs(flat_oracle - 1).max())))
    assert worst <= 1e-8
    assert motion_err <= 1e-8
    assert flat_err <= 1e-9


@pytest.mark.filterwarnings("ignore::lindosc.disentangle.TruncationWarning")
@pytest.mark.criterion("8", "trace within 1e-10 for all methods and times; |rho(200/kappa) - rho_eq|_1 <= 1e-10")
def test_criterion_8_trace_and_convergence(propagated, states, params, measure):
    # every method at its default cutoff; the spectral sum defaults to j_max = 4D
    result, _ = propagated
    result = dict(result, spectral=_spectral_states(states, params, 4 * D))
    trace_dev = 0.0
    for method in result.values():
        for traj in method.values():
            trace_dev = max(trace_dev, max(abs(np.trace(r) - 1) for r in traj))
    short = propagated[0]["spectral"]
    measure("spectral_2D_trace_deviation", max(abs(np.trace(r) - 1) for traj in short.values() for r in traj))
    for rho in states.values():
        for t in TIMES:
            trace_dev = max(trace_dev, abs(np.trace(ladder_propagate(rho, t, D // 4, params, D)) - 1))
    measure("trace_deviation", trace_dev)

    t_long = 200.0 / params.kappa
    eq = gibbs_state(params, D)
    names = list(states)
    stack = np.array([states[n] for n in names])
    basis = _basis(params, D, 4 * D)
    dist = max(
        max(trace_norm(r - eq) for r in propagate_stack(stack, t_long, params, D)),
        max(trace_norm(basis.propagate(states[n], t_long) - eq) for n in names),
        max(trace_norm(disentangled_propagate(states[n], t_long, params, D) - eq) for n in names),
    )
    measure("distance_to_eq", dist)
    assert trace_dev <= 1e-10
    assert dist <= 1e-10


@pytest.mark.criterion("9", "ladder: commutators 1e-10, mu = lambda, collinearity 1e-8 for m+n <= 6, ladder = spectral to 1e-8")
def test_criterion_9_ladder(params, measure):
    comm = measure("commutators", max(commutator_defects(params, 16).values()))
    mu_exact = all(
        ladder_eigenvalue(m, n, params) == eigenvalue(m + n, m - n, params) for m in range(21) for n in range(21)
    )
    measure("mu_equals_lambda", mu_exact)
    collinear = measure("collinearity", max(r[4] for r in ladder_rows(6, params, 60)))
    order = 8
    states60 = corpus(params, 60)
    gap = 0.0
    for rho in states60.values():
        for t in TIMES:
            gap = max(gap, float(np.abs(
                ladder_propagate(rho, t, order, params, 60) - spectral_propagate(rho, t, order, params, 60)
            ).max()))
    measure("ladder_vs_spectral", gap)
    assert comm <= 1e-10
    assert mu_exact
    assert collinear <= 1e-8
    assert gap <= 1e-8


@pytest.mark.criterion("10a", "completeness: partial sums at J=2D within 1e-8 for states on levels <= 5")
def test_criterion_10a_completeness(states, params, measure):
    low = {n: r for n, r in states.items() if n != "gibbs"}
    err = max(trace_norm(completeness_partial_sum(r, 2 * D, params, D) - r) for r in low.values())
    measure("error", err)
    assert err <= 1e-8


@pytest.mark.criterion("10b", "alpha_q reconstruction of |0><0| to xi^Q at Q=30")
def test_criterion_10b_vacuum(params, measure):
    Q = 30
    err = measure("error", float(np.abs(vacuum_reconstruction(Q, params, D) - fock_state(0, D)).max()))
    measure("xi^Q", params.xi**Q)
    assert err <= params.xi**Q


class TestCompanions:
    """What holds where the literal criteria above cannot."""

    def test_eigenvalues_at_D40(self, params):
        report = numerical_spectrum(params, 40, j_cut=4)
        assert report.max_error <= 1e-6 and abs(report.nearest_zero) <= 1e-10

    def test_biorthonormality_at_D80(self, params):
        assert biorthogonality_defect(8, params, 80) <= 1e-9

    def test_claim1_for_n_up_to_l(self):
        for xi in XIS:
            for k in range(9):
                for l in range(9):
                    for n in range(l + 1):
                        assert claim1_sum(k, l, n, xi) == (Fraction((-1) ** l, factorial(l)) if l == n else 0)

    def test_spectral_4D_agrees(self, propagated, states, params):
        result, _ = propagated
        full = _spectral_states(states, params, 4 * D)
        for name in states:
            for x, y in zip(full[name], result["oracle"][name]):
                assert trace_distance(x, y) <= 1e-7

    def test_completeness_at_5D(self, states, params):
        for name, rho in states.items():
            if name != "gibbs":
                assert trace_norm(completeness_partial_sum(rho, 5 * D, params, D) - rho) <= 1e-8

    def test_vacuum_exact_below_Q(self, params):
        Q = 30
        diff = np.abs(np.diag(vacuum_reconstruction(Q, params, D) - fock_state(0, D)))
        assert diff[: Q + 1].max() <= 1e-15
