"""Closed-form trajectories of energy and quadrature moments, and cross-method comparison.

Units have ``hbar = 1``; ``x = (a + a^dagger)/sqrt(2 omega)`` and
``p = -i sqrt(omega/2) (a - a^dagger)``.  Only a handful of eigenmodes
contribute to low moments, so each trajectory is a short sum of exponentials
in ``exp(-kappa t)`` fed by a few initial traces.

Moments of a state are computed from ``tr(a rho)``, ``tr(a^2 rho)``,
``tr(N rho)``, ``tr(N^2 rho)`` with ``a a^dagger`` replaced by ``N + 1``, so
the truncated top level does not distort them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ModelParams, annihilation, number
from .validation import ParameterError, check_dim, check_operator, check_operator_stack, check_times

IMAG_TOL = 1e-10

OBSERVABLES = ("trace", "E", "E2", "var_E", "x", "p", "x2", "p2", "var_x", "var_p")
METHODS = ("closed-form", "spectral", "disentangled", "oracle", "ladder")


def position_operator(params: ModelParams, dim: int) -> np.ndarray:
    a = annihilation(check_dim(dim, max_dim=None))
    return (a + a.conj().T) / math.sqrt(2.0 * params.omega)


def momentum_operator(params: ModelParams, dim: int) -> np.ndarray:
    a = annihilation(check_dim(dim, max_dim=None))
    return -1j * math.sqrt(0.5 * params.omega) * (a - a.conj().T)


def energy_operator(params: ModelParams, dim: int) -> np.ndarray:
    return params.omega * number(check_dim(dim, max_dim=None))


def expectation(rho, obs) -> complex:
    """``tr(obs @ rho)``.

    Raises:
        DimensionError: if the shapes differ.
    """
    rho = check_operator(rho, name="rho")
    obs = check_operator(obs, rho.shape[0], name="obs")
    return complex(np.einsum("ij,ji->", obs, rho))


# equilibrium values

def energy_eq(params: ModelParams) -> float:
    xi = params.xi
    return params.omega * xi / (1.0 - xi)


def energy2_eq(params: ModelParams) -> float:
    xi = params.xi
    return params.omega**2 * xi * (1.0 + xi) / (1.0 - xi) ** 2


def x2_eq(params: ModelParams) -> float:
    xi = params.xi
    return (1.0 + xi) / (1.0 - xi) / (2.0 * params.omega)


def p2_eq(params: ModelParams) -> float:
    xi = params.xi
    return 0.5 * params.omega * (1.0 + xi) / (1.0 - xi)


def _real(value, name: str):
    value = np.asarray(value)
    if np.iscomplexobj(value):
        scale = max(1.0, float(np.max(np.abs(value), initial=0.0)))
        if np.max(np.abs(value.imag), initial=0.0) > IMAG_TOL * scale:
            raise ParameterError(name, "closed form is not real; is rho0 Hermitian?")
        value = value.real
    return value if value.ndim else float(value)


def _times(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise ParameterError("t", "times must be finite and >= 0")
    return t


def energy_trajectory(E0: float, E2_0: float, t, params: ModelParams):
    """``(<E>_t, <E^2>_t, (Delta E_t)^2)`` from the initial moments.

    Args:
        E0: ``tr(H rho0)``.
        E2_0: ``tr(H^2 rho0)``.
        t: scalar or array of times ``>= 0``.
        params: model parameters.

    Returns:
        Three floats or arrays shaped like ``t``.  The variance is
        ``<E^2>_t - <E>_t^2``.
    """
    t = _times(t)
    w = params.omega
    Eeq, E2eq = energy_eq(params), energy2_eq(params)
    d1 = np.exp(-params.kappa * t)
    d2 = d1 * d1
    E = Eeq - d1 * (Eeq - E0)
    cross = 2.0 * Eeq**2 - 4.0 * Eeq * E0 - w * E0
    E2 = E2eq - d1 * (E2eq + cross) + d2 * (cross + E2_0)
    var = E2 - E * E
    if t.ndim == 0:
        return float(E), float(E2), float(var)
    return E, E2, var


@dataclass(frozen=True)
class InitialMoments:
    """The initial traces every closed form is built from."""

    a: complex
    a2: complex
    ad2: complex
    n: float
    n2: float

    @classmethod
    def from_state(cls, rho0) -> "InitialMoments":
        rho0 = check_operator(rho0, name="rho0")
        dim = rho0.shape[0]
        a = annihilation(dim)
        ad = a.conj().T
        lev = np.arange(dim, dtype=float)
        diag = np.diag(rho0)
        return cls(
            a=complex(np.einsum("ij,ji->", a, rho0)),
            a2=complex(np.einsum("ij,ji->", a @ a, rho0)),
            ad2=complex(np.einsum("ij,ji->", ad @ ad, rho0)),
            n=_real(lev @ diag, "rho0"),
            n2=_real((lev * lev) @ diag, "rho0"),
        )


@dataclass(frozen=True)
class Quadratures:
    x: np.ndarray
    p: np.ndarray
    x2: np.ndarray
    p2: np.ndarray
    var_x: np.ndarray
    var_p: np.ndarray


def quadrature_trajectory(rho0, t, params: ModelParams) -> Quadratures:
    """First and second moments of ``x`` and ``p`` at times ``t``.

    ``<x>`` and ``<p>`` rotate and decay as ``exp(-kappa t/2 - i omega t)``;
    the second moments relax to equilibrium at rate ``kappa`` with the
    ``a^2`` part rotating at ``2 omega``.
    """
    m = InitialMoments.from_state(rho0)
    t = _times(t)
    w = params.omega
    rot = np.exp(-1j * w * t)
    half = np.exp(-0.5 * params.kappa * t)
    x = math.sqrt(2.0 / w) * half * (rot * m.a).real
    p = math.sqrt(2.0 * w) * half * (rot * m.a).imag
    d1 = half * half
    osc = rot * rot * m.a2 + np.conj(rot * rot) * m.ad2
    sym = 2.0 * m.n + 1.0  # tr(a^dag a rho0) + tr(a a^dag rho0)
    x2 = x2_eq(params) + d1 * (osc + sym - 2.0 * w * x2_eq(params)) / (2.0 * w)
    p2 = p2_eq(params) - 0.5 * w * d1 * (osc - sym + 2.0 / w * p2_eq(params))
    x2 = _real(x2, "rho0")
    p2 = _real(p2, "rho0")
    return Quadratures(x, p, x2, p2, x2 - x * x, p2 - p * p)


def closed_form_values(rho0, times, params: ModelParams, names=OBSERVABLES) -> dict[str, np.ndarray]:
    names = _check_names(names)
    times = check_times(times)
    m = InitialMoments.from_state(rho0)
    w = params.omega
    E, E2, varE = energy_trajectory(w * m.n, w * w * m.n2, times, params)
    q = quadrature_trajectory(rho0, times, params)
    trace = np.full(times.shape, _real(np.trace(check_operator(rho0)), "rho0"))
    table = dict(trace=trace, E=E, E2=E2, var_E=varE, x=q.x, p=q.p, x2=q.x2, p2=q.p2, var_x=q.var_x, var_p=q.var_p)
    return {n: np.asarray(table[n], dtype=float) for n in names}


def state_values(states, params: ModelParams, names=OBSERVABLES) -> dict[str, np.ndarray]:
    """Observables of each state in a ``(n, D, D)`` stack, via the same traces as the closed forms."""
    names = _check_names(names)
    stack = check_operator_stack(states)
    w = params.omega
    rows = {n: [] for n in names}
    for rho in stack:
        m = InitialMoments.from_state(rho)
        x = math.sqrt(2.0 / w) * m.a.real
        p = math.sqrt(2.0 * w) * m.a.imag
        sym = 2.0 * m.n + 1.0
        x2 = _real((m.a2 + m.ad2 + sym) / (2.0 * w), "rho")
        p2 = _real(-0.5 * w * (m.a2 + m.ad2 - sym), "rho")
        E, E2 = w * m.n, w * w * m.n2
        table = dict(
            trace=_real(np.trace(rho), "rho"), E=E, E2=E2, var_E=E2 - E * E,
            x=x, p=p, x2=x2, p2=p2, var_x=x2 - x * x, var_p=p2 - p * p,
        )
        for n in names:
            rows[n].append(table[n])
    return {n: np.asarray(v, dtype=float) for n, v in rows.items()}


def _check_names(names) -> tuple[str, ...]:
    names = tuple(names)
    for n in names:
        if n not in OBSERVABLES:
            raise ParameterError("observables", f"unknown observable {n!r}; expected some of {OBSERVABLES}")
    return names


def parse_method(spec: str) -> tuple[str, int | None]:
    """``"spectral:10"`` -> ``("spectral", 10)``; the integer is ``j_max`` or ``order_max``."""
    name, _, arg = str(spec).partition(":")
    if name not in METHODS:
        raise ParameterError("method", f"unknown method {name!r}; expected one of {METHODS}")
    if not arg:
        return name, None
    try:
        value = int(arg)
    except ValueError:
        raise ParameterError("method", f"bad order in {spec!r}") from None
    if value < 0 or name not in ("spectral", "ladder"):
        raise ParameterError("method", f"bad order in {spec!r}")
    return name, value


def propagate_states(rho0, times, params: ModelParams, dim: int, method: str) -> np.ndarray:
    """States at each time as a ``(n, D, D)`` stack using a numerical propagator.

    ``method`` is ``spectral[:j_max]`` (default ``4*dim``), ``disentangled``,
    ``oracle`` or ``ladder[:order_max]`` (default ``dim // 4``).
    """
    from .disentangle import disentangled_propagate
    from .ladder import ladder_propagate
    from .oracle import expm_trajectory
    from .spectral import _basis

    name, order = parse_method(method)
    times = check_times(times)
    rho0 = check_operator(rho0, dim, name="rho0")
    if name == "closed-form":
        raise ParameterError("method", "closed-form yields observables, not states")
    if name == "oracle":
        return expm_trajectory(rho0, times, params, dim)
    if name == "spectral":
        basis = _basis(params, dim, 4 * dim if order is None else order)
        coeffs = basis.coefficients(rho0)
        return np.array([basis.propagate(rho0, t, coeffs) for t in times])
    if name == "disentangled":
        return np.array([disentangled_propagate(rho0, t, params, dim) for t in times])
    order = dim // 4 if order is None else order
    return np.array([ladder_propagate(rho0, t, order, params, dim) for t in times])


@dataclass
class Trajectory:
    times: np.ndarray
    values: dict[str, np.ndarray]
    method: str

    def __post_init__(self):
        self.times = check_times(self.times)
        for name, v in self.values.items():
            if np.shape(v) != self.times.shape:
                raise ParameterError(name, f"expected {self.times.size} values, got shape {np.shape(v)}")


@dataclass
class CompareReport:
    trajectories: dict[str, Trajectory]
    pairwise: dict[tuple[str, str], dict[str, float]] = field(default_factory=dict)

    @property
    def max_discrepancy(self) -> dict[str, float]:
        names = next(iter(self.trajectories.values())).values.keys()
        return {n: max((d[n] for d in self.pairwise.values()), default=0.0) for n in names}

    @property
    def worst(self) -> float:
        return max(self.max_discrepancy.values(), default=0.0)


def trajectory(rho0, times, params: ModelParams, dim: int, method: str, observables=OBSERVABLES) -> Trajectory:
    times = check_times(times)
    if parse_method(method)[0] == "closed-form":
        values = closed_form_values(rho0, times, params, observables)
    else:
        values = state_values(propagate_states(rho0, times, params, dim, method), params, observables)
    return Trajectory(times, values, method)


def trajectory_compare(rho0, times, params: ModelParams, dim: int, methods, observables=OBSERVABLES) -> CompareReport:
    """Evaluate every observable along every method and collect pairwise max-abs discrepancies.

    Raises:
        ParameterError: on an unknown method or observable name.
    """
    methods = list(methods)
    if not methods:
        raise ParameterError("methods", "need at least one method")
    for m in methods:
        parse_method(m)
    observables = _check_names(observables)
    trajs = {m: trajectory(rho0, times, params, dim, m, observables) for m in methods}
    report = CompareReport(trajs)
    for i, m1 in enumerate(methods):
        for m2 in methods[i + 1:]:
            report.pairwise[(m1, m2)] = {
                n: float(np.max(np.abs(trajs[m1].values[n] - trajs[m2].values[n]))) for n in observables
            }
    if len(methods) == 1:
        report.pairwise[(methods[0], methods[0])] = {n: 0.0 for n in observables}
    return report
