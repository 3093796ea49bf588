"""Brute-force reference propagator and spectrum.

The propagator exponentiates the dense ``D^2 x D^2`` generator with
:func:`scipy.linalg.expm` (scaling and squaring with a Pade kernel).  It
shares nothing with the closed-form modules except the generator matrix,
which is what makes it useful as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .core import ModelParams
from .spectral import eigenvalue, mode_indices
from .superop import devectorize, liouvillian_matrix, vectorize
from .validation import ParameterError, check_dim, check_operator, check_operator_stack, check_time, check_times

ORACLE_MAX_DIM = 64
SPECTRUM_MAX_DIM = 40
MATCH_TOL = 1e-6


@lru_cache(maxsize=8)
def _generator(params: ModelParams, dim: int) -> np.ndarray:
    return liouvillian_matrix(params, dim).matrix


@lru_cache(maxsize=6)
def step_matrix(params: ModelParams, dim: int, t: float) -> np.ndarray:
    """``expm(t * L)`` as a read-only ``D^2 x D^2`` array (cached)."""
    dim = check_dim(dim, max_dim=ORACLE_MAX_DIM)
    t = check_time(t)
    M = scipy.linalg.expm(t * _generator(params, dim))
    M.setflags(write=False)
    return M


def expm_propagate(rho0, t: float, params: ModelParams, dim: int) -> np.ndarray:
    """``devec(expm(t L) vec(rho0))``.

    Raises:
        DimensionError: if ``dim`` exceeds 64.
    """
    dim = check_dim(dim, max_dim=ORACLE_MAX_DIM)
    t = check_time(t)
    rho0 = check_operator(rho0, dim, name="rho0")
    if t == 0.0:
        return rho0.copy()
    return devectorize(step_matrix(params, dim, t) @ vectorize(rho0))


def expm_trajectory(rho0, times, params: ModelParams, dim: int) -> np.ndarray:
    """States at every time in ``times`` by stepping through the gaps.

    One exponential is computed per distinct gap (rounded to 1e-12), so a
    uniform grid costs two exponentials.  Returns shape ``(len(times), D, D)``.
    """
    dim = check_dim(dim, max_dim=ORACLE_MAX_DIM)
    times = check_times(times)
    rho0 = check_operator(rho0, dim, name="rho0")
    out = np.empty((times.size, dim, dim), dtype=complex)
    v = vectorize(rho0)
    prev = 0.0
    for i, t in enumerate(times):
        gap = round(float(t) - prev, 12)
        if gap > 0:
            v = step_matrix(params, dim, gap) @ v
        out[i] = devectorize(v)
        prev = float(t)
    return out


def semigroup_defect(rho0, t1: float, t2: float, params: ModelParams, dim: int) -> float:
    """``max |P(t1+t2) rho0 - P(t2) P(t1) rho0|``."""
    one = expm_propagate(rho0, t1 + t2, params, dim)
    two = expm_propagate(expm_propagate(rho0, t1, params, dim), t2, params, dim)
    return float(np.abs(one - two).max())


@dataclass(frozen=True)
class ModeMatch:
    j: int
    k: int
    closed_form: complex
    numerical: complex

    @property
    def error(self) -> float:
        return abs(self.closed_form - self.numerical)


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    matches: tuple[ModeMatch, ...]
    tol: float

    @property
    def max_error(self) -> float:
        return max((m.error for m in self.matches), default=0.0)

    @property
    def all_matched(self) -> bool:
        return self.max_error <= self.tol

    @property
    def nearest_zero(self) -> complex:
        return complex(self.eigenvalues[np.argmin(np.abs(self.eigenvalues))])


def numerical_spectrum(params: ModelParams, dim: int, j_cut: int | None = None, tol: float = MATCH_TOL) -> SpectrumReport:
    """Dense eigenvalues of the generator, greedily matched to ``lambda_{j,k}`` for ``j <= j_cut``.

    Each closed-form eigenvalue (in :func:`lindosc.spectral.mode_indices`
    order) claims the nearest numerical eigenvalue not yet taken.  Modes
    above ``j_cut`` (default ``dim // 4``) are distorted by truncation and
    are not matched.
    """
    dim = check_dim(dim, max_dim=SPECTRUM_MAX_DIM)
    if j_cut is None:
        j_cut = dim // 4
    if not 0 <= j_cut < dim:
        raise ParameterError("j_cut", f"must lie in 0..{dim - 1}, got {j_cut}")
    ev = scipy.linalg.eigvals(_generator(params, dim))
    ev = ev[np.lexsort((ev.imag, -ev.real))]
    taken = np.zeros(ev.size, dtype=bool)
    matches = []
    for j, k in mode_indices(j_cut):
        lam = eigenvalue(j, k, params)
        dist = np.where(taken, np.inf, np.abs(ev - lam))
        i = int(np.argmin(dist))
        taken[i] = True
        matches.append(ModeMatch(j, k, lam, complex(ev[i])))
    return SpectrumReport(ev, tuple(matches), tol)


def propagate_stack(rho0s, t: float, params: ModelParams, dim: int) -> np.ndarray:
    """:func:`expm_propagate` over a stack of initial states (shape ``(n, D, D)``)."""
    stack = check_operator_stack(rho0s, dim)
    if check_time(t) == 0.0:
        return stack.copy()
    M = step_matrix(params, dim, t)
    vecs = stack.transpose(0, 2, 1).reshape(stack.shape[0], -1)
    out = vecs @ M.T
    return out.reshape(stack.shape[0], dim, dim).transpose(0, 2, 1)
