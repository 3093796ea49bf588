"""Closed-form eigenmodes of the damped-oscillator Liouvillian and the mode-sum propagator.

A mode is labelled by the dissipation number ``j >= 0`` and the phase number
``k`` in ``{-j, -j+2, ..., j}``; ``l = (j - |k|) / 2``.  Its eigenvalue is
``-j*kappa/2 - i*k*omega``.

Left-vector convention: the eigenprojection acts as
``Pi_{j,k} rho = R_{j,k} * tr(W_{j,k} rho)`` and :func:`left_vector` returns
``W_{j,k}`` itself, i.e. the functional is ``tr(W rho)`` with no adjoint.  In
Hilbert-Schmidt language the bra is ``<<W^dagger|``, which is why the left
eigen-equation reads ``L^dagger(W^dagger) = conj(lambda) W^dagger``.

For ``k >= 0`` both ``R`` and ``W`` have a single nonzero band,
``W[r, r+k]`` and ``R[r+k, r] = xi**r * W[r, r+k]``; the ``k < 0`` modes are
the adjoints of the ``k > 0`` ones.  Band entries are evaluated exactly (see
:func:`lindosc.combinatorics.left_band_sums`) and rounded once, because the
underlying alternating sums lose all precision in floating point for large
``l``.

Both ``R`` and ``W`` are exact truncations of their infinite-dimensional
counterparts (annihilators act first, so no intermediate level leaves the
block).  ``R`` however has weight above level ``D - 1``; :func:`right_vector`
refuses dimensions where ``xi**(D - j)`` exceeds ``1e-12``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .combinatorics import factorial, left_band_numerators
from .core import ModelParams, default_dim, trace_norm
from .validation import DimensionError, ParameterError, check_dim, check_nonneg_int, check_operator, check_time

GUARD_TOL = 1e-12


def check_mode(j: int, k: int) -> tuple[int, int, int]:
    """Validate ``(j, k)`` and return ``(j, k, l)``."""
    j = check_nonneg_int("j", j)
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise ParameterError("k", f"must be an integer, got {k!r}")
    k = int(k)
    if abs(k) > j or (j - abs(k)) % 2:
        raise ParameterError("k", f"need |k| <= j with j - |k| even, got (j, k) = ({j}, {k})")
    return j, k, (j - abs(k)) // 2


def mode_indices(j_max: int) -> list[tuple[int, int]]:
    """All ``(j, k)`` with ``j <= j_max``, ordered by ``j`` ascending then ``k`` descending."""
    j_max = check_nonneg_int("j_max", j_max)
    return [(j, k) for j in range(j_max + 1) for k in range(j, -j - 1, -2)]


def eigenvalue(j: int, k: int, params: ModelParams) -> complex:
    check_mode(j, k)
    return complex(0.0 - 0.5 * j * params.kappa, 0.0 - k * params.omega)


def required_dim(j: int, params: ModelParams, tol: float = GUARD_TOL) -> int:
    """Smallest ``D`` with ``xi**(D - j) < tol``."""
    return check_nonneg_int("j", j) + default_dim(params, tol)


def _check_guard(j: int, params: ModelParams, dim: int):
    need = required_dim(j, params)
    if dim < need:
        raise DimensionError(
            f"mode j={j} needs D >= {need} so that xi**(D-j) < {GUARD_TOL:g} (xi={params.xi:.6g}); got D={dim}"
        )


def _signed_sqrt(sign: int, num: int, den: int) -> float:
    """``sign * sqrt(num / den)`` for huge positive integers, rounded once before the root."""
    try:
        return sign * math.sqrt(num / den)
    except OverflowError:
        return sign * math.exp(0.5 * (math.log(num) - math.log(den)))


@lru_cache(maxsize=65536)
def _bands(k: int, l: int, xi: Fraction, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Float bands ``(W[r, r+k], R[r+k, r])`` for ``r = 0 .. dim-k-1`` (mode with ``k >= 0``).

    With ``xi = v/Q``, ``u = Q - v`` and the integer numerators ``T(r)`` of
    the band sums, ``W[r, r+k]**2 = l! u^(k+1) (r+k)! T(r)^2 / ((k+l)! v^l Q^(k+l+1) r!)``;
    the square is formed in integers and divided once.
    """
    length = max(dim - k, 0)
    totals = left_band_numerators(k, l, xi, length)
    v, Q = xi.numerator, xi.denominator
    u = Q - v
    num_base = factorial(l) * u ** (k + 1)
    den_base = factorial(k + l) * v**l * Q ** (k + l + 1)
    w = np.zeros(length)
    rv = np.zeros(length)
    for r, total in enumerate(totals):
        if total == 0:
            continue
        sign = 1 if total > 0 else -1
        num = num_base * factorial(r + k) * total * total
        den = den_base * factorial(r)
        w[r] = _signed_sqrt(sign, num, den)
        rv[r] = _signed_sqrt(sign, num * v ** (2 * r), den * Q ** (2 * r))
    w.setflags(write=False)
    rv.setflags(write=False)
    return w, rv


def mode_bands(j: int, k: int, params: ModelParams, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Bands of the ``|k|`` mode; see the module docstring for their placement."""
    j, k, l = check_mode(j, k)
    dim = check_dim(dim, max_dim=None)
    return _bands(abs(k), l, params.xi_exact, dim)


def _place(band: np.ndarray, k: int, dim: int, lower: bool) -> np.ndarray:
    M = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(band.size)
    if lower:
        M[idx + k, idx] = band
    else:
        M[idx, idx + k] = band
    return M


def right_vector(j: int, k: int, params: ModelParams, dim: int, strict: bool = True) -> np.ndarray:
    """Right eigenvector ``|j,k>>`` as a ``dim x dim`` matrix.

    With ``strict`` the truncation guard ``xi**(dim - j) < 1e-12`` is enforced.
    """
    j, k, l = check_mode(j, k)
    dim = check_dim(dim, max_dim=None)
    if strict:
        _check_guard(j, params, dim)
    _, rv = _bands(abs(k), l, params.xi_exact, dim)
    # k < 0 is the adjoint of k > 0; bands are real so the adjoint is a transpose
    return _place(rv, abs(k), dim, lower=k >= 0)


def left_vector(j: int, k: int, params: ModelParams, dim: int, strict: bool = True) -> np.ndarray:
    """The operator ``W_{j,k}`` whose functional ``rho -> tr(W rho)`` is the left eigenvector."""
    j, k, l = check_mode(j, k)
    dim = check_dim(dim, max_dim=None)
    if strict:
        _check_guard(j, params, dim)
    w, _ = _bands(abs(k), l, params.xi_exact, dim)
    return _place(w, abs(k), dim, lower=k < 0)


def pairing(left, A) -> complex:
    """``tr(left @ A)``, no adjoint on ``left``."""
    left = check_operator(left, name="left")
    A = check_operator(A, left.shape[0], name="A")
    return complex(np.einsum("ij,ji->", left, A))


@dataclass(frozen=True, eq=False)
class SpectralMode:
    j: int
    k: int
    l: int
    lam: complex
    right: np.ndarray
    left: np.ndarray


def spectral_mode(j: int, k: int, params: ModelParams, dim: int, strict: bool = True) -> SpectralMode:
    j, k, l = check_mode(j, k)
    return SpectralMode(
        j, k, l,
        eigenvalue(j, k, params),
        right_vector(j, k, params, dim, strict),
        left_vector(j, k, params, dim, strict),
    )


def projection_apply(j: int, k: int, rho, params: ModelParams, dim: int, strict: bool = True) -> np.ndarray:
    """``Pi_{j,k} rho = |j,k>> tr(W_{j,k} rho)``."""
    rho = check_operator(rho, dim, name="rho")
    R = right_vector(j, k, params, dim, strict)
    W = left_vector(j, k, params, dim, strict)
    return R * pairing(W, rho)


class SpectralBasis:
    """All modes with ``j <= j_max`` at dimension ``dim``, stored band-wise.

    Modes whose band lies entirely outside the block (``|k| >= dim``) are
    dropped.  No truncation guard is applied: the mode sum needs ``j`` far
    beyond what :func:`right_vector` accepts, and each truncated band is
    still the exact restriction of the infinite-dimensional operator.
    """

    def __init__(self, params: ModelParams, dim: int, j_max: int):
        self.params = params
        self.dim = check_dim(dim, max_dim=None)
        self.j_max = check_nonneg_int("j_max", j_max)
        xi = params.xi_exact
        self._sectors = {}
        for k in range(min(self.j_max, self.dim - 1) + 1):
            ls = range((self.j_max - k) // 2 + 1)
            bands = [_bands(k, l, xi, self.dim) for l in ls]
            W = np.array([b[0] for b in bands])
            R = np.array([b[1] for b in bands])
            js = np.array([k + 2 * l for l in ls])
            self._sectors[k] = (js, W, R)

    def coefficients(self, rho0) -> dict[int, np.ndarray]:
        """Pairings ``tr(W_{j,k} rho0)`` grouped by ``k`` (index ``l`` within each group)."""
        rho0 = check_operator(rho0, self.dim, name="rho0")
        out = {}
        for k, (js, W, R) in self._sectors.items():
            idx = np.arange(self.dim - k)
            out[k] = W @ rho0[idx + k, idx]
            if k > 0:
                out[-k] = W.conj() @ rho0[idx, idx + k]
        return out

    def propagate(self, rho0, t: float, coeffs=None) -> np.ndarray:
        t = check_time(t)
        if coeffs is None:
            coeffs = self.coefficients(rho0)
        p = self.params
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for k, (js, W, R) in self._sectors.items():
            decay = np.exp(-0.5 * js * p.kappa * t)
            idx = np.arange(self.dim - k)
            phase = np.exp(-1j * k * p.omega * t)
            out[idx + k, idx] += phase * ((decay * coeffs[k]) @ R)
            if k > 0:
                out[idx, idx + k] += np.conj(phase) * ((decay * coeffs[-k]) @ R.conj())
        return out

    def mode_count(self) -> int:
        return sum(len(js) * (1 if k == 0 else 2) for k, (js, _, _) in self._sectors.items())


@lru_cache(maxsize=16)
def _basis(params: ModelParams, dim: int, j_max: int) -> SpectralBasis:
    return SpectralBasis(params, dim, j_max)


def spectral_propagate(rho0, t: float, j_max: int, params: ModelParams, dim: int, return_bound: bool = False):
    """``rho(t) = sum_{j <= j_max} sum_k exp(lambda_{j,k} t) Pi_{j,k} rho0``.

    With ``return_bound`` also returns a remainder estimate: the trace norm of
    what the retained modes miss at ``t = 0``, damped by
    ``exp(-(j_max+1) kappa t / 2)``.  This is an estimate, not a rigorous bound.
    """
    dim = check_dim(dim, max_dim=None)
    rho0 = check_operator(rho0, dim, name="rho0")
    basis = _basis(params, dim, check_nonneg_int("j_max", j_max))
    coeffs = basis.coefficients(rho0)
    rho_t = basis.propagate(rho0, t, coeffs)
    if not return_bound:
        return rho_t
    residual = rho0 - basis.propagate(rho0, 0.0, coeffs)
    bound = trace_norm(residual) * math.exp(-0.5 * (j_max + 1) * params.kappa * check_time(t))
    return rho_t, bound


def completeness_partial_sum(rho0, J: int, params: ModelParams, dim: int) -> np.ndarray:
    """``sum_{j <= J} sum_k Pi_{j,k} rho0``, which tends to ``rho0`` as ``J`` grows."""
    return spectral_propagate(rho0, 0.0, J, params, dim)


def right_residual(j: int, k: int, params: ModelParams, dim: int, strict: bool = True) -> float:
    """``max |L R - lambda R| / max |R|`` over the whole block."""
    from .superop import liouvillian_apply

    R = right_vector(j, k, params, dim, strict)
    lam = eigenvalue(j, k, params)
    return float(np.abs(liouvillian_apply(params, R) - lam * R).max() / np.abs(R).max())


def left_residual(j: int, k: int, params: ModelParams, dim: int, guard: int = 2, strict: bool = True) -> float:
    """Relative defect of ``tr(W L rho) = lambda tr(W rho)`` on levels below ``dim - guard``.

    The trace-dual of the generator is ``W -> (L^dagger(W^dagger))^dagger``;
    ``W`` grows with the level, so only the block away from the truncation
    edge is meaningful.
    """
    from .superop import adjoint_liouvillian_apply

    W = left_vector(j, k, params, dim, strict)
    lam = eigenvalue(j, k, params)
    dual = adjoint_liouvillian_apply(params, W.conj().T).conj().T
    cut = dim - guard
    diff = (dual - lam * W)[:cut, :cut]
    return float(np.abs(diff).max() / np.abs(W[:cut, :cut]).max())


def pairing_matrix(j_max: int, params: ModelParams, dim: int, strict: bool = False) -> np.ndarray:
    """``tr(W_{j,k} R_{j',k'})`` over all modes with ``j, j' <= j_max`` in :func:`mode_indices` order."""
    modes = mode_indices(j_max)
    Ws = [left_vector(j, k, params, dim, strict) for j, k in modes]
    Rs = [right_vector(j, k, params, dim, strict) for j, k in modes]
    return np.array([[pairing(W, R) for R in Rs] for W in Ws])


def biorthogonality_defect(j_max: int, params: ModelParams, dim: int) -> float:
    P = pairing_matrix(j_max, params, dim)
    return float(np.abs(P - np.eye(P.shape[0])).max())


def vacuum_reconstruction(Q: int, params: ModelParams, dim: int) -> np.ndarray:
    """``sum_{q <= Q} alpha_q (a^dag)^q xi^N a^q`` with the exact weights of
    :func:`lindosc.combinatorics.completeness_alphas`, rounded once.

    The result is diagonal; level ``h`` carries ``xi^h sum_{q <= min(Q, h)} (-1)^q binom(h, q)``,
    which is ``delta(h, 0)`` for ``h <= Q`` and ``(-1)^Q xi^h binom(h-1, Q)`` above.
    """
    from .combinatorics import completeness_alphas

    Q = check_nonneg_int("Q", Q)
    dim = check_dim(dim, max_dim=None)
    xi = params.xi_exact
    alphas = completeness_alphas(Q, xi)
    diag = []
    for h in range(dim):
        total = sum(alphas[q] * Fraction(factorial(h), factorial(h - q)) * xi ** (h - q) for q in range(min(Q, h) + 1))
        diag.append(float(total))
    return np.diag(np.array(diag, dtype=complex))
