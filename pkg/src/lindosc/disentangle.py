"""Product-of-exponentials propagator built on the sl(2) disentangling of the generator.

After factoring out ``exp((-i Omega N - gamma'/2) t)`` on both sides, the
evolution is ``exp(f2 K2) exp(f3 K3) exp(f1 K1)`` with scalar coefficients
solving a Riccati system.  ``exp(f1 K1)`` and ``exp(f2 K2)`` are finite sums
here because ``a`` and ``a^dagger`` are nilpotent on a truncated space;
``exp(f3 K3)`` is a two-sided multiplication by a diagonal matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import ModelParams, annihilation
from .validation import ParameterError, TruncationError, check_dim, check_operator, check_time

# beyond this gamma_bar * t, exp(2 gamma_bar t) in f2 is replaced by the rescaled form
STABLE_SWITCH = 20.0
# the direct form also switches once f2**(D-1) would leave double range; the
# 1/p! of the K2 series is cancelled by the (n+p)!/n! in the matrix elements
LOG_OVERFLOW = 650.0
TOP_LEVEL_TOL = 1e-10
SUPPORT_TOL = 1e-14


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DisentangleCoeffs:
    t: float
    f1: float
    f2: float
    f3: float


def f_functions(t: float, params: ModelParams) -> DisentangleCoeffs:
    """``f1, f2, f3`` at time ``t``; ``f2`` overflows to ``inf`` for very large ``t``."""
    t = check_time(t)
    xi, kappa = params.xi, params.kappa
    x = math.exp(-kappa * t)
    f1 = -math.expm1(-kappa * t) / (1.0 - xi * x)
    try:
        f2 = math.exp(2.0 * params.gamma_bar * t) * xi * f1
    except OverflowError:
        f2 = math.inf
    # gamma t - ln((e^{kappa t} - xi)/(1 - xi)) without forming e^{kappa t}
    f3 = params.gamma_prime * t - math.log1p(-xi * x) + math.log1p(-xi)
    return DisentangleCoeffs(t, f1, f2, f3)


def riccati_residual(t: float, params: ModelParams, h: float = 1e-5) -> tuple[float, float]:
    """Central-difference residual of ``f2' = gamma e^{-2 gbar t} f2^2 + gamma' e^{2 gbar t}``.

    Returns ``(residual, scale)`` with ``scale`` the magnitude of the source
    term, so callers can test ``residual <= tol * scale``.
    """
    t = check_time(t)
    if t < h:
        raise ParameterError("t", f"need t >= h={h} for a central difference")
    f2 = f_functions(t, params).f2
    df2 = (f_functions(t + h, params).f2 - f_functions(t - h, params).f2) / (2 * h)
    g = params.gamma_bar
    rhs = params.gamma * math.exp(-2 * g * t) * f2**2 + params.gamma_prime * math.exp(2 * g * t)
    return abs(df2 - rhs), abs(params.gamma_prime * math.exp(2 * g * t))


def _exp_K1(c: float, A: np.ndarray, a: np.ndarray) -> np.ndarray:
    """``sum_p c^p/p! a^p A (a^dagger)^p``; exact since ``a^dim = 0``."""
    out = A.copy()
    term = A
    for p in range(1, A.shape[0]):
        term = (c / p) * (a @ term @ a.conj().T)
        out += term
    return out


def _exp_K2(c: float, A: np.ndarray, a: np.ndarray) -> np.ndarray:
    """``sum_p c^p/p! (a^dagger)^p A a^p``; weight pushed above the top level is dropped."""
    out = A.copy()
    term = A
    ad = a.conj().T
    for p in range(1, A.shape[0]):
        term = (c / p) * (ad @ term @ a)
        out += term
    return out


def _check_support(rho0: np.ndarray, buffer: int):
    dim = rho0.shape[0]
    if buffer <= 0:
        return
    top = np.abs(rho0[dim - buffer:, :]).max(initial=0.0)
    top = max(top, np.abs(rho0[:, dim - buffer:]).max(initial=0.0))
    if top > SUPPORT_TOL:
        warnings.warn(
            f"rho0 has weight {top:.3g} within {buffer} levels of the truncation edge",
            TruncationWarning,
            stacklevel=3,
        )


def _direct_overflows(t: float, params: ModelParams, dim: int) -> bool:
    if params.gamma_bar * t > STABLE_SWITCH:
        return True
    f2 = f_functions(t, params).f2
    return f2 > 1 and (dim - 1) * math.log(f2) > LOG_OVERFLOW


def disentangled_propagate(rho0, t: float, params: ModelParams, dim: int, buffer: int = 8, form: str = "auto") -> np.ndarray:
    """Propagate ``rho0`` to time ``t`` with the disentangled product formula.

    Args:
        rho0: initial operator, supported on levels ``<= dim - 1 - buffer``.
        t: time, ``>= 0``.
        params: model parameters.
        dim: truncation dimension.
        buffer: empty levels required above the support of ``rho0``.
        form: ``"direct"`` evaluates the product as written, with ``f2``
            growing like ``exp(2 gamma_bar t)``; ``"rescaled"`` folds that
            growth into the outer factors; ``"auto"`` switches to the
            rescaled form once ``gamma_bar * t > 20`` or once the largest
            term of the ``K2`` series would overflow.

    Warns:
        TruncationWarning: if ``rho0`` reaches into the buffer.

    Raises:
        TruncationError: if the top level of the result holds more than
            ``1e-10`` population.
    """
    t = check_time(t)
    dim = check_dim(dim, max_dim=None)
    rho0 = check_operator(rho0, dim, name="rho0")
    if not 0 <= buffer < dim:
        raise ParameterError("buffer", f"must lie in 0..{dim - 1}, got {buffer}")
    _check_support(rho0, buffer)
    if form == "auto":
        form = "rescaled" if _direct_overflows(t, params, dim) else "direct"
    if form not in ("direct", "rescaled"):
        raise ParameterError("form", f"expected 'direct', 'rescaled' or 'auto', got {form!r}")
    if t == 0.0:
        return rho0.copy()

    coeffs = f_functions(t, params)
    a = annihilation(dim)
    n = np.arange(dim, dtype=float)
    inner = _exp_K1(coeffs.f1, rho0, a)
    if form == "direct":
        k3 = np.exp(coeffs.f3 * (n + 0.5))
        inner = k3[:, None] * inner * k3[None, :]
        inner = _exp_K2(coeffs.f2, inner, a)
        left = np.exp((-1j * params.omega_complex * n - 0.5 * params.gamma_prime) * t)
        rho_t = left[:, None] * inner * left.conj()[None, :]
    else:
        x = math.exp(-params.kappa * t)
        f = (1.0 - params.xi) / (1.0 - params.xi * x)
        # (e^{-i w t} sqrt(x) f)^N on the left, its conjugate on the right
        left = np.exp(-1j * params.omega * t * n) * (math.sqrt(x) * f) ** n
        inner = left[:, None] * inner * left.conj()[None, :]
        rho_t = f * _exp_K2(params.xi * coeffs.f1, inner, a)

    top = abs(rho_t[dim - 1, dim - 1])
    if top > TOP_LEVEL_TOL:
        raise TruncationError(f"top-level population {top:.3g} exceeds {TOP_LEVEL_TOL:g}; increase D")
    return rho_t
