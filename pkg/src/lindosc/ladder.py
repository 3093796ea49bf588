"""Ladder superoperators of the Liouvillian and the spectral resolution they generate.

``X+ = L+ - R-`` and ``Y+ = R+ - L-`` raise the dissipation number ``j`` by
one and shift the phase number ``k`` by +1 and -1; ``X- = gamma' R+ - gamma L-``
and ``Y- = gamma' L+ - gamma R-`` lower them.  Both lowering operators
annihilate ``exp(-beta omega N)``, the ground state, which is normalized
here with the constant ``C = 1`` (so the dual ground state is
``(1 - xi) * identity``).

Duals act on the bra side through the trace pairing: ``S*(W)`` is the
operator with ``tr(S*(W) rho) = tr(W S(rho))``.  Under the column-stacking
vectorization this is the transposed superoperator matrix, see
:meth:`lindosc.superop.SuperOperator.dual_apply`; it is not the
Hilbert-Schmidt adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .combinatorics import factorial
from .core import ModelParams, annihilation, boltzmann_operator
from .spectral import pairing
from .superop import SuperOperator, elementary_matrix
from .validation import DimensionError, ParameterError, check_dim, check_nonneg_int, check_operator, check_time

LADDERS = ("X+", "X-", "Y+", "Y-")


def apply_ladder(which: str, A, params: ModelParams) -> np.ndarray:
    A = check_operator(A)
    a = annihilation(A.shape[0])
    ad = a.conj().T
    if which == "X+":
        return ad @ A - A @ ad
    if which == "X-":
        return params.gamma_prime * (A @ a) - params.gamma * (a @ A)
    if which == "Y+":
        return A @ a - a @ A
    if which == "Y-":
        return params.gamma_prime * (ad @ A) - params.gamma * (A @ ad)
    raise ParameterError("which", f"unknown ladder superoperator {which!r}; expected one of {LADDERS}")


@lru_cache(maxsize=32)
def ladder_matrix(which: str, params: ModelParams, dim: int) -> SuperOperator:
    dim = check_dim(dim)
    Lp, Lm, Rp, Rm = (elementary_matrix(w, dim) for w in ("L+", "L-", "R+", "R-"))
    if which == "X+":
        return Lp - Rm
    if which == "X-":
        return params.gamma_prime * Rp - params.gamma * Lm
    if which == "Y+":
        return Rp - Lm
    if which == "Y-":
        return params.gamma_prime * Lp - params.gamma * Rm
    raise ParameterError("which", f"unknown ladder superoperator {which!r}; expected one of {LADDERS}")


def ladder_eigenvalue(m: int, n: int, params: ModelParams) -> complex:
    """``mu_{m,n} = -(m+n) kappa / 2 - i (m-n) omega``, the same arithmetic as ``lambda_{m+n, m-n}``."""
    m = check_nonneg_int("m", m)
    n = check_nonneg_int("n", n)
    return complex(0.0 - 0.5 * (m + n) * params.kappa, 0.0 - (m - n) * params.omega)


def _check_guard(m: int, n: int, dim: int):
    m = check_nonneg_int("m", m)
    n = check_nonneg_int("n", n)
    if 4 * (m + n) > dim:
        raise DimensionError(f"ladder order m+n={m + n} needs D >= {4 * (m + n)}; got D={dim}")
    return m, n


@dataclass(frozen=True, eq=False)
class LadderState:
    m: int
    n: int
    mu: complex
    ket: np.ndarray
    bra: np.ndarray


def ground_state(params: ModelParams, dim: int) -> np.ndarray:
    return boltzmann_operator(params, dim)


def ground_dual(params: ModelParams, dim: int) -> np.ndarray:
    """``(1 - xi) * identity``, normalized against :func:`ground_state` on the full series."""
    return (1.0 - params.xi) * np.eye(dim, dtype=complex)


def raised_ket(m: int, n: int, params: ModelParams, dim: int) -> np.ndarray:
    """``X+^m Y+^n exp(-beta omega N)``."""
    dim = check_dim(dim, max_dim=None)
    m, n = _check_guard(m, n, dim)
    ket = ground_state(params, dim)
    for _ in range(n):
        ket = apply_ladder("Y+", ket, params)
    for _ in range(m):
        ket = apply_ladder("X+", ket, params)
    return ket


def dual_vector(m: int, n: int, params: ModelParams, dim: int) -> np.ndarray:
    """Operator ``W`` with ``tr(W rho) = tr((1-xi) X-^m Y-^n rho) / (m! n! (gamma'-gamma)^(m+n))``.

    Built with the transposed superoperator matrices (the trace-dual action).
    """
    dim = check_dim(dim)
    m, n = _check_guard(m, n, dim)
    Xm = ladder_matrix("X-", params, dim)
    Ym = ladder_matrix("Y-", params, dim)
    W = ground_dual(params, dim)
    # tr(W X^m Y^n rho): peel the X factors first, then the Y factors
    for _ in range(m):
        W = Xm.dual_apply(W)
    for _ in range(n):
        W = Ym.dual_apply(W)
    norm = factorial(m) * factorial(n) * (params.gamma_prime - params.gamma) ** (m + n)
    return W / norm


def build_eigenstate(m: int, n: int, params: ModelParams, dim: int) -> LadderState:
    ket = raised_ket(m, n, params, dim)
    bra = dual_vector(m, n, params, dim)
    return LadderState(m, n, ladder_eigenvalue(m, n, params), ket, bra)


def collinearity_defect(u, v) -> float:
    """Distance between ``u/|u|`` and ``v/|v|`` after the best global phase."""
    u = np.asarray(u).ravel()
    v = np.asarray(v).ravel()
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    overlap = np.vdot(v, u)
    phase = overlap / abs(overlap) if overlap != 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def ladder_modes(order_max: int) -> list[tuple[int, int]]:
    order_max = check_nonneg_int("order_max", order_max)
    return [(m, s - m) for s in range(order_max + 1) for m in range(s, -1, -1)]


def ladder_weights(rho0, order_max: int, params: ModelParams) -> dict[tuple[int, int], complex]:
    """``(1-xi) tr(X-^m Y-^n rho0) / (m! n! (gamma'-gamma)^(m+n))`` for ``m + n <= order_max``."""
    rho0 = check_operator(rho0, name="rho0")
    order_max = check_nonneg_int("order_max", order_max)
    lowered_y = [rho0]
    for _ in range(order_max):
        lowered_y.append(apply_ladder("Y-", lowered_y[-1], params))
    weights = {}
    for n in range(order_max + 1):
        cur = lowered_y[n]
        for m in range(order_max - n + 1):
            if m:
                cur = apply_ladder("X-", cur, params)
            norm = factorial(m) * factorial(n) * (params.gamma_prime - params.gamma) ** (m + n)
            weights[(m, n)] = (1.0 - params.xi) * np.trace(cur) / norm
    return weights


def ladder_propagate(rho0, t: float, order_max: int, params: ModelParams, dim: int) -> np.ndarray:
    """Mode sum over ladder eigenstates with ``m + n <= order_max``."""
    t = check_time(t)
    dim = check_dim(dim, max_dim=None)
    rho0 = check_operator(rho0, dim, name="rho0")
    _check_guard(order_max, 0, dim)
    weights = ladder_weights(rho0, order_max, params)
    kets = _ket_table(params, dim, order_max)
    out = np.zeros((dim, dim), dtype=complex)
    for (m, n), w in weights.items():
        if w != 0:
            out += np.exp(ladder_eigenvalue(m, n, params) * t) * w * kets[(m, n)]
    return out


@lru_cache(maxsize=8)
def _ket_table(params: ModelParams, dim: int, order_max: int) -> dict[tuple[int, int], np.ndarray]:
    table = {}
    raised_y = ground_state(params, dim)
    for n in range(order_max + 1):
        cur = raised_y
        for m in range(order_max - n + 1):
            if m:
                cur = apply_ladder("X+", cur, params)
            table[(m, n)] = cur
        raised_y = apply_ladder("Y+", raised_y, params)
    return table


def ladder_pairing_matrix(order_max: int, params: ModelParams, dim: int) -> np.ndarray:
    """``tr(bra_{m,n} ket_{m',n'})`` over all pairs in :func:`ladder_modes` order."""
    modes = ladder_modes(order_max)
    bras = [dual_vector(m, n, params, dim) for m, n in modes]
    kets = [raised_ket(m, n, params, dim) for m, n in modes]
    return np.array([[pairing(b, k) for k in kets] for b in bras])


def commutator_table(params: ModelParams) -> dict[str, tuple[str, str, str, complex]]:
    """Expected commutation relations ``[A, B] = c * C`` (``C`` is ``"1"`` for the identity).

    The four relations with the generator, the two ladder pairs, and the
    four vanishing cross commutators.
    """
    kappa, w = params.kappa, params.omega
    return {
        "[L,X+]": ("L", "X+", "X+", complex(-0.5 * kappa, -w)),
        "[L,X-]": ("L", "X-", "X-", complex(0.5 * kappa, w)),
        "[L,Y+]": ("L", "Y+", "Y+", complex(-0.5 * kappa, w)),
        "[L,Y-]": ("L", "Y-", "Y-", complex(0.5 * kappa, -w)),
        "[X-,X+]": ("X-", "X+", "1", complex(-kappa)),
        "[Y-,Y+]": ("Y-", "Y+", "1", complex(-kappa)),
        "[X+,Y+]": ("X+", "Y+", "1", 0j),
        "[X+,Y-]": ("X+", "Y-", "1", 0j),
        "[X-,Y+]": ("X-", "Y+", "1", 0j),
        "[X-,Y-]": ("X-", "Y-", "1", 0j),
    }


def commutator_defects(params: ModelParams, dim: int, guard: int = 2) -> dict[str, float]:
    """Max-abs defect of each relation in :func:`commutator_table` on the interior block.

    Both sides are compressed to operators supported on levels
    ``0 .. dim-1-guard``, where truncation of ``a`` and ``a^dagger`` is invisible.
    """
    from .superop import identity_superop, interior_projector, liouvillian_matrix, sandwich

    dim = check_dim(dim)
    P = interior_projector(dim, guard)
    Psup = sandwich(P, P)
    keep = np.flatnonzero(np.diag(Psup).real > 0.5)
    ops = {name: ladder_matrix(name, params, dim).matrix for name in LADDERS}
    ops["L"] = liouvillian_matrix(params, dim).matrix
    ops["1"] = identity_superop(dim).matrix
    out = {}
    for label, (A, B, C, c) in commutator_table(params).items():
        diff = ops[A] @ ops[B] - ops[B] @ ops[A] - c * ops[C]
        out[label] = float(np.abs(diff[np.ix_(keep, keep)]).max())
    return out


def ladder_rows(order_max: int, params: ModelParams, dim: int) -> list[tuple]:
    """``(m, n, mu, residual, collinearity_defect)`` for every ladder mode with ``m + n <= order_max``.

    ``residual`` is ``|L ket - mu ket| / |ket|`` on the block below the
    levels touched by truncation; the collinearity defect compares the ket
    with the closed-form right eigenvector ``(m+n, m-n)``.
    """
    from .spectral import right_vector
    from .superop import liouvillian_apply

    dim = check_dim(dim)
    _check_guard(order_max, 0, dim)
    rows = []
    for m, n in ladder_modes(order_max):
        ket = raised_ket(m, n, params, dim)
        mu = ladder_eigenvalue(m, n, params)
        cut = dim - (m + n) - 2
        resid = (liouvillian_apply(params, ket) - mu * ket)[:cut, :cut]
        residual = float(np.linalg.norm(resid) / np.linalg.norm(ket))
        R = right_vector(m + n, m - n, params, dim, strict=False)
        rows.append((m, n, mu, residual, collinearity_defect(ket, R)))
    return rows
