"""Superoperators on the truncated operator space.

Vectorization convention (normative for every matrix in this package):
column stacking, ``vec(A)[i + D*j] = A[i, j]``.  Under it the map
``rho -> X @ rho @ Y^dagger`` has the matrix ``kron(conj(Y), X)``, left
multiplication by ``X`` is ``kron(I, X)`` and right multiplication by ``Y``
is ``kron(Y.T, I)``.

Every superoperator is available both as a ``D^2 x D^2`` matrix and as a direct
operator-level action; the two routes must agree to rounding.  Truncation
breaks ``[a, a^dagger] = 1`` at the top level, so algebraic identities only
hold for inputs supported away from it (see :func:`interior_projector`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ModelParams, annihilation, number
from .validation import DimensionError, ParameterError, check_dim, check_operator


def vectorize(A) -> np.ndarray:
    A = check_operator(A)
    return A.reshape(-1, order="F")


def devectorize(v) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {v.shape}")
    dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size or dim < 2:
        raise DimensionError(f"vector length {v.size} is not a square >= 4")
    return v.reshape(dim, dim, order="F").astype(complex, copy=False)


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """A linear map on ``D x D`` operators stored as its ``D^2 x D^2`` matrix."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        n = self.dim * self.dim
        if self.matrix.shape != (n, n):
            raise DimensionError(f"matrix shape {self.matrix.shape} does not match dim {self.dim}")

    def apply(self, A) -> np.ndarray:
        A = check_operator(A, self.dim)
        return devectorize(self.matrix @ vectorize(A))

    def dual_apply(self, W) -> np.ndarray:
        """Trace-dual action: the ``W'`` with ``tr(W' rho) = tr(W S(rho))`` for all ``rho``.

        ``tr(W rho) = vec(W.T) . vec(rho)``, so ``W'`` is obtained from the
        transposed matrix.  This is not the Hilbert-Schmidt adjoint.
        """
        W = check_operator(W, self.dim)
        return devectorize(self.matrix.T @ vectorize(W.T)).T

    def adjoint(self) -> "SuperOperator":
        """Hilbert-Schmidt adjoint, ``tr((S^dag B)^dag A) = tr(B^dag S(A))``."""
        return SuperOperator(self.dim, self.matrix.conj().T)

    def __matmul__(self, other: "SuperOperator") -> "SuperOperator":
        return SuperOperator(self.dim, self.matrix @ other.matrix)

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        return SuperOperator(self.dim, self.matrix + other.matrix)

    def __sub__(self, other: "SuperOperator") -> "SuperOperator":
        return SuperOperator(self.dim, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "SuperOperator":
        return SuperOperator(self.dim, scalar * self.matrix)

    __rmul__ = __mul__

    def commutator(self, other: "SuperOperator") -> "SuperOperator":
        return SuperOperator(self.dim, self.matrix @ other.matrix - other.matrix @ self.matrix)


def identity_superop(dim: int) -> SuperOperator:
    dim = check_dim(dim)
    return SuperOperator(dim, np.eye(dim * dim, dtype=complex))


def left_multiplication(X) -> np.ndarray:
    X = check_operator(X)
    return np.kron(np.eye(X.shape[0]), X)


def right_multiplication(Y) -> np.ndarray:
    Y = check_operator(Y)
    return np.kron(Y.T, np.eye(Y.shape[0]))


def sandwich(X, Y) -> np.ndarray:
    """Matrix of ``rho -> X rho Y^dagger``."""
    X = check_operator(X)
    Y = check_operator(Y, X.shape[0])
    return np.kron(Y.conj(), X)


def _ladder_ops(dim: int):
    a = annihilation(dim)
    ad = a.conj().T
    # products of the truncated matrices: a @ ad has 0 (not D) in its last entry,
    # which keeps the truncated generator exactly trace preserving
    return a, ad, ad @ a, a @ ad


def liouvillian_matrix(params: ModelParams, dim: int) -> SuperOperator:
    """Lindblad generator with jump operators ``sqrt(gamma) a`` and ``sqrt(gamma') a^dagger``."""
    dim = check_dim(dim)
    a, ad, n_op, aad = _ladder_ops(dim)
    eye = np.eye(dim)
    H = params.omega * n_op
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    L += params.gamma * (sandwich(a, a) - 0.5 * (np.kron(eye, n_op) + np.kron(n_op.T, eye)))
    L += params.gamma_prime * (sandwich(ad, ad) - 0.5 * (np.kron(eye, aad) + np.kron(aad.T, eye)))
    return SuperOperator(dim, L)


def liouvillian_apply(params: ModelParams, A) -> np.ndarray:
    """Direct action of the generator on an operator."""
    A = check_operator(A)
    a, ad, n_op, aad = _ladder_ops(A.shape[0])
    H = params.omega * n_op
    out = -1j * (H @ A - A @ H)
    out += params.gamma * (a @ A @ ad - 0.5 * (n_op @ A + A @ n_op))
    out += params.gamma_prime * (ad @ A @ a - 0.5 * (aad @ A + A @ aad))
    return out


def adjoint_liouvillian_apply(params: ModelParams, A) -> np.ndarray:
    """Hilbert-Schmidt adjoint of the generator (the Heisenberg-picture generator)."""
    A = check_operator(A)
    a, ad, n_op, aad = _ladder_ops(A.shape[0])
    H = params.omega * n_op
    out = 1j * (H @ A - A @ H)
    out += params.gamma * (ad @ A @ a - 0.5 * (n_op @ A + A @ n_op))
    out += params.gamma_prime * (a @ A @ ad - 0.5 * (aad @ A + A @ aad))
    return out


# sl(2) superoperators K1 = a . a^dag, K2 = a^dag . a, K3 = {N + 1/2, .}

def K_matrix(which: int, dim: int) -> SuperOperator:
    dim = check_dim(dim)
    a, ad, n_op, _ = _ladder_ops(dim)
    eye = np.eye(dim)
    if which == 1:
        return SuperOperator(dim, sandwich(a, a))
    if which == 2:
        # a^dagger rho a loses whatever lands above level D-1
        return SuperOperator(dim, sandwich(ad, ad))
    if which == 3:
        shifted = n_op + 0.5 * eye
        return SuperOperator(dim, np.kron(eye, shifted) + np.kron(shifted.T, eye))
    raise ParameterError("which", f"K index must be 1, 2 or 3, got {which!r}")


def apply_K(which: int, A) -> np.ndarray:
    A = check_operator(A)
    a, ad, n_op, _ = _ladder_ops(A.shape[0])
    if which == 1:
        return a @ A @ ad
    if which == 2:
        return ad @ A @ a
    if which == 3:
        shifted = n_op + 0.5 * np.eye(A.shape[0])
        return shifted @ A + A @ shifted
    raise ParameterError("which", f"K index must be 1, 2 or 3, got {which!r}")


# one-sided multiplications L+ = a^dag ., L- = a ., R+ = . a, R- = . a^dag

ELEMENTARY = ("L+", "L-", "R+", "R-")


def elementary_matrix(which: str, dim: int) -> SuperOperator:
    dim = check_dim(dim)
    a, ad, _, _ = _ladder_ops(dim)
    eye = np.eye(dim)
    if which == "L+":
        return SuperOperator(dim, np.kron(eye, ad))
    if which == "L-":
        return SuperOperator(dim, np.kron(eye, a))
    if which == "R+":
        return SuperOperator(dim, np.kron(a.T, eye))
    if which == "R-":
        return SuperOperator(dim, np.kron(ad.T, eye))
    raise ParameterError("which", f"unknown elementary superoperator {which!r}; expected one of {ELEMENTARY}")


def apply_elementary(which: str, A) -> np.ndarray:
    A = check_operator(A)
    a = annihilation(A.shape[0])
    if which == "L+":
        return a.conj().T @ A
    if which == "L-":
        return a @ A
    if which == "R+":
        return A @ a
    if which == "R-":
        return A @ a.conj().T
    raise ParameterError("which", f"unknown elementary superoperator {which!r}; expected one of {ELEMENTARY}")


def liouvillian_from_elementary(params: ModelParams, dim: int) -> SuperOperator:
    """The generator rebuilt from one-sided multiplications.

    Uses ``a a^dagger = a^dagger a + 1``, so it agrees with
    :func:`liouvillian_matrix` only away from the truncation edge.
    """
    Lp, Lm, Rp, Rm = (elementary_matrix(w, dim).matrix for w in ELEMENTARY)
    eye = np.eye(dim * dim)
    M = -1j * params.omega * (Lp @ Lm - Rp @ Rm)
    M += params.gamma * Lm @ Rm + params.gamma_prime * Lp @ Rp
    M -= params.gamma_bar * (Lp @ Lm + Rp @ Rm)
    M -= params.gamma_prime * eye
    return SuperOperator(dim, M)


def interior_projector(dim: int, guard: int = 2) -> np.ndarray:
    """Operator ``P`` projecting onto levels ``0 .. dim-1-guard``."""
    dim = check_dim(dim, max_dim=None)
    if not 0 <= guard < dim:
        raise ParameterError("guard", f"guard band {guard} incompatible with dim {dim}")
    diag = np.zeros(dim)
    diag[: dim - guard] = 1.0
    return np.diag(diag).astype(complex)


def restrict(A, dim_keep: int) -> np.ndarray:
    """Upper-left ``dim_keep x dim_keep`` block of ``A``."""
    A = np.asarray(A)
    return A[:dim_keep, :dim_keep]
