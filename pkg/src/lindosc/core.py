"""Model parameters and operators on the truncated Fock space.

Operators are plain complex ``numpy`` arrays of shape ``(D, D)`` acting on the
levels ``|0>, ..., |D-1>``; the truncation dimension is the array shape.
A density matrix is such an array that passes :func:`validate_density`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .validation import ParameterError, check_dim, check_operator, check_positive

OPERATOR_KINDS = ("annihilate", "create", "number", "hamiltonian", "identity")


@dataclass(frozen=True)
class ModelParams:
    """Oscillator frequency ``omega``, downward rate ``gamma`` and inverse temperature ``beta``.

    The upward rate obeys detailed balance, ``gamma_prime = gamma * xi`` with
    ``xi = exp(-beta * omega)``.
    """

    omega: float
    gamma: float
    beta: float

    def __post_init__(self):
        check_positive("omega", self.omega)
        check_positive("gamma", self.gamma)
        check_positive("beta", self.beta)
        if not 0.0 < self.xi < 1.0:
            # beta*omega so large that exp underflows to zero
            raise ParameterError("beta", f"Boltzmann factor exp(-beta*omega) underflows for beta={self.beta!r}")

    @property
    def xi(self) -> float:
        return math.exp(-self.beta * self.omega)

    @property
    def gamma_prime(self) -> float:
        return self.gamma * self.xi

    @property
    def kappa(self) -> float:
        """Net relaxation rate ``gamma - gamma_prime``."""
        return self.gamma - self.gamma_prime

    @property
    def gamma_bar(self) -> float:
        return 0.5 * (self.gamma + self.gamma_prime)

    @property
    def omega_complex(self) -> complex:
        return complex(self.omega, -self.gamma_bar)

    @property
    def xi_exact(self) -> Fraction:
        """The float ``xi`` as an exact rational (the binary value, no rounding)."""
        return Fraction(self.xi)


def make_params(omega, gamma, beta) -> ModelParams:
    """Validate the three physical constants and bundle them.

    Raises:
        ParameterError: if any input is non-positive or not finite.
    """
    return ModelParams(
        check_positive("omega", omega),
        check_positive("gamma", gamma),
        check_positive("beta", beta),
    )


def std_params() -> ModelParams:
    """omega = gamma = 1 and beta = ln 2, so that xi = 1/2 and kappa = 1/2."""
    return make_params(1.0, 1.0, math.log(2.0))


def annihilation(dim: int) -> np.ndarray:
    dim = check_dim(dim, max_dim=None)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def number(dim: int) -> np.ndarray:
    dim = check_dim(dim, max_dim=None)
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def fock_operator(kind: str, params: ModelParams | None, dim: int) -> np.ndarray:
    """Matrix of a ladder-algebra operator truncated to ``dim`` levels.

    ``kind`` is one of ``annihilate``, ``create``, ``number``, ``hamiltonian``
    or ``identity``; only ``hamiltonian`` needs ``params``.
    """
    dim = check_dim(dim, max_dim=None)
    if kind == "annihilate":
        return annihilation(dim)
    if kind == "create":
        return creation(dim)
    if kind == "number":
        return number(dim)
    if kind == "hamiltonian":
        if params is None:
            raise ParameterError("params", "the hamiltonian needs model parameters")
        return params.omega * number(dim)
    if kind == "identity":
        return np.eye(dim, dtype=complex)
    raise ParameterError("kind", f"unknown operator kind {kind!r}; expected one of {OPERATOR_KINDS}")


def boltzmann_operator(params: ModelParams, dim: int) -> np.ndarray:
    """``exp(-beta*omega*N)`` on ``dim`` levels (unnormalized)."""
    dim = check_dim(dim, max_dim=None)
    return np.diag(params.xi ** np.arange(dim, dtype=float)).astype(complex)


def gibbs_state(params: ModelParams, dim: int) -> np.ndarray:
    """Equilibrium state ``(1 - xi) xi**N`` restricted to ``dim`` levels.

    The result is deliberately not renormalized: its trace is ``1 - xi**dim``,
    so closed forms that sum the full geometric series agree with it up to the
    reported deficit (see :func:`gibbs_trace_deficit`).
    """
    return (1.0 - params.xi) * boltzmann_operator(params, dim)


def gibbs_trace_deficit(params: ModelParams, dim: int) -> float:
    return params.xi**dim


def fock_state(n: int, dim: int) -> np.ndarray:
    """Projector ``|n><n|``."""
    dim = check_dim(dim, max_dim=None)
    if not 0 <= n < dim:
        raise ParameterError("n", f"level {n} outside 0..{dim - 1}")
    rho = np.zeros((dim, dim), dtype=complex)
    rho[n, n] = 1.0
    return rho


def superposition_state(dim: int) -> np.ndarray:
    """The superposition state ``(|0> + |1>)(<0| + <1|) / 2``."""
    dim = check_dim(dim, max_dim=None)
    rho = np.zeros((dim, dim), dtype=complex)
    rho[:2, :2] = 0.5
    return rho


def random_density(dim: int, support: int, rng) -> np.ndarray:
    """Random full-rank density matrix on levels ``0 .. support-1`` (Ginibre construction)."""
    dim = check_dim(dim, max_dim=None)
    if not 1 <= support <= dim:
        raise ParameterError("support", f"must lie in 1..{dim}, got {support}")
    G = rng.standard_normal((support, support)) + 1j * rng.standard_normal((support, support))
    block = G @ G.conj().T
    rho = np.zeros((dim, dim), dtype=complex)
    rho[:support, :support] = block / np.trace(block).real
    return rho


CORPUS_NAMES = (
    "fock:0", "fock:1", "fock:2", "fock:5", "gibbs", "superposition",
    "cat:0+3", "random:0", "random:1", "random:2",
)


def corpus_state(name: str, params: ModelParams, dim: int) -> np.ndarray:
    """One member of the fixed test corpus, by name (see ``CORPUS_NAMES``).

    All members are supported on levels ``<= 5`` except ``gibbs``; the
    random members come from ``numpy.random.default_rng(index)`` with support 6.
    """
    kind, _, arg = name.partition(":")
    if kind == "fock":
        return fock_state(int(arg), dim)
    if kind == "gibbs":
        return gibbs_state(params, dim)
    if kind == "superposition":
        return superposition_state(dim)
    if kind == "cat":
        i, j = (int(s) for s in arg.split("+"))
        psi = np.zeros(dim, dtype=complex)
        psi[i] = psi[j] = 1 / math.sqrt(2)
        return np.outer(psi, psi.conj())
    if kind == "random":
        return random_density(dim, 6, np.random.default_rng(int(arg)))
    raise ParameterError("name", f"unknown corpus state {name!r}")


def corpus(params: ModelParams, dim: int) -> dict[str, np.ndarray]:
    return {name: corpus_state(name, params, dim) for name in CORPUS_NAMES}


def default_dim(params: ModelParams, tol: float = 1e-12) -> int:
    """Smallest ``D`` with ``xi**D < tol`` (40 for xi = 1/2)."""
    return max(2, int(math.floor(math.log(tol) / math.log(params.xi))) + 1)


@dataclass(frozen=True)
class DensityReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    def is_valid(self, herm_tol: float = 1e-12, trace_tol: float = 1e-12, eig_tol: float = 1e-10) -> bool:
        return (
            self.hermiticity_defect <= herm_tol
            and self.trace_defect <= trace_tol
            and self.min_eigenvalue >= -eig_tol
        )


def validate_density(rho) -> DensityReport:
    """Diagnose how far ``rho`` is from a density matrix; never raises on bad states.

    The minimum eigenvalue is taken over the Hermitian part of ``rho``.
    """
    rho = check_operator(rho, name="rho")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace_defect = float(abs(np.trace(rho) - 1.0))
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    return DensityReport(herm, trace_defect, min_eig)


def trace_norm(A) -> float:
    return float(np.sum(np.linalg.svd(np.asarray(A), compute_uv=False)))


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of ``rho - sigma``."""
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    return 0.5 * trace_norm(rho - sigma)
