"""Input checks shared by the functional API, the estimators and the CLI."""

from __future__ import annotations

import numbers

import numpy as np

MIN_DIM = 2
MAX_DIM = 64


class ParameterError(ValueError):
    """A physical or numerical parameter is outside its admissible range.

    The offending parameter name is kept in ``name`` so callers (the CLI in
    particular) can report it without parsing the message.
    """

    def __init__(self, name: str, message: str):
        super().__init__(f"{name}: {message}")
        self.name = name


class DimensionError(ValueError):
    """Operator shapes are inconsistent or the truncation is too small."""


class TruncationError(RuntimeError):
    """Population reached the top Fock levels, so the truncated result is unreliable."""


def check_positive(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ParameterError(name, f"expected a real number, got {value!r}")
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ParameterError(name, f"must be finite and > 0, got {value!r}")
    return value


def check_time(t) -> float:
    if isinstance(t, bool) or not isinstance(t, numbers.Real):
        raise ParameterError("t", f"expected a real number, got {t!r}")
    t = float(t)
    if not np.isfinite(t) or t < 0:
        raise ParameterError("t", f"must be finite and >= 0, got {t!r}")
    return t


def check_times(times) -> np.ndarray:
    """Return ``times`` as a strictly increasing 1-d float array of non-negative values."""
    arr = np.atleast_1d(np.asarray(times, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ParameterError("times", "expected a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ParameterError("times", "all times must be finite and >= 0")
    if np.any(np.diff(arr) <= 0):
        raise ParameterError("times", "times must be strictly increasing")
    return arr


def check_dim(dim, *, max_dim: int | None = MAX_DIM) -> int:
    if isinstance(dim, bool) or not isinstance(dim, numbers.Integral):
        raise DimensionError(f"dimension must be an integer, got {dim!r}")
    dim = int(dim)
    if dim < MIN_DIM:
        raise DimensionError(f"dimension must be >= {MIN_DIM}, got {dim}")
    if max_dim is not None and dim > max_dim:
        raise DimensionError(f"dimension {dim} exceeds the supported maximum {max_dim}")
    return dim


def check_nonneg_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 0:
        raise ParameterError(name, f"must be a non-negative integer, got {value!r}")
    return int(value)


def check_operator(A, dim: int | None = None, name: str = "operator") -> np.ndarray:
    """Return ``A`` as a finite complex square matrix, optionally of dimension ``dim``."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {A.shape}")
    if A.shape[0] < MIN_DIM:
        raise DimensionError(f"{name} dimension must be >= {MIN_DIM}, got {A.shape[0]}")
    if dim is not None and A.shape[0] != dim:
        raise DimensionError(f"{name} has dimension {A.shape[0]}, expected {dim}")
    A = A.astype(complex, copy=False)
    if not np.all(np.isfinite(A)):
        raise DimensionError(f"{name} has non-finite entries")
    return A


def check_same_dim(A, B) -> tuple[np.ndarray, np.ndarray]:
    A = check_operator(A, name="left operand")
    B = check_operator(B, A.shape[0], name="right operand")
    return A, B


def check_operator_stack(X, dim: int | None = None) -> np.ndarray:
    """Accept one ``(D, D)`` operator or a stack ``(n, D, D)``; always return the stack."""
    X = np.asarray(X)
    if X.ndim == 2:
        X = X[np.newaxis]
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise DimensionError(f"expected shape (n, D, D) or (D, D), got {X.shape}")
    if dim is not None and X.shape[1] != dim:
        raise DimensionError(f"operators have dimension {X.shape[1]}, expected {dim}")
    X = X.astype(complex, copy=False)
    if not np.all(np.isfinite(X)):
        raise DimensionError("operator stack has non-finite entries")
    return X
