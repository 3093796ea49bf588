"""Exact rational evaluation of the spectral coefficients and the summation identities.

All values are :class:`fractions.Fraction`; ``xi`` is passed as an exact
rational (a float is converted to its exact binary value).  Nothing here
rounds, so an identity either holds with zero error or it does not.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .validation import ParameterError, check_nonneg_int

factorial = lru_cache(maxsize=None)(math.factorial)


def as_exact_xi(xi) -> Fraction:
    """Convert ``xi`` (Fraction, int ratio string, or float) to an exact rational in (0, 1)."""
    if isinstance(xi, Fraction):
        value = xi
    elif isinstance(xi, str):
        value = Fraction(xi)
    elif isinstance(xi, numbers.Rational):
        value = Fraction(xi.numerator, xi.denominator)
    elif isinstance(xi, numbers.Real):
        value = Fraction(float(xi))
    else:
        raise ParameterError("xi", f"expected a rational number, got {xi!r}")
    if not 0 < value < 1:
        raise ParameterError("xi", f"must lie strictly between 0 and 1, got {value}")
    return value


@dataclass(frozen=True)
class SpectralCoefficients:
    """Expansion coefficients of the mode with phase index ``k`` and co-index ``l``.

    The right eigenvector is ``sqrt(C) * sum_m A[m] (a^dag)^(k+m) xi^N a^m`` and
    the left functional ``sqrt(C) * sum_n B[n] (a^dag)^n a^(k+n)``.
    """

    k: int
    l: int
    A: tuple[Fraction, ...]
    B: tuple[Fraction, ...]
    C: Fraction


def spectral_coefficients(k: int, l: int, xi) -> SpectralCoefficients:
    k = check_nonneg_int("k", k)
    l = check_nonneg_int("l", l)
    xi = as_exact_xi(xi)
    return _spectral_coefficients(k, l, xi)


@lru_cache(maxsize=4096)
def _spectral_coefficients(k: int, l: int, xi: Fraction) -> SpectralCoefficients:
    one_minus = 1 - xi
    ratio = one_minus / xi
    A = tuple(
        Fraction((-1) ** m, factorial(k + m) * factorial(l - m) * factorial(m)) * one_minus**m
        for m in range(l + 1)
    )
    B = tuple(
        Fraction((-1) ** n, factorial(k + n) * factorial(l - n) * factorial(n)) * ratio**n
        for n in range(l + 1)
    )
    C = factorial(k + l) * factorial(l) * one_minus ** (k + 1) * xi**l
    return SpectralCoefficients(k, l, A, B, C)


def left_band_sums(k: int, l: int, xi, length: int) -> tuple[Fraction, ...]:
    """``S(r) = sum_{n <= min(l, r)} B[n] / (r - n)!`` for ``r = 0 .. length-1``.

    The left functional of mode ``(k, l)`` has the single nonzero band
    ``W[r, r+k] = sqrt(C * (r+k)! * r!) * S(r)`` and the right eigenvector
    ``R[r+k, r] = xi**r * W[r, r+k]``.  The alternating sum cancels heavily
    for large ``l``, hence the exact evaluation: with ``xi = v/Q`` and
    ``(1-xi)/xi = u/v`` it reduces to the integer sum
    ``sum_n (-1)^n binom(k+l, l-n) binom(r, n) u^n v^(l-n)``.
    """
    k = check_nonneg_int("k", k)
    l = check_nonneg_int("l", l)
    length = check_nonneg_int("length", length)
    return _left_band_sums(k, l, as_exact_xi(xi), length)


@lru_cache(maxsize=65536)
def _left_band_sums(k: int, l: int, xi: Fraction, length: int) -> tuple[Fraction, ...]:
    v = xi.numerator
    denom_base = factorial(k + l) * v**l
    return tuple(
        Fraction(total, denom_base * factorial(r)) for r, total in enumerate(left_band_numerators(k, l, xi, length))
    )


@lru_cache(maxsize=65536)
def left_band_numerators(k: int, l: int, xi: Fraction, length: int) -> tuple[int, ...]:
    """Integer numerators ``T(r)`` with ``S(r) = T(r) / ((k+l)! v^l r!)``, ``xi = v/Q``."""
    v, Q = xi.numerator, xi.denominator
    u = Q - v
    outer = [math.comb(k + l, l - n) * u**n * v ** (l - n) for n in range(l + 1)]
    out = []
    for r in range(length):
        total = 0
        for n in range(min(l, r) + 1):
            term = outer[n] * math.comb(r, n)
            total += -term if n & 1 else term
        out.append(total)
    return tuple(out)


def identity_I(p: int, q: int, r: int) -> Fraction:
    """Direct sum ``sum_{s=0}^q (-1)^s (p+q-s-r)! / ((p-s)! (q-s)! s!)``.

    Expected to equal ``1`` if ``r == 0`` and ``0`` otherwise; this routine is
    the check, so it evaluates the sum term by term.
    """
    _check_order(p, q, r)
    total = Fraction(0)
    for s in range(q + 1):
        term = Fraction(factorial(p + q - s - r), factorial(p - s) * factorial(q - s) * factorial(s))
        total += -term if s & 1 else term
    return total


def recurrence_check(p: int, q: int, r: int) -> bool:
    """Whether ``I(p,q,r-1) == (p+q-r+1) I(p,q,r) + I(p-1,q-1,r-1)`` holds exactly."""
    _check_order(p, q, r)
    if r < 1:
        raise ParameterError("r", "the recurrence needs r >= 1")
    return identity_I(p, q, r - 1) == (p + q - r + 1) * identity_I(p, q, r) + identity_I(p - 1, q - 1, r - 1)


def _check_order(p, q, r):
    for name, val in (("p", p), ("q", q), ("r", r)):
        check_nonneg_int(name, val)
    if not p >= q >= r:
        raise ParameterError("p,q,r", f"need p >= q >= r >= 0, got ({p}, {q}, {r})")


def alt_sum(p: int, r: int) -> Fraction:
    """``sum_{q=r}^p (-1)^q p! / ((p-q)! (q-r)!)``; should be ``(-1)^r r!`` when ``p == r``, else 0."""
    p = check_nonneg_int("p", p)
    r = check_nonneg_int("r", r)
    if p < r:
        raise ParameterError("p,r", f"need p >= r, got ({p}, {r})")
    total = Fraction(0)
    for q in range(r, p + 1):
        term = Fraction(factorial(p), factorial(p - q) * factorial(q - r))
        total += -term if q & 1 else term
    return total


def claim1_sum(k: int, l: int, n: int, xi) -> Fraction:
    """The double sum behind biorthonormality; should equal ``delta(l, n) (-1)^l / l!``."""
    k = check_nonneg_int("k", k)
    l = check_nonneg_int("l", l)
    n = check_nonneg_int("n", n)
    xi = as_exact_xi(xi)
    one_minus = 1 - xi
    total = Fraction(0)
    for m in range(l + 1):
        for alpha in range(min(m, n) + 1):
            term = (
                Fraction(
                    factorial(k + m + n - alpha),
                    factorial(k + m) * factorial(l - m) * factorial(m - alpha) * factorial(n - alpha) * factorial(alpha),
                )
                * one_minus**alpha
                * xi ** (l - alpha)
            )
            total += -term if m & 1 else term
    return total


def trace_moment(m: int, n: int, xi) -> Fraction:
    """Closed form of ``tr(a^m (a^dag)^n xi^N)``: ``delta(m, n) m! / (1 - xi)^(m+1)``."""
    m = check_nonneg_int("m", m)
    n = check_nonneg_int("n", n)
    xi = as_exact_xi(xi)
    if m != n:
        return Fraction(0)
    return factorial(m) / (1 - xi) ** (m + 1)


@dataclass(frozen=True)
class FockSum:
    partial: Fraction
    tail_bound: Fraction
    levels: int

    def brackets(self, value: Fraction) -> bool:
        """Whether ``value`` lies within ``[partial, partial + tail_bound]``."""
        return self.partial <= value <= self.partial + self.tail_bound


def trace_moment_fock_sum(m: int, n: int, xi, levels: int | None = None, tail_tol=Fraction(1, 10**30)) -> FockSum:
    """``tr(a^m (a^dag)^n xi^N)`` summed level by level over ``h < levels``.

    ``<h| a^m (a^dag)^n |h>`` vanishes unless ``m == n``, in which case it is
    ``(h+m)!/h!``.  The terms eventually decay with ratio at most
    ``rho = xi (H+m+1)/(H+1)``, so the tail beyond ``H`` is bounded by
    ``term(H) / (1 - rho)``.  When ``levels`` is omitted it grows until that
    bound drops below ``tail_tol``.
    """
    m = check_nonneg_int("m", m)
    n = check_nonneg_int("n", n)
    xi = as_exact_xi(xi)

    def term(h):
        if m != n:
            return Fraction(0)
        return Fraction(factorial(h + m), factorial(h)) * xi**h

    def bound(H):
        ratio = xi * Fraction(H + m + 1, H + 1)
        if ratio >= 1:
            return None
        return term(H) / (1 - ratio)

    partial = Fraction(0)
    h = 0
    while True:
        if levels is not None and h >= levels:
            break
        if levels is None:
            b = bound(h)
            if b is not None and b <= tail_tol:
                break
        partial += term(h)
        h += 1
    b = bound(h)
    if b is None:
        raise ParameterError("levels", f"{h} levels are too few for a geometric tail bound")
    return FockSum(partial, b, h)


def completeness_alphas(Q: int, xi) -> list[Fraction]:
    """``alpha_0 .. alpha_Q`` from ``alpha_q = (-1)^q/q! - sum_{p=1}^q tau^p/p! alpha_{q-p}``, ``tau = xi - 1``.

    With these weights ``sum_q alpha_q (a^dag)^q xi^N a^q`` rebuilds ``|0><0|``.
    """
    Q = check_nonneg_int("Q", Q)
    tau = as_exact_xi(xi) - 1
    alphas = [Fraction(1)]
    for q in range(1, Q + 1):
        value = Fraction((-1) ** q, factorial(q))
        for p in range(1, q + 1):
            value -= tau**p / factorial(p) * alphas[q - p]
        alphas.append(value)
    return alphas


def completeness_alpha(q: int, xi) -> Fraction:
    return completeness_alphas(q, xi)[-1]
