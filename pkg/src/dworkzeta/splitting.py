"""Coefficients of the p-adic splitting series.

The exponential-sum machinery rewrites additive characters through the series
theta(z) = exp(pi*z - pi*z^p) = sum_i ell_i (pi*z)^i, where pi^(p-1) = -p.
Each coefficient ell_i is a rational number lying in Z_p[1/p] with a small,
explicitly bounded power of p in the denominator:

    ell_i = sum_{j=0}^{floor(i/p)} 1 / (p^j * (i - p*j)! * j!),

and  ord_p(ell_i) >= -d(p, i)  with  d(p, i) = floor(i*(2p-1) / (p^2*(p-1))).

This module computes the ell_i exactly (as Fractions) and packages them as
scaled residues p^(-e) * numer with numer taken modulo p^(N_work + e), which
is precisely the precision needed so that any later product multiplied by a
compensating p^e is correct modulo p^(N_work).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .padic import ScaledElement


def d_bound(p: int, i: int) -> int:
    """Upper bound for the denominator exponent of ell_i: ord_p(ell_i) >= -d_bound."""
    return (i * (2 * p - 1)) // (p * p * (p - 1))


def ell_fraction(p: int, i: int) -> Fraction:
    """Exact value of the i-th splitting coefficient."""
    total = Fraction(0)
    for j in range(i // p + 1):
        total += Fraction(1, p ** j * factorial(i - p * j) * factorial(j))
    return total


def _p_adic_split(x: Fraction, p: int) -> tuple[int, int, int]:
    """Write x = p^(-e) * (num/den) with e >= 0 and p dividing neither num nor den.

    Returns (e, num, den); for x with nonnegative valuation e is 0.
    """
    num, den = x.numerator, x.denominator
    e = 0
    while den % p == 0:
        den //= p
        e += 1
    while e > 0 and num % p == 0:
        num //= p
        e -= 1
    return e, num, den


@dataclass(frozen=True)
class SplittingSeries:
    """Splitting coefficients ell_0..ell_{length-1} as scaled residues mod p^(N_work+e)."""

    p: int
    N_work: int
    length: int
    coefficients: tuple[ScaledElement, ...]

    def __getitem__(self, i: int) -> ScaledElement:
        return self.coefficients[i]


_cache: dict[tuple[int, int], SplittingSeries] = {}
_cache_lock = threading.Lock()


def compute_splitting(p: int, N_work: int, length: int) -> SplittingSeries:
    """Splitting coefficients ell_0..ell_{length-1} for the prime p.

    Results are cached per (p, N_work); a longer request extends the cached
    series and the shared prefix is bit-identical across calls.
    """
    with _cache_lock:
        cached = _cache.get((p, N_work))
        if cached is not None and cached.length >= length:
            return SplittingSeries(p, N_work, length, cached.coefficients[:length])
        start = cached.length if cached is not None else 0
        coeffs = list(cached.coefficients) if cached is not None else []
        for i in range(start, length):
            e, num, den = _p_adic_split(ell_fraction(p, i), p)
            if e > d_bound(p, i):
                raise AssertionError(
                    f"splitting coefficient ell_{i} has denominator exponent {e} "
                    f"exceeding the bound {d_bound(p, i)}")
            modulus = p ** (N_work + e)
            numer = (num * pow(den, -1, modulus)) % modulus
            coeffs.append(ScaledElement(denom_exp=e, numer=numer))
        series = SplittingSeries(p, N_work, length, tuple(coeffs))
        _cache[(p, N_work)] = series
        return SplittingSeries(p, N_work, length, series.coefficients[:length])
