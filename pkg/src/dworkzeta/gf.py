"""Polynomial arithmetic over the prime field F_p.

Polynomials are tuples of coefficients in ascending degree order with no
trailing zeros (the zero polynomial is the empty tuple).  This module supplies
the small amount of characteristic-p plumbing needed elsewhere: irreducibility
and primitivity tests, deterministic choices of defining polynomials, and
Conway polynomials computed from their defining property.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Tuple

from .errors import InvalidFieldSpec

Poly = Tuple[int, ...]


def trim(coeffs) -> Poly:
    """Drop trailing zeros to canonical form."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return trim((((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p)
                for i in range(n))


def mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def mod(f: Poly, g: Poly, p: int) -> Poly:
    """Remainder of f modulo g (g nonzero)."""
    if not g:
        raise ZeroDivisionError("polynomial modulus is zero")
    f = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(f) - 1 >= dg and any(f):
        if f[-1] == 0:
            f.pop()
            continue
        shift = len(f) - 1 - dg
        factor = (f[-1] * inv_lead) % p
        for j, b in enumerate(g):
            f[shift + j] = (f[shift + j] - factor * b) % p
        while f and f[-1] == 0:
            f.pop()
    return trim(f)


def gcd(f: Poly, g: Poly, p: int) -> Poly:
    while g:
        f, g = g, mod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = tuple((c * inv) % p for c in f)
    return f


def powmod(f: Poly, e: int, g: Poly, p: int) -> Poly:
    """f^e modulo g."""
    result: Poly = (1,)
    f = mod(f, g, p)
    while e > 0:
        if e & 1:
            result = mod(mul(result, f, p), g, p)
        f = mod(mul(f, f, p), g, p)
        e >>= 1
    return result


def is_irreducible(f: Poly, p: int) -> bool:
    """Test irreducibility of a monic polynomial over F_p."""
    m = len(f) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    x: Poly = (0, 1)
    # x^(p^m) == x mod f, and gcd(x^(p^(m/l)) - x, f) == 1 for primes l | m.
    xq = x
    for _ in range(m):
        xq = powmod(xq, p, f, p)
    if xq != mod(x, f, p):
        return False
    for ell in _prime_divisors(m):
        xk = x
        for _ in range(m // ell):
            xk = powmod(xk, p, f, p)
        if gcd(add(xk, tuple((-c) % p for c in x), p), f, p) != (1,):
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk scale)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def element_order_divides(f: Poly, e: int, g: Poly, p: int) -> bool:
    return powmod(f, e, g, p) == (1,)


def is_primitive(f: Poly, g: Poly, p: int, q_minus_1_factors: dict[int, int]) -> bool:
    """Is f a generator of (F_p[x]/g)^x ?  g irreducible of degree m, |group| = p^m - 1."""
    m = len(g) - 1
    order = p ** m - 1
    if not f or powmod(f, order, g, p) != (1,):
        return False
    for ell in q_minus_1_factors:
        if element_order_divides(f, order // ell, g, p):
            return False
    return True


def _monic_polys(p: int, m: int) -> Iterator[Poly]:
    """All monic degree-m polynomials, low coefficients enumerated lexicographically."""
    total = p ** m
    for code in range(total):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        yield tuple(coeffs) + (1,)


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, m: int) -> Poly:
    """The lexicographically smallest (on low-to-high coefficients) monic
    irreducible polynomial of degree m over F_p; deterministic."""
    for f in _monic_polys(p, m):
        if is_irreducible(f, p):
            return f
    raise InvalidFieldSpec(f"no irreducible polynomial of degree {m} over F_{p}")


def _conway_candidates(p: int, m: int) -> Iterator[Poly]:
    """Monic degree-m polynomials in the Conway word order.

    A candidate x^m + c_{m-1}x^{m-1} + ... + c_0 is identified with the word
    (a_{m-1}, ..., a_0) where a_i = (-1)^(m-i) c_i mod p; candidates are
    enumerated in ascending lexicographic word order.
    """
    words = [()]  # build words most-significant first
    for word_code in range(p ** m):
        digits = []
        c = word_code
        for _ in range(m):
            digits.append(c % p)
            c //= p
        # digits[0] is least significant = a_0; word order is lex on
        # (a_{m-1}, ..., a_0), i.e. a_{m-1} most significant.
        a = digits[::-1]  # (a_{m-1}, ..., a_0)
        coeffs = [0] * m
        for i in range(m):
            ai = a[m - 1 - i]  # a_i
            sign = -1 if ((m - i) % 2) else 1
            coeffs[i] = (sign * ai) % p
        yield tuple(coeffs) + (1,)
    del words


@lru_cache(maxsize=None)
def conway_polynomial(p: int, m: int) -> Poly:
    """Conway polynomial C_{p,m}, computed from its defining property:

    the word-order-minimal monic primitive polynomial of degree m over F_p
    compatible with all proper subfields, i.e. C_{p,k}(x^((p^m-1)/(p^k-1)))
    vanishes modulo the candidate for every proper divisor k of m.
    """
    order_factors = factorize(p ** m - 1)
    subs = [(k, conway_polynomial(p, k)) for k in range(1, m) if m % k == 0]
    x: Poly = (0, 1)
    for f in _conway_candidates(p, m):
        if not is_irreducible(f, p):
            continue
        if not is_primitive(x, f, p, order_factors):
            continue
        ok = True
        for k, ck in subs:
            e = (p ** m - 1) // (p ** k - 1)
            xe = powmod(x, e, f, p)
            val: Poly = ()
            for c in reversed(ck):
                val = add(mod(mul(val, xe, p), f, p), (c,) if c else (), p)
            if val != ():
                ok = False
                break
        if ok:
            return f
    raise InvalidFieldSpec(f"no Conway polynomial found for p={p}, m={m}")
