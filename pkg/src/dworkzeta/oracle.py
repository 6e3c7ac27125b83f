"""Brute-force point counting and naive zeta reconstruction.

Entirely independent of the cohomological pipeline: only finite-field
polynomial arithmetic (gf) and numpy table lookups are used.  F_{q^r} is
realized as F_p[t]/(h) with h the lexicographically smallest monic
irreducible of degree a*r, elements are encoded as base-p integer codes,
and multiplication goes through discrete exp/log tables built once per
field.  The embedding of F_q is fixed by mapping its generator to the
smallest root of its defining polynomial found by exhaustive search.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import gf
from .errors import BudgetExceeded, ConsistencyFailure, InvalidInput, UnderDetermined

DEFAULT_BUDGET = 10 ** 8


class ExtensionField:
    """F_{p^d} with exp/log tables; elements are base-p integer codes."""

    def __init__(self, p: int, d: int):
        self.p = p
        self.d = d
        self.Q = p ** d
        self.h = gf.smallest_irreducible(p, d)
        self._build_tables()

    def _build_tables(self) -> None:
        p, d, Q = self.p, self.d, self.Q
        g = self._find_generator()
        # exp_digits[k] = digit vector of g^k; built by doubling blocks,
        # each extension being one vectorized multiply-by-g^m linear map.
        E = np.zeros((Q - 1, d), dtype=np.int64)
        E[0, 0] = 1
        m = 1
        while m < Q - 1:
            step = min(m, Q - 1 - m)
            c = gf.powmod(g, m, self.h, p)
            M = self._mul_matrix(c)
            E[m:m + step] = (E[:step] @ M.T) % p
            m += step
        self.exp_digits = E.astype(np.int16)
        place = np.array([p ** i for i in range(d)], dtype=np.int64)
        codes = E @ place
        self.exp_codes = codes
        log = np.full(Q, -1, dtype=np.int64)
        log[codes] = np.arange(Q - 1, dtype=np.int64)
        self.log = log
        self._place = place

    def _mul_matrix(self, c: gf.Poly) -> "np.ndarray":
        """d x d matrix over F_p of multiplication by c (columns = c*t^j mod h)."""
        p, d = self.p, self.d
        M = np.zeros((d, d), dtype=np.int64)
        col = list(c)
        for j in range(d):
            for i, x in enumerate(col):
                M[i, j] = x % p
            col = list(gf.mod(gf.mul((0, 1), gf.trim(col), p), self.h, p))
        return M

    def _find_generator(self) -> gf.Poly:
        factors = gf.factorize(self.Q - 1)
        for code in range(1, self.Q):
            cand = gf.trim(self._decode(code))
            if gf.is_primitive(cand, self.h, self.p, factors):
                return cand
        raise ConsistencyFailure("no multiplicative generator found")

    def _decode(self, code: int) -> List[int]:
        out = []
        for _ in range(self.d):
            out.append(code % self.p)
            code //= self.p
        return out

    def encode(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self.exp_codes[(self.log[x] + self.log[y]) % (self.Q - 1)])

    def add(self, x: int, y: int) -> int:
        out, place = 0, 1
        for _ in range(self.d):
            out += ((x + y) % self.p) * place
            x //= self.p
            y //= self.p
            place *= self.p
        return out

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e <= 0:
                raise ZeroDivisionError("0 to a nonpositive power")
            return 0
        return int(self.exp_codes[(int(self.log[x]) * e) % (self.Q - 1)])

    def all_roots(self, poly_coeffs: List[int]) -> List[int]:
        """Roots (as codes) of a polynomial whose coefficients are codes."""
        Q = self.Q
        val = np.zeros(Q, dtype=np.int64)
        x = np.arange(Q, dtype=np.int64)
        for c in reversed(poly_coeffs):
            # val <- val * x + c, elementwise via the log tables
            nz = (val != 0) & (x != 0)
            prod = np.zeros(Q, dtype=np.int64)
            prod[nz] = self.exp_codes[(self.log[val[nz]] + self.log[x[nz]])
                                      % (Q - 1)]
            val = prod
            if c:
                d0 = val % self.p
                val = val - d0 + (d0 + c % self.p) % self.p
        return sorted(int(r) for r in np.nonzero(val == 0)[0])


_field_cache: Dict[Tuple[int, int], ExtensionField] = {}


def get_field(p: int, d: int) -> ExtensionField:
    key = (p, d)
    if key not in _field_cache:
        _field_cache[key] = ExtensionField(p, d)
    return _field_cache[key]


def embed_coefficients(field: ExtensionField, p: int, a: int,
                       hbar: Sequence[int],
                       coeff_vectors: List[Sequence[int]]) -> List[int]:
    """Map F_q elements (F_p-vectors on the F_q generator) into the field."""
    if a == 1:
        return [field.encode([vec[0] if vec else 0]) for vec in coeff_vectors]
    hb = [c % p for c in hbar]
    codes = [field.encode([c]) for c in hb]
    roots = field.all_roots(codes)
    if not roots:
        raise ConsistencyFailure(
            "the defining polynomial of F_q has no root in the extension; "
            "the extension degree is not a multiple of a")
    tau = roots[0]
    out = []
    for vec in coeff_vectors:
        acc = 0
        for c in reversed(list(vec)):
            acc = field.add(field.mul(acc, tau), field.encode([c]))
        out.append(acc)
    return out


def _toric_zero_count(field: ExtensionField, exps: List[Tuple[int, ...]],
                      coeff_codes: List[int], m: int) -> int:
    """Zeros of sum a_nu x^nu over the m-torus (F^x)^m (Laurent exponents ok)."""
    Q = field.Q
    terms = [(nu, c) for nu, c in zip(exps, coeff_codes) if c != 0]
    if not terms:
        return (Q - 1) ** m  # identically zero
    if m == 0:
        acc = 0
        for _, c in terms:
            acc = field.add(acc, c)
        return 1 if acc == 0 else 0
    p, d = field.p, field.d
    logs = [int(field.log[c]) for _, c in terms]
    e_last = np.arange(Q - 1, dtype=np.int64)
    count = 0
    outer = iproduct(range(Q - 1), repeat=m - 1) if m > 1 else [()]
    for e_head in outer:
        acc = np.zeros((Q - 1, d), dtype=np.int64)
        for (nu, _c), lg in zip(terms, logs):
            base = lg + sum(nh * eh for nh, eh in zip(nu[:-1], e_head))
            idx = (base + nu[-1] * e_last) % (Q - 1)
            acc += field.exp_digits[idx]
        count += int(np.count_nonzero(np.all(acc % p == 0, axis=1)))
    return count


def _affine_zero_count(field: ExtensionField, exps: List[Tuple[int, ...]],
                       coeff_codes: List[int], n: int) -> int:
    """Zeros over F^n by summing torus strata over subsets of zeroed coords."""
    total = 0
    for zero_mask in iproduct((False, True), repeat=n):
        live = [i for i in range(n) if not zero_mask[i]]
        sub_exps, sub_coeffs = [], []
        for nu, c in zip(exps, coeff_codes):
            if any(nu[i] != 0 for i in range(n) if zero_mask[i]):
                continue  # vanishes on this stratum
            sub_exps.append(tuple(nu[i] for i in live))
            sub_coeffs.append(c)
        total += _toric_zero_count(field, sub_exps, sub_coeffs, len(live))
    return total


def count_points(p: int, a: int, hbar: Sequence[int],
                 terms: List[Tuple[Tuple[int, ...], Sequence[int]]],
                 mode: str, r: int, budget: int = DEFAULT_BUDGET) -> int:
    """#V(F_{q^r}) by exhaustive enumeration."""
    if not terms:
        raise InvalidInput("the zero polynomial does not define a hypersurface")
    n = len(terms[0][0])
    q = p ** a
    if q ** (r * n) > budget:
        raise BudgetExceeded(
            f"enumeration over q^(r*n) = {q}^{r * n} points exceeds the "
            f"budget of {budget}")
    field = get_field(p, a * r)
    exps = [tuple(nu) for nu, _ in terms]
    codes = embed_coefficients(field, p, a, hbar, [vec for _, vec in terms])
    if mode == "toric":
        return _toric_zero_count(field, exps, codes, n)
    if mode == "affine":
        if any(e < 0 for nu in exps for e in nu):
            raise InvalidInput("affine mode requires nonnegative exponents")
        return _affine_zero_count(field, exps, codes, n)
    if mode == "projective":
        degs = {sum(nu) for nu in exps}
        if len(degs) != 1 or min(d for d in degs) < 1:
            raise InvalidInput("projective mode requires a homogeneous "
                               "polynomial of positive degree")
        cone = _affine_zero_count(field, exps, codes, n)
        # the origin is always a zero of a homogeneous polynomial
        return (cone - 1) // (field.Q - 1)
    raise InvalidInput(f"unknown mode {mode!r}")


def _series_from_counts(counts: Sequence[int], R: int) -> List[Fraction]:
    """Z(T) = exp(sum N_r T^r / r) as exact series coefficients z_0..z_R."""
    z = [Fraction(1)] + [Fraction(0)] * R
    for k in range(1, R + 1):
        acc = Fraction(0)
        for r in range(1, k + 1):
            acc += counts[r - 1] * z[k - r]
        z[k] = acc / k
    return z


def zeta_from_counts(counts: Sequence[int], num_deg: int, den_deg: int
                     ) -> Tuple[List[int], List[int]]:
    """The unique Num/Den (constant terms 1, bounded degrees) whose
    log-derivative series reproduces the counts.

    Raises UnderDetermined when the counts do not pin down a unique rational
    function, ConsistencyFailure when no rational function of the given
    degrees fits.
    """
    R = len(counts)
    unknowns = num_deg + den_deg
    if R < unknowns:
        raise UnderDetermined(
            f"{R} counts cannot determine {unknowns} coefficients")
    z = _series_from_counts(counts, R)
    # Equations: coefficient of T^k in Den*Z - Num vanishes, k = 1..R.
    rows = []
    for k in range(1, R + 1):
        row = [Fraction(0)] * unknowns
        if k <= num_deg:
            row[k - 1] = Fraction(-1)
        for j in range(1, min(k, den_deg) + 1):
            row[num_deg + j - 1] = z[k - j]
        rows.append((row, -z[k]))
    sol = _solve_unique(rows, unknowns)
    num = [1] + [int(x) for x in sol[:num_deg]]
    den = [1] + [int(x) for x in sol[num_deg:]]
    return num, den


def _solve_unique(rows: List[Tuple[List[Fraction], Fraction]],
                  unknowns: int) -> List[Fraction]:
    """Gaussian elimination over Q; unique solution or raise."""
    A = [list(r) + [b] for r, b in rows]
    nrows = len(A)
    pivots = []
    ri = 0
    for col in range(unknowns):
        piv = next((r for r in range(ri, nrows) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[ri], A[piv] = A[piv], A[ri]
        pr = A[ri]
        inv = 1 / pr[col]
        A[ri] = [x * inv for x in pr]
        for r in range(nrows):
            if r != ri and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[ri])]
        pivots.append(col)
        ri += 1
    for r in range(ri, nrows):
        if A[r][unknowns] != 0:
            raise ConsistencyFailure(
                "no rational function of the given degrees matches the counts")
    if len(pivots) < unknowns:
        raise UnderDetermined(
            "multiple rational functions of the given degrees match the counts")
    sol = [Fraction(0)] * unknowns
    for r, col in enumerate(pivots):
        sol[col] = A[r][unknowns]
    for x in sol:
        if x.denominator != 1:
            raise ConsistencyFailure(
                "the fitted rational function has non-integer coefficients")
    return sol
