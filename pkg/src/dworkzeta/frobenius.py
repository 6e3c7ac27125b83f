"""Frobenius images of basis monomials on the cone.

For each basis monomial (pi*w)^d x^mu we compute the truncation mod p^N_work
of alpha((pi*w)^d x^mu) = psi(F * (pi*w)^d x^mu), where F is the product of
splitting-series factors theta(a_nu w x^nu) over the support of f and psi
divides all exponents by p (dropping non-divisible terms) and applies the
inverse Frobenius to coefficients.  The auxiliary global factor pi^d used to
keep every coefficient in R is a formal tag carried by the caller; it cancels
at matrix assembly because both sides of the matrix carry the same grading.

Two equivalent paths are provided:

* expand_frobenius: "fewnomial" enumeration.  Write the multi-index of F as
  k + p*e with k in {0..p-1}^s.  Terms survive psi exactly when
  U*k = -(d, mu) mod p, where U has columns (1, nu).  For each solution k the
  e-part is enumerated by an odometer with |e| < E and exact pruning on the
  guaranteed p-adic valuation.  Each term contributes

      (-1)^(bw+|e|) * p^(bw+|e|) * prod_i ell_{k_i+p e_i}
          * sigma^{-1}(a^k) * a^e   on the monomial (bw+|e|, (k.nu+mu)/p + e.nu)

  with bw = (|k|+d)/p; the p-power always clears the ell denominators (their
  total exponent is at most bw + |e| for p >= 3), and the cleared coefficient
  lies in R.

* expand_frobenius_dense: multiply the truncated factors of F directly,
  tracking per-term denominator scale and a lower bound on the e-budget, then
  multiply by the target monomial and apply psi.

Both paths drop only terms that are individually 0 mod p^N_work, so their
outputs agree bit-for-bit as ConeElements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple

from .cone_algebra import ConeElement, ConeMonomial
from .errors import InternalPrecisionError, PrecisionOrLogicError
from .jacobian import LiftedInput
from .padic import RingContext, RingElement
from .polytope import LatticePolytope
from .splitting import SplittingSeries, compute_splitting, d_bound


@dataclass(frozen=True)
class SupportMatrix:
    """Columns (1, nu) of the working support, with the mod-p rank."""

    support: Tuple[Tuple[int, ...], ...]
    U: Tuple[Tuple[int, ...], ...]  # (n_eff+1) x s
    s: int
    rho: int


def make_support_matrix(lifted: LiftedInput, p: int) -> SupportMatrix:
    support = tuple(lifted.working_support())
    s = len(support)
    n1 = lifted.n_eff + 1
    U = tuple(tuple(1 if r == 0 else nu[r - 1] for nu in support)
              for r in range(n1))
    rho = _mod_p_rank([list(row) for row in U], p)
    return SupportMatrix(support=support, U=U, s=s, rho=rho)


def _mod_p_rank(rows: List[List[int]], p: int) -> int:
    rows = [[c % p for c in row] for row in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for j in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][j] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][j], -1, p)
        rows[rank] = [(c * inv) % p for c in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][j]:
                c = rows[i][j]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def solve_congruence(U: Sequence[Sequence[int]], target: Sequence[int],
                     p: int) -> List[Tuple[int, ...]]:
    """All e in {0..p-1}^s with U*e = target mod p, in lexicographic order of
    the free-coordinate assignment; empty if the system is inconsistent."""
    nrows = len(U)
    s = len(U[0])
    aug = [[U[i][j] % p for j in range(s)] + [target[i] % p] for i in range(nrows)]
    pivots: List[int] = []
    rank = 0
    for j in range(s):
        piv = next((i for i in range(rank, nrows) if aug[i][j] % p), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][j], -1, p)
        aug[rank] = [(c * inv) % p for c in aug[rank]]
        for i in range(nrows):
            if i != rank and aug[i][j]:
                c = aug[i][j]
                aug[i] = [(a - c * b) % p for a, b in zip(aug[i], aug[rank])]
        pivots.append(j)
        rank += 1
    for i in range(rank, nrows):
        if aug[i][s] % p:
            return []  # inconsistent
    free = [j for j in range(s) if j not in pivots]
    solutions: List[Tuple[int, ...]] = []
    # Enumerate free assignments lexicographically with an odometer.
    assign = [0] * len(free)
    while True:
        e = [0] * s
        for idx, j in enumerate(free):
            e[j] = assign[idx]
        for r, j in enumerate(pivots):
            val = aug[r][s]
            for idx, jf in enumerate(free):
                val -= aug[r][jf] * assign[idx]
            e[j] = val % p
        solutions.append(tuple(e))
        for idx in range(len(free) - 1, -1, -1):
            assign[idx] += 1
            if assign[idx] < p:
                break
            assign[idx] = 0
        else:
            break
    return solutions


@dataclass(frozen=True)
class TruncationBound:
    """Cutoff E on the total e-exponent: terms with |e| >= E vanish mod p^N_work."""

    p: int
    n_eff: int
    N_work: int
    E: int

    @classmethod
    def for_params(cls, p: int, n_eff: int, N_work: int) -> "TruncationBound":
        beta = Fraction(p * p - p, p * p - 3 * p + 1)
        gamma = Fraction(n_eff + 1, p * p - p)
        E = ceil(beta * (N_work + gamma))
        return cls(p=p, n_eff=n_eff, N_work=N_work, E=E)

    @property
    def series_length(self) -> int:
        """Splitting coefficients are consumed at indices k + p*e < p*E."""
        return self.p * self.E


def splitting_for(ring: RingContext, bound: TruncationBound) -> SplittingSeries:
    return compute_splitting(ring.p, ring.N, bound.series_length)


def expand_frobenius(target: ConeMonomial, lifted: LiftedInput,
                     poly: LatticePolytope, series: SplittingSeries,
                     support: SupportMatrix, bound: TruncationBound
                     ) -> ConeElement:
    """Fewnomial-enumeration expansion of alpha((pi*w)^d x^mu) mod p^N_work."""
    ring = lifted.ring
    p, N_work = ring.p, ring.N
    d, mu = target
    s = support.s
    nus = support.support
    coeffs_by_nu = {}
    for nu, a in lifted.coeffs.items():
        coeffs_by_nu[lifted.working_exponent(nu)] = a
    a_list = [coeffs_by_nu[nu] for nu in nus]

    neg_target = tuple((-t) % p for t in (d,) + mu)
    out = ConeElement(ring)
    for k in solve_congruence(support.U, neg_target, p):
        total_k = sum(k)
        bw, rem = divmod(total_k + d, p)
        if rem:
            raise PrecisionOrLogicError("congruence solution fails w-divisibility")
        base_x = []
        for i in range(lifted.n_eff):
            num = sum(k[j] * nus[j][i] for j in range(s)) + mu[i]
            q_, r_ = divmod(num, p)
            if r_:
                raise PrecisionOrLogicError("congruence solution fails x-divisibility")
            base_x.append(q_)
        # sigma^{-1}(a^k) for Teichmueller coefficients is (a^k)^(q/p)
        ak = ring.one
        for j in range(s):
            if k[j]:
                ak = ring.mul(ak, ring.pow(a_list[j], k[j]))
        prefix = ring.pow(ak, ring.q // p)

        # Per-position tail bounds on future ell-denominator exponents at e=0.
        tail = [0] * (s + 1)
        for j in range(s - 1, -1, -1):
            tail[j] = tail[j + 1] + d_bound(p, k[j])

        def emit(esum: int, delta: int, numer: int, apow: RingElement,
                 exps: List[int]) -> None:
            net = bw + esum - delta
            if net < 0:
                raise InternalPrecisionError(
                    f"negative net p-power {net} at target {target}")
            if net >= N_work:
                return
            mono = (bw + esum, tuple(exps))
            if not poly.contains(mono[1], mono[0]):
                raise PrecisionOrLogicError(
                    f"Frobenius term {mono} escapes the cone over the polytope")
            sign = -1 if (bw + esum) % 2 else 1
            scalar = sign * (p ** net) * numer
            out.add_term(mono, ring.smul(scalar, apow))

        def walk(j: int, esum: int, delta: int, numer: int,
                 apow: RingElement, exps: List[int]) -> None:
            if j == s:
                emit(esum, delta, numer, apow, exps)
                return
            nu = nus[j]
            ej = 0
            cur_apow = apow
            cur_exps = list(exps)
            while esum + ej < bound.E:
                # Sound monotone cutoff: every completion of this state has
                # guaranteed valuation >= the bound below.
                cutoff = (bw + esum + ej - delta
                          - d_bound(p, k[j] + p * ej) - tail[j + 1])
                if cutoff >= N_work:
                    break
                ell = series[k[j] + p * ej]
                walk(j + 1, esum + ej, delta + ell.denom_exp,
                     numer * ell.numer, cur_apow, cur_exps)
                ej += 1
                cur_apow = ring.mul(cur_apow, a_list[j])
                cur_exps = [c + v for c, v in zip(cur_exps, nu)]
            return

        walk(0, 0, 0, 1, prefix, base_x)
    return out


def expand_frobenius_dense(target: ConeMonomial, lifted: LiftedInput,
                           poly: LatticePolytope, series: SplittingSeries,
                           bound: TruncationBound) -> ConeElement:
    """Dense-product expansion: multiply out the factors of F, then apply psi.

    Running-product coefficients are triples (delta, u, be): the true value is
    p^(-delta) * u with u in R, and be lower-bounds the total e-budget
    sum_j floor(i_j / p) over every index decomposition merged into the term
    (terms with be >= E vanish mod p^N_work and are dropped).
    """
    ring = lifted.ring
    p, N_work = ring.p, ring.N
    d, mu = target
    E = bound.E

    def prunable(D: int, delta: int, be: int) -> bool:
        # Net p-power after psi is at least D/p - delta and only grows under
        # further factor multiplication.
        return be >= E or D - p * delta >= p * N_work

    # product[(D, m)] = (delta, u, be)
    product: Dict[Tuple[int, Tuple[int, ...]], Tuple[int, RingElement, int]] = {
        (0, (0,) * lifted.n_eff): (0, ring.one, 0)}
    support_items = sorted(
        (lifted.working_exponent(nu), a) for nu, a in lifted.coeffs.items())
    for nu, a in support_items:
        factor = []
        apow = ring.one
        for i in range(bound.series_length):
            ell = series[i]
            u = ring.smul(ell.numer, apow)
            if not ring.is_zero(u) or i == 0:
                factor.append((i, tuple(c * i for c in nu), ell.denom_exp,
                               u, i // p))
            apow = ring.mul(apow, a)
        new: Dict[Tuple[int, Tuple[int, ...]], Tuple[int, RingElement, int]] = {}
        for (D, m), (delta, u, be) in product.items():
            for i, inu, di, ui, bi in factor:
                D2 = D + i
                delta2 = delta + di
                be2 = be + bi
                if prunable(D2, delta2, be2):
                    continue
                key = (D2, tuple(x + y for x, y in zip(m, inu)))
                uv = ring.mul(u, ui)
                prev = new.get(key)
                if prev is None:
                    new[key] = (delta2, uv, be2)
                else:
                    pd, pu, pb = prev
                    if pd >= delta2:
                        merged = (pd, ring.add(pu, ring.smul(p ** (pd - delta2), uv)),
                                  min(pb, be2))
                    else:
                        merged = (delta2, ring.add(uv, ring.smul(p ** (delta2 - pd), pu)),
                                  min(pb, be2))
                    new[key] = merged
        product = new

    out = ConeElement(ring)
    for (D, m), (delta, u, be) in product.items():
        Dt = D + d
        if Dt % p:
            continue
        mt = tuple(x + y for x, y in zip(m, mu))
        if any(c % p for c in mt):
            continue
        t = Dt // p
        if t - delta >= N_work:
            continue
        if t - delta < 0:
            raise InternalPrecisionError(
                f"negative net p-power {t - delta} in dense expansion")
        mono = (t, tuple(c // p for c in mt))
        if not poly.contains(mono[1], mono[0]):
            raise PrecisionOrLogicError(
                f"dense Frobenius term {mono} escapes the cone over the polytope")
        sign = -1 if t % 2 else 1
        coeff = ring.smul(sign * p ** (t - delta), ring.frobenius_inverse(u))
        out.add_term(mono, coeff)
    return out
