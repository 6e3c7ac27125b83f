"""Reduction of cone elements to coordinates on the quotient basis V.

The relations used are the vanishing, in the quotient, of the operators
D_i = x_i d/dx_i + (pi*w) f_i (with x_0 = w and f_0 = f): for any cofactor
monomial m the product m * (pi*w) f_i is congruent to -x_i d(m)/dx_i, which
has weight degree one smaller.  Divisions never occur: the recorded echelon
transforms supply the row combination eta with xi = eta.J + v, and the
derivative operator only multiplies coefficients by integer exponents.

High degrees (>= top) are cleared by factoring the current leading slice as
m * (degree-top monomials) and rewriting through the full-column-rank
top-degree matrix; then a single sweep from degree top-1 down to 1 splits each
slice into its residual on V plus relation rows pushed one degree lower.
"""

from __future__ import annotations

from typing import Callable, List, Optional

from .cone_algebra import ConeElement, ConeMonomial, term_order_key
from .errors import DecompositionError, NonTermination, PrecisionOrLogicError
from .jacobian import EchelonData, MonomialBasis
from .padic import RingElement


def _default_divisor_policy(candidates: List[ConeMonomial],
                            lm: ConeMonomial, ech: EchelonData
                            ) -> Optional[ConeMonomial]:
    """First monomial m0 of top degree with lm - m0 still in the cone."""
    d, mu = lm
    k = d - ech.top
    for m0 in candidates:
        diff = tuple(a - b for a, b in zip(mu, m0[1]))
        if ech.poly.contains(diff, k):
            return m0
    return None


DivisorPolicy = Callable[[List[ConeMonomial], ConeMonomial, EchelonData],
                         Optional[ConeMonomial]]


def reduce(G: ConeElement, ech: EchelonData, basis: MonomialBasis,
           divisor_policy: DivisorPolicy = _default_divisor_policy
           ) -> List[RingElement]:
    """Coordinates of the class of G on the basis V."""
    ring = ech.lifted.ring
    lifted = ech.lifted
    top = ech.top
    top_ech = ech.by_degree[top]
    work = G.copy()
    basis_index = {m: i for i, m in enumerate(basis.V)}
    out = [ring.zero] * basis.v

    # High-degree loop: strictly decreasing leading monomial.
    guard = 0
    # Each iteration strictly lowers the leading monomial, so the iteration
    # count is at most the number of cone monomials up to the starting degree.
    d0 = max((m[0] for m in work.terms), default=0)
    max_iterations = ech.poly.nvol * (d0 + 2) ** (lifted.n_eff + 1) + d0 + 16
    while not work.is_zero():
        lm = work.leading_monomial()
        if lm[0] < top:
            break
        guard += 1
        if guard > max_iterations:
            raise NonTermination(
                "leading degree failed to drop within the iteration budget")
        m0 = divisor_policy(top_ech.columns, lm, ech)
        if m0 is None:
            raise DecompositionError(
                f"no top-degree divisor monomial for {lm}: the cone "
                "decomposition has no factor available")
        k = lm[0] - top
        m_mu = tuple(a - b for a, b in zip(lm[1], m0[1]))
        # Gather the slice of work lying in m * (top-degree columns).
        xi = [ring.zero] * len(top_ech.columns)
        for j, (_dc, muc) in enumerate(top_ech.columns):
            t = (lm[0], tuple(a + b for a, b in zip(m_mu, muc)))
            c = work.terms.get(t)
            if c is not None:
                xi[j] = c
                work.add_term(t, ring.neg(c))
        eta, v = top_ech.solve(ring, xi)
        if any(not ring.is_zero(c) for c in v):
            raise PrecisionOrLogicError(
                "top-degree solve left a nonzero residual despite full rank")
        # Replace by -sum_i x_i d(m * eta_i)/dx_i, one degree lower.
        for r, (gi, mr) in enumerate(top_ech.row_meta):
            er = eta[r]
            if ring.is_zero(er):
                continue
            mono = (k + mr[0], tuple(a + b for a, b in zip(m_mu, mr[1])))
            mult = lifted.var_exponent(gi, mono)
            if mult:
                work.add_term(mono, ring.smul(-mult, er))
        if not work.is_zero():
            new_lm = work.leading_monomial()
            if term_order_key(new_lm) >= term_order_key(lm):
                raise NonTermination(
                    f"leading monomial failed to decrease: {lm} -> {new_lm}")

    # Low-degree sweep.
    for d in range(top - 1, 0, -1):
        de = ech.by_degree[d]
        xi = [ring.zero] * len(de.columns)
        slice_monos = [m for m in work.terms if m[0] == d]
        for m in slice_monos:
            j = de.col_index.get(m)
            if j is None:
                raise PrecisionOrLogicError(
                    f"monomial {m} violates the mode restriction during reduction")
            xi[j] = work.terms[m]
            work.add_term(m, ring.neg(work.terms[m]))
        if all(ring.is_zero(c) for c in xi):
            continue
        eta, v = de.solve(ring, xi)
        for j, c in enumerate(v):
            if not ring.is_zero(c):
                mono = de.columns[j]
                idx = basis_index.get(mono)
                if idx is None:
                    raise PrecisionOrLogicError(
                        f"residual on non-basis monomial {mono} in degree {d}")
                out[idx] = ring.add(out[idx], c)
        for r, (gi, mr) in enumerate(de.row_meta):
            er = eta[r]
            if ring.is_zero(er):
                continue
            mult = lifted.var_exponent(gi, mr)
            if mult:
                work.add_term(mr, ring.smul(-mult, er))

    # Degree 0: only the unit monomial can remain (toric mode).
    for m, c in list(work.terms.items()):
        if m[0] != 0:
            raise PrecisionOrLogicError(f"unreduced monomial {m} after the sweep")
        idx = basis_index.get(m)
        if idx is None:
            raise PrecisionOrLogicError(
                f"degree-0 residual {m} lies outside the basis")
        out[idx] = ring.add(out[idx], c)
    return out
