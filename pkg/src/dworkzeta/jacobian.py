"""Jacobian-ring linear algebra: graded relation matrices, recorded echelon
transforms, and the monomial basis V of the quotient.

For a lifted polynomial f with support on a polytope Delta, the relation
module in weight degree d is spanned by the products m * g where g runs over
the degree-one generators (w*f and w*x_i df/dx_i) and m over cone monomials of
degree d-1.  Row-reducing the coefficient matrix J_d with a recorded
transform T_d (so that M_d = T_d * J_d exactly, with unit pivots) yields both
the reduction machinery and, through the non-pivot columns, the basis V.

Three modes share this machinery:

* toric: no restrictions; generators indexed 0..n with index 0 the w-scaling
  generator w*f.
* affine (for convenient polynomials): columns are restricted to monomials
  divisible by x_1...x_n; the cofactor m of the w*f rows must itself be so
  divisible, and the cofactor of the w*x_i df/dx_i rows must be divisible by
  the complementary product of variables.
* projective (homogeneous of degree D, p not dividing D): the last variable
  is eliminated through homogeneity and monomials are carried in the first
  n-1 coordinates, with the last exponent implicit (= d*D - |mu|) and the
  w-power formal; the w-scaling generator is dropped (it is a combination of
  the others by the Euler relation) and the affine divisibility restrictions
  apply with the implicit coordinate included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .cone_algebra import ConeElement, ConeMonomial, monomial_basis, term_order_key
from .errors import InvalidInput, NondegeneracyFailure
from .padic import RingContext, RingElement
from .polytope import LatticePolytope, lattice_points

MODES = ("toric", "affine", "projective")


@dataclass
class LiftedInput:
    """Teichmueller-lifted input polynomial with its degree-one generators.

    coeffs maps full exponent vectors (length n_vars) to unit coefficients in
    R.  Working monomials have n_eff coordinates: n_eff = n_vars except in
    projective mode, where the last exponent is implicit.
    """

    ring: RingContext
    mode: str
    n_vars: int
    coeffs: Dict[Tuple[int, ...], RingElement]
    degree: Optional[int] = None  # homogeneity degree D (projective only)

    @property
    def n_eff(self) -> int:
        return self.n_vars - 1 if self.mode == "projective" else self.n_vars

    @property
    def generator_indices(self) -> Tuple[int, ...]:
        """0 denotes the w-scaling generator w*f; i >= 1 denotes w*x_i df/dx_i."""
        if self.mode == "projective":
            return tuple(range(1, self.n_vars + 1))
        return tuple(range(0, self.n_vars + 1))

    def working_exponent(self, nu: Tuple[int, ...]) -> Tuple[int, ...]:
        return nu[:-1] if self.mode == "projective" else nu

    def working_support(self) -> List[Tuple[int, ...]]:
        return sorted({self.working_exponent(nu) for nu in self.coeffs})

    def var_exponent(self, i: int, m: ConeMonomial) -> int:
        """True exponent of variable i in the cone monomial m (i = 0 is w)."""
        d, mu = m
        if i == 0:
            return d
        if self.mode == "projective" and i == self.n_vars:
            return d * self.degree - sum(mu)
        return mu[i - 1]

    def generator(self, i: int) -> ConeElement:
        """The degree-one generator: w*f for i = 0, w*x_i df/dx_i for i >= 1."""
        out = ConeElement(self.ring)
        for nu, a in self.coeffs.items():
            c = a if i == 0 else self.ring.smul(nu[i - 1], a)
            if not self.ring.is_zero(c):
                out.add_term((1, self.working_exponent(nu)), c)
        return out

    def column_allowed(self, m: ConeMonomial) -> bool:
        """Is m an allowed column monomial (divisibility restriction)?"""
        if self.mode == "toric":
            return True
        return all(self.var_exponent(i, m) >= 1 for i in range(1, self.n_vars + 1))

    def cofactor_allowed(self, gen: int, m: ConeMonomial) -> bool:
        """May m multiply generator gen as a relation row?"""
        if self.mode == "toric":
            return True
        return all(self.var_exponent(i, m) >= 1
                   for i in range(1, self.n_vars + 1) if i != gen)

    def column_monomials(self, poly: LatticePolytope, d: int) -> List[ConeMonomial]:
        ms = [(d, mu) for mu in lattice_points(poly, d)]
        return sorted((m for m in ms if self.column_allowed(m)), key=term_order_key)

    def cofactor_monomials(self, poly: LatticePolytope, d: int,
                           gen: int) -> List[ConeMonomial]:
        ms = [(d, mu) for mu in lattice_points(poly, d)]
        return sorted((m for m in ms if self.cofactor_allowed(gen, m)),
                      key=term_order_key)


def lift_input(ring: RingContext, terms: Sequence[Tuple[Sequence[int], Sequence[int]]],
               mode: str = "toric") -> LiftedInput:
    """Teichmueller-lift the input coefficients and validate the mode.

    terms is a sequence of (exponent vector, F_q residue vector); residues are
    coordinates on the chosen generator of F_q over F_p.
    """
    if mode not in MODES:
        raise InvalidInput(f"unknown mode {mode!r}")
    if not terms:
        raise InvalidInput("empty polynomial")
    n = len(terms[0][0])
    if n < 1:
        raise InvalidInput("need at least one variable")
    coeffs: Dict[Tuple[int, ...], RingElement] = {}
    for exp, residue in terms:
        nu = tuple(int(e) for e in exp)
        if len(nu) != n:
            raise InvalidInput("inconsistent exponent lengths")
        if nu in coeffs:
            raise InvalidInput(f"duplicate exponent {nu}")
        a = ring.teichmuller_lift(tuple(int(c) % ring.p for c in residue))
        if ring.is_zero(a):
            raise InvalidInput(f"zero coefficient at exponent {nu}")
        coeffs[nu] = a
    degree = None
    if mode in ("affine", "projective"):
        if any(c < 0 for nu in coeffs for c in nu):
            raise InvalidInput(f"{mode} mode requires nonnegative exponents")
    if mode == "affine":
        if (0,) * n not in coeffs:
            raise InvalidInput("affine mode requires a nonzero constant term")
        for i in range(n):
            if not any(nu[i] > 0 and all(nu[j] == 0 for j in range(n) if j != i)
                       for nu in coeffs):
                raise InvalidInput(
                    f"affine mode requires a pure power of variable {i + 1}")
    if mode == "projective":
        degrees = {sum(nu) for nu in coeffs}
        if len(degrees) != 1:
            raise InvalidInput("projective mode requires a homogeneous polynomial")
        degree = degrees.pop()
        if degree <= 0 or degree % ring.p == 0:
            raise InvalidInput(
                "projective mode requires degree >= 1 not divisible by p")
        if n < 2:
            raise InvalidInput("projective mode requires at least two variables")
    return LiftedInput(ring=ring, mode=mode, n_vars=n, coeffs=coeffs, degree=degree)


@dataclass
class DegreeEchelon:
    """Relation matrix of one weight degree with its recorded row reduction.

    M = T * J exactly over R; pivots are (row of M, column) pairs with unit
    (normalized to 1) pivot entries and zeros elsewhere in pivot columns.
    """

    degree: int
    columns: List[ConeMonomial]
    col_index: Dict[ConeMonomial, int]
    row_meta: List[Tuple[int, ConeMonomial]]  # (generator index, cofactor monomial)
    J: List[List[RingElement]]
    M: List[List[RingElement]]
    T: List[List[RingElement]]
    pivots: List[Tuple[int, int]]
    nonpivot_columns: List[int] = field(default_factory=list)

    def solve(self, ring: RingContext, xi: List[RingElement]
              ) -> Tuple[List[RingElement], List[RingElement]]:
        """Split xi = eta.J + v with v supported on the non-pivot columns.

        Returns (eta over the original rows, v over the columns).
        """
        v = list(xi)
        nrows = len(self.row_meta)
        eta = [ring.zero] * nrows
        for r, j in self.pivots:
            c = v[j]
            if ring.is_zero(c):
                continue
            mrow, trow = self.M[r], self.T[r]
            for k in range(len(v)):
                if not ring.is_zero(mrow[k]):
                    v[k] = ring.sub(v[k], ring.mul(c, mrow[k]))
            for k in range(nrows):
                if not ring.is_zero(trow[k]):
                    eta[k] = ring.add(eta[k], ring.mul(c, trow[k]))
        return eta, v


@dataclass
class EchelonData:
    """Per-degree echelon data for degrees 1..top, plus the shared context."""

    lifted: LiftedInput
    poly: LatticePolytope
    top: int
    by_degree: Dict[int, DegreeEchelon]


@dataclass
class MonomialBasis:
    """The non-pivot cone monomials V (degree-graded), a basis of the quotient."""

    V: List[ConeMonomial]

    @property
    def v(self) -> int:
        return len(self.V)

    def of_degree(self, d: int) -> List[ConeMonomial]:
        return [m for m in self.V if m[0] == d]


def _row_reduce(ring: RingContext, rows: List[List[RingElement]],
                ncols: int, degree: int
                ) -> Tuple[List[List[RingElement]], List[Tuple[int, int]]]:
    """In-place reduced row echelon form with unit pivots; returns (T, pivots).

    R is local: a column whose remaining entries are nonzero but all divisible
    by p admits no unit pivot, which is exactly the degeneracy signal.
    """
    nrows = len(rows)
    T = [[ring.one if i == j else ring.zero for j in range(nrows)]
         for i in range(nrows)]
    pivots: List[Tuple[int, int]] = []
    r = 0
    # Scan columns from the largest monomial down so that the free (non-pivot)
    # columns, which become the quotient basis, are the smallest monomials.
    for j in range(ncols - 1, -1, -1):
        unit_row = None
        saw_nonzero = False
        for i in range(r, nrows):
            e = rows[i][j]
            if not ring.is_zero(e):
                saw_nonzero = True
                if ring.is_unit(e):
                    unit_row = i
                    break
        if unit_row is None:
            if saw_nonzero:
                raise NondegeneracyFailure(
                    f"relation matrix in degree {degree}: column {j} has only "
                    "p-divisible entries left, so no unit pivot exists; the "
                    "input fails the face-wise nondegeneracy condition at the "
                    "working precision")
            continue
        rows[r], rows[unit_row] = rows[unit_row], rows[r]
        T[r], T[unit_row] = T[unit_row], T[r]
        inv = ring.inv(rows[r][j])
        rows[r] = [ring.mul(inv, e) for e in rows[r]]
        T[r] = [ring.mul(inv, e) for e in T[r]]
        prow, ptrow = rows[r], T[r]
        for i in range(nrows):
            if i == r:
                continue
            c = rows[i][j]
            if ring.is_zero(c):
                continue
            rows[i] = [ring.sub(a, ring.mul(c, b)) for a, b in zip(rows[i], prow)]
            T[i] = [ring.sub(a, ring.mul(c, b)) for a, b in zip(T[i], ptrow)]
        pivots.append((r, j))
        r += 1
    return T, pivots


def build_jacobian(lifted: LiftedInput, poly: LatticePolytope
                   ) -> Tuple[EchelonData, MonomialBasis]:
    """Row-reduce the relation matrices for degrees 1..top and read off V.

    top = n_eff + 2; the quotient basis lives in degrees <= n_eff + 1 and the
    top-degree matrix must have a pivot in every column.
    """
    ring = lifted.ring
    n_eff = lifted.n_eff
    top = n_eff + 2
    gens = {i: lifted.generator(i) for i in lifted.generator_indices}
    by_degree: Dict[int, DegreeEchelon] = {}
    V: List[ConeMonomial] = []

    # Degree 0 has no relations; its basis part is whatever columns exist
    # (the single monomial 1 in toric mode, nothing in the restricted modes).
    V.extend(lifted.column_monomials(poly, 0))

    for d in range(1, top + 1):
        columns = lifted.column_monomials(poly, d)
        col_index = {m: k for k, m in enumerate(columns)}
        row_meta: List[Tuple[int, ConeMonomial]] = []
        J: List[List[RingElement]] = []
        for gi in lifted.generator_indices:
            for m in lifted.cofactor_monomials(poly, d - 1, gi):
                product = gens[gi].mul_monomial(m)
                row = [ring.zero] * len(columns)
                for mono, c in product:
                    if mono not in col_index:
                        raise NondegeneracyFailure(
                            f"relation row {m} * generator {gi} leaves the "
                            f"restricted monomial span in degree {d}")
                    row[col_index[mono]] = c
                row_meta.append((gi, m))
                J.append(row)
        M = [list(row) for row in J]
        T, pivots = _row_reduce(ring, M, len(columns), d)
        pivot_cols = {j for _, j in pivots}
        nonpivot = [j for j in range(len(columns)) if j not in pivot_cols]
        if d == top and nonpivot:
            raise NondegeneracyFailure(
                f"top-degree relation matrix (degree {d}) is not of full "
                f"column rank: {len(nonpivot)} monomial(s) remain unreduced; "
                "the input is degenerate")
        ech = DegreeEchelon(degree=d, columns=columns, col_index=col_index,
                            row_meta=row_meta, J=J, M=M, T=T, pivots=pivots,
                            nonpivot_columns=nonpivot)
        by_degree[d] = ech
        if d <= top - 1:
            V.extend(columns[j] for j in nonpivot)

    basis = MonomialBasis(V=sorted(V, key=term_order_key))
    if lifted.mode == "toric":
        if basis.v != poly.nvol:
            raise NondegeneracyFailure(
                f"quotient basis has cardinality {basis.v}, expected the "
                f"normalized volume {poly.nvol}; the input is degenerate")
        if basis.of_degree(0) != [(0, (0,) * n_eff)]:
            raise NondegeneracyFailure(
                "degree-0 part of the basis is not the single monomial 1")
    return EchelonData(lifted=lifted, poly=poly, top=top,
                       by_degree=by_degree), basis
