"""End-to-end orchestration: input -> ZetaFunction.

Order of operations: validate -> (optional confinement, toric only) -> hull
-> structural pass at minimal precision to learn v -> choose N -> working
ring at N_work = N + a + 1 -> quotient basis -> Frobenius expansion and
reduction per basis monomial -> matrix assembly and charpoly -> centered
lift with Weil filter -> mode assembly.  On InsufficientPrecision the whole
computation reruns at N + 2, at most twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

from . import gf, oracle
from .errors import (
    ConsistencyFailure,
    InsufficientPrecision,
    InvalidInput,
    NondegeneracyFailure,
    UnsupportedCharacteristic,
)
from .frobenius import (
    TruncationBound,
    expand_frobenius,
    expand_frobenius_dense,
    make_support_matrix,
    splitting_for,
)
from .jacobian import MODES, build_jacobian, lift_input
from .padic import FieldSpec, RingContext, make_ring
from .polytope import confine as confine_support
from .polytope import faces, hull_and_triangulate
from .reduction import reduce as cone_reduce
from .zeta import (
    ZetaFunction,
    assemble_and_charpoly,
    assemble_zeta,
    lift_charpoly,
    precision_bound,
)

Term = Tuple[Tuple[int, ...], Tuple[int, ...]]


@dataclass
class Problem:
    """A zeta-function computation request."""

    p: int
    a: int
    hbar: Tuple[int, ...]
    n: int
    mode: str
    terms: List[Term]
    precision: Optional[int] = None
    crude: bool = False
    confine: bool = False
    expansion: str = "fewnomial"


@dataclass
class Result:
    zeta: ZetaFunction
    lifted_charpoly: List[int] = field(default_factory=list)
    matrix: Optional[List[List[List[int]]]] = None  # serialized ring elements
    confined_terms: Optional[List[Term]] = None


def _lift_weight(mode: str, n: int) -> int:
    """Weight w such that the lifted charpoly obeys |c_i| <= C(v,i) q^(iw/2).

    The toric charpoly is taken after the unit-block split and the division
    by q (inverse roots of weight <= n); the affine determinant has inverse
    roots q * (weight <= n-1); the projective determinant is P(qT) with P of
    weight n - 2.
    """
    if mode == "toric":
        return n
    if mode == "affine":
        return n + 1
    return n  # projective: n ambient variables


def validate_problem(prob: Problem) -> None:
    if prob.p == 2:
        raise UnsupportedCharacteristic("p = 2 is not supported")
    if prob.mode not in MODES:
        raise InvalidInput(f"unknown mode {prob.mode!r}")
    if prob.expansion not in ("fewnomial", "dense"):
        raise InvalidInput(f"unknown expansion strategy {prob.expansion!r}")
    if not prob.terms:
        raise InvalidInput("the zero polynomial does not define a hypersurface")
    if any(len(nu) != prob.n for nu, _ in prob.terms):
        raise InvalidInput("every exponent vector must have length n")
    if prob.confine and prob.mode != "toric":
        raise InvalidInput(
            "confinement is a torus change of coordinates; only toric mode")


def apply_confinement(prob: Problem) -> Problem:
    """Unimodular change of torus coordinates; the zeta function is invariant."""
    exps = [nu for nu, _ in prob.terms]
    U, t, _s2, _flag = confine_support(exps)
    new_terms = []
    for nu, c in prob.terms:
        img = tuple(sum(U[i][j] * nu[j] for j in range(prob.n)) + t[i]
                    for i in range(prob.n))
        new_terms.append((img, c))
    return replace(prob, terms=new_terms, confine=False)


def _make_ring(prob: Problem, n_work: int) -> RingContext:
    return make_ring(FieldSpec(p=prob.p, a=prob.a, hbar=prob.hbar,
                               N_work=n_work))


def structural_rank(prob: Problem) -> int:
    """v = rank of the quotient, from a minimal-precision structural pass."""
    ring = _make_ring(prob, 1)
    lifted = lift_input(ring, prob.terms, prob.mode)
    poly, _ = hull_and_triangulate(lifted.working_support())
    _ech, basis = build_jacobian(lifted, poly)
    return basis.v


def _run_at(prob: Problem, N: int, emit_matrix: bool) -> Result:
    p, a, q = prob.p, prob.a, prob.p ** prob.a
    n_work = N + a + 1
    ring = _make_ring(prob, n_work)
    lifted = lift_input(ring, prob.terms, prob.mode)
    poly, _ = hull_and_triangulate(lifted.working_support())
    ech, basis = build_jacobian(lifted, poly)
    bound = TruncationBound.for_params(p, lifted.n_eff, n_work)
    series = splitting_for(ring, bound)
    support = make_support_matrix(lifted, p)
    columns = []
    for m in basis.V:
        if prob.expansion == "dense":
            alpha = expand_frobenius_dense(m, lifted, poly, series, bound)
        else:
            alpha = expand_frobenius(m, lifted, poly, series, support, bound)
        columns.append(cone_reduce(alpha, ech, basis))
    A, charpoly = assemble_and_charpoly(ring, columns, prob.mode, a)
    lifted_cp = lift_charpoly(ring, charpoly, q, _lift_weight(prob.mode, prob.n))
    zf = assemble_zeta(lifted_cp, prob.mode, prob.n, q, basis.v, p, a, N,
                       unit_block_split=charpoly.unit_block_split)
    matrix = None
    if emit_matrix:
        matrix = [[ring.serialize(e) for e in row] for row in A]
    return Result(zeta=zf, lifted_charpoly=lifted_cp, matrix=matrix)


def compute_zeta(prob: Problem, emit_matrix: bool = False,
                 max_retries: int = 2) -> Result:
    validate_problem(prob)
    confined_terms = None
    if prob.confine:
        prob = apply_confinement(prob)
        confined_terms = prob.terms
    if prob.precision is not None:
        if prob.precision < 1:
            raise InvalidInput("precision must be >= 1")
        N = prob.precision
    else:
        v = structural_rank(prob)
        N = precision_bound(v, prob.p ** prob.a,
                            _lift_weight(prob.mode, prob.n), prob.p,
                            crude=prob.crude)
    last: Optional[InsufficientPrecision] = None
    for attempt in range(max_retries + 1):
        try:
            result = _run_at(prob, N, emit_matrix)
            result.confined_terms = confined_terms
            return result
        except InsufficientPrecision as exc:
            last = exc
            N += 2
    assert last is not None
    raise last


def verify_against_oracle(prob: Problem, zf: ZetaFunction, r_max: int) -> List[int]:
    """Cross-check the expanded counts against brute-force enumeration."""
    # the oracle must see the same (possibly confined) polynomial
    terms = prob.terms
    if prob.confine:
        terms = apply_confinement(prob).terms
    counts = [oracle.count_points(prob.p, prob.a, prob.hbar, terms, prob.mode, r)
              for r in range(1, r_max + 1)]
    expanded = zf.counts(r_max)
    if counts != expanded:
        raise ConsistencyFailure(
            f"computed counts {expanded} disagree with enumerated counts "
            f"{counts}")
    return counts


def nondegeneracy_witness_search(prob: Problem, k_max: int,
                                 budget: int = oracle.DEFAULT_BUDGET
                                 ) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Heuristic search for a degeneracy witness.

    For every face of the Newton polytope of the working support, looks for a
    torus point over F_{q^k} (k <= k_max, within budget) where the face
    restriction and all its logarithmic derivatives vanish.  Returns
    (k, point codes) for the first witness found, None otherwise.
    """
    from itertools import product as iproduct

    ring = _make_ring(prob, 1)
    lifted = lift_input(ring, prob.terms, prob.mode)
    work_terms = {}
    for nu, c in prob.terms:
        work_terms[lifted.working_exponent(nu)] = c
    exps = sorted(work_terms)
    poly, _ = hull_and_triangulate(exps)
    m = lifted.n_eff
    q = prob.p ** prob.a
    for k in range(1, k_max + 1):
        if q ** (k * m) > budget:
            break
        F = oracle.get_field(prob.p, prob.a * k)
        codes = oracle.embed_coefficients(
            F, prob.p, prob.a, prob.hbar, [work_terms[nu] for nu in exps])
        for face in faces(poly, exps):
            fexps = [nu for nu in face.points]
            fcodes = [codes[exps.index(nu)] for nu in fexps]
            witness = _face_degeneracy_point(F, fexps, fcodes, m)
            if witness is not None:
                return k, witness
    return None


def _face_degeneracy_point(F, fexps, fcodes, m):
    from itertools import product as iproduct

    Qm1 = F.Q - 1
    for es in iproduct(range(Qm1), repeat=m):
        vals = []
        for deriv in range(m + 1):
            acc = 0
            for nu, c in zip(fexps, fcodes):
                scale = 1 if deriv == 0 else nu[deriv - 1] % F.p
                if scale == 0:
                    continue
                idx = sum(ni * ei for ni, ei in zip(nu, es)) % Qm1
                mono = int(F.exp_codes[idx])
                term = F.mul(c, mono)
                if scale != 1:
                    term = F.mul(term, F.encode([scale]))
                acc = F.add(acc, term)
            vals.append(acc)
        if all(v == 0 for v in vals):
            return tuple(int(F.exp_codes[e]) for e in es)
    return None
