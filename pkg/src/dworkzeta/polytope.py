"""Newton-polytope combinatorics in exact integer arithmetic.

Provides convex hulls with facet inequalities, a deterministic triangulation
obtained by projecting the lower hull of the points lifted to (v, |v|^2),
lattice-point enumeration of dilations via fundamental-parallelepiped
residues, Hermite normal form with recorded unimodular transform, face
enumeration, and the orthotope-confinement transform.

No floating point is used anywhere; all predicates are integer determinants.
Cospherical (degenerate) lifted configurations are resolved by a deterministic
rule equivalent to a lexicographic symbolic perturbation: each non-simplicial
cell is split by coning from its lexicographically smallest point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, List, Sequence, Tuple

from .errors import NotFullDimensional

Point = Tuple[int, ...]
Facet = Tuple[Tuple[int, ...], int]  # (a, b) meaning <a, x> <= b

MAX_DIM = 6


# ---------------------------------------------------------------------------
# exact linear algebra helpers
# ---------------------------------------------------------------------------

def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def affine_rank(points: Sequence[Point]) -> int:
    """Dimension of the affine span of a point set."""
    if len(points) <= 1:
        return 0
    base = points[0]
    vecs = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    return _rank(vecs)


def _rank(vecs: List[List[int]]) -> int:
    m = [row[:] for row in vecs if any(row)]
    if not m:
        return 0
    cols = len(m[0])
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f1, f2 = m[rank][c], m[r][c]
                m[r] = [f1 * m[r][j] - f2 * m[rank][j] for j in range(cols)]
        rank += 1
        if rank == len(m):
            break
    return rank


def _primitive(vec: Sequence[int]) -> Tuple[int, ...]:
    g = 0
    for v in vec:
        g = gcd(g, abs(v))
    if g <= 1:
        return tuple(vec)
    return tuple(v // g for v in vec)


def _normal_through(points: Sequence[Point]) -> Tuple[int, ...] | None:
    """Primitive normal of the hyperplane through k points in R^k (or None)."""
    k = len(points[0])
    if k == 1:
        return (1,)
    base = points[0]
    edges = [[p[i] - base[i] for i in range(k)] for p in points[1:]]
    normal = []
    for j in range(k):
        minor = [[row[i] for i in range(k) if i != j] for row in edges]
        normal.append((-1) ** j * int_det(minor))
    if not any(normal):
        return None
    return _primitive(normal)


def hull_facets(points: Sequence[Point]) -> List[Facet]:
    """Facet inequalities <a, x> <= b of the convex hull of a full-dimensional
    point set, by exhaustive hyperplane enumeration with exact predicates."""
    k = len(points[0])
    if k == 1:
        xs = [p[0] for p in points]
        return [((1,), max(xs)), ((-1,), -min(xs))]
    seen: set[Facet] = set()
    out: List[Facet] = []
    for combo in combinations(range(len(points)), k):
        normal = _normal_through([points[i] for i in combo])
        if normal is None:
            continue
        b = sum(n * x for n, x in zip(normal, points[combo[0]]))
        lo = hi = False
        for p in points:
            s = sum(n * x for n, x in zip(normal, p))
            if s > b:
                hi = True
            elif s < b:
                lo = True
            if lo and hi:
                break
        if lo and hi:
            continue
        if hi:  # flip so that all points satisfy <a, x> <= b
            normal = tuple(-n for n in normal)
            b = -b
        f = (normal, b)
        if f not in seen:
            seen.add(f)
            out.append(f)
    return sorted(out)


# ---------------------------------------------------------------------------
# hull + triangulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Triangulation:
    """Simplices as (n+1)-tuples of indices into `points`."""

    points: Tuple[Point, ...]
    simplices: Tuple[Tuple[int, ...], ...]

    def simplex_nvol(self, s: Tuple[int, ...]) -> int:
        base = self.points[s[0]]
        edges = [[self.points[i][j] - base[j] for j in range(len(base))] for i in s[1:]]
        return abs(int_det(edges))


@dataclass(frozen=True)
class LatticePolytope:
    """Exact Newton-polytope data: vertices, facets, dimension, normalized volume."""

    dim: int
    vertices: Tuple[Point, ...]
    facets: Tuple[Facet, ...]
    nvol: int
    triangulation: Triangulation = field(compare=False)

    def contains(self, x: Sequence[int], dilation: int = 1) -> bool:
        """Membership of x in dilation * Delta, via scaled facet inequalities."""
        if dilation == 0:
            return all(c == 0 for c in x)
        return all(sum(a * xi for a, xi in zip(normal, x)) <= dilation * b
                   for normal, b in self.facets)


def _triangulate_convex(points: List[Point]) -> List[Tuple[int, ...]]:
    """Deterministic triangulation of a polytope given by points in convex
    position: cone from the lexicographically smallest point over the facets
    that do not contain it, recursively."""
    k = affine_rank(points)
    if len(points) == k + 1:
        return [tuple(range(len(points)))]
    proj, _ = _project_to_span(points, k)
    apex = min(range(len(proj)), key=lambda i: proj[i])
    result: List[Tuple[int, ...]] = []
    for normal, b in hull_facets(proj):
        if sum(n * x for n, x in zip(normal, proj[apex])) == b:
            continue
        face_idx = [i for i in range(len(proj))
                    if sum(n * x for n, x in zip(normal, proj[i])) == b]
        for sub in _triangulate_convex([proj[i] for i in face_idx]):
            simplex = tuple(sorted(face_idx[j] for j in sub)) + (apex,)
            result.append(tuple(sorted(simplex)))
    return result


def _project_to_span(points: List[Point], k: int) -> Tuple[List[Point], List[int]]:
    """Project points to k coordinates on which their affine span is injective."""
    n = len(points[0])
    if k == n:
        return points, list(range(n))
    base = points[0]
    edges = [[p[i] - base[i] for i in range(n)] for p in points[1:]]
    cols: List[int] = []
    for c in range(n):
        trial = cols + [c]
        sub = [[row[j] for j in trial] for row in edges]
        if _rank(sub) == len(trial):
            cols.append(c)
        if len(cols) == k:
            break
    proj = [tuple(p[j] for j in cols) for p in points]
    return proj, cols


def hull_and_triangulate(S: Iterable[Point]) -> Tuple[LatticePolytope, Triangulation]:
    """Convex hull with exact facet description, plus the triangulation induced
    by the lower hull of the points lifted to (v, |v|^2)."""
    points = sorted(set(tuple(int(c) for c in p) for p in S))
    if not points:
        raise NotFullDimensional("empty point set")
    n = len(points[0])
    if n > MAX_DIM:
        raise NotFullDimensional(f"dimension {n} exceeds the supported cap {MAX_DIM}")
    k = affine_rank(points)
    if k < n:
        raise NotFullDimensional(
            f"point set spans an affine subspace of dimension {k} < {n}")

    facets = tuple(hull_facets(points))

    # Vertices: points whose tight facet normals span the full space.
    vertices = []
    for p in points:
        tight = [normal for normal, b in facets
                 if sum(a * x for a, x in zip(normal, p)) == b]
        if _rank([list(t) for t in tight]) == n:
            vertices.append(p)
    vertices = tuple(vertices)

    # Delaunay-style cells from the lower hull of the lifted points.
    lifted = [p + (sum(c * c for c in p),) for p in points]
    simplices: List[Tuple[int, ...]] = []
    if affine_rank(lifted) < n + 1:
        # Entirely cospherical: one cell containing every point.
        cells = [list(range(len(points)))]
    else:
        cells = []
        for normal, b in hull_facets(lifted):
            if normal[-1] >= 0:
                continue  # not a lower facet
            cell = [i for i in range(len(lifted))
                    if sum(a * x for a, x in zip(normal, lifted[i])) == b]
            cells.append(cell)
    for cell in sorted(cells):
        cell_points = [points[i] for i in cell]
        for sub in _triangulate_convex(cell_points):
            simplices.append(tuple(sorted(cell[j] for j in sub)))
    simplices = sorted(set(simplices))

    tri = Triangulation(points=tuple(points), simplices=tuple(simplices))
    nvol = sum(tri.simplex_nvol(s) for s in tri.simplices)
    if nvol <= 0:
        raise NotFullDimensional("triangulation produced zero volume")
    poly = LatticePolytope(dim=n, vertices=vertices, facets=facets, nvol=nvol,
                           triangulation=tri)
    return poly, tri


# ---------------------------------------------------------------------------
# lattice points of dilations
# ---------------------------------------------------------------------------

def lattice_points(poly: LatticePolytope, d: int) -> List[Point]:
    """All integer points of d * Delta, enumerated simplex by simplex through
    the residues of the fundamental parallelepiped (no bounding-box scan)."""
    n = poly.dim
    if d < 0:
        raise ValueError("dilation must be nonnegative")
    if d == 0:
        return [(0,) * n]
    found: set[Point] = set()
    tri = poly.triangulation
    for s in tri.simplices:
        verts = [tuple(d * c for c in tri.points[i]) for i in s]
        found.update(_simplex_lattice_points(verts))
    pts = sorted(found)
    assert all(poly.contains(p, d) for p in pts)
    return pts


def _simplex_lattice_points(verts: List[Point]) -> List[Point]:
    """Integer points of a full-dimensional simplex with integer vertices."""
    n = len(verts) - 1
    v0 = verts[0]
    B = [[verts[j + 1][i] - v0[i] for j in range(n)] for i in range(n)]  # columns w_j
    det = int_det(B)
    assert det != 0
    adj = _adjugate(B)
    out: List[Point] = [tuple(v) for v in verts]  # vertices are always included

    # Triangular generator matrix of the column lattice B*Z^n (for residues).
    _, Ht = hermite_normal_form([[B[j][i] for j in range(n)] for i in range(n)])
    diag = [abs(Ht[i][i]) for i in range(n)]
    if any(di == 0 for di in diag):
        return out  # cannot happen for det != 0; defensive

    rep = [0] * n
    while True:
        # c = B^{-1} r = adj(B) r / det, taken to its fractional part in [0,1)^n.
        cf = []
        for i in range(n):
            num = sum(adj[i][j] * rep[j] for j in range(n))
            cf.append(Fraction(num, det) % 1)
        if sum(cf) <= 1:
            y = [v0[i] + sum(B[i][j] * cf[j] for j in range(n)) for i in range(n)]
            assert all(c.denominator == 1 for c in map(Fraction, y))
            out.append(tuple(int(c) for c in y))
        # odometer over residue representatives
        i = 0
        while i < n:
            rep[i] += 1
            if rep[i] < diag[i]:
                break
            rep[i] = 0
            i += 1
        if i == n:
            break
    return sorted(set(out))


def _adjugate(m: List[List[int]]) -> List[List[int]]:
    n = len(m)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m[r][c] for c in range(n) if c != j]
                     for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * int_det(minor)
    return adj


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------

def hermite_normal_form(B: Sequence[Sequence[int]]):
    """Row-operation HNF: returns (U, H) with U unimodular, U*B = H, H lower
    triangular, diagonal positive where nonzero, and 0 <= h_ji < h_ii below
    each nonzero pivot.  Singular input yields zero diagonal entries."""
    n = len(B)
    m = len(B[0]) if n else 0
    H = [list(map(int, row)) for row in B]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    for col in range(min(n, m) - 1, -1, -1) if n == m else range(m - 1, -1, -1):
        pivot = col
        if pivot >= n:
            continue
        # Fold rows 0..pivot-1 into the pivot row on this column via gcd steps.
        for r in range(pivot):
            while H[r][col] != 0:
                if H[pivot][col] == 0:
                    H[pivot], H[r] = H[r], H[pivot]
                    U[pivot], U[r] = U[r], U[pivot]
                    continue
                qout = H[r][col] // H[pivot][col]
                if qout != 0:
                    H[r] = [x - qout * y for x, y in zip(H[r], H[pivot])]
                    U[r] = [x - qout * y for x, y in zip(U[r], U[pivot])]
                if H[r][col] != 0:
                    H[pivot], H[r] = H[r], H[pivot]
                    U[pivot], U[r] = U[r], U[pivot]
        if H[pivot][col] < 0:
            H[pivot] = [-x for x in H[pivot]]
            U[pivot] = [-x for x in U[pivot]]
        if H[pivot][col] != 0:
            for r in range(pivot + 1, n):
                qout = H[r][col] // H[pivot][col]
                if qout != 0:
                    H[r] = [x - qout * y for x, y in zip(H[r], H[pivot])]
                    U[r] = [x - qout * y for x, y in zip(U[r], U[pivot])]
    return U, H


# ---------------------------------------------------------------------------
# faces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """A face of the polytope with the support points lying on it."""

    tight: Tuple[int, ...]  # indices into poly.facets, tight on this face
    vertices: Tuple[Point, ...]
    points: Tuple[Point, ...]  # S restricted to the face
    dim: int


def faces(poly: LatticePolytope, S: Sequence[Point]) -> List[Face]:
    """All faces of every dimension 0..n (the polytope itself included, the
    empty face excluded), each with its restriction of the support set S."""
    facet_vsets = []
    for normal, b in poly.facets:
        facet_vsets.append(frozenset(
            v for v in poly.vertices
            if sum(a * x for a, x in zip(normal, v)) == b))
    closure = {frozenset(poly.vertices)}
    frontier = [frozenset(poly.vertices)]
    while frontier:
        nxt = []
        for w in frontier:
            for fv in facet_vsets:
                inter = w & fv
                if inter and inter not in closure:
                    closure.add(inter)
                    nxt.append(inter)
        frontier = nxt
    out = []
    for w in sorted(closure, key=lambda s: (len(s), sorted(s))):
        verts = tuple(sorted(w))
        tight = tuple(i for i, (normal, b) in enumerate(poly.facets)
                      if all(sum(a * x for a, x in zip(normal, v)) == b
                             for v in verts))
        pts = tuple(sorted(
            s for s in S
            if all(sum(a * x for a, x in zip(poly.facets[i][0], s)) == poly.facets[i][1]
                   for i in tight)))
        out.append(Face(tight=tight, vertices=verts, points=pts,
                        dim=affine_rank(list(verts))))
    return out


# ---------------------------------------------------------------------------
# confinement
# ---------------------------------------------------------------------------

def confine(S: Sequence[Point]):
    """Unimodular change of coordinates confining the support to a small box.

    Greedily grows a large-volume simplex (adding the point that maximizes the
    Gram determinant), applies the unimodular transform from the HNF of its
    edge matrix, and translates the result to nonnegative coordinates.
    Returns (U, t, S_transformed, confined_flag) where the flag records
    whether the bounding box has side product <= n^n * nvol.
    """
    points = sorted(set(tuple(int(c) for c in p) for p in S))
    n = len(points[0])
    if affine_rank(points) < n:
        raise NotFullDimensional("confinement requires a full-dimensional support")

    chosen = [min(points)]
    while len(chosen) < n + 1:
        best = None
        best_gram = -1
        base = chosen[0]
        for p in points:
            if p in chosen:
                continue
            vecs = [[q[i] - base[i] for i in range(n)] for q in chosen[1:] + [p]]
            gram = int_det([[sum(a * b for a, b in zip(v, w)) for w in vecs]
                            for v in vecs])
            if gram > best_gram:
                best_gram = gram
                best = p
        if best is None or best_gram == 0:
            raise NotFullDimensional("could not grow a full-dimensional simplex")
        chosen.append(best)

    base = chosen[0]
    edge_cols = [[chosen[j + 1][i] - base[i] for j in range(n)] for i in range(n)]
    U, _ = hermite_normal_form(edge_cols)
    transformed = [tuple(sum(U[i][j] * (p[j] - base[j]) for j in range(n))
                         for i in range(n)) for p in points]
    mins = [min(p[i] for p in transformed) for i in range(n)]
    shifted = sorted(tuple(p[i] - mins[i] for i in range(n)) for p in transformed)
    t = tuple(-sum(U[i][j] * base[j] for j in range(n)) - mins[i] for i in range(n))

    poly, _ = hull_and_triangulate(shifted)
    box = 1
    for i in range(n):
        side = max(p[i] for p in shifted) - min(p[i] for p in shifted)
        box *= max(side, 1)
    flag = box <= n ** n * poly.nvol
    return U, t, shifted, flag
