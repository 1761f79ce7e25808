"""Exact lattice polytope model: hulls, facets, lattice points, width functionals.

Everything here is exact: vertex data are arbitrary-precision integers and
derived quantities (centroids, squared inradii) are rationals.  No floating
point enters any predicate, so results are reproducible bit for bit.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


class DomainError(ValueError):
    """An operation's precondition was violated."""


class DegenerateError(DomainError):
    """A full-dimensional polytope was required."""


# ---------------------------------------------------------------------------
# integer vector / matrix helpers
# ---------------------------------------------------------------------------

def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def vec_add(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[int], b: Sequence[int]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vec_neg(a: Sequence[int]) -> Vec:
    return tuple(-x for x in a)


def vec_scale(k: int, a: Sequence[int]) -> Vec:
    return tuple(k * x for x in a)


def vec_gcd(a: Sequence[int]) -> int:
    g = 0
    for x in a:
        g = gcd(g, abs(x))
    return g


def primitive(a: Sequence[int]) -> Vec:
    """Divide out the gcd of the entries, keeping orientation."""
    g = vec_gcd(a)
    if g == 0:
        raise DomainError("zero vector has no primitive form")
    return tuple(x // g for x in a)


def canonical_direction(a: Sequence[int]) -> Vec:
    """Primitive representative with the first nonzero entry positive."""
    v = primitive(a)
    for x in v:
        if x > 0:
            return v
        if x < 0:
            return vec_neg(v)
    raise DomainError("zero vector has no direction")


def cross3(a: Sequence[int], b: Sequence[int]) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def mat_det(rows: Sequence[Sequence[int]]) -> int:
    d = len(rows)
    if d == 1:
        return rows[0][0]
    if d == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if d == 3:
        return dot(rows[0], cross3(rows[1], rows[2]))
    raise DomainError(f"unsupported dimension {d}")


def mat_vec(rows: Sequence[Sequence[int]], x: Sequence[int]) -> Vec:
    return tuple(dot(r, x) for r in rows)


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Mat:
    bt = list(zip(*b))
    return tuple(tuple(dot(r, c) for c in bt) for r in a)


def mat_transpose(a: Sequence[Sequence[int]]) -> Mat:
    return tuple(zip(*a))


def identity_matrix(d: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def mat_adjugate(rows: Sequence[Sequence[int]]) -> Mat:
    d = len(rows)
    if d == 2:
        (a, b), (c, e) = rows
        return ((e, -b), (-c, a))
    if d == 3:
        m = rows

        def cof(i, j):
            sub = [
                [m[r][c] for c in range(3) if c != j]
                for r in range(3)
                if r != i
            ]
            s = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
            return -s if (i + j) % 2 else s

        # adjugate is the transpose of the cofactor matrix
        return tuple(tuple(cof(j, i) for j in range(3)) for i in range(3))
    raise DomainError(f"unsupported dimension {d}")


def unimodular_inverse(rows: Sequence[Sequence[int]]) -> Mat:
    det = mat_det(rows)
    if det not in (1, -1):
        raise DomainError(f"matrix with determinant {det} is not unimodular")
    adj = mat_adjugate(rows)
    if det == 1:
        return adj
    return tuple(vec_neg(r) for r in adj)


def complete_to_unimodular(h: Sequence[int]) -> Mat:
    """Unimodular matrix whose first row is the primitive vector h.

    Built by running the Euclidean algorithm across the entries with
    column operations and inverting the accumulated transform.
    """
    h = tuple(int(x) for x in h)
    d = len(h)
    cols = [list(c) for c in identity_matrix(d)]
    cur = list(h)

    def col_op(dst, src, q):
        # column_dst -= q * column_src
        cur[dst] -= q * cur[src]
        for r in range(d):
            cols[r][dst] -= q * cols[r][src]

    def col_swap(a, b):
        cur[a], cur[b] = cur[b], cur[a]
        for r in range(d):
            cols[r][a], cols[r][b] = cols[r][b], cols[r][a]

    for j in range(1, d):
        while cur[j] != 0:
            if cur[0] == 0 or abs(cur[j]) < abs(cur[0]):
                col_swap(0, j)
            else:
                col_op(j, 0, cur[j] // cur[0])
    if cur[0] < 0:
        for r in range(d):
            cols[r][0] = -cols[r][0]
        cur[0] = -cur[0]
    if cur[0] != 1:
        raise DomainError("completion requires a primitive vector")
    return unimodular_inverse(tuple(tuple(row) for row in cols))


def _int_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix, by fraction-free elimination."""
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    cols = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < cols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            q = rows[i][col]
            if q:
                rows[i] = [p * x - q * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# affine unimodular maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnimodularMap:
    """Affine map x -> Ax + v with A an integer matrix of determinant +-1."""

    matrix: Mat
    shift: Vec

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        v = tuple(int(x) for x in self.shift)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "shift", v)
        d = len(m)
        if any(len(row) != d for row in m) or len(v) != d:
            raise DomainError("matrix and shift dimensions disagree")
        if mat_det(m) not in (1, -1):
            raise DomainError("matrix is not unimodular")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @staticmethod
    def identity(d: int) -> "UnimodularMap":
        return UnimodularMap(identity_matrix(d), (0,) * d)

    @staticmethod
    def translation(v: Sequence[int]) -> "UnimodularMap":
        return UnimodularMap(identity_matrix(len(tuple(v))), tuple(v))

    def apply(self, point: Sequence[int]) -> Vec:
        return vec_add(mat_vec(self.matrix, point), self.shift)

    def compose(self, inner: "UnimodularMap") -> "UnimodularMap":
        """Map equal to applying `inner` first, then `self`."""
        return UnimodularMap(
            mat_mul(self.matrix, inner.matrix),
            vec_add(mat_vec(self.matrix, inner.shift), self.shift),
        )

    def inverse(self) -> "UnimodularMap":
        inv = unimodular_inverse(self.matrix)
        return UnimodularMap(inv, vec_neg(mat_vec(inv, self.shift)))

    def to_json(self) -> dict:
        return {"A": [list(r) for r in self.matrix], "v": list(self.shift)}

    @staticmethod
    def from_json(data: dict) -> "UnimodularMap":
        return UnimodularMap(
            tuple(tuple(r) for r in data["A"]), tuple(data["v"])
        )


# ---------------------------------------------------------------------------
# the polytope itself
# ---------------------------------------------------------------------------

class LatticePolytope:
    """Convex hull of finitely many integer points in dimension 2 or 3.

    Instances are produced by :func:`convex_hull` and are immutable.  The
    vertex list holds exactly the extreme points; `inequalities` are facet
    constraints n.x <= c with primitive integer normals, and `equalities`
    pin down the affine hull when the polytope is not full-dimensional.
    """

    __slots__ = (
        "dim",
        "affine_dim",
        "vertices",
        "inequalities",
        "equalities",
        "_width_memo",
        "_inradius",
    )

    def __init__(self, dim, affine_dim, vertices, inequalities, equalities):
        self.dim = dim
        self.affine_dim = affine_dim
        self.vertices = vertices
        self.inequalities = inequalities
        self.equalities = equalities
        self._width_memo: dict[Vec, int] = {}
        self._inradius = None

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    @property
    def facets(self) -> tuple[tuple[Vec, int], ...]:
        return self.inequalities

    def contains(self, point: Sequence[int]) -> bool:
        p = tuple(point)
        return all(dot(n, p) == c for n, c in self.equalities) and all(
            dot(n, p) <= c for n, c in self.inequalities
        )

    def bounding_box(self) -> tuple[Vec, Vec]:
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.dim))
        return lo, hi

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.dim == other.dim and sorted(self.vertices) == sorted(
            other.vertices
        )

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.vertices))))

    def __repr__(self):
        return (
            f"LatticePolytope(dim={self.dim}, affine_dim={self.affine_dim}, "
            f"vertices={sorted(self.vertices)})"
        )


def _hull_2d_ring(pts: list[Vec]) -> list[Vec]:
    """Monotone chain; returns strict hull vertices in CCW order."""
    pts = sorted(set(pts))

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                ax, ay = vec_sub(out[-1], out[-2])
                bx, by = vec_sub(p, out[-2])
                if ax * by - ay * bx <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    return lower[:-1] + upper[:-1]


def _edges_to_inequalities(ring: list[Vec]) -> tuple[tuple[Vec, int], ...]:
    ineqs = []
    k = len(ring)
    for i in range(k):
        a, b = ring[i], ring[(i + 1) % k]
        tx, ty = vec_sub(b, a)
        n = primitive((ty, -tx))
        ineqs.append((n, dot(n, a)))
    return tuple(sorted(ineqs))


def _segment_polytope(pts: list[Vec], dim: int) -> LatticePolytope:
    base = pts[0]
    direction = next(vec_sub(p, base) for p in pts if p != base)
    t = primitive(direction)
    lo = min(pts, key=lambda p: dot(t, p))
    hi = max(pts, key=lambda p: dot(t, p))
    ineqs = ((t, dot(t, hi)), (vec_neg(t), -dot(t, lo)))
    if dim == 2:
        n = primitive((t[1], -t[0]))
        eqs = ((n, dot(n, base)),)
    else:
        cands = [
            (t[1], -t[0], 0),
            (t[2], 0, -t[0]),
            (0, t[2], -t[1]),
        ]
        cands = [c for c in cands if any(c)]
        eqs_list = [cands[0]]
        for c in cands[1:]:
            if _int_rank([list(eqs_list[0]), list(c)]) == 2:
                eqs_list.append(c)
                break
        eqs = tuple((primitive(n), dot(primitive(n), base)) for n in eqs_list)
    verts = tuple(sorted({lo, hi}))
    return LatticePolytope(dim, 1, verts, tuple(sorted(ineqs)), eqs)


def _planar_polytope_3d(pts: list[Vec]) -> LatticePolytope:
    base = pts[0]
    diffs = [vec_sub(p, base) for p in pts if p != base]
    normal = None
    for a, b in itertools.combinations(diffs, 2):
        c = cross3(a, b)
        if any(c):
            normal = primitive(c)
            break
    assert normal is not None
    drop = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != drop]
    proj = {(p[keep[0]], p[keep[1]]): p for p in pts}
    ring2 = _hull_2d_ring(list(proj))
    ring3 = [proj[q] for q in ring2]
    ineqs = []
    k = len(ring3)
    for i in range(k):
        a, b = ring3[i], ring3[(i + 1) % k]
        w = primitive(cross3(vec_sub(b, a), normal))
        c = dot(w, a)
        if max(dot(w, p) for p in ring3) > c:
            w, c = vec_neg(w), -c
        ineqs.append((w, c))
    eqs = ((normal, dot(normal, base)),)
    return LatticePolytope(
        3, 2, tuple(sorted(ring3)), tuple(sorted(ineqs)), eqs
    )


def _hull_3d(pts: list[Vec]) -> LatticePolytope:
    facets: dict[Vec, int] = {}
    n = len(pts)
    for i, j, k in itertools.combinations(range(n), 3):
        nrm = cross3(vec_sub(pts[j], pts[i]), vec_sub(pts[k], pts[i]))
        if not any(nrm):
            continue
        vals = [dot(nrm, p) for p in pts]
        c = vals[i]
        if max(vals) == c:
            pass
        elif min(vals) == c:
            nrm = vec_neg(nrm)
        else:
            continue
        nrm = primitive(nrm)
        facets.setdefault(nrm, dot(nrm, pts[i]))
    verts = []
    for p in pts:
        active = [list(nrm) for nrm, c in facets.items() if dot(nrm, p) == c]
        if len(active) >= 3 and _int_rank(active) == 3:
            verts.append(p)
    return LatticePolytope(
        3,
        3,
        tuple(sorted(verts)),
        tuple(sorted(facets.items())),
        (),
    )


def convex_hull(points: Iterable[Sequence[int]], dim: int | None = None) -> LatticePolytope:
    """Exact convex hull of integer points in dimension 2 or 3.

    The result's vertex list contains exactly the extreme points.  Inputs
    that are not full-dimensional come back flagged through `affine_dim`,
    with the affine hull recorded as equality constraints so that lattice
    point enumeration still works on segments and embedded polygons.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        raise DomainError("convex_hull requires at least one point")
    d = dim if dim is not None else len(pts[0])
    if d not in (2, 3):
        raise DomainError(f"unsupported dimension {d}")
    if any(len(p) != d for p in pts):
        raise DomainError("points of mixed dimension")
    pts = sorted(set(pts))
    base = pts[0]
    diffs = [list(vec_sub(p, base)) for p in pts[1:]]
    adim = _int_rank(diffs) if diffs else 0
    if adim == 0:
        eqs = tuple(
            (tuple(1 if j == i else 0 for j in range(d)), base[i])
            for i in range(d)
        )
        return LatticePolytope(d, 0, (base,), (), eqs)
    if adim == 1:
        return _segment_polytope(pts, d)
    if d == 2:
        ring = _hull_2d_ring(pts)
        return LatticePolytope(
            2, 2, tuple(ring), _edges_to_inequalities(ring), ()
        )
    if adim == 2:
        return _planar_polytope_3d(pts)
    return _hull_3d(pts)


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------

def width_in_direction(P: LatticePolytope, h: Sequence[int]) -> int:
    """Lattice width of P along h: max <h,x> - min <h,x> over P.

    Defined for any integer h (primitivity is not required); results are
    memoised per polytope under the sign-canonical form of h.  The memo is
    the only mutable state on a polytope; concurrent readers at worst
    recompute the same value, so shared use is safe.
    """
    if not P.vertices:
        raise DomainError("empty polytope")
    hv = tuple(int(x) for x in h)
    if len(hv) != P.dim:
        raise DomainError("direction dimension mismatch")
    key = hv
    for x in hv:
        if x < 0:
            key = vec_neg(hv)
            break
        if x > 0:
            break
    memo = P._width_memo
    got = memo.get(key)
    if got is not None:
        return got
    vals = [dot(key, v) for v in P.vertices]
    w = max(vals) - min(vals)
    memo[key] = w
    return w


def l1(P: LatticePolytope) -> int:
    """max of the coordinate sum minus the sum of coordinate minima."""
    if not P.vertices:
        raise DomainError("empty polytope")
    top = max(sum(v) for v in P.vertices)
    return top - sum(min(v[i] for v in P.vertices) for i in range(P.dim))


def corner_l(P: LatticePolytope, signs: Sequence[int]) -> int:
    """l1 of the image of P under the diagonal sign matrix diag(signs)."""
    s = tuple(signs)
    if len(s) != P.dim or any(x not in (1, -1) for x in s):
        raise DomainError("signs must be a +-1 vector of matching dimension")
    flipped = [tuple(si * vi for si, vi in zip(s, v)) for v in P.vertices]
    top = max(sum(v) for v in flipped)
    return top - sum(min(v[i] for v in flipped) for i in range(P.dim))


def nls_simplex(P: LatticePolytope) -> int:
    """Smallest dilate of the standard simplex containing an image of P
    under sign flips and translations only (the naive lattice size)."""
    return min(
        corner_l(P, s) for s in itertools.product((1, -1), repeat=P.dim)
    )


def _nls_with_sign(P: LatticePolytope) -> tuple[int, Vec]:
    best = None
    for s in itertools.product((1, -1), repeat=P.dim):
        v = corner_l(P, s)
        if best is None or v < best[0]:
            best = (v, s)
    return best


def nls_cube(P: LatticePolytope) -> int:
    """Sign-flip-only lattice size against the unit cube: the largest
    coordinate width (sign flips and translations preserve these)."""
    e = identity_matrix(P.dim)
    return max(width_in_direction(P, e[i]) for i in range(P.dim))


def apply_map(P: LatticePolytope, T: UnimodularMap) -> LatticePolytope:
    """Image of P under an affine unimodular map, renormalised."""
    if T.dim != P.dim:
        raise DomainError("map dimension mismatch")
    return convex_hull([T.apply(v) for v in P.vertices], P.dim)


def lattice_points(P: LatticePolytope) -> list[Vec]:
    """All integer points of P (boundary included), by bounding-box scan."""
    lo, hi = P.bounding_box()
    eqs, ineqs = P.equalities, P.inequalities
    out = []
    for p in itertools.product(
        *(range(lo[i], hi[i] + 1) for i in range(P.dim))
    ):
        if all(dot(n, p) == c for n, c in eqs) and all(
            dot(n, p) <= c for n, c in ineqs
        ):
            out.append(p)
    return out


def interior_lattice_points(P: LatticePolytope) -> list[Vec]:
    """Integer points strictly inside a full-dimensional polytope."""
    if not P.is_full_dimensional:
        return []
    lo, hi = P.bounding_box()
    out = []
    for p in itertools.product(
        *(range(lo[i], hi[i] + 1) for i in range(P.dim))
    ):
        if all(dot(n, p) < c for n, c in P.inequalities):
            out.append(p)
    return out


def is_empty_polytope(P: LatticePolytope) -> bool:
    """True when the only lattice points of P are its vertices."""
    return set(lattice_points(P)) == set(P.vertices)


def inradius_bound(P: LatticePolytope) -> tuple[tuple[Fraction, ...], Fraction]:
    """Vertex centroid and the squared distance to the nearest facet.

    The Euclidean ball of that radius about the centroid sits inside P, so
    any direction h satisfies width(h) >= 2R*|h|_2.  Values are exact
    rationals; the radius is only ever used squared.
    """
    if not P.is_full_dimensional:
        raise DegenerateError("inscribed ball requires a full-dimensional polytope")
    k = len(P.vertices)
    center = tuple(
        Fraction(sum(v[i] for v in P.vertices), k) for i in range(P.dim)
    )
    r2 = None
    for n, c in P.inequalities:
        gap = c - dot(n, center)
        cand = gap * gap / Fraction(dot(n, n))
        if r2 is None or cand < r2:
            r2 = cand
    result = (center, r2)
    P._inradius = result
    return result


def cached_inradius(P: LatticePolytope) -> tuple[tuple[Fraction, ...], Fraction]:
    if P._inradius is None:
        return inradius_bound(P)
    return P._inradius


def inradius_sq_pair(P: LatticePolytope) -> tuple[int, int]:
    """Squared inradius bound as an integer pair (num, den), den > 0.

    Same quantity as :func:`inradius_bound` returns, without Fraction
    overhead; used by search windows that only ever need floor(x / R^2).
    """
    if not P.is_full_dimensional:
        raise DegenerateError("inscribed ball requires a full-dimensional polytope")
    k = len(P.vertices)
    centroid_k = tuple(sum(v[i] for v in P.vertices) for i in range(P.dim))
    num = den = None
    for n, c in P.inequalities:
        gap = k * c - dot(n, centroid_k)  # k * (c - <n, centroid>)
        cand_num = gap * gap
        cand_den = k * k * dot(n, n)
        if num is None or cand_num * den < num * cand_den:
            num, den = cand_num, cand_den
    return num, den


# ---------------------------------------------------------------------------
# stock polytopes and JSON interchange
# ---------------------------------------------------------------------------

def standard_simplex(dim: int, dilation: int = 1) -> LatticePolytope:
    pts = [(0,) * dim] + [
        tuple(dilation if j == i else 0 for j in range(dim))
        for i in range(dim)
    ]
    return convex_hull(pts, dim)


def unit_cube(dim: int) -> LatticePolytope:
    return convex_hull(list(itertools.product((0, 1), repeat=dim)), dim)


def polytope_to_json(P: LatticePolytope) -> dict:
    return {"dim": P.dim, "vertices": [list(v) for v in sorted(P.vertices)]}


def polytope_from_json(data: dict) -> LatticePolytope:
    try:
        dim = int(data["dim"])
        verts = data["vertices"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed polytope document: {exc}") from exc
    return convex_hull(verts, dim)


def load_polytope(path) -> LatticePolytope:
    with open(path, "r", encoding="utf-8") as fh:
        return polytope_from_json(json.load(fh))


def dump_polytope(P: LatticePolytope, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(polytope_to_json(P), fh)
        fh.write("\n")
