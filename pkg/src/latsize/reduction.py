"""Basis reduction in the width norm of a polytope.

The norm of an integer direction h is its lattice width over a fixed
polytope P.  This module reduces bases of Z^2 and Z^3 with respect to that
norm: the 2D generalised Gauss reduction, a 3D reduction whose third vector
is width-minimal over its whole coset plane, and the upgrade of a reduced
basis to a Minkowski-reduced one.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .polytope import (
    DegenerateError,
    DomainError,
    LatticePolytope,
    Mat,
    Vec,
    canonical_direction,
    cross3,
    dot,
    identity_matrix,
    inradius_sq_pair,
    mat_det,
    vec_add,
    vec_neg,
    vec_scale,
    vec_sub,
    width_in_direction,
)

LEVELS = ("none", "reduced", "minkowski")


@dataclass(frozen=True)
class Basis:
    """Ordered basis of Z^d with cached width norms for one polytope."""

    rows: Mat
    norms: tuple[int, ...]
    level: str = "none"

    def __post_init__(self):
        if mat_det(self.rows) not in (1, -1):
            raise DomainError("basis rows must have determinant +-1")
        if self.level not in LEVELS:
            raise DomainError(f"unknown reduction level {self.level!r}")

    @property
    def dim(self) -> int:
        return len(self.rows)


def basis_for(P: LatticePolytope, rows, level: str = "none") -> Basis:
    rows = tuple(tuple(int(x) for x in r) for r in rows)
    norms = tuple(width_in_direction(P, r) for r in rows)
    return Basis(rows, norms, level)


def basis_to_json(b: Basis) -> dict:
    return {
        "rows": [list(r) for r in b.rows],
        "norms": list(b.norms),
        "level": b.level,
    }


def basis_from_json(P: LatticePolytope, data: dict) -> Basis:
    b = basis_for(P, data["rows"], data.get("level", "none"))
    if "norms" in data and tuple(data["norms"]) != b.norms:
        raise DomainError("stored norms disagree with recomputation")
    return b


# ---------------------------------------------------------------------------
# integer convex minimisation
# ---------------------------------------------------------------------------

def _argmin_interval(f) -> tuple[int, int]:
    """Argmin interval [lo, hi] of a convex integer function f -> infinity.

    Works through the nondecreasing gap g(m) = f(m+1) - f(m): the interval
    of minimisers is exactly where g changes sign.
    """

    def gap(m):
        return f(m + 1) - f(m)

    lo = -1
    while gap(lo) >= 0:
        lo *= 2
        if lo < -(1 << 62):
            raise DomainError("function does not grow to the left")
    hi = 1
    while gap(hi) < 0:
        hi *= 2
        if hi > (1 << 62):
            raise DomainError("function does not grow to the right")
    # smallest m in (lo, hi] with gap(m) >= 0: left edge of the plateau
    a, b = lo, hi
    while a + 1 < b:
        mid = (a + b) // 2
        if gap(mid) >= 0:
            b = mid
        else:
            a = mid
    left = b
    # smallest m in [left, ...] with gap(m) > 0: right edge
    a, b = left - 1, hi
    while gap(b) <= 0:
        b = 2 * b + 1
        if b > (1 << 62):
            raise DomainError("function does not grow to the right")
    while a + 1 < b:
        mid = (a + b) // 2
        if gap(mid) > 0:
            b = mid
        else:
            a = mid
    right = b
    return left, right


def _vec_key(P: LatticePolytope, v: Vec):
    """Total order used to break norm ties: width, then Euclidean length,
    then the plain lexicographic order of the entries."""
    return (width_in_direction(P, v), dot(v, v), v)


def _best_shift(P: LatticePolytope, base: Vec, step: Vec) -> int:
    """Integer m minimising the key of base + m*step.

    The width part is convex in m; within its argmin interval the Euclidean
    part is a strictly convex quadratic, leaving at most two candidates for
    the final lexicographic tie-break.
    """
    if width_in_direction(P, step) == 0:
        # adding step never changes the width; minimise Euclidean length
        a = dot(step, step)
        b = 2 * dot(base, step)
        lo = -(b // (2 * a)) - 2
        cands = range(lo, lo + 5)
        return min(
            cands, key=lambda m: _vec_key(P, vec_add(base, vec_scale(m, step)))[1:]
        )

    base_dots = [dot(base, v) for v in P.vertices]
    step_dots = [dot(step, v) for v in P.vertices]
    pairs = list(zip(base_dots, step_dots))
    cache: dict[int, int] = {}

    def f(m):
        w = cache.get(m)
        if w is None:
            vals = [b + m * s for b, s in pairs]
            w = max(vals) - min(vals)
            cache[m] = w
        return w

    lo, hi = _argmin_interval(f)
    a = dot(step, step)
    b = 2 * dot(base, step)
    vertex = -(b // (2 * a))  # integer near the quadratic's minimum
    cands = {lo, hi}
    for m in (vertex - 1, vertex, vertex + 1):
        if lo <= m <= hi:
            cands.add(m)
    return min(
        cands, key=lambda m: _vec_key(P, vec_add(base, vec_scale(m, step)))
    )


# ---------------------------------------------------------------------------
# 2D generalised Gauss reduction
# ---------------------------------------------------------------------------

def gauss_reduce_2d(P: LatticePolytope, start=None) -> Basis:
    """Reduce a basis of Z^2 in the width norm of P.

    The result (h1, h2) satisfies |h1| <= |h2| and |h1 +- h2| >= |h2|.
    Degenerate polytopes are allowed as long as some direction has positive
    width (a single point does not qualify).
    """
    if P.dim != 2:
        raise DomainError("gauss_reduce_2d expects a 2D polytope")
    if P.affine_dim == 0:
        raise DegenerateError("every direction has width zero on a point")
    rows = tuple(tuple(r) for r in start) if start is not None else identity_matrix(2)
    if mat_det(rows) not in (1, -1):
        raise DomainError("start is not a basis of Z^2")
    h1, h2 = rows
    if width_in_direction(P, h2) < width_in_direction(P, h1):
        h1, h2 = h2, h1
    while True:
        m = _best_shift(P, h2, h1)
        cand = vec_add(h2, vec_scale(m, h1))
        if _vec_key(P, cand) < _vec_key(P, h2):
            h2 = cand
        if width_in_direction(P, h2) < width_in_direction(P, h1):
            h1, h2 = h2, h1
        else:
            break
    return basis_for(P, (h1, h2), "reduced")


# ---------------------------------------------------------------------------
# minimisation over a coset plane m*h1 + n*h2 + h3
# ---------------------------------------------------------------------------

def _plane_scan(P: LatticePolytope, h1: Vec, h2: Vec, h3: Vec):
    """All (m, n) minimising width(m*h1 + n*h2 + h3), with the minimum.

    The window is exact and shrinks as the best improves.  Two families of
    necessary conditions bound candidates g with width(g) <= B: the
    inscribed-ball inequality |g|^2 <= B^2/(4 R^2), and one slab
    |<g, s>| <= B per vertex segment s of P (sharper than the ball on thin
    polytopes).  Cramer's rule turns both into finite (m, n) ranges; every
    global minimiser stays inside the window throughout.
    """
    if mat_det((h1, h2, h3)) not in (1, -1):
        raise DomainError("(h1, h2, h3) is not a basis of Z^3")
    r2_num, r2_den = inradius_sq_pair(P)
    verts = P.vertices
    v0 = verts[0]
    seg_data = [
        (dot(h1, s), dot(h2, s), dot(h3, s))
        for s in (vec_sub(v, v0) for v in verts[1:])
    ]
    h10, h11, h12 = h1
    h20, h21, h22 = h2
    h30, h31, h32 = h3

    def wid_of(g0, g1, g2):
        vals = [g0 * x + g1 * y + g2 * z for x, y, z in verts]
        return max(vals) - min(vals)

    best_w = wid_of(*h3)
    found: dict[tuple[int, int], Vec] = {(0, 0): h3}
    s23 = dot(cross3(h2, h3), cross3(h2, h3))
    a_quad = dot(h2, h2)

    # segment-pair Cramer caps: solving two slab constraints for m gives
    # |m| <= (B*(|b_s|+|b_t|) + |c_s||b_t| + |c_t||b_s|) / |det|
    pair_caps = []
    k = len(seg_data)
    for i in range(k):
        ai, bi, ci = seg_data[i]
        for j in range(i + 1, k):
            aj, bj, cj = seg_data[j]
            d = abs(ai * bj - aj * bi)
            if d:
                pair_caps.append(
                    (abs(bi) + abs(bj), abs(ci) * abs(bj) + abs(cj) * abs(bi), d)
                )

    def m_cap(bw):
        sq = bw * bw * r2_den // (4 * r2_num)
        cap = isqrt(sq * s23)
        for lin, const, den in pair_caps:
            cand = (bw * lin + const) // den
            if cand < cap:
                cap = cand
        return cap, sq

    limit, sq = m_cap(best_w)

    def shifts():
        yield 0
        k = 1
        while True:
            yield k
            yield -k
            k += 1

    for m in shifts():
        if abs(m) > limit:
            if m > 0:
                continue  # the mirror value may still be in range
            break
        base = vec_add(vec_scale(m, h1), h3)
        b_quad = 2 * dot(base, h2)
        c_quad = dot(base, base)
        disc = b_quad * b_quad - 4 * a_quad * (c_quad - sq)
        if disc < 0:
            continue
        root = isqrt(disc)

        def q(n):
            return a_quad * n * n + b_quad * n + c_quad

        # integer endpoints of {n : q(n) <= sq}; the isqrt floor leaves an
        # off-by-one to fix up, and the interval may contain no integer
        two_a = 2 * a_quad
        n_lo = -((b_quad + root) // two_a)
        n_hi = (root - b_quad) // two_a
        while q(n_lo - 1) <= sq:
            n_lo -= 1
        while n_lo <= n_hi and q(n_lo) > sq:
            n_lo += 1
        while q(n_hi + 1) <= sq:
            n_hi += 1
        while n_hi >= n_lo and q(n_hi) > sq:
            n_hi -= 1
        if n_lo > n_hi:
            continue
        # intersect with the segment slabs |m*a + n*b + c| <= best_w
        feasible = True
        for a_s, b_s, c_s in seg_data:
            t = m * a_s + c_s
            if b_s == 0:
                if t > best_w or -t > best_w:
                    feasible = False
                    break
            elif b_s > 0:
                lo = -((best_w + t) // b_s)
                hi = (best_w - t) // b_s
                if lo > n_lo:
                    n_lo = lo
                if hi < n_hi:
                    n_hi = hi
            else:
                lo = -((best_w - t) // -b_s)
                hi = (best_w + t) // -b_s
                if lo > n_lo:
                    n_lo = lo
                if hi < n_hi:
                    n_hi = hi
            if n_lo > n_hi:
                feasible = False
                break
        if not feasible:
            continue
        base0 = h30 + m * h10
        base1 = h31 + m * h11
        base2 = h32 + m * h12
        for n in range(n_lo, n_hi + 1):
            g0 = base0 + n * h20
            g1 = base1 + n * h21
            g2 = base2 + n * h22
            w = wid_of(g0, g1, g2)
            if w < best_w:
                best_w = w
                found = {(m, n): (g0, g1, g2)}
                limit, sq = m_cap(best_w)
            elif w == best_w:
                found[(m, n)] = (g0, g1, g2)
    return best_w, found


def minimize_over_plane(P: LatticePolytope, h1: Vec, h2: Vec, h3: Vec):
    """Integer (m, n) minimising width(m*h1 + n*h2 + h3), with the vector.

    Ties are broken by Euclidean length and then lexicographically, so the
    result is deterministic.
    """
    h1, h2, h3 = tuple(h1), tuple(h2), tuple(h3)
    _w, found = _plane_scan(P, h1, h2, h3)
    (m, n), g = min(found.items(), key=lambda kv: _vec_key(P, kv[1]))
    return m, n, g


# ---------------------------------------------------------------------------
# 3D reduction
# ---------------------------------------------------------------------------

def reduce_basis_3d(P: LatticePolytope, start=None) -> Basis:
    """Reduce the standard basis (or `start`) of Z^3 in the width norm of P.

    Iterates to a fixed point: sort rows by width, make the second row
    width-minimal in its coset line against the first, make the third row
    width-minimal over its coset plane, repeat.  Each accepted replacement
    strictly decreases a well-founded key, so the loop terminates; at the
    fixed point the three reducedness conditions hold by construction.
    """
    if P.dim != 3 or not P.is_full_dimensional:
        raise DegenerateError("3D reduction requires a full-dimensional polytope")
    rows = [tuple(r) for r in (start if start is not None else identity_matrix(3))]
    if mat_det(rows) not in (1, -1):
        raise DomainError("start is not a basis of Z^3")
    wid = {v: width_in_direction(P, v) for v in rows}
    while True:
        rows.sort(key=wid.__getitem__)
        changed = False
        m = _best_shift(P, rows[1], rows[0])
        cand = vec_add(rows[1], vec_scale(m, rows[0]))
        if cand != rows[1] and _vec_key(P, cand) < _vec_key(P, rows[1]):
            rows[1] = cand
            wid[cand] = width_in_direction(P, cand)
            changed = True
        _m, _n, g = minimize_over_plane(P, rows[0], rows[1], rows[2])
        if g != rows[2] and _vec_key(P, g) < _vec_key(P, rows[2]):
            rows[2] = g
            wid[g] = width_in_direction(P, g)
            changed = True
        if not changed:
            break
    return basis_for(P, rows, "reduced")


def is_reduced(P: LatticePolytope, basis) -> bool:
    """Check the three reducedness conditions of a basis of Z^3."""
    rows = basis.rows if isinstance(basis, Basis) else tuple(tuple(r) for r in basis)
    if mat_det(rows) not in (1, -1):
        raise DomainError("not a basis of Z^3")
    h1, h2, h3 = rows
    n1 = width_in_direction(P, h1)
    n2 = width_in_direction(P, h2)
    n3 = width_in_direction(P, h3)
    if not (n1 <= n2 <= n3):
        return False
    if width_in_direction(P, vec_add(h1, h2)) < n2:
        return False
    if width_in_direction(P, vec_add(h1, vec_neg(h2))) < n2:
        return False
    w, _found = _plane_scan(P, h1, h2, h3)
    return w == n3


def minkowski_upgrade(P: LatticePolytope, basis: Basis) -> Basis:
    """Upgrade a reduced basis to a Minkowski-reduced one.

    When |h3| >= |h1| + |h2| the input already is Minkowski reduced and is
    returned unchanged.  Otherwise the direction u of smallest width among
    {a*h1 + b*h2 + c*h3 : |a|=|b|=1, |c|=2} competes with h1 and h2; the two
    shortest of {h1, h2, u} followed by h3 form the upgraded basis.

    A basis flagged reduced (or better) is trusted; unflagged input is
    verified first.
    """
    if basis.level == "none" and not is_reduced(P, basis):
        raise DomainError("minkowski_upgrade requires a reduced basis")
    h1, h2, h3 = basis.rows
    n1, n2, n3 = basis.norms
    if n3 >= n1 + n2:
        return Basis(basis.rows, basis.norms, "minkowski")
    pool = []
    for a in (1, -1):
        for b in (1, -1):
            for c in (2, -2):
                v = vec_add(
                    vec_add(vec_scale(a, h1), vec_scale(b, h2)), vec_scale(c, h3)
                )
                pool.append(v)
    u = min(pool, key=lambda v: _vec_key(P, v))
    trio = [(width_in_direction(P, h1), 0, h1), (width_in_direction(P, h2), 1, h2), (width_in_direction(P, u), 2, u)]
    trio.sort(key=lambda t: t[:2])
    new_rows = (trio[0][2], trio[1][2], h3)
    if mat_det(new_rows) not in (1, -1):
        raise DomainError("upgrade produced a non-basis; input was not reduced")
    return basis_for(P, new_rows, "minkowski")


def minkowski_basis(P: LatticePolytope) -> Basis:
    """Reduce the standard basis and upgrade it to Minkowski reduced."""
    return minkowski_upgrade(P, reduce_basis_3d(P))


def lattice_width(P: LatticePolytope) -> tuple[int, Vec]:
    """Minimum width over all nonzero integer directions, with a witness.

    Degenerate polytopes have width zero along a normal to their affine
    hull; full-dimensional ones take the first vector of a reduced basis.
    """
    if not P.vertices:
        raise DomainError("empty polytope")
    if P.affine_dim < P.dim:
        n = P.equalities[0][0]
        return 0, canonical_direction(n)
    if P.dim == 2:
        b = gauss_reduce_2d(P)
        return b.norms[0], canonical_direction(b.rows[0])
    b = minkowski_basis(P)
    return b.norms[0], canonical_direction(b.rows[0])
