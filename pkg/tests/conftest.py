"""Shared fixtures and independent oracles.

The oracles here recompute quantities from first principles (plain scans
and closed formulas), deliberately not reusing the library's search code,
so tests compare two independent routes to the same value.
"""

from __future__ import annotations

import itertools
import random
from math import gcd, isqrt

import pytest

from latsize.polytope import (
    LatticePolytope,
    convex_hull,
    dot,
    inradius_bound,
)


def primitive_directions_in_box(bound: int, dim: int):
    """All sign-canonical primitive integer vectors with |h_i| <= bound."""
    rng = range(-bound, bound + 1)
    for h in itertools.product(rng, repeat=dim):
        if all(x == 0 for x in h):
            continue
        nz = next(x for x in h if x != 0)
        if nz < 0:
            continue
        g = 0
        for x in h:
            g = gcd(g, abs(x))
        if g == 1:
            yield h


def width_oracle(P: LatticePolytope, h) -> int:
    vals = [dot(h, v) for v in P.vertices]
    return max(vals) - min(vals)


def min_width_oracle(P: LatticePolytope) -> int:
    """Lattice width by exhaustive scan with the inscribed-ball cutoff."""
    e = [tuple(1 if j == i else 0 for j in range(P.dim)) for i in range(P.dim)]
    best = min(width_oracle(P, ei) for ei in e)
    _c, r2 = inradius_bound(P)
    # any h with |h|_2 > best/(2R) has width > best
    q = best * best / (4 * r2)
    box = isqrt(q.numerator // q.denominator) + 1
    for h in primitive_directions_in_box(box, P.dim):
        w = width_oracle(P, h)
        if w < best:
            best = w
    return best


def short_directions_oracle(P: LatticePolytope, l: int, slack: int = 2):
    """Directions of width < l by scanning a box widened by `slack`."""
    _c, r2 = inradius_bound(P)
    q = l * l / (4 * r2)
    box = isqrt(q.numerator // q.denominator) + slack
    out = []
    for h in primitive_directions_in_box(box, P.dim):
        if width_oracle(P, h) < l:
            out.append(h)
    return sorted(out)


def l1_oracle(points) -> int:
    pts = list(points)
    d = len(pts[0])
    return max(sum(p) for p in pts) - sum(
        min(p[i] for p in pts) for i in range(d)
    )


def ls_2d_oracle(P: LatticePolytope) -> int:
    """2D lattice size by enumerating unimodular pairs inside the ball bound."""
    corners = []
    for s1, s2 in itertools.product((1, -1), repeat=2):
        corners.append(l1_oracle([(s1 * x, s2 * y) for x, y in P.vertices]))
    best = min(corners)
    _c, r2 = inradius_bound(P)
    q = best * best / (4 * r2)
    box = isqrt(q.numerator // q.denominator) + 1
    cands = [
        h for h in primitive_directions_in_box(box, 2)
        if width_oracle(P, h) < best
    ]
    for g1, g2 in itertools.permutations(cands, 2):
        if g1[0] * g2[1] - g1[1] * g2[0] not in (1, -1):
            continue
        for s1, s2 in itertools.product((1, -1), repeat=2):
            r1 = (s1 * g1[0], s1 * g1[1])
            r2_ = (s2 * g2[0], s2 * g2[1])
            img = [(dot(r1, v), dot(r2_, v)) for v in P.vertices]
            val = l1_oracle(img)
            if val < best:
                best = val
    return best


def ls_planar_3d_oracle(P2: LatticePolytope) -> int:
    """Lattice size of a polygon viewed inside R^3.

    A unimodular 3x3 matrix acting on points (x, y, 0) only sees the 2D
    projections of its rows, and a triple of projections lifts to a
    unimodular matrix exactly when the gcd of its three 2x2 minors is 1.
    Projections need not be primitive or distinct, and one may be zero, so
    the candidate pool holds every integer vector in the ball bound.
    """
    corners = []
    for s1, s2 in itertools.product((1, -1), repeat=2):
        corners.append(l1_oracle([(s1 * x, s2 * y) for x, y in P2.vertices]))
    best = min(corners)  # realised by a sign-diagonal 3x3 lift
    _c, r2 = inradius_bound(P2)
    q = best * best / (4 * r2)
    box = isqrt(q.numerator // q.denominator) + 1
    cands = [(0, 0)]
    for h in itertools.product(range(-box, box + 1), repeat=2):
        if h != (0, 0) and width_oracle(P2, h) < best:
            cands.append(h)

    def minor(a, b):
        return a[0] * b[1] - a[1] * b[0]

    for g1, g2, g3 in itertools.combinations_with_replacement(cands, 3):
        m = gcd(gcd(abs(minor(g1, g2)), abs(minor(g1, g3))), abs(minor(g2, g3)))
        if m != 1:
            continue
        total = (g1[0] + g2[0] + g3[0], g1[1] + g2[1] + g3[1])
        val = (
            max(dot(total, v) for v in P2.vertices)
            - min(dot(g1, v) for v in P2.vertices)
            - min(dot(g2, v) for v in P2.vertices)
            - min(dot(g3, v) for v in P2.vertices)
        )
        if val < best:
            best = val
    return best


def random_full_polytope(rng: random.Random, dim: int, bound: int, n_lo: int, n_hi: int) -> LatticePolytope:
    """Small random full-dimensional polytope for property tests."""
    while True:
        n = rng.randrange(n_lo, n_hi + 1)
        pts = [
            tuple(rng.randrange(-bound, bound + 1) for _ in range(dim))
            for _ in range(n)
        ]
        P = convex_hull(pts, dim)
        if P.is_full_dimensional:
            return P


@pytest.fixture
def rng():
    return random.Random(20240817)
