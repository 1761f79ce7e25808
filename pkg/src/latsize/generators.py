"""Deterministic instance generators.

Every generator is a pure function of (spec, trial index): the trial RNG is
derived from the seed with a splitmix64-style mixer, so any single trial of
an experiment can be regenerated in isolation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd

from .polytope import (
    DomainError,
    LatticePolytope,
    UnimodularMap,
    convex_hull,
    identity_matrix,
)

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

MAX_REDRAWS = 100


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def trial_rng(seed: int, index: int = 0) -> random.Random:
    """RNG for one trial: seed and index are mixed through splitmix64."""
    return random.Random(_splitmix64((seed & _MASK) ^ _splitmix64(index)))


@dataclass(frozen=True)
class GenSpec:
    """Parameters of a generator run.

    kind: one of "white", "prism", "width_one", "general";
    bounds: coordinate bound for drawn points (or for p, q);
    counts: one (lo, hi) range of point counts, or two for the layers;
    seed: base seed of the deterministic stream.
    """

    kind: str
    bounds: int = 7
    counts: tuple = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("white", "prism", "width_one", "general"):
            raise DomainError(f"unknown generator kind {self.kind!r}")
        if self.bounds < 1:
            raise DomainError("bounds must be at least 1")
        counts = tuple(tuple(c) for c in self.counts) if self.counts else ()
        object.__setattr__(self, "counts", counts)
        for lo, hi in counts:
            if lo > hi or lo < 1:
                raise DomainError(f"empty count range {(lo, hi)}")


def white_tetrahedron(p: int, q: int) -> LatticePolytope:
    """The empty tetrahedron conv{e1, e2, e3, (p, q, 1)} with gcd(p, q) = 1.

    Up to lattice equivalence these are all the empty tetrahedra in Z^3.
    """
    if p < 0 or q < 0 or gcd(p, q) != 1:
        raise DomainError("need nonnegative p, q with gcd(p, q) = 1")
    return convex_hull([(1, 0, 0), (0, 1, 0), (0, 0, 1), (p, q, 1)], 3)


def unimodular_prism(a: int, b: int, c: int, d: int) -> LatticePolytope:
    """Empty width-one polytope with unit-square bottom layer and its image
    under [[a, c], [b, d]] (determinant +-1) as top layer."""
    if a * d - b * c not in (1, -1):
        raise DomainError("layer map must have determinant +-1")
    cols = [
        (0, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (0, 1, 1),
        (1, 0, 0),
        (1, a, b),
        (1, c, d),
        (1, a + c, b + d),
    ]
    return convex_hull(cols, 3)


def random_white(spec: GenSpec, index: int = 0) -> LatticePolytope:
    """Empty tetrahedron with p, q drawn coprime in [0, bounds]."""
    rng = trial_rng(spec.seed, index)
    for _ in range(MAX_REDRAWS):
        p = rng.randrange(spec.bounds + 1)
        q = rng.randrange(spec.bounds + 1)
        if gcd(p, q) == 1:
            return white_tetrahedron(p, q)
    raise DomainError("failed to draw a coprime pair")


def random_prism(spec: GenSpec, index: int = 0) -> LatticePolytope:
    """Prism-like empty polytope with a, b, c, d drawn in [1, bounds] until
    the layer map is unimodular."""
    rng = trial_rng(spec.seed, index)
    for _ in range(MAX_REDRAWS * 10):
        a, b, c, d = (rng.randrange(1, spec.bounds + 1) for _ in range(4))
        if a * d - b * c in (1, -1):
            return unimodular_prism(a, b, c, d)
    raise DomainError("failed to draw a unimodular layer map")


def random_width_one(spec: GenSpec, index: int = 0) -> LatticePolytope:
    """Hull of two random layer polygons in the planes x=0 and x=1.

    Layer points have |y|, |z| <= bounds; the counts ranges give how many
    points each layer draws.  Degenerate (non-full-dimensional) draws are
    retried a bounded number of times.
    """
    if spec.kind != "width_one" or len(spec.counts) != 2:
        raise DomainError("random_width_one needs kind='width_one' and two count ranges")
    rng = trial_rng(spec.seed, index)
    b = spec.bounds
    (lo0, hi0), (lo1, hi1) = spec.counts
    for _ in range(MAX_REDRAWS):
        n0 = rng.randrange(lo0, hi0 + 1)
        n1 = rng.randrange(lo1, hi1 + 1)
        pts = [
            (0, rng.randrange(-b, b + 1), rng.randrange(-b, b + 1))
            for _ in range(n0)
        ] + [
            (1, rng.randrange(-b, b + 1), rng.randrange(-b, b + 1))
            for _ in range(n1)
        ]
        P = convex_hull(pts, 3)
        if P.is_full_dimensional:
            return P
    raise DomainError("kept drawing degenerate layer pairs; widen the parameters")


def random_polytope(spec: GenSpec, index: int = 0) -> LatticePolytope:
    """Hull of n random points in the integer box [-bounds, bounds]^3."""
    if spec.kind != "general" or len(spec.counts) != 1:
        raise DomainError("random_polytope needs kind='general' and one count range")
    rng = trial_rng(spec.seed, index)
    b = spec.bounds
    (lo, hi), = spec.counts
    for _ in range(MAX_REDRAWS):
        n = rng.randrange(lo, hi + 1)
        pts = [
            tuple(rng.randrange(-b, b + 1) for _ in range(3)) for _ in range(n)
        ]
        P = convex_hull(pts, 3)
        if P.is_full_dimensional:
            return P
    raise DomainError("kept drawing degenerate point sets; widen the parameters")


def random_unimodular_map(rng: random.Random, dim: int, steps: int = 8,
                          shift_bound: int = 3) -> UnimodularMap:
    """Random element of AGL(dim, Z) built from elementary row operations."""
    rows = [list(r) for r in identity_matrix(dim)]
    for _ in range(steps):
        op = rng.randrange(3)
        i = rng.randrange(dim)
        j = rng.randrange(dim)
        if op == 0 and i != j:
            k = rng.choice((-1, 1))
            rows[i] = [x + k * y for x, y in zip(rows[i], rows[j])]
        elif op == 1 and i != j:
            rows[i], rows[j] = rows[j], rows[i]
        elif op == 2:
            rows[i] = [-x for x in rows[i]]
    shift = tuple(rng.randrange(-shift_bound, shift_bound + 1) for _ in range(dim))
    return UnimodularMap(tuple(tuple(r) for r in rows), shift)
