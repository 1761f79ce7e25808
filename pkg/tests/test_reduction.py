"""Width-norm basis reduction: Gauss pairs, 3D reduction, Minkowski upgrade."""

import itertools

import pytest

from latsize.polytope import (
    DegenerateError,
    DomainError,
    convex_hull,
    inradius_bound,
    mat_det,
    standard_simplex,
    unit_cube,
    vec_add,
    vec_neg,
    width_in_direction,
)
from latsize.reduction import (
    Basis,
    basis_for,
    basis_from_json,
    basis_to_json,
    gauss_reduce_2d,
    is_reduced,
    lattice_width,
    minimize_over_plane,
    minkowski_basis,
    minkowski_upgrade,
    reduce_basis_3d,
)
from latsize.latticesize import ls_bruteforce
from latsize.generators import random_unimodular_map, white_tetrahedron
from latsize.harness import reduction_gap_polytope

from conftest import (
    min_width_oracle,
    primitive_directions_in_box,
    random_full_polytope,
    width_oracle,
)
from math import isqrt


# ---------------------------------------------------------------- 2D

def test_gauss_square_already_reduced():
    b = gauss_reduce_2d(unit_cube(2))
    assert b.rows == ((1, 0), (0, 1))
    assert b.norms == (1, 1)


def test_gauss_segment_finds_width_zero_direction():
    seg = convex_hull([(0, 0), (5, 1)], 2)
    b = gauss_reduce_2d(seg)
    assert b.norms[0] == 0
    assert b.rows[0] in ((1, -5), (-1, 5))


def test_gauss_triangle_postconditions():
    tri = convex_hull([(0, 0), (3, 1), (1, 2)], 2)
    b = gauss_reduce_2d(tri)
    h1, h2 = b.rows
    n1, n2 = b.norms
    assert n1 <= n2
    assert width_in_direction(tri, vec_add(h1, h2)) >= n2
    assert width_in_direction(tri, vec_add(h1, vec_neg(h2))) >= n2
    # the second vector is minimal over its whole coset line
    for m in range(-3, 4):
        assert width_in_direction(tri, vec_add(h2, tuple(m * x for x in h1))) >= n2


def test_gauss_rejects_point():
    with pytest.raises(DegenerateError):
        gauss_reduce_2d(convex_hull([(2, 3)], 2))


def test_gauss_random_properties(rng):
    for _ in range(60):
        P = random_full_polytope(rng, 2, 6, 3, 8)
        start = random_unimodular_map(rng, 2).matrix
        b = gauss_reduce_2d(P, start)
        assert mat_det(b.rows) in (1, -1)
        h1, h2 = b.rows
        n1, n2 = b.norms
        assert n1 <= n2
        assert width_in_direction(P, vec_add(h1, h2)) >= n2
        assert width_in_direction(P, vec_add(h1, vec_neg(h2))) >= n2


def test_gauss_first_vector_is_shortest(rng):
    # cross-check the Gauss minimum against exhaustive enumeration
    for _ in range(20):
        P = random_full_polytope(rng, 2, 4, 3, 6)
        b = gauss_reduce_2d(P)
        assert b.norms[0] == min_width_oracle(P)


# ---------------------------------------------------------------- 3D

def test_reduce_cube_is_standard_basis():
    b = reduce_basis_3d(unit_cube(3))
    assert b.rows == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert b.norms == (1, 1, 1)
    assert b.level == "reduced"


def test_reduce_gap_polytope_keeps_standard_basis():
    b = reduce_basis_3d(reduction_gap_polytope())
    assert b.rows == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert b.norms == (1, 10, 11)


def test_reduce_random_cube_images_have_unit_norms(rng):
    from latsize.polytope import apply_map

    for _ in range(15):
        T = random_unimodular_map(rng, 3, steps=10)
        P = apply_map(unit_cube(3), T)
        b = reduce_basis_3d(P)
        assert b.norms == (1, 1, 1)
        assert all(width_in_direction(P, r) == 1 for r in b.rows)


def test_reduce_output_is_reduced(rng):
    for _ in range(25):
        P = random_full_polytope(rng, 3, 3, 4, 8)
        start = random_unimodular_map(rng, 3).matrix
        b = reduce_basis_3d(P, start)
        assert mat_det(b.rows) in (1, -1)
        assert is_reduced(P, b)


def test_reduce_rejects_degenerate():
    seg = convex_hull([(0, 0, 0), (1, 2, 3)], 3)
    with pytest.raises(DegenerateError):
        reduce_basis_3d(seg)


# ---------------------------------------------------------------- plane minimum

def test_minimize_over_plane_examples():
    e = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    m, n, g = minimize_over_plane(unit_cube(3), *e)
    assert (m, n, g) == (0, 0, (0, 0, 1))
    P = reduction_gap_polytope()
    m, n, g = minimize_over_plane(P, *e)
    assert width_in_direction(P, g) == 11


def test_minimize_over_plane_never_beats_origin(rng):
    for _ in range(25):
        P = random_full_polytope(rng, 3, 3, 4, 7)
        rows = random_unimodular_map(rng, 3).matrix
        _m, _n, g = minimize_over_plane(P, *rows)
        assert width_in_direction(P, g) <= width_in_direction(P, rows[2])


def test_minimize_over_plane_matches_exhaustive(rng):
    # small window double-check of the shrinking-window search
    for _ in range(10):
        P = random_full_polytope(rng, 3, 2, 4, 6)
        rows = random_unimodular_map(rng, 3, steps=5).matrix
        _m, _n, g = minimize_over_plane(P, *rows)
        got = width_in_direction(P, g)
        best = min(
            width_oracle(
                P,
                tuple(
                    m * a + n * b + c
                    for a, b, c in zip(rows[0], rows[1], rows[2])
                ),
            )
            for m in range(-12, 13)
            for n in range(-12, 13)
        )
        assert got == best


def test_minimize_over_plane_rejects_non_basis():
    with pytest.raises(DomainError):
        minimize_over_plane(
            unit_cube(3), (1, 0, 0), (0, 1, 0), (1, 1, 0)
        )


# ---------------------------------------------------------------- minkowski

def test_minkowski_cube_identity():
    b = reduce_basis_3d(unit_cube(3))
    up = minkowski_upgrade(unit_cube(3), b)
    assert up.rows == b.rows
    assert up.level == "minkowski"


def test_minkowski_gap_norms():
    P = reduction_gap_polytope()
    up = minkowski_basis(P)
    assert up.norms == (1, 10, 11)
    # dominated top norm: the reduced basis is returned unchanged
    assert up.rows == reduce_basis_3d(P).rows


def test_minkowski_dominated_norm_is_identity(rng):
    for _ in range(30):
        P = random_full_polytope(rng, 3, 4, 4, 8)
        b = reduce_basis_3d(P)
        if b.norms[2] >= b.norms[0] + b.norms[1]:
            up = minkowski_upgrade(P, b)
            assert up.rows == b.rows


def test_minkowski_rejects_unreduced():
    P = reduction_gap_polytope()
    bad = basis_for(P, ((0, 0, 1), (0, 1, 0), (1, 0, 0)))
    with pytest.raises(DomainError):
        minkowski_upgrade(P, bad)


def _check_minkowski_conditions(P, basis):
    """Definition check by exhaustive ball-bounded enumeration."""
    h1, h2, h3 = basis.rows
    n1, n2, n3 = basis.norms
    _c, r2 = inradius_bound(P)
    q = n3 * n3 / (4 * r2)
    box = isqrt(q.numerator // q.denominator) + 1
    from latsize.polytope import cross3, dot as vdot

    for h in primitive_directions_in_box(box, 3):
        w = width_oracle(P, h)
        assert w >= n1
        colinear1 = cross3(h, h1) == (0, 0, 0)
        if not colinear1 and w < n2:
            raise AssertionError(f"{h} beats h2")
        in_span12 = vdot(h, cross3(h1, h2)) == 0
        if not in_span12 and w < n3:
            raise AssertionError(f"{h} beats h3")


def test_minkowski_conditions_exhaustive(rng):
    for _ in range(8):
        P = random_full_polytope(rng, 3, 2, 4, 7)
        up = minkowski_basis(P)
        _check_minkowski_conditions(P, up)
    _check_minkowski_conditions(
        reduction_gap_polytope(), minkowski_basis(reduction_gap_polytope())
    )


def test_size_lower_bound_from_top_norm(rng):
    # any lattice-size value is at least the top Minkowski norm
    for _ in range(20):
        P = random_full_polytope(rng, 3, 3, 4, 7)
        up = minkowski_basis(P)
        assert ls_bruteforce(P).value >= up.norms[2]


# ---------------------------------------------------------------- is_reduced

def test_is_reduced_examples():
    e = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert is_reduced(unit_cube(3), e)
    assert is_reduced(reduction_gap_polytope(), e)
    assert not is_reduced(
        reduction_gap_polytope(), ((0, 0, 1), (0, 1, 0), (1, 0, 0))
    )
    with pytest.raises(DomainError):
        is_reduced(unit_cube(3), ((1, 0, 0), (0, 1, 0), (1, 1, 0)))


# ---------------------------------------------------------------- width

def test_lattice_width_examples():
    assert lattice_width(unit_cube(3))[0] == 1
    assert lattice_width(standard_simplex(3, 3))[0] == 3
    for p, q in [(0, 1), (2, 1), (7, 5), (9, 4)]:
        assert lattice_width(white_tetrahedron(p, q))[0] == 1


def test_lattice_width_degenerate():
    seg = convex_hull([(0, 0, 0), (1, 2, 3)], 3)
    w, h = lattice_width(seg)
    assert w == 0
    assert width_in_direction(seg, h) == 0


def test_lattice_width_matches_oracle(rng):
    for _ in range(15):
        P = random_full_polytope(rng, 3, 3, 4, 7)
        assert lattice_width(P)[0] == min_width_oracle(P)
    for _ in range(15):
        P = random_full_polytope(rng, 2, 6, 3, 7)
        assert lattice_width(P)[0] == min_width_oracle(P)


def test_width_direction_achieves_width(rng):
    for _ in range(15):
        P = random_full_polytope(rng, 3, 3, 4, 7)
        w, h = lattice_width(P)
        assert width_in_direction(P, h) == w


# ---------------------------------------------------------------- basis io

def test_basis_json_round_trip():
    P = reduction_gap_polytope()
    b = minkowski_basis(P)
    doc = basis_to_json(b)
    assert doc == {
        "rows": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "norms": [1, 10, 11],
        "level": "minkowski",
    }
    again = basis_from_json(P, doc)
    assert again.rows == b.rows and again.level == b.level


def test_basis_json_rejects_stale_norms():
    P = reduction_gap_polytope()
    doc = {"rows": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "norms": [1, 1, 1]}
    with pytest.raises(DomainError):
        basis_from_json(P, doc)


def test_basis_rejects_non_unimodular():
    with pytest.raises(DomainError):
        Basis(((1, 0, 0), (0, 1, 0), (1, 1, 0)), (1, 1, 1))
