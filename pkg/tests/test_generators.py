"""Instance generators: normal forms, seeded determinism, redraw policy."""

import pytest

from latsize.generators import (
    GenSpec,
    random_polytope,
    random_prism,
    random_unimodular_map,
    random_white,
    random_width_one,
    trial_rng,
    unimodular_prism,
    white_tetrahedron,
)
from latsize.polytope import DomainError, is_empty_polytope, mat_det
from latsize.reduction import lattice_width
import random


def test_white_normal_form():
    W = white_tetrahedron(0, 1)
    assert sorted(W.vertices) == [(0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0)]
    assert is_empty_polytope(W)
    assert lattice_width(W)[0] == 1


@pytest.mark.parametrize("p,q", [(1, 0), (7, 5), (14, 13)])
def test_white_empty_and_thin(p, q):
    W = white_tetrahedron(p, q)
    assert is_empty_polytope(W)
    assert lattice_width(W)[0] == 1
    assert len(W.vertices) == 4


def test_white_rejects_non_coprime():
    with pytest.raises(DomainError):
        white_tetrahedron(4, 2)
    with pytest.raises(DomainError):
        white_tetrahedron(0, 0)
    with pytest.raises(DomainError):
        white_tetrahedron(-1, 1)


def test_prism_shape_and_emptiness():
    P = unimodular_prism(2, 1, 1, 1)
    assert len(P.vertices) == 8
    assert is_empty_polytope(P)
    assert lattice_width(P)[0] == 1
    with pytest.raises(DomainError):
        unimodular_prism(2, 1, 1, 2)


def test_random_white_and_prism_streams():
    spec = GenSpec("white", 14, (), 5)
    a = random_white(spec, 3)
    assert a == random_white(spec, 3)
    spec_p = GenSpec("prism", 14, (), 5)
    b = random_prism(spec_p, 2)
    assert b == random_prism(spec_p, 2)
    assert is_empty_polytope(b)


def test_width_one_generator_properties():
    spec = GenSpec("width_one", 7, ((5, 8), (5, 8)), 99)
    for i in range(5):
        P = random_width_one(spec, i)
        assert P.is_full_dimensional
        xs = {v[0] for v in P.vertices}
        assert xs == {0, 1}
        ys = [abs(v[1]) for v in P.vertices] + [abs(v[2]) for v in P.vertices]
        assert max(ys) <= 7


def test_width_one_deterministic():
    spec = GenSpec("width_one", 7, ((3, 10), (3, 10)), 123)
    assert random_width_one(spec, 7) == random_width_one(spec, 7)
    assert random_width_one(spec, 7) != random_width_one(spec, 8)


def test_width_one_exhausts_retries_on_degenerate_setup():
    spec = GenSpec("width_one", 1, ((1, 1), (1, 1)), 0)
    with pytest.raises(DomainError):
        random_width_one(spec)


def test_random_polytope_properties():
    spec = GenSpec("general", 7, ((10, 15),), 77)
    seen = set()
    for i in range(4):
        P = random_polytope(spec, i)
        assert P.is_full_dimensional
        lo, hi = P.bounding_box()
        assert min(lo) >= -7 and max(hi) <= 7
        seen.add(P)
    assert len(seen) > 1
    assert random_polytope(spec, 0) == random_polytope(spec, 0)


def test_genspec_validation():
    with pytest.raises(DomainError):
        GenSpec("mystery", 7, (), 0)
    with pytest.raises(DomainError):
        GenSpec("general", 0, ((3, 5),), 0)
    with pytest.raises(DomainError):
        GenSpec("general", 7, ((5, 3),), 0)
    with pytest.raises(DomainError):
        random_polytope(GenSpec("width_one", 7, ((3, 5), (3, 5)), 0))


def test_trial_rng_split_streams():
    a = trial_rng(42, 0).getrandbits(64)
    b = trial_rng(42, 1).getrandbits(64)
    c = trial_rng(43, 0).getrandbits(64)
    assert len({a, b, c}) == 3
    assert trial_rng(42, 0).getrandbits(64) == a


def test_random_unimodular_map():
    rng = random.Random(4)
    for _ in range(40):
        T = random_unimodular_map(rng, 3)
        assert mat_det(T.matrix) in (1, -1)
        T2 = random_unimodular_map(rng, 2)
        assert mat_det(T2.matrix) in (1, -1)
