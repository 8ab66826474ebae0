import numpy as np
import pytest
from hypothesis import given

from stortho.quadmod import EnumerationBoundError, QuadSpace
from stortho.ring import RingSpec

from .strategies import space_and_vectors


@given(space_and_vectors(k=2))
def test_polarization(data):
    space, v, w = data
    vw = space.add(v, w)
    assert space.bilinear(v, w) == (space.q(vw) - space.q(v) - space.q(w)) % space.n


@given(space_and_vectors(k=2))
def test_array_forms_match_scalar(data):
    space, v, w = data
    V = np.array([v, w])
    assert space.q_array(V).tolist() == [space.q(v), space.q(w)]
    assert int(space.bilinear_array(V[:1], w)[0]) == space.bilinear(v, w)


@given(space_and_vectors(k=1))
def test_quadratic_homogeneity(data):
    space, v = data
    for a in range(space.n):
        assert space.q(space.scale(v, a)) == a * a * space.q(v) % space.n


def test_hyperbolic_basis():
    space = QuadSpace(RingSpec.modular(5), 3)
    for i in range(1, 4):
        assert space.q(space.basis(i)) == 0
        assert space.bilinear(space.basis(-i), space.basis(i)) == 1
    assert space.bilinear(space.basis(1), space.basis(2)) == 0


def test_isotropic_count_f2():
    # nonzero isotropic vectors of the split form on F_2^6: 2^5 + 2^2 - 1
    space = QuadSpace(RingSpec.modular(2), 3)
    assert len(space.isotropic()) - 1 == 35
    brute = [v for v in space.enumerate_vectors() if any(v) and
             sum(v[i] * v[5 - i] for i in range(3)) % 2 == 0]
    assert len(brute) == 35


def test_hyperbolic_members_match_pointwise():
    space = QuadSpace(RingSpec.modular(4), 2)
    members = space.hyperbolic_members()
    for v in space.enumerate_vectors():
        assert (v in members) == space.is_hyperbolic_member(v)


def test_bounds_and_validation():
    with pytest.raises(EnumerationBoundError):
        QuadSpace(RingSpec.modular(9), 3, 1, (1,)).all_vectors(bound=1000)
    with pytest.raises(ValueError):
        QuadSpace(RingSpec.modular(3), 3, 2, (1, 0))
    matrix = QuadSpace(RingSpec.modular(3), 1, 2, ((1, 2), (0, 1)))
    flat = QuadSpace(RingSpec.modular(3), 1, 2, (1, 2, 1))
    assert matrix.q0 == flat.q0
