import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stortho import esdlift
from stortho.esdlift import basis_index, verify_esd_properties, witness_independence, x_esd_basis, x_lift
from stortho.orthogroup import PreconditionError, esd_matrix, orbit, word_matrix
from stortho.steinberg import x, xs

from .conftest import space_of


def test_basis_index(f2):
    for i in (-3, -1, 1, 2, 3):
        assert basis_index(f2, f2.basis(i)) == i
    assert basis_index(f2, f2.add(f2.basis(1), f2.basis(2))) is None


@given(st.integers(0, 10**6))
def test_basis_word_sign_on_m0(seed):
    """With an M0 component the short factor must carry -v0; +v0 gives a different map."""
    space = space_of(5, 3, 1, (2,))
    rng = random.Random(seed)
    i = rng.choice(space.indices)
    v = [rng.randrange(5) for _ in range(space.dim)]
    v[space.pos(-i)] = 0
    v[-1] = rng.randrange(1, 5)
    v = tuple(v)
    w = x_esd_basis(space, i, v)
    target = esd_matrix(space, space.basis(i), v)
    assert np.array_equal(word_matrix(space, w), target)
    plus = tuple(xs(g.label.j, v[-1:]) if type(g.label).__name__ == "Short" else g for g in w)
    assert not np.array_equal(word_matrix(space, plus), target)


def test_lift_preconditions(f2, f2_orbit):
    with pytest.raises(PreconditionError):
        x_lift(f2, f2.basis(1), f2.basis(-1), f2_orbit)
    with pytest.raises(PreconditionError):
        x_esd_basis(f2, 1, f2.basis(-1))


def test_lift_all_pairs_f2(f2, f2_orbit):
    pairs = esdlift.lift_pairs(f2, f2_orbit)
    assert len(pairs) == 35 * 32
    for u, v in pairs:
        assert np.array_equal(word_matrix(f2, x_lift(f2, u, v, f2_orbit).word), esd_matrix(f2, u, v))


def test_properties_f2_word_level(f2, f2_orbit, f2_oracle):
    rep = verify_esd_properties(f2, f2_orbit, f2_oracle, samples=300)
    assert rep["passed"]
    assert rep["phi"]["lift"]["instances"] == 1120
    assert set(rep["word"]) == {"1", "2", "4", "5", "6"}


def test_properties_f3():
    space = space_of(3)
    rep = verify_esd_properties(space, orbit(space, space.basis(1)), samples=200)
    assert rep["passed"]


def test_witness_independence(f2, f2_oracle):
    rep = witness_independence(f2, samples=200, oracle=f2_oracle)
    assert rep["passed"] and rep["distinct_witness_pairs"] > 0


def test_basis_word_shape(f2):
    assert x_esd_basis(f2, 1, f2.basis(2)) == (x(1, -2, 1),)
    space = space_of(3, 3, 1, (1,))
    assert x_esd_basis(space, 2, space.embed_m0((1,))) == (xs(-2, (2,)),)
