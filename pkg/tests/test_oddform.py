from itertools import product

import numpy as np
import pytest

from stortho.oddform import (OddFormBoundError, check_delta_elements, compute_Delta, compute_R, in_R,
                             localization_commutes, orthogonal_pairs, r_closure)
from stortho.quadmod import QuadSpace
from stortho.ring import RingSpec


def _space(n, ell=1, r=0, q0=()):
    return QuadSpace(RingSpec.modular(n), ell, r, q0)


def _brute_R(space):
    n, d = space.n, space.dim
    mats = [np.array(e).reshape(d, d) for e in product(range(n), repeat=d * d)]
    return {(tuple(x.ravel()), tuple(y.ravel())) for x in mats for y in mats if in_R(space, x, y)}


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_R_matches_brute_force(n):
    space = _space(n)
    R = compute_R(space)
    d2 = space.dim ** 2
    mine = {(tuple(r[:d2]), tuple(r[d2:])) for r in R.tolist()}
    assert mine == _brute_R(space)


@pytest.mark.parametrize("n", [2, 3])
def test_Delta_matches_brute_force(n):
    space = _space(n)
    D = compute_Delta(space).elements()
    assert check_delta_elements(space, D)
    # brute force over every (x, y, z) with (x, y) in R; w is forced by x y + z + w = 0
    R = _brute_R(space)
    d = space.dim
    count = 0
    for x, y in R:
        X, Y = np.array(x).reshape(d, d), np.array(y).reshape(d, d)
        for z in product(range(n), repeat=d * d):
            Z = np.array(z).reshape(d, d)
            W = (-X @ Y - Z) % n
            row = np.concatenate([X.ravel(), Y.ravel(), Z.ravel(), W.ravel()])
            count += check_delta_elements(space, row[None])
    assert len(D) == count


def test_closure_and_orthogonal_pairs():
    space = _space(2)
    assert r_closure(space)["passed"]
    assert orthogonal_pairs(space)["passed"]
    with pytest.raises(OddFormBoundError):
        orthogonal_pairs(_space(5, 2))


def test_generators_only_contains_full():
    space = _space(3, 1, 1, (1,))
    R = compute_R(space)
    full = compute_Delta(space, "full", R)
    gen = compute_Delta(space, "generators_only", R)
    assert np.all(gen.solvable[full.solvable]) and gen.size >= full.size


@pytest.mark.parametrize("p", [2, 3])
def test_localization_z12(p):
    rep = localization_commutes(12, p)
    assert rep["passed"] and rep["R"]["equal"] and rep["Delta"]["equal"]
