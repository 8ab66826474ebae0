import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stortho import homotower
from stortho.homotower import (HomotopeScalar, LevelError, LocalizedGen, StagedWord, Tower, UncoveredError,
                               act_localized, costalk_generation, ev_stage, homotope_algebra_axioms,
                               transition, transition_scalar, verify_action_conjugation,
                               verify_extranaturality, verify_homotope_relations, verify_transitions)
from stortho.orthogroup import Long, SGen, Short
from stortho.steinberg import random_word

from .conftest import space_of


@given(st.integers(2, 30), st.integers(0, 100), st.integers(0, 100), st.integers(0, 100), st.integers(0, 30))
def test_homotope_product(n, a, b, c, s):
    x, y, z = (HomotopeScalar(v, s, n) for v in (a, b, c))
    assert (x * y).a == a * b * s % n
    assert (x * y) * z == x * (y * z)


@given(st.integers(2, 30), st.integers(0, 100), st.integers(1, 6), st.integers(1, 6))
def test_transition_scalar_is_multiplicative(n, a, s, t):
    x = HomotopeScalar(a, s * t, n)
    y = transition_scalar(x, s, t)
    assert y.a == a * t % n and y.s == s % n
    with pytest.raises(LevelError):
        transition_scalar(HomotopeScalar(a, s * t + 1, 2 * n * s * t + 1), s, t)


@pytest.mark.parametrize("space", [space_of(2), space_of(4, 3, 1, (1,))], ids=str)
def test_relations_every_level(space):
    for s in range(space.n):
        assert verify_homotope_relations(space, s)["passed"]


def test_transitions_z8():
    rep = verify_transitions(space_of(8), levels=(1, 2, 4), words=30)
    assert rep["passed"] and rep["functoriality"]["instances"] > 0


@given(st.integers(0, 10**6))
def test_ev_after_transition(seed):
    space = space_of(8)
    w = random_word(space, random.Random(seed), 6)
    top = StagedWord(w, 12)
    assert np.array_equal(ev_stage(space, transition(space, top, 4)), ev_stage(space, top))


def test_level_errors():
    space = space_of(4)
    with pytest.raises(LevelError):
        transition(space, StagedWord((), 3), 2)
    with pytest.raises(LevelError):
        act_localized(space, 2, LocalizedGen(Long(1, 2, 1), 1), StagedWord((), 3))


def test_uncovered_pairs_raise():
    space = space_of(4, 3, 1, (1,))
    with pytest.raises(UncoveredError):
        act_localized(space, 2, LocalizedGen(Long(1, 2, 1), 0), StagedWord((SGen(Long(2, 1, 1)),), 1))
    with pytest.raises(UncoveredError):
        act_localized(space, 2, LocalizedGen(Short(1, (1,)), 0), StagedWord((SGen(Short(-1, (1,))),), 1))


@pytest.mark.parametrize("n,f", [(27, 3), (12, 2)])
def test_action_matches_exact_conjugation(n, f):
    rep = verify_action_conjugation(Tower(n, f), samples=150, seed=1)
    assert rep["passed"] and rep["samples"] == 150


def test_mutated_ops_are_caught(monkeypatch):
    """Negative control: dropping the f^k factor from the pairing term must break conjugation."""
    real = homotower.homotope_ops

    def broken(space, f, depth, level):
        ops = real(space, f, depth, level)
        n = space.n
        return ops._replace(pair_acting=lambda m, m2: space.bilinear(space.embed_m0(m), space.embed_m0(m2)) % n,
                            long_long=lambda a, b: (a * b) % n)

    monkeypatch.setattr(homotower, "homotope_ops", broken)
    assert not verify_action_conjugation(Tower(12, 2), samples=150, seed=1)["passed"]


def test_extranaturality():
    assert verify_extranaturality(Tower(12, 2), samples=100)["passed"]


def test_costalks_and_axioms():
    rep = costalk_generation(12, 2)
    assert rep["passed"] and rep["towers"] == [3] and rep["premise_holds"] > 0
    assert homotope_algebra_axioms(8)["passed"]


def test_localized_modulus():
    assert Tower(12, 2).localized_modulus == 3
    assert Tower(27, 3).localized_modulus == 1
