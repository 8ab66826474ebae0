import numpy as np
import pytest

from stortho import starpres
from stortho.orthogroup import word_matrix
from stortho.starpres import (StarImages, StarIndex, abelianization_report, crossed_module_checks,
                              g_of_f_check, generation_shadow, map_G, star_generators, star_relators,
                              verify_star_relators_in_st)


@pytest.fixture(scope="module")
def images(f2, f2_orbit, f2_oracle):
    return StarImages(f2, f2_orbit, f2_oracle)


def test_generator_count(f2, f2_orbit):
    gens = star_generators(f2, f2_orbit)
    assert len(gens) == 1120
    idx = StarIndex(f2, f2_orbit)
    assert all(idx.index(g) == k for k, g in enumerate(gens[:50]))


def test_sampled_relators_vectorized(f2, f2_orbit, f2_oracle, images):
    rep = verify_star_relators_in_st(f2, f2_orbit, f2_oracle, sample=2000, images=images)
    assert rep["passed"]
    assert rep["word"]["2"]["instances"] == 2000


def test_reference_path_agrees(f2, f2_orbit, f2_oracle):
    """Slow path: push each relator word through G one letter at a time."""
    I = np.eye(6, dtype=np.int64)
    for r in star_relators(f2, f2_orbit, sample=60, seed=3):
        w = map_G(f2, r.word, f2_orbit)
        assert np.array_equal(word_matrix(f2, w), I)
        assert f2_oracle.is_identity(w)


def test_corrupted_image_is_caught(f2, f2_orbit, f2_oracle, images):
    """Negative control: swapping one generator's coset permutation must produce word failures."""
    bad = StarImages.__new__(StarImages)
    bad.__dict__.update(images.__dict__)
    P = images.P.copy()
    k = 7
    P[k] = P[k + 1]
    bad.P = P
    rep = verify_star_relators_in_st(f2, f2_orbit, f2_oracle, sample=3000, images=bad)
    assert not rep["passed"]
    assert sum(rep["word"][s]["failure_count"] for s in rep["word"]) > 0


def test_g_of_f(f2, f2_orbit):
    assert g_of_f_check(f2, f2_orbit)["passed"]


def test_generation_shadow(f2, f2_orbit, f2_oracle):
    rep = generation_shadow(f2, f2_orbit, f2_oracle)
    assert rep["passed"] and rep["instances"] == 1120


def test_crossed_module(f2, f2_orbit, f2_oracle):
    assert crossed_module_checks(f2, f2_orbit, f2_oracle, samples=200)["passed"]


def test_abelianizations_trivial(f2, f2_orbit):
    rep = abelianization_report(f2, f2_orbit)
    assert rep["st"]["trivial"] and rep["star"]["trivial"]


def test_schema_counts_small(f2, f2_orbit):
    assert sum(1 for _ in star_relators(f2, f2_orbit, schemas=(4,))) == 70
    assert sum(1 for _ in star_relators(f2, f2_orbit, schemas=(3,))) == 1260


@pytest.mark.slow
def test_f_direction_certificate(f2, f2_orbit, images):
    rep = starpres.f_direction_tc(f2, f2_orbit, images=images)
    assert rep["status"] == "complete" and rep["order"] == 20160 and rep["passed"]
