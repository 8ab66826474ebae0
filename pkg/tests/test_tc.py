import numpy as np
import pytest
from hypothesis import given, strategies as st

from stortho.tc import (CosetTable, Overflow, Presentation, abelianization_invariants, cyclic_reduce,
                        free_reduce, group_order, invert, todd_coxeter, word_is_identity)

S3 = "g0 g0\ng1 g1\ng0 g1 g0 g1 g0 g1\n"


def _dihedral(k: int) -> Presentation:
    return Presentation(2, [[0, 0], [2, 2], [0, 2] * k])


@pytest.mark.parametrize("strategy", ["hlt", "felsch"])
def test_small_orders(strategy):
    assert group_order(todd_coxeter(Presentation(1, [[0, 0, 0]]), strategy=strategy)) == 3
    assert todd_coxeter(Presentation.parse(S3), strategy=strategy).order == 6
    assert todd_coxeter(_dihedral(7), strategy=strategy).order == 14


@given(st.integers(2, 40))
def test_cyclic_orders(k):
    assert todd_coxeter(Presentation(1, [[0] * k])).order == k


def test_quaternion_and_a5():
    # <a, b | a^4, a^2 b^-2, b^-1 a b a>  and  <a, b | a^2, b^3, (ab)^5>
    q8 = Presentation(2, [[0] * 4, [0, 0, 3, 3], [3, 0, 2, 0]])
    assert todd_coxeter(q8).order == 8
    a5 = Presentation(2, [[0, 0], [2, 2, 2], [0, 2] * 5])
    assert todd_coxeter(a5).order == 60


def test_table_invariants():
    t = todd_coxeter(_dihedral(5))
    p = _dihedral(5)
    assert t.is_compatible(p.relators)
    assert word_is_identity(t, []) and word_is_identity(t, [0, 0])
    assert not word_is_identity(t, [0])
    # each column is a permutation and inverse columns undo it
    for x in range(2 * p.ngens):
        col = t.table[:, x]
        assert sorted(col) == list(range(t.order))
        assert np.array_equal(t.table[col, x ^ 1], np.arange(t.order))


def test_determinism():
    a = todd_coxeter(_dihedral(9)).table
    b = todd_coxeter(_dihedral(9)).table
    assert a.tobytes() == b.tobytes()


def test_overflow_reports_high_water():
    with pytest.raises(Overflow) as exc:
        todd_coxeter(Presentation(2, [[0, 0]]), max_cosets=50)
    assert exc.value.high_water >= 50


def test_dump_round_trip(tmp_path):
    t = todd_coxeter(Presentation.parse(S3))
    path = tmp_path / "t.bin"
    t.dump(path)
    assert path.stat().st_size == 6 * 4 * 4
    assert np.array_equal(CosetTable.load(path, 2).table, t.table)


def test_incomplete_table_rejected():
    with pytest.raises(ValueError):
        CosetTable(np.array([[0, -1]]), 1)


def test_parse_and_render():
    p = Presentation.parse("# generators: 3\ng0 G1 g2\n")
    assert p.ngens == 3 and p.relators == [[0, 3, 4]]
    assert Presentation.parse(p.to_text()).relators == p.relators
    with pytest.raises(ValueError):
        Presentation.parse("g0 h1")


@given(st.lists(st.integers(0, 5), max_size=20))
def test_free_reduction(word):
    w = free_reduce(word)
    assert all(a != b ^ 1 for a, b in zip(w, w[1:]))
    assert free_reduce(w + invert(w)) == []
    c = cyclic_reduce(word)
    assert not c or c[0] != c[-1] ^ 1


def test_abelianization():
    assert abelianization_invariants(Presentation(1, [[0, 0, 0]])) == [3]
    # S3 abelianizes to Z/2
    assert sorted(abelianization_invariants(Presentation.parse(S3))) == [1, 2]
    assert abelianization_invariants(Presentation(2, [])) == [0, 0]
