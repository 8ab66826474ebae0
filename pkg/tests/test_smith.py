from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from stortho.smith import elementary_divisors, smith_diagonal

matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda k: st.lists(st.lists(st.integers(-9, 9), min_size=k, max_size=k), min_size=m, max_size=m)))


def _sympy_diagonal(rows):
    S = smith_normal_form(Matrix(rows), domain=ZZ)
    return sorted(abs(S[i, i]) for i in range(min(S.shape)))


@given(matrices)
def test_dense_matches_sympy(rows):
    assert sorted(abs(d) for d in smith_diagonal(rows)) == _sympy_diagonal(rows)


@given(matrices)
def test_sparse_matches_sympy(rows):
    k = len(rows[0])
    sparse = [{c: v for c, v in enumerate(r) if v} for r in rows]
    mine = sorted(abs(d) for d in elementary_divisors(sparse, k))
    ref = _sympy_diagonal(rows) + [0] * max(0, k - len(rows))
    assert mine == sorted(ref)


def test_divisibility_chain():
    d = smith_diagonal([[2, 0], [0, 3]])
    assert d == [1, 6]
