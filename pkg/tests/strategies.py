"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from stortho.quadmod import QuadSpace
from stortho.ring import RingSpec

moduli = st.sampled_from([2, 3, 4, 5, 6, 8, 9, 12])


@st.composite
def spaces(draw, max_ell: int = 3, max_r: int = 1, mods=moduli):
    n = draw(mods)
    ell = draw(st.integers(1, max_ell))
    r = draw(st.integers(0, max_r))
    q0 = tuple(draw(st.integers(0, n - 1)) for _ in range(r * (r + 1) // 2))
    return QuadSpace(RingSpec.modular(n), ell, r, q0)


def vectors(space: QuadSpace):
    return st.tuples(*[st.integers(0, space.n - 1)] * space.dim)


@st.composite
def space_and_vectors(draw, k: int = 2, **kw):
    space = draw(spaces(**kw))
    return (space, *[draw(vectors(space)) for _ in range(k)])
