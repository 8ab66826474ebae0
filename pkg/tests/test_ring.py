import pytest
from hypothesis import given, strategies as st

from stortho.ring import (RingError, RingSpec, arith, invert_away, is_local, is_unit_int,
                          localize_at_prime, units, valuation)


@given(st.integers(2, 60), st.integers(0, 200), st.integers(0, 200), st.integers(0, 200))
def test_ring_axioms(n, a, b, c):
    R = RingSpec.modular(n)
    x, y, z = R.elem(a), R.elem(b), R.elem(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x + (-x) == R.zero()
    assert arith("mul", x, R.one()) == x


@given(st.integers(2, 40))
def test_units_are_invertible(n):
    R = RingSpec.modular(n)
    U = units(R)
    assert all(any((u * v) == R.one() for v in R.elements()) for u in U)
    assert len(U) == sum(1 for a in range(n) if is_unit_int(a, n))


@given(st.integers(2, 30), st.integers(2, 30))
def test_crt_is_a_ring_map(m, k):
    R = RingSpec((m, k))
    if any(m % p == 0 and k % p == 0 for p in range(2, min(m, k) + 1)):
        with pytest.raises(RingError):
            R.modulus
        return
    N = R.modulus
    els = list(R.elements())
    images = {R.to_cyclic(x) for x in els}
    assert len(images) == N
    x, y = els[len(els) // 3], els[-1]
    assert R.to_cyclic(x * y) == R.to_cyclic(x) * R.to_cyclic(y) % N
    assert R.to_cyclic(x + y) == (R.to_cyclic(x) + R.to_cyclic(y)) % N


def test_parse_round_trip():
    for text in ["Z/2", "Z/12", "Z/3 x Z/4"]:
        assert str(RingSpec.parse(text)) == text
    with pytest.raises(RingError):
        RingSpec.parse("F_2")
    with pytest.raises(RingError):
        RingSpec.modular(1)


def test_locality():
    assert is_local(RingSpec.modular(9))
    assert not is_local(RingSpec.modular(12))


@given(st.integers(2, 200), st.sampled_from([2, 3, 5, 7]))
def test_localization_modulus(n, p):
    if n % p:
        with pytest.raises(RingError):
            localize_at_prime(n, p)
        return
    spec, to_local = localize_at_prime(n, p)
    q = spec.modulus
    assert q == p ** valuation(n, p) and n % q == 0 and (n // q) % p
    # surjective ring map
    assert {to_local(a) for a in range(n)} == set(range(q))
    assert to_local(7 * 5 % n) == to_local(7) * to_local(5) % q


def test_invert_away():
    assert invert_away(12, 2) == 3
    assert invert_away(27, 3) == 1
    assert invert_away(12, 5) == 12
