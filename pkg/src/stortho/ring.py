"""Exact arithmetic in Z/n, finite products of such rings, and localization of Z/n at a prime."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Callable, Iterator


class RingError(ValueError):
    pass


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class RingSpec:
    """Z/n (one factor) or a product Z/n_1 x ... x Z/n_k.

    Nested products are flattened on construction, so ``factors`` is always a
    tuple of moduli.
    """

    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors:
            raise RingError("product ring needs at least one factor")
        for n in self.factors:
            if int(n) != n or n < 2:
                raise RingError(f"modulus must be an integer >= 2, got {n!r}")

    @classmethod
    def modular(cls, n: int) -> RingSpec:
        return cls((int(n),))

    @classmethod
    def product(cls, specs: list[RingSpec]) -> RingSpec:
        if not specs:
            raise RingError("product ring needs at least one factor")
        return cls(tuple(n for s in specs for n in s.factors))

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        parts = [p.strip() for p in text.strip().split(" x ")]
        moduli = []
        for p in parts:
            m = re.fullmatch(r"Z/(\d+)", p)
            if m is None:
                raise RingError(f"cannot parse ring {text!r}: expected 'Z/<n>' joined by ' x '")
            moduli.append(int(m.group(1)))
        return cls(tuple(moduli))

    def __str__(self) -> str:
        return " x ".join(f"Z/{n}" for n in self.factors)

    @property
    def is_modular(self) -> bool:
        return len(self.factors) == 1

    @property
    def size(self) -> int:
        return math.prod(self.factors)

    @property
    def modulus(self) -> int:
        """Modulus N of the isomorphic cyclic ring Z/N.

        Only defined for Z/n and for products with pairwise coprime factors
        (Chinese remainder theorem); everything above the ring layer works in Z/N.
        """
        if self.is_modular:
            return self.factors[0]
        if reduce(math.gcd, self.factors) != 1 or any(
            math.gcd(a, b) != 1
            for k, a in enumerate(self.factors)
            for b in self.factors[k + 1:]
        ):
            raise RingError(f"{self} is not cyclic; matrices need pairwise coprime factors")
        return self.size

    def elem(self, value) -> RingElem:
        if self.is_modular:
            if isinstance(value, tuple):
                (value,) = value
            return RingElem(self, int(value) % self.factors[0])
        if isinstance(value, int):
            value = tuple(value for _ in self.factors)
        if len(value) != len(self.factors):
            raise RingError(f"{self} needs {len(self.factors)} components, got {value!r}")
        return RingElem(self, tuple(int(v) % n for v, n in zip(value, self.factors)))

    def zero(self) -> RingElem:
        return self.elem(0)

    def one(self) -> RingElem:
        return self.elem(1)

    def elements(self) -> Iterator[RingElem]:
        if self.is_modular:
            for a in range(self.factors[0]):
                yield RingElem(self, a)
        else:
            for t in product(*(range(n) for n in self.factors)):
                yield RingElem(self, t)

    def to_cyclic(self, x: RingElem) -> int:
        """Image of x in Z/modulus under the CRT isomorphism."""
        if x.spec != self:
            raise RingError("element belongs to a different ring")
        if self.is_modular:
            return x.value
        N = self.modulus
        total = 0
        for v, n in zip(x.value, self.factors):
            c = N // n
            total += v * c * pow(c, -1, n)
        return total % N


@dataclass(frozen=True)
class RingElem:
    spec: RingSpec
    value: int | tuple[int, ...]

    def _check(self, other: RingElem) -> None:
        if not isinstance(other, RingElem) or other.spec != self.spec:
            raise RingError(f"ring mismatch: {self.spec} vs {getattr(other, 'spec', other)}")

    def _zip(self, other: RingElem, f: Callable[[int, int], int]) -> RingElem:
        self._check(other)
        if self.spec.is_modular:
            return RingElem(self.spec, f(self.value, other.value) % self.spec.factors[0])
        return RingElem(
            self.spec,
            tuple(f(a, b) % n for a, b, n in zip(self.value, other.value, self.spec.factors)),
        )

    def __add__(self, other: RingElem) -> RingElem:
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: RingElem) -> RingElem:
        return self._zip(other, lambda a, b: a - b)

    def __mul__(self, other: RingElem) -> RingElem:
        return self._zip(other, lambda a, b: a * b)

    def __neg__(self) -> RingElem:
        return self.spec.zero() - self

    def __repr__(self) -> str:
        return f"{self.value}∈{self.spec}"


def arith(op: str, x: RingElem, y: RingElem | None = None) -> RingElem:
    if op == "neg":
        return -x
    if y is None:
        raise RingError(f"{op} needs two operands")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise RingError(f"unknown operation {op!r}")


def is_unit_int(a: int, n: int) -> bool:
    return math.gcd(a % n, n) == 1


def units(spec: RingSpec) -> set[RingElem]:
    if spec.is_modular:
        n = spec.factors[0]
        return {RingElem(spec, a) for a in range(n) if math.gcd(a, n) == 1}
    return {x for x in spec.elements() if all(math.gcd(v, n) == 1 for v, n in zip(x.value, spec.factors))}


def is_local(spec: RingSpec) -> bool:
    if not spec.is_modular:
        raise RingError("is_local is defined for Z/n only")
    return len(_prime_factors(spec.factors[0])) == 1


def is_prime(p: int) -> bool:
    return p >= 2 and _prime_factors(p) == [p]


def localize_at_prime(n: int, p: int) -> tuple[RingSpec, Callable[[int], int]]:
    """Z/n localized at the prime ideal (p): the ring Z/p^v with v the p-adic valuation of n.

    Returns the local ring and the canonical surjection Z/n -> Z/p^v on residues.
    """
    if not is_prime(p):
        raise RingError(f"{p} is not prime")
    if n % p != 0:
        raise RingError(f"{p} does not divide {n}: the localization is the zero ring")
    pv = p ** valuation(n, p)

    def to_local(a: int) -> int:
        return a % pv

    return RingSpec.modular(pv), to_local


def invert_away(n: int, f: int) -> int:
    """Modulus of Z/n[1/f]: the largest divisor of n coprime to f (1 means the zero ring)."""
    m = n
    for p in _prime_factors(n):
        if f % p == 0:
            m //= p ** valuation(n, p)
    return m
