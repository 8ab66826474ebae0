"""The quadratic module M = H^ell ⊥ M0 over Z/n.

Basis order is fixed: e_{-ell}, ..., e_{-1}, e_1, ..., e_ell, f_1, ..., f_r.
Vectors are tuples of canonical residues in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .ring import RingSpec

Vector = tuple[int, ...]

DEFAULT_ENUM_BOUND = 10**7


class EnumerationBoundError(RuntimeError):
    pass


def _upper_triangular(q0, r: int) -> tuple[tuple[int, ...], ...]:
    """Accept an r x r matrix or the row-major list of its upper-triangular entries."""
    if r == 0:
        return ()
    q0 = list(q0)
    if q0 and isinstance(q0[0], (list, tuple)):
        rows = [list(row) for row in q0]
        if len(rows) != r or any(len(row) != r for row in rows):
            raise ValueError(f"q0 must be {r}x{r}")
        for k in range(r):
            for l in range(k):
                if rows[k][l] != 0:
                    raise ValueError("q0 must be upper triangular")
        return tuple(tuple(int(x) for x in row) for row in rows)
    need = r * (r + 1) // 2
    if len(q0) != need:
        raise ValueError(f"q0 needs {need} upper-triangular entries for r={r}, got {len(q0)}")
    it = iter(q0)
    return tuple(
        tuple(int(next(it)) if l >= k else 0 for l in range(r)) for k in range(r)
    )


@dataclass(frozen=True)
class QuadSpace:
    ring: RingSpec
    ell: int
    r: int = 0
    q0: tuple[tuple[int, ...], ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        if self.r < 0:
            raise ValueError("r must be >= 0")
        object.__setattr__(self, "q0", _upper_triangular(self.q0, self.r))
        n = self.n
        object.__setattr__(
            self, "q0", tuple(tuple(x % n for x in row) for row in self.q0)
        )

    @property
    def n(self) -> int:
        return self.ring.modulus

    @property
    def dim(self) -> int:
        return 2 * self.ell + self.r

    @property
    def indices(self) -> tuple[int, ...]:
        """Hyperbolic indices in basis order: -ell, ..., -1, 1, ..., ell."""
        return tuple(range(-self.ell, 0)) + tuple(range(1, self.ell + 1))

    def __str__(self) -> str:
        s = f"{self.ring}, ell={self.ell}, r={self.r}"
        if self.r:
            s += f", q0={[list(row) for row in self.q0]}"
        return s

    # -- basis ------------------------------------------------------------

    def pos(self, i: int) -> int:
        """Coordinate position of e_i."""
        if i == 0 or abs(i) > self.ell:
            raise IndexError(f"hyperbolic index {i} out of range for ell={self.ell}")
        return self.ell + i if i < 0 else self.ell + i - 1

    def fpos(self, k: int) -> int:
        """Coordinate position of f_k (1-based)."""
        if not 1 <= k <= self.r:
            raise IndexError(f"f_{k} out of range for r={self.r}")
        return 2 * self.ell + k - 1

    def basis(self, i: int | str) -> Vector:
        """e_i for a signed integer i, or f_k given as the string 'f<k>'."""
        if isinstance(i, str):
            if not i.startswith("f"):
                raise IndexError(f"bad basis label {i!r}")
            p = self.fpos(int(i[1:]))
        else:
            p = self.pos(i)
        v = [0] * self.dim
        v[p] = 1
        return tuple(v)

    def zero(self) -> Vector:
        return (0,) * self.dim

    def embed_m0(self, m0: Sequence[int]) -> Vector:
        if len(m0) != self.r:
            raise ValueError(f"M0 vector needs {self.r} coordinates")
        return (0,) * (2 * self.ell) + tuple(x % self.n for x in m0)

    def coord(self, v: Vector, i: int) -> int:
        return v[self.pos(i)]

    def m0_part(self, v: Vector) -> tuple[int, ...]:
        return tuple(v[2 * self.ell:])

    def vec(self, coords: Sequence[int]) -> Vector:
        if len(coords) != self.dim:
            raise ValueError(f"vector needs {self.dim} coordinates, got {len(coords)}")
        return tuple(int(x) % self.n for x in coords)

    # -- linear structure -------------------------------------------------

    def add(self, v: Vector, w: Vector) -> Vector:
        n = self.n
        return tuple((a + b) % n for a, b in zip(v, w))

    def sub(self, v: Vector, w: Vector) -> Vector:
        n = self.n
        return tuple((a - b) % n for a, b in zip(v, w))

    def scale(self, v: Vector, a: int) -> Vector:
        n = self.n
        return tuple((x * a) % n for x in v)

    def neg(self, v: Vector) -> Vector:
        return self.scale(v, -1)

    # -- forms --------------------------------------------------------------

    @property
    def qmatrix(self) -> np.ndarray:
        """Upper-triangular coefficient matrix Q with q(v) = v^T Q v."""
        Q = self._cache.get("Q")
        if Q is None:
            d, ell = self.dim, self.ell
            Q = np.zeros((d, d), dtype=np.int64)
            for i in range(1, ell + 1):
                Q[self.pos(-i), self.pos(i)] = 1
            for k in range(self.r):
                for l in range(k, self.r):
                    Q[2 * ell + k, 2 * ell + l] = self.q0[k][l]
            Q.setflags(write=False)
            self._cache["Q"] = Q
        return Q

    @property
    def gram(self) -> np.ndarray:
        """Gram matrix of the bilinear form, Q + Q^T."""
        B = self._cache.get("B")
        if B is None:
            B = (self.qmatrix + self.qmatrix.T) % self.n
            B.setflags(write=False)
            self._cache["B"] = B
        return B

    def q(self, v: Vector) -> int:
        ell, n = self.ell, self.n
        total = 0
        for i in range(ell):
            total += v[i] * v[2 * ell - 1 - i]
        base = 2 * ell
        for k in range(self.r):
            row = self.q0[k]
            vk = v[base + k]
            if vk:
                for l in range(k, self.r):
                    if row[l]:
                        total += row[l] * vk * v[base + l]
        return total % n

    def bilinear(self, v: Vector, w: Vector) -> int:
        ell, n = self.ell, self.n
        total = 0
        for i in range(ell):
            j = 2 * ell - 1 - i
            total += v[i] * w[j] + v[j] * w[i]
        base = 2 * ell
        for k in range(self.r):
            row = self.q0[k]
            for l in range(k, self.r):
                c = row[l]
                if c:
                    total += c * (v[base + k] * w[base + l] + v[base + l] * w[base + k])
        return total % n

    def q_array(self, V: np.ndarray) -> np.ndarray:
        """q on the rows of an integer array."""
        return np.einsum("ij,jk,ik->i", V, self.qmatrix, V) % self.n

    def bilinear_array(self, V: np.ndarray, w: Vector | np.ndarray) -> np.ndarray:
        """<row, w> for each row of V."""
        return (V @ (self.gram @ np.asarray(w, dtype=np.int64))) % self.n

    # -- enumeration --------------------------------------------------------

    @property
    def vector_count(self) -> int:
        return self.n ** self.dim

    def _check_bound(self, bound: int) -> None:
        if self.vector_count > bound:
            raise EnumerationBoundError(
                f"{self} has {self.vector_count} vectors, over the enumeration bound {bound}"
            )

    def enumerate_vectors(self, bound: int = DEFAULT_ENUM_BOUND) -> Iterator[Vector]:
        self._check_bound(bound)
        return product(range(self.n), repeat=self.dim)

    def all_vectors(self, bound: int = DEFAULT_ENUM_BOUND) -> np.ndarray:
        """Every vector as a row, in the same order as enumerate_vectors."""
        self._check_bound(bound)
        V = self._cache.get("all")
        if V is None:
            n, d = self.n, self.dim
            idx = np.arange(n**d, dtype=np.int64)
            V = np.empty((n**d, d), dtype=np.int64)
            for c in range(d - 1, -1, -1):
                V[:, c] = idx % n
                idx //= n
            V.setflags(write=False)
            self._cache["all"] = V
        return V

    def encode(self, v: Sequence[int]) -> int:
        """Index of v in enumeration order."""
        code = 0
        n = self.n
        for x in v:
            code = code * n + x
        return code

    def encode_array(self, V: np.ndarray) -> np.ndarray:
        weights = self.n ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        return V @ weights

    def perp(self, u: Vector, bound: int = DEFAULT_ENUM_BOUND) -> list[Vector]:
        """All v with <u, v> = 0, in enumeration order."""
        V = self.all_vectors(bound)
        mask = self.bilinear_array(V, u) == 0
        return [tuple(int(x) for x in row) for row in V[mask]]

    def isotropic(self, bound: int = DEFAULT_ENUM_BOUND) -> list[Vector]:
        V = self.all_vectors(bound)
        return [tuple(int(x) for x in row) for row in V[self.q_array(V) == 0]]

    def hyperbolic_members(self, bound: int = DEFAULT_ENUM_BOUND) -> set[Vector]:
        """All v admitting w with q(v) = q(w) = 0 and <v, w> = 1 (exhaustive search)."""
        V = self.all_vectors(bound)
        iso = V[self.q_array(V) == 0]
        # <v, w> = v^T B w for all isotropic v, w at once, in blocks
        G = (iso @ self.gram) % self.n
        out = set()
        step = max(1, 2_000_000 // max(1, len(iso)))
        for start in range(0, len(iso), step):
            block = (G[start:start + step] @ iso.T) % self.n
            hit = (block == 1).any(axis=1)
            for row in iso[start:start + step][hit]:
                out.add(tuple(int(x) for x in row))
        return out

    def is_hyperbolic_member(self, v: Vector, bound: int = DEFAULT_ENUM_BOUND) -> bool:
        V = self.all_vectors(bound)
        if self.q(v) != 0:
            return False
        iso = V[self.q_array(V) == 0]
        return bool((self.bilinear_array(iso, v) == 1).any())


def q_form(space: QuadSpace, v: Vector) -> int:
    return space.q(v)


def bilinear(space: QuadSpace, v: Vector, w: Vector) -> int:
    return space.bilinear(v, w)


def enumerate_vectors(space: QuadSpace, bound: int = DEFAULT_ENUM_BOUND) -> Iterator[Vector]:
    return space.enumerate_vectors(bound)


def is_hyperbolic_member(space: QuadSpace, v: Vector, bound: int = DEFAULT_ENUM_BOUND) -> bool:
    return space.is_hyperbolic_member(v, bound)
