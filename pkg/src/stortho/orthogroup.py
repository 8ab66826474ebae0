"""Orthogonal maps, ESD-transvections, elementary transvections, orbits and EO closure."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .quadmod import QuadSpace, Vector
from .ring import is_unit_int

DEFAULT_ORBIT_BOUND = 2_000_000
DEFAULT_GROUP_BOUND = 1_000_000


class PreconditionError(ValueError):
    pass


class Long(NamedTuple):
    i: int
    j: int
    a: int


class Short(NamedTuple):
    j: int
    m: tuple[int, ...]


GenLabel = Union[Long, Short]


class SGen(NamedTuple):
    """A generator x_ij(a) or x_j(m) raised to exponent +1 or -1."""

    label: GenLabel
    exp: int = 1

    def inverse(self) -> SGen:
        return SGen(self.label, -self.exp)


Word = tuple[SGen, ...]


def check_label(space: QuadSpace, label: GenLabel) -> None:
    if isinstance(label, Long):
        if label.i == label.j or label.i == -label.j:
            raise PreconditionError(f"x_ij needs i != ±j, got ({label.i}, {label.j})")
        space.pos(label.i), space.pos(label.j)
    else:
        space.pos(label.j)
        if len(label.m) != space.r:
            raise PreconditionError(f"short parameter needs {space.r} coordinates")


def negate_label(space: QuadSpace, label: GenLabel) -> GenLabel:
    n = space.n
    if isinstance(label, Long):
        return Long(label.i, label.j, (-label.a) % n)
    return Short(label.j, tuple((-x) % n for x in label.m))


def label_is_zero(label: GenLabel) -> bool:
    if isinstance(label, Long):
        return label.a == 0
    return not any(label.m)


def label_to_json(label: GenLabel, exp: int = 1, n: int | None = None) -> list:
    """["long", i, j, a] / ["short", j, [m]], with a -1 exponent folded into the parameter."""
    if isinstance(label, Long):
        a = label.a if exp == 1 else -label.a
        return ["long", label.i, label.j, a % n if n else a]
    m = label.m if exp == 1 else tuple(-x for x in label.m)
    return ["short", label.j, [x % n if n else x for x in m]]


# -- orthogonal maps --------------------------------------------------------


def _det_mod(M: np.ndarray, n: int) -> int:
    """Exact integer determinant (Bareiss) reduced mod n."""
    A = [[int(x) for x in row] for row in M]
    size = len(A)
    sign, prev = 1, 1
    for k in range(size - 1):
        if A[k][k] == 0:
            for r in range(k + 1, size):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return (sign * A[-1][-1]) % n if size else 1 % n


def is_orthogonal(space: QuadSpace, g: np.ndarray) -> bool:
    """Preserves q on basis vectors and <,> on distinct basis pairs, and is invertible."""
    g = np.asarray(g, dtype=np.int64) % space.n
    d, n = space.dim, space.n
    if g.shape != (d, d):
        return False
    cols = [tuple(int(x) for x in g[:, k]) for k in range(d)]
    Q = space.qmatrix
    B = space.gram
    for k in range(d):
        if space.q(cols[k]) != Q[k, k] % n:
            return False
    image_gram = (g.T @ B @ g) % n
    off = ~np.eye(d, dtype=bool)
    if not np.array_equal(image_gram[off], B[off]):
        return False
    return is_unit_int(_det_mod(g, n), n)


@dataclass(frozen=True, eq=False)
class OrthoMap:
    space: QuadSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64) % self.space.n
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, space: QuadSpace) -> OrthoMap:
        return cls(space, np.eye(space.dim, dtype=np.int64))

    def __matmul__(self, other: OrthoMap) -> OrthoMap:
        return OrthoMap(self.space, self.matrix @ other.matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, OrthoMap) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())

    def apply(self, v: Vector) -> Vector:
        return tuple(int(x) for x in (self.matrix @ np.asarray(v, dtype=np.int64)) % self.space.n)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(self.space.dim, dtype=np.int64)))

    def __repr__(self) -> str:
        return f"OrthoMap({self.matrix.tolist()})"


def esd_matrix(space: QuadSpace, u: Vector, v: Vector) -> np.ndarray:
    """m -> m + u<v,m> - v<u,m> - u q(v) <u,m>, unchecked."""
    n = space.n
    u_ = np.asarray(u, dtype=np.int64)
    v_ = np.asarray(v, dtype=np.int64)
    B = space.gram
    Bu = B @ u_
    Bv = B @ v_
    T = np.eye(space.dim, dtype=np.int64) + np.outer(u_, Bv) - np.outer(v_, Bu) - space.q(v) * np.outer(u_, Bu)
    return T % n


def esd_batch(space: QuadSpace, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """esd_matrix on paired rows of U and V, shape (N, d, d)."""
    n = space.n
    U = np.asarray(U, dtype=np.int64).reshape(-1, space.dim)
    V = np.asarray(V, dtype=np.int64).reshape(-1, space.dim)
    BU = U @ space.gram
    BV = V @ space.gram
    qv = space.q_array(V)
    T = (np.einsum("ni,nj->nij", U, BV) - np.einsum("ni,nj->nij", V, BU)
         - qv[:, None, None] * np.einsum("ni,nj->nij", U, BU))
    T += np.eye(space.dim, dtype=np.int64)
    return T % n


def esd(space: QuadSpace, u: Vector, v: Vector) -> OrthoMap:
    if space.q(u) != 0:
        raise PreconditionError(f"esd needs q(u) = 0, got q(u) = {space.q(u)}")
    if space.bilinear(u, v) != 0:
        raise PreconditionError(f"esd needs <u, v> = 0, got {space.bilinear(u, v)}")
    return OrthoMap(space, esd_matrix(space, u, v))


def label_matrix(space: QuadSpace, label: GenLabel) -> np.ndarray:
    """t_ij(a) = T(e_i, e_{-j} a) or t_j(m) = T(e_{-j}, -m)."""
    cache = space._cache.setdefault("labels", {})
    M = cache.get(label)
    if M is None:
        check_label(space, label)
        if isinstance(label, Long):
            M = esd_matrix(space, space.basis(label.i), space.scale(space.basis(-label.j), label.a))
        else:
            M = esd_matrix(space, space.basis(-label.j), space.neg(space.embed_m0(label.m)))
        M.setflags(write=False)
        cache[label] = M
    return M


def sgen_matrix(space: QuadSpace, g: SGen) -> np.ndarray:
    # t(a)^{-1} = t(-a) for both root types
    return label_matrix(space, g.label if g.exp == 1 else negate_label(space, g.label))


def t_long(space: QuadSpace, i: int, j: int, a: int) -> OrthoMap:
    if i == j or i == -j:
        raise PreconditionError(f"t_long needs i != ±j, got ({i}, {j})")
    return OrthoMap(space, label_matrix(space, Long(i, j, a % space.n)))


def t_short(space: QuadSpace, j: int, m0: Sequence[int]) -> OrthoMap:
    return OrthoMap(space, label_matrix(space, Short(j, tuple(x % space.n for x in m0))))


def word_matrix(space: QuadSpace, word: Iterable[SGen]) -> np.ndarray:
    n = space.n
    M = np.eye(space.dim, dtype=np.int64)
    for g in word:
        M = (M @ sgen_matrix(space, g)) % n
    return M


def apply_word(space: QuadSpace, word: Sequence[SGen], v: Vector) -> Vector:
    n = space.n
    x = np.asarray(v, dtype=np.int64)
    for g in reversed(word):
        x = (sgen_matrix(space, g) @ x) % n
    return tuple(int(c) for c in x)


def inverse_word(word: Sequence[SGen]) -> Word:
    return tuple(g.inverse() for g in reversed(word))


def random_elementary_word(space: QuadSpace, rng, max_len: int = 3) -> Word:
    """Product of at most max_len elementary transvections with uniform random parameters."""
    n = space.n
    gens = [g for g in elementary_generators(space) if g.exp == 1]
    out = []
    for _ in range(rng.randint(0, max_len)):
        label = rng.choice(gens).label
        if isinstance(label, Long):
            label = label._replace(a=rng.randrange(n))
        else:
            label = label._replace(m=tuple(rng.randrange(n) for _ in label.m))
        out.append(SGen(label, rng.choice((1, -1))))
    return tuple(out)


def decompose_esd(space: QuadSpace, i: int, m: Vector) -> list[GenLabel]:
    """Labels whose transvections multiply to T(e_i, m); the e_i-coordinate of m is ignored."""
    if space.coord(m, -i) != 0:
        raise PreconditionError(f"decompose_esd needs <e_{i}, m> = 0")
    out: list[GenLabel] = []
    m0 = space.m0_part(m)
    if any(m0):
        out.append(Short(-i, tuple((-x) % space.n for x in m0)))
    for j in space.indices:
        if j in (i, -i):
            continue
        c = space.coord(m, j)
        if c:
            out.append(Long(i, -j, c))
    return out


# -- orbits -----------------------------------------------------------------


def elementary_generators(space: QuadSpace) -> list[SGen]:
    """t_ij(1) for R2-canonical (i, j), t_j(f_k), each with both exponents."""
    out = []
    for i in space.indices:
        for j in space.indices:
            if i == j or i == -j:
                continue
            if (i, j) <= (-j, -i):
                out.append(SGen(Long(i, j, 1 % space.n), 1))
                out.append(SGen(Long(i, j, 1 % space.n), -1))
    for j in space.indices:
        for k in range(space.r):
            m = tuple(1 if t == k else 0 for t in range(space.r))
            out.append(SGen(Short(j, m), 1))
            out.append(SGen(Short(j, m), -1))
    return out


@dataclass
class OrbitTable:
    space: QuadSpace
    start: Vector
    witnesses: dict[Vector, Word] = field(default_factory=dict)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.witnesses

    def __len__(self) -> int:
        return len(self.witnesses)

    def __iter__(self):
        return iter(self.witnesses)

    def witness(self, v: Vector) -> Word:
        try:
            return self.witnesses[tuple(v)]
        except KeyError:
            raise PreconditionError(f"{v} is not in the orbit of {self.start}") from None

    def inverse_apply(self, u: Vector, v: Vector) -> Vector:
        """g^{-1} v for the witness g of u, via inverse generators."""
        return apply_word(self.space, inverse_word(self.witness(u)), v)

    def verify(self, sample: Iterable[Vector] | None = None) -> bool:
        keys = self.witnesses if sample is None else sample
        return all(apply_word(self.space, self.witnesses[k], self.start) == k for k in keys)

    def to_json(self) -> list[dict]:
        n = self.space.n
        return [
            {"vector": list(v), "witness": [label_to_json(g.label, g.exp, n) for g in w]}
            for v, w in self.witnesses.items()
        ]


def orbit(space: QuadSpace, start: Vector, gens: Sequence[SGen] | None = None,
          bound: int = DEFAULT_ORBIT_BOUND) -> OrbitTable:
    """Breadth-first closure of start under elementary transvections, with shortest witnesses."""
    if gens is None:
        gens = elementary_generators(space)
    n = space.n
    mats = [sgen_matrix(space, g) for g in gens]
    start = tuple(start)
    table = OrbitTable(space, start, {start: ()})
    frontier = [start]
    while frontier:
        nxt = []
        F = np.asarray(frontier, dtype=np.int64)
        for g, M in zip(gens, mats):
            images = (F @ M.T) % n
            for src, img in zip(frontier, images):
                key = tuple(int(x) for x in img)
                if key not in table.witnesses:
                    table.witnesses[key] = (g,) + table.witnesses[src]
                    nxt.append(key)
                    if len(table.witnesses) > bound:
                        raise MemoryError(f"orbit exceeds the bound {bound}")
        frontier = nxt
    return table


def pair_orbit(space: QuadSpace, start: tuple[Vector, Vector], gens: Sequence[SGen] | None = None,
               bound: int = DEFAULT_ORBIT_BOUND) -> set[tuple[Vector, Vector]]:
    """Orbit of a pair of vectors under the simultaneous elementary action."""
    if gens is None:
        gens = elementary_generators(space)
    n = space.n
    mats = [sgen_matrix(space, g) for g in gens]
    start = (tuple(start[0]), tuple(start[1]))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        U = np.asarray([p[0] for p in frontier], dtype=np.int64)
        V = np.asarray([p[1] for p in frontier], dtype=np.int64)
        for M in mats:
            Ui = (U @ M.T) % n
            Vi = (V @ M.T) % n
            for a, b in zip(Ui, Vi):
                key = (tuple(int(x) for x in a), tuple(int(x) for x in b))
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
                    if len(seen) > bound:
                        raise MemoryError(f"pair orbit exceeds the bound {bound}")
        frontier = nxt
    return seen


def enumerate_group(space: QuadSpace, bound: int = DEFAULT_GROUP_BOUND) -> list[OrthoMap]:
    """EO(M, q) as the multiplicative closure of the elementary transvections."""
    n = space.n
    gens = [sgen_matrix(space, g) for g in elementary_generators(space) if g.exp == 1]
    I = np.eye(space.dim, dtype=np.int64)
    seen = {I.tobytes(): I}
    frontier = np.asarray([I])
    while len(frontier):
        nxt = []
        for G in gens:
            prods = (G @ frontier) % n
            for P in prods:
                key = P.tobytes()
                if key not in seen:
                    seen[key] = P
                    nxt.append(P)
                    if len(seen) > bound:
                        raise MemoryError(f"group exceeds the bound {bound}")
        frontier = np.asarray(nxt) if nxt else np.empty((0, space.dim, space.dim), dtype=np.int64)
    return [OrthoMap(space, M) for M in seen.values()]
