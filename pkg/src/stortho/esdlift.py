"""Lifted ESD-transvections X(u, v) as Steinberg words, and their identity suite."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

import numpy as np

from .orthogroup import (
    OrbitTable,
    PreconditionError,
    SGen,
    Word,
    apply_word,
    elementary_generators,
    esd_matrix,
    inverse_word,
    orbit,
    pair_orbit,
    random_elementary_word,
    word_matrix,
)
from .quadmod import QuadSpace, Vector
from .ring import is_unit_int
from .steinberg import WordOracle, x, xs


@dataclass(frozen=True)
class LiftedTransvection:
    u: Vector
    v: Vector
    word: Word
    witness: Word


def basis_index(space: QuadSpace, u: Vector) -> int | None:
    """i when u = e_i, else None."""
    nz = [p for p, c in enumerate(u) if c]
    if len(nz) != 1 or u[nz[0]] != 1 or nz[0] >= 2 * space.ell:
        return None
    p = nz[0]
    return p - space.ell if p < space.ell else p - space.ell + 1


def x_esd_basis(space: QuadSpace, i: int, v: Vector) -> Word:
    """x_{-i}(-v0) * prod_{j != ±i} x_{i,-j}(v_j); the e_i-coordinate of v is dropped."""
    if space.coord(v, -i) != 0:
        raise PreconditionError(f"x_esd_basis needs <e_{i}, v> = 0")
    n = space.n
    out = []
    m0 = space.m0_part(v)
    if any(m0):
        out.append(xs(-i, tuple((-c) % n for c in m0)))
    for j in space.indices:
        if j in (i, -i):
            continue
        c = space.coord(v, j)
        if c:
            out.append(x(i, -j, c))
    return tuple(out)


def x_lift(space: QuadSpace, u: Vector, v: Vector, table: OrbitTable) -> LiftedTransvection:
    """X(u, v): the basis word when u = e_i, else w_g X(e_1, g^{-1} v) w_g^{-1} for the witness g of u."""
    u, v = tuple(u), tuple(v)
    if space.bilinear(u, v) != 0:
        raise PreconditionError(f"x_lift needs <u, v> = 0, got {space.bilinear(u, v)}")
    i = basis_index(space, u)
    if i is not None:
        return LiftedTransvection(u, v, x_esd_basis(space, i, v), ())
    if table.start != space.basis(1):
        raise PreconditionError("orbit table must start at e_1")
    g = table.witness(u)
    v1 = apply_word(space, inverse_word(g), v)
    return LiftedTransvection(u, v, tuple(g) + x_esd_basis(space, 1, v1) + inverse_word(g), g)


class _Suite:
    def __init__(self, name: str):
        self.name = name
        self.instances = 0
        self.failures: list = []
        self.skipped = 0

    def check(self, ok: bool, params) -> None:
        self.instances += 1
        if not ok and len(self.failures) < 50:
            self.failures.append(params)
        elif not ok:
            self.failures.append(None)

    def report(self) -> dict:
        out = {"instances": self.instances, "failures": [f for f in self.failures if f is not None],
               "failure_count": len(self.failures)}
        if self.skipped:
            out["undefined"] = self.skipped
        return out


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(c) for c in v]
    return v


def hyperbolic_pair_sample(space: QuadSpace, rng: random.Random, cap: int, samples: int):
    """The orbit of (e_1, e_2) when it has at most cap members, else seeded images g(e_1, e_2)."""
    start = (space.basis(1), space.basis(2))
    try:
        return sorted(pair_orbit(space, start, bound=cap))
    except MemoryError:
        out = []
        for _ in range(samples):
            g = random_elementary_word(space, rng, 6)
            out.append((apply_word(space, g, start[0]), apply_word(space, g, start[1])))
        return out


def lift_pairs(space: QuadSpace, table: OrbitTable) -> list[tuple[Vector, Vector]]:
    out = []
    for u in sorted(table.witnesses):
        out.extend((u, v) for v in space.perp(u))
    return out


def verify_esd_properties(space: QuadSpace, table: OrbitTable, oracle: WordOracle | None = None,
                          samples: int = 10_000, seed: int = 0, cap: int = 200_000) -> dict:
    """Identities (1)-(6) for lifted transvections under phi, and at word level when an oracle is given."""
    rng = random.Random(seed)
    n = space.n
    I = np.eye(space.dim, dtype=np.int64)
    pairs = lift_pairs(space, table)
    exhaustive = len(pairs) <= cap
    chosen = pairs if exhaustive else [rng.choice(pairs) for _ in range(samples)]

    def X(u, v) -> Word:
        return x_lift(space, u, v, table).word

    def phi(w) -> np.ndarray:
        return word_matrix(space, w)

    suites = {k: _Suite(k) for k in ("lift", "1", "2", "3", "4", "5", "6")}
    word_suites = {k: _Suite(k) for k in ("1", "2", "4", "5", "6")} if oracle else {}

    for u, v in chosen:
        suites["lift"].check(np.array_equal(phi(X(u, v)), esd_matrix(space, u, v)), _jsonable((u, v)))

    # (1) naturality under products of at most 3 elementary transvections
    for _ in range(samples if not exhaustive else min(samples, len(pairs))):
        u, v = rng.choice(pairs)
        g = random_elementary_word(space, rng, 3)
        gu, gv = apply_word(space, g, u), apply_word(space, g, v)
        conj = tuple(g) + X(u, v) + inverse_word(g)
        suites["1"].check(np.array_equal(phi(conj), esd_matrix(space, gu, gv)), _jsonable((u, v, len(g))))
        if oracle:
            word_suites["1"].check(oracle.equal(conj, X(gu, gv)), _jsonable((u, v, len(g))))

    us = sorted(table.witnesses)
    for u in us:
        for a in range(n):
            w = X(u, space.scale(u, a))
            suites["2"].check(np.array_equal(phi(w), I), _jsonable((u, a)))
            if oracle:
                word_suites["2"].check(oracle.is_identity(w), _jsonable((u, a)))

    # (3) unit scalars only, and only where both sides are defined
    unit_list = [a for a in range(n) if is_unit_int(a, n)]
    for u, v in chosen[: samples]:
        for a in unit_list:
            ua = space.scale(u, a)
            if ua not in table:
                suites["3"].skipped += 1
                continue
            lhs, rhs = X(ua, v), X(u, space.scale(v, a))
            suites["3"].check(np.array_equal(phi(lhs), phi(rhs)), _jsonable((u, v, a)))

    # (4) members of orthogonal hyperbolic pairs: the orbit of (e_1, e_2)
    for u, v in hyperbolic_pair_sample(space, rng, cap, samples):
        for a in range(n):
            lhs = X(u, space.scale(v, a))
            rhs = X(v, space.scale(u, -a))
            suites["4"].check(np.array_equal(phi(lhs), phi(rhs)), _jsonable((u, v, a)))
            if oracle:
                word_suites["4"].check(oracle.equal(lhs, rhs), _jsonable((u, v, a)))

    # (5) and (6): literal word equalities plus phi
    for i in space.indices:
        ei = space.basis(i)
        for j in space.indices:
            if j in (i, -i):
                continue
            for a in range(n):
                w = X(ei, space.scale(space.basis(j), a))
                expect = (x(i, -j, a),) if a else ()
                ok = w == expect and np.array_equal(phi(w), phi(expect))
                suites["5"].check(ok, [i, j, a])
                if oracle:
                    word_suites["5"].check(oracle.equal(w, (x(i, -j, a),)), [i, j, a])
        for m in product(range(n), repeat=space.r):
            w = X(ei, space.embed_m0(m))
            expect = (xs(-i, tuple((-c) % n for c in m)),) if any(m) else ()
            suites["6"].check(w == expect, [i, list(m)])
            if oracle:
                word_suites["6"].check(oracle.equal(w, (xs(-i, tuple((-c) % n for c in m)),)), [i, list(m)])

    report = {"space": str(space), "seed": seed, "exhaustive_lift": exhaustive,
              "phi": {k: s.report() for k, s in suites.items()}}
    if oracle:
        report["word"] = {k: s.report() for k, s in word_suites.items()}
    report["passed"] = all(s.report()["failure_count"] == 0 for s in list(suites.values()) + list(word_suites.values()))
    return report


def witness_independence(space: QuadSpace, samples: int = 1000, seed: int = 0,
                         oracle: WordOracle | None = None) -> dict:
    """Lifts built from BFS witnesses under two generator orders agree (phi, and word level with an oracle)."""
    rng = random.Random(seed)
    gens = elementary_generators(space)
    shuffled = gens[:]
    rng.shuffle(shuffled)
    t1 = orbit(space, space.basis(1))
    t2 = orbit(space, space.basis(1), gens=shuffled)
    pairs = lift_pairs(space, t1)
    distinct = [(u, v) for u, v in pairs if t1.witness(u) != t2.witness(u)]
    pool = distinct or pairs
    phi_s, word_s = _Suite("phi"), _Suite("word")
    for _ in range(samples):
        u, v = rng.choice(pool)
        w1 = x_lift(space, u, v, t1).word
        w2 = x_lift(space, u, v, t2).word
        phi_s.check(np.array_equal(word_matrix(space, w1), word_matrix(space, w2)), _jsonable((u, v)))
        if oracle:
            word_s.check(oracle.equal(w1, w2), _jsonable((u, v)))
    out = {"distinct_witness_pairs": len(distinct), "phi": phi_s.report()}
    if oracle:
        out["word"] = word_s.report()
    out["passed"] = phi_s.report()["failure_count"] == 0 and (not oracle or word_s.report()["failure_count"] == 0)
    return out
