"""The presentation St* on symbols X*(u, v) with u in the orbit of e_1 and v orthogonal to u.

Four relator families:
  1. X*(u, v + v') = X*(u, v) X*(u, v')
  2. X*(u, v) X*(u', v') X*(u, v)^-1 = X*(T(u, v) u', T(u, v) v')
  3. X*(u, v a) = X*(v, -u a) for (u, v) in the orbit of (e_1, e_2)
  4. X*(u, u a) = 1

F sends Steinberg generators to star generators and G sends X*(u, v) to the lifted word X(u, v).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .esdlift import x_esd_basis, x_lift
from .orthogroup import (
    Long,
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
from .steinberg import (
    WordOracle,
    alphabet,
    normalize,
    random_word,
    to_letters,
)
from .tc import Overflow, Presentation, abelianization_invariants, todd_coxeter

STAR_SCHEMAS = (1, 2, 3, 4)


class StarGen(NamedTuple):
    u: Vector
    v: Vector


StarWord = tuple[tuple[StarGen, int], ...]


class StarRelator(NamedTuple):
    schema: int
    params: tuple
    word: StarWord


def star_generators(space: QuadSpace, table: OrbitTable) -> list[StarGen]:
    """(u, v) for u in the orbit (sorted) and v in u^perp (enumeration order)."""
    return [StarGen(u, v) for u in sorted(table.witnesses) for v in space.perp(u)]


class StarIndex:
    """Generator list with vectorized lookup of (u, v) pairs by their codes."""

    def __init__(self, space: QuadSpace, table: OrbitTable):
        self.space = space
        self.table = table
        self.gens = star_generators(space, table)
        self.N = space.vector_count
        U = np.array([g.u for g in self.gens], dtype=np.int64)
        V = np.array([g.v for g in self.gens], dtype=np.int64)
        self.U, self.V = U, V
        codes = space.encode_array(U) * self.N + space.encode_array(V)
        self.order = np.argsort(codes, kind="stable")
        self.sorted_codes = codes[self.order]
        self._pos = {g: k for k, g in enumerate(self.gens)}

    def __len__(self) -> int:
        return len(self.gens)

    def index(self, g: StarGen) -> int:
        try:
            return self._pos[(tuple(g.u), tuple(g.v))]
        except KeyError:
            raise PreconditionError(f"{g} is not a star generator") from None

    def lookup(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Generator indices of the rows (u, v); -1 where the pair is not a generator."""
        codes = self.space.encode_array(U) * self.N + self.space.encode_array(V)
        at = np.searchsorted(self.sorted_codes, codes)
        at = np.minimum(at, len(self.sorted_codes) - 1)
        hit = self.sorted_codes[at] == codes
        return np.where(hit, self.order[at], -1)


def _star(u, v, exp: int = 1):
    return (StarGen(tuple(u), tuple(v)), exp)


def star_relators(space: QuadSpace, table: OrbitTable, schemas=STAR_SCHEMAS,
                  sample: int | None = None, seed: int = 0) -> Iterator[StarRelator]:
    """Relators LHS * RHS^-1; every instance, or `sample` seeded instances per schema."""
    rng = random.Random(seed)
    n = space.n
    us = sorted(table.witnesses)
    perps = {u: space.perp(u) for u in us}
    gens = [(u, v) for u in us for v in perps[u]]
    for schema in schemas:
        if schema == 1:
            if sample is None:
                it = ((u, a, b) for u in us for a in perps[u] for b in perps[u])
            else:
                it = ((u, rng.choice(perps[u]), rng.choice(perps[u]))
                      for u in (rng.choice(us) for _ in range(sample)))
            for u, a, b in it:
                yield StarRelator(1, (u, a, b), (_star(u, space.add(a, b)), _star(u, b, -1), _star(u, a, -1)))
        elif schema == 2:
            if sample is None:
                it = ((A, B) for A in gens for B in gens)
            else:
                it = ((rng.choice(gens), rng.choice(gens)) for _ in range(sample))
            for (u, v), (u2, v2) in it:
                T = esd_matrix(space, u, v)
                tu = tuple(int(c) for c in T @ np.asarray(u2) % n)
                tv = tuple(int(c) for c in T @ np.asarray(v2) % n)
                yield StarRelator(2, (u, v, u2, v2),
                                  (_star(u, v), _star(u2, v2), _star(u, v, -1), _star(tu, tv, -1)))
        elif schema == 3:
            pairs = sorted(pair_orbit(space, (space.basis(1), space.basis(2))))
            it = ((p, a) for p in pairs for a in range(n)) if sample is None else (
                (rng.choice(pairs), rng.randrange(n)) for _ in range(sample))
            for (u, v), a in it:
                yield StarRelator(3, (u, v, a), (_star(u, space.scale(v, a)), _star(v, space.scale(u, -a), -1)))
        elif schema == 4:
            it = ((u, a) for u in us for a in range(n)) if sample is None else (
                (rng.choice(us), rng.randrange(n)) for _ in range(sample))
            for u, a in it:
                yield StarRelator(4, (u, a), (_star(u, space.scale(u, a)),))
        else:
            raise ValueError(f"unknown star schema {schema}")


def map_F(space: QuadSpace, g: SGen) -> StarWord:
    """x_ij(a) -> X*(e_i, e_{-j} a), x_j(m) -> X*(e_{-j}, -m); exponents carried along."""
    lab = g.label
    if isinstance(lab, Long):
        u, v = space.basis(lab.i), space.scale(space.basis(-lab.j), lab.a)
    else:
        u, v = space.basis(-lab.j), space.neg(space.embed_m0(lab.m))
    return (_star(u, v, g.exp),)


def map_F_word(space: QuadSpace, w: Word) -> StarWord:
    return tuple(s for g in w for s in map_F(space, g))


def map_G(space: QuadSpace, w: StarWord, table: OrbitTable) -> Word:
    out: list = []
    for g, exp in w:
        lifted = x_lift(space, g.u, g.v, table).word
        out.extend(lifted if exp == 1 else inverse_word(lifted))
    return tuple(out)


# -- checks --------------------------------------------------------------------


@dataclass
class _Count:
    instances: int = 0
    failures: int = 0
    examples: list | None = None

    def add(self, ok: np.ndarray, describe) -> None:
        ok = np.asarray(ok, dtype=bool).reshape(-1)
        self.instances += int(ok.size)
        bad = np.flatnonzero(~ok)
        self.failures += int(bad.size)
        if self.examples is None:
            self.examples = []
        for k in bad[: max(0, 10 - len(self.examples))]:
            self.examples.append(describe(int(k)))

    def report(self) -> dict:
        return {"instances": self.instances, "failure_count": self.failures, "failures": self.examples or []}


def _vec(a) -> list[int]:
    return [int(c) for c in a]


class StarImages:
    """phi-matrices and coset permutations of G(X*(u, v)) for every generator."""

    def __init__(self, space: QuadSpace, table: OrbitTable, oracle: WordOracle | None = None):
        self.space = space
        self.index = StarIndex(space, table)
        self.words = [x_lift(space, g.u, g.v, table).word for g in self.index.gens]
        self.E = np.array([word_matrix(space, w) for w in self.words])
        self.Einv = np.array([word_matrix(space, inverse_word(w)) for w in self.words])
        self.T = np.array([esd_matrix(space, g.u, g.v) for g in self.index.gens])
        self.P = None
        if oracle is not None:
            dtype = np.uint16 if oracle.order < 2**16 else np.int32
            self.P = np.empty((len(self.words), oracle.order), dtype=dtype)
            for k, w in enumerate(self.words):
                self.P[k] = oracle.perm(w)


def _choose(rng: np.random.Generator, total: int, sample: int | None) -> np.ndarray:
    if sample is None or sample >= total:
        return np.arange(total)
    return np.sort(rng.choice(total, size=sample, replace=False))


def verify_star_relators_in_st(space: QuadSpace, table: OrbitTable, oracle: WordOracle | None = None,
                               sample: int | None = None, seed: int = 0,
                               images: StarImages | None = None) -> dict:
    """Push every star relator through G; decide it under phi and, with an oracle, in St itself."""
    n, d = space.n, space.dim
    rng = np.random.default_rng(seed)
    img = images or StarImages(space, table, oracle)
    idx = img.index
    K = len(idx)
    E, Einv, P = img.E, img.Einv, img.P
    I = np.eye(d, dtype=np.int64)
    lift = _Count()
    lift.add(np.all(E == img.T, axis=(1, 2)), lambda k: [_vec(idx.U[k]), _vec(idx.V[k])])
    phi = {s: _Count() for s in STAR_SCHEMAS}
    word = {s: _Count() for s in STAR_SCHEMAS} if P is not None else None
    base = P[:, 0].astype(np.int64) if P is not None else None

    # 1: X(u,v) X(u,v') = X(u, v+v')
    starts = np.flatnonzero(np.r_[True, np.any(idx.U[1:] != idx.U[:-1], axis=1)])
    blocks = list(zip(starts, np.r_[starts[1:], K]))
    per_u = (blocks[0][1] - blocks[0][0]) ** 2
    chosen = _choose(rng, len(blocks) * per_u, sample)
    for bnum, (lo, hi) in enumerate(blocks):
        m = hi - lo
        sel = chosen[(chosen >= bnum * m * m) & (chosen < (bnum + 1) * m * m)] - bnum * m * m
        if not len(sel):
            continue
        a, b = lo + sel // m, lo + sel % m
        c = idx.lookup(idx.U[a], (idx.V[a] + idx.V[b]) % n)
        desc = lambda k, a=a, b=b: [_vec(idx.U[a[k]]), _vec(idx.V[a[k]]), _vec(idx.V[b[k]])]  # noqa: E731
        ok = (c >= 0) & np.all(np.einsum("nij,njk->nik", E[a], E[b]) % n == E[np.maximum(c, 0)], axis=(1, 2))
        phi[1].add(ok, desc)
        if P is not None:
            c2 = P[b, base[a]].astype(np.int64)
            word[1].add((c >= 0) & (c2 == base[np.maximum(c, 0)]), desc)

    # 2: X(A) X(B) X(A)^-1 = X(T_A u', T_A v') for all pairs of generators
    chosen = _choose(rng, K * K, sample)
    bounds = np.searchsorted(chosen, np.arange(K + 1) * K)
    for A in range(K):
        B = chosen[bounds[A]:bounds[A + 1]] - A * K
        if not len(B):
            continue
        T = img.T[A]
        C = idx.lookup(idx.U[B] @ T.T % n, idx.V[B] @ T.T % n)
        desc = lambda k, A=A, B=B: [_vec(idx.U[A]), _vec(idx.V[A]), _vec(idx.U[B[k]]), _vec(idx.V[B[k]])]  # noqa: E731
        conj = np.einsum("ij,njk,kl->nil", E[A], E[B], Einv[A]) % n
        phi[2].add((C >= 0) & np.all(conj == E[np.maximum(C, 0)], axis=(1, 2)), desc)
        if P is not None:
            PA = P[A].astype(np.int64)
            PAinv = np.empty_like(PA)
            PAinv[PA] = np.arange(len(PA))
            c2 = P[B, base[A]].astype(np.int64)
            word[2].add((C >= 0) & (PAinv[c2] == base[np.maximum(C, 0)]), desc)

    # 3: X(u, va) = X(v, -ua) on the orbit of (e_1, e_2)
    pairs = sorted(pair_orbit(space, (space.basis(1), space.basis(2))))
    Up = np.array([p[0] for p in pairs], dtype=np.int64)
    Vp = np.array([p[1] for p in pairs], dtype=np.int64)
    chosen = _choose(rng, len(pairs) * n, sample)
    pk, a = chosen // n, chosen % n
    k1 = idx.lookup(Up[pk], Vp[pk] * a[:, None] % n)
    k2 = idx.lookup(Vp[pk], -Up[pk] * a[:, None] % n)
    desc = lambda k: [_vec(Up[pk[k]]), _vec(Vp[pk[k]]), int(a[k])]  # noqa: E731
    valid = (k1 >= 0) & (k2 >= 0)
    phi[3].add(valid & np.all(E[np.maximum(k1, 0)] == E[np.maximum(k2, 0)], axis=(1, 2)), desc)
    if P is not None:
        word[3].add(valid & (base[np.maximum(k1, 0)] == base[np.maximum(k2, 0)]), desc)

    # 4: X(u, ua) = 1
    us = np.array(sorted(table.witnesses), dtype=np.int64)
    chosen = _choose(rng, len(us) * n, sample)
    uk, a = chosen // n, chosen % n
    k = idx.lookup(us[uk], us[uk] * a[:, None] % n)
    desc = lambda j: [_vec(us[uk[j]]), int(a[j])]  # noqa: E731
    phi[4].add((k >= 0) & np.all(E[np.maximum(k, 0)] == I, axis=(1, 2)), desc)
    if P is not None:
        word[4].add((k >= 0) & (base[np.maximum(k, 0)] == 0), desc)

    report = {
        "space": str(space), "seed": seed, "generators": K,
        "mode": "exhaustive" if sample is None else f"sampled {sample} per schema",
        "lift": lift.report(),
        "phi": {str(s): c.report() for s, c in phi.items()},
    }
    if word is None:
        report["downgraded"] = "phi-only: no coset table supplied"
    else:
        report["word"] = {str(s): c.report() for s, c in word.items()}
        report["st_order"] = oracle.order
    counts = [lift] + list(phi.values()) + (list(word.values()) if word else [])
    report["passed"] = all(c.failures == 0 for c in counts)
    return report


def g_of_f_check(space: QuadSpace, table: OrbitTable) -> dict:
    """G(F(g)) normalizes to g for every generator label, every parameter, both exponents."""
    n = space.n
    checked, bad = 0, []
    labels = []
    for lab in alphabet(space):
        labels.append(lab)
        if isinstance(lab, Long):
            labels.append(Long(-lab.j, -lab.i, (-lab.a) % n))
    for lab in labels:
        for exp in (1, -1):
            g = SGen(lab, exp)
            lhs = normalize(space, map_G(space, map_F(space, g), table))
            checked += 1
            if lhs != normalize(space, (g,)):
                bad.append(str(g))
    return {"instances": checked, "failure_count": len(bad), "failures": bad[:10], "passed": not bad}


def generation_shadow(space: QuadSpace, table: OrbitTable, oracle: WordOracle, seed: int = 0) -> dict:
    """Each G(X*(u, v)) equals the conjugate w_g G(X*(e_1, g^-1 v)) w_g^-1 built from an independent witness.

    The second witness comes from a breadth-first search with a shuffled generator order, so
    the two sides differ as words; equality is decided in the regular representation.
    """
    rng = random.Random(seed)
    gens = elementary_generators(space)
    rng.shuffle(gens)
    other = orbit(space, space.basis(1), gens=gens)
    checked, bad = 0, []
    for g in star_generators(space, table):
        w = other.witness(g.u)
        v1 = apply_word(space, inverse_word(w), g.v)
        conj = tuple(w) + x_esd_basis(space, 1, v1) + inverse_word(w)
        checked += 1
        if not oracle.equal(x_lift(space, g.u, g.v, table).word, conj):
            bad.append([list(g.u), list(g.v)])
    return {"instances": checked, "failure_count": len(bad), "failures": bad[:10], "passed": not bad}


def crossed_module_checks(space: QuadSpace, table: OrbitTable, oracle: WordOracle | None = None,
                          samples: int = 1000, seed: int = 0, word_len: int = 4) -> dict:
    """(CM1) conjugating a lift by an elementary word moves its arguments; (CM2) the induced
    action of phi(w) on a word w' agrees with w w' w^-1."""
    rng = random.Random(seed)
    n = space.n
    us = sorted(table.witnesses)
    perps: dict = {}
    cm1_phi, cm1_word, cm2_phi, cm2_word = _Count(), _Count(), _Count(), _Count()
    for _ in range(samples):
        u = rng.choice(us)
        if u not in perps:
            perps[u] = space.perp(u)
        v = rng.choice(perps[u])
        g = random_elementary_word(space, rng, 3)
        gu, gv = apply_word(space, g, u), apply_word(space, g, v)
        lhs = tuple(g) + x_lift(space, u, v, table).word + inverse_word(g)
        rhs = x_lift(space, gu, gv, table).word
        desc = lambda k, u=u, v=v, g=g: [list(u), list(v), len(g)]  # noqa: E731
        cm1_phi.add([np.array_equal(word_matrix(space, lhs), esd_matrix(space, gu, gv))], desc)
        if oracle:
            cm1_word.add([oracle.equal(lhs, rhs)], desc)

        w = random_word(space, rng, word_len, 1)
        w2 = random_word(space, rng, word_len, 1)
        acted: list = []
        for h in w2:
            (sg, exp), = map_F(space, h)
            moved = x_lift(space, apply_word(space, w, sg.u), apply_word(space, w, sg.v), table).word
            acted.extend(moved if exp == 1 else inverse_word(moved))
        acted = tuple(acted)
        direct = tuple(w) + tuple(w2) + inverse_word(w)
        desc = lambda k, w=w, w2=w2: [len(w), len(w2)]  # noqa: E731
        cm2_phi.add([np.array_equal(word_matrix(space, acted), word_matrix(space, direct))], desc)
        if oracle:
            cm2_word.add([oracle.equal(acted, direct)], desc)
    out = {"space": str(space), "seed": seed, "samples": samples,
           "cm1_phi": cm1_phi.report(), "cm2_phi": cm2_phi.report()}
    parts = [cm1_phi, cm2_phi]
    if oracle:
        out["cm1_word"] = cm1_word.report()
        out["cm2_word"] = cm2_word.report()
        parts += [cm1_word, cm2_word]
    out["passed"] = all(c.failures == 0 for c in parts)
    return out


# -- presentations and abelianization ------------------------------------------


def star_presentation(space: QuadSpace, table: OrbitTable, relators: list[StarRelator],
                      index: StarIndex | None = None) -> Presentation:
    idx = index or StarIndex(space, table)
    words = [[2 * idx.index(g) + (0 if e == 1 else 1) for g, e in r.word] for r in relators]
    return Presentation(len(idx), words)


def stratified_star_sample(space: QuadSpace, table: OrbitTable, total: int = 10_000, seed: int = 0) -> list[StarRelator]:
    """Every relator of the two small families plus a seeded split of the rest between families 1 and 2."""
    small = list(star_relators(space, table, schemas=(3, 4)))
    rest = max(0, total - len(small))
    one = list(star_relators(space, table, schemas=(1,), sample=rest // 2, seed=seed))
    two = list(star_relators(space, table, schemas=(2,), sample=rest - rest // 2, seed=seed + 1))
    return (small + one + two)[:total]


def abelianization_report(space: QuadSpace, table: OrbitTable, st_cap: int = 10**6,
                          star_total: int = 10_000, seed: int = 0) -> dict:
    """Smith invariants of the St presentation (all relators) and of a seeded St* relator subset."""
    from .steinberg import steinberg_presentation

    pres, _, _ = steinberg_presentation(space, st_cap)
    st_inv = abelianization_invariants(pres)
    rels = stratified_star_sample(space, table, star_total, seed)
    sp = star_presentation(space, table, rels)
    star_inv = abelianization_invariants(sp)
    by_schema = {str(s): sum(1 for r in rels if r.schema == s) for s in STAR_SCHEMAS}

    def summary(inv):
        return {"torsion": [d for d in inv if d > 1], "free_rank": sum(1 for d in inv if d == 0),
                "trivial": all(d == 1 for d in inv)}

    out = {"space": str(space), "seed": seed,
           "st": {"generators": pres.ngens, "relators": len(pres.relators), **summary(st_inv)},
           "star": {"generators": sp.ngens, "relators": len(rels), "by_schema": by_schema, **summary(star_inv)}}
    out["passed"] = out["st"]["trivial"] and out["star"]["trivial"]
    return out


def shortest_star_relators(space: QuadSpace, table: OrbitTable, total: int, seed: int = 0,
                           images: StarImages | None = None) -> list[StarRelator]:
    """The `total` relators (all four families) whose G-images are shortest; ties broken by a seeded shuffle."""
    img = images or StarImages(space, table)
    idx = img.index
    n, K = space.n, len(idx)
    lengths = np.array([len(w) for w in img.words], dtype=np.int64)
    rng = np.random.default_rng(seed)
    cands: list[tuple[np.ndarray, np.ndarray, int]] = []  # (length, key, schema)

    # family 2, vectorized over all pairs: key = A * K + B
    C = np.empty((K, K), dtype=np.int64)
    for A in range(K):
        T = img.T[A]
        C[A] = idx.lookup(idx.U @ T.T % n, idx.V @ T.T % n)
    L2 = (2 * lengths[:, None] + lengths[None, :] + lengths[C]).reshape(-1)
    family1 = list(star_relators(space, table, schemas=(1, 3, 4)))
    L1 = np.array([sum(lengths[idx.index(g)] for g, _ in r.word) for r in family1], dtype=np.int64)
    allL = np.concatenate([L1, L2])
    tie = rng.random(len(allL))
    pick = np.lexsort((tie, allL))[:total]
    out = []
    for k in sorted(int(k) for k in pick):
        if k < len(family1):
            out.append(family1[k])
            continue
        A, B = divmod(k - len(family1), K)
        ga, gb, gc = idx.gens[A], idx.gens[B], idx.gens[int(C[A, B])]
        out.append(StarRelator(2, (ga.u, ga.v, gb.u, gb.v),
                               (_star(ga.u, ga.v), _star(gb.u, gb.v), _star(ga.u, ga.v, -1), _star(gc.u, gc.v, -1))))
    return out


def f_direction_tc(space: QuadSpace, table: OrbitTable, total: int = 10_000, seed: int = 0,
                   max_cosets: int = 500_000, images: StarImages | None = None) -> dict:
    """Coset enumeration of St* after eliminating every symbol through G.

    Substituting X*(u, v) by its G-image is a Tietze move valid in St*, so the group H on the
    Steinberg alphabet with relators G(r), r in any subset of the star relators, surjects onto
    St*. A finite H of order |St| therefore forces St* = St, and each Steinberg relator r,
    being G(F(r)), then holds in St* exactly when it holds in H.
    """
    from .steinberg import steinberg_presentation

    st_pres, labels, index = steinberg_presentation(space)
    rels = shortest_star_relators(space, table, total, seed, images)
    words = [to_letters(space, map_G(space, r.word, table), index) for r in rels]
    H = Presentation(len(labels), words)
    by_schema = {str(s): sum(1 for r in rels if r.schema == s) for s in STAR_SCHEMAS}
    out = {"space": str(space), "seed": seed, "star_relators": len(rels), "by_schema": by_schema,
           "h_relators": len(H.relators), "max_relator_length": max(map(len, H.relators), default=0)}
    try:
        t = todd_coxeter(H, max_cosets)
    except Overflow as exc:
        out.update(status="overflow", high_water=exc.high_water, passed=False)
        return out
    bad = sum(1 for r in st_pres.relators if not t.word_is_identity(r))
    out.update(status="complete", order=t.order, steinberg_relators=len(st_pres.relators),
               steinberg_relator_failures=bad, passed=bad == 0)
    return out


__all__ = [
    "StarGen", "StarRelator", "star_generators", "star_relators", "map_F", "map_G",
    "verify_star_relators_in_st", "crossed_module_checks", "g_of_f_check", "generation_shadow",
    "abelianization_report", "f_direction_tc", "STAR_SCHEMAS",
]
