"""Homotope stages of the Steinberg group and the action of localized generators on them.

A staged word at level s reads every parameter p as p^(s); evaluation sends x_ij(p^(s)) to
t_ij(p s) and x_j(m^(s)) to t_j(m s). Towers are indexed by explicit integer levels, and the
transition from level s s' to level s multiplies parameters by s'.

A localized generator x_ij(a / f^k) or x_j(m / f^k) acts on a word at level f^(2k) s' and
returns a word at level s'. The conjugation formulas consume at most two powers of f^k, so
every output parameter is an honest element of Z/n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

from .orthogroup import GenLabel, Long, SGen, Short, Word, word_matrix
from .quadmod import QuadSpace
from .ring import RingSpec, invert_away
from .steinberg import (
    SCHEMAS,
    ActionOps,
    conjugate_label,
    orient,
    relation_instances,
)


class LevelError(ValueError):
    pass


class UncoveredError(ValueError):
    """No conjugation formula applies (opposite long roots, or x_i acting on x_{-i})."""


# -- homotope scalars and vectors -----------------------------------------------


@dataclass(frozen=True)
class HomotopeScalar:
    """a^(s) in Z/n with the product a^(s) b^(s) = (a b s)^(s)."""

    a: int
    s: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.n)
        object.__setattr__(self, "s", self.s % self.n)

    def _same(self, other: HomotopeScalar) -> None:
        if (other.s, other.n) != (self.s, self.n):
            raise LevelError(f"level mismatch: {self.s} vs {other.s}")

    def __add__(self, other: HomotopeScalar) -> HomotopeScalar:
        self._same(other)
        return HomotopeScalar(self.a + other.a, self.s, self.n)

    def __neg__(self) -> HomotopeScalar:
        return HomotopeScalar(-self.a, self.s, self.n)

    def __mul__(self, other: HomotopeScalar | int) -> HomotopeScalar:
        if isinstance(other, HomotopeScalar):
            self._same(other)
            return HomotopeScalar(self.a * other.a * self.s, self.s, self.n)
        return HomotopeScalar(self.a * other, self.s, self.n)

    __rmul__ = __mul__

    def value(self) -> int:
        """The ring element a s that evaluation sees."""
        return (self.a * self.s) % self.n


@dataclass(frozen=True)
class HomotopeVector:
    """m^(s) with q(m^(s)) = (q(m) s)^(s) and <m^(s), m'^(s)> = (<m, m'> s)^(s)."""

    space: QuadSpace
    m: tuple
    s: int

    def _same(self, other) -> None:
        if other.s % self.space.n != self.s % self.space.n:
            raise LevelError(f"level mismatch: {self.s} vs {other.s}")

    def __add__(self, other: HomotopeVector) -> HomotopeVector:
        self._same(other)
        return HomotopeVector(self.space, self.space.add(self.m, other.m), self.s)

    def scale(self, c: HomotopeScalar | int) -> HomotopeVector:
        """m^(s) a^(s) = (m a s)^(s); a plain ring element acts without the level factor."""
        if isinstance(c, HomotopeScalar):
            self._same(c)
            return HomotopeVector(self.space, self.space.scale(self.m, c.a * self.s), self.s)
        return HomotopeVector(self.space, self.space.scale(self.m, c), self.s)

    def q(self) -> HomotopeScalar:
        return HomotopeScalar(self.space.q(self.m) * self.s, self.s, self.space.n)

    def bilinear(self, other: HomotopeVector) -> HomotopeScalar:
        self._same(other)
        return HomotopeScalar(self.space.bilinear(self.m, other.m) * self.s, self.s, self.space.n)


def transition_scalar(x: HomotopeScalar, s: int, s_prime: int) -> HomotopeScalar:
    """a^(s s') -> (a s')^(s)."""
    if (s * s_prime - x.s) % x.n:
        raise LevelError(f"level {x.s} is not {s} * {s_prime} mod {x.n}")
    return HomotopeScalar(x.a * s_prime, s, x.n)


# -- staged words ---------------------------------------------------------------


@dataclass(frozen=True)
class StagedWord:
    """A Steinberg word whose parameters are read at the integer level `level`."""

    word: Word
    level: int

    def __len__(self) -> int:
        return len(self.word)


def _scale_label(label: GenLabel, c: int, n: int) -> GenLabel:
    if isinstance(label, Long):
        return Long(label.i, label.j, (label.a * c) % n)
    return Short(label.j, tuple((x * c) % n for x in label.m))


def scale_word(w: Word, c: int, n: int) -> Word:
    return tuple(SGen(_scale_label(g.label, c, n), g.exp) for g in w)


def transition(space: QuadSpace, w: StagedWord, s_prime: int) -> StagedWord:
    """From level s s' to level s: every parameter is multiplied by s'."""
    if s_prime == 0 or w.level % s_prime:
        raise LevelError(f"level {w.level} is not divisible by {s_prime}")
    return StagedWord(scale_word(w.word, s_prime, space.n), w.level // s_prime)


def ev_stage(space: QuadSpace, w: StagedWord) -> np.ndarray:
    """x_ij(a^(s)) -> t_ij(a s), x_j(m^(s)) -> t_j(m s)."""
    return word_matrix(space, scale_word(w.word, w.level, space.n))


def verify_homotope_relations(space: QuadSpace, s: int, cap: int = 10**6, sample: int = 10**5,
                              seed: int = 0) -> dict:
    """Every R1-R9 instance with homotope parameters at level s evaluates to the identity."""
    n = space.n
    I = np.eye(space.dim, dtype=np.int64)
    out = {}
    for schema in SCHEMAS:
        count, bad = 0, []
        for inst in relation_instances(space, schema, level=s, cap=cap, sample=sample, seed=seed):
            count += 1
            if not np.array_equal(ev_stage(space, StagedWord(inst.word, s)), I):
                if len(bad) < 10:
                    bad.append(repr(inst.params))
        out[schema] = {"instances": count, "failure_count": len(bad), "failures": bad}
    return {"space": str(space), "level": s % n, "schemas": out,
            "passed": all(v["failure_count"] == 0 for v in out.values())}


def verify_transitions(space: QuadSpace, levels=(1, 2, 4), words: int = 200, seed: int = 0,
                       max_len: int = 6) -> dict:
    """Functoriality of transitions and ev_s(transition(w)) = ev_{s s'}(w) for every factorization
    drawn from `levels`, on all single generators and on seeded words."""
    from .steinberg import alphabet, random_word

    rng = random.Random(seed)
    # every single generator in both exponents, then seeded longer words
    sample = [(SGen(lab, e),) for lab in alphabet(space) for e in (1, -1)]
    sample += [random_word(space, rng, max_len) for _ in range(words)]
    functor, square = 0, 0
    fbad, sbad = [], []
    for s, s1, s2 in product(levels, repeat=3):
        for w in sample:
            top = StagedWord(w, s * s1 * s2)
            one = transition(space, transition(space, top, s2), s1)
            both = transition(space, top, s1 * s2)
            functor += 1
            if one != both:
                fbad.append([s, s1, s2])
            square += 1
            if not np.array_equal(ev_stage(space, both), ev_stage(space, top)):
                sbad.append([s, s1, s2])
    return {"space": str(space), "levels": list(levels),
            "functoriality": {"instances": functor, "failure_count": len(fbad), "failures": fbad[:10]},
            "evaluation": {"instances": square, "failure_count": len(sbad), "failures": sbad[:10]},
            "passed": not fbad and not sbad}


# -- localized generators -------------------------------------------------------


class LocalizedGen(NamedTuple):
    """x_ij(a / f^depth) or x_j(m / f^depth), with exponent ±1."""

    label: GenLabel
    depth: int
    exp: int = 1


def homotope_ops(space: QuadSpace, f: int, depth: int, level: int) -> ActionOps:
    """Level-shifting scalar maps for an acting denominator f^depth and input level f^(2 depth) s'.

    Output parameters are read at level s'.
    """
    n = space.n
    fk = pow(f, depth, n)
    f2k = pow(f, 2 * depth, n)
    L = level % n

    def qm(m):
        return space.q(space.embed_m0(m))

    return ActionOps(
        keep=lambda label: _scale_label(label, f2k, n),
        long_long=lambda a, b: (a * b * fk) % n,
        q_acted_times=lambda m, a: (qm(m) * L * a * fk) % n,
        acted_m_times=lambda m, a: tuple((c * a * fk) % n for c in m),
        pair_acting=lambda m, m2: (space.bilinear(space.embed_m0(m), space.embed_m0(m2)) * fk) % n,
        q_acting_times=lambda m, a: (qm(m) * a) % n,
        acting_m_times=lambda m, a: tuple((c * a * fk) % n for c in m),
    )


def _negate(space: QuadSpace, label: GenLabel) -> GenLabel:
    n = space.n
    if isinstance(label, Long):
        return Long(label.i, label.j, (-label.a) % n)
    return Short(label.j, tuple((-x) % n for x in label.m))


def _covered(g: GenLabel, h: GenLabel, n: int) -> bool:
    if isinstance(g, Long) and isinstance(h, Long):
        return not any((hk, hl) == (gj, gi) for gi, gj, _ in orient(g, n) for hk, hl, _ in orient(h, n))
    if isinstance(g, Short) and isinstance(h, Short):
        return h.j != -g.j
    return True


def act_localized(space: QuadSpace, f: int, g: LocalizedGen, w: StagedWord) -> StagedWord:
    """Conjugate a staged word at level f^(2 depth) s' by a localized generator; result at level s'."""
    n = space.n
    f2k = f ** (2 * g.depth)
    if w.level % f2k:
        raise LevelError(f"level {w.level} is not of the form f^{2 * g.depth} s'")
    out_level = w.level // f2k
    glabel = g.label if g.exp == 1 else _negate(space, g.label)
    ops = homotope_ops(space, f, g.depth, w.level)
    out: list[SGen] = []
    for h in w.word:
        if not _covered(glabel, h.label, n):
            raise UncoveredError(f"no formula for {glabel} acting on {h.label}")
        if isinstance(glabel, Short) and isinstance(h.label, Short) and h.label.j == glabel.j:
            image = [ops.keep(h.label)]
        else:
            image = conjugate_label(space, glabel, h.label, ops)
            if image is None:
                # same long root: the two commute
                image = [ops.keep(h.label)]
        piece = tuple(SGen(lab, 1) for lab in image)
        out.extend(piece if h.exp == 1 else tuple(SGen(p.label, -1) for p in reversed(piece)))
    return StagedWord(tuple(out), out_level)


def act_localized_word(space: QuadSpace, f: int, gs: list[LocalizedGen], w: StagedWord) -> StagedWord:
    """Act by the product gs[0] gs[1] ..., innermost (rightmost) generator first."""
    for g in reversed(gs):
        w = act_localized(space, f, g, w)
    return w


# -- exact oracle over Z[1/f] -------------------------------------------------------


def _exact_esd(space: QuadSpace, u: list, v: list) -> np.ndarray:
    """The transvection formula over Q with the integer Gram matrix and q0."""
    d = space.dim
    Q = space.qmatrix.astype(object)
    B = Q + Q.T
    u = np.array(u, dtype=object)
    v = np.array(v, dtype=object)
    qv = v @ Q @ v
    Bu, Bv = B @ u, B @ v
    T = np.eye(d, dtype=int).astype(object) + np.outer(u, Bv) - np.outer(v, Bu) - qv * np.outer(u, Bu)
    return T


def exact_label_matrix(space: QuadSpace, label: GenLabel, c: Fraction | int) -> np.ndarray:
    """t_ij(a c) or t_j(m c) over Q, from integer lifts of the parameters."""
    d = space.dim
    if isinstance(label, Long):
        u = [Fraction(0)] * d
        u[space.pos(label.i)] = Fraction(1)
        v = [Fraction(0)] * d
        v[space.pos(-label.j)] = Fraction(label.a) * c
        return _exact_esd(space, u, v)
    u = [Fraction(0)] * d
    u[space.pos(-label.j)] = Fraction(1)
    v = [Fraction(0)] * (2 * space.ell) + [-Fraction(x) * c for x in label.m]
    return _exact_esd(space, u, v)


def exact_word_matrix(space: QuadSpace, w: Word, c: Fraction | int) -> np.ndarray:
    M = np.eye(space.dim, dtype=int).astype(object)
    for g in w:
        M = M.dot(exact_label_matrix(space, g.label, c * g.exp))
    return M


def localized_matrix(space: QuadSpace, f: int, g: LocalizedGen) -> np.ndarray:
    return exact_label_matrix(space, g.label, Fraction(g.exp, f ** g.depth))


def _reduce_integral(M: np.ndarray, n: int) -> np.ndarray | None:
    out = np.empty(M.shape, dtype=np.int64)
    for idx, x in np.ndenumerate(M):
        x = Fraction(x)
        if x.denominator != 1:
            return None
        out[idx] = x.numerator % n
    return out


def _reduce_unit_denominators(M: np.ndarray, p: int) -> np.ndarray:
    """Image of a matrix over Z[1/f] in Z/p for a modulus p coprime to f."""
    out = np.empty(M.shape, dtype=np.int64)
    for idx, x in np.ndenumerate(M):
        x = Fraction(x)
        out[idx] = x.numerator * pow(x.denominator, -1, p) % p
    return out


@dataclass(frozen=True)
class Tower:
    """A modulus n with a fixed element f; the localized ring is Z/n[1/f]."""

    n: int
    f: int
    ell: int = 3
    r: int = 1
    q0: tuple = ((1,),)

    @property
    def space(self) -> QuadSpace:
        return QuadSpace(RingSpec.modular(self.n), self.ell, self.r, self.q0)

    @property
    def localized_modulus(self) -> int:
        return invert_away(self.n, self.f)


def _random_label(space: QuadSpace, rng: random.Random) -> GenLabel:
    n = space.n
    if space.r and rng.random() < 0.3:
        return Short(rng.choice(space.indices), tuple(rng.randrange(n) for _ in range(space.r)))
    i = rng.choice(space.indices)
    j = rng.choice([j for j in space.indices if j not in (i, -i)])
    return Long(i, j, rng.randrange(n))


def verify_action_conjugation(tower: Tower, samples: int = 1000, seed: int = 0, max_depth: int = 2,
                              max_len: int = 4, max_acting: int = 2) -> dict:
    """Compare ev(act(g, w)) with the exact conjugate of ev(w) by the localized transvections.

    Both sides are matrices over Z[1/f] reduced to Z/n (the conjugate must come out integral);
    when Z/n[1/f] is nonzero the comparison is repeated there, where 1/f exists.
    """
    space = tower.space
    n, f = tower.n, tower.f
    p = tower.localized_modulus
    rng = random.Random(seed)
    done, rejected = 0, 0
    bad, bad_local, nonintegral = [], [], []
    while done < samples:
        gs = [LocalizedGen(_random_label(space, rng), rng.randint(0, max_depth), rng.choice((1, -1)))
              for _ in range(rng.randint(1, max_acting))]
        s_out = rng.randint(1, n)
        level = s_out * f ** (2 * sum(g.depth for g in gs))
        w = StagedWord(tuple(SGen(_random_label(space, rng), rng.choice((1, -1)))
                             for _ in range(rng.randint(1, max_len))), level)
        try:
            acted = act_localized_word(space, f, gs, w)
        except UncoveredError:
            rejected += 1
            continue
        done += 1
        G = np.eye(space.dim, dtype=int).astype(object)
        Ginv = np.eye(space.dim, dtype=int).astype(object)
        for g in gs:
            G = G.dot(localized_matrix(space, f, g))
        for g in reversed(gs):
            Ginv = Ginv.dot(localized_matrix(space, f, g._replace(exp=-g.exp)))
        W = exact_word_matrix(space, w.word, level)
        conj = G.dot(W).dot(Ginv)
        lhs = ev_stage(space, acted)
        red = _reduce_integral(conj, n)
        desc = {"acting": [[str(g.label), g.depth, g.exp] for g in gs], "word": [str(h) for h in w.word],
                "level": level}
        if red is None:
            nonintegral.append(desc)
            continue
        if not np.array_equal(red, lhs):
            bad.append(desc)
        if p > 1 and not np.array_equal(_reduce_unit_denominators(conj, p), lhs % p):
            bad_local.append(desc)
    fails = len(bad) + len(bad_local) + len(nonintegral)
    return {"tower": {"n": n, "f": f, "ell": tower.ell, "r": tower.r}, "seed": seed,
            "localized_modulus": p, "samples": done, "uncovered_resampled": rejected,
            "failure_count": fails, "failures": (bad + bad_local + nonintegral)[:10],
            "nonintegral": len(nonintegral), "passed": fails == 0}


def verify_extranaturality(tower: Tower, samples: int = 1000, seed: int = 0, max_depth: int = 2,
                           max_len: int = 4) -> dict:
    """Acting at a deeper level then transitioning equals transitioning then acting (words and matrices)."""
    space = tower.space
    n, f = tower.n, tower.f
    rng = random.Random(seed)
    done, word_bad, mat_bad = 0, 0, 0
    examples = []
    while done < samples:
        g = LocalizedGen(_random_label(space, rng), rng.randint(0, max_depth), rng.choice((1, -1)))
        s_out, t = rng.randint(1, n), rng.randint(1, n)
        w = StagedWord(tuple(SGen(_random_label(space, rng), rng.choice((1, -1)))
                             for _ in range(rng.randint(1, max_len))), s_out * t * f ** (2 * g.depth))
        try:
            a = transition(space, act_localized(space, f, g, w), t)
            b = act_localized(space, f, g, transition(space, w, t))
        except UncoveredError:
            continue
        done += 1
        if a != b:
            word_bad += 1
            if len(examples) < 10:
                examples.append([str(g.label), g.depth, t])
        if not np.array_equal(ev_stage(space, a), ev_stage(space, b)):
            mat_bad += 1
    return {"tower": {"n": n, "f": f}, "seed": seed, "samples": done,
            "word_failures": word_bad, "matrix_failures": mat_bad, "failures": examples,
            "passed": word_bad == 0 and mat_bad == 0}


# -- generation at a finite stage ---------------------------------------------------


def _maximal_ideals(n: int) -> list[int]:
    """Primes p | n; the maximal ideals of Z/n are pZ/n."""
    out, m, p = [], n, 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def costalk_generation(n: int, f: int, dim: int = 2) -> dict:
    """Exhaustive check over every linear map D on (Z/n)^dim.

    If for every maximal ideal p disjoint from {f^k} there is t outside p with D t = 0
    (the two maps agree after the stage map of that tower), then D f^k = 0 for some k
    (they agree at a deeper stage of the f-tower).
    """
    powers = sorted({pow(f, k, n) for k in range(2 * n)})
    towers = [p for p in _maximal_ideals(n) if all(x % p for x in powers)]
    checked, premise, bad = 0, 0, []
    entries = np.array(list(product(range(n), repeat=dim * dim)), dtype=np.int64)
    # annihilator of each D as a boolean mask over scalars
    ann = np.stack([(entries * t) % n == 0 for t in range(n)], axis=1).all(axis=2)
    for row, mask in zip(entries, ann):
        checked += 1
        killers = np.flatnonzero(mask)
        if all(any(t % p for t in killers) for p in towers):
            premise += 1
            if not any(mask[x] for x in powers):
                bad.append(row.tolist())
    return {"n": n, "f": f, "dim": dim, "towers": towers, "maps": checked, "premise_holds": premise,
            "failure_count": len(bad), "failures": bad[:10], "passed": not bad}


def homotope_algebra_axioms(n: int) -> dict:
    """Associativity, distributivity and linearity of a^(s) b^(s) = (a b s)^(s), all levels."""
    bad = 0
    count = 0
    for s in range(n):
        els = [HomotopeScalar(a, s, n) for a in range(n)]
        for x, y, z in product(els, repeat=3):
            count += 1
            if (x * y) * z != x * (y * z) or x * (y + z) != x * y + x * z:
                bad += 1
        for x, y in product(els, repeat=2):
            for c in range(n):
                if (x * c) * y != (x * y) * c:
                    bad += 1
    return {"n": n, "instances": count, "failure_count": bad, "passed": bad == 0}


__all__ = [
    "HomotopeScalar", "HomotopeVector", "StagedWord", "LocalizedGen", "Tower", "transition",
    "transition_scalar", "ev_stage", "verify_homotope_relations", "verify_transitions", "act_localized",
    "act_localized_word", "verify_action_conjugation", "verify_extranaturality", "costalk_generation",
    "homotope_algebra_axioms",
]
