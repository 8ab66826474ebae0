"""Steinberg words over x_ij(a), x_j(m): the nine relation schemas, evaluation phi, normalization
and the conjugation action of a generator on words.
"""

from __future__ import annotations

import random
from itertools import product
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from .orthogroup import (
    GenLabel,
    Long,
    OrthoMap,
    PreconditionError,
    SGen,
    Short,
    Word,
    check_label,
    inverse_word,
    label_is_zero,
    negate_label,
    word_matrix,
)
from .quadmod import QuadSpace

SCHEMAS = ("R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9")

__all__ = [
    "Long", "Short", "SGen", "Word", "SCHEMAS", "mul", "inv", "commutator", "normalize", "phi",
    "relation_instances", "act_elementary", "canonical_label", "orient",
]


def x(i: int, j: int, a: int, exp: int = 1) -> SGen:
    return SGen(Long(i, j, a), exp)


def xs(j: int, m: Sequence[int], exp: int = 1) -> SGen:
    return SGen(Short(j, tuple(m)), exp)


def mul(w1: Word, w2: Word) -> Word:
    return tuple(w1) + tuple(w2)


def inv(w: Word) -> Word:
    return inverse_word(w)


def commutator(g: Word, h: Word) -> Word:
    """[g, h] = g h g^{-1} h^{-1}."""
    return tuple(g) + tuple(h) + inv(g) + inv(h)


def orient(label: Long, n: int) -> tuple[Long, Long]:
    """Both spellings of a long root element: x_ij(a) = x_{-j,-i}(-a)."""
    return label, Long(-label.j, -label.i, (-label.a) % n)


def canonical_label(label: GenLabel, n: int) -> GenLabel:
    """R2 representative: the lexicographically smaller index pair."""
    if isinstance(label, Long) and (label.i, label.j) > (-label.j, -label.i):
        return Long(-label.j, -label.i, (-label.a) % n)
    return label


def _root_key(label: GenLabel):
    return ("L", label.i, label.j) if isinstance(label, Long) else ("S", label.j)


def normalize(space: QuadSpace, w: Word) -> Word:
    """R2 orientation, exponents folded into parameters, adjacent same-root merges (R1/R3),
    zero parameters dropped. Free reduction is a special case of the merge."""
    n = space.n
    stack: list[GenLabel] = []
    for g in w:
        label = g.label if g.exp == 1 else negate_label(space, g.label)
        label = canonical_label(label, n)
        if label_is_zero(label):
            continue
        if stack and _root_key(stack[-1]) == _root_key(label):
            top = stack.pop()
            if isinstance(label, Long):
                merged = Long(label.i, label.j, (top.a + label.a) % n)
            else:
                merged = Short(label.j, tuple((s + t) % n for s, t in zip(top.m, label.m)))
            if not label_is_zero(merged):
                stack.append(merged)
        else:
            stack.append(label)
    return tuple(SGen(label, 1) for label in stack)


def phi(space: QuadSpace, w: Word) -> OrthoMap:
    return OrthoMap(space, word_matrix(space, w))


# -- relation schemas -------------------------------------------------------


class RelationInstance(NamedTuple):
    schema: str
    params: tuple
    word: Word


def _long_pairs(space: QuadSpace) -> list[tuple[int, int]]:
    idx = space.indices
    return [(i, j) for i in idx for j in idx if i != j and i != -j]


def _index_tuples(space: QuadSpace, schema: str) -> list[tuple]:
    idx = space.indices
    pairs = _long_pairs(space)
    if schema in ("R1", "R2", "R5"):
        return pairs
    if schema == "R3":
        return [(i,) for i in idx]
    if schema == "R4":
        return [
            (i, j, k, l)
            for (i, j) in pairs
            for (k, l) in pairs
            if j != k and k != -i and i != l and l != -j
        ]
    if schema == "R6":
        return [(i, j, k) for (i, j) in pairs for k in idx if k not in (j, -j, i, -i)]
    if schema in ("R7", "R9"):
        return pairs
    if schema == "R8":
        return [(i, j, k) for i in idx for (j, k) in pairs if j != i and i != -k]
    raise ValueError(f"unknown schema {schema!r}")


# parameter kinds per schema: "K" ring element, "M" element of M0
_PARAM_KINDS = {
    "R1": "KK", "R2": "K", "R3": "MM", "R4": "KK", "R5": "KK",
    "R6": "KK", "R7": "MM", "R8": "MK", "R9": "MK",
}


def _build(space: QuadSpace, schema: str, idx: tuple, params: tuple, s: int) -> Word:
    """Relator LHS * RHS^{-1}; at homotope level s products pick up the factor s."""
    n = space.n
    sp = space

    def bil(m, m2):
        return sp.bilinear(sp.embed_m0(m), sp.embed_m0(m2))

    def qm(m):
        return sp.q(sp.embed_m0(m))

    def madd(m, m2):
        return tuple((p + q) % n for p, q in zip(m, m2))

    def mscale(m, c):
        return tuple((p * c) % n for p in m)

    if schema == "R1":
        (i, j), (a, b) = idx, params
        return (x(i, j, a), x(i, j, b), x(i, j, (a + b) % n, -1))
    if schema == "R2":
        (i, j), (a,) = idx, params
        return (x(i, j, a), x(-j, -i, (-a) % n, -1))
    if schema == "R3":
        (i,), (m, m2) = idx, params
        return (xs(i, m), xs(i, m2), xs(i, madd(m, m2), -1))
    if schema == "R4":
        (i, j, k, l), (a, b) = idx, params
        return commutator((x(i, j, a),), (x(k, l, b),))
    if schema == "R5":
        (i, j), (a, b) = idx, params
        return commutator((x(i, j, a),), (x(j, -i, b),))
    if schema == "R6":
        (i, j, k), (a, b) = idx, params
        return commutator((x(i, j, a),), (x(j, k, b),)) + (x(i, k, (a * b * s) % n, -1),)
    if schema == "R7":
        (i, j), (m, m2) = idx, params
        return commutator((xs(i, m),), (xs(j, m2),)) + (x(-i, j, (-bil(m, m2) * s) % n, -1),)
    if schema == "R8":
        (i, j, k), (m, a) = idx, params
        return commutator((xs(i, m),), (x(j, k, a),))
    if schema == "R9":
        (i, j), (m, a) = idx, params
        rhs = (x(-i, j, (-qm(m) * a * s * s) % n), xs(j, mscale(m, a * s)))
        return commutator((xs(i, m),), (x(i, j, a),)) + inv(rhs)
    raise ValueError(f"unknown schema {schema!r}")


def _param_values(space: QuadSpace, kind: str) -> list:
    if kind == "K":
        return list(range(space.n))
    return list(product(range(space.n), repeat=space.r))


def instance_count(space: QuadSpace, schema: str) -> int:
    total = len(_index_tuples(space, schema))
    for kind in _PARAM_KINDS[schema]:
        total *= len(_param_values(space, kind))
    return total


def relation_instances(space: QuadSpace, schema: str, level: int = 1, cap: int = 10**6,
                       sample: int = 10**5, seed: int = 0) -> Iterator[RelationInstance]:
    """Every instance of a schema (or a seeded sample of `sample` when the count exceeds `cap`)."""
    if schema not in SCHEMAS:
        raise ValueError(f"unknown schema {schema!r}")
    s = level % space.n
    tuples = _index_tuples(space, schema)
    values = [_param_values(space, kind) for kind in _PARAM_KINDS[schema]]
    if any(not v for v in values) or not tuples:
        return
    if instance_count(space, schema) <= cap:
        for idx in tuples:
            for params in product(*values):
                yield RelationInstance(schema, (idx, params), _build(space, schema, idx, params, s))
    else:
        rng = random.Random(seed)
        for _ in range(sample):
            idx = rng.choice(tuples)
            params = tuple(rng.choice(v) for v in values)
            yield RelationInstance(schema, (idx, params), _build(space, schema, idx, params, s))


# -- conjugation action -----------------------------------------------------


class ActionOps(NamedTuple):
    """Scalar maps used by the conjugation formulas.

    For the plain action these are ring products; homotope stages substitute the
    level-shifting maps. Arguments are (acting parameter, acted parameter).
    """

    keep: Callable[[GenLabel], GenLabel]
    long_long: Callable[[int, int], int]             # a/s^n * b^(inf)
    q_acted_times: Callable[[tuple, int], int]       # q(m^(inf)) * a/s^n
    acted_m_times: Callable[[tuple, int], tuple]     # m^(inf) * a/s^n
    pair_acting: Callable[[tuple, tuple], int]       # <m/s^n, m'^(inf)>
    q_acting_times: Callable[[tuple, int], int]      # q(m/s^n) * a^(inf)
    acting_m_times: Callable[[tuple, int], tuple]    # m/s^n * a^(inf)


def plain_ops(space: QuadSpace) -> ActionOps:
    n = space.n

    def qm(m):
        return space.q(space.embed_m0(m))

    return ActionOps(
        keep=lambda label: label,
        long_long=lambda a, b: (a * b) % n,
        q_acted_times=lambda m, a: (qm(m) * a) % n,
        acted_m_times=lambda m, a: tuple((c * a) % n for c in m),
        pair_acting=lambda m, m2: space.bilinear(space.embed_m0(m), space.embed_m0(m2)),
        q_acting_times=lambda m, a: (qm(m) * a) % n,
        acting_m_times=lambda m, a: tuple((c * a) % n for c in m),
    )


def conjugate_label(space: QuadSpace, g: GenLabel, h: GenLabel, ops: ActionOps) -> list[GenLabel] | None:
    """^g h as a list of labels via the eight formulas, or None when no formula covers (g, h)."""
    n = space.n
    neg = lambda c: (-c) % n  # noqa: E731
    if isinstance(g, Long):
        if isinstance(h, Long):
            for gi, gj, a in orient(g, n):
                for hk, hl, b in orient(h, n):
                    if (hk, hl) == (gj, -gi):
                        return [ops.keep(h)]
                    if hk == gj and hl not in (gi, -gi):
                        return [Long(gi, hl, ops.long_long(a, b)), ops.keep(Long(hk, hl, b))]
            i, j = g.i, g.j
            k, l = h.i, h.j
            if i != l and l != -j and j != k and k != -i:
                return [ops.keep(h)]
            return None
        k = h.j
        for gi, gj, a in orient(g, n):
            if k == gi:
                m = h.m
                return [
                    Long(-gi, gj, ops.q_acted_times(m, a)),
                    Short(gj, tuple(neg(c) for c in ops.acted_m_times(m, a))),
                    ops.keep(h),
                ]
        return [ops.keep(h)]
    i, m = g.j, g.m
    if isinstance(h, Short):
        j = h.j
        if j not in (i, -i):
            return [Long(-i, j, neg(ops.pair_acting(m, h.m))), ops.keep(h)]
        return None
    for hj, hk, a in orient(h, n):
        if hj == i:
            return [
                Long(-i, hk, neg(ops.q_acting_times(m, a))),
                Short(hk, ops.acting_m_times(m, a)),
                ops.keep(h),
            ]
    return [ops.keep(h)]


def act_elementary(space: QuadSpace, g: SGen | GenLabel, w: Word) -> Word:
    """Conjugate w by a single generator, rewriting generator by generator."""
    if not isinstance(g, SGen):
        g = SGen(g, 1)
    check_label(space, g.label)
    glabel = g.label if g.exp == 1 else negate_label(space, g.label)
    ops = plain_ops(space)
    out: list[SGen] = []
    for h in w:
        image = conjugate_label(space, glabel, h.label, ops)
        if image is None:
            piece = (SGen(glabel, 1), SGen(h.label, 1), SGen(glabel, -1))
        else:
            piece = tuple(SGen(lab, 1) for lab in image)
        out.extend(piece if h.exp == 1 else inv(piece))
    return tuple(out)


def act_word(space: QuadSpace, g: Word, w: Word) -> Word:
    """Conjugate w by the product g, applying its letters right to left."""
    for s in reversed(g):
        w = act_elementary(space, s, w)
    return w


# -- presentation -------------------------------------------------------------


def alphabet(space: QuadSpace) -> list[GenLabel]:
    """R2-canonical labels with nonzero parameter, in a fixed order."""
    n = space.n
    out: list[GenLabel] = []
    for i, j in _long_pairs(space):
        if (i, j) <= (-j, -i):
            out.extend(Long(i, j, a) for a in range(1, n))
    for j in space.indices:
        out.extend(Short(j, m) for m in product(range(n), repeat=space.r) if any(m))
    return out


def to_letters(space: QuadSpace, w: Word, index: dict[GenLabel, int]) -> list[int]:
    """Translate to presentation letters (2k = generator k, 2k+1 its formal inverse).

    Only R2 orientation and x(0) = 1 are applied; R1/R3 merges are left to the relators.
    """
    n = space.n
    out = []
    for g in w:
        label = canonical_label(g.label, n)
        if label_is_zero(label):
            continue
        out.append(2 * index[label] + (0 if g.exp == 1 else 1))
    return out


def steinberg_presentation(space: QuadSpace, cap: int = 10**6):
    """Finite presentation of St(M, q) over the canonical alphabet, all nine schemas."""
    from .tc import Presentation

    labels = alphabet(space)
    index = {lab: k for k, lab in enumerate(labels)}
    relators = []
    for schema in SCHEMAS:
        for inst in relation_instances(space, schema, cap=cap, sample=0):
            relators.append(to_letters(space, inst.word, index))
    return Presentation(len(labels), relators, names=[_label_name(l) for l in labels]), labels, index


def _label_name(label: GenLabel) -> str:
    if isinstance(label, Long):
        return f"x[{label.i},{label.j}]({label.a})"
    return f"x[{label.j}]({','.join(map(str, label.m))})"


def random_word(space: QuadSpace, rng: random.Random, max_len: int = 30, min_len: int = 0) -> Word:
    labels = alphabet(space)
    out = []
    for _ in range(rng.randint(min_len, max_len)):
        lab = rng.choice(labels)
        if isinstance(lab, Long) and rng.random() < 0.5:
            # spell some letters in the non-canonical orientation
            lab = Long(-lab.j, -lab.i, (-lab.a) % space.n)
        out.append(SGen(lab, rng.choice((1, -1))))
    return tuple(out)


def check_word(space: QuadSpace, w: Word) -> None:
    for g in w:
        if g.exp not in (1, -1):
            raise PreconditionError(f"exponent must be ±1, got {g.exp}")
        check_label(space, g.label)


class WordOracle:
    """Exact word problem for St(M, q) through its regular representation."""

    def __init__(self, space: QuadSpace, table, labels: list[GenLabel], index: dict[GenLabel, int]):
        self.space = space
        self.table = table
        self.labels = labels
        self.index = index

    @classmethod
    def build(cls, space: QuadSpace, max_cosets: int | None = None, strategy: str = "hlt") -> WordOracle:
        from .tc import DEFAULT_MAX_COSETS, todd_coxeter

        pres, labels, index = steinberg_presentation(space)
        table = todd_coxeter(pres, max_cosets or DEFAULT_MAX_COSETS, strategy=strategy)
        oracle = cls(space, table, labels, index)
        oracle.presentation = pres
        return oracle

    @property
    def order(self) -> int:
        return self.table.order

    def letters(self, w: Word) -> list[int]:
        return to_letters(self.space, w, self.index)

    def is_identity(self, w: Word) -> bool:
        return self.table.word_is_identity(self.letters(w))

    def equal(self, w1: Word, w2: Word) -> bool:
        return self.is_identity(tuple(w1) + inv(w2))

    def trace(self, w: Word, start: int = 0) -> int:
        return self.table.trace(self.letters(w), start)

    def perm(self, w: Word) -> np.ndarray:
        return self.table.word_perm(self.letters(w))


def relation_suite(space: QuadSpace, cap: int = 10**6, sample: int = 10**5, seed: int = 0,
                   schemas: Sequence[str] = SCHEMAS) -> dict:
    """phi of every relator instance is the identity matrix (sampled past `cap` instances per schema)."""
    I = np.eye(space.dim, dtype=np.int64)
    out = {}
    for schema in schemas:
        total = instance_count(space, schema)
        count, bad = 0, []
        for inst in relation_instances(space, schema, cap=cap, sample=sample, seed=seed):
            count += 1
            if not np.array_equal(word_matrix(space, inst.word), I):
                bad.append(repr(inst.params))
        out[schema] = {"instances": count, "exhaustive": total <= cap,
                       "failure_count": len(bad), "failures": bad[:10]}
    return {"space": str(space), "seed": seed, "schemas": out,
            "passed": all(v["failure_count"] == 0 for v in out.values())}
