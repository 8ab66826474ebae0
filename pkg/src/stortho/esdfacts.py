"""Matrix-level identities of ESD-transvections: additivity, scalar transfer, naturality,
symmetry on isotropic pairs, triviality on T(u, ua), and orthogonality.

Small spaces are swept exhaustively; larger ones are sampled from a seeded generator.
"""

from __future__ import annotations

import random

import numpy as np

from .orthogroup import (
    apply_word,
    esd_batch,
    inverse_word,
    is_orthogonal,
    random_elementary_word,
    word_matrix,
)
from .quadmod import QuadSpace

IDENTITIES = ("additive", "scalar", "conjugation", "symmetric", "trivial", "orthogonal")


class _Tally:
    def __init__(self):
        self.instances = 0
        self.failures: list = []
        self.count = 0

    def add(self, ok: np.ndarray, params) -> None:
        ok = np.asarray(ok, dtype=bool).reshape(-1)
        self.instances += int(ok.size)
        bad = np.flatnonzero(~ok)
        self.count += int(bad.size)
        for k in bad[: max(0, 20 - len(self.failures))]:
            self.failures.append(params(int(k)))

    def report(self) -> dict:
        return {"instances": self.instances, "failure_count": self.count, "failures": self.failures}


def _same(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return (A == B).all(axis=(-1, -2))


def _isotropic(space: QuadSpace) -> np.ndarray:
    V = space.all_vectors()
    return V[space.q_array(V) == 0]


def _perp_sample(space: QuadSpace, U: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One uniform v with <u, v> = 0 per row u, by rejection."""
    n, d = space.n, space.dim
    out = np.empty_like(U)
    todo = np.arange(len(U))
    while len(todo):
        cand = rng.integers(0, n, size=(len(todo), d))
        ok = np.einsum("ni,ij,nj->n", U[todo], space.gram, cand) % n == 0
        out[todo[ok]] = cand[ok]
        todo = todo[~ok]
    return out


def _check_orthogonal(space: QuadSpace, T: np.ndarray) -> np.ndarray:
    return np.array([is_orthogonal(space, M) for M in T], dtype=bool)


def esd_identity_suite(space: QuadSpace, exhaustive: bool | None = None, samples: int = 10_000,
                seed: int = 0, conj_words: int = 64, max_conj_len: int = 4) -> dict:
    """Run every identity; exhaustive by default when the space has at most 64 vectors."""
    if exhaustive is None:
        exhaustive = space.vector_count <= 64
    n, d = space.n, space.dim
    prng = random.Random(seed)
    rng = np.random.default_rng(seed)
    tallies = {k: _Tally() for k in IDENTITIES}
    iso = _isotropic(space)
    I = np.eye(d, dtype=np.int64)
    L = lambda A: [int(x) for x in A]  # noqa: E731

    if exhaustive:
        V = space.all_vectors()
        codes = {int(c): k for k, c in enumerate(space.encode_array(V))}
        pairs_u, pairs_v = [], []
        for u in iso:
            P = V[(V @ (space.gram @ u)) % n == 0]
            T = esd_batch(space, np.repeat(u[None], len(P), 0), P)
            pairs_u.append(np.repeat(u[None], len(P), 0))
            pairs_v.append(P)
            # additive: T(u,v) T(u,v') = T(u, v+v') over all v, v' in u^perp
            index = np.array([codes[int(c)] for c in space.encode_array(P)])
            pos = np.full(len(V), -1)
            pos[index] = np.arange(len(P))
            prod = np.einsum("aij,bjk->abik", T, T) % n
            S = (P[:, None, :] + P[None, :, :]) % n
            target = T[pos[space.encode_array(S.reshape(-1, d))]].reshape(prod.shape)
            tallies["additive"].add(_same(prod, target),
                                    lambda k, u=u, P=P: [L(u), L(P[k // len(P)]), L(P[k % len(P)])])
            for a in range(n):
                lhs = esd_batch(space, np.repeat((u * a % n)[None], len(P), 0), P)
                rhs = esd_batch(space, np.repeat(u[None], len(P), 0), P * a % n)
                tallies["scalar"].add(_same(lhs, rhs), lambda k, u=u, P=P, a=a: [L(u), L(P[k]), a])
                tallies["trivial"].add(_same(esd_batch(space, u[None], (u * a % n)[None]), I[None]),
                                       lambda k, u=u, a=a: [L(u), a])
            Q = P[space.q_array(P) == 0]
            lhs = esd_batch(space, np.repeat(u[None], len(Q), 0), Q)
            rhs = esd_batch(space, Q, np.repeat((-u % n)[None], len(Q), 0))
            tallies["symmetric"].add(_same(lhs, rhs), lambda k, u=u, Q=Q: [L(u), L(Q[k])])
            tallies["orthogonal"].add(_check_orthogonal(space, T), lambda k, u=u, P=P: [L(u), L(P[k])])
        U = np.concatenate(pairs_u)
        W = np.concatenate(pairs_v)
        words = [random_elementary_word(space, prng, max_conj_len) for _ in range(conj_words)]
    else:
        U = iso[rng.integers(0, len(iso), samples)]
        W = _perp_sample(space, U, rng)
        W2 = _perp_sample(space, U, rng)
        T1, T2 = esd_batch(space, U, W), esd_batch(space, U, W2)
        T12 = esd_batch(space, U, (W + W2) % n)
        tallies["additive"].add(_same(np.einsum("nij,njk->nik", T1, T2) % n, T12),
                                lambda k: [L(U[k]), L(W[k]), L(W2[k])])
        a = rng.integers(0, n, samples)
        tallies["scalar"].add(
            _same(esd_batch(space, U * a[:, None] % n, W), esd_batch(space, U, W * a[:, None] % n)),
            lambda k: [L(U[k]), L(W[k]), int(a[k])])
        tallies["trivial"].add(_same(esd_batch(space, U, U * a[:, None] % n), I[None]),
                               lambda k: [L(U[k]), int(a[k])])
        # isotropic v with <u, v> = 0, by rejection from the isotropic list
        Q = np.empty_like(U)
        todo = np.arange(samples)
        while len(todo):
            cand = iso[rng.integers(0, len(iso), len(todo))]
            ok = np.einsum("ni,ij,nj->n", U[todo], space.gram, cand) % n == 0
            Q[todo[ok]] = cand[ok]
            todo = todo[~ok]
        tallies["symmetric"].add(_same(esd_batch(space, U, Q), esd_batch(space, Q, -U % n)),
                                 lambda k: [L(U[k]), L(Q[k])])
        tallies["orthogonal"].add(_check_orthogonal(space, T1), lambda k: [L(U[k]), L(W[k])])
        words = [random_elementary_word(space, prng, max_conj_len) for _ in range(samples)]

    # conjugation: g T(u,v) g^{-1} = T(gu, gv)
    if exhaustive:
        for w in words:
            g = word_matrix(space, w)
            gi = word_matrix(space, inverse_word(w))
            T = esd_batch(space, U, W)
            lhs = np.einsum("ij,njk,kl->nil", g, T, gi) % n
            rhs = esd_batch(space, U @ g.T % n, W @ g.T % n)
            tallies["conjugation"].add(_same(lhs, rhs), lambda k, w=w: [L(U[k]), L(W[k]), len(w)])
    else:
        G = np.array([word_matrix(space, w) for w in words])
        Gi = np.array([word_matrix(space, inverse_word(w)) for w in words])
        T = esd_batch(space, U, W)
        lhs = np.einsum("nij,njk,nkl->nil", G, T, Gi) % n
        rhs = esd_batch(space, np.einsum("nij,nj->ni", G, U) % n, np.einsum("nij,nj->ni", G, W) % n)
        tallies["conjugation"].add(_same(lhs, rhs), lambda k: [L(U[k]), L(W[k]), len(words[k])])
        # spot-check the vector action against apply_word
        for k in range(min(10, samples)):
            assert apply_word(space, words[k], tuple(int(c) for c in U[k])) == tuple(
                int(c) for c in G[k] @ U[k] % n)

    out = {"space": str(space), "seed": seed, "mode": "exhaustive" if exhaustive else "sampled",
           "identities": {k: t.report() for k, t in tallies.items()}}
    out["passed"] = all(t.count == 0 for t in tallies.values())
    return out
