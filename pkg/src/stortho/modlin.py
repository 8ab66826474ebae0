"""Linear systems over Z/n: diagonalization over each Z/p^v by valuation pivots, joined by CRT."""

from __future__ import annotations

from itertools import product

import numpy as np

from .ring import valuation


def _factor(n: int) -> list[tuple[int, int]]:
    out, p, m = [], 2, n
    while p * p <= m:
        if m % p == 0:
            v = valuation(m, p)
            out.append((p, v))
            m //= p**v
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


class _ChainSolver:
    """U A V = diag(p^e_0, ..., p^e_{rank-1}, 0, ...) over Z/p^v."""

    def __init__(self, A: np.ndarray, p: int, v: int):
        q = p**v
        self.p, self.v, self.q = p, v, q
        A = np.array(A, dtype=object) % q
        m, k = A.shape
        U = np.eye(m, dtype=int).astype(object)
        V = np.eye(k, dtype=int).astype(object)
        exps = []
        for t in range(min(m, k)):
            best = None
            for i in range(t, m):
                for j in range(t, k):
                    a = int(A[i, j])
                    if a:
                        e = valuation(a, p)
                        if best is None or e < best[0]:
                            best = (e, i, j)
                            if e == 0:
                                break
                if best is not None and best[0] == 0:
                    break
            if best is None:
                break
            e, i, j = best
            A[[t, i]] = A[[i, t]]
            U[[t, i]] = U[[i, t]]
            A[:, [t, j]] = A[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
            unit = int(A[t, t]) // p**e
            inv = pow(unit, -1, q)
            A[t] = (A[t] * inv) % q
            U[t] = (U[t] * inv) % q
            pe = p**e
            for r in range(m):
                if r != t and A[r, t]:
                    c = int(A[r, t]) // pe
                    A[r] = (A[r] - c * A[t]) % q
                    U[r] = (U[r] - c * U[t]) % q
            for c_ in range(k):
                if c_ != t and A[t, c_]:
                    c = int(A[t, c_]) // pe
                    A[:, c_] = (A[:, c_] - c * A[:, t]) % q
                    V[:, c_] = (V[:, c_] - c * V[:, t]) % q
            exps.append(e)
        self.U = np.array(U, dtype=np.int64)
        self.V = np.array(V, dtype=np.int64)
        self.exps = exps
        self.shape = (m, k)

    @property
    def rank(self) -> int:
        return len(self.exps)

    def kernel_size(self) -> int:
        size = 1
        for e in self.exps:
            size *= self.p**e
        return size * self.q ** (self.shape[1] - self.rank)

    def kernel(self) -> np.ndarray:
        p, v, q = self.p, self.v, self.q
        ranges = [range(0, q, p ** (v - e)) for e in self.exps] + [range(q)] * (self.shape[1] - self.rank)
        Y = np.array(list(product(*ranges)), dtype=np.int64).reshape(-1, self.shape[1])
        return (Y @ self.V.T) % q

    def solve_many(self, Bv: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Rows b -> (solvable mask, one solution z per row with A z = b)."""
        q, p = self.q, self.p
        C = (np.asarray(Bv, dtype=np.int64) % q) @ self.U.T % q
        r = self.rank
        ok = np.ones(len(C), dtype=bool)
        Y = np.zeros((len(C), self.shape[1]), dtype=np.int64)
        for t, e in enumerate(self.exps):
            pe = p**e
            ok &= C[:, t] % pe == 0
            Y[:, t] = C[:, t] // pe
        if r < self.shape[0]:
            ok &= (C[:, r:] == 0).all(axis=1)
        return ok, (Y @ self.V.T) % q


class ModularSystem:
    """A z = b over Z/n for a fixed coefficient matrix A and many right-hand sides."""

    def __init__(self, A: np.ndarray, n: int):
        self.n = n
        self.A = np.asarray(A, dtype=np.int64) % n
        self.parts = [(p**v, _ChainSolver(self.A, p, v)) for p, v in _factor(n)] if n > 1 else []
        self.crt = []
        for q, _ in self.parts:
            M = n // q
            self.crt.append(M * pow(M, -1, q) % n)

    def kernel_size(self) -> int:
        size = 1
        for _, s in self.parts:
            size *= s.kernel_size()
        return size

    def kernel(self) -> np.ndarray:
        """Every z with A z = 0, as rows."""
        n, k = self.n, self.A.shape[1]
        out = np.zeros((1, k), dtype=np.int64)
        for (q, s), c in zip(self.parts, self.crt):
            K = s.kernel() * c % n
            out = ((out[:, None, :] + K[None, :, :]) % n).reshape(-1, k)
        return out

    def solve_many(self, Bv: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        Bv = np.asarray(Bv, dtype=np.int64)
        ok = np.ones(len(Bv), dtype=bool)
        Z = np.zeros((len(Bv), self.A.shape[1]), dtype=np.int64)
        for (q, s), c in zip(self.parts, self.crt):
            okq, Zq = s.solve_many(Bv % q)
            ok &= okq
            Z = (Z + Zq * c) % self.n
        return ok, Z
