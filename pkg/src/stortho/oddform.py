"""The odd form algebra (R, Delta) of a quadratic module over Z/n.

R holds the adjoint pairs (x^op, y) with <x m, m'> = <m, y m'>. Delta holds the quadruples
(x^op, y; z^op, w) with both pairs in R, x y + z + w = 0, and q(y m) + <m, w m> = 0.

Endomorphisms are d x d matrices flattened row-major. Over a fixed adjoint pair (x, y), the
admissible z form an affine set cut out by linear equations whose coefficients do not depend
on (x, y), so Delta is enumerated as R-fibres: one particular solution plus a shared kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .modlin import ModularSystem
from .orthogroup import is_orthogonal
from .quadmod import QuadSpace
from .ring import RingSpec, is_unit_int, localize_at_prime

DEFAULT_ODD_BOUND = 5_000_000


class OddFormBoundError(RuntimeError):
    pass


def _adjoint_system(B: np.ndarray) -> np.ndarray:
    """Coefficients of x^T B - B y = 0 in the unknowns (x, y)."""
    d = B.shape[0]
    A = np.zeros((d * d, 2 * d * d), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            row = a * d + b
            for c in range(d):
                A[row, c * d + a] += B[c, b]          # (x^T B)_{ab}
                A[row, d * d + c * d + b] -= B[a, c]  # (B y)_{ab}
    return A


def compute_R(space: QuadSpace, bound: int = DEFAULT_ODD_BOUND) -> np.ndarray:
    """Every adjoint pair as a row (x flattened, y flattened)."""
    system = ModularSystem(_adjoint_system(space.gram), space.n)
    if system.kernel_size() > bound:
        raise OddFormBoundError(f"R has {system.kernel_size()} elements, over the bound {bound}")
    return system.kernel()


def in_R(space: QuadSpace, x: np.ndarray, y: np.ndarray) -> bool:
    B = space.gram
    return bool(np.array_equal((x.T @ B) % space.n, (B @ y) % space.n))


def _quad_vectors(space: QuadSpace, mode: str) -> np.ndarray:
    if mode == "full":
        return space.all_vectors()
    if mode == "generators_only":
        return np.eye(space.dim, dtype=np.int64)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class DeltaFibres:
    """Delta as {(x, y, z0 + k, -x y - z0 - k) : (x, y) in R solvable, k in kernel}."""

    space: QuadSpace
    mode: str
    R: np.ndarray
    solvable: np.ndarray
    particular: np.ndarray
    kernel: np.ndarray

    @property
    def size(self) -> int:
        return int(self.solvable.sum()) * len(self.kernel)

    def elements(self, bound: int = DEFAULT_ODD_BOUND) -> np.ndarray:
        """Rows (x, y, z, w), each matrix flattened."""
        if self.size > bound:
            raise OddFormBoundError(f"Delta has {self.size} elements, over the bound {bound}")
        n, d = self.space.n, self.space.dim
        R = self.R[self.solvable]
        Z0 = self.particular[self.solvable]
        X = R[:, : d * d].reshape(-1, d, d)
        Y = R[:, d * d:].reshape(-1, d, d)
        XY = (X @ Y % n).reshape(-1, d * d)
        Z = (Z0[:, None, :] + self.kernel[None, :, :]) % n
        W = (-XY[:, None, :] - Z) % n
        XYrep = np.repeat(R[:, None, :], len(self.kernel), axis=1)
        return np.concatenate([XYrep, Z, W], axis=2).reshape(-1, 4 * d * d)


def compute_Delta(space: QuadSpace, mode: str = "full", R: np.ndarray | None = None,
                  chunk: int = 20_000) -> DeltaFibres:
    """Delta, imposing the quadratic condition on every vector (full) or on basis vectors only."""
    n, d = space.n, space.dim
    B = space.gram.astype(np.int64)
    Q = space.qmatrix.astype(np.int64)
    Ms = _quad_vectors(space, mode)
    if R is None:
        R = compute_R(space)
    # unknown z (d*d): z^T B + B z = -B x y ;  <m, z m> = q(y m) - <m, x y m>
    rows = []
    for a in range(d):
        for b in range(d):
            row = np.zeros(d * d, dtype=np.int64)
            for c in range(d):
                row[c * d + a] += B[c, b]
                row[c * d + b] += B[a, c]
            rows.append(row)
    for m in Ms:
        rows.append(np.outer(B @ m, m).reshape(-1))
    system = ModularSystem(np.array(rows) % n, n)
    solvable = np.zeros(len(R), dtype=bool)
    particular = np.zeros((len(R), d * d), dtype=np.int64)
    for lo in range(0, len(R), chunk):
        block = R[lo: lo + chunk]
        X = block[:, : d * d].reshape(-1, d, d)
        Y = block[:, d * d:].reshape(-1, d, d)
        XY = X @ Y % n
        rhs1 = (-(B @ XY)).reshape(-1, d * d) % n
        YM = np.einsum("nij,kj->nki", Y, Ms) % n
        qym = np.einsum("nki,ij,nkj->nk", YM, Q, YM)
        XYM = np.einsum("nij,kj->nki", XY, Ms) % n
        pair = np.einsum("ki,ij,nkj->nk", Ms, B, XYM)
        rhs2 = (qym - pair) % n
        ok, Z = system.solve_many(np.concatenate([rhs1, rhs2], axis=1))
        solvable[lo: lo + chunk] = ok
        particular[lo: lo + chunk] = Z
    return DeltaFibres(space, mode, R, solvable, particular, system.kernel())


def check_delta_elements(space: QuadSpace, rows: np.ndarray) -> bool:
    """Direct membership test of (x, y, z, w) rows against every defining condition."""
    n, d = space.n, space.dim
    V = space.all_vectors()
    for row in rows:
        x, y, z, w = (row[k * d * d:(k + 1) * d * d].reshape(d, d) for k in range(4))
        if not (in_R(space, x, y) and in_R(space, z, w)):
            return False
        if ((x @ y + z + w) % n).any():
            return False
        YV = V @ y.T % n
        WV = V @ w.T % n
        lhs = space.q_array(YV) + np.einsum("ki,ij,kj->k", V, space.gram, WV)
        if (lhs % n).any():
            return False
    return True


def r_closure(space: QuadSpace, R: np.ndarray | None = None) -> dict:
    """(x, y)(x', y') = (x' x, y y') stays in R; the identity pair lies in R."""
    n, d = space.n, space.dim
    if R is None:
        R = compute_R(space)
    codes = set(_encode(R, n).tolist())
    X = R[:, : d * d].reshape(-1, d, d)
    Y = R[:, d * d:].reshape(-1, d, d)
    bad = 0
    for k in range(len(R)):
        PX = (X @ X[k]) % n          # x' x with x = X[k]
        PY = (Y[k] @ Y) % n          # y y' with y = Y[k]
        P = np.concatenate([PX.reshape(-1, d * d), PY.reshape(-1, d * d)], axis=1)
        bad += int(sum(1 for c in _encode(P, n).tolist() if c not in codes))
    eye = np.eye(d, dtype=np.int64).reshape(-1)
    ident = int(_encode(np.concatenate([eye, eye])[None], n)[0]) in codes
    return {"size": len(R), "products": len(R) ** 2, "failure_count": bad, "identity_in_R": ident,
            "passed": bad == 0 and ident}


def orthogonal_pairs(space: QuadSpace, bound: int = 10**6) -> dict:
    """Brute-force O(M, q) over all matrices; (g^-1, g) must be an adjoint pair."""
    n, d = space.n, space.dim
    if n ** (d * d) > bound:
        raise OddFormBoundError(f"{n ** (d * d)} matrices over the bound {bound}")
    found, bad = 0, 0
    for entries in product(range(n), repeat=d * d):
        g = np.array(entries, dtype=np.int64).reshape(d, d)
        if not is_orthogonal(space, g):
            continue
        found += 1
        ginv = _inverse_mod(g, n)
        if ginv is None or not in_R(space, ginv, g):
            bad += 1
    return {"orthogonal": found, "failure_count": bad, "passed": bad == 0 and found > 0}


def _inverse_mod(g: np.ndarray, n: int) -> np.ndarray | None:
    """Inverse by powering: g has finite order in GL_d(Z/n)."""
    d = g.shape[0]
    I = np.eye(d, dtype=np.int64)
    P = g % n
    prev = I
    for _ in range(n ** (d * d)):
        if np.array_equal(P, I):
            return prev
        prev = P
        P = (P @ g) % n
    return None


def _encode(rows: np.ndarray, base: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    if base ** rows.shape[1] >= 2**63:
        # fall back to bytes-based keys
        return np.array([hash(r.tobytes()) for r in rows], dtype=np.int64)
    weights = base ** np.arange(rows.shape[1] - 1, -1, -1, dtype=np.int64)
    return rows @ weights


def localization_commutes(n: int, p: int, ell: int = 1, r: int = 0, q0=()) -> dict:
    """Compare R and Delta over the localization Z/p^v with the images of those over Z/n.

    (a) the reduction of R(Z/n) equals R(Z/p^v);
    (b) {(r / s, r' / s^2) : (r, r') in Delta(Z/n), s outside p} equals Delta(Z/p^v).
    """
    local, to_local = localize_at_prime(n, p)
    q = local.modulus
    big = QuadSpace(RingSpec.modular(n), ell, r, q0)
    small = QuadSpace(local, ell, r, q0)
    d2 = big.dim ** 2

    R_big = compute_R(big)
    R_small = compute_R(small)
    img = np.unique(_encode(R_big % q, q))
    direct = np.unique(_encode(R_small, q))
    r_equal = bool(np.array_equal(img, direct))

    D_big = compute_Delta(big, "full", R_big).elements()
    D_small = compute_Delta(small, "full", R_small).elements()
    local_D = D_big % q
    keys = []
    for s in (a for a in range(q) if is_unit_int(a, q)):
        si = pow(s, -1, q)
        scaled = local_D.copy()
        scaled[:, : 2 * d2] = scaled[:, : 2 * d2] * si % q
        scaled[:, 2 * d2:] = scaled[:, 2 * d2:] * si * si % q
        keys.append(np.unique(_encode(scaled, q)))
    img_D = np.unique(np.concatenate(keys))
    direct_D = np.unique(_encode(D_small, q))
    d_equal = bool(np.array_equal(img_D, direct_D))
    return {
        "n": n, "p": p, "local_modulus": q, "ell": ell, "r": r,
        "R": {"source": len(R_big), "image": len(img), "direct": len(direct), "equal": r_equal},
        "Delta": {"source": len(D_big), "image": len(img_D), "direct": len(direct_D), "equal": d_equal},
        "passed": r_equal and d_equal,
    }


def generators_experiment(space: QuadSpace) -> dict:
    """Does imposing the quadratic condition on basis vectors alone give the same Delta?"""
    R = compute_R(space)
    full = compute_Delta(space, "full", R)
    gen = compute_Delta(space, "generators_only", R)
    # full fibres sit inside generator fibres; both are cosets, so equal sizes mean equal sets
    contained = bool(np.all(gen.solvable[full.solvable]))
    same_fibres = bool(np.array_equal(full.solvable, gen.solvable)) and len(full.kernel) == len(gen.kernel)
    out = {"space": str(space), "R": len(R), "full": full.size, "generators_only": gen.size,
           "full_kernel": len(full.kernel), "generators_kernel": len(gen.kernel),
           "full_subset_of_generators": contained, "equal": same_fibres and contained,
           "outcome": "equal" if same_fibres and contained else ("strict inclusion" if contained else "not contained")}
    if not out["equal"]:
        # exhibit one quadruple that passes on generators but fails on all vectors
        k = int(np.flatnonzero(gen.solvable & ~full.solvable)[0]) if (gen.solvable & ~full.solvable).any() else None
        out["counterexample_R_index"] = k
    return out
