"""Smith normal form over the integers, for abelianizing finite presentations."""

from __future__ import annotations

from math import gcd


def _echelon(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Integer row echelon form by repeated Euclidean reduction (unimodular row ops)."""
    rows = [r[:] for r in rows if any(r)]
    out = []
    for c in range(ncols):
        active = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[c] // piv[c]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[c] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        if active:
            out.append(active[0])
        rows = rest
    return out


def smith_diagonal(matrix: list[list[int]], ncols: int | None = None) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix, padded with 0 to min(m, n)."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    A = _echelon([list(map(int, r)) for r in matrix], ncols)
    m = len(A)
    size = min(m, ncols)
    full = min(len(matrix), ncols)
    diag = []
    for t in range(size):
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, ncols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, ncols) if A[t][j]]
                _, i, j = min(cands)
                A[t], A[i] = A[i], A[t]
                for row in A:
                    row[t], row[j] = row[j], row[t]
                continue
            # divisibility: fold in any block entry not divisible by the pivot
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, ncols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
    diag += [0] * (full - len(diag))
    # enforce the divisibility chain (already guaranteed, kept for safety on degenerate input)
    for k in range(len(diag) - 1):
        a, b = diag[k], diag[k + 1]
        if a and b and b % a:
            g = gcd(a, b)
            diag[k], diag[k + 1] = g, a * b // g
    return diag


def elementary_divisors(rows: list[dict[int, int]], ncols: int) -> list[int]:
    """Smith diagonal of a sparse integer matrix, one entry per column (0 = free summand).

    Unit pivots are eliminated sparsely first; each contributes a divisor 1.
    """
    rows = [dict(r) for r in rows if r]
    cols: dict[int, set[int]] = {}
    for k, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(k)
    alive = set(range(len(rows)))
    ones = 0
    removed_cols: set[int] = set()
    def pick():
        # sparsest column first, shortest unit row within it
        for c in sorted((c for c in cols if c not in removed_cols and cols[c]), key=lambda c: len(cols[c])):
            best = None
            for k in cols[c]:
                if rows[k][c] in (1, -1) and (best is None or len(rows[k]) < len(rows[best])):
                    best = k
            if best is not None:
                return best, c
        return None

    while True:
        found = pick()
        if found is None:
            break
        k, c = found
        piv = rows[k]
        sign = piv[c]
        alive.discard(k)
        for cc in piv:
            cols[cc].discard(k)
        for other in list(cols[c]):
            r = rows[other]
            factor = r[c] * sign
            for cc, v in piv.items():
                nv = r.get(cc, 0) - factor * v
                if nv:
                    if cc not in r:
                        cols[cc].add(other)
                    r[cc] = nv
                elif cc in r:
                    del r[cc]
                    cols[cc].discard(other)
            if not r:
                alive.discard(other)
        removed_cols.add(c)
        ones += 1
    rest_cols = [c for c in range(ncols) if c not in removed_cols]
    position = {c: t for t, c in enumerate(rest_cols)}
    dense = []
    for k in sorted(alive):
        r = rows[k]
        if r:
            row = [0] * len(rest_cols)
            for c, v in r.items():
                row[position[c]] = v
            dense.append(row)
    tail = smith_diagonal(dense, len(rest_cols)) if dense else []
    tail += [0] * (len(rest_cols) - len(tail))
    return [1] * ones + sorted(tail, key=lambda d: (d == 0, d))
