"""Todd-Coxeter coset enumeration over the trivial subgroup.

Letters are integers: 2k is generator k, 2k+1 its formal inverse, so ``x ^ 1``
inverts a letter. A completed table is the regular permutation representation,
and a word is the identity iff it fixes the base coset 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .smith import elementary_divisors

DEFAULT_MAX_COSETS = 2_000_000


class Overflow(RuntimeError):
    def __init__(self, max_cosets: int, high_water: int):
        super().__init__(f"coset enumeration exceeded {max_cosets} live cosets (high-water {high_water})")
        self.max_cosets = max_cosets
        self.high_water = high_water


def free_reduce(word: Iterable[int]) -> list[int]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return out


def cyclic_reduce(word: Sequence[int]) -> list[int]:
    w = free_reduce(word)
    while len(w) >= 2 and w[0] == w[-1] ^ 1:
        w = w[1:-1]
    return w


def invert(word: Sequence[int]) -> list[int]:
    return [x ^ 1 for x in reversed(word)]


def _cyclic_key(word: list[int]) -> tuple[int, ...]:
    """Smallest rotation of the word or of its inverse."""
    best = None
    for w in (word, invert(word)):
        for k in range(len(w)):
            r = tuple(w[k:] + w[:k])
            if best is None or r < best:
                best = r
    return best or ()


@dataclass
class Presentation:
    ngens: int
    relators: list[list[int]]
    names: list[str] | None = None
    dedupe: bool = True

    def __post_init__(self):
        for r in self.relators:
            for x in r:
                if not 0 <= x < 2 * self.ngens:
                    raise ValueError(f"letter {x} outside the alphabet of {self.ngens} generators")
        rels = []
        seen = set()
        for r in self.relators:
            w = cyclic_reduce(r)
            if not w:
                continue
            if self.dedupe:
                key = _cyclic_key(w)
                if key in seen:
                    continue
                seen.add(key)
            rels.append(w)
        self.relators = rels

    @classmethod
    def parse(cls, text: str, ngens: int | None = None) -> Presentation:
        """One relator per line, g<k> for generator k and G<k> for its inverse; '#' starts a comment.

        A comment of the form '# generators: N' fixes the generator count.
        """
        rels = []
        top = -1
        for line in text.splitlines():
            m = re.match(r"\s*#\s*generators\s*:\s*(\d+)", line)
            if m:
                ngens = int(m.group(1))
                continue
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = re.findall(r"([gG])(\d+)", line)
            if re.sub(r"[gG]\d+|\s", "", line):
                raise ValueError(f"cannot parse relator line {line!r}")
            word = [2 * int(k) + (1 if c == "G" else 0) for c, k in tokens]
            top = max([top] + [int(k) for _, k in tokens])
            rels.append(word)
        if ngens is None:
            ngens = top + 1
        return cls(ngens, rels)

    def to_text(self) -> str:
        lines = [f"# generators: {self.ngens}"]
        for r in self.relators:
            lines.append(" ".join(("G" if x & 1 else "g") + str(x >> 1) for x in r))
        return "\n".join(lines) + "\n"


@dataclass
class CosetTable:
    """Completed, standardized coset table; rows are cosets, columns letters."""

    table: np.ndarray
    ngens: int
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self.table = np.ascontiguousarray(self.table, dtype=np.int32)
        self.table.setflags(write=False)
        if (self.table < 0).any():
            raise ValueError("coset table is incomplete")

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def trace(self, word: Iterable[int], start: int = 0) -> int:
        t = self.table
        c = start
        for x in word:
            c = t[c, x]
        return int(c)

    def word_is_identity(self, word: Iterable[int]) -> bool:
        return self.trace(word, 0) == 0

    def word_perm(self, word: Iterable[int]) -> np.ndarray:
        """Permutation c -> c.word on all cosets."""
        perm = np.arange(self.order, dtype=self.table.dtype)
        for x in word:
            perm = self.table[perm, x]
        return perm

    def is_compatible(self, relators: Iterable[Sequence[int]]) -> bool:
        """Every relator traces a closed loop at every coset."""
        start = np.arange(self.order, dtype=self.table.dtype)
        for r in relators:
            c = start
            for x in r:
                c = self.table[c, x]
            if not np.array_equal(c, start):
                return False
        return True

    def dump(self, path: str | Path) -> None:
        """Row-major 32-bit little-endian coset indices."""
        self.table.astype("<u4").tofile(str(path))

    @classmethod
    def load(cls, path: str | Path, ngens: int) -> CosetTable:
        flat = np.fromfile(str(path), dtype="<u4")
        return cls(flat.reshape(-1, 2 * ngens).astype(np.int32), ngens)


def group_order(t: CosetTable) -> int:
    return t.order


def word_is_identity(t: CosetTable, word: Iterable[int]) -> bool:
    return t.word_is_identity(word)


class _Enumerator:
    def __init__(self, p: Presentation, max_cosets: int):
        self.ngens = p.ngens
        self.ncols = 2 * p.ngens
        self.rels = [list(r) for r in p.relators]
        self.max_cosets = max_cosets
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent: list[int] = [0]
        self.nlive = 1
        self.high_water = 1
        self.deductions: list[tuple[int, int]] = []
        self.record_deductions = False
        self.defined = 1

    # union-find over coincident cosets
    def rep(self, c: int) -> int:
        parent = self.parent
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(self, c: int, x: int) -> None:
        if self.nlive >= self.max_cosets:
            raise Overflow(self.max_cosets, self.high_water)
        b = len(self.table)
        row = [-1] * self.ncols
        row[x ^ 1] = c
        self.table.append(row)
        self.parent.append(b)
        self.table[c][x] = b
        self.nlive += 1
        self.defined += 1
        if self.nlive > self.high_water:
            self.high_water = self.nlive
        if self.record_deductions:
            self.deductions.append((c, x))

    def _merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.parent[b] = a
        self.nlive -= 1
        queue.append(b)

    def coincidence(self, a: int, b: int) -> None:
        table = self.table
        queue: list[int] = []
        self._merge(a, b, queue)
        k = 0
        while k < len(queue):
            g = queue[k]
            k += 1
            row = table[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                xi = x ^ 1
                if table[d][xi] == g:
                    table[d][xi] = -1
                mu = self.rep(g)
                nu = self.rep(d)
                if table[mu][x] >= 0:
                    self._merge(nu, table[mu][x], queue)
                elif table[nu][xi] >= 0:
                    self._merge(mu, table[nu][xi], queue)
                else:
                    table[mu][x] = nu
                    table[nu][xi] = mu
                    if self.record_deductions:
                        self.deductions.append((mu, x))

    def scan(self, a: int, w: list[int], fill: bool) -> None:
        table = self.table
        f = a
        i = 0
        b = a
        j = len(w) - 1
        while True:
            while i <= j:
                nxt = table[f][w[i]]
                if nxt < 0:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != a:
                    self.coincidence(f, a)
                return
            while j >= i:
                nxt = table[b][w[j] ^ 1]
                if nxt < 0:
                    break
                b = nxt
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                x = w[i]
                table[f][x] = b
                table[b][x ^ 1] = f
                if self.record_deductions:
                    self.deductions.append((f, x))
                return
            if not fill:
                return
            self.define(f, w[i])

    def lookahead(self) -> None:
        for c in range(len(self.table)):
            if self.parent[c] != c:
                continue
            for r in self.rels:
                self.scan(c, r, fill=False)
                if self.parent[c] != c:
                    break

    def hlt(self, lookahead_every: int) -> None:
        next_look = lookahead_every
        a = 0
        while a < len(self.table):
            if self.parent[a] == a:
                for r in self.rels:
                    self.scan(a, r, fill=True)
                    if self.parent[a] != a:
                        break
                if self.parent[a] == a:
                    row = self.table[a]
                    for x in range(self.ncols):
                        if row[x] < 0:
                            self.define(a, x)
            a += 1
            if lookahead_every and self.defined >= next_look:
                self.lookahead()
                next_look = self.defined + lookahead_every

    def felsch(self) -> None:
        self.record_deductions = True
        by_letter: list[list[list[int]]] = [[] for _ in range(self.ncols)]
        for r in self.rels:
            for w in (r, invert(r)):
                for k in range(len(w)):
                    rot = w[k:] + w[:k]
                    by_letter[rot[0]].append(rot)
        for lst in by_letter:
            uniq = {tuple(w): w for w in lst}
            lst[:] = list(uniq.values())
        # fill cosets 0.. in order, closing every relator at coset 0 first
        for r in self.rels:
            self.scan(0, r, fill=True)
        self._process(by_letter)
        a = 0
        while a < len(self.table):
            if self.parent[a] == a:
                row = self.table[a]
                for x in range(self.ncols):
                    if self.parent[a] != a:
                        break
                    if row[x] < 0:
                        self.define(a, x)
                        self._process(by_letter)
            a += 1

    def _process(self, by_letter) -> None:
        while self.deductions:
            c, x = self.deductions.pop()
            if self.parent[c] != c:
                continue
            for w in by_letter[x]:
                self.scan(c, w, fill=False)
                if self.parent[c] != c:
                    break
            d = self.table[c][x]
            if d >= 0 and self.parent[c] == c:
                d = self.rep(d)
                for w in by_letter[x ^ 1]:
                    self.scan(d, w, fill=False)
                    if self.parent[d] != d:
                        break

    def result(self) -> np.ndarray:
        """Live cosets renumbered in breadth-first order from coset 0."""
        table = self.table
        order = [0]
        index = {0: 0}
        k = 0
        while k < len(order):
            row = table[order[k]]
            for x in range(self.ncols):
                d = self.rep(row[x])
                if d not in index:
                    index[d] = len(order)
                    order.append(d)
            k += 1
        out = np.empty((len(order), self.ncols), dtype=np.int32)
        for new, old in enumerate(order):
            out[new] = [index[self.rep(d)] for d in table[old]]
        return out


def todd_coxeter(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS, strategy: str = "hlt",
                 lookahead_every: int = 200_000) -> CosetTable:
    """Enumerate cosets of the trivial subgroup; raises Overflow past max_cosets live cosets."""
    e = _Enumerator(p, max_cosets)
    if strategy == "hlt":
        e.hlt(lookahead_every)
    elif strategy == "felsch":
        e.felsch()
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    t = CosetTable(e.result(), p.ngens, {"defined": e.defined, "high_water": e.high_water, "strategy": strategy})
    return t


def exponent_matrix(p: Presentation, relators: Iterable[Sequence[int]] | None = None) -> list[dict[int, int]]:
    """Exponent-sum rows as sparse dicts {generator: exponent}."""
    rows = []
    for r in (p.relators if relators is None else relators):
        row: dict[int, int] = {}
        for x in r:
            k = x >> 1
            row[k] = row.get(k, 0) + (-1 if x & 1 else 1)
        row = {k: v for k, v in row.items() if v}
        if row:
            rows.append(row)
    return rows


def abelianization_invariants(p: Presentation, relators: Iterable[Sequence[int]] | None = None) -> list[int]:
    """Diagonal of the Smith form of the exponent-sum matrix, one entry per generator (0 = free Z)."""
    return elementary_divisors(exponent_matrix(p, relators), p.ngens)
