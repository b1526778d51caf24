"""Finite subsets, incidence structures and the generic machinery on them.

Ground sets are ``{1, ..., n}``; element ``i`` is stored in bit ``i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

MAX_GROUND = 16


@dataclass(frozen=True)
class FiniteSubset:
    """A subset of ``{1..n}`` packed into an int."""

    bits: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.n > MAX_GROUND:
            raise ValueError(f"ground set size {self.n} outside 0..{MAX_GROUND}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} exceed ground set of size {self.n}")

    @classmethod
    def of(cls, n: int, elements: Iterable[int] = ()) -> "FiniteSubset":
        bits = 0
        for e in elements:
            if not 1 <= e <= n:
                raise ValueError(f"element {e} not in 1..{n}")
            bits |= 1 << (e - 1)
        return cls(bits, n)

    @classmethod
    def empty(cls, n: int) -> "FiniteSubset":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "FiniteSubset":
        return cls((1 << n) - 1, n)

    @classmethod
    def parse(cls, n: int, text: str) -> "FiniteSubset":
        """Inverse of ``str``: ``"{1,3}"``, ``"{}"`` or a bare ``"1,3"``."""
        body = text.strip().strip("{}").strip()
        if not body:
            return cls(0, n)
        return cls.of(n, (int(tok) for tok in body.split(",")))

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        b = self.bits
        while b:
            low = b & -b
            yield low.bit_length()
            b ^= low

    def __contains__(self, e: int) -> bool:
        return 1 <= e <= self.n and bool(self.bits >> (e - 1) & 1)

    def _check(self, other: "FiniteSubset"):
        if self.n != other.n:
            raise ValueError(f"ground sets differ: {self.n} vs {other.n}")

    def __xor__(self, other: "FiniteSubset") -> "FiniteSubset":
        self._check(other)
        return FiniteSubset(self.bits ^ other.bits, self.n)

    def __or__(self, other: "FiniteSubset") -> "FiniteSubset":
        self._check(other)
        return FiniteSubset(self.bits | other.bits, self.n)

    def __and__(self, other: "FiniteSubset") -> "FiniteSubset":
        self._check(other)
        return FiniteSubset(self.bits & other.bits, self.n)

    def __sub__(self, other: "FiniteSubset") -> "FiniteSubset":
        self._check(other)
        return FiniteSubset(self.bits & ~other.bits, self.n)

    def symmetric_difference(self, other: "FiniteSubset") -> "FiniteSubset":
        return self ^ other

    def issubset(self, other: "FiniteSubset") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def covered_by(self, other: "FiniteSubset") -> bool:
        """Direct successor test: ``self < other`` with one extra element."""
        return self.issubset(other) and len(other) == len(self) + 1

    def adjacent(self, other: "FiniteSubset") -> bool:
        """True when one set covers the other (Hamming distance one)."""
        self._check(other)
        return (self.bits ^ other.bits).bit_count() == 1

    def add(self, e: int) -> "FiniteSubset":
        return self | FiniteSubset.of(self.n, [e])

    def remove(self, e: int) -> "FiniteSubset":
        return self - FiniteSubset.of(self.n, [e])

    def complement(self) -> "FiniteSubset":
        return FiniteSubset(self.bits ^ ((1 << self.n) - 1), self.n)

    def sort_key(self) -> tuple[int, int]:
        return (len(self), self.bits)

    def __lt__(self, other: "FiniteSubset") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self) + "}"

    def __repr__(self) -> str:
        return f"FiniteSubset({self}, n={self.n})"


def subsets(n: int, k: int | None = None) -> list[FiniteSubset]:
    """All subsets of ``{1..n}`` (of size ``k`` if given) in canonical order."""
    out = [FiniteSubset(b, n) for b in range(1 << n) if k is None or b.bit_count() == k]
    out.sort(key=FiniteSubset.sort_key)
    return out


@dataclass(frozen=True)
class ConfigSignature:
    v: int
    r: int
    b: int
    k: int
    uniform: bool

    def __str__(self) -> str:
        tag = "" if self.uniform else " (non-uniform)"
        return f"({self.v},{self.r},{self.b},{self.k}){tag}"


class IncidenceStructure:
    """Points, blocks and a set of ``(point_index, block_index)`` flags.

    Labels are arbitrary hashables; instances are treated as immutable.
    """

    def __init__(self, points: Sequence[Hashable], blocks: Sequence[Hashable],
                 flags: Iterable[tuple[int, int]]):
        self.points = tuple(points)
        self.blocks = tuple(blocks)
        self.flags = frozenset((int(p), int(b)) for p, b in flags)
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate point labels")
        if len(set(self.blocks)) != len(self.blocks):
            raise ValueError("duplicate block labels")
        np_, nb = len(self.points), len(self.blocks)
        for p, b in self.flags:
            if not (0 <= p < np_ and 0 <= b < nb):
                raise ValueError(f"flag {(p, b)} references a missing point or block")

    @classmethod
    def from_blocks(cls, points: Sequence[Hashable], blocks: Sequence[Hashable],
                    members: Sequence[Iterable[Hashable]]) -> "IncidenceStructure":
        """Build from block labels and, per block, the labels of its points."""
        index = {p: i for i, p in enumerate(points)}
        flags = [(index[p], j) for j, ms in enumerate(members) for p in ms]
        return cls(points, blocks, flags)

    def __repr__(self) -> str:
        return (f"IncidenceStructure({len(self.points)} points, {len(self.blocks)} blocks, "
                f"{len(self.flags)} flags)")

    def __eq__(self, other) -> bool:
        if not isinstance(other, IncidenceStructure):
            return NotImplemented
        return (self.points == other.points and self.blocks == other.blocks
                and self.flags == other.flags)

    def __hash__(self) -> int:
        return hash((self.points, self.blocks, self.flags))

    @cached_property
    def point_index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def block_index(self) -> dict:
        return {b: i for i, b in enumerate(self.blocks)}

    @cached_property
    def blocks_on(self) -> tuple[frozenset[int], ...]:
        """For each point index, the indices of the blocks through it."""
        acc: list[set[int]] = [set() for _ in self.points]
        for p, b in self.flags:
            acc[p].add(b)
        return tuple(frozenset(s) for s in acc)

    @cached_property
    def points_on(self) -> tuple[frozenset[int], ...]:
        acc: list[set[int]] = [set() for _ in self.blocks]
        for p, b in self.flags:
            acc[b].add(p)
        return tuple(frozenset(s) for s in acc)

    @cached_property
    def point_masks(self) -> tuple[int, ...]:
        """Bitmask over block indices for each point."""
        return tuple(sum(1 << b for b in bs) for bs in self.blocks_on)

    @cached_property
    def block_masks(self) -> tuple[int, ...]:
        """Bitmask over point indices for each block."""
        return tuple(sum(1 << p for p in ps) for ps in self.points_on)

    def incident(self, point, block) -> bool:
        return (self.point_index[point], self.block_index[block]) in self.flags

    def block_points(self, block) -> list:
        return [self.points[i] for i in sorted(self.points_on[self.block_index[block]])]

    def point_blocks(self, point) -> list:
        return [self.blocks[i] for i in sorted(self.blocks_on[self.point_index[point]])]

    def dual(self) -> "IncidenceStructure":
        return IncidenceStructure(self.blocks, self.points, ((b, p) for p, b in self.flags))

    def substructure(self, points: Iterable | None = None,
                     blocks: Iterable | None = None) -> "IncidenceStructure":
        """Restrict to the given point and block labels, keeping the current order."""
        keep_p = set(self.points if points is None else points)
        keep_b = set(self.blocks if blocks is None else blocks)
        ps = [p for p in self.points if p in keep_p]
        bs = [b for b in self.blocks if b in keep_b]
        pi = {p: i for i, p in enumerate(ps)}
        bi = {b: i for i, b in enumerate(bs)}
        flags = [(pi[self.points[p]], bi[self.blocks[b]]) for p, b in self.flags
                 if self.points[p] in pi and self.blocks[b] in bi]
        return IncidenceStructure(ps, bs, flags)

    def without_blocks(self, blocks: Iterable) -> "IncidenceStructure":
        drop = set(blocks)
        return self.substructure(blocks=[b for b in self.blocks if b not in drop])

    def without_flag(self, point, block) -> "IncidenceStructure":
        f = (self.point_index[point], self.block_index[block])
        if f not in self.flags:
            raise ValueError(f"({point}, {block}) is not a flag")
        return IncidenceStructure(self.points, self.blocks, self.flags - {f})

    def relabel(self, point_map=None, block_map=None) -> "IncidenceStructure":
        pm = point_map or (lambda x: x)
        bm = block_map or (lambda x: x)
        return IncidenceStructure([pm(p) for p in self.points], [bm(b) for b in self.blocks],
                                  self.flags)

    def incidence_matrix(self, point_order=None, block_order=None) -> list[list[int]]:
        """0/1 matrix with one row per block and one column per point."""
        po = list(self.points if point_order is None else point_order)
        bo = list(self.blocks if block_order is None else block_order)
        return [[int(self.incident(p, b)) for p in po] for b in bo]


def _modal(values: Sequence[int]) -> tuple[int, bool]:
    if not values:
        return 0, True
    counts: dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    top = max(sorted(counts), key=lambda v: counts[v])
    return top, len(counts) == 1


def signature(S: IncidenceStructure) -> ConfigSignature:
    """Point/block counts and ranks; modal ranks are reported when not uniform."""
    if not S.points and not S.blocks:
        raise ValueError("empty structure")
    r, ur = _modal([len(bs) for bs in S.blocks_on])
    k, uk = _modal([len(ps) for ps in S.points_on])
    return ConfigSignature(len(S.points), r, len(S.blocks), k, ur and uk)


def dual(S: IncidenceStructure) -> IncidenceStructure:
    return S.dual()


def closure(S: IncidenceStructure, seed_points: Iterable = (), seed_blocks: Iterable = (),
            l1: int = 3, l2: int = 1) -> tuple[frozenset, frozenset]:
    """Least ``(l1, l2)``-closed pair containing the seeds.

    A block joins once it meets ``l1`` current points; a point joins once it
    lies on ``l2`` current blocks.
    """
    if l1 < 1 or l2 < 1:
        raise ValueError("l1 and l2 must be positive")
    pmask = 0
    for p in seed_points:
        pmask |= 1 << S.point_index[p]
    bmask = 0
    for b in seed_blocks:
        bmask |= 1 << S.block_index[b]
    bm, pm = S.block_masks, S.point_masks
    while True:
        new_b = bmask
        for j, m in enumerate(bm):
            if not new_b >> j & 1 and (m & pmask).bit_count() >= l1:
                new_b |= 1 << j
        new_p = pmask
        for i, m in enumerate(pm):
            if not new_p >> i & 1 and (m & new_b).bit_count() >= l2:
                new_p |= 1 << i
        if new_b == bmask and new_p == pmask:
            break
        bmask, pmask = new_b, new_p
    return (frozenset(p for i, p in enumerate(S.points) if pmask >> i & 1),
            frozenset(b for j, b in enumerate(S.blocks) if bmask >> j & 1))


def is_closed_substructure(S: IncidenceStructure, sub_points: Iterable, sub_blocks: Iterable,
                           l1: int | None, l2: int | None) -> bool:
    """Check both closure rules; pass ``None`` to skip one of them."""
    pset = {S.point_index[p] for p in sub_points}
    bset = {S.block_index[b] for b in sub_blocks}
    if l1 is not None:
        for j, ps in enumerate(S.points_on):
            if j not in bset and len(ps & pset) >= l1:
                return False
    if l2 is not None:
        for i, bs in enumerate(S.blocks_on):
            if i not in pset and len(bs & bset) >= l2:
                return False
    return True


# -- isomorphism search -------------------------------------------------------

class _Levi:
    """Levi graph as adjacency lists; points come first, then blocks."""

    def __init__(self, S: IncidenceStructure):
        self.np = len(S.points)
        self.size = self.np + len(S.blocks)
        adj: list[list[int]] = [[] for _ in range(self.size)]
        for p, b in S.flags:
            adj[p].append(self.np + b)
            adj[self.np + b].append(p)
        self.adj = [tuple(sorted(a)) for a in adj]
        self.adjset = [frozenset(a) for a in adj]

    def initial_colors(self) -> list[int]:
        return [(0 if v < self.np else 1, len(self.adj[v])) for v in range(self.size)]


def _refine(g1: _Levi, c1: list, g2: _Levi, c2: list):
    """Joint colour refinement of two graphs; ``None`` when the colourings diverge."""
    ncolors = -1
    while True:
        s1 = [(c1[v], tuple(sorted(c1[u] for u in g1.adj[v]))) for v in range(g1.size)]
        s2 = [(c2[v], tuple(sorted(c2[u] for u in g2.adj[v]))) for v in range(g2.size)]
        table = {s: i for i, s in enumerate(sorted(set(s1) | set(s2)))}
        c1 = [table[s] for s in s1]
        c2 = [table[s] for s in s2]
        if sorted(c1) != sorted(c2):
            return None
        if len(table) == ncolors:
            return c1, c2
        ncolors = len(table)


def _search(g1: _Levi, c1: list, g2: _Levi, c2: list) -> Iterator[list[int]]:
    refined = _refine(g1, c1, g2, c2)
    if refined is None:
        return
    c1, c2 = refined
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(c1):
        cells.setdefault(c, []).append(v)
    if len(cells) == g1.size:
        where = {c: w for w, c in enumerate(c2)}
        m = [where[c] for c in c1]
        if all(g2.adjset[m[v]] == {m[u] for u in g1.adj[v]} for v in range(g1.size)):
            yield m
        return
    color = min((c for c in cells if len(cells[c]) > 1), key=lambda c: (len(cells[c]), c))
    v = cells[color][0]
    fresh = max(c1) + 1
    for w in (w for w, c in enumerate(c2) if c == color):
        d1 = list(c1)
        d2 = list(c2)
        d1[v] = fresh
        d2[w] = fresh
        yield from _search(g1, d1, g2, d2)


def isomorphisms(S1: IncidenceStructure, S2: IncidenceStructure) -> Iterator[tuple[dict, dict]]:
    """All incidence-preserving bijections ``S1 -> S2`` as (point map, block map).

    Colour refinement on the Levi graphs, then individualisation and
    backtracking. Enumeration order is deterministic.
    """
    if len(S1.points) != len(S2.points) or len(S1.blocks) != len(S2.blocks) \
            or len(S1.flags) != len(S2.flags):
        return
    g1, g2 = _Levi(S1), _Levi(S2)
    for m in _search(g1, g1.initial_colors(), g2, g2.initial_colors()):
        pmap = {S1.points[v]: S2.points[m[v]] for v in range(g1.np)}
        bmap = {S1.blocks[v - g1.np]: S2.blocks[m[v] - g2.np] for v in range(g1.np, g1.size)}
        yield pmap, bmap


def find_isomorphism(S1: IncidenceStructure, S2: IncidenceStructure) -> tuple[dict, dict] | None:
    return next(isomorphisms(S1, S2), None)


def is_isomorphism(S1: IncidenceStructure, S2: IncidenceStructure, pmap: dict, bmap: dict) -> bool:
    """Independent check that a pair of label maps is an isomorphism."""
    if set(pmap) != set(S1.points) or set(bmap) != set(S1.blocks):
        return False
    if len(set(pmap.values())) != len(S2.points) or set(pmap.values()) != set(S2.points):
        return False
    if len(set(bmap.values())) != len(S2.blocks) or set(bmap.values()) != set(S2.blocks):
        return False
    image = {(S2.point_index[pmap[S1.points[p]]], S2.block_index[bmap[S1.blocks[b]]])
             for p, b in S1.flags}
    return image == set(S2.flags)
