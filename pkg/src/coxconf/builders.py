"""Constructions: Cox configurations, Grassmannians, clique structures and friends."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

from .core import MAX_GROUND, FiniteSubset, IncidenceStructure, subsets


def _check_n(n: int, low: int = 3):
    if not low <= n <= MAX_GROUND:
        raise ValueError(f"n={n} outside {low}..{MAX_GROUND}")


def cox(n: int) -> IncidenceStructure:
    """Even subsets of ``{1..n}`` as points, odd subsets as blocks, incidence = covering."""
    _check_n(n)
    everything = subsets(n)
    points = [a for a in everything if len(a) % 2 == 0]
    blocks = [a for a in everything if len(a) % 2 == 1]
    bidx = {b.bits: j for j, b in enumerate(blocks)}
    flags = [(i, bidx[p.bits ^ (1 << e)]) for i, p in enumerate(points) for e in range(n)]
    return IncidenceStructure(points, blocks, flags)


# Rows A_1..A_4, B_1..B_4; columns q_A, q_12, q_13, q_14, q_23, q_24, q_34, q_B.
STEINER_MIQUEL_MATRIX = (
    (1, 1, 1, 1, 0, 0, 0, 0),
    (1, 1, 0, 0, 1, 1, 0, 0),
    (1, 0, 1, 0, 1, 0, 1, 0),
    (1, 0, 0, 1, 0, 1, 1, 0),
    (0, 0, 0, 0, 1, 1, 1, 1),
    (0, 0, 1, 1, 0, 0, 1, 1),
    (0, 1, 0, 1, 0, 1, 0, 1),
    (0, 1, 1, 0, 1, 0, 0, 1),
)
STEINER_MIQUEL_POINTS = ("q_A", "q_12", "q_13", "q_14", "q_23", "q_24", "q_34", "q_B")
STEINER_MIQUEL_BLOCKS = ("A_1", "A_2", "A_3", "A_4", "B_1", "B_2", "B_3", "B_4")


def steiner_miquel_table() -> IncidenceStructure:
    """The classical Steiner-Miquel configuration, read off the literal incidence table."""
    flags = [(p, b) for b, row in enumerate(STEINER_MIQUEL_MATRIX) for p, x in enumerate(row) if x]
    return IncidenceStructure(STEINER_MIQUEL_POINTS, STEINER_MIQUEL_BLOCKS, flags)


def steiner_miquel_labels() -> dict[str, FiniteSubset]:
    """Classical names for the points and blocks of ``cox(4)``."""
    s = lambda *e: FiniteSubset.of(4, e)  # noqa: E731
    full = s(1, 2, 3, 4)
    labels = {"q_A": s(), "q_B": full}
    for i, j in combinations(range(1, 5), 2):
        labels[f"q_{i}{j}"] = s(i, j)
    for i in range(1, 5):
        labels[f"A_{i}"] = s(i)
        labels[f"B_{i}"] = full.remove(i)
    return labels


class Clique(NamedTuple):
    """A block of ``k_dagger`` or a maximal clique: a top T(key) or a star S(key)."""

    kind: str
    key: FiniteSubset

    def __str__(self) -> str:
        return f"{'T' if self.kind == 'top' else 'S'}{self.key}"


def _check_grass(n: int, k: int):
    _check_n(n, low=2)
    if not 1 < k + 1 < n:
        raise ValueError(f"need 1 < k+1 < n, got n={n}, k={k}")


def _top(b: FiniteSubset) -> list[FiniteSubset]:
    return [b.remove(e) for e in b]


def _star(h: FiniteSubset) -> list[FiniteSubset]:
    return [h.add(e) for e in range(1, h.n + 1) if e not in h]


def grassmannian(n: int, k: int) -> IncidenceStructure:
    """Combinatorial Grassmannian: k-subsets as points, tops of (k+1)-subsets as lines."""
    _check_grass(n, k)
    blocks = subsets(n, k + 1)
    return IncidenceStructure.from_blocks(subsets(n, k), blocks, [_top(b) for b in blocks])


def k_dagger(n: int, k: int) -> IncidenceStructure:
    """k-subsets with all tops and all stars as blocks."""
    _check_grass(n, k)
    tops = [Clique("top", b) for b in subsets(n, k + 1)]
    stars = [Clique("star", h) for h in subsets(n, k - 1)]
    members = [_top(c.key) for c in tops] + [_star(c.key) for c in stars]
    return IncidenceStructure.from_blocks(subsets(n, k), tops + stars, members)


def maximal_cliques(vertices: list, adjacent) -> list[frozenset]:
    """Bron-Kerbosch with pivoting; ``adjacent(u, v)`` is a symmetric predicate."""
    nbrs = {v: {u for u in vertices if u != v and adjacent(u, v)} for v in vertices}
    found: list[frozenset] = []

    def expand(r: set, p: set, x: set):
        if not p and not x:
            found.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(nbrs[u] & p))
        for v in list(p - nbrs[pivot]):
            expand(r | {v}, p & nbrs[v], x & nbrs[v])
            p.discard(v)
            x.add(v)

    expand(set(), set(vertices), set())
    return found


def max_cliques_grassmann(n: int, k: int) -> list[Clique]:
    """Maximal cliques of (k+1)-subsets, adjacent when they share a k-subset.

    Each clique is classified as a star S(u) (common k-subset u) or a top
    T(U) (union U of size k+2).
    """
    _check_grass(n, k)
    verts = subsets(n, k + 1)
    out = []
    for c in maximal_cliques(verts, lambda a, b: len(a & b) == k):
        inter = FiniteSubset.full(n)
        union = FiniteSubset.empty(n)
        for m in c:
            inter = inter & m
            union = union | m
        if len(inter) == k and set(_star(inter)) == c:
            out.append(Clique("star", inter))
        elif len(union) == k + 2 and set(_top(union)) == c:
            out.append(Clique("top", union))
        else:
            raise AssertionError(f"unclassified maximal clique {sorted(c)}")
    out.sort(key=lambda c: (c.kind != "star", c.key.sort_key()))
    return out


# -- completion of a Grassmannian to a Cox configuration ---------------------

@dataclass
class Gras2CoxReport:
    """Per-step record of the completion; empty families are kept, not skipped."""

    steps: list[dict] = field(default_factory=list)


def _meet_cliques(items: list[int], meets, common) -> list[frozenset]:
    """Maximal pairwise-meeting families of size >= 2 without a common element."""
    out = []
    for c in maximal_cliques(items, meets):
        if len(c) >= 2 and not common(c):
            out.append(c)
    return out


def _up_step(lines: dict[int, frozenset], new_id):
    """Improper points for planes of the current layer, then blocks joining them.

    ``lines`` maps line ids to their point-id sets. Returns the plane map
    (new point -> lines through it) and block map (new block -> new points).
    """
    lids = sorted(lines)
    planes = _meet_cliques(lids, lambda a, b: bool(lines[a] & lines[b]),
                           lambda c: bool(frozenset.intersection(*(lines[x] for x in c))))
    plane_pts = {new_id(): c for c in planes}
    pids = sorted(plane_pts)
    blocks = _meet_cliques(pids, lambda a, b: bool(plane_pts[a] & plane_pts[b]),
                           lambda c: bool(frozenset.intersection(*(plane_pts[x] for x in c))))
    return plane_pts, {new_id(): c for c in blocks}


def _down_step(points: list[int], lines: dict[int, frozenset], new_id):
    """Clique-blocks for maximal cliques of points, then ideal points joining them."""
    line_sets = set(lines.values())

    def collinear(a, b):
        return any(a in s and b in s for s in lines.values())

    cliques = [c for c in maximal_cliques(points, collinear) if c not in line_sets]
    clique_blocks = {new_id(): c for c in cliques}
    cids = sorted(clique_blocks)
    ideal = _meet_cliques(cids, lambda a, b: bool(clique_blocks[a] & clique_blocks[b]),
                          lambda c: bool(frozenset.intersection(*(clique_blocks[x] for x in c))))
    return clique_blocks, {new_id(): c for c in ideal}


def gras2cox(n: int, report: Gras2CoxReport | None = None) -> IncidenceStructure:
    """Complete the generalized Desargues configuration ``G(n, 2)`` to a Cox configuration.

    The construction runs on anonymous integer ids; only the starting
    Grassmannian carries subset labels. Every added object gets a derived
    label (union of the planes or lines it is built from going up,
    intersection going down) once the construction finishes.
    """
    _check_n(n, low=4)
    G = grassmannian(n, 2)
    counter = iter(range(10 ** 9))
    new_id = lambda: next(counter)  # noqa: E731
    pid = {p: new_id() for p in G.points}
    lid = {b: new_id() for b in G.blocks}
    point_label = {pid[p]: p for p in G.points}
    block_label = {lid[b]: b for b in G.blocks}
    incid: set[tuple[int, int]] = {(pid[G.points[p]], lid[G.blocks[b]]) for p, b in G.flags}
    report = report if report is not None else Gras2CoxReport()

    # upward
    layer_lines = {lid[b]: frozenset(pid[p] for p in G.block_points(b)) for b in G.blocks}
    level = 2
    while True:
        plane_pts, new_blocks = _up_step(layer_lines, new_id)
        report.steps.append({"direction": "up", "from_level": level,
                             "improper_points": len(plane_pts), "joining_blocks": len(new_blocks)})
        if not plane_pts:
            break
        for q, lines in plane_pts.items():
            point_label[q] = _union(block_label[x] for x in lines)
            incid.update((q, x) for x in lines)
        for blk, pts in new_blocks.items():
            block_label[blk] = _union(point_label[q] for q in pts)
            incid.update((q, blk) for q in pts)
        layer_lines = new_blocks
        level += 2

    # downward
    layer_points = [pid[p] for p in G.points]
    layer_lines = {lid[b]: frozenset(pid[p] for p in G.block_points(b)) for b in G.blocks}
    level = 2
    while level > 0:
        clique_blocks, ideal = _down_step(layer_points, layer_lines, new_id)
        report.steps.append({"direction": "down", "from_level": level,
                             "clique_blocks": len(clique_blocks), "ideal_points": len(ideal)})
        for blk, pts in clique_blocks.items():
            block_label[blk] = _intersection(point_label[q] for q in pts)
            incid.update((q, blk) for q in pts)
        for q, blks in ideal.items():
            point_label[q] = _intersection(block_label[x] for x in blks)
            incid.update((q, x) for x in blks)
        layer_points = sorted(ideal)
        layer_lines = {b: frozenset(q for q in ideal if b in ideal[q]) for b in clique_blocks}
        level -= 2

    pts = sorted(point_label.values(), key=FiniteSubset.sort_key)
    blks = sorted(block_label.values(), key=FiniteSubset.sort_key)
    pi = {p: i for i, p in enumerate(pts)}
    bi = {b: j for j, b in enumerate(blks)}
    return IncidenceStructure(pts, blks, [(pi[point_label[q]], bi[block_label[b]])
                                          for q, b in incid])


def _union(items) -> FiniteSubset:
    items = list(items)
    out = items[0]
    for x in items[1:]:
        out = out | x
    return out


def _intersection(items) -> FiniteSubset:
    items = list(items)
    out = items[0]
    for x in items[1:]:
        out = out & x
    return out


# -- local substructures ------------------------------------------------------

@dataclass
class Residual:
    structure: IncidenceStructure
    blocks_through: int
    formula_count: int | None
    pairwise_meet: bool


def residual_at_point(S: IncidenceStructure, p) -> Residual:
    """Blocks through ``p`` with ``p`` deleted, on the points of rank >= 2 among them.

    ``formula_count`` is ``|X| - |p|`` for subset-labelled points; it is
    reported next to the actual number of blocks rather than reconciled.
    """
    if p not in S.point_index:
        raise ValueError(f"{p} is not a point")
    pi = S.point_index[p]
    through = sorted(S.blocks_on[pi])
    counts: dict[int, int] = {}
    for b in through:
        for q in S.points_on[b]:
            if q != pi:
                counts[q] = counts.get(q, 0) + 1
    keep = sorted(q for q, c in counts.items() if c >= 2)
    keep_set = set(keep)
    res = S.substructure(points=[S.points[q] for q in keep], blocks=[S.blocks[b] for b in through])
    meet = all(S.points_on[a] & S.points_on[b] & keep_set for a, b in combinations(through, 2))
    formula = p.n - len(p) if isinstance(p, FiniteSubset) else None
    return Residual(res, len(through), formula, meet)


def disjoint_blocks(S: IncidenceStructure, D) -> list:
    d = S.points_on[S.block_index[D]]
    return [S.blocks[j] for j, ps in enumerate(S.points_on) if not ps & d]


def miquel_substructure(D: FiniteSubset) -> IncidenceStructure:
    """``cox(4)`` without ``D`` and its unique disjoint partner."""
    H = cox(4)
    if D not in H.block_index:
        raise ValueError(f"{D} is not a block of cox(4)")
    partner = disjoint_blocks(H, D)
    if len(partner) != 1:
        raise AssertionError(f"expected one disjoint partner, found {partner}")
    return H.without_blocks([D, partner[0]])


# -- decomposition into translated sub-configurations -------------------------

@dataclass
class Member:
    family: int
    shift: FiniteSubset
    points: frozenset
    blocks: frozenset
    flags: frozenset


@dataclass
class Decomposition:
    families: tuple[list[Member], list[Member]]
    assignment: dict
    coverage_counts: dict
    covers_exactly_once: bool
    transversal: bool

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.families[0]), len(self.families[1])


def _translated_member(n: int, family: int, part: FiniteSubset, shift: FiniteSubset) -> Member:
    elems = list(part)
    labels = []
    for r in range(len(elems) + 1):
        for c in combinations(elems, r):
            labels.append(FiniteSubset.of(n, c) ^ shift)
    flags = set()
    for a in labels:
        for e in elems:
            b = a ^ FiniteSubset.of(n, [e])
            if len(a) % 2 == 0:
                flags.add((a, b))
    pts = frozenset(a for a in labels if len(a) % 2 == 0)
    blks = frozenset(a for a in labels if len(a) % 2 == 1)
    return Member(family, shift, pts, blks, frozenset(flags))


def decompose(n: int, X1: FiniteSubset, X2: FiniteSubset) -> Decomposition:
    """Cover ``cox(n)`` by translates of ``cox(X1)`` and ``cox(X2)``."""
    _check_n(n)
    if X1.n != n or X2.n != n:
        raise ValueError("parts must live on the ground set of size n")
    if (X1 & X2).bits or (X1 | X2) != FiniteSubset.full(n) or not X1.bits or not X2.bits:
        raise ValueError(f"{X1} and {X2} do not partition 1..{n}")
    parts = (X1, X2)
    families: tuple[list[Member], list[Member]] = ([], [])
    for i in (0, 1):
        other = list(parts[1 - i])
        for r in range(len(other) + 1):
            for c in combinations(other, r):
                families[i].append(_translated_member(n, i + 1, parts[i], FiniteSubset.of(n, c)))
    C = cox(n)
    owners: dict = {}
    for fam in families:
        for m in fam:
            for f in m.flags:
                owners.setdefault(f, []).append(m)
    counts = {}
    assignment = {}
    for p, b in C.flags:
        f = (C.points[p], C.blocks[b])
        hits = owners.get(f, [])
        counts[f] = len(hits)
        if hits:
            assignment[f] = (hits[0].family, hits[0].shift)
    transversal = all(len((m1.points | m1.blocks) & (m2.points | m2.blocks)) == 1
                      for m1 in families[0] for m2 in families[1])
    return Decomposition(families, assignment, counts,
                         all(c == 1 for c in counts.values()), transversal)


# -- graphs -------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: frozenset

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def same_labeled(self, other: "Graph") -> bool:
        return set(self.vertices) == set(other.vertices) and self.edges == other.edges


def levi_graph(S: IncidenceStructure) -> Graph:
    """Bipartite incidence graph; labels are used as vertices when points and blocks are disjoint."""
    if set(S.points) & set(S.blocks):
        pv = [("P", p) for p in S.points]
        bv = [("B", b) for b in S.blocks]
    else:
        pv, bv = list(S.points), list(S.blocks)
    return Graph(tuple(pv + bv), frozenset(frozenset((pv[p], bv[b])) for p, b in S.flags))


def hypercube(n: int) -> Graph:
    _check_n(n, low=0)
    verts = subsets(n)
    edges = frozenset(frozenset((a, FiniteSubset(a.bits | 1 << e, n)))
                      for a in verts for e in range(n) if not a.bits >> e & 1)
    return Graph(tuple(verts), edges)
