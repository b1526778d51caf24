"""Collineations and correlations of Cox configurations.

A group element is a pair ``(phi, A)`` acting by ``a -> phi(a) ^ A``:
permute first, then translate by symmetric difference. The other
convention (translate first) differs by conjugation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Iterator

from .builders import cox
from .core import FiniteSubset, IncidenceStructure, isomorphisms, subsets

BRUTE_FORCE_CAP = 64


def _perm_bits(phi: tuple[int, ...], bits: int) -> int:
    out = 0
    while bits:
        low = bits & -bits
        out |= 1 << phi[low.bit_length() - 1]
        bits ^= low
    return out


@dataclass(frozen=True)
class CoxMap:
    """``phi`` is a tuple of 0-based images: element ``i + 1`` goes to ``phi[i] + 1``."""

    phi: tuple[int, ...]
    A: FiniteSubset

    def __post_init__(self):
        if sorted(self.phi) != list(range(len(self.phi))):
            raise ValueError(f"{self.phi} is not a permutation")
        if self.A.n != len(self.phi):
            raise ValueError("translation and permutation live on different ground sets")

    @property
    def n(self) -> int:
        return len(self.phi)

    @classmethod
    def identity(cls, n: int) -> "CoxMap":
        return cls(tuple(range(n)), FiniteSubset.empty(n))

    @classmethod
    def permutation(cls, n: int, cycles=()) -> "CoxMap":
        """From 1-based cycles, e.g. ``[(1, 2), (3, 4, 5)]``."""
        phi = list(range(n))
        for cyc in cycles:
            for x, y in zip(cyc, cyc[1:] + cyc[:1]):
                phi[x - 1] = y - 1
        return cls(tuple(phi), FiniteSubset.empty(n))

    @classmethod
    def translation(cls, A: FiniteSubset) -> "CoxMap":
        return cls(tuple(range(A.n)), A)

    @property
    def kind(self) -> str:
        return "collineation" if len(self.A) % 2 == 0 else "correlation"

    def permute(self, a: FiniteSubset) -> FiniteSubset:
        return FiniteSubset(_perm_bits(self.phi, a.bits), a.n)

    def __call__(self, a: FiniteSubset) -> FiniteSubset:
        return apply(self, a)

    def __matmul__(self, other: "CoxMap") -> "CoxMap":
        return compose(self, other)

    def inverse(self) -> "CoxMap":
        inv = [0] * self.n
        for i, j in enumerate(self.phi):
            inv[j] = i
        inv_t = tuple(inv)
        return CoxMap(inv_t, FiniteSubset(_perm_bits(inv_t, self.A.bits), self.n))

    def point_map(self, S: IncidenceStructure) -> dict:
        return {p: apply(self, p) for p in S.points}

    def block_map(self, S: IncidenceStructure) -> dict:
        return {b: apply(self, b) for b in S.blocks}

    def __str__(self) -> str:
        cyc = _cycles(self.phi)
        perm = "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc) or "id"
        return f"{perm} then ^{self.A}"


def _cycles(phi) -> list[list[int]]:
    seen, out = set(), []
    for i in range(len(phi)):
        if i in seen or phi[i] == i:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j)
            j = phi[j]
        out.append(c)
    return out


def apply(g: CoxMap, a: FiniteSubset) -> FiniteSubset:
    if a.n != g.n:
        raise ValueError("ground sets differ")
    return FiniteSubset(_perm_bits(g.phi, a.bits) ^ g.A.bits, a.n)


def compose(g1: CoxMap, g2: CoxMap) -> CoxMap:
    """``g1`` after ``g2``."""
    if g1.n != g2.n:
        raise ValueError("ground sets differ")
    phi = tuple(g1.phi[g2.phi[i]] for i in range(g1.n))
    return CoxMap(phi, FiniteSubset(g1.A.bits ^ _perm_bits(g1.phi, g2.A.bits), g1.n))


@dataclass
class CoxGroup:
    """All maps ``(phi, A)`` on a ground set of size ``n``."""

    n: int

    @property
    def order(self) -> int:
        return factorial(self.n) * 2 ** self.n

    @property
    def collineation_order(self) -> int:
        return factorial(self.n) * 2 ** (self.n - 1)

    def generators(self, collineations_only: bool = False) -> list[CoxMap]:
        n = self.n
        gens = [CoxMap.permutation(n, [(i, i + 1)]) for i in range(1, n)]
        if collineations_only:
            gens.append(CoxMap.translation(FiniteSubset.of(n, [1, 2])))
        else:
            gens.append(CoxMap.translation(FiniteSubset.of(n, [1])))
        return gens

    def elements(self, kind: str | None = None) -> Iterator[CoxMap]:
        for phi in permutations(range(self.n)):
            for A in subsets(self.n):
                g = CoxMap(phi, A)
                if kind is None or g.kind == kind:
                    yield g

    def collineations(self) -> Iterator[CoxMap]:
        return self.elements("collineation")

    def correlations(self) -> Iterator[CoxMap]:
        return self.elements("correlation")


def full_group(n: int) -> CoxGroup:
    if not 1 <= n <= 10:
        raise ValueError("full iteration is limited to n <= 10")
    return CoxGroup(n)


def even_subsets_closed(n: int) -> bool:
    """Even-size subsets are closed under symmetric difference."""
    evens = [a for a in subsets(n) if len(a) % 2 == 0]
    es = set(evens)
    return FiniteSubset.empty(n) in es and all(a ^ b in es for a in evens for b in evens)


# -- brute force oracle -------------------------------------------------------

def _guard(S: IncidenceStructure, cap: int):
    if len(S.points) + len(S.blocks) > cap:
        raise ValueError(f"{len(S.points) + len(S.blocks)} elements exceeds brute-force cap {cap}")


def brute_force_automorphisms(S: IncidenceStructure, cap: int = BRUTE_FORCE_CAP) -> list[tuple[dict, dict]]:
    """Every collineation of ``S`` as a (point map, block map) pair."""
    _guard(S, cap)
    return list(isomorphisms(S, S))


def brute_force_correlations(S: IncidenceStructure, cap: int = BRUTE_FORCE_CAP) -> list[tuple[dict, dict]]:
    """Every correlation: a point-to-block map with its block-to-point partner."""
    _guard(S, cap)
    return list(isomorphisms(S, S.dual()))


def as_maps(g: CoxMap, S: IncidenceStructure) -> tuple[dict, dict]:
    return g.point_map(S), g.block_map(S)


def _freeze(maps: tuple[dict, dict]):
    pm, bm = maps
    return (frozenset(pm.items()), frozenset(bm.items()))


def oracle_matches_generators(n: int) -> dict:
    """Compare brute force with the ``(phi, A)`` description, element by element."""
    S = cox(n)
    G = full_group(n)
    brute_aut = {_freeze(m) for m in brute_force_automorphisms(S)}
    brute_cor = {_freeze(m) for m in brute_force_correlations(S)}
    gen_aut = {_freeze(as_maps(g, S)) for g in G.collineations()}
    gen_cor = {_freeze(as_maps(g, S)) for g in G.correlations()}
    return {
        "automorphisms": len(brute_aut),
        "correlations": len(brute_cor),
        "automorphisms_equal": brute_aut == gen_aut,
        "correlations_equal": brute_cor == gen_cor,
    }


# -- orbits and stabilisers ---------------------------------------------------

def flag_orbit(n: int, flag: tuple[FiniteSubset, FiniteSubset]) -> set:
    """Orbit of a (point, block) flag under the collineation generators."""
    p, b = flag
    if len(p) % 2 or len(b) % 2 == 0 or not p.adjacent(b):
        raise ValueError(f"({p}, {b}) is not a flag of cox({n})")
    gens = CoxGroup(n).generators(collineations_only=True)
    seen = {flag}
    queue = deque([flag])
    while queue:
        x, y = queue.popleft()
        for g in gens:
            img = (apply(g, x), apply(g, y))
            if img not in seen:
                seen.add(img)
                queue.append(img)
    return seen


def point_orbit(n: int, p: FiniteSubset) -> set:
    gens = CoxGroup(n).generators(collineations_only=True)
    seen = {p}
    queue = deque([p])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = apply(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def stabilizer(n: int, point: FiniteSubset) -> list[tuple[dict, dict]]:
    S = cox(n)
    return [m for m in brute_force_automorphisms(S) if m[0][point] == point]


@dataclass
class StabilizerReport:
    order: int
    equals_permutations: bool


def stabilizer_of_empty(n: int) -> StabilizerReport:
    """Brute-force stabiliser of the empty set, compared with the pure permutations."""
    if n > 5:
        raise ValueError("brute-force stabiliser limited to n <= 5")
    S = cox(n)
    stab = {_freeze(m) for m in stabilizer(n, FiniteSubset.empty(n))}
    perms = {_freeze(as_maps(CoxMap(phi, FiniteSubset.empty(n)), S))
             for phi in permutations(range(n))}
    return StabilizerReport(len(stab), stab == perms)


def conjugate_stabilizers(n: int, p: FiniteSubset) -> bool:
    """The stabiliser of ``p`` is the translate-conjugate of the stabiliser of the empty set."""
    t = CoxMap.translation(p)
    S = cox(n)
    stab_p = {_freeze(m) for m in stabilizer(n, p)}
    conj = set()
    for phi in permutations(range(n)):
        g = compose(compose(t, CoxMap(phi, FiniteSubset.empty(n))), t.inverse())
        conj.add(_freeze(as_maps(g, S)))
    return stab_p == conj


def kdagger_extension_maps(n: int, k: int) -> list[CoxMap]:
    """Maps ``(tau_X)^e . phi~`` that should restrict to automorphisms of K-dagger(X, k), ``n = 2k``."""
    if n != 2 * k:
        raise ValueError("requires n = 2k")
    full = FiniteSubset.full(n)
    return [CoxMap(phi, A) for A in (FiniteSubset.empty(n), full) for phi in permutations(range(n))]


def kdagger_map_is_automorphism(g: CoxMap, S: IncidenceStructure) -> bool:
    """Check that ``g`` induces an automorphism of a K-dagger structure (blocks as point sets)."""
    blocks = {frozenset(S.block_points(b)) for b in S.blocks}
    if any(apply(g, p) not in S.point_index for p in S.points):
        return False
    return all(frozenset(apply(g, p) for p in bp) in blocks for bp in blocks)


def permutation_is_multiplicative(n: int) -> bool:
    """``phi -> phi~`` is injective and respects composition on all of S_n."""
    perms = list(permutations(range(n)))
    lifted = {}
    for phi in perms:
        img = tuple(_perm_bits(phi, b) for b in range(1 << n))
        lifted[phi] = img
    if len(set(lifted.values())) != len(perms):
        return False
    for f in perms:
        for g in perms:
            fg = tuple(f[g[i]] for i in range(n))
            if lifted[fg] != tuple(lifted[f][lifted[g][b]] for b in range(1 << n)):
                return False
    return True


def parity_law_holds(g1: CoxMap, g2: CoxMap) -> bool:
    same = g1.kind == g2.kind
    return (compose(g1, g2).kind == "collineation") == same


def translation_preserves_parity(A: FiniteSubset) -> bool:
    """``a -> a ^ A`` keeps even sets even exactly when ``|A|`` is even."""
    keeps = all(len(a ^ A) % 2 == 0 for a in subsets(A.n) if len(a) % 2 == 0)
    return keeps == (len(A) % 2 == 0)

