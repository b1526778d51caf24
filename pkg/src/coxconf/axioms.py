"""Decision procedures for the incidence conditions and the Miquel axiom."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterator

from .core import IncidenceStructure

CONDITIONS = ("I", "II", "III", "IV", "V")
DEFAULT_BUDGET = 10 ** 7


@dataclass
class CheckResult:
    ok: bool
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _common(masks, idxs) -> int:
    m = -1
    for i in idxs:
        m &= masks[i]
    return m


def _cond_I(S: IncidenceStructure) -> CheckResult:
    pm = S.point_masks
    for p, q in combinations(range(len(S.points)), 2):
        c = (pm[p] & pm[q]).bit_count()
        if c not in (0, 2):
            return CheckResult(False, (S.points[p], S.points[q]),
                               f"{c} blocks through the pair")
    return CheckResult(True)


def _cond_II(S: IncidenceStructure) -> CheckResult:
    bm = S.block_masks
    for b, c in combinations(range(len(S.blocks)), 2):
        common = bm[b] & bm[c]
        if common.bit_count() >= 3:
            pts = [i for i in range(len(S.points)) if common >> i & 1][:3]
            return CheckResult(False, tuple(S.points[i] for i in pts) + (S.blocks[b], S.blocks[c]),
                               "three points on two blocks")
    return CheckResult(True)


def _cond_III(S: IncidenceStructure) -> CheckResult:
    for j, ps in enumerate(S.points_on):
        if len(ps) < 3:
            return CheckResult(False, (S.blocks[j],), f"block has {len(ps)} points")
    return CheckResult(True)


def _collinearity(S: IncidenceStructure) -> list[int]:
    pm = S.point_masks
    nbr = [0] * len(S.points)
    for p, q in combinations(range(len(S.points)), 2):
        if pm[p] & pm[q]:
            nbr[p] |= 1 << q
            nbr[q] |= 1 << p
    return nbr


def _cond_IV(S: IncidenceStructure) -> CheckResult:
    pm = S.point_masks
    nbr = _collinearity(S)
    for p in range(len(S.points)):
        later = nbr[p] >> (p + 1) << (p + 1)
        qs = [q for q in range(p + 1, len(S.points)) if later >> q & 1]
        for i, q in enumerate(qs):
            for r in qs[i + 1:]:
                if nbr[q] >> r & 1 and not pm[p] & pm[q] & pm[r]:
                    return CheckResult(False, (S.points[p], S.points[q], S.points[r]),
                                       "pairwise collinear triple on no block")
    return CheckResult(True)


def _cond_V(S: IncidenceStructure) -> CheckResult:
    r = _cond_IV(S.dual())
    if r.ok:
        return r
    return CheckResult(False, r.witness, "pairwise intersecting blocks with no common point")


_CHECKS = {"I": _cond_I, "II": _cond_II, "III": _cond_III, "IV": _cond_IV, "V": _cond_V}


def check_condition(S: IncidenceStructure, which: str) -> CheckResult:
    """Test one of the conditions I-V; failures carry a witness tuple.

    I   any two points share 0 or 2 blocks
    II  no three points lie on two blocks
    III every block has at least three points
    IV  pairwise collinear point triples lie on a block
    V   pairwise meeting block triples share a point
    """
    if which not in _CHECKS:
        raise ValueError(f"unknown condition {which!r}; expected one of {CONDITIONS}")
    return _CHECKS[which](S)


def revalidate(S: IncidenceStructure, which: str, witness: tuple) -> bool:
    """Recheck a witness straight from the definition (independent of the fast path)."""
    inc = S.incident
    if which == "I":
        p, q = witness
        return sum(1 for b in S.blocks if inc(p, b) and inc(q, b)) not in (0, 2)
    if which == "II":
        p, q, r, b, c = witness
        return b != c and all(inc(x, y) for x in (p, q, r) for y in (b, c))
    if which == "III":
        (b,) = witness
        return sum(1 for p in S.points if inc(p, b)) < 3
    if which == "IV":
        p, q, r = witness
        coll = lambda x, y: any(inc(x, b) and inc(y, b) for b in S.blocks)  # noqa: E731
        return (coll(p, q) and coll(q, r) and coll(p, r)
                and not any(inc(p, b) and inc(q, b) and inc(r, b) for b in S.blocks))
    if which == "V":
        b, c, d = witness
        meet = lambda x, y: any(inc(p, x) and inc(p, y) for p in S.points)  # noqa: E731
        return (meet(b, c) and meet(c, d) and meet(b, d)
                and not any(inc(p, b) and inc(p, c) and inc(p, d) for p in S.points))
    raise ValueError(which)


@dataclass
class WeakChainReport:
    ok: bool
    results: dict[str, CheckResult]


def is_weak_chain_structure(S: IncidenceStructure) -> WeakChainReport:
    res = {c: check_condition(S, c) for c in ("II", "III", "IV")}
    return WeakChainReport(all(r.ok for r in res.values()), res)


# -- Miquel axiom ---------------------------------------------------------------

@dataclass(frozen=True)
class MiquelInstance:
    """Hypothesis of the Miquel schema.

    ``a`` lie on ``chain_a``; ``sides[i]`` carries a[i], b[i], a[i+1], b[i+1]
    (indices mod 4). Entries are labels of the structure.
    """

    a: tuple
    b: tuple
    chain_a: object
    sides: tuple


# Dihedral symmetry of the square, acting on the index positions 0..3.
DIHEDRAL = tuple(
    tuple((s * i + r) % 4 for i in range(4)) for s in (1, -1) for r in range(4)
)


def _relabel_instance(inst: MiquelInstance, g: tuple) -> MiquelInstance:
    # position i of the new instance takes position g[i] of the old one.
    a = tuple(inst.a[g[i]] for i in range(4))
    b = tuple(inst.b[g[i]] for i in range(4))
    sides = []
    for i in range(4):
        j, k = g[i], g[(i + 1) % 4]
        sides.append(inst.sides[j] if (k - j) % 4 == 1 else inst.sides[k])
    return MiquelInstance(a, b, inst.chain_a, tuple(sides))


def canonical(inst: MiquelInstance, key) -> MiquelInstance:
    """Least image under the dihedral group, ordered by ``key`` on point labels."""
    return min((_relabel_instance(inst, g) for g in DIHEDRAL),
               key=lambda m: [key(x) for x in m.a + m.b])


def is_miquel_hypothesis(S: IncidenceStructure, inst: MiquelInstance) -> bool:
    """Direct definitional check of an instance."""
    pts = inst.a + inst.b
    chains = (inst.chain_a,) + inst.sides
    if len(set(pts)) != 8 or len(set(chains)) != 5:
        return False
    if not all(S.incident(x, inst.chain_a) for x in inst.a):
        return False
    for i in range(4):
        j = (i + 1) % 4
        if not all(S.incident(x, inst.sides[i]) for x in (inst.a[i], inst.b[i], inst.a[j], inst.b[j])):
            return False
    return True


class BudgetExceeded(Exception):
    pass


def enumerate_miquel_instances(S: IncidenceStructure, budget: int = DEFAULT_BUDGET,
                               dedupe: bool = True) -> Iterator[MiquelInstance]:
    """All instances of the Miquel hypothesis in ``S``.

    The chain through a1..a4 is chosen first, then each side chain through
    consecutive a's, then the b's from intersections of consecutive side
    chains. With ``dedupe`` only the dihedral-canonical ordering of each
    instance is produced; otherwise all eight orderings are. Raises
    :class:`BudgetExceeded` after ``budget`` candidate instances.
    """
    pts_on = S.points_on
    blocks_on = S.blocks_on
    seen = 0
    for A in range(len(S.blocks)):
        on_a = sorted(pts_on[A])
        for order in permutations(on_a, 4):
            if dedupe and not (order[0] == min(order) and order[1] < order[3]):
                continue
            side_choices = []
            for i in range(4):
                x, y = order[i], order[(i + 1) % 4]
                side_choices.append(sorted((blocks_on[x] & blocks_on[y]) - {A}))
            for sides in _product(side_choices):
                if len(set(sides)) != 4:
                    continue
                b_choices = []
                for i in range(4):
                    prev = sides[(i - 1) % 4]
                    cand = (pts_on[prev] & pts_on[sides[i]]) - set(order)
                    b_choices.append(sorted(cand))
                for bs in _product(b_choices):
                    if len(set(bs)) != 4:
                        continue
                    seen += 1
                    if seen > budget:
                        raise BudgetExceeded(f"more than {budget} instances")
                    yield MiquelInstance(tuple(S.points[i] for i in order),
                                         tuple(S.points[i] for i in bs), S.blocks[A],
                                         tuple(S.blocks[s] for s in sides))


def _product(choices):
    if not choices:
        yield ()
        return
    for head in choices[0]:
        for rest in _product(choices[1:]):
            yield (head,) + rest


@dataclass
class MiquelReport:
    ok: bool
    variant: str
    instances: int
    budget_hit: bool
    counterexamples: list = field(default_factory=list)
    symmetry: str = "dihedral group of order 8 on the schema's index cycle"

    @property
    def status(self) -> str:
        if self.budget_hit:
            return "cap reached"
        return "pass" if self.ok else "fail"

    @property
    def witness(self):
        return self.counterexamples[0] if self.counterexamples else None


def _concludes(S: IncidenceStructure, inst: MiquelInstance, variant: str) -> bool:
    bi = [S.point_index[x] for x in inst.b]
    pm = S.point_masks
    if variant == "strong":
        return bool(_common(pm, bi))
    # weak: any chain through three consecutive b's also carries the fourth
    for r in range(4):
        three = [bi[(r + t) % 4] for t in range(3)]
        fourth = bi[(r + 3) % 4]
        if _common(pm, three) & ~pm[fourth]:
            return False
    return True


def check_miquel(S: IncidenceStructure, variant: str = "strong", budget: int = DEFAULT_BUDGET,
                 collect_all: bool = False) -> MiquelReport:
    """Strong: every hypothesis instance has a chain through b1..b4.

    Weak: a chain through three of the b's also passes through the fourth.
    A run that hits the budget reports ``cap reached`` and is never a pass.
    """
    if variant not in ("strong", "weak"):
        raise ValueError(f"unknown variant {variant!r}")
    bad = []
    count = 0
    try:
        for inst in enumerate_miquel_instances(S, budget=budget):
            count += 1
            if not _concludes(S, inst, variant):
                bad.append(inst)
                if not collect_all:
                    break
    except BudgetExceeded:
        return MiquelReport(False, variant, count, True, bad)
    return MiquelReport(not bad, variant, count, False, bad)
