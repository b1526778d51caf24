"""Exact realizations of Cox configurations by points and circles of the inversive plane.

The empty set goes to the point at infinity, so the circles ``{i}`` are
lines. Lines are drawn with random rational slopes and intercepts; every
later point is the second intersection of two already-placed circles and
every later circle passes through three already-placed points, so all
coordinates stay rational and every incidence is checked exactly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .core import FiniteSubset, subsets

DEFAULT_SEED = 1
DEFAULT_MAX_N = 10
COEFF_BOUND = 1000
MAX_LINE_ATTEMPTS = 1000


class RealizationError(Exception):
    """Raised when a construction step hits a degenerate configuration."""


class GenericityError(RealizationError):
    """Coincident objects, tangency or accidental incidence; retry with another seed."""


class TangencyError(RealizationError):
    pass


# -- points and circles ---------------------------------------------------------

@dataclass(frozen=True)
class InvPoint:
    """A finite rational point, or the point at infinity when ``x`` is None."""

    x: Fraction | None = None
    y: Fraction | None = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @property
    def is_infinite(self) -> bool:
        return self.x is None

    def homogeneous(self) -> tuple[int, int, int]:
        """Integers ``(X, Y, W)`` with ``x = X / W``, ``y = Y / W`` and ``W > 0``."""
        w = self.x.denominator * self.y.denominator // math.gcd(self.x.denominator, self.y.denominator)
        return (self.x.numerator * (w // self.x.denominator),
                self.y.numerator * (w // self.y.denominator), w)

    def __str__(self) -> str:
        return "inf" if self.is_infinite else f"({self.x}, {self.y})"


INFINITY = InvPoint()


def point(x, y) -> InvPoint:
    return InvPoint(Fraction(x), Fraction(y))


def _normalize(coeffs: Iterable[int]) -> tuple[int, int, int, int]:
    a, b, c, d = (int(v) for v in coeffs)
    g = math.gcd(math.gcd(a, b), math.gcd(c, d))
    if g == 0:
        raise RealizationError("all coefficients vanish")
    a, b, c, d = a // g, b // g, c // g, d // g
    lead = next(v for v in (a, b, c, d) if v)
    if lead < 0:
        a, b, c, d = -a, -b, -c, -d
    return a, b, c, d


def _scale_to_ints(values: Iterable[Fraction]) -> list[int]:
    vals = [Fraction(v) for v in values]
    den = 1
    for v in vals:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in vals]


@dataclass(frozen=True)
class InvCircle:
    """``a (x^2 + y^2) + b x + c y + d = 0`` in canonical integer form; a line when ``a == 0``."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        norm = _normalize((self.a, self.b, self.c, self.d))
        if norm != (self.a, self.b, self.c, self.d):
            raise ValueError(f"coefficients {(self.a, self.b, self.c, self.d)} are not canonical")
        if self.b * self.b + self.c * self.c - 4 * self.a * self.d <= 0:
            raise ValueError("circle is imaginary or degenerate")

    @classmethod
    def from_coefficients(cls, a, b, c, d) -> "InvCircle":
        return cls(*_normalize(_scale_to_ints((a, b, c, d))))

    @property
    def is_line(self) -> bool:
        return self.a == 0

    def value(self, p: InvPoint) -> int:
        """Integer proportional to the equation at ``p``; zero exactly on incidence."""
        if p.is_infinite:
            return self.a
        X, Y, W = p.homogeneous()
        return self.a * (X * X + Y * Y) + (self.b * X + self.c * Y) * W + self.d * W * W

    def contains(self, p: InvPoint) -> bool:
        return self.value(p) == 0

    def center_radius(self) -> tuple[tuple[Fraction, Fraction], float]:
        if self.is_line:
            raise ValueError("a line has no centre")
        cx = Fraction(-self.b, 2 * self.a)
        cy = Fraction(-self.c, 2 * self.a)
        r2 = Fraction(self.b * self.b + self.c * self.c - 4 * self.a * self.d, 4 * self.a * self.a)
        return (cx, cy), math.sqrt(r2)

    def __str__(self) -> str:
        return f"[{self.a}, {self.b}, {self.c}, {self.d}]"


def circle_through(p: InvPoint, q: InvPoint, r: InvPoint) -> InvCircle:
    """The unique circle or line through three distinct points."""
    pts = [p, q, r]
    if len(set(pts)) != 3:
        raise ValueError("points must be pairwise distinct")
    inf = [z for z in pts if z.is_infinite]
    if len(inf) > 1:
        raise ValueError("at most one point may be infinite")
    if inf:
        (x1, y1), (x2, y2) = [(z.x, z.y) for z in pts if not z.is_infinite]
        return InvCircle.from_coefficients(0, y1 - y2, x2 - x1, x1 * y2 - x2 * y1)
    rows = []
    for z in pts:
        X, Y, W = z.homogeneous()
        rows.append((X * X + Y * Y, X * W, Y * W, W * W))

    def det3(cols):
        (a1, b1, c1), (a2, b2, c2), (a3, b3, c3) = [tuple(row[i] for i in cols) for row in rows]
        return a1 * (b2 * c3 - b3 * c2) - b1 * (a2 * c3 - a3 * c2) + c1 * (a2 * b3 - a3 * b2)

    coeffs = (det3((1, 2, 3)), -det3((0, 2, 3)), det3((0, 1, 3)), -det3((0, 1, 2)))
    if not any(coeffs):
        raise RealizationError("three points do not determine a circle")
    return InvCircle(*_normalize(coeffs))


def _line_hits_circle_again(line: InvCircle, circle: InvCircle, known: InvPoint) -> InvPoint:
    # walk from ``known`` along the line direction (c, -b): known + t * v
    vx, vy = Fraction(line.c), Fraction(-line.b)
    x0, y0 = known.x, known.y
    if circle.is_line:
        raise AssertionError("expected a proper circle")
    a, b, c = circle.a, circle.b, circle.c
    lin = 2 * a * (x0 * vx + y0 * vy) + b * vx + c * vy
    if lin == 0:
        raise TangencyError(f"tangent at {known}")
    t = -lin / (a * (vx * vx + vy * vy))
    return InvPoint(x0 + t * vx, y0 + t * vy)


def second_intersection(c1: InvCircle, c2: InvCircle, known: InvPoint) -> InvPoint:
    """The other common point of two circles through ``known``."""
    if c1 == c2:
        raise ValueError("circles coincide")
    if not (c1.contains(known) and c2.contains(known)):
        raise ValueError(f"{known} is not on both circles")
    if known.is_infinite:
        det = c1.b * c2.c - c2.b * c1.c
        if det == 0:
            raise TangencyError("parallel lines touch only at infinity")
        x = Fraction(-c1.d * c2.c + c2.d * c1.c, det)
        y = Fraction(-c1.b * c2.d + c2.b * c1.d, det)
        return InvPoint(x, y)
    if c1.is_line and c2.is_line:
        return INFINITY
    if c1.is_line:
        return _line_hits_circle_again(c1, c2, known)
    if c2.is_line:
        return _line_hits_circle_again(c2, c1, known)
    radical = InvCircle.from_coefficients(0, c2.a * c1.b - c1.a * c2.b, c2.a * c1.c - c1.a * c2.c,
                                          c2.a * c1.d - c1.a * c2.d)
    return _line_hits_circle_again(radical, c1, known)


# -- cross ratio ------------------------------------------------------------------

def _csub(p: InvPoint, q: InvPoint) -> tuple[Fraction, Fraction]:
    return (p.x - q.x, p.y - q.y)


def _cmul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _cdiv(u, v):
    den = v[0] * v[0] + v[1] * v[1]
    if den == 0:
        raise ZeroDivisionError("division by zero in cross ratio")
    return ((u[0] * v[0] + u[1] * v[1]) / den, (u[1] * v[0] - u[0] * v[1]) / den)


CROSS_RATIO_CONVENTION = "((z1-z3)(z2-z4))/((z1-z4)(z2-z3)) on x+iy, factors with infinity dropped"


def cross_ratio(z1: InvPoint, z2: InvPoint, z3: InvPoint, z4: InvPoint) -> Fraction:
    """``((z1-z3)(z2-z4)) / ((z1-z4)(z2-z3))`` for four distinct concyclic points.

    Points are read as complex numbers; factors involving the point at
    infinity are dropped. Concyclic quadruples give a real value.
    """
    zs = [z1, z2, z3, z4]
    if len(set(zs)) != 4:
        raise ValueError("points must be distinct")
    if sum(z.is_infinite for z in zs) > 1:
        raise ValueError("at most one point may be infinite")
    if not circle_through(z1, z2, z3).contains(z4):
        raise ValueError("points are not concyclic")
    one = (Fraction(1), Fraction(0))
    num_a = _csub(z1, z3) if not (z1.is_infinite or z3.is_infinite) else one
    num_b = _csub(z2, z4) if not (z2.is_infinite or z4.is_infinite) else one
    den_a = _csub(z1, z4) if not (z1.is_infinite or z4.is_infinite) else one
    den_b = _csub(z2, z3) if not (z2.is_infinite or z3.is_infinite) else one
    re, im = _cdiv(_cmul(num_a, num_b), _cmul(den_a, den_b))
    if im != 0:
        raise AssertionError("concyclic points gave a non-real cross ratio")
    return re


# -- realizations -----------------------------------------------------------------

@dataclass
class VerificationReport:
    n: int
    flags_checked: int = 0
    incidence_defects: list = field(default_factory=list)
    accidental_incidences: list = field(default_factory=list)
    duplicate_points: list = field(default_factory=list)
    duplicate_circles: list = field(default_factory=list)
    missing: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.incidence_defects or self.accidental_incidences or self.duplicate_points
                    or self.duplicate_circles or self.missing)

    def summary(self) -> str:
        if self.ok:
            return (f"all {self.flags_checked} incidences exact; 0 accidental incidences; "
                    f"points and circles pairwise distinct")
        return (f"FAILED: {len(self.incidence_defects)} incidence defects, "
                f"{len(self.accidental_incidences)} accidental incidences, "
                f"{len(self.duplicate_points)} duplicate points, "
                f"{len(self.duplicate_circles)} duplicate circles, {len(self.missing)} missing labels")


@dataclass
class Realization:
    n: int
    seed: int
    point_map: dict[FiniteSubset, InvPoint]
    circle_map: dict[FiniteSubset, InvCircle]
    report: VerificationReport | None = None

    @property
    def verified(self) -> bool:
        return self.report is not None and self.report.ok

    def point(self, label: FiniteSubset) -> InvPoint:
        return self.point_map[label]

    def circle(self, label: FiniteSubset) -> InvCircle:
        return self.circle_map[label]

    def max_coefficient_bits(self) -> int:
        return max(max(abs(v).bit_length() for v in (c.a, c.b, c.c, c.d))
                   for c in self.circle_map.values())


def verify(R: Realization) -> VerificationReport:
    """Exact check of every flag, every non-flag pair and pairwise distinctness."""
    rep = VerificationReport(R.n)
    everything = subsets(R.n)
    for a in everything:
        target = R.point_map if len(a) % 2 == 0 else R.circle_map
        if a not in target:
            rep.missing.append(a)
    if rep.missing:
        return rep
    pts = [a for a in everything if len(a) % 2 == 0]
    circs = [a for a in everything if len(a) % 2 == 1]
    homog = {}
    for p in pts:
        z = R.point_map[p]
        homog[p] = None if z.is_infinite else z.homogeneous()
    for b in circs:
        C = R.circle_map[b]
        a_, b_, c_, d_ = C.a, C.b, C.c, C.d
        for p in pts:
            h = homog[p]
            if h is None:
                v = a_
            else:
                X, Y, W = h
                v = a_ * (X * X + Y * Y) + (b_ * X + c_ * Y) * W + d_ * W * W
            if p.adjacent(b):
                rep.flags_checked += 1
                if v != 0:
                    rep.incidence_defects.append((p, b))
            elif v == 0:
                rep.accidental_incidences.append((p, b))
    rep.duplicate_points = _duplicates(R.point_map)
    rep.duplicate_circles = _duplicates(R.circle_map)
    return rep


def _duplicates(mapping: dict) -> list:
    seen: dict = {}
    dups = []
    for label in sorted(mapping, key=FiniteSubset.sort_key):
        v = mapping[label]
        if v in seen:
            dups.append((seen[v], label))
        else:
            seen[v] = label
    return dups


def _rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-COEFF_BOUND, COEFF_BOUND), rng.randint(1, COEFF_BOUND))


def _draw_line(seed: int, index: int, lines: dict[int, InvCircle],
               crossings: Iterable[InvPoint]) -> InvCircle:
    """Line for element ``index``: not parallel to earlier lines, missing their crossings."""
    crossings = list(crossings)
    for attempt in range(MAX_LINE_ATTEMPTS):
        rng = random.Random(f"coxconf:{seed}:{index}:{attempt}")
        slope, icpt = _rand_fraction(rng), _rand_fraction(rng)
        line = InvCircle.from_coefficients(0, slope, -1, icpt)
        if any(line.b * L.c == L.b * line.c for L in lines.values()):
            continue
        if any(line.contains(z) for z in crossings):
            continue
        return line
    raise GenericityError(f"no admissible line for element {index} after {MAX_LINE_ATTEMPTS} draws")


def _fill(n: int, points: dict, circles: dict, labels: list[FiniteSubset]):
    """Place every label of size >= 3, smallest first, from already-placed neighbours."""
    for lab in sorted(labels, key=FiniteSubset.sort_key):
        elems = list(lab)
        if len(lab) % 2:
            below = [points[lab.remove(e)] for e in elems]
            C = circle_through(*below[:3])
            for e, z in zip(elems, below):
                if not C.contains(z):
                    raise RealizationError(f"point {lab.remove(e)} misses circle {lab}")
            circles[lab] = C
        else:
            i, j = elems[0], elems[1]
            try:
                z = second_intersection(circles[lab.remove(i)], circles[lab.remove(j)],
                                        points[lab.remove(i).remove(j)])
            except TangencyError as exc:
                raise GenericityError(f"circles {lab.remove(i)} and {lab.remove(j)}: {exc}") from exc
            for e in elems:
                if not circles[lab.remove(e)].contains(z):
                    raise RealizationError(f"circle {lab.remove(e)} misses point {lab}")
            points[lab] = z


def _sweep(points: dict, circles: dict):
    for kind, dups in (("points", _duplicates(points)), ("circles", _duplicates(circles))):
        if dups:
            a, b = dups[0]
            raise GenericityError(f"{kind} {a} and {b} coincide")


def _build(n: int, seed: int, points: dict, circles: dict, new_elements: list[int]) -> Realization:
    lines = {next(iter(a)): C for a, C in circles.items() if len(a) == 1}
    for e in new_elements:
        crossings = [z for a, z in points.items() if len(a) == 2]
        lines[e] = _draw_line(seed, e, lines, crossings)
        circles[FiniteSubset.of(n, [e])] = lines[e]
        for f in sorted(lines):
            if f != e:
                points[FiniteSubset.of(n, [e, f])] = second_intersection(lines[e], lines[f], INFINITY)
        _sweep(points, circles)
    todo = [a for a in subsets(n) if len(a) >= 3 and a not in points and a not in circles]
    for size in range(3, n + 1):
        _fill(n, points, circles, [a for a in todo if len(a) == size])
        _sweep(points, circles)
    R = Realization(n, seed, points, circles)
    R.report = verify(R)
    if not R.report.ok:
        raise GenericityError(R.report.summary())
    return R


def realize(n: int, seed: int = DEFAULT_SEED, max_n: int = DEFAULT_MAX_N) -> Realization:
    """A verified exact realization of ``cox(n)``; the empty set sits at infinity."""
    if not 3 <= n <= max_n:
        raise ValueError(f"n={n} outside 3..{max_n}")
    points = {FiniteSubset.empty(n): INFINITY}
    return _build(n, seed, points, {}, list(range(1, n + 1)))


def _lift(a: FiniteSubset, n: int) -> FiniteSubset:
    return FiniteSubset(a.bits, n)


def extend(R: Realization, seed: int | None = None, max_n: int = DEFAULT_MAX_N) -> Realization:
    """Add element ``n + 1``: a new line through infinity, then every new subset.

    Existing assignments are carried over unchanged.
    """
    if not R.verified:
        raise ValueError("extend needs a verified realization")
    n = R.n + 1
    if n > max_n:
        raise ValueError(f"n={n} exceeds cap {max_n}")
    seed = R.seed if seed is None else seed
    points = {_lift(a, n): z for a, z in R.point_map.items()}
    circles = {_lift(a, n): C for a, C in R.circle_map.items()}
    return _build(n, seed, points, circles, [n])


def restrict(R: Realization, m: int) -> tuple[dict, dict]:
    """Assignments of the labels inside ``{1..m}``, re-labelled over the smaller ground set."""
    keep = (1 << m) - 1
    pts = {FiniteSubset(a.bits, m): z for a, z in R.point_map.items() if not a.bits & ~keep}
    circs = {FiniteSubset(a.bits, m): C for a, C in R.circle_map.items() if not a.bits & ~keep}
    return pts, circs


# -- geometric automorphism obstruction -----------------------------------------------

@dataclass
class CrossRatioWitness:
    i: int
    js: tuple[int, int, int]
    before: Fraction
    after: Fraction


def line_cross_ratio(R: Realization, i: int, js: tuple[int, int, int]) -> Fraction:
    """Cross ratio of (empty, {i,j1}; {i,j2}, {i,j3}) on the circle {i}."""
    n = R.n
    pts = [R.point_map[FiniteSubset.empty(n)]] + [R.point_map[FiniteSubset.of(n, [i, j])] for j in js]
    return cross_ratio(*pts)


def relabeling_obstructions(R: Realization, phi: dict[int, int]) -> list[CrossRatioWitness]:
    """All cross ratios on the lines {i} that change under relabelling by ``phi``.

    ``phi`` maps elements to elements (1-based); a non-empty result shows
    the relabelling is not induced by any Moebius transformation.
    """
    n = R.n
    out = []
    for i in range(1, n + 1):
        rest = [j for j in range(1, n + 1) if j != i]
        for js in combinations(rest, 3):
            before = line_cross_ratio(R, i, js)
            after = line_cross_ratio(R, phi.get(i, i), tuple(phi.get(j, j) for j in js))
            if before != after:
                out.append(CrossRatioWitness(i, js, before, after))
    return out


# -- sphere model ---------------------------------------------------------------------

@dataclass
class SphereModel:
    radius: float
    points: dict
    circles: dict
    max_residual: float


def _to_float_vec(vals: list[Fraction]) -> list[float]:
    scale = max(abs(v) for v in vals)
    if scale == 0:
        return [0.0] * len(vals)
    return [float(v / scale) for v in vals]


def stereographic(R: Realization, sphere_radius=1) -> SphereModel:
    """Inverse stereographic projection onto the sphere of the given radius about the origin.

    Infinity goes to the north pole ``(0, 0, r)``; each circle becomes a
    plane section described by centre, unit normal and radius. Residuals
    are point-to-plane distances over all flags in units of the radius.
    """
    r = Fraction(sphere_radius)
    if r <= 0:
        raise ValueError("radius must be positive")
    if R.report is None or not R.report.ok:
        raise ValueError("stereographic needs a verified realization")
    exact_pts = {}
    for a, z in R.point_map.items():
        if z.is_infinite:
            exact_pts[a] = (Fraction(0), Fraction(0), r)
        else:
            s = z.x * z.x + z.y * z.y
            den = s + r * r
            exact_pts[a] = (2 * r * r * z.x / den, 2 * r * r * z.y / den, r * (s - r * r) / den)
    pts = {a: tuple(float(v) for v in P) for a, P in exact_pts.items()}
    circles = {}
    planes = {}
    for a, C in R.circle_map.items():
        nx, ny, nz, off = _to_float_vec([C.b * r, C.c * r, C.a * r * r - C.d,
                                         C.a * r ** 3 + C.d * r])
        norm = math.sqrt(nx * nx + ny * ny + nz * nz)
        nx, ny, nz, off = nx / norm, ny / norm, nz / norm, off / norm
        planes[a] = (nx, ny, nz, off)
        centre = (-off * nx, -off * ny, -off * nz)
        rad = math.sqrt(max(float(r) ** 2 - off * off, 0.0))
        circles[a] = {"center": centre, "normal": (nx, ny, nz), "radius": rad}
    worst = 0.0
    for b, (nx, ny, nz, off) in planes.items():
        for e in range(1, R.n + 1):
            p = FiniteSubset(b.bits ^ (1 << (e - 1)), R.n)
            x, y, z = pts[p]
            worst = max(worst, abs(nx * x + ny * y + nz * z + off) / float(r))
    return SphereModel(float(r), pts, circles, worst)
