"""Serialization: realization and structure JSON, sphere JSON, SVG, DOT, CSV."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .builders import Graph
from .core import FiniteSubset, IncidenceStructure
from .realization import INFINITY, InvCircle, InvPoint, Realization, SphereModel


def _label(x) -> str:
    return str(x)


def realization_to_dict(R: Realization) -> dict:
    pts = []
    for a in sorted(R.point_map, key=FiniteSubset.sort_key):
        z = R.point_map[a]
        if z.is_infinite:
            pts.append({"label": str(a), "inf": True})
        else:
            pts.append({"label": str(a), "x_num": str(z.x.numerator), "x_den": str(z.x.denominator),
                        "y_num": str(z.y.numerator), "y_den": str(z.y.denominator)})
    circs = [{"label": str(a), "a": str(C.a), "b": str(C.b), "c": str(C.c), "d": str(C.d)}
             for a, C in sorted(R.circle_map.items(), key=lambda kv: kv[0].sort_key())]
    return {"n": R.n, "seed": R.seed, "verified": R.verified, "points": pts, "circles": circs}


def realization_to_json(R: Realization) -> str:
    return json.dumps(realization_to_dict(R), indent=1) + "\n"


def realization_from_dict(data: dict) -> Realization:
    n = int(data["n"])
    points = {}
    for rec in data["points"]:
        a = FiniteSubset.parse(n, rec["label"])
        if rec.get("inf"):
            points[a] = INFINITY
        else:
            points[a] = InvPoint(Fraction(int(rec["x_num"]), int(rec["x_den"])),
                                 Fraction(int(rec["y_num"]), int(rec["y_den"])))
    circles = {FiniteSubset.parse(n, rec["label"]):
               InvCircle.from_coefficients(*(int(rec[k]) for k in "abcd"))
               for rec in data["circles"]}
    return Realization(n, int(data.get("seed", 0)), points, circles)


def realization_from_json(text: str) -> Realization:
    return realization_from_dict(json.loads(text))


def sphere_to_json(model: SphereModel) -> str:
    out = {
        "radius": model.radius,
        "max_residual": model.max_residual,
        "points": [{"label": str(a), "xyz": list(model.points[a])}
                   for a in sorted(model.points, key=FiniteSubset.sort_key)],
        "circles": [{"label": str(a), "center": list(c["center"]), "normal": list(c["normal"]),
                     "radius": c["radius"]}
                    for a, c in sorted(model.circles.items(), key=lambda kv: kv[0].sort_key())],
    }
    return json.dumps(out, indent=1) + "\n"


def structure_to_dict(S: IncidenceStructure) -> dict:
    return {"points": [_label(p) for p in S.points], "blocks": [_label(b) for b in S.blocks],
            "flags": sorted([p, b] for p, b in S.flags)}


def structure_to_json(S: IncidenceStructure) -> str:
    return json.dumps(structure_to_dict(S), indent=1) + "\n"


def structure_from_json(text: str) -> IncidenceStructure:
    """Labels come back as strings."""
    data = json.loads(text)
    return IncidenceStructure(data["points"], data["blocks"], [tuple(f) for f in data["flags"]])


def incidence_csv(S: IncidenceStructure, point_order=None, block_order=None,
                  point_names=None, block_names=None) -> str:
    """One row per block, one column per point."""
    po = list(S.points if point_order is None else point_order)
    bo = list(S.blocks if block_order is None else block_order)
    pn = point_names or [_label(p) for p in po]
    bn = block_names or [_label(b) for b in bo]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(pn))
    for name, row in zip(bn, S.incidence_matrix(po, bo)):
        w.writerow([name] + row)
    return buf.getvalue()


def graph_to_dot(G: Graph, name: str = "G") -> str:
    ids = {v: i for i, v in enumerate(G.vertices)}
    lines = [f"graph {name} {{"]
    for v, i in ids.items():
        lines.append(f'  v{i} [label="{_label(v)}"];')
    for e in sorted(tuple(sorted(ids[v] for v in e)) for e in G.edges):
        lines.append(f"  v{e[0]} -- v{e[1]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def structure_to_dot(S: IncidenceStructure, name: str = "Levi") -> str:
    lines = [f"graph {name} {{"]
    for i, p in enumerate(S.points):
        lines.append(f'  p{i} [label="{_label(p)}", shape=circle];')
    for j, b in enumerate(S.blocks):
        lines.append(f'  b{j} [label="{_label(b)}", shape=box];')
    for p, b in sorted(S.flags):
        lines.append(f"  p{p} -- b{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def realization_to_svg(R: Realization, size: int = 800) -> str:
    """Finite points as dots, circles and clipped lines as strokes, one group per circle."""
    finite = [(float(z.x), float(z.y)) for z in R.point_map.values() if not z.is_infinite]
    xs = [p[0] for p in finite]
    ys = [p[1] for p in finite]
    xmin, xmax, ymin, ymax = min(xs), max(xs), min(ys), max(ys)
    span = max(xmax - xmin, ymax - ymin, 1e-9)
    pad = 0.1 * span
    xmin, ymin = xmin - pad, ymin - pad
    span += 2 * pad
    scale = size / span

    def sx(x):
        return (x - xmin) * scale

    def sy(y):
        return size - (y - ymin) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">']
    for a, C in sorted(R.circle_map.items(), key=lambda kv: kv[0].sort_key()):
        out.append(f'<g id="circle-{_svg_id(a)}" fill="none" stroke="black" stroke-width="1">')
        if C.is_line:
            seg = _clip_line(C, xmin, ymin, span)
            if seg:
                (x1, y1), (x2, y2) = seg
                out.append(f'  <line x1="{sx(x1):.3f}" y1="{sy(y1):.3f}" x2="{sx(x2):.3f}" y2="{sy(y2):.3f}"/>')
        else:
            (cx, cy), r = C.center_radius()
            out.append(f'  <circle cx="{sx(float(cx)):.3f}" cy="{sy(float(cy)):.3f}" r="{r * scale:.3f}"/>')
        out.append("</g>")
    out.append('<g id="points" fill="red">')
    for a, z in sorted(R.point_map.items(), key=lambda kv: kv[0].sort_key()):
        if not z.is_infinite:
            out.append(f'  <circle cx="{sx(float(z.x)):.3f}" cy="{sy(float(z.y)):.3f}" r="3">'
                       f"<title>{a}</title></circle>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _svg_id(a: FiniteSubset) -> str:
    return "-".join(str(e) for e in a) or "empty"


def _clip_line(C: InvCircle, x0: float, y0: float, span: float):
    # b x + c y + d = 0 against the square [x0, x0+span] x [y0, y0+span]
    b, c, d = float(C.b), float(C.c), float(C.d)
    hits = []
    for x in (x0, x0 + span):
        if c != 0:
            y = -(b * x + d) / c
            if y0 <= y <= y0 + span:
                hits.append((x, y))
    for y in (y0, y0 + span):
        if b != 0:
            x = -(c * y + d) / b
            if x0 <= x <= x0 + span:
                hits.append((x, y))
    if len(hits) < 2:
        return None
    hits.sort()
    return hits[0], hits[-1]

