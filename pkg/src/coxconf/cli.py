"""Command-line front end.

Exit codes: 0 success, 1 failed check or verification, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from math import factorial

from . import axioms, builders, export, realization, symmetry
from .core import FiniteSubset

SEED_ENV = "COXCONF_SEED"


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return realization.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _structure(args):
    kind = args.structure
    if kind == "cox":
        return builders.cox(args.n)
    if kind == "grassmann":
        return builders.grassmannian(args.n, args.k)
    if kind == "kdagger":
        return builders.k_dagger(args.n, args.k)
    if kind == "gras2cox":
        return builders.gras2cox(args.n)
    raise UsageError(f"unknown structure {kind}")


def _mutate(S, args):
    n = args.n
    for text in getattr(args, "delete_block", None) or []:
        S = S.without_blocks([FiniteSubset.parse(n, text)])
    for text in getattr(args, "delete_flag", None) or []:
        p, b = text.split(":")
        S = S.without_flag(FiniteSubset.parse(n, p), FiniteSubset.parse(n, b))
    return S


# -- subcommands ----------------------------------------------------------------

def cmd_build(args) -> int:
    S = _structure(args)
    if args.format == "json":
        _write(args.out, export.structure_to_json(S))
        return 0
    if args.labels == "steiner-miquel":
        if args.structure != "cox" or args.n != 4:
            raise UsageError("--labels steiner-miquel applies to cox with n=4 only")
        lab = builders.steiner_miquel_labels()
        po = [lab[name] for name in builders.STEINER_MIQUEL_POINTS]
        bo = [lab[name] for name in builders.STEINER_MIQUEL_BLOCKS]
        _write(args.out, export.incidence_csv(S, po, bo, builders.STEINER_MIQUEL_POINTS,
                                              builders.STEINER_MIQUEL_BLOCKS))
    else:
        _write(args.out, export.incidence_csv(S))
    return 0


def cmd_check(args) -> int:
    S = _mutate(_structure(args), args)
    if args.what == "axioms":
        failed = False
        for c in args.conditions or axioms.CONDITIONS:
            r = axioms.check_condition(S, c)
            print(f"condition {c}: {'pass' if r.ok else 'FAIL'}")
            if not r.ok:
                failed = True
                print(f"condition {c} witness: {', '.join(map(str, r.witness))} ({r.detail})",
                      file=sys.stderr)
        wc = axioms.is_weak_chain_structure(S)
        print(f"weak chain structure: {'yes' if wc.ok else 'no'}")
        return 1 if failed else 0
    rep = axioms.check_miquel(S, args.variant, budget=args.budget)
    print(f"miquel ({rep.variant}): {rep.status}; {rep.instances} instances up to {rep.symmetry}")
    if rep.witness is not None:
        w = rep.witness
        print("counterexample: a=" + " ".join(map(str, w.a)) + " b=" + " ".join(map(str, w.b))
              + f" chain={w.chain_a} sides=" + " ".join(map(str, w.sides)), file=sys.stderr)
    return 0 if rep.status == "pass" else 1


def cmd_levi(args) -> int:
    S = _structure(args)
    G = builders.levi_graph(S)
    _write(args.out, export.graph_to_dot(G, "Levi"))
    if args.compare_hypercube:
        if args.structure != "cox":
            raise UsageError("--compare-hypercube needs --structure cox")
        same = G.same_labeled(builders.hypercube(args.n))
        print(f"levi graph equals hypercube Q_{args.n}: {'yes' if same else 'no'}", file=sys.stderr)
        return 0 if same else 1
    return 0


def cmd_aut(args) -> int:
    n = args.n
    if args.what == "group":
        G = symmetry.full_group(n)
        print(f"order {G.order} = {n}!*2^{n}; collineations {G.collineation_order} = {n}!*2^{n - 1}")
        print("generators: " + "; ".join(str(g) for g in G.generators()))
        return 0
    if args.what == "brute":
        S = _structure(args)
        auts = symmetry.brute_force_automorphisms(S)
        if args.structure == "cox":
            expected = factorial(n) * 2 ** (n - 1)
            ok = len(auts) == expected
            print(f"{len(auts)}; matches S_n ⋉ C_2^{{n-1}}: {'yes' if ok else 'no'}")
            if args.correlations:
                cors = symmetry.brute_force_correlations(S)
                ok2 = len(auts) + len(cors) == factorial(n) * 2 ** n
                print(f"{len(auts) + len(cors)} collineations+correlations; "
                      f"matches S_n ⋉ C_2^n: {'yes' if ok2 else 'no'}")
                ok = ok and ok2
            if args.compare and n <= 5:
                res = symmetry.oracle_matches_generators(n)
                same = res["automorphisms_equal"] and res["correlations_equal"]
                print(f"element-by-element equality with generated group: {'yes' if same else 'no'}")
                ok = ok and same
            return 0 if ok else 1
        if args.structure == "kdagger" and n == 2 * args.k:
            expected = 2 * factorial(n)
            ok = len(auts) == expected
            print(f"{len(auts)}; matches C_2 ⊕ S_X: {'yes' if ok else 'no'}")
            return 0 if ok else 1
        print(len(auts))
        return 0
    if args.what == "flag-orbit":
        flag = (FiniteSubset.empty(n), FiniteSubset.of(n, [1]))
        orb = symmetry.flag_orbit(n, flag)
        ok = len(orb) == n * 2 ** (n - 1)
        print(f"orbit of ({flag[0]}, {flag[1]}): {len(orb)} flags of {n * 2 ** (n - 1)}: "
              f"{'flag-transitive' if ok else 'NOT transitive'}")
        return 0 if ok else 1
    rep = symmetry.stabilizer_of_empty(n)
    print(f"stabilizer of {{}}: order {rep.order}; equals the permutations: "
          f"{'yes' if rep.equals_permutations else 'no'}")
    return 0 if rep.equals_permutations else 1


def cmd_decompose(args) -> int:
    n = args.n
    X1 = FiniteSubset.parse(n, args.split)
    X2 = X1.complement()
    d = builders.decompose(n, X1, X2)
    print(f"family 1: {d.sizes[0]} copies of cox({len(X1)}) (shifts by subsets of {X2})")
    print(f"family 2: {d.sizes[1]} copies of cox({len(X2)}) (shifts by subsets of {X1})")
    print(f"every flag in exactly one member: {'yes' if d.covers_exactly_once else 'no'}")
    print(f"families transversal: {'yes' if d.transversal else 'no'}")
    return 0 if d.covers_exactly_once and d.transversal else 1


def _load_verified(path: str):
    R = export.realization_from_json(_read(path))
    R.report = realization.verify(R)
    return R


def cmd_realize(args) -> int:
    try:
        R = realization.realize(args.n, args.seed, max_n=args.max_n)
    except realization.RealizationError as exc:
        print(f"realization failed: {exc}", file=sys.stderr)
        return 1
    _write(args.out, export.realization_to_json(R))
    return 0


def cmd_extend(args) -> int:
    R = _load_verified(args.inp)
    if not R.verified:
        print(f"input does not verify: {R.report.summary()}", file=sys.stderr)
        return 1
    try:
        R2 = realization.extend(R, args.seed, max_n=args.max_n)
    except realization.RealizationError as exc:
        print(f"extension failed: {exc}", file=sys.stderr)
        return 1
    _write(args.out, export.realization_to_json(R2))
    return 0


def cmd_verify(args) -> int:
    R = _load_verified(args.inp)
    print(R.report.summary())
    if not R.report.ok:
        rep = R.report
        for p, b in rep.incidence_defects[:20]:
            print(f"defect: point {p} not on circle {b}", file=sys.stderr)
        for p, b in rep.accidental_incidences[:20]:
            print(f"accidental: point {p} on circle {b}", file=sys.stderr)
        return 1
    return 0


def cmd_export(args) -> int:
    text = _read(args.inp)
    if args.fmt in ("svg", "sphere-json"):
        R = export.realization_from_json(text)
        R.report = realization.verify(R)
        if args.fmt == "svg":
            _write(args.out, export.realization_to_svg(R))
        else:
            if not R.verified:
                print(f"input does not verify: {R.report.summary()}", file=sys.stderr)
                return 1
            _write(args.out, export.sphere_to_json(realization.stereographic(R, args.radius)))
        return 0
    S = export.structure_from_json(text)
    if args.fmt == "dot":
        _write(args.out, export.structure_to_dot(S))
    else:
        _write(args.out, export.incidence_csv(S))
    return 0


def cmd_cross_ratio(args) -> int:
    R = export.realization_from_json(_read(args.inp))
    n = R.n
    labels = [FiniteSubset.parse(n, t) for t in args.points]
    if args.circle is not None:
        C = R.circle_map[FiniteSubset.parse(n, args.circle)]
        missing = [str(a) for a in labels if not C.contains(R.point_map[a])]
        if missing:
            print(f"points not on circle {args.circle}: {', '.join(missing)}", file=sys.stderr)
            return 1
    try:
        value = realization.cross_ratio(*(R.point_map[a] for a in labels))
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    print(value)
    print(f"# convention: {realization.CROSS_RATIO_CONVENTION}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxconf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def structure_args(sp, default="cox"):
        sp.add_argument("--structure", choices=["cox", "grassmann", "kdagger", "gras2cox"],
                        default=default)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--k", type=int, default=2)

    b = sub.add_parser("build", help="incidence matrix of a named structure")
    b.add_argument("structure", choices=["cox", "grassmann", "kdagger", "gras2cox"])
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--format", choices=["json", "csv"], default="json")
    b.add_argument("--labels", choices=["canonical", "steiner-miquel"], default="canonical")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="incidence conditions or the Miquel axiom")
    c.add_argument("what", choices=["axioms", "miquel"])
    structure_args(c)
    c.add_argument("--conditions", nargs="+", choices=list(axioms.CONDITIONS))
    c.add_argument("--variant", choices=["strong", "weak"], default="strong")
    c.add_argument("--budget", type=int, default=axioms.DEFAULT_BUDGET)
    c.add_argument("--delete-block", action="append", metavar="LABEL")
    c.add_argument("--delete-flag", action="append", metavar="POINT:BLOCK")
    c.set_defaults(func=cmd_check)

    lv = sub.add_parser("levi", help="Levi graph as DOT")
    structure_args(lv)
    lv.add_argument("--compare-hypercube", action="store_true")
    lv.add_argument("--out")
    lv.set_defaults(func=cmd_levi)

    a = sub.add_parser("aut", help="collineation and correlation groups")
    a.add_argument("what", choices=["group", "brute", "flag-orbit", "stabilizer"])
    structure_args(a)
    a.add_argument("--correlations", action="store_true")
    a.add_argument("--compare", action="store_true",
                   help="element-by-element comparison with the generated group (n <= 5)")
    a.set_defaults(func=cmd_aut)

    d = sub.add_parser("decompose", help="cover cox(n) by translated sub-configurations")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--split", required=True, help="first part, e.g. '1,2,3,4'")
    d.set_defaults(func=cmd_decompose)

    r = sub.add_parser("realize", help="exact realization on the inversive plane")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--max-n", type=int, default=realization.DEFAULT_MAX_N)
    r.add_argument("--out")
    r.set_defaults(func=cmd_realize)

    e = sub.add_parser("extend", help="add one element to a realization")
    e.add_argument("--in", dest="inp", default="-")
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--max-n", type=int, default=realization.DEFAULT_MAX_N)
    e.add_argument("--out")
    e.set_defaults(func=cmd_extend)

    v = sub.add_parser("verify", help="exact verification of a realization")
    v.add_argument("--in", dest="inp", default="-")
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("export", help="convert a realization or structure file")
    x.add_argument("fmt", choices=["svg", "sphere-json", "dot", "csv"])
    x.add_argument("--in", dest="inp", default="-")
    x.add_argument("--out")
    x.add_argument("--radius", type=int, default=1)
    x.set_defaults(func=cmd_export)

    cr = sub.add_parser("cross-ratio", help="exact cross ratio of four realized points")
    cr.add_argument("--in", dest="inp", default="-")
    cr.add_argument("--circle")
    cr.add_argument("--points", nargs=4, required=True, metavar="LABEL")
    cr.set_defaults(func=cmd_cross_ratio)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", "absent") is None:
            args.seed = _default_seed()
        return args.func(args)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
