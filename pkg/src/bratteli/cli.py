"""Command line front end.

Each verb maps to one library operation. Diagrams come from a JSON file
(the diagram_to_json shape) or from the builtin catalog via
--example NAME --depth N. Exit codes: 0 for success or a passing
verdict, 1 for a failing verdict or a reported violation, 2 for usage
and input errors. Output is deterministic for a fixed invocation.
"""

import argparse
import json
import sys

from . import criteria
from . import diagram as dg
from . import dimrange
from . import dynamics
from . import ideals
from . import realize

DEFAULT_DEPTH = 4


# ------------------------------------------------------------------ plumbing

def _load_diagram(args):
    name = getattr(args, "example", None)
    path = getattr(args, "path", None)
    depth = getattr(args, "depth", None)
    if name:
        entry = dynamics.example_catalog(name)
        build = entry.get("diagram")
        if build is None:
            raise ValueError(f"example {name!r} has no diagram builder")
        return build(depth if depth is not None else DEFAULT_DEPTH)
    if not path:
        raise ValueError("need a diagram: give a JSON file or --example NAME")
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: {exc}")
    d = dg.diagram_from_json(obj)
    if depth is not None:
        if not 0 <= depth <= d.depth:
            raise ValueError(f"--depth {depth} out of range for {path}")
        d = d.truncate(depth)
    return d


def _write(args, payload):
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _emit(args, report):
    if getattr(args, "format", "json") == "text":
        lines = []
        for k in sorted(report):
            v = report[k]
            if isinstance(v, (dict, list, tuple)):
                lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
            else:
                lines.append(f"{k}: {v}")
        payload = "\n".join(lines) + "\n"
    else:
        payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    _write(args, payload)


def _split_ids(text):
    return [s for s in text.split(",") if s]


# --------------------------------------------------------------------- verbs

def cmd_validate(args):
    d = _load_diagram(args)
    problems = dg.validate(d)
    _emit(args, {"ok": not problems, "problems": problems})
    return 0 if not problems else 1


def cmd_telescope(args):
    d = _load_diagram(args)
    try:
        chosen = [int(x) for x in args.levels.split(",")]
    except ValueError:
        raise ValueError(f"bad --levels {args.levels!r}, want I,J,...")
    _emit(args, dg.diagram_to_json(dg.telescope(d, chosen)))
    return 0


def cmd_extend(args):
    d = _load_diagram(args)
    ext = dg.extend(d)
    levels = []
    for n in range(ext.depth + 1):
        levels.append({"ids": list(ext.ids[n]),
                       "parent": list(ext.parents[n]),
                       "vertex": list(ext.proj[n])})
    _emit(args, {"depth": ext.depth, "levels": levels})
    return 0


def cmd_check(args):
    d = _load_diagram(args)
    if args.criterion == "ud":
        if args.partition_depth is not None:
            report = criteria.ud_bruteforce(
                dg.extend(d), partition_depth=args.partition_depth)
            ok = report["verdict"] is True
        else:
            report = criteria.multitree_report(d)
            ok = report["verdict"] == "MULTITREE"
    elif args.criterion == "finite-origin":
        report = criteria.finite_origin_report(d)
        ok = report["verdict"] == "STABLE_FROM"
    else:
        report = criteria.simplicity_report(d)
        ok = report["verdict"] == "SIMPLE_UP_TO_DEPTH"
    _emit(args, report)
    return 0 if ok else 1


def _group_summary(ext, n):
    G = realize.LevelGroup(ext, n)
    census = {str(k): v for k, v in sorted(G.census().items())}
    return G, {"level": n, "order": G.order, "census": census}


def cmd_realize(args):
    d = _load_diagram(args)
    ext = dg.extend(d)
    if args.level is not None:
        n = args.level
        if not 0 <= n <= ext.depth:
            raise ValueError(f"--level {n} out of range 0..{ext.depth}")
        _, report = _group_summary(ext, n)
        report["fibers"] = [[ext.ids[n][i] for i in fib]
                            for fib in ext.fibers[n]]
        _emit(args, report)
        return 0
    levels = [_group_summary(ext, n)[1] for n in range(1, ext.depth + 1)]
    _emit(args, {"levels": levels})
    return 0


def cmd_ideals(args):
    d = _load_diagram(args)
    if args.seed:
        seed = _split_ids(args.seed)
        _emit(args, {"seed": seed, "ideal": ideals.ideal_closure(d, seed)})
        return 0
    found = ideals.enumerate_ideals(d)
    _emit(args, {"count": len(found), "ideals": [list(t) for t in found]})
    return 0


def cmd_quotient(args):
    d = _load_diagram(args)
    q = ideals.quotient_diagram(d, _split_ids(args.ideal))
    if q is None:
        _emit(args, {"empty": True})
        return 0
    _emit(args, dg.diagram_to_json(q))
    return 0


def cmd_rf_witness(args):
    d = _load_diagram(args)
    ext = dg.extend(d)
    n = args.level if args.level is not None else ext.depth
    if not 1 <= n <= ext.depth:
        raise ValueError(f"--level {n} out of range 1..{ext.depth}")
    g = realize.element_from_cycles(ext, n, args.element)
    gamma = _split_ids(args.gamma) if args.gamma else None
    report = ideals.rf_witness(ext, g, gamma)
    _emit(args, report)
    return 0 if report.get("applicable") and report.get("nontrivial") else 1


def cmd_dimrange(args):
    d = _load_diagram(args)
    if args.check:
        report = dimrange.zero_one_report(d)
        _emit(args, report)
        return 0 if report["verdict"] else 1
    if args.level is not None:
        n = args.level
        if not 0 <= n <= d.depth:
            raise ValueError(f"--level {n} out of range 0..{d.depth}")
        lvl = dimrange.scaled_level(d, n)
        mat = dimrange.transition_matrix(d, n) if 1 <= n < d.depth else None
        _emit(args, {"level": n, "rank": lvl.rank, "scale": lvl.scale,
                     "matrix": mat})
        return 0
    levels = []
    for n in range(d.depth + 1):
        lvl = dimrange.scaled_level(d, n)
        levels.append({"level": n, "rank": lvl.rank, "scale": lvl.scale})
    _emit(args, {"levels": levels})
    return 0


def cmd_dynamics(args):
    gens = dynamics.parse_generators(args.rules)
    op = args.op
    if op == "ud":
        report = dynamics.ud_check_finite(gens)
        _emit(args, report)
        return 0 if report["verdict"] else 1
    if op == "fixed-set":
        if len(gens) != 1:
            raise ValueError("fixed-set wants exactly one homeomorphism")
        report = dict(dynamics.fixed_set(gens[0]))
        report["rule"] = dynamics.format_homeo(gens[0])
        _emit(args, report)
        return 0 if report["clopen"] else 1
    if args.depth is None:
        raise ValueError(f"--depth is required for {op}")
    k = args.depth
    if op == "table":
        if len(gens) != 1:
            raise ValueError("table wants exactly one homeomorphism")
        table, residual = gens[0].table(k)
        _emit(args, {"depth": k, "rule": dynamics.format_homeo(gens[0]),
                     "table": table, "residual": list(residual)})
        return 0
    # orbit of a word under the group the rules generate at depth k
    if not args.point:
        raise ValueError("--point is required for orbit")
    if "^" in args.point:
        w = dynamics.point_prefix(args.point, k)
    else:
        w = args.point
        if len(w) != k or set(w) - {"0", "1"}:
            raise ValueError(f"point {w!r} is not a depth-{k} word")
    F = dynamics.PrefixGroup(k, [h.table(k)[0] for h in gens])
    orbits = F.orbits()
    mine = next(o for o in orbits if w in o)
    _emit(args, {"depth": k, "point": w, "orbit": list(mine),
                 "orbit_count": len(orbits)})
    return 0


def cmd_example(args):
    name = args.name or args.example
    if not name:
        _emit(args, {"examples": dynamics.example_names()})
        return 0
    entry = dynamics.example_catalog(name)
    report = {"name": name, "kind": entry["kind"],
              "pieces": sorted(k for k in entry if k != "kind")}
    if "rules" in entry:
        report["rules"] = [dynamics.format_homeo(h) for h in entry["rules"]]
    if "diagram" in entry and args.depth is not None:
        report["diagram"] = dg.diagram_to_json(entry["diagram"](args.depth))
    _emit(args, report)
    return 0


def cmd_export(args):
    d = _load_diagram(args)
    if args.format == "json":
        payload = json.dumps(dg.diagram_to_json(d), indent=2,
                             sort_keys=True) + "\n"
    else:
        payload = dg.to_dot(d)
        if not payload.endswith("\n"):
            payload += "\n"
    _write(args, payload)
    return 0


# -------------------------------------------------------------------- parser

def build_parser():
    top = argparse.ArgumentParser(
        prog="bratteli",
        description="Bratteli diagrams and discreteness criteria for "
                    "piecewise full groups.")
    sub = top.add_subparsers(dest="verb", required=True)

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--example", metavar="NAME",
                     help="builtin example instead of a file")
    src.add_argument("--depth", type=int, metavar="N",
                     help="builder depth, or truncation depth for a file")

    def add_path(p):
        p.add_argument("path", nargs="?", help="diagram JSON file")

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["json", "text"], default="json")
    fmt.add_argument("--out", metavar="PATH",
                     help="write here instead of stdout")

    p = sub.add_parser("validate", parents=[src, fmt],
                       help="structural checks, report only")
    add_path(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("telescope", parents=[src, fmt],
                       help="contract to a level subsequence")
    add_path(p)
    p.add_argument("--levels", required=True, metavar="I,J,...")
    p.set_defaults(func=cmd_telescope)

    p = sub.add_parser("extend", parents=[src, fmt],
                       help="atom tree over the diagram")
    add_path(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("check", parents=[src, fmt],
                       help="run a discreteness criterion")
    p.add_argument("criterion", choices=["ud", "finite-origin", "simple"])
    add_path(p)
    p.add_argument("--partition-depth", type=int, metavar="K",
                   help="for ud: brute force over partitions of the "
                        "level-K cylinders instead of the path criterion")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("realize", parents=[src, fmt],
                       help="level group orders, censuses, fibers")
    add_path(p)
    p.add_argument("--level", type=int, metavar="N")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("ideals", parents=[src, fmt],
                       help="enumerate ideals or close a seed")
    add_path(p)
    p.add_argument("--seed", metavar="V,W,...",
                   help="vertex ids to close into the least ideal")
    p.set_defaults(func=cmd_ideals)

    p = sub.add_parser("quotient", parents=[src, fmt],
                       help="quotient diagram by an ideal")
    add_path(p)
    p.add_argument("--ideal", required=True, metavar="V,W,...")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("rf-witness", parents=[src, fmt],
                       help="finite symmetric quotient separating an element")
    add_path(p)
    p.add_argument("--element", required=True, metavar="CYCLES",
                   help="cycle notation over extended ids, like '(a#0 a#1)'")
    p.add_argument("--level", type=int, metavar="N",
                   help="level the element lives at (default: last)")
    p.add_argument("--gamma", metavar="V,W,...",
                   help="chain vertex ids, topmost first (default: greedy)")
    p.set_defaults(func=cmd_rf_witness)

    p = sub.add_parser("dimrange", parents=[src, fmt],
                       help="scaled dimension data per level")
    add_path(p)
    p.add_argument("--level", type=int, metavar="N",
                   help="print rank, scale and outgoing matrix of level N")
    p.add_argument("--check", choices=["zero-one"])
    p.set_defaults(func=cmd_dimrange)

    p = sub.add_parser("dynamics", parents=[fmt],
                       help="prefix exchange homeomorphism tools")
    p.add_argument("--rules", required=True,
                   help="semicolon list, like '00<>01;1*:00<>01'")
    p.add_argument("--op", choices=["fixed-set", "table", "orbit", "ud"],
                   default="fixed-set")
    p.add_argument("--depth", type=int, metavar="K")
    p.add_argument("--point", metavar="W", help="word or spec like 01^inf")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("example", parents=[fmt],
                       help="describe a catalog entry")
    p.add_argument("name", nargs="?")
    p.add_argument("--example", metavar="NAME")
    p.add_argument("--depth", type=int, metavar="N",
                   help="also build and print the diagram at this depth")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("export", parents=[src],
                       help="write DOT (or JSON) for a diagram")
    add_path(p)
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_export)

    return top


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
