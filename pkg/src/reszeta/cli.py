"""Command line front end.

Commands: zeta, decompose, reconstruct, roundtrip, isomorphic, from-pairs,
dot, search.  Output is deterministic and line oriented.  Exit codes:
0 success, 2 parse/validation error, 3 ambiguous reconstruction,
4 inconsistent series or unresolved case, 5 order not inferable.
"""

from __future__ import annotations

import argparse
import sys

from . import configio, fixtures, reconstruct, search, series
from .errors import (
    AmbiguousReconstruction,
    InconsistentSeries,
    NotInferable,
    ResZetaError,
    SelfCheckFailed,
    UnresolvedCase,
)
from .resolution import canonical_key, contract_to_minimal, from_char_pairs, is_isomorphic
from .zeta import collapse_to_one_variable, zeta_factored


def _read_config(path: str):
    if path == "-":
        return sys.stdin.read()
    if path.startswith("fixture:"):
        return fixtures.fixture_text(path.split(":", 1)[1])
    with open(path) as fh:
        return fh.read()


def _load(path: str):
    text = _read_config(path)
    return configio.parse_config(text)


def _cmd_zeta(args) -> int:
    graph, sym, targets = _load(args.config)
    F = zeta_factored(graph, sym, targets)
    if args.collapse:
        F = collapse_to_one_variable(F)
    if args.expand:
        sys.stdout.write(series.format_sparse(F.expand(args.cutoff)))
    else:
        sys.stdout.write(series.format_factored(F))
    return 0


def _cmd_decompose(args) -> int:
    f = series.parse_sparse(sys.stdin.read())
    sys.stdout.write(series.format_factored(series.decompose(f)))
    return 0


def _profile_lines(profile) -> list[str]:
    lines = [f"mode {profile.mode}", f"order {profile.order}",
             f"branches {len(profile.branches)}"]
    for i, bp in enumerate(profile.branches):
        gens = ",".join(map(str, bp.generators))
        quots = ",".join(map(str, bp.quotients)) or "-"
        ladder = ";".join(f"{m}:{r}" for m, r in bp.ladder) or "-"
        lines.append(
            f"branch {i}: generators {gens} quotients {quots} ladder {ladder} "
            f"terminal {bp.terminal_m} at_rupture {str(bp.terminal_at_rupture).lower()} "
            f"orbit {bp.orbit} weight {bp.weight}"
        )
    for (i, j), k in sorted(profile.separations.items()):
        mi, mj = profile.separation_values[(i, j)]
        lines.append(f"separation {i} {j}: contact {k} m {mi} {mj}")
    return lines


def _cmd_reconstruct(args) -> int:
    F = series.parse_factored(sys.stdin.read(), var_count=args.vars)
    if args.mode == "divisorial":
        profile = reconstruct.reconstruct_divisorial(F, args.vars, args.order)
    else:
        profile = reconstruct.reconstruct_curves(F, args.vars, args.order)
    for line in _profile_lines(profile):
        print(line)
    if args.emit_graph or args.emit_dot:
        graph, sym = reconstruct.build_minimal_graph(profile)
        if args.emit_graph:
            sys.stdout.write(configio.emit_config(graph, sym, profile.mode))
        if args.emit_dot:
            from .zeta import targets_from

            sys.stdout.write(configio.emit_dot(graph, sym, targets_from(graph, sym, profile.mode)))
    return 0


def _cmd_roundtrip(args) -> int:
    graph, sym, targets = _load(args.config)
    F = zeta_factored(graph, sym, targets)
    if targets.mode == "divisorial":
        profile = reconstruct.reconstruct_divisorial(F, targets.var_count, sym.order)
    else:
        profile = reconstruct.reconstruct_curves(F, targets.var_count, sym.order)
    rebuilt, _rsym = reconstruct.build_minimal_graph(profile)
    ok = is_isomorphic(rebuilt, contract_to_minimal(graph))
    print(f"series factors {len(F.factors)}")
    print(f"roundtrip {'ok' if ok else 'MISMATCH'}")
    return 0 if ok else 4


def _cmd_isomorphic(args) -> int:
    g1, _s1, _t1 = _load(args.config_a)
    g2, _s2, _t2 = _load(args.config_b)
    print("isomorphic" if is_isomorphic(g1, g2) else "different")
    return 0


def _cmd_from_pairs(args) -> int:
    pairs = []
    for chunk in args.pairs.split(";"):
        p, q = chunk.split(",")
        pairs.append((int(p), int(q)))
    graph = from_char_pairs(pairs)
    from .resolution import trivial_symmetry

    sys.stdout.write(configio.emit_config(graph, trivial_symmetry(), "curve"))
    return 0


def _cmd_dot(args) -> int:
    graph, sym, targets = _load(args.config)
    sys.stdout.write(configio.emit_dot(graph, sym, targets))
    return 0


def _cmd_search(args) -> int:
    weights = tuple(int(w) for w in args.weights.split(",")) if args.weights else ()
    bounds = search.SearchBounds(
        mode=args.mode,
        max_vertices=args.max_vertices,
        order=args.order,
        weights=weights,
        jobs=args.jobs,
    )
    report = search.collision_search(bounds)
    sys.stdout.write(report.render())
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="reszeta",
        description="Zeta series of symmetric plane valuations and their inverse",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", help="factored zeta series of a configuration")
    p.add_argument("config", help="config file, '-' for stdin, or fixture:<name>")
    p.add_argument("--expand", action="store_true")
    p.add_argument("--cutoff", type=int, default=32)
    p.add_argument("--collapse", action="store_true",
                   help="identify all variables before printing")
    p.set_defaults(fn=_cmd_zeta)

    p = sub.add_parser("decompose", help="binomial decomposition of a sparse series")
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("reconstruct", help="profile and graph from a factored series")
    p.add_argument("--mode", choices=("divisorial", "curve"), required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--emit-graph", action="store_true")
    p.add_argument("--emit-dot", action="store_true")
    p.set_defaults(fn=_cmd_reconstruct)

    p = sub.add_parser("roundtrip", help="forward series, reconstruct, compare")
    p.add_argument("config")
    p.set_defaults(fn=_cmd_roundtrip)

    p = sub.add_parser("isomorphic", help="compare two configurations")
    p.add_argument("config_a")
    p.add_argument("config_b")
    p.set_defaults(fn=_cmd_isomorphic)

    p = sub.add_parser("from-pairs", help="minimal resolution from Puiseux pairs")
    p.add_argument("pairs", help="semicolon-separated pairs, e.g. '2,3;3,17'")
    p.set_defaults(fn=_cmd_from_pairs)

    p = sub.add_parser("dot", help="DOT rendering of a configuration")
    p.add_argument("config")
    p.set_defaults(fn=_cmd_dot)

    p = sub.add_parser("search", help="collision search over mirror doubles")
    p.add_argument("--mode", choices=("divisorial", "curve"), default="divisorial")
    p.add_argument("--max-vertices", type=int, default=7)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--weights", default="")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_search)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except AmbiguousReconstruction as exc:
        print(f"ambiguous: {exc}", file=sys.stderr)
        for w in exc.witnesses:
            print(f"  witness: {w}", file=sys.stderr)
        return 3
    except (InconsistentSeries, UnresolvedCase, SelfCheckFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except NotInferable as exc:
        print(f"not inferable: {exc}", file=sys.stderr)
        return 5
    except ResZetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
