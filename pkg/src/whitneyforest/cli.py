"""Command-line front end: ``wf <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys

from . import acceptance
from .config import Config, ConfigError, load_config
from .eta import EtaInvariantError, audit_well_defined, eta_parsed, ker_eta
from .invariants import (ForestError, RecipeError, arf_value, load_forest, milnor, realize_recipe,
                         replay, tau)
from .lie import NotInKernel, bracket_kernel, dn_rank_formula, witt_rank
from .tree_groups import UnknownGenerator, group, write_matrix_market
from .trees import (InfTree, LabelError, ResourceLimitError, TreeSyntaxError, canonicalize,
                    leaves, parse_generator)

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2, 3


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}"
                         for v in obj)
    return f"{pad}{obj}"


def emit(obj, cfg: Config) -> None:
    if cfg.output == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        print(_text(obj))


def cmd_ranks(args, cfg: Config) -> int:
    rows = []
    for n in range(1, args.n_max + 1):
        rows.append({"n": n, "r_n": witt_rank(args.m, n), "dn_formula": dn_rank_formula(args.m, n),
                     "dn_kernel": len(bracket_kernel(args.m, n, cfg.generator_cap))})
    if cfg.output == "text":
        print(f"{'n':>3} {'r_n':>8} {'D_n formula':>12} {'D_n kernel':>11}")
        for r in rows:
            print(f"{r['n']:>3} {r['r_n']:>8} {r['dn_formula']:>12} {r['dn_kernel']:>11}")
    else:
        emit({"m": args.m, "rows": rows}, cfg)
    return EXIT_OK


def cmd_group(args, cfg: Config) -> int:
    p, s = group(args.m, args.n, args.kind == "twisted", cfg.generator_cap, cfg.matrix_entry_limit)
    if args.dump_matrix:
        write_matrix_market(p, args.dump_matrix)
    emit(s.to_json(), cfg)
    return EXIT_OK


def _max_label(parsed) -> int:
    kind, body = parsed
    trees = body if kind == "tree" else (body,)
    return max(max(leaves(t)) for t in trees)


def cmd_eta(args, cfg: Config) -> int:
    if args.action == "apply":
        parsed = parse_generator(args.expr, args.m)
        m = args.m or _max_label(parsed)
        emit(eta_parsed(parsed, m).to_json(), cfg)
        return EXIT_OK
    if args.action == "audit":
        rep = audit_well_defined(args.m, args.n, cfg.generator_cap, cfg.matrix_entry_limit)
        emit(rep.to_json(), cfg)
        return EXIT_OK if rep.ok else EXIT_FAIL
    rep = ker_eta(args.m, args.n, cfg.generator_cap, cfg.matrix_entry_limit)
    emit(rep.to_json(), cfg)
    return EXIT_OK


def cmd_milnor(args, cfg: Config) -> int:
    f = load_forest(args.file)
    res = milnor(f, cfg.generator_cap)
    if args.longitude is not None and not 1 <= args.longitude <= f.m:
        raise ForestError(f"no component {args.longitude}")
    emit(res.to_json(args.longitude), cfg)
    return EXIT_OK


def cmd_tau(args, cfg: Config) -> int:
    f = load_forest(args.file)
    emit(tau(f, cfg.generator_cap, cfg.matrix_entry_limit).to_json(), cfg)
    return EXIT_OK


def cmd_arf(args, cfg: Config) -> int:
    f = load_forest(args.file)
    emit(arf_value(f, cfg.generator_cap, cfg.matrix_entry_limit).to_json(), cfg)
    return EXIT_OK


def cmd_realize(args, cfg: Config) -> int:
    kind, body = parse_generator(args.expr)
    if kind == "tree":
        g, _ = canonicalize(*body)
    elif kind == "inf":
        g = InfTree.of(body)
    else:
        raise RecipeError("realize takes an unrooted tree <A,B> or a twisted tree inf(J)")
    r = realize_recipe(g)
    replay(r)
    emit(r.to_json(), cfg)
    return EXIT_OK


def cmd_selftest(args, cfg: Config) -> int:
    results = acceptance.run_suite(full=args.level == "full")
    if cfg.output == "json":
        emit({"level": args.level, "passed": all(r.passed for r in results),
              "criteria": [{"name": r.name, "passed": r.passed, "seconds": round(r.seconds, 3),
                            "detail": r.detail} for r in results]}, cfg)
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _positive(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wf", description="Tree groups, eta maps and Milnor invariants.")
    ap.add_argument("--config", help="TOML file with config keys")
    ap.add_argument("--generator-cap", type=int)
    ap.add_argument("--matrix-entry-limit", type=int)
    ap.add_argument("--threads", dest="thread_count")
    ap.add_argument("--output", choices=["json", "text"])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ranks", help="Witt ranks and ranks of D_n")
    p.add_argument("m", type=int)
    p.add_argument("n_max", type=int)
    p.set_defaults(fn=cmd_ranks)

    p = sub.add_parser("group", help="structure of T_n(m) or T_n^inf(m)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=_positive)
    p.add_argument("kind", choices=["framed", "twisted"])
    p.add_argument("--dump-matrix", metavar="PATH", help="write relations in Matrix Market format")
    p.set_defaults(fn=cmd_group)

    p = sub.add_parser("eta", help="apply, audit or compute the kernel of eta")
    esub = p.add_subparsers(dest="action", required=True)
    e = esub.add_parser("apply")
    e.add_argument("expr")
    e.add_argument("--m", type=int, help="number of components (default: largest label)")
    for name in ("audit", "kernel"):
        e = esub.add_parser(name)
        e.add_argument("m", type=int)
        e.add_argument("n", type=_positive)
    p.set_defaults(fn=cmd_eta)

    p = sub.add_parser("milnor", help="first non-vanishing Milnor invariant of a forest")
    p.add_argument("file")
    p.add_argument("--longitude", type=int)
    p.set_defaults(fn=cmd_milnor)

    p = sub.add_parser("tau", help="class of a forest in the twisted tree group")
    p.add_argument("file")
    p.set_defaults(fn=cmd_tau)

    p = sub.add_parser("arf", help="Arf_k representative of a forest of order 4k-2")
    p.add_argument("file")
    p.set_defaults(fn=cmd_arf)

    p = sub.add_parser("realize", help="Bing-doubling recipe for a generator")
    p.add_argument("expr")
    p.set_defaults(fn=cmd_realize)

    p = sub.add_parser("selftest", help="run the certification suite")
    p.add_argument("level", choices=["quick", "full"], nargs="?", default="quick")
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config, generator_cap=args.generator_cap,
                          matrix_entry_limit=args.matrix_entry_limit,
                          thread_count=args.thread_count, output=args.output)
        if getattr(args, "m", None) is not None and args.m < 1:
            raise ValueError("m must be at least 1")
        return args.fn(args, cfg)
    except ResourceLimitError as exc:
        print(f"wf: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (EtaInvariantError, NotInKernel) as exc:
        print(f"wf: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ConfigError, ForestError, RecipeError, TreeSyntaxError, LabelError, UnknownGenerator,
            ValueError, OSError) as exc:
        print(f"wf: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
