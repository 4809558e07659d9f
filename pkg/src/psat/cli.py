"""Command-line front end.

Exit codes: 0 holds / success, 1 does not hold, 2 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from psat.assignment import format_assignment, parse_assignment, residual
from psat.cnf import ENCODERS
from psat.dimacs import DimacsError, atom_map, looks_like_dimacs, read_dimacs, write_dimacs
from psat.enumeration import (
    CubeSet,
    count_models,
    enumerate_projected,
    enumerate_verification,
    enumerate_with_generalization,
)
from psat.fixtures import run_selftest
from psat.formula import Formula, Manager, ParseError, QuantifiedFormula
from psat.satcheck import (
    DualChecker,
    ExpansionError,
    bound_assignments,
    entails,
    entails_exists,
    shannon_disjuncts,
    verifies,
    verifies_exists,
    verifies_extended,
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    expansion_bound: int = 20
    brute_bound: int = 20
    exhaustive_fallback_bound: int = 12
    seed: int = 0

    def __post_init__(self):
        for name in ("expansion_bound", "brute_bound", "exhaustive_fallback_bound"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be >= 1")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def config_from(args: argparse.Namespace) -> Config:
    def pick(flag, env, default):
        return flag if flag is not None else _env_int(env, default)

    return Config(
        expansion_bound=pick(args.expansion_bound, "PSAT_EXPANSION_BOUND", 20),
        brute_bound=pick(args.brute_bound, "PSAT_BRUTE_BOUND", 20),
        exhaustive_fallback_bound=pick(args.fallback_bound, "PSAT_FALLBACK_BOUND", 12),
        seed=pick(args.seed, "PSAT_SEED", 0),
    )


def load_formula(path: str, mgr: Manager) -> Formula:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    if looks_like_dimacs(text):
        return read_dimacs(text, mgr).to_formula()
    return mgr.parse(text)


def _atom_set(mgr: Manager, text: str | None) -> frozenset[int]:
    if not text:
        return frozenset()
    return frozenset(mgr.declare(n.strip()) for n in text.split(",") if n.strip())


# -- subcommands --------------------------------------------------------------

def cmd_check(args, cfg: Config, out) -> int:
    mgr = Manager()
    f = load_formula(args.file, mgr)
    mu = parse_assignment(mgr, args.assign or "")
    bound = _atom_set(mgr, args.exists)
    if bound:
        if args.mode not in ("verify", "entail"):
            raise UsageError(f"--exists supports modes verify and entail, not {args.mode}")
        q = QuantifiedFormula(f, bound)
        if mu.mapped & q.bound:
            raise UsageError("the assignment maps existentially bound atoms")
        if args.mode == "verify":
            holds = verifies_exists(mu, q)
        else:
            holds = entails_exists(mu, q, fallback_bound=cfg.exhaustive_fallback_bound)
        if args.explain:
            out(f"residual: {residual(f, mu)}")
    elif args.mode == "dual":
        dual = DualChecker(f)
        holds = dual.entails(mu)
        if args.explain:
            if dual.countermodel is None:
                out("countermodel: none")
            else:
                out(f"countermodel: {format_assignment(mgr, dual.countermodel)}")
    else:
        if args.mode == "verify":
            holds = verifies(mu, f)
        elif args.mode == "verify-ext":
            holds = verifies_extended(mu, f)
        else:
            holds = entails(mu, f)
        if args.explain:
            out(f"residual: {residual(f, mu, extended=args.mode == 'verify-ext')}")
    out("holds" if holds else "does not hold")
    return 0 if holds else 1


def cmd_cnfize(args, cfg: Config, out) -> int:
    mgr = Manager()
    f = load_formula(args.file, mgr)
    enc = ENCODERS[args.method](f)
    text = write_dimacs(enc)
    amap = atom_map(enc)
    if args.output:
        Path(args.output).write_text(text)
        Path(args.map or args.output + ".map").write_text(amap)
    else:
        sys.stdout.write(text)
        if args.map:
            Path(args.map).write_text(amap)
    return 0


def cmd_shannon(args, cfg: Config, out) -> int:
    mgr = Manager()
    f = load_formula(args.file, mgr)
    q = QuantifiedFormula(f, _atom_set(mgr, args.exists))
    disjuncts = shannon_disjuncts(q, limit=cfg.expansion_bound)
    for delta, d in zip(bound_assignments(q.bound), disjuncts):
        out(f"[{format_assignment(mgr, delta)}] {d}")
    return 0


def _run_enumeration(f: Formula, mgr: Manager, mode: str, overlap: bool, project: str | None, engine: str) -> CubeSet:
    bound = _atom_set(mgr, project)
    if engine == "split":
        if bound or mode != "verify" or overlap:
            raise UsageError("--engine split supports only --mode verify without --project/--overlap")
        return enumerate_verification(f)
    if bound:
        return enumerate_projected(QuantifiedFormula(f, bound), mode, disjoint=not overlap)
    return enumerate_with_generalization(f, mode, disjoint=not overlap)


def _cube_line(mgr: Manager, a) -> str:
    return format_assignment(mgr, a) if len(a) else "true"


def cmd_enumerate(args, cfg: Config, out) -> int:
    mgr = Manager()
    f = load_formula(args.file, mgr)
    cs = _run_enumeration(f, mgr, args.mode, args.overlap, args.project, args.engine)
    models = count_models(cs) if cs.disjoint else None
    if args.json:
        doc = {
            "cubes": [[mgr.name(abs(l)) if l > 0 else "-" + mgr.name(abs(l)) for l in c.literals] for c in cs],
            "disjoint": cs.disjoint,
            "model_count": models,
            "stats": {k: cs.stats.get(k) for k in ("num_cubes", "sum_cube_sizes", "solver_calls", "wall_ms")},
        }
        out(json.dumps(doc, sort_keys=True))
        return 0
    for c in cs:
        out(_cube_line(mgr, c.assignment))
    if args.count:
        if models is None:
            raise UsageError("count requires disjoint cubes (drop --overlap)")
        out(f"models {models}")
    return 0


def cmd_compare(args, cfg: Config, out) -> int:
    mgr = Manager()
    f = load_formula(args.file, mgr)
    rows = []
    for mode in ("verify", "entail"):
        cs = _run_enumeration(f, mgr, mode, False, args.project, "generalize")
        rows.append(
            {
                "mode": mode,
                "num_cubes": len(cs),
                "sum_cube_sizes": cs.sum_cube_sizes,
                "solver_calls": cs.stats["solver_calls"],
                "model_count": count_models(cs),
                "cube_sizes": [len(c) for c in cs],
                "wall_ms": cs.stats["wall_ms"],
            }
        )
    if args.json:
        out(json.dumps(rows, sort_keys=True))
    else:
        out(f"{'mode':<8}{'cubes':>8}{'literals':>10}{'solver_calls':>14}{'models':>8}")
        for r in rows:
            out(f"{r['mode']:<8}{r['num_cubes']:>8}{r['sum_cube_sizes']:>10}{r['solver_calls']:>14}{r['model_count']:>8}")
    if args.figure:
        from psat.plotting import plot_comparison

        plot_comparison(rows, args.figure, title=Path(args.file).name)
    return 0


def cmd_selftest(args, cfg: Config, out) -> int:
    return 0 if run_selftest(out) else 1


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="psat", description="Partial-assignment satisfaction and AllSAT enumeration.")
    p.add_argument("--expansion-bound", type=int, help="max bound atoms for Shannon expansion (env PSAT_EXPANSION_BOUND)")
    p.add_argument("--brute-bound", type=int, help="max atoms for brute-force oracles (env PSAT_BRUTE_BOUND)")
    p.add_argument("--fallback-bound", type=int, help="max residual atoms for truth-table checks (env PSAT_FALLBACK_BOUND)")
    p.add_argument("--seed", type=int, help="seed for randomized suites (env PSAT_SEED)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check a partial assignment against a formula")
    c.add_argument("--mode", choices=("verify", "verify-ext", "entail", "dual"), required=True)
    c.add_argument("--assign", default="", help='literals such as "A1,-A3"')
    c.add_argument("--exists", help="comma-separated existentially bound atoms")
    c.add_argument("--explain", action="store_true", help="print the residual or the dual countermodel")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("cnfize", help="CNF-ize a formula into DIMACS")
    c.add_argument("--method", choices=sorted(ENCODERS), default="tseitin")
    c.add_argument("-o", "--output", help="DIMACS output file (default stdout)")
    c.add_argument("--map", help="atom map file (default <output>.map)")
    c.add_argument("file")
    c.set_defaults(func=cmd_cnfize)

    c = sub.add_parser("shannon", help="print the Shannon expansion disjuncts of exists B . f")
    c.add_argument("--exists", required=True, help="comma-separated bound atoms")
    c.add_argument("file")
    c.set_defaults(func=cmd_shannon)

    c = sub.add_parser("enumerate", help="enumerate cubes covering the models")
    c.add_argument("--mode", choices=("verify", "entail"), default="entail")
    c.add_argument("--overlap", action="store_true", help="allow overlapping cubes")
    c.add_argument("--project", help="comma-separated atoms to project away")
    c.add_argument("--engine", choices=("generalize", "split"), default="generalize")
    c.add_argument("--count", action="store_true", help="print the model count")
    c.add_argument("--json", action="store_true")
    c.add_argument("file")
    c.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("compare", help="enumerate in both modes and tabulate")
    c.add_argument("--project", help="comma-separated atoms to project away")
    c.add_argument("--json", action="store_true")
    c.add_argument("--figure", help="write a comparison chart (png, svg, pdf)")
    c.add_argument("file")
    c.set_defaults(func=cmd_compare)

    c = sub.add_parser("selftest", help="run the worked-example fixtures")
    c.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None, out=print) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = config_from(args)
        return args.func(args, cfg, out)
    except (ParseError, DimacsError, ExpansionError, UsageError, OSError, ValueError) as exc:
        print(f"psat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
