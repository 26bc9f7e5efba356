"""Command-line entry point.

    lpmlnkit solve FILE            stable models, weights and probabilities
    lpmlnkit map FILE              most probable stable models
    lpmlnkit translate FILE --mode clingo --simplify
    lpmlnkit plog solve|translate|crosscheck FILE

Results go to stdout, diagnostics to stderr.  Exit codes: 1 parse or
other input error, 2 enumeration cap, 3 inconsistent program, 4 input not
in rule form, 5 P-log validity condition violated.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .core import atom_key
from .errors import LpmlnError
from .grounder import ground
from .lpmln import map_models, probability_table
from .stable import EPS, sort_models
from .syntax import parse_lpmln, print_lpmln
from .translate import (
    emit_aspcore2, format_wc, lpmln2wc, lpmln2wc_pnt, lpmln2wc_pnt_rule, lpmln2wc_rule_clingo,
)

MODES = ("wc", "pnt", "pnt-rule", "clingo")


@dataclass(frozen=True)
class RunConfig:
    path: str
    command: str
    mode: str = "wc"
    scale: int = 1000
    strict_hard: bool = False
    simplify: bool = False
    fmt: str = "human"
    tol: float = EPS
    max_atoms: int = 24
    max_component: int = 16
    emit: str = "lpmln"

    @property
    def caps(self) -> dict:
        return {"max_atoms": self.max_atoms, "max_component": self.max_component}


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return value


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("file")
    p.add_argument("--format", dest="fmt", choices=("human", "records"), default="human")
    p.add_argument("--max-atoms", type=_positive_int, default=24,
                   help="largest atom set enumerated without splitting")
    p.add_argument("--max-component", type=_positive_int, default=16,
                   help="largest strongly connected component enumerated")
    p.add_argument("--tol", type=_nonnegative_float, default=EPS)
    p.add_argument("--scale", type=_positive_int, default=1000,
                   help="weight multiplier for ASP output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpmlnkit", description="LP^MLN and P-log toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("solve", "list stable models with weights and probabilities"),
                       ("map", "print the most probable stable models"),
                       ("translate", "translate to a program with weak constraints")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--mode", choices=MODES, default="wc")
        p.add_argument("--strict-hard", action="store_true",
                       help="keep hard rules as ordinary rules")
        p.add_argument("--simplify", action="store_true",
                       help="drop unsat atoms for constraints (clingo mode)")
    plog = sub.add_parser("plog", help="P-log programs")
    psub = plog.add_subparsers(dest="plog_command", required=True)
    for name in ("solve", "translate", "crosscheck"):
        p = psub.add_parser(name)
        _common(p)
        p.add_argument("--emit", choices=("lpmln", "clingo"), default="lpmln")
    return parser


def config_from(args: argparse.Namespace) -> RunConfig:
    command = args.command if args.command != "plog" else f"plog-{args.plog_command}"
    return RunConfig(
        path=args.file, command=command, mode=getattr(args, "mode", "wc"), scale=args.scale,
        strict_hard=getattr(args, "strict_hard", False), simplify=getattr(args, "simplify", False),
        fmt=args.fmt, tol=args.tol, max_atoms=args.max_atoms,
        max_component=args.max_component, emit=getattr(args, "emit", "lpmln"),
    )


# ---------------------------------------------------------------- output helpers

def atoms_list(model) -> list:
    return [str(a) for a in sorted(model, key=atom_key)]


def braces(model) -> str:
    return "{" + ", ".join(atoms_list(model)) + "}"


def _record(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True)


def _soft(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.12g}"


# ---------------------------------------------------------------- commands

def _load_ground(cfg: RunConfig):
    with open(cfg.path, encoding="utf-8") as fh:
        return ground(parse_lpmln(fh.read()))


def cmd_solve(cfg: RunConfig, out) -> int:
    table = probability_table(_load_ground(cfg), **cfg.caps)
    if cfg.fmt == "records":
        for e in table.entries:
            out.write(_record({"model": atoms_list(e.model), "hard": e.weight.hard,
                               "soft": e.weight.soft, "probability": e.probability,
                               "k_max": table.k_max}) + "\n")
        return 0
    out.write(f"k_max = {table.k_max}\n")
    out.write(f"{'probability':>14}  {'k':>3}  {'s':>10}  model\n")
    for e in table.entries:
        out.write(f"{e.probability:14.10f}  {e.weight.hard:>3}  {_soft(e.weight.soft):>10}  "
                  f"{braces(e.model)}\n")
    return 0


def cmd_map(cfg: RunConfig, out) -> int:
    models = sort_models(map_models(_load_ground(cfg), eps=cfg.tol, **cfg.caps))
    for m in models:
        out.write(_record({"model": atoms_list(m)}) + "\n" if cfg.fmt == "records"
                  else braces(m) + "\n")
    return 0


def translate_program(gp, cfg: RunConfig):
    if cfg.mode == "wc":
        return lpmln2wc(gp, strict_hard=cfg.strict_hard)
    if cfg.mode == "pnt":
        return lpmln2wc_pnt(gp)
    if cfg.mode == "pnt-rule":
        return lpmln2wc_pnt_rule(gp)
    return lpmln2wc_rule_clingo(gp, simplify_constraints=cfg.simplify,
                                strict_hard=cfg.strict_hard)


def cmd_translate(cfg: RunConfig, out) -> int:
    gp = _load_ground(cfg)
    if not gp.rules:
        return 0
    t = translate_program(gp, cfg)
    out.write(emit_aspcore2(t, cfg.scale) if cfg.mode == "clingo" else format_wc(t))
    return 0


def _load_plog(cfg: RunConfig):
    from .plog import parse_plog, require_conditions
    with open(cfg.path, encoding="utf-8") as fh:
        prog = parse_plog(fh.read())
    require_conditions(prog, **cfg.caps)
    return prog


def _readable(atom) -> str:
    """eq_c(u, v) back to c(u)=v; other atoms unchanged."""
    if atom.predicate.startswith("eq_"):
        name, args = atom.predicate[3:], atom.args
        head = f"{name}({','.join(map(str, args[:-1]))})" if len(args) > 1 else name
        return f"{head}={args[-1]}"
    return str(atom)


def cmd_plog_solve(cfg: RunConfig, out) -> int:
    from .plog import possible_worlds
    reports = possible_worlds(_load_plog(cfg), **cfg.caps)
    rows = [([str(a) for a in r.happen], [_readable(a) for a in sorted(r.world, key=atom_key)], r)
            for r in reports]
    # ordered by the random selections, then by the rest of the world
    rows.sort(key=lambda row: row[:2])
    for k, (_, world, r) in enumerate(rows, 1):
        if cfg.fmt == "records":
            out.write(_record({"world": world, "mu_hat": str(r.mu_hat), "mu": r.mu}) + "\n")
        else:
            out.write(f"W{k}  mu_hat = {r.mu_hat}  mu = {r.mu:.12g}\n")
            out.write("    {" + ", ".join(world) + "}\n")
    return 0


def cmd_plog_translate(cfg: RunConfig, out) -> int:
    from .plog import plog2lpmln
    program = plog2lpmln(_load_plog(cfg))
    if cfg.emit == "lpmln":
        out.write(print_lpmln(program))
        return 0
    t = lpmln2wc_rule_clingo(ground(program), strict_hard=True)
    out.write(emit_aspcore2(t, cfg.scale))
    return 0


def cmd_plog_crosscheck(cfg: RunConfig, out) -> int:
    from .plog import crosscheck
    report = crosscheck(_load_plog(cfg), **cfg.caps)
    status = "ok" if report.ok else "MISMATCH"
    within = report.max_deviation <= cfg.tol
    if cfg.fmt == "records":
        out.write(_record({"bijection": report.ok, "worlds_match": report.worlds_match,
                           "phi_match": report.phi_match, "worlds": len(report.reports),
                           "max_deviation": report.max_deviation}) + "\n")
    else:
        out.write(f"worlds: {len(report.reports)}\n")
        out.write(f"world/model bijection: {status}\n")
        out.write(f"max |mu - P|: {report.max_deviation:.3g}\n")
    return 0 if report.ok and within else 1


COMMANDS = {
    "solve": cmd_solve, "map": cmd_map, "translate": cmd_translate,
    "plog-solve": cmd_plog_solve, "plog-translate": cmd_plog_translate,
    "plog-crosscheck": cmd_plog_crosscheck,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return COMMANDS[cfg.command](cfg, out)
    except LpmlnError as exc:
        err.write(f"lpmlnkit: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        err.write(f"lpmlnkit: {exc}\n")
        return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from(args))


if __name__ == "__main__":
    sys.exit(main())
