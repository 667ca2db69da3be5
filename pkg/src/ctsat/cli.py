"""Command-line driver: solve, trace, verify, fuzz, oracle.

Exit codes: 10 SAT, 20 UNSAT, 0 success for non-solving commands,
1 usage or input error, 2 internal defect (unsound witness).
"""
from __future__ import annotations

import argparse
import json
import string
import sys
from dataclasses import dataclass
from pathlib import Path

from . import oracle, render
from .decomposition import CoverageError, Permutation, parse_permutations
from .formula import DimacsError, TabularFormula, read_dimacs, variable_names
from .inversion import OracleLimitError, apply_cic, full_search_jss
from .triplets import Cts, clear
from .verify import run_checks
from .zero_distribution import Contradiction, SolverDefect, SolveState, preprocess_constants

EXIT_OK, EXIT_USAGE, EXIT_DEFECT, EXIT_SAT, EXIT_UNSAT = 0, 1, 2, 10, 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    input: Path | None = None
    perms: Path | None = None
    trace: bool = False
    json: bool = False
    seed: int = 0
    n_limit: int = 20
    start_order: tuple[str, ...] = ()
    letters: bool = False

    def __post_init__(self):
        if self.n_limit <= 0:
            raise UsageError("--n-limit must be positive")


def _load(config: RunConfig) -> tuple[TabularFormula, list[Permutation] | None, list[str]]:
    try:
        formula = read_dimacs(config.input.read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {config.input}") from None
    except DimacsError as exc:
        raise UsageError(f"{config.input}: {exc}") from None
    perms = None
    if config.perms is not None:
        try:
            perms = parse_permutations(config.perms.read_text(), formula.n)
        except FileNotFoundError:
            raise UsageError(f"no such file: {config.perms}") from None
        except ValueError as exc:
            raise UsageError(f"{config.perms}: {exc}") from None
    if config.letters and formula.n <= 26:
        names = list(string.ascii_lowercase[:formula.n])
    else:
        names = variable_names(formula.n)
    return formula, perms, names


def _run_pipeline(formula, perms, names, start_order=()):
    try:
        return oracle.pipeline(formula, perms, start_order, names)
    except CoverageError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_solve(config: RunConfig) -> int:
    formula, perms, names = _load(config)
    stages = _run_pipeline(formula, perms, names, config.start_order)
    result = stages["result"]
    if config.trace:
        sys.stdout.write(result.trace_lines())
    if config.json:
        print(json.dumps({"verdict": result.verdict, "witness": result.witness,
                          "n": formula.n, "m": formula.m, "k": stages["decomposition"].k,
                          "backtracks": result.backtracks,
                          "implications": [list(p) for p in result.implication_log]},
                         ensure_ascii=False))
    else:
        print(result.verdict if result.witness is None else f"{result.verdict} {result.witness}")
    return EXIT_SAT if result.sat else EXIT_UNSAT


def _section(title: str, body: str) -> str:
    return f"== {title} ==\n{body}\n"


def cmd_trace(config: RunConfig) -> int:
    formula, perms, names = _load(config)
    stages = _run_pipeline(formula, perms, names, config.start_order)
    dec, built, unified, ccs, result = (stages[k] for k in
                                        ("decomposition", "cts", "unified", "ccs", "result"))
    raw = [Cts(p.permutation, tuple(frozenset(range(8)) - t for t in p.tiers)) for p in dec.parts]
    if config.json:
        payload = {
            "formula": formula.to_json(),
            "decomposition": dec.to_json(),
            "cts_raw": [s.to_json() for s in raw],
            "cts": built.to_json(),
            "unified": unified.to_json(),
            "ccs": ccs.to_json() if ccs is not None else None,
            "trace": result.trace,
            "verdict": result.verdict,
            "witness": result.witness,
        }
        print(json.dumps(payload, ensure_ascii=False, indent=1))
        return EXIT_SAT if result.sat else EXIT_UNSAT
    out = [_section("formula", formula.render(names)),
           _section("CT formulas", render.render_system(dec.parts, "F", names)),
           _section("CTS before clearing", render.render_system(raw, "S", names, marks=True)),
           _section("CTS", render.render_system([clear(s) for s in raw], "S", names)),
           _section("unified CTS", render.render_system(unified.structures, "S", names))]
    if ccs is not None:
        out.append(_section("CCS", render.render_system(ccs.structures, "G", names)))
        state = SolveState.fresh(ccs, names)
        try:
            preprocess_constants(state)
        except Contradiction:
            pass
        else:
            start = "".join(map(str, state.u))
            modified = [apply_cic(s, start) for s in ccs]
            out.append(_section(f"CCS after CIC {start}", render.render_system(modified, "H", names)))
        if result.sat:
            final = result.witness.replace("*", "0")
            modified = [apply_cic(s, final) for s in ccs]
            out.append(_section(f"CCS after CIC {final}", render.render_system(modified, "H", names)))
    out.append(_section("solve", result.trace_lines().rstrip("\n")))
    verdict = result.verdict if result.witness is None else f"{result.verdict} {result.witness}"
    out.append(verdict)
    print("\n".join(out))
    return EXIT_SAT if result.sat else EXIT_UNSAT


def cmd_verify(config: RunConfig) -> int:
    results = run_checks()
    if config.json:
        print(json.dumps([{"name": r.name, "status": r.status, "details": r.details}
                          for r in results], indent=1))
    else:
        for r in results:
            print(f"{r.status:<9} {r.name}")
            for d in r.details:
                print(f"          {d}")
    return EXIT_OK if all(r.status != "FAIL" for r in results) else EXIT_USAGE


def cmd_fuzz(config: RunConfig, n: int, ms: list[int], count: int, out_dir: Path | None) -> int:
    if n > config.n_limit:
        raise UsageError(f"n={n} exceeds --n-limit {config.n_limit}")
    if n < 3 or count < 0 or any(m < 0 for m in ms):
        raise UsageError("fuzz needs n >= 3 and non-negative --m/--count")
    summary = oracle.fuzz(count, n, ms, config.seed, out_dir)
    print(json.dumps(summary, indent=None if not config.json else 1))
    return EXIT_DEFECT if summary["unsound"] else EXIT_OK


def cmd_oracle(config: RunConfig, mode: str) -> int:
    formula, perms, names = _load(config)
    if formula.n > config.n_limit:
        raise UsageError(f"n={formula.n} exceeds --n-limit {config.n_limit}")
    if mode == "brute":
        models = sorted(oracle.brute_force(formula))
        print(json.dumps({"n": formula.n, "count": len(models), "models": models}))
        return EXIT_SAT if models else EXIT_UNSAT
    if mode == "diff":
        report, _ = oracle.differential_run(formula, config.seed, perms)
        print(json.dumps(report.to_json()))
        return EXIT_OK if report.sound else EXIT_DEFECT
    stages = _run_pipeline(formula, perms, names)
    jss = sorted(full_search_jss(stages["unified"], config.n_limit))
    print(json.dumps({"n": formula.n, "jss": jss}))
    return EXIT_SAT if jss else EXIT_UNSAT


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ctsat", description="Compact-triplets satisfiability pipeline.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, perms=True):
        p.add_argument("input", type=Path, help="DIMACS CNF file (exactly 3 literals per clause)")
        if perms:
            p.add_argument("--perms", type=Path, help="permutations, one per line, comma-separated")
        p.add_argument("--letters", action="store_true", help="name variables a, b, c, ...")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("solve", help="decide satisfiability")
    common(p)
    p.add_argument("--trace", action="store_true", help="print line-JSON solver events")
    p.add_argument("--start-order", default="", help="e.g. 'a,f' or 'a=1'")

    p = sub.add_parser("trace", help="print every intermediate structure")
    common(p)
    p.add_argument("--start-order", default="")

    p = sub.add_parser("verify", help="golden checks against the shipped worked examples")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("fuzz", help="differential batch against brute force")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--m", type=int, nargs="+", default=[30, 42, 50])
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-limit", type=int, default=oracle.BRUTE_FORCE_LIMIT)
    p.add_argument("--out", type=Path, default=None, help="directory for counterexamples")
    p.add_argument("--json", action="store_true", help="pretty-print the summary")

    p = sub.add_parser("oracle", help="exponential reference computations")
    p.add_argument("mode", choices=["cic", "brute", "diff"])
    common(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-limit", type=int, default=20)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            input=getattr(args, "input", None),
            perms=getattr(args, "perms", None),
            trace=getattr(args, "trace", False),
            json=getattr(args, "json", False),
            seed=getattr(args, "seed", 0),
            n_limit=getattr(args, "n_limit", 20),
            start_order=tuple(t for t in getattr(args, "start_order", "").split(",") if t.strip()),
            letters=getattr(args, "letters", False),
        )
        if args.command == "solve":
            return cmd_solve(config)
        if args.command == "trace":
            return cmd_trace(config)
        if args.command == "verify":
            return cmd_verify(config)
        if args.command == "fuzz":
            return cmd_fuzz(config, args.n, args.m, args.count, args.out)
        return cmd_oracle(config, args.mode)
    except UsageError as exc:
        print(f"ctsat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleLimitError as exc:
        print(f"ctsat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverDefect as exc:
        print(f"ctsat: internal defect: {exc}", file=sys.stderr)
        return EXIT_DEFECT


if __name__ == "__main__":
    sys.exit(main())
