"""Ground truth and differential testing.

``brute_force`` evaluates all 2^n assignments at once with numpy;
``differential_run`` pushes a formula through the whole pipeline and checks
the verdict against it.  Disagreements are persisted for replay.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .couples import CcsSystem, cts_to_ccs
from .decomposition import decompose_with_permutations, naive_decompose
from .formula import TabularFormula, eval_cnf, read_dimacs
from .inversion import OracleLimitError
from .triplets import CtsSystem, build_cts, unify
from .zero_distribution import SolveResult, SolverDefect, solve

BRUTE_FORCE_LIMIT = 24


def _sat_mask(formula: TabularFormula) -> np.ndarray:
    n = formula.n
    if n > BRUTE_FORCE_LIMIT:
        raise OracleLimitError(f"n={n} exceeds the brute-force limit {BRUTE_FORCE_LIMIT}")
    idx = np.arange(1 << n, dtype=np.uint32)
    ok = np.ones(1 << n, dtype=bool)
    for line in formula.lines:
        hit = np.ones(1 << n, dtype=bool)
        for c, b in line:
            # column c is the (c+1)-th character of the bit string, i.e. bit n-1-c
            hit &= ((idx >> (n - 1 - c)) & 1) == b
        ok &= ~hit
    return ok


def brute_force(formula: TabularFormula) -> set[str]:
    """Every satisfying assignment, as bit strings (x1 first)."""
    n = formula.n
    return {format(int(i), f"0{n}b") if n else "" for i in np.flatnonzero(_sat_mask(formula))}


def count_models(formula: TabularFormula) -> int:
    return int(_sat_mask(formula).sum())


def random_3cnf(n: int, m: int, seed: int) -> TabularFormula:
    """m clauses over 3 distinct uniform variables with uniform signs.

    Repeated clauses collapse in the tabular form, so ``.m`` may be below m.
    """
    if n < 3:
        raise ValueError("random 3-CNF needs n >= 3")
    rng = random.Random(seed)
    lines = []
    for _ in range(m):
        cols = rng.sample(range(n), 3)
        lines.append(tuple((c, rng.randint(0, 1)) for c in cols))
    return TabularFormula(n, tuple(lines))


def pipeline(formula: TabularFormula, permutations: Sequence[Sequence[int]] | None = None,
             start_order: Iterable = (), names: Sequence[str] | None = None) -> dict:
    """Decompose, build, unify, transform and solve; returns every stage."""
    if permutations:
        dec = decompose_with_permutations(formula, permutations)
    else:
        dec = naive_decompose(formula)
    built = CtsSystem(tuple(build_cts(p) for p in dec.parts), formula.n)
    unified, empty = unify(built)
    ccs = None
    if empty:
        result = _empty_result(formula.n, dec.k)
    else:
        ccs = CcsSystem(tuple(cts_to_ccs(s) for s in unified), formula.n)
        result = solve(ccs, start_order, names=names)
    return {"decomposition": dec, "cts": built, "unified": unified, "ccs": ccs, "result": result}


def _empty_result(n: int, k: int) -> SolveResult:
    trace = [{"event": "contradiction", "var": None, "reason": "unification emptied a structure"},
             {"event": "verdict", "verdict": "UNSAT", "witness": None}]
    return SolveResult("UNSAT", None, trace, [], 0, n, k)


@dataclass
class DiffReport:
    seed: int | None
    n: int
    m: int
    verdict: str
    witness: str | None
    oracle_verdict: str
    model_count: int
    agree: bool
    sound: bool
    defect: str | None = None
    backtracks: int = 0
    k: int = 0
    counterexample: str | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        return asdict(self)


def differential_run(formula: TabularFormula, seed: int | None = None,
                     permutations: Sequence[Sequence[int]] | None = None) -> tuple[DiffReport, SolveResult | None]:
    count = count_models(formula)
    oracle = "SAT" if count else "UNSAT"
    defect = None
    result = None
    try:
        result = pipeline(formula, permutations)["result"]
        verdict, witness = result.verdict, result.witness
    except SolverDefect as exc:
        verdict, witness, defect = "DEFECT", None, str(exc)
    sound = defect is None
    if verdict == "SAT":
        for u in result.expansions():
            if not eval_cnf(formula, u):
                sound = False
                defect = f"witness {witness} expands to {u}, which falsifies the formula"
                break
    report = DiffReport(seed, formula.n, formula.m, verdict, witness, oracle, count,
                        agree=verdict == oracle, sound=sound, defect=defect,
                        backtracks=result.backtracks if result else 0,
                        k=result.k if result else 0)
    return report, result


def persist(formula: TabularFormula, report: DiffReport, result: SolveResult | None,
            directory: str | Path) -> Path:
    """Store a counterexample as ``<hash>.cnf`` plus ``<hash>.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cnf = formula.to_dimacs()
    digest = hashlib.sha256(cnf.encode()).hexdigest()[:16]
    report.counterexample = digest
    (directory / f"{digest}.cnf").write_text(cnf)
    payload = {"report": report.to_json(), "trace": result.trace if result else []}
    (directory / f"{digest}.json").write_text(json.dumps(payload, indent=1, ensure_ascii=False))
    return directory / f"{digest}.cnf"


def replay(path: str | Path) -> DiffReport:
    """Re-run a persisted counterexample from its DIMACS file."""
    path = Path(path)
    formula = read_dimacs(path.read_text())
    stored = json.loads(path.with_suffix(".json").read_text())["report"]
    report, _ = differential_run(formula, stored.get("seed"))
    report.counterexample = stored.get("counterexample")
    return report


def fuzz(count: int, n: int = 10, ms: Sequence[int] = (30, 42, 50), seed: int = 0,
         out_dir: str | Path | None = None) -> dict:
    """Seeded batch; instance i uses seed ``seed + i`` and m = ms[i % len(ms)]."""
    if n > BRUTE_FORCE_LIMIT:
        raise OracleLimitError(f"n={n} exceeds the brute-force limit {BRUTE_FORCE_LIMIT}")
    agree = sound = 0
    disagreements = []
    unsound = []
    by_m: dict[int, dict[str, int]] = {}
    for i in range(count):
        s = seed + i
        m = ms[i % len(ms)]
        formula = random_3cnf(n, m, s)
        report, result = differential_run(formula, s)
        stats = by_m.setdefault(m, {"total": 0, "agree": 0})
        stats["total"] += 1
        agree += report.agree
        stats["agree"] += report.agree
        sound += report.sound
        if not (report.agree and report.sound):
            if out_dir is not None:
                persist(formula, report, result, out_dir)
            entry = {"seed": s, "n": n, "m": m, "verdict": report.verdict,
                     "oracle": report.oracle_verdict, "models": report.model_count,
                     "sound": report.sound, "counterexample": report.counterexample}
            (disagreements if report.sound else unsound).append(entry)
    return {"total": count, "agree": agree, "sound": sound,
            "agreement_rate": agree / count if count else 1.0,
            "by_m": {str(k): v for k, v in sorted(by_m.items())},
            "disagreements": disagreements, "unsound": unsound}

