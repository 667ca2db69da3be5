"""Golden suite over the worked examples shipped in ``fixtures/paper``.

Each check returns a list of mismatch descriptions; empty means pass.  Two
published examples cannot be reproduced by the stated rules; they are
listed in ``KNOWN_DEVIATIONS`` with the exact mismatch expected, so any
other change in those outputs still fails the suite.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from . import published as ref
from .couples import CcsSystem, cts_to_ccs
from .couples import enumerate_sets as ccs_sets
from .decomposition import check_k_bound, decompose_with_permutations, group_lines
from .inversion import apply_cic, full_search_jss
from .triplets import Cts, CtsSystem, build_cts, enumerate_sets, to_base_order, unify
from .zero_distribution import SolveState, preprocess_constants, solve

NAMES = ref.NAMES


def _diff_tiers(table: str, got, want, width: int = 3) -> list[str]:
    """First differing cell per structure, as readable strings."""
    out = []
    if len(got) != len(want):
        return [f"{table}: {len(got)} structures, expected {len(want)}"]
    for r, (g, w) in enumerate(zip(got, want), start=1):
        for j, (gt, wt) in enumerate(zip(g, w), start=1):
            if set(gt) != set(wt):
                extra = sorted(format(t, f"0{width}b") for t in set(gt) - set(wt))
                missing = sorted(format(t, f"0{width}b") for t in set(wt) - set(gt))
                out.append(f"{table} structure {r} tier {j}: extra {extra} missing {missing}")
                break
    return out


def _tiers(structures):
    return [s.tiers for s in structures]


def check_z() -> list[str]:
    z = build_cts(ref.f1_ctf())
    out = _diff_tiers("Z", [z.tiers], [Cts.from_bits(range(5), ref.Z_TIERS).tiers])
    sets = enumerate_sets(z)
    if sets != ref.Z_SETS:
        out.append(f"Z coded sets {sorted(sets)}, expected {sorted(ref.Z_SETS)}")
    return out


def check_table2() -> list[str]:
    dec = decompose_with_permutations(ref.table1_formula(), ref.table_permutations(2))
    out = _diff_tiers("table 2", _tiers(dec.parts), _tiers(ref.ct_formulas(2)))
    if not check_k_bound(dec, ref.table1_formula()):
        out.append("table 2: k bound violated")
    return out


def check_table2_cover() -> list[str]:
    """Every published CT formula line is a line of Table 1 and together they cover it."""
    formula = ref.table1_formula()
    lines = set(formula.lines)
    covered = set()
    out = []
    for r, ctf in enumerate(ref.ct_formulas(2), start=1):
        for line in ctf.to_formula().lines:
            if line not in lines:
                out.append(f"table 2 structure {r}: line {line} not in table 1")
            covered.add(line)
    if lines - covered:
        out.append(f"table 2 misses {len(lines - covered)} lines of table 1")
    return out


def check_table3() -> list[str]:
    built = [build_cts(p) for p in ref.ct_formulas(2)]
    return _diff_tiers("table 3", _tiers(built), _tiers(ref.cts_system(3)))


def _unified(indices):
    s3 = ref.cts_system(3)
    return unify(CtsSystem(tuple(s3.structures[i] for i in indices), 8))[0]


def check_table4() -> list[str]:
    return _diff_tiers("table 4", _tiers(_unified((0, 1))), _tiers(ref.cts_system(4)))


def check_table6() -> list[str]:
    return _diff_tiers("table 6", _tiers(_unified((0, 1, 2))), _tiers(ref.cts_system(6)))


def check_jss() -> list[str]:
    out = []
    for number, want in ((4, ref.JSS_TABLE4), (6, ref.JSS_TABLE6)):
        got = full_search_jss(ref.cts_system(number))
        if got != want:
            out.append(f"table {number} JSS {sorted(got)}, expected {sorted(want)}")
    return out


def _with_labels(got, want) -> list[str]:
    out = []
    for r, (g, w) in enumerate(zip(got, want), start=1):
        if g.forbidden != w.forbidden:
            out.append(f"structure {r}: labels {g.forbidden_bits()} expected {w.forbidden_bits()}")
    return out


def check_table5() -> list[str]:
    # each vector is written in its own structure's column order
    got = [apply_cic(s, to_base_order(int(u, 2), s.permutation))
           for s, u in zip(ref.cts_system(4), ref.cic_vectors(5))]
    return _diff_tiers("table 5", _tiers(got), _tiers(ref.cts_system(5)))


def check_table7() -> list[str]:
    got = [cts_to_ccs(s) for s in ref.cts_system(4)]
    want = ref.ccs_system(7).structures
    out = _diff_tiers("table 7", _tiers(got), _tiers(want), 2)
    out += [f"table 7 {m}" for m in _with_labels(got, want)]
    g1 = got[0]
    if "00101011" not in ccs_sets(g1, honor_labels=False) or "00101011" in ccs_sets(g1):
        out.append("table 7: superfluous set 00101011 not removed by the labels")
    return out


def _cic_ccs(src_number: int, cic: str, table: int) -> list[str]:
    got = [apply_cic(cts_to_ccs(s), cic) for s in ref.cts_system(src_number)]
    want = ref.ccs_system(table).structures
    return (_diff_tiers(f"table {table}", _tiers(got), _tiers(want), 2)
            + [f"table {table} {m}" for m in _with_labels(got, want)])


def check_table8() -> list[str]:
    return _cic_ccs(4, "00101000", 8)


def check_table10() -> list[str]:
    return _cic_ccs(6, "00101000", 10)


def check_table12() -> list[str]:
    got = full_search_jss(ref.ccs_system(12))
    return [f"table 12 JSS {sorted(got)}, expected none"] if got else []


def _ccs_of(number: int) -> CcsSystem:
    return CcsSystem(tuple(cts_to_ccs(s) for s in ref.cts_system(number)), 8)


def check_preprocess_example1() -> list[str]:
    state = SolveState.fresh(_ccs_of(4), NAMES)
    preprocess_constants(state)
    u = "".join(map(str, state.u))
    return [] if u == "00101000" else [f"example 1 starting U {u}, expected 00101000"]


def check_preprocess_example2() -> list[str]:
    state = SolveState.fresh(_ccs_of(6), NAMES)
    preprocess_constants(state)
    u = "".join(map(str, state.u))
    return [] if u == "00101000" else [f"example 2 starting U {u}, expected 00101000"]


def check_example1() -> list[str]:
    out = []
    for order, want in ((["a", "f"], "00111011"), (["a=1"], "101*1100")):
        r = solve(_ccs_of(4), order, names=NAMES)
        if r.witness != want:
            out.append(f"example 1 start {order}: witness {r.witness}, expected {want}")
    return out


def check_example2() -> list[str]:
    r = solve(_ccs_of(6), names=NAMES)
    return [] if r.witness == "00111011" else [f"example 2 witness {r.witness}, expected 00111011"]


def check_example3() -> list[str]:
    r = solve(ref.ccs_system(12), names=NAMES)
    events = [(e["event"], e.get("var"), e.get("value")) for e in r.trace
              if e["event"] in ("residue", "backtrack")]
    out = []
    if r.verdict != "UNSAT":
        out.append(f"example 3 verdict {r.verdict}, expected UNSAT")
    if events != [("residue", "a", 0), ("backtrack", "a", 1)]:
        out.append(f"example 3 residue/backtrack events {events}")
    return out


def check_groups() -> list[str]:
    groups = group_lines(ref.table1_formula())
    abc = groups.get((0, 1, 2), [])
    return [] if len(abc) == 5 else [f"table 1 group abc has {len(abc)} lines, expected 5"]


CHECKS: dict[str, Callable[[], list[str]]] = {
    "z-structure": check_z,
    "table1-groups": check_groups,
    "table2-cover": check_table2_cover,
    "table2": check_table2,
    "table3": check_table3,
    "table4": check_table4,
    "table5": check_table5,
    "table6": check_table6,
    "jss-search": check_jss,
    "table7": check_table7,
    "table8": check_table8,
    "table10": check_table10,
    "table12": check_table12,
    "preprocess-example1": check_preprocess_example1,
    "preprocess-example2": check_preprocess_example2,
    "example1": check_example1,
    "example2": check_example2,
    "example3": check_example3,
}

# Published outputs that the stated rules do not reproduce; see README.
KNOWN_DEVIATIONS = {
    "table2": [
        "table 2 structure 2 tier 2: extra ['010'] missing []",
        "table 2 structure 3 tier 2: extra [] missing ['000', '011']",
    ],
    "preprocess-example2": ["example 2 starting U 00111000, expected 00101000"],
}


@dataclass
class CheckResult:
    name: str
    status: str  # PASS, FAIL or DEVIATION
    details: list[str]
    seconds: float


def run_checks(only: list[str] | None = None) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS.items():
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        try:
            details = fn()
        except Exception as exc:  # a crash is a failure with a message, not a traceback
            details = [f"{type(exc).__name__}: {exc}"]
        dt = time.perf_counter() - t0
        if not details:
            status = "PASS"
        elif details == KNOWN_DEVIATIONS.get(name):
            status = "DEVIATION"
        else:
            status = "FAIL"
        results.append(CheckResult(name, status, details, dt))
    return results
