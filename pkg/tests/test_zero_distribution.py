import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctsat import published as ref
from ctsat.couples import Ccs, CcsSystem
from ctsat.formula import eval_cnf
from ctsat.oracle import brute_force, pipeline, random_3cnf
from ctsat.zero_distribution import (SolverDefect, SolveResult, SolveState, VarState, _verify,
                                     choose_start, emit_formula1, parse_start_order,
                                     preprocess_constants, propagate_zero, solve)

from conftest import ccs_of

NAMES = ref.NAMES


def test_preprocess_example1():
    state = SolveState.fresh(ccs_of(4), NAMES)
    preprocess_constants(state)
    assert "".join(map(str, state.u)) == "00101000"
    assert {NAMES[v] for v in range(8) if state.states[v].terminal} == {"b", "c", "e"}


def test_preprocess_example2_inverts_every_constant_one_column():
    # c, d and e are all constant 1 in the three-structure system
    state = SolveState.fresh(ccs_of(6), NAMES)
    preprocess_constants(state)
    assert "".join(map(str, state.u)) == "00111000"


def test_preprocess_without_constants():
    g = Ccs.from_bits(range(3), [["00", "01", "10", "11"], ["00", "01", "10", "11"]])
    state = SolveState.fresh(CcsSystem((g,), 3))
    preprocess_constants(state)
    assert state.u == [0, 0, 0]
    assert all(s is VarState.UNASSIGNED for s in state.states)


def test_propagate_example1_residual():
    state = SolveState.fresh(ccs_of(4), NAMES)
    preprocess_constants(state)
    propagate_zero(state, NAMES.index("a"))
    choose_start(state, [(NAMES.index("f"), 0)])
    propagate_zero(state, NAMES.index("f"))
    assert "".join(map(str, state.u)) == "00111011"
    log = [(state.literal(a, ua), state.literal(b, ub)) for (a, ua), (b, ub) in state.implication_log]
    assert log == [("f", "¬d"), ("f", "¬g"), ("¬g", "¬h")]


def test_case_a_variable_untouched():
    # y keeps both values next to x = 0
    g = Ccs.from_bits(range(3), [["00", "01"], ["00", "01", "10", "11"]])
    state = SolveState.fresh(CcsSystem((g,), 3))
    propagate_zero(state, 0)
    assert state.states[1] is VarState.UNASSIGNED


def test_example1_branches():
    assert solve(ccs_of(4), ["a", "f"], names=NAMES).witness == "00111011"
    assert solve(ccs_of(4), ["a=1"], names=NAMES).witness == "101*1100"
    assert solve(ccs_of(4), ["a", "f=1"], names=NAMES).witness == "001*1100"


def test_example1_default_policy_finds_another_jss():
    r = solve(ccs_of(4), names=NAMES)
    assert r.sat and set(r.expansions()) <= ref.JSS_TABLE4


def test_example2():
    r = solve(ccs_of(6), names=NAMES)
    assert r.witness == "00111011"
    assert r.backtracks == 0


def test_example3_unsat_after_one_backtrack():
    r = solve(ref.ccs_system(12), names=NAMES)
    assert r.verdict == "UNSAT" and r.backtracks == 1
    events = [(e["event"], e.get("var"), e.get("value")) for e in r.trace
              if e["event"] in ("residue", "backtrack")]
    assert events == [("residue", "a", 0), ("backtrack", "a", 1)]
    assert sum(e["event"] == "contradiction" for e in r.trace) == 2


def test_star_expansion():
    r = solve(ccs_of(4), ["a=1"], names=NAMES)
    assert set(r.expansions()) == {"10101100", "10111100"}


def test_emit_formula1():
    r = solve(ccs_of(4), ["a", "f"], names=NAMES)
    text = emit_formula1(r)
    assert "¬(f ∨ ¬g)" in text
    assert text.count("¬(") == len(r.implication_log) <= 7 * 2
    empty = SolveResult("SAT", "0", [], [], 0, 1, 0)
    assert emit_formula1(empty) == ""


def test_contradiction_across_structures():
    # x0 forced to 0 by one structure and to 1 by another
    g1 = Ccs.from_bits((0, 1, 2), [["00"], ["00", "01"]])
    g2 = Ccs.from_bits((0, 1, 2), [["10"], ["00", "01"]])
    r = solve(CcsSystem((g1, g2), 3))
    assert r.verdict == "UNSAT"
    assert r.trace[0]["event"] == "contradiction"


def test_verification_catches_bad_witness():
    g = Ccs.from_bits((0, 1, 2), [["01"], ["10"]])
    bad = SolveResult("SAT", "000", [], [], 0, 3, 1)
    with pytest.raises(SolverDefect):
        _verify(CcsSystem((g,), 3), bad)


def test_start_order_parsing():
    assert parse_start_order(["a", "f=1", 2, (3, 1)], NAMES) == [(0, 0), (5, 1), (2, 0), (3, 1)]
    with pytest.raises(ValueError):
        parse_start_order(["a=2"], NAMES)


def _terminal_monotone(trace):
    """No inversion or implication touches a variable after it became terminal."""
    assigned, terminal = set(), set()
    for e in trace:
        ev = e["event"]
        if ev == "residue":
            terminal |= assigned
        elif ev == "backtrack":
            assigned = set(terminal)
        elif ev == "constant":
            assigned.add(e["var"])
            terminal.add(e["var"])
        elif ev in ("invert", "imply"):
            var = e.get("var") or e["to"].lstrip("¬")
            if var in terminal and not (ev == "invert" and e["reason"] == "constant"):
                return False
            assigned.add(var)
    return True


def _backtrack_discipline(trace):
    last_residue, backtracked = None, set()
    for e in trace:
        if e["event"] == "residue":
            last_residue = e["var"]
        elif e["event"] == "backtrack":
            if e["var"] != last_residue or e["var"] in backtracked:
                return False
            backtracked.add(e["var"])
    return True


@settings(max_examples=150, deadline=None)
@given(st.integers(4, 10), st.integers(0, 45), st.integers(0, 2**32))
def test_solver_soundness_and_trace_invariants(n, m, seed):
    f = random_3cnf(n, m, seed)
    r = pipeline(f)["result"]
    models = brute_force(f)
    if r.sat:
        for u in r.expansions():
            assert eval_cnf(f, u)
    else:
        assert r.verdict == "UNSAT"
    if not models:
        assert not r.sat
    assert _terminal_monotone(r.trace)
    assert _backtrack_discipline(r.trace)
    assert len(r.implication_log) <= max(0, (n - 1) * r.k)
