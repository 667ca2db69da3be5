"""Zero distribution over a system of couples structures.

The procedure builds a CIC vector ``U`` while forcing zeros through the
system: fixing a variable to 0 restricts every structure, each structure is
re-cleared (labels honoured), and any variable left with a single value
somewhere is forced too: directly when that value is 0, after inverting its
columns in all structures when it is 1.  Starting variables open residue
points; only the most recent one can be backtracked over.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .couples import Ccs, CcsSystem, clear_couples
from .formula import variable_names
from .inversion import nil_after_cic


class SolverDefect(AssertionError):
    """A SAT witness failed verification; this is a bug, never a verdict."""


class Contradiction(Exception):
    def __init__(self, var: int | None, reason: str):
        super().__init__(reason)
        self.var = var
        self.reason = reason


class VarState(enum.Enum):
    UNASSIGNED = "unassigned"
    ZERO = "zero"
    ONE = "one"
    STAR = "star"
    TERMINAL_ZERO = "terminal-zero"
    TERMINAL_ONE = "terminal-one"
    TERMINAL_STAR = "terminal-star"

    @property
    def terminal(self) -> bool:
        return self.value.startswith("terminal")

    @property
    def assigned(self) -> bool:
        return self in (VarState.ZERO, VarState.ONE, VarState.TERMINAL_ZERO, VarState.TERMINAL_ONE)

    def to_terminal(self) -> "VarState":
        return {VarState.ZERO: VarState.TERMINAL_ZERO,
                VarState.ONE: VarState.TERMINAL_ONE,
                VarState.STAR: VarState.TERMINAL_STAR}.get(self, self)


class _Chain:
    """Mutable working copy of one couples structure."""

    __slots__ = ("perm", "pos", "tiers", "forbidden")

    def __init__(self, ccs: Ccs):
        self.perm = ccs.permutation
        self.pos = {v: i for i, v in enumerate(ccs.permutation)}
        self.tiers = [set(t) for t in ccs.tiers]
        self.forbidden = set(ccs.forbidden)

    def copy(self) -> "_Chain":
        new = object.__new__(_Chain)
        new.perm = self.perm
        new.pos = self.pos
        new.tiers = [set(t) for t in self.tiers]
        new.forbidden = set(self.forbidden)
        return new

    def values(self, v: int) -> set[int]:
        i = self.pos[v]
        vals = set()
        if i > 0:
            vals.update(c & 1 for c in self.tiers[i - 1])
        if i < len(self.tiers):
            vals.update(c >> 1 for c in self.tiers[i])
        return vals

    def restrict_zero(self, v: int) -> bool:
        i = self.pos[v]
        changed = False
        if i > 0:
            keep = {c for c in self.tiers[i - 1] if not c & 1}
            changed |= keep != self.tiers[i - 1]
            self.tiers[i - 1] = keep
        if i < len(self.tiers):
            keep = {c for c in self.tiers[i] if not c & 2}
            changed |= keep != self.tiers[i]
            self.tiers[i] = keep
        return changed

    def invert(self, v: int) -> None:
        i = self.pos[v]
        if i > 0:
            self.tiers[i - 1] = {c ^ 1 for c in self.tiers[i - 1]}
        if i < len(self.tiers):
            self.tiers[i] = {c ^ 2 for c in self.tiers[i]}
        flipped = set()
        for j, x, y in self.forbidden:
            if j == i - 2:
                y ^= 1
            elif j == i - 1:
                x, y = x ^ 1, y ^ 2
            elif j == i:
                x ^= 2
            flipped.add((j, x, y))
        self.forbidden = flipped

    def clear(self) -> bool:
        self.tiers = clear_couples(self.tiers, self.forbidden)
        return bool(self.tiers) and bool(self.tiers[0])

    def freeze(self) -> Ccs:
        tiers = tuple(frozenset(t) for t in self.tiers)
        forbidden = frozenset((j, x, y) for j, x, y in self.forbidden
                              if x in tiers[j] and y in tiers[j + 1])
        return Ccs(self.perm, tiers, forbidden)


@dataclass
class SolveState:
    system: list[_Chain]
    n: int
    u: list[int]
    states: list[VarState]
    partition: list[list[int]] = field(default_factory=list)
    residue: dict | None = None
    implication_log: list[tuple[tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)
    names: Sequence[str] = ()
    k: int = 0

    @classmethod
    def fresh(cls, system: CcsSystem, names: Sequence[str] | None = None) -> "SolveState":
        n = system.n
        return cls(system=[_Chain(s) for s in system.structures], n=n, u=[0] * n,
                   states=[VarState.UNASSIGNED] * n,
                   names=list(names) if names is not None else variable_names(n),
                   k=len(system.structures))

    def literal(self, v: int, bit: int | None = None) -> str:
        bit = self.u[v] if bit is None else bit
        return ("¬" if bit else "") + self.names[v]

    def emit(self, event: str, **data) -> None:
        self.trace.append({"event": event, **data})

    def unassigned(self) -> list[int]:
        return [v for v in range(self.n) if self.states[v] is VarState.UNASSIGNED]

    def witness(self) -> str:
        out = []
        for v in range(self.n):
            s = self.states[v]
            out.append("*" if s in (VarState.STAR, VarState.TERMINAL_STAR) else str(self.u[v]))
        return "".join(out)

    def snapshot(self) -> dict:
        return {"system": [c.copy() for c in self.system], "u": list(self.u),
                "states": list(self.states), "log": list(self.implication_log),
                "partition": [list(p) for p in self.partition]}

    def restore(self, snap: dict) -> None:
        self.system = [c.copy() for c in snap["system"]]
        self.u = list(snap["u"])
        self.states = list(snap["states"])
        self.implication_log = list(snap["log"])
        self.partition = [list(p) for p in snap["partition"]]

    def commit(self) -> None:
        """Make every current assignment permanent."""
        self.states = [s.to_terminal() for s in self.states]


@dataclass
class SolveResult:
    verdict: str  # "SAT" or "UNSAT"
    witness: str | None
    trace: list[dict]
    implication_log: list[tuple[str, str]]
    backtracks: int
    n: int
    k: int

    @property
    def sat(self) -> bool:
        return self.verdict == "SAT"

    def expansions(self, limit: int = 1 << 12) -> Iterable[str]:
        """Witness with star positions expanded (up to ``limit`` vectors)."""
        stars = [i for i, c in enumerate(self.witness) if c == "*"]
        for count, combo in enumerate(itertools.product("01", repeat=len(stars))):
            if count >= limit:
                return
            bits = list(self.witness)
            for i, b in zip(stars, combo):
                bits[i] = b
            yield "".join(bits)

    def trace_lines(self) -> str:
        return "".join(json.dumps(e, ensure_ascii=False) + "\n" for e in self.trace)


def _set_zero(state: SolveState, v: int) -> None:
    state.states[v] = VarState.ONE if state.u[v] else VarState.ZERO


def _invert(state: SolveState, v: int, reason: str) -> None:
    if state.states[v] is not VarState.UNASSIGNED:
        raise Contradiction(v, f"second inversion of {state.names[v]}")
    state.u[v] ^= 1
    for chain in state.system:
        chain.invert(v)
    state.emit("invert", var=state.names[v], u=state.u[v], reason=reason)


def _forced(state: SolveState) -> list[tuple[int, int, list[int]]]:
    """Unassigned variables left with one value: (var, value, forcing structures)."""
    out = []
    for v in state.unassigned():
        seen: dict[int, list[int]] = {}
        for r, chain in enumerate(state.system):
            vals = chain.values(v)
            if len(vals) == 1:
                seen.setdefault(next(iter(vals)), []).append(r)
        if len(seen) == 2:
            raise Contradiction(v, f"{state.names[v]} is constant 0 in one structure "
                                   f"and constant 1 in another")
        if seen:
            (val, rs), = seen.items()
            out.append((v, val, rs))
    return out


def _clear_all(state: SolveState, var: int | None) -> None:
    for chain in state.system:
        if not chain.clear():
            raise Contradiction(var, "a tier became empty")


def preprocess_constants(state: SolveState) -> None:
    """Invert every constant-1 column and fix every constant column as terminal."""
    _clear_all(state, None)
    while True:
        forced = _forced(state)
        if not forced:
            break
        for v, val, _ in forced:
            if val == 1:
                _invert(state, v, "constant")
            _set_zero(state, v)
            for chain in state.system:
                chain.restrict_zero(v)
            state.emit("constant", var=state.names[v], u=state.u[v])
        _clear_all(state, None)
    state.commit()


def _reaches(fixed: Sequence[bool], chain: _Chain, w: int, v: int) -> bool:
    """w and v are linked in ``chain`` through fixed columns only."""
    i, j = sorted((chain.pos[w], chain.pos[v]))
    return all(fixed[chain.perm[p]] for p in range(i + 1, j))


def _nearest_assigned(state: SolveState, chain: _Chain, w: int) -> int | None:
    i = chain.pos[w]
    for d in range(1, len(chain.perm)):
        for p in (i - d, i + d):
            if 0 <= p < len(chain.perm) and state.states[chain.perm[p]] in (VarState.ZERO, VarState.ONE):
                return chain.perm[p]
    return None


def _force(state: SolveState, w: int, val: int, src: int) -> None:
    if val == 1:
        _invert(state, w, "implied")
    _set_zero(state, w)
    state.implication_log.append(((src, state.u[src]), (w, state.u[w])))
    state.emit("imply", **{"from": state.literal(src), "to": state.literal(w)})


def _antecedent(state: SolveState, fixed: Sequence[bool], w: int, v: int, rs: list[int],
                live: Sequence[int]) -> int | None:
    """Closest variable of the current residual problem linked to w in a forcing structure.

    Ties go to ``v``, the variable being processed.
    """
    best = None
    for r in rs:
        chain = state.system[r]
        for x in live:
            if _reaches(fixed, chain, w, x):
                key = (abs(chain.pos[w] - chain.pos[x]), x != v)
                if best is None or key < best[0]:
                    best = (key, x)
    return None if best is None else best[1]


def propagate_zero(state: SolveState, var: int) -> None:
    """Distribute the zero of ``var`` (already 0 in the current frame) through the system.

    Variables forced next to the one being processed (possibly across fixed
    columns) are handled first, so the log reads as chains of implications;
    anything forced further away is picked up once those chains run dry.
    """
    queue = [var]
    live = [var]
    _set_zero(state, var)
    while True:
        while queue:
            v = queue.pop(0)
            for chain in state.system:
                chain.restrict_zero(v)
            _clear_all(state, v)
            fixed = [s.assigned for s in state.states]
            for w, val, rs in _forced(state):
                if any(_reaches(fixed, state.system[r], w, v) for r in rs):
                    _force(state, w, val, _antecedent(state, fixed, w, v, rs, live))
                    queue.append(w)
                    live.append(w)
        leftover = _forced(state)
        if not leftover:
            return
        w, val, rs = leftover[0]
        src = _nearest_assigned(state, state.system[rs[0]], w)
        _force(state, w, val, var if src is None else src)
        queue.append(w)
        live.append(w)


def _isolated(state: SolveState, v: int) -> bool:
    """Every variable within two positions of v is fixed in every structure."""
    for chain in state.system:
        i = chain.pos[v]
        for p in range(max(0, i - 2), min(len(chain.perm), i + 3)):
            if p != i and not state.states[chain.perm[p]].assigned:
                return False
    return True


def mark_stars(state: SolveState) -> list[int]:
    stars = []
    for v in state.unassigned():
        if _isolated(state, v) and all(chain.values(v) == {0, 1} for chain in state.system):
            state.states[v] = VarState.STAR
            stars.append(v)
    for v in stars:
        state.emit("star", var=state.names[v])
    return stars


def choose_start(state: SolveState, start_order: Sequence[tuple[int, int]] = ()) -> tuple[int, int]:
    """Pick the next starting variable and value, and register the residue point."""
    free = state.unassigned()
    if not free:
        raise ValueError("no unassigned variable left")
    choice = None
    for v, val in start_order:
        if state.states[v] is VarState.UNASSIGNED:
            choice = (v, val)
            break
    if choice is None:
        choice = (free[0], 0)
    state.commit()
    state.residue = {"var": choice[0], "value": choice[1], "snapshot": state.snapshot(),
                     "restorable": True}
    state.partition.append([])
    state.emit("residue", var=state.names[choice[0]], value=choice[1])
    return choice


def _start(state: SolveState, var: int, value: int) -> None:
    if value == 1:
        _invert(state, var, "start")
    propagate_zero(state, var)


def _close_partition(state: SolveState, before: list[VarState]) -> None:
    if state.partition:
        state.partition[-1] = [v for v in range(state.n)
                               if state.states[v] is not before[v]]


def _verify(original: CcsSystem, result: SolveResult) -> None:
    for u in result.expansions():
        for s in original.structures:
            if not nil_after_cic(s, u):
                raise SolverDefect(f"witness {result.witness} (expanded {u}) "
                                   f"is not a nil-set of every structure")


def parse_start_order(items: Iterable, names: Sequence[str]) -> list[tuple[int, int]]:
    """Accept names ('a'), 'a=1' strings, indices or (var, value) pairs."""
    out = []
    for item in items:
        if isinstance(item, tuple):
            v, val = item
        elif isinstance(item, int):
            v, val = item, 0
        else:
            name, _, val = str(item).partition("=")
            v, val = list(names).index(name.strip()), int(val or 0)
        if isinstance(v, str):
            v = list(names).index(v)
        if val not in (0, 1):
            raise ValueError(f"start value must be 0 or 1, got {val}")
        out.append((v, val))
    return out


def solve(system: CcsSystem, start_order: Iterable = (), names: Sequence[str] | None = None,
          verify: bool = True) -> SolveResult:
    """Decide whether the system has a joint satisfying set.

    ``start_order`` lists preferred starting variables (optionally with a
    value, e.g. ``"a=1"``); the fallback is the lowest unassigned variable
    with value 0.
    """
    state = SolveState.fresh(system, names)
    order = parse_start_order(start_order, state.names)
    backtracks = 0

    def finish(verdict: str) -> SolveResult:
        state.commit()
        witness = state.witness() if verdict == "SAT" else None
        state.emit("verdict", verdict=verdict, witness=witness)
        log = [(state.literal(a, ua), state.literal(b, ub)) for (a, ua), (b, ub) in state.implication_log]
        result = SolveResult(verdict, witness, state.trace, log, backtracks, state.n, state.k)
        if verdict == "SAT" and verify:
            _verify(system, result)
        return result

    try:
        preprocess_constants(state)
    except Contradiction as exc:
        state.emit("contradiction", var=_name(state, exc.var), reason=exc.reason)
        return finish("UNSAT")

    while True:
        mark_stars(state)
        if not state.unassigned():
            return finish("SAT")
        var, value = choose_start(state, order)
        before = list(state.states)
        try:
            _start(state, var, value)
        except Contradiction as exc:
            state.emit("contradiction", var=_name(state, exc.var), reason=exc.reason)
            residue = state.residue
            if residue is None or not residue["restorable"]:
                return finish("UNSAT")
            state.restore(residue["snapshot"])
            residue["restorable"] = False
            backtracks += 1
            value = 1 - value
            state.emit("backtrack", var=state.names[var], value=value)
            try:
                _start(state, var, value)
            except Contradiction as exc2:
                state.emit("contradiction", var=_name(state, exc2.var), reason=exc2.reason)
                return finish("UNSAT")
        _close_partition(state, before)


def _name(state: SolveState, v: int | None) -> str | None:
    return None if v is None else state.names[v]


def emit_formula1(result_or_state) -> str:
    """Render the implication log as a conjunction of negated disjunctions."""
    if isinstance(result_or_state, SolveState):
        st = result_or_state
        log = [(st.literal(a, ua), st.literal(b, ub)) for (a, ua), (b, ub) in st.implication_log]
        bound = (st.n - 1) * st.k
    else:
        log = result_or_state.implication_log
        bound = (result_or_state.n - 1) * result_or_state.k
    if len(log) > bound:
        raise AssertionError(f"{len(log)} brackets exceed the (n-1)k = {bound} bound")
    return " ∧ ".join(f"¬({s} ∨ {v})" for s, v in log)
