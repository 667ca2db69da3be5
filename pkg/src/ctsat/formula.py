"""3-CNF formulas: DIMACS ingestion, the tabular encoding and evaluation.

A tabular line stores, for each of its three columns, the value that
*falsifies* the literal: 0 for a positive literal, 1 for a negated one.  A
clause is therefore false exactly when the assignment contains the line.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


class DimacsError(ValueError):
    """Raised for malformed DIMACS input; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


@dataclass(frozen=True, order=True)
class Literal:
    var: int  # 1-based
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def __str__(self):
        return f"-x{self.var}" if self.negated else f"x{self.var}"


@dataclass(frozen=True)
class Clause3:
    literals: tuple[Literal, Literal, Literal]

    def __post_init__(self):
        if len(self.literals) != 3:
            raise ValueError(f"a clause needs exactly 3 literals, got {len(self.literals)}")
        if len({lit.var for lit in self.literals}) != 3:
            raise ValueError("clause literals must be on 3 distinct variables")

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> "Clause3":
        return cls(tuple(Literal.from_int(x) for x in lits))

    def to_ints(self) -> list[int]:
        return [lit.to_int() for lit in self.literals]


# A tabular line: three (column, bit) cells with 0-based columns, sorted by column.
Line = tuple[tuple[int, int], tuple[int, int], tuple[int, int]]


def as_bits(assignment, n: int | None = None) -> tuple[int, ...]:
    """Normalise an assignment given as a bit string or a 0/1 sequence."""
    if isinstance(assignment, str):
        if set(assignment) - {"0", "1"}:
            raise ValueError(f"not a bit string: {assignment!r}")
        bits = tuple(int(c) for c in assignment)
    else:
        bits = tuple(int(b) for b in assignment)
        if set(bits) - {0, 1}:
            raise ValueError(f"assignment values must be 0/1: {assignment!r}")
    if n is not None and len(bits) != n:
        raise ValueError(f"assignment has length {len(bits)}, expected {n}")
    return bits


def bitstring(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


@dataclass(frozen=True)
class TabularFormula:
    """The m x n table of falsifying value patterns, one line per distinct clause."""

    n: int
    lines: tuple[Line, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        seen = set()
        out = []
        for line in self.lines:
            line = tuple(sorted((int(c), int(b)) for c, b in line))
            if len(line) != 3 or len({c for c, _ in line}) != 3:
                raise ValueError(f"line {line} does not have 3 cells on distinct columns")
            for c, b in line:
                if not 0 <= c < self.n:
                    raise ValueError(f"column {c + 1} outside 1..{self.n}")
                if b not in (0, 1):
                    raise ValueError(f"cell value {b} is not a bit")
            if line not in seen:
                seen.add(line)
                out.append(line)
        object.__setattr__(self, "lines", tuple(out))

    @property
    def m(self) -> int:
        return len(self.lines)

    def to_clauses(self) -> list[Clause3]:
        return [Clause3(tuple(Literal(c + 1, bool(b)) for c, b in line)) for line in self.lines]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "lines": [[{"col": c + 1, "bit": b} for c, b in line] for line in self.lines],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TabularFormula":
        lines = [tuple((cell["col"] - 1, cell["bit"]) for cell in line) for line in data["lines"]]
        return cls(data["n"], tuple(lines))

    def to_dimacs(self) -> str:
        out = [f"p cnf {self.n} {self.m}"]
        for clause in self.to_clauses():
            out.append(" ".join(str(x) for x in clause.to_ints()) + " 0")
        return "\n".join(out) + "\n"

    def render(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else variable_names(self.n)
        width = max([len(s) for s in names] + [1])
        rows = [" ".join(s.rjust(width) for s in names)]
        for line in self.lines:
            cells = dict(line)
            rows.append(" ".join(str(cells[j]).rjust(width) if j in cells else " " * width
                                 for j in range(self.n)).rstrip())
        return "\n".join(rows)


def variable_names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def parse_dimacs(text: str) -> tuple[list[Clause3], int]:
    """Parse DIMACS CNF text into exact-3 clauses, in file order.

    Clause literals may span lines; each clause ends at a ``0`` token.
    """
    n = None
    declared_m = None
    clauses: list[Clause3] = []
    current: list[int] = []
    start_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if n is not None:
                raise DimacsError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if n < 0 or declared_m < 0:
                raise DimacsError("negative counts in header", lineno)
            continue
        if n is None:
            raise DimacsError("clause before header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad token {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(_make_clause(current, n, start_line or lineno))
                current = []
                start_line = None
            else:
                if start_line is None:
                    start_line = lineno
                current.append(lit)
    if current:
        clauses.append(_make_clause(current, n, start_line))
    if n is None:
        raise DimacsError("missing 'p cnf' header")
    if declared_m is not None and declared_m != len(clauses):
        raise DimacsError(f"header declares {declared_m} clauses, found {len(clauses)}")
    return clauses, n


def _make_clause(lits: list[int], n: int, lineno: int) -> Clause3:
    for lit in lits:
        if abs(lit) > n:
            raise DimacsError(f"variable {abs(lit)} exceeds declared n={n}", lineno)
    if len(lits) != 3:
        raise DimacsError(f"clause has {len(lits)} literals, exactly 3 required", lineno)
    if len({abs(x) for x in lits}) != 3:
        raise DimacsError("duplicate variable in clause", lineno)
    return Clause3.from_ints(lits)


def to_tabular(clauses: Iterable[Clause3], n: int) -> TabularFormula:
    lines = []
    for clause in clauses:
        lines.append(tuple((lit.var - 1, 1 if lit.negated else 0) for lit in clause.literals))
    return TabularFormula(n, tuple(lines))


def read_dimacs(text: str) -> TabularFormula:
    clauses, n = parse_dimacs(text)
    return to_tabular(clauses, n)


def eval_cnf(formula: TabularFormula, assignment) -> bool:
    """Clause-by-clause CNF evaluation: some literal true in every clause."""
    bits = as_bits(assignment, formula.n)
    for clause in formula.to_clauses():
        if not any(bits[lit.var - 1] == (0 if lit.negated else 1) for lit in clause.literals):
            return False
    return True


def eval_subset(formula: TabularFormula, assignment) -> bool:
    """True iff no tabular line is contained in the assignment."""
    bits = as_bits(assignment, formula.n)
    return not any(all(bits[c] == b for c, b in line) for line in formula.lines)


def dumps(formula: TabularFormula) -> str:
    return json.dumps(formula.to_json())
