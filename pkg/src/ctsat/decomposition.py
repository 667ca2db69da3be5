"""Decomposition of a tabular formula into compact-triplet formulas (CTFs).

Each CTF lives on its own permutation of the variables; a line belongs to a
CTF when its three columns are consecutive in that permutation, and it is
stored on the tier where the three positions start.
"""
from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass, field
from typing import Sequence

from .formula import TabularFormula

Permutation = tuple[int, ...]


class CoverageError(ValueError):
    """A line is not compact under any of the supplied permutations."""


def make_permutation(order: Sequence[int], n: int) -> Permutation:
    perm = tuple(int(v) for v in order)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{[v + 1 for v in perm]} is not a permutation of 1..{n}")
    return perm


def triplet_bits(value: int, width: int = 3) -> str:
    return format(value, f"0{width}b")


def bits_value(bits: str) -> int:
    return int(bits, 2)


@dataclass(frozen=True)
class CtFormula:
    permutation: Permutation
    tiers: tuple[frozenset, ...]  # forbidden triplets per tier, as ints 0..7
    source_lines: tuple[tuple[int, int, int], ...] = ()  # (tier, triplet, line index)

    def __post_init__(self):
        n = len(self.permutation)
        make_permutation(self.permutation, n)
        if len(self.tiers) != max(n - 2, 0):
            raise ValueError(f"expected {max(n - 2, 0)} tiers, got {len(self.tiers)}")
        object.__setattr__(self, "tiers", tuple(frozenset(t) for t in self.tiers))
        for t in self.tiers:
            if any(not 0 <= x < 8 for x in t):
                raise ValueError("triplets must be 3-bit values")

    @property
    def n(self) -> int:
        return len(self.permutation)

    @classmethod
    def from_bits(cls, permutation: Sequence[int], tiers: Sequence[Sequence[str]]) -> "CtFormula":
        return cls(tuple(permutation), tuple(frozenset(bits_value(b) for b in t) for t in tiers))

    def lines(self) -> list[tuple]:
        """The CTF as tabular lines over base columns."""
        out = []
        for j, tier in enumerate(self.tiers):
            for t in sorted(tier):
                bits = triplet_bits(t)
                out.append(tuple((self.permutation[j + i], int(bits[i])) for i in range(3)))
        return out

    def to_formula(self) -> TabularFormula:
        return TabularFormula(self.n, tuple(self.lines()))

    def to_json(self) -> dict:
        return {
            "permutation": [v + 1 for v in self.permutation],
            "tiers": [sorted(triplet_bits(t) for t in tier) for tier in self.tiers],
        }


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[CtFormula, ...]
    group_count: int
    cell_ops: int = field(default=0, compare=False)

    @property
    def k(self) -> int:
        return len(self.parts)

    def to_json(self) -> dict:
        return {"k": self.k, "w": self.group_count, "parts": [p.to_json() for p in self.parts]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _columns(row: dict, n: int) -> tuple[int, ...]:
    return tuple(j for j in range(n) if j in row)


def group_lines(formula: TabularFormula) -> dict[tuple[int, int, int], list[int]]:
    """Group line indices by their (sorted) column triple, in first-seen order."""
    groups: dict[tuple[int, int, int], list[int]] = {}
    for i, line in enumerate(formula.lines):
        key = tuple(c for c, _ in line)
        groups.setdefault(key, []).append(i)
    return groups


def _place(formula: TabularFormula, perm: Permutation, tier: int, idx: int) -> int:
    cells = dict(formula.lines[idx])
    value = 0
    for pos in range(tier, tier + 3):
        value = (value << 1) | cells[perm[pos]]
    return value


def naive_decompose(formula: TabularFormula) -> Decomposition:
    """One CTF per column group: the group's columns go first, the rest follow.

    Each of the k groups is collected by a full survey of the m x n table, so
    the recorded ``cell_ops`` grows as m*n*k.
    """
    n = formula.n
    rows = [dict(line) for line in formula.lines]
    ops = 0
    keys: list[tuple[int, ...]] = []
    seen = set()
    for row in rows:
        cols = _columns(row, n)
        ops += n
        if cols not in seen:
            seen.add(cols)
            keys.append(cols)
    parts = []
    for key in keys:
        perm = key + tuple(v for v in range(n) if v not in key)
        tiers = [set() for _ in range(n - 2)]
        sources = []
        for idx, row in enumerate(rows):
            ops += n
            if _columns(row, n) == key:
                t = _place(formula, perm, 0, idx)
                tiers[0].add(t)
                sources.append((0, t, idx))
        parts.append(CtFormula(perm, tuple(tiers), tuple(sources)))
    return Decomposition(tuple(parts), len(keys), ops)


def _start_tier(perm: Permutation, cols: Sequence[int], where: dict[int, int]) -> int | None:
    pos = sorted(where[c] for c in cols)
    return pos[0] if pos[2] - pos[0] == 2 else None


def decompose_with_permutations(formula: TabularFormula,
                                permutations: Sequence[Sequence[int]]) -> Decomposition:
    """Assign every line to the first permutation in which it is compact."""
    n = formula.n
    perms = [make_permutation(p, n) for p in permutations]
    where = [{v: i for i, v in enumerate(p)} for p in perms]
    tiers = [[set() for _ in range(n - 2)] for _ in perms]
    sources = [[] for _ in perms]
    for idx, line in enumerate(formula.lines):
        cols = [c for c, _ in line]
        for r, perm in enumerate(perms):
            j = _start_tier(perm, cols, where[r])
            if j is not None:
                t = _place(formula, perm, j, idx)
                tiers[r][j].add(t)
                sources[r].append((j, t, idx))
                break
        else:
            desc = " ".join(f"x{c + 1}={b}" for c, b in line)
            raise CoverageError(f"line {idx + 1} ({desc}) is not compact in any permutation")
    parts = tuple(CtFormula(p, tuple(t), tuple(s)) for p, t, s in zip(perms, tiers, sources))
    return Decomposition(parts, len(group_lines(formula)))


def check_k_bound(decomposition: Decomposition, formula: TabularFormula) -> bool:
    w = len(group_lines(formula))
    if formula.n > 2:
        lower = math.ceil(w / (formula.n - 2))
    else:
        lower = 0 if w == 0 else math.inf
    return lower <= decomposition.k <= formula.m


def parse_variable(token: str, n: int) -> int:
    """Parse a 1-based index or a letter name (a=1) into a 0-based index."""
    token = token.strip()
    if token.isdigit():
        v = int(token) - 1
    elif token.startswith("x") and token[1:].isdigit():
        v = int(token[1:]) - 1
    elif len(token) == 1 and token in string.ascii_lowercase:
        v = string.ascii_lowercase.index(token)
    else:
        raise ValueError(f"unknown variable name {token!r}")
    if not 0 <= v < n:
        raise ValueError(f"variable {token!r} outside 1..{n}")
    return v


def parse_permutations(text: str, n: int) -> list[Permutation]:
    perms = []
    for raw in text.splitlines():
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        perms.append(make_permutation([parse_variable(t, n) for t in raw.split(",")], n))
    return perms
