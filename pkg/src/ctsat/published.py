"""Worked examples from the original write-up, as machine-readable fixtures.

Tables live in ``fixtures/paper/tableNN.json`` with variables named a..h;
the small introductory examples are defined inline below.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .couples import Ccs, CcsSystem
from .decomposition import CtFormula
from .formula import TabularFormula, read_dimacs
from .triplets import Cts, CtsSystem

NAMES = "abcdefgh"

# (x1 | -x2 ... ) of the introduction: three clauses over five variables
INTRO_DIMACS = "p cnf 5 3\n-1 2 -4 0\n2 3 -5 0\n-3 -4 5 0\n"

# CT formula F1 of the triplets section and its structures Z* and Z
F1_TIERS = [["000", "001", "101", "111"], ["000", "100", "101", "111"], ["010", "100", "111"]]
Z_STAR_TIERS = [["010", "011", "100", "110"], ["001", "010", "011", "110"],
                ["000", "001", "011", "101", "110"]]
Z_TIERS = [["011", "100"], ["001", "110"], ["011", "101"]]
Z_SETS = {"01101", "10011"}

PERMUTATIONS = ["abcdefgh", "hgbeafcd", "dfachebg"]

JSS_TABLE4 = {"00101100", "00111100", "10101100", "10111100", "00111011"}
JSS_TABLE6 = {"00111011", "10111100"}


def perm_indices(names: str) -> tuple[int, ...]:
    return tuple(NAMES.index(c) for c in names)


@lru_cache(maxsize=None)
def load_table(number: int) -> dict:
    path = resources.files("ctsat") / "fixtures" / "paper" / f"table{number:02d}.json"
    return json.loads(path.read_text())


def table1_formula() -> TabularFormula:
    data = load_table(1)
    lines = [tuple((NAMES.index(c), b) for c, b in line) for line in data["lines"]]
    return TabularFormula(8, tuple(lines))


def intro_formula() -> TabularFormula:
    return read_dimacs(INTRO_DIMACS)


def f1_ctf() -> CtFormula:
    return CtFormula.from_bits(range(5), F1_TIERS)


def z_star() -> Cts:
    return Cts.from_bits(range(5), Z_STAR_TIERS)


def table_permutations(number: int) -> list[tuple[int, ...]]:
    return [perm_indices(s["permutation"]) for s in load_table(number)["structures"]]


def ct_formulas(number: int = 2) -> list[CtFormula]:
    return [CtFormula.from_bits(perm_indices(s["permutation"]), s["tiers"])
            for s in load_table(number)["structures"]]


def cts_system(number: int) -> CtsSystem:
    structs = [Cts.from_bits(perm_indices(s["permutation"]), s["tiers"])
               for s in load_table(number)["structures"]]
    return CtsSystem(tuple(structs), 8)


def ccs_system(number: int) -> CcsSystem:
    structs = []
    for s in load_table(number)["structures"]:
        pairs = [(j - 1, x, y) for j, x, y, _ in s["forbidden_pairs"]]
        structs.append(Ccs.from_bits(perm_indices(s["permutation"]), s["tiers"], pairs))
    return CcsSystem(tuple(structs), 8)


def cic_vectors(number: int = 5) -> list[str]:
    return [s["cic"] for s in load_table(number)["structures"]]
