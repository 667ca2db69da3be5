"""ASCII staircase tables for CT formulas and structures.

Columns follow the structure's permutation; each tier's lines sit under the
three (or two) columns the tier covers, so the table descends like a staircase.
A leading mark column shows "-" for lines clearing would remove and twins
label letters for couples that take part in a forbidden adjoining.
"""
from __future__ import annotations

import itertools
import string
from typing import Iterable, Sequence, Union

from .couples import Ccs, CcsSystem
from .decomposition import CtFormula
from .formula import variable_names
from .triplets import Cts, CtsSystem, noncompatible_lines

LABEL_START = "vwxyz"


def label_names() -> Iterable[str]:
    """v, w, x, y, z, then aa, ab, ... (never runs out)."""
    yield from LABEL_START
    for size in itertools.count(2):
        for combo in itertools.product(string.ascii_lowercase, repeat=size):
            yield "".join(combo)


def assign_labels(structures: Sequence[Ccs]) -> list[dict[tuple[int, int, int], str]]:
    """One letter per forbidden pair, continuing across the structures in order."""
    names = label_names()
    return [{pair: next(names) for pair in sorted(s.forbidden)} for s in structures]


def _staircase(perm: Sequence[int], names: Sequence[str], width: int,
               rows: Iterable[tuple[int, int, str]]) -> str:
    """rows: (start position, value, mark) with ``width`` bits per value."""
    cell = max([len(names[v]) for v in perm] + [1])
    rows = list(rows)
    mark_w = max([len(m) for _, _, m in rows] + [0])
    pad = (mark_w + 1) if mark_w else 0
    out = [" " * pad + " ".join(names[v].rjust(cell) for v in perm)]
    for start, value, mark in rows:
        bits = format(value, f"0{width}b")
        cells = [" " * cell] * len(perm)
        for o, b in enumerate(bits):
            cells[start + o] = b.rjust(cell)
        prefix = mark.ljust(mark_w) + " " if mark_w else ""
        out.append((prefix + " ".join(cells)).rstrip())
    return "\n".join(out)


def _names(n: int, names: Sequence[str] | None) -> Sequence[str]:
    return list(names) if names is not None else variable_names(n)


def render_ctf(ctf: CtFormula, names: Sequence[str] | None = None) -> str:
    names = _names(ctf.n, names)
    rows = [(j, t, "") for j, tier in enumerate(ctf.tiers) for t in sorted(tier)]
    return _staircase(ctf.permutation, names, 3, rows)


def render_cts(cts: Cts, names: Sequence[str] | None = None, marks: bool = False) -> str:
    """With ``marks`` set, lines that clearing would remove are flagged "-"."""
    names = _names(cts.n, names)
    bad = noncompatible_lines(cts) if marks else set()
    rows = [(j, t, "-" if (j, t) in bad else "")
            for j, tier in enumerate(cts.tiers) for t in sorted(tier)]
    return _staircase(cts.permutation, names, 3, rows)


def render_ccs(ccs: Ccs, names: Sequence[str] | None = None,
               labels: dict[tuple[int, int, int], str] | None = None) -> str:
    names = _names(ccs.n, names)
    labels = labels if labels is not None else assign_labels([ccs])[0]
    rows = []
    for j, tier in enumerate(ccs.tiers):
        for c in sorted(tier):
            tags = sorted({lab for (i, x, y), lab in labels.items()
                           if (i == j and x == c) or (i + 1 == j and y == c)})
            rows.append((j, c, ",".join(tags)))
    return _staircase(ccs.permutation, names, 2, rows)


Structure = Union[CtFormula, Cts, Ccs]


def render_system(structures: Sequence[Structure] | CtsSystem | CcsSystem, prefix: str,
                  names: Sequence[str] | None = None, marks: bool = False) -> str:
    """All structures of a system, titled ``prefix1``, ``prefix2``, ..."""
    structures = list(structures)
    labels = assign_labels([s for s in structures if isinstance(s, Ccs)])
    blocks = []
    li = 0
    for i, s in enumerate(structures, start=1):
        if isinstance(s, Ccs):
            body = render_ccs(s, names, labels[li])
            li += 1
        elif isinstance(s, Cts):
            body = render_cts(s, names, marks)
        else:
            body = render_ctf(s, names)
        blocks.append(f"{prefix}{i}\n{body}")
    return "\n\n".join(blocks)
