"""Column inversion by CIC vectors, nil-set detection and the exhaustive CIC search.

A CIC vector is a bit string over the base variable order; bit 1 inverts
that variable's column in every structure, whatever its position there.
The exhaustive search is a small-n reference oracle, never a solving path.
"""
from __future__ import annotations

import itertools
from typing import Union

from .couples import Ccs, CcsSystem
from .formula import as_bits, bitstring
from .triplets import Cts, CtsSystem

Structure = Union[Cts, Ccs]


class OracleLimitError(ValueError):
    """Refusal to run an exponential oracle above its size cap."""


def _masks(perm, u, width):
    masks = []
    for s in range(len(perm) - width + 1):
        m = 0
        for o in range(width):
            m = (m << 1) | u[perm[s + o]]
        masks.append(m)
    return masks


def apply_cic(structure: Structure, u) -> Structure:
    u = as_bits(u, structure.n)
    if isinstance(structure, Cts):
        masks = _masks(structure.permutation, u, 3)
        return Cts(structure.permutation,
                   tuple(frozenset(t ^ m for t in tier) for tier, m in zip(structure.tiers, masks)))
    masks = _masks(structure.permutation, u, 2)
    tiers = tuple(frozenset(c ^ m for c in tier) for tier, m in zip(structure.tiers, masks))
    forbidden = frozenset((j, x ^ masks[j], y ^ masks[j + 1]) for j, x, y in structure.forbidden)
    return Ccs(structure.permutation, tiers, forbidden)


def has_nil_set(structure: Structure) -> bool:
    if structure.empty or not all(0 in tier for tier in structure.tiers):
        return False
    if isinstance(structure, Ccs):
        return not any(x == 0 and y == 0 for _, x, y in structure.forbidden)
    return True


def nil_after_cic(structure: Structure, u) -> bool:
    """``has_nil_set(apply_cic(structure, u))`` without building the copy.

    Inverting by ``u`` maps a line to zero exactly when the line equals the
    projection of ``u`` onto the tier's window.
    """
    u = as_bits(u, structure.n)
    width = 3 if isinstance(structure, Cts) else 2
    masks = _masks(structure.permutation, u, width)
    if not all(m in tier for m, tier in zip(masks, structure.tiers)):
        return False
    if isinstance(structure, Ccs):
        return not any((j, masks[j], masks[j + 1]) in structure.forbidden
                       for j in range(len(masks) - 1))
    return True


def full_search_jss(system: Union[CtsSystem, CcsSystem], n_limit: int = 20) -> set[str]:
    """Every CIC vector under which all structures show a nil-set.

    Each such vector is itself a joint satisfying set in base order.
    """
    n = system.n
    if n > n_limit:
        raise OracleLimitError(f"n={n} exceeds the CIC search limit {n_limit}")
    if system.empty:
        return set()
    found = set()
    for u in itertools.product((0, 1), repeat=n):
        if all(nil_after_cic(s, u) for s in system.structures):
            found.add(bitstring(u))
    return found
