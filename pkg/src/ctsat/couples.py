"""Compact couples structures (CCS) with twins-label constraints.

A couple is an int 0..3 (bit 1 = first position).  ``forbidden`` holds
``(tier, left, right)`` triples: adjoining ``left`` on ``tier`` with ``right``
on ``tier + 1`` would spell a triplet that the source CTS does not contain.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .decomposition import Permutation, make_permutation
from .triplets import Cts, EnumerationOverflow, to_base_order


def couple_bits(c: int) -> str:
    return format(c, "02b")


@dataclass(frozen=True)
class Ccs:
    permutation: Permutation
    tiers: tuple[frozenset, ...]
    forbidden: frozenset = frozenset()

    def __post_init__(self):
        n = len(self.permutation)
        if n < 2:
            raise ValueError("a couples structure needs n >= 2")
        make_permutation(self.permutation, n)
        if len(self.tiers) != n - 1:
            raise ValueError(f"expected {n - 1} tiers, got {len(self.tiers)}")
        tiers = tuple(frozenset(t) for t in self.tiers)
        object.__setattr__(self, "tiers", tiers)
        forbidden = frozenset(self.forbidden)
        for j, x, y in forbidden:
            if not 0 <= j < n - 2:
                raise ValueError(f"forbidden pair on tier {j} out of range")
            if x not in tiers[j] or y not in tiers[j + 1]:
                raise ValueError(f"forbidden pair {(j, x, y)} references an absent couple")
        object.__setattr__(self, "forbidden", forbidden)

    @property
    def n(self) -> int:
        return len(self.permutation)

    @property
    def empty(self) -> bool:
        return any(not t for t in self.tiers)

    @classmethod
    def from_bits(cls, permutation: Sequence[int], tiers: Sequence[Sequence[str]],
                  forbidden: Iterable[tuple[int, str, str]] = ()) -> "Ccs":
        return cls(tuple(permutation),
                   tuple(frozenset(int(b, 2) for b in t) for t in tiers),
                   frozenset((j, int(x, 2), int(y, 2)) for j, x, y in forbidden))

    def tier_bits(self) -> list[list[str]]:
        return [sorted(couple_bits(c) for c in tier) for tier in self.tiers]

    def forbidden_bits(self) -> list[tuple[int, str, str]]:
        return sorted((j, couple_bits(x), couple_bits(y)) for j, x, y in self.forbidden)

    def admissible(self, j: int, x: int, y: int) -> bool:
        """Whether couple ``x`` on tier ``j`` may adjoin ``y`` on tier ``j + 1``."""
        return (x & 1) == (y >> 1) and (j, x, y) not in self.forbidden

    def to_json(self) -> dict:
        return {
            "permutation": [v + 1 for v in self.permutation],
            "tiers": self.tier_bits(),
            "forbidden_pairs": [[j + 1, x, y] for j, x, y in self.forbidden_bits()],
        }


@dataclass(frozen=True)
class CcsSystem:
    structures: tuple[Ccs, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "structures", tuple(self.structures))
        for s in self.structures:
            if s.n != self.n:
                raise ValueError("all structures must act on the same n variables")

    @property
    def empty(self) -> bool:
        return any(s.empty for s in self.structures)

    def __len__(self):
        return len(self.structures)

    def __iter__(self):
        return iter(self.structures)

    def to_json(self) -> dict:
        return {"n": self.n, "structures": [s.to_json() for s in self.structures]}


def clear_couples(tiers: list[set], forbidden: frozenset | set) -> list[set]:
    """Arc consistency along the chain, honouring forbidden pairs.

    On a chain this leaves exactly the couples used by some admissible
    concatenation, so the coded set is unchanged.
    """
    last = len(tiers) - 1

    def ok(j, x):
        if j > 0 and not any((w & 1) == (x >> 1) and (j - 1, w, x) not in forbidden
                             for w in tiers[j - 1]):
            return False
        if j < last and not any((x & 1) == (y >> 1) and (j, x, y) not in forbidden
                                for y in tiers[j + 1]):
            return False
        return True

    work = list(range(len(tiers)))
    queued = set(work)
    while work:
        j = work.pop()
        queued.discard(j)
        keep = {x for x in tiers[j] if ok(j, x)}
        if keep != tiers[j]:
            tiers[j] = keep
            if not keep:
                return [set() for _ in tiers]
            for nb in (j - 1, j + 1):
                if 0 <= nb <= last and nb not in queued:
                    queued.add(nb)
                    work.append(nb)
    return tiers


def prune_forbidden(tiers: Sequence[Iterable[int]], forbidden) -> frozenset:
    return frozenset((j, x, y) for j, x, y in forbidden if x in tiers[j] and y in tiers[j + 1])


def cts_to_ccs(cts: Cts) -> Ccs:
    """Split every triplet into two couples and label the inadmissible adjoinings."""
    if cts.empty:
        raise ValueError("cannot transform an empty triplets structure")
    n = cts.n
    tiers = [set() for _ in range(n - 1)]
    for j, tier in enumerate(cts.tiers):
        for t in tier:
            tiers[j].add(t >> 1)
            tiers[j + 1].add(t & 3)
    forbidden = set()
    for j, tier in enumerate(cts.tiers):
        for x in tiers[j]:
            for y in tiers[j + 1]:
                if (x & 1) == (y >> 1) and ((x << 1) | (y & 1)) not in tier:
                    forbidden.add((j, x, y))
    tiers = clear_couples(tiers, forbidden)
    return Ccs(cts.permutation, tuple(tiers), prune_forbidden(tiers, forbidden))


def ccs_clear(ccs: Ccs) -> Ccs:
    tiers = clear_couples([set(t) for t in ccs.tiers], ccs.forbidden)
    return Ccs(ccs.permutation, tuple(tiers), prune_forbidden(tiers, ccs.forbidden))


def enumerate_sets(ccs: Ccs, honor_labels: bool = True, cap: int = 1 << 16) -> set[str]:
    """All length-n concatenations, as bit strings in base variable order."""
    if ccs.empty:
        return set()
    # sequences carry their last couple so labels can be checked at the next tier
    seqs = [(c, c) for c in ccs.tiers[0]]
    for j in range(1, len(ccs.tiers)):
        nxt = []
        for seq, last in seqs:
            for y in ccs.tiers[j]:
                if (last & 1) != (y >> 1):
                    continue
                if honor_labels and (j - 1, last, y) in ccs.forbidden:
                    continue
                nxt.append(((seq << 1) | (y & 1), y))
        seqs = nxt
        if len(seqs) > cap:
            raise EnumerationOverflow(f"more than {cap} coded sets")
    return {to_base_order(s, ccs.permutation) for s, _ in seqs}


def constants(ccs: Ccs) -> dict[int, int]:
    out = {}
    for i, v in enumerate(ccs.permutation):
        vals = set()
        if i > 0:
            vals.update(c & 1 for c in ccs.tiers[i - 1])
        if i < len(ccs.tiers):
            vals.update(c >> 1 for c in ccs.tiers[i])
        if len(vals) == 1:
            out[v] = vals.pop()
    return out


def ccs_from_json(data: dict) -> Ccs:
    return Ccs.from_bits([v - 1 for v in data["permutation"]], data["tiers"],
                         [(j - 1, x, y) for j, x, y in data.get("forbidden_pairs", [])])
